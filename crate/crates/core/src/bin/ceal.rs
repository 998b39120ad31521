use std::path::PathBuf;
use std::process::ExitCode;

use ceal::harness::{
    annotation_savings, run_experiment, savings_target, sweep_sensitivity, sweep_spread,
    write_outputs, write_sweep, ExperimentSpec,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ceal",
    version,
    about = "Cost-effective active learning experiments and annotation server"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every variant of a spec file and write curves, traces and savings.
    Run {
        #[arg(long)]
        spec: PathBuf,
        /// Output directory; overrides `output` in the spec.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vary delta0 and the decay rate one at a time and report final accuracy.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated delta0 values; defaults to 50%..150% of the spec's.
        #[arg(long, value_delimiter = ',')]
        delta0: Vec<f64>,
        /// Comma-separated decay rates; defaults to 0..2x the spec's.
        #[arg(long, value_delimiter = ',')]
        dr: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the annotation server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory with the annotation UI bundle.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> ceal::Result<()> {
    match cli.command {
        Command::Run { spec, out } => {
            let spec = ExperimentSpec::from_file(&spec)?;
            let result = run_experiment(&spec)?;
            let dir = out.unwrap_or_else(|| spec.output.clone());
            write_outputs(&spec, &result, &dir)?;
            if let Some(target) = savings_target(&spec, &result) {
                println!("target accuracy {target:.4}");
                for (variant, pct) in annotation_savings(&result.curves, target) {
                    match pct {
                        Some(p) => println!("{variant:<12} {:>6.1}% labeled", 100.0 * p),
                        None => println!("{variant:<12} not reached"),
                    }
                }
            }
            println!("wrote {}", dir.display());
        }
        Command::Sweep {
            spec,
            mut delta0,
            mut dr,
            out,
        } => {
            let spec = ExperimentSpec::from_file(&spec)?;
            let base = spec.ceal.schedule;
            if delta0.is_empty() {
                delta0 = [0.5, 0.75, 1.0, 1.25, 1.5]
                    .iter()
                    .map(|f| f * base.delta0)
                    .collect();
            }
            if dr.is_empty() {
                dr = [0.0, 0.5, 1.0, 1.5, 2.0]
                    .iter()
                    .map(|f| f * base.decay_rate)
                    .collect();
            }
            let cells = sweep_sensitivity(&spec, &delta0, &dr)?;
            for c in &cells {
                println!(
                    "delta0 {:<8} dr {:<8} final {:.4} ± {:.4}  curve mean {:.4}",
                    c.delta0,
                    c.decay_rate,
                    c.mean_final_accuracy,
                    c.std_final_accuracy,
                    c.mean_curve_accuracy
                );
            }
            println!("spread across cells {:.4}", sweep_spread(&cells));
            let path = out.unwrap_or_else(|| spec.output.clone()).join("sweep.csv");
            write_sweep(&cells, &path)?;
            println!("wrote {}", path.display());
        }
        Command::Serve { port, ui_dir } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(ceal::service::serve(port, ui_dir))?;
        }
    }
    Ok(())
}
