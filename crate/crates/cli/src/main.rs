use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nue_cli::{calibrate_map, run, ExperimentConfig, RunError};
use nue_core::maps::{list_families, MapConfig};

#[derive(Parser)]
#[command(name = "nue", version, about = "Hyperbolic-time and stochastic-stability experiments")]
struct Cli {
    /// Worker threads for Monte Carlo sampling.
    #[arg(long, global = true, env = "NUE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path prefix.
        #[arg(long)]
        out: Option<String>,
    },
    /// Calibrate (sigma, delta, gamma) and the perturbation constants.
    Calibrate {
        /// Map config as JSON, e.g. '{"family":"quadratic","params":{"a":2}}'.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the built-in map families.
    ListMaps,
}

fn execute(cli: Cli) -> Result<(), RunError> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if seed.is_some() {
                cfg.seed = seed;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let res = run(cfg)?;
            println!("{}", res.manifest_path.display());
        }
        Command::Calibrate { map, seed } => {
            let cfg: MapConfig = serde_json::from_str(&map).map_err(|e| RunError::Config(e.to_string()))?;
            let report = calibrate_map(&cfg, seed)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        Command::ListMaps => {
            for (name, desc) in list_families() {
                println!("{name}\t{desc}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({ "error": e.record() });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
