use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sgdm_lab::harness::{self, Experiment, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "sgdm-lab", version, about = "Run SGDm / Langevin experiments")]
struct Args {
    /// One of: simulate, rate-w1, rate-tv, contraction, drift-check,
    /// schedule-check, stationary-check, one-step-check, generalization,
    /// moment-envelope.
    experiment: String,
    /// JSON overlay on the experiment preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Print the resolved config and exit.
    #[arg(long)]
    print_config: bool,
}

fn run(args: Args) -> sgdm_lab::Result<bool> {
    let experiment = Experiment::parse(&args.experiment)?;
    let mut patch = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => serde_json::json!({}),
    };
    if let Some(seed) = args.seed {
        harness::config::merge(&mut patch, serde_json::json!({ "seed": seed }));
    }
    let cfg = ExperimentConfig::from_value(experiment, patch)?;
    if args.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(true);
    }
    let out = args
        .out
        .ok_or_else(|| sgdm_lab::Error::Argument("--out is required".into()))?;

    #[cfg(feature = "parallel")]
    {
        if let Some(threads) = args.threads.filter(|&t| t > 0) {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| sgdm_lab::Error::Argument(e.to_string()))?;
        }
    }
    #[cfg(feature = "parallel")]
    let used = rayon::current_num_threads();
    #[cfg(not(feature = "parallel"))]
    let used = 1;

    let (result, manifest) = harness::run_to_dir(&cfg, &out, used)?;
    for v in &result.verdicts {
        println!("{:<24} {:?}", v.name, v.status);
    }
    println!("config hash {}", manifest.config_hash);
    println!("outputs in {}", out.display());
    Ok(result.all_pass())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
