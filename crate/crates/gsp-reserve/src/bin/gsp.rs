//! Thin command-line front end over the `gsp_reserve` library.
//!
//! Every subcommand is a direct call into a library driver plus file
//! output; no experiment logic lives here. All outputs are pure
//! functions of the effective configuration, so rerunning a subcommand
//! with the same config and seed reproduces byte-identical files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gsp_reserve::error::{Error, Result};
use gsp_reserve::harness::io::{
    load_dataset, write_bid_function, write_convergence, write_dataset, write_histograms,
    write_record, write_table1,
};
use gsp_reserve::harness::{
    fit_bid_function, run_convergence, run_histograms, run_learn, run_table1, simulate_auctions,
    ExperimentConfig, LearnMethod,
};

/// Master seed used when neither `--config` nor `--seed` supplies one.
const DEFAULT_SEED: u64 = 424242;

#[derive(Parser)]
#[command(
    name = "gsp",
    version,
    about = "Reserve-price learning experiments for generalized second-price auctions"
)]
struct Cli {
    /// Experiment configuration JSON; defaults to the built-in benchmark.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed, overriding the one in the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Directory that receives all output files.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the training dataset and write it as CSV plus a
    /// provenance sidecar.
    Simulate,
    /// Train one reserve learner and write its result record.
    Learn {
        /// Which learner to train.
        #[arg(long, value_enum)]
        method: Method,
        /// Train on an existing dataset CSV (provenance is verified
        /// against the effective configuration) instead of simulating.
        #[arg(long, value_name = "CSV")]
        data: Option<PathBuf>,
    },
    /// Fit the equilibrium bid function and write its grid as CSV.
    Equilibrium,
    /// Run the equilibrium convergence sweep and write per-rep rows
    /// plus a summary.
    Convergence {
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800,1600")]
        n_list: Vec<usize>,
        /// Replications per sample size.
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
    /// Run the full train/test revenue comparison and write the table.
    Table1,
    /// Recover valuations three ways and write comparison histograms.
    Histograms,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Breakpoint sweep on the empirical revenue loss.
    Sweep,
    /// Density pipeline: invert bids, fit the CDF/PDF, solve the fixed point.
    Density,
}

impl From<Method> for LearnMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Sweep => LearnMethod::Sweep,
            Method::Density => LearnMethod::Density,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// Loads the effective configuration: `--config` JSON if given, the
/// built-in benchmark otherwise, with `--seed` taking precedence.
fn effective_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::benchmark(cli.seed.unwrap_or(DEFAULT_SEED)),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = effective_config(cli)?;
    std::fs::create_dir_all(&cli.out)?;
    let out = cli.out.as_path();

    match &cli.command {
        Command::Simulate => simulate(&cfg, out),
        Command::Learn { method, data } => learn(&cfg, (*method).into(), data.as_deref(), out),
        Command::Equilibrium => equilibrium(&cfg, out),
        Command::Convergence { n_list, reps } => convergence(&cfg, n_list, *reps, out),
        Command::Table1 => table1(&cfg, out),
        Command::Histograms => histograms(&cfg, out),
    }
}

fn simulate(cfg: &ExperimentConfig, out: &Path) -> Result<ExitCode> {
    let sim = simulate_auctions(cfg, cfg.n_train, "train")?;
    let provenance = write_dataset(out, "train", &sim.dataset)?;
    println!(
        "wrote {} auctions x {} bidders to {}",
        sim.dataset.auctions.len(),
        cfg.auction.n_bidders,
        out.join("train.csv").display()
    );
    println!("config hash {}", provenance.config_hash);
    Ok(ExitCode::SUCCESS)
}

fn learn(
    cfg: &ExperimentConfig,
    method: LearnMethod,
    data: Option<&Path>,
    out: &Path,
) -> Result<ExitCode> {
    let train = match data {
        Some(path) => load_dataset(path, Some(cfg))?,
        None => simulate_auctions(cfg, cfg.n_train, "train")?.dataset,
    };
    let record = run_learn(cfg, method, &train)?;
    let path = write_record(out, &record)?;
    println!(
        "{}: reserve {:.6}, mean test revenue {:.6} (se {:.6})",
        record.method, record.reserve, record.mean_test_revenue, record.std_error
    );
    println!("wrote {}", path.display());
    if record.is_root == Some(false) {
        eprintln!("error: fixed-point equation r f(r) = 1 - F(r) has no root in the value range");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn equilibrium(cfg: &ExperimentConfig, out: &Path) -> Result<ExitCode> {
    let beta = fit_bid_function(cfg)?;
    write_bid_function(out, &beta)?;
    let d = &beta.diagnostics;
    println!(
        "fit bid function on {} grid points; negative bids {}, monotonicity violations {}",
        beta.grid_values.len(),
        d.negative_bids,
        d.monotonicity_violations
    );
    println!("wrote {}", out.join("bid_function.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn convergence(
    cfg: &ExperimentConfig,
    n_list: &[usize],
    reps: usize,
    out: &Path,
) -> Result<ExitCode> {
    let run = run_convergence(cfg, n_list, reps)?;
    write_convergence(out, &run)?;
    for summary in run.table.summaries() {
        println!(
            "n {:>6}: median sup-error {:.6} (min {:.6}, max {:.6})",
            summary.n, summary.median, summary.min, summary.max
        );
    }
    println!("fitted envelope constant {:.6}", run.fitted_c);
    println!("wrote {}", out.join("convergence.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn table1(cfg: &ExperimentConfig, out: &Path) -> Result<ExitCode> {
    let run = run_table1(cfg)?;
    write_table1(out, &run)?;
    for record in [&run.discriminative, &run.density] {
        println!(
            "{:<16} reserve {:.4}  revenue {:.4} +/- {:.4}",
            record.method, record.reserve, record.mean_test_revenue, record.std_error
        );
    }
    println!(
        "{:<16} reserve {:.4}  revenue {:.4}",
        "oracle", run.oracle_reserve, run.oracle_revenue
    );
    println!("wrote {}", out.join("table1.json").display());
    if run.density.is_root == Some(false) {
        eprintln!("error: density fixed point has no root; reserve is a flagged fallback");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn histograms(cfg: &ExperimentConfig, out: &Path) -> Result<ExitCode> {
    let run = run_histograms(cfg)?;
    write_histograms(out, &run)?;
    println!("KS(true, sne)     = {:.6}", run.ks_sne);
    println!("KS(true, density) = {:.6}", run.ks_density);
    println!("wrote {}", out.join("histograms_summary.json").display());
    Ok(ExitCode::SUCCESS)
}
