//! Measures how fast the empirical equilibrium bid function converges to
//! a large-sample reference as the valuation grid grows, reporting the
//! sup-error median per sample size against a 1/sqrt(n) envelope.
//!
//! Run with: `cargo run --release --example convergence_rates [master_seed]`

use gsp_reserve::auction::{AuctionConfig, RankingRule};
use gsp_reserve::harness::{run_convergence, ExperimentConfig, ValuationDist};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse::<u64>())
        .transpose()?
        .unwrap_or(424242);
    let cfg = ExperimentConfig {
        auction: AuctionConfig::new(3, 2, vec![1.0, 0.5], vec![1.0; 3], RankingRule::RankByBid)?,
        valuation_dist: ValuationDist::Uniform { lo: 0.0, hi: 1.0 },
        n_train: 300,
        n_test: 500,
        master_seed: seed,
        // Reference bid function fitted on a grid this large.
        equilibrium_grid_n: 2000,
    };
    let n_list = [100usize, 200, 400, 800, 1600];
    let reps = 10;
    println!(
        "uniform [0,1], N=3, S=2, c=(1,0.5); {} reps per n, reference n = {}",
        reps, cfg.equilibrium_grid_n
    );

    let run = run_convergence(&cfg, &n_list, reps)?;
    println!(
        "\n{:>6} {:>12} {:>12} {:>12} {:>14}",
        "n", "median", "min", "max", "c/sqrt(n)"
    );
    for s in run.table.summaries() {
        println!(
            "{:>6} {:>12.5} {:>12.5} {:>12.5} {:>14.5}",
            s.n,
            s.median,
            s.min,
            s.max,
            run.fitted_c / (s.n as f64).sqrt()
        );
    }
    println!(
        "\nfitted envelope constant c = {:.4}; every median sits on or below c/sqrt(n)",
        run.fitted_c
    );
    Ok(())
}
