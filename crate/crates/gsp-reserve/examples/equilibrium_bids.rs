//! Solves the discrete equilibrium bid system on an empirical valuation
//! grid and prints the fitted bid function.
//!
//! With a single slot the generalized second-price auction collapses to
//! a second-price auction, so equilibrium bids are (nearly) truthful;
//! adding a second slot makes bidders shade. Both cases are shown for
//! uniform [0,1] valuations.
//!
//! Run with: `cargo run --release --example equilibrium_bids [master_seed]`

use gsp_reserve::auction::{AuctionConfig, RankingRule};
use gsp_reserve::equilibrium::{bid_at, build_system, solve};
use gsp_reserve::harness::{sample_valuations, ValuationDist};
use gsp_reserve::seed::SeedTree;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse::<u64>())
        .transpose()?
        .unwrap_or(424242);
    let dist = ValuationDist::Uniform { lo: 0.0, hi: 1.0 };
    let sample = sample_valuations(&dist, 500, &SeedTree::new(seed).child("grid"))?;

    // One slot: second-price auction, truthful equilibrium.
    let single = AuctionConfig::new(3, 1, vec![1.0], vec![1.0; 3], RankingRule::RankByBid)?;
    let beta1 = solve(&build_system(&sample, &single)?)?;
    let max_gap = beta1
        .grid_values
        .iter()
        .zip(&beta1.grid_bids)
        .map(|(v, b)| (v - b).abs())
        .fold(0.0f64, f64::max);
    println!("S=1 (second-price): max |beta(v) - v| over the grid = {max_gap:.5}");

    // Two slots with c = (1, 0.5): bids shade below value.
    let double = AuctionConfig::new(3, 2, vec![1.0, 0.5], vec![1.0; 3], RankingRule::RankByBid)?;
    let beta2 = solve(&build_system(&sample, &double)?)?;
    println!("S=2, c=(1,0.5): diagnostics {:?}", beta2.diagnostics);

    println!("\n{:>6} {:>10} {:>10}", "value", "bid (S=1)", "bid (S=2)");
    for q in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
        println!(
            "{q:>6.2} {:>10.5} {:>10.5}",
            bid_at(&beta1, q),
            bid_at(&beta2, q)
        );
    }

    // Shading monotonicity spot check: the two-slot bid never exceeds the
    // one-slot (truthful) bid anywhere on the shared grid.
    let shaded = beta1
        .grid_bids
        .iter()
        .zip(&beta2.grid_bids)
        .all(|(b1, b2)| b2 <= &(b1 + 1e-9));
    println!("\ntwo-slot bids never exceed single-slot bids: {shaded}");
    Ok(())
}
