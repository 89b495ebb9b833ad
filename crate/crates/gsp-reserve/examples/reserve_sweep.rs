//! Learns a revenue-maximizing uniform reserve from bid data with the
//! breakpoint sweep, cross-checks it against brute-force enumeration,
//! and prints the generalization bound at several sample sizes.
//!
//! Run with: `cargo run --release --example reserve_sweep [master_seed]`

use gsp_reserve::harness::{simulate_auctions, ExperimentConfig};
use gsp_reserve::sweep::{brute_force, extract_breakpoints, generalization_bound, minimize};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse::<u64>())
        .transpose()?
        .unwrap_or(424242);
    let cfg = ExperimentConfig::benchmark(seed);
    let train = simulate_auctions(&cfg, cfg.n_train, "train")?;
    println!(
        "simulated {} auctions with {} bidders (seed {seed})",
        train.dataset.auctions.len(),
        cfg.auction.n_bidders
    );

    let breakpoints = extract_breakpoints(&train.dataset.auctions, &cfg.auction)?;
    println!("extracted {} breakpoint pairs", breakpoints.pairs.len());

    let fast = minimize(&breakpoints)?;
    let slow = brute_force(&breakpoints)?;
    println!(
        "\nsweep:       reserve {:.6}, total loss {:.6} ({} candidates)",
        fast.reserve, fast.loss_value, fast.candidates_evaluated
    );
    println!(
        "brute force: reserve {:.6}, total loss {:.6}",
        slow.reserve, slow.loss_value
    );
    assert_eq!(fast.reserve.to_bits(), slow.reserve.to_bits());
    assert_eq!(fast.loss_value.to_bits(), slow.loss_value.to_bits());
    println!("sweep and brute force agree bit-for-bit");

    // The uniform-deviation bound shrinks like 1/sqrt(n); the constants
    // come from the loss range (sum of position factors) and the
    // smallest click-through rate.
    let m_sum_c: f64 = cfg.auction.position_factors.iter().sum();
    let m_min_e = cfg
        .auction
        .ctr
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    println!("\ngeneralization bound at delta = 0.05:");
    println!("  {:>7}  {:>10}", "n", "bound");
    for n in [100, 1_000, 10_000, 100_000] {
        let bound = generalization_bound(m_sum_c, m_min_e, n, 0.05)?;
        println!("  {n:>7}  {bound:>10.5}");
    }
    Ok(())
}
