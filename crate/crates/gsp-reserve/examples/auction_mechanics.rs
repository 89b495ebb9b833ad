//! Walks through one generalized second-price auction by hand: quality
//! scores, slot allocation, per-slot payments, revenue, and the two loss
//! functions — then shows that charging every bidder the CTR-scaled
//! uniform reserve `r_i = rho / e_i` makes the cheap simplified loss
//! agree with the full auction loss.
//!
//! Run with: `cargo run --example auction_mechanics`

use gsp_reserve::auction::{
    loss, quality_scores, rank, revenue, simplified_loss, AuctionConfig, BidProfile, RankingRule,
    ReserveVector,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Three slots, four bidders, heterogeneous click-through rates.
    let config = AuctionConfig::new(
        4,
        3,
        vec![1.0, 0.5, 0.25],
        vec![0.9, 0.6, 0.8, 0.5],
        RankingRule::RankByRevenue,
    )?;
    let bids = BidProfile::new(vec![1.2, 2.0, 0.9, 1.5])?;
    let rho = 0.6;
    // The CTR-scaled uniform reserve: bidder i faces rho / e_i.
    let reserves = ReserveVector::new(config.ctr.iter().map(|e| rho / e).collect())?;

    println!("position factors c = {:?}", config.position_factors);
    println!("click-through   e = {:?}", config.ctr);
    println!("bids            b = {:?}", bids.bids);
    println!("reserves        r = rho/e with rho = {rho}");

    let scores = quality_scores(&config, &reserves, &bids)?;
    println!("\nquality scores q_i = e_i * b_i * 1{{b_i >= r_i}}:");
    for (i, q) in scores.iter().enumerate() {
        println!("  bidder {i}: q = {q:.4}");
    }

    let alloc = rank(&scores, config.n_slots, 0);
    println!("\nslot allocation (descending score):");
    for (s, &i) in alloc.ranked_bidders.iter().take(config.n_slots).enumerate() {
        println!("  slot {} -> bidder {} (score {:.4})", s + 1, i, scores[i]);
    }

    let rev = revenue(&config, &reserves, &bids, 0)?;
    let full = loss(&config, &reserves, &bids, 0)?;
    println!("\nrevenue  = {rev:.6}");
    println!("full loss = {full:.6} (negated revenue)");

    // With r_i = rho / e_i the simplified loss — a function of the single
    // scalar rho — equals the full loss exactly.
    let simple = simplified_loss(rho, &config, &bids);
    println!("simplified loss at rho = {simple:.6}");
    assert!((full - simple).abs() < 1e-12);

    // Sweep rho over a coarse range: revenue is piecewise linear in rho,
    // rising while reserves bind as prices and collapsing once they
    // exclude the winners.
    println!("\nrho     revenue(rho)");
    for step in 0..=8 {
        let rho = 0.25 * step as f64;
        // + 0.0 folds the negative zero that appears once everyone is excluded.
        println!(
            "  {rho:.2}  {:+.4}",
            -simplified_loss(rho, &config, &bids) + 0.0
        );
    }
    Ok(())
}
