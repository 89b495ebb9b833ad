//! Valuation recovery under the symmetric-Nash-equilibrium assumption:
//! the baseline that treats observed bids as a full-information SNE and
//! solves the boundary conditions with equality.
//!
//! This is the comparison method, kept deliberately simple: experiments
//! show it does *not* recover the valuation distribution when bids actually
//! come from a Bayes-Nash equilibrium, which is the point of contrasting it
//! with the density pipeline in [`crate::density`].

use crate::auction::AuctionConfig;
use crate::density::{InvertedBid, RecoveredValuations};
use crate::error::{Error, Result};

use super::simulate::Dataset;

/// Recovers one valuation per occupied slot `s ≤ S − 1` and auction by the
/// equal-SNE inversion
/// `v^(s) = (c_s·b^(s+1) − c_{s+1}·b^(s+2)) / (c_s − c_{s+1})`,
/// where `b^(1) ≥ … ≥ b^(N)` are the auction's bids sorted descending and
/// `b^(N+1) = 0`.
///
/// The last slot has no `c_{s+1} < c_s` successor inside the pricing
/// recursion, so a single-slot auction leaves nothing to invert and is
/// rejected. Recovered values pair `v^(s)` with the bid of the slot's
/// occupant, `b^(s)`.
pub fn sne_recover(dataset: &Dataset, config: &AuctionConfig) -> Result<RecoveredValuations> {
    config.validate()?;
    if config.n_slots < 2 {
        return Err(Error::InvalidConfig(
            "SNE inversion needs at least two slots; S = 1 bids pin no equality conditions".into(),
        ));
    }
    let c = &config.position_factors;
    let mut entries = Vec::with_capacity(dataset.auctions.len() * (config.n_slots - 1));
    for auction in &dataset.auctions {
        if auction.len() != config.n_bidders {
            return Err(Error::DimensionMismatch {
                what: "bids",
                expected: config.n_bidders,
                got: auction.len(),
            });
        }
        let mut sorted = auction.bids.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        sorted.push(0.0); // b^(N+1) = 0
        for s in 1..config.n_slots {
            // c is strictly decreasing (validated), so the divisor is > 0.
            let v = (c[s - 1] * sorted[s] - c[s] * sorted[s + 1]) / (c[s - 1] - c[s]);
            entries.push(InvertedBid {
                bid: sorted[s - 1],
                valuation: v,
                floored: false,
            });
        }
    }
    RecoveredValuations::new(entries)
}
