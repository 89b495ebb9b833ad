//! GSP auction mechanics: configuration, ranking, revenue, and losses.
//!
//! A position auction sells `n_slots` slots to `n_bidders` bidders. Bidder `i`
//! is assigned the quality score `q_i = e_i·b_i·1{b_i ≥ r_i}` (rank-by-revenue)
//! or `b_i·1{b_i ≥ r_i}` (rank-by-bid), bidders are ranked by score, and the
//! bidder at slot `s` pays the smallest bid that would have kept its slot:
//! `max(r, next score / own CTR)`. Seller revenue weights each slot's payment
//! by its position factor `c_s`.
//!
//! [`simplified_loss`] is the scalar-reserve specialization used by the
//! learning algorithms: when reserves have the form `r_i = ρ/e_i`, the
//! (negated) revenue collapses to a piecewise-linear function of `ρ` alone.

use crate::error::{Error, Result};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// How bidders are ordered: by raw bid, or by CTR-weighted bid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankingRule {
    /// Rank by bid alone; CTRs are treated as 1 everywhere (scores, payments,
    /// and reserve scaling alike).
    RankByBid,
    /// Rank by expected revenue `e_i·b_i`.
    RankByRevenue,
}

/// Static description of one auction environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuctionConfig {
    /// Number of bidders N.
    pub n_bidders: usize,
    /// Number of slots S, `1 ≤ S ≤ N`.
    pub n_slots: usize,
    /// Position factors `c_1 > c_2 > … > c_S > 0`, each in (0, 1].
    pub position_factors: Vec<f64>,
    /// Click-through rates `e_1..e_N`, each in (0, 1].
    pub ctr: Vec<f64>,
    pub ranking_rule: RankingRule,
}

impl AuctionConfig {
    /// Builds a config and checks every structural invariant.
    pub fn new(
        n_bidders: usize,
        n_slots: usize,
        position_factors: Vec<f64>,
        ctr: Vec<f64>,
        ranking_rule: RankingRule,
    ) -> Result<Self> {
        let config = AuctionConfig {
            n_bidders,
            n_slots,
            position_factors,
            ctr,
            ranking_rule,
        };
        config.validate()?;
        Ok(config)
    }

    /// Re-checks invariants; call after deserializing a config from disk.
    pub fn validate(&self) -> Result<()> {
        if self.n_bidders == 0 {
            return Err(Error::InvalidConfig("n_bidders must be ≥ 1".into()));
        }
        if self.n_slots == 0 || self.n_slots > self.n_bidders {
            return Err(Error::InvalidConfig(format!(
                "n_slots must satisfy 1 ≤ S ≤ N, got S={} N={}",
                self.n_slots, self.n_bidders
            )));
        }
        if self.position_factors.len() != self.n_slots {
            return Err(Error::DimensionMismatch {
                what: "position_factors",
                expected: self.n_slots,
                got: self.position_factors.len(),
            });
        }
        if self.ctr.len() != self.n_bidders {
            return Err(Error::DimensionMismatch {
                what: "ctr",
                expected: self.n_bidders,
                got: self.ctr.len(),
            });
        }
        for (s, &c) in self.position_factors.iter().enumerate() {
            if !c.is_finite() || c <= 0.0 || c > 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "position factor c_{} = {c} outside (0, 1]",
                    s + 1
                )));
            }
            if s + 1 < self.n_slots && self.position_factors[s + 1] >= c {
                return Err(Error::InvalidConfig(format!(
                    "position factors must be strictly decreasing at slot {}",
                    s + 1
                )));
            }
        }
        for (i, &e) in self.ctr.iter().enumerate() {
            if !e.is_finite() || e <= 0.0 || e > 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "ctr e_{} = {e} outside (0, 1]",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// CTR used in scoring and payments: under rank-by-bid all CTRs are 1.
    pub fn effective_ctr(&self, bidder: usize) -> f64 {
        match self.ranking_rule {
            RankingRule::RankByBid => 1.0,
            RankingRule::RankByRevenue => self.ctr[bidder],
        }
    }

    /// Σ_s c_s, the capacity constant 𝔐 of the generalization bound.
    pub fn position_factor_sum(&self) -> f64 {
        self.position_factors.iter().sum()
    }

    /// min_i e_i (effective), the constant 𝔪 of the generalization bound.
    pub fn min_effective_ctr(&self) -> f64 {
        (0..self.n_bidders)
            .map(|i| self.effective_ctr(i))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The N bids submitted in one auction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BidProfile {
    pub bids: Vec<f64>,
}

impl BidProfile {
    /// Wraps a bid vector, rejecting negative or non-finite entries.
    pub fn new(bids: Vec<f64>) -> Result<Self> {
        for (i, &b) in bids.iter().enumerate() {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "bid b_{} = {b} must be finite and ≥ 0",
                    i + 1
                )));
            }
        }
        Ok(BidProfile { bids })
    }

    pub fn len(&self) -> usize {
        self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty()
    }
}

/// Per-bidder reserve prices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReserveVector {
    pub reserves: Vec<f64>,
}

impl ReserveVector {
    /// Wraps a reserve vector, rejecting negative or non-finite entries.
    pub fn new(reserves: Vec<f64>) -> Result<Self> {
        for (i, &r) in reserves.iter().enumerate() {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "reserve r_{} = {r} must be finite and ≥ 0",
                    i + 1
                )));
            }
        }
        Ok(ReserveVector { reserves })
    }

    /// All-zero reserves (no floor).
    pub fn zero(n_bidders: usize) -> Self {
        ReserveVector {
            reserves: vec![0.0; n_bidders],
        }
    }

    /// The same reserve for every bidder.
    pub fn uniform(r: f64, n_bidders: usize) -> Result<Self> {
        ReserveVector::new(vec![r; n_bidders])
    }
}

/// Outcome of ranking one auction's quality scores.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    /// Bidder indices in descending score order (all N of them; the first
    /// `n_slots` are the slot winners π(1)..π(S), 0-indexed bidders).
    pub ranked_bidders: Vec<usize>,
    /// Scores sorted descending, padded with a trailing `q^(N+1) = 0`.
    pub scores: Vec<f64>,
    /// Number of slots the allocation was built for.
    pub n_slots: usize,
}

impl Allocation {
    /// The slot winners π(1)..π(S) as 0-indexed bidder ids.
    pub fn slot_to_bidder(&self) -> &[usize] {
        &self.ranked_bidders[..self.n_slots]
    }
}

/// Quality scores `q_i = e_i·b_i·1{b_i ≥ r_i}` (with `e_i = 1` under rank-by-bid).
pub fn quality_scores(
    config: &AuctionConfig,
    reserves: &ReserveVector,
    bids: &BidProfile,
) -> Result<Vec<f64>> {
    check_dims(config, reserves, bids)?;
    Ok((0..config.n_bidders)
        .map(|i| {
            let b = bids.bids[i];
            if b >= reserves.reserves[i] {
                config.effective_ctr(i) * b
            } else {
                0.0
            }
        })
        .collect())
}

/// Ranks bidders by score descending; ties are broken by a uniform shuffle
/// derived from `tie_seed` (each tied ordering is equally likely over seeds).
pub fn rank(scores: &[f64], n_slots: usize, tie_seed: u64) -> Allocation {
    let n = scores.len();
    debug_assert!(n_slots <= n, "more slots than bidders");
    // Independent random priorities order each tied group uniformly.
    let mut rng = ChaCha12Rng::seed_from_u64(tie_seed);
    let priorities: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then(priorities[a].cmp(&priorities[b]))
    });
    let mut sorted_scores: Vec<f64> = ranked.iter().map(|&i| scores[i]).collect();
    sorted_scores.push(0.0); // q^(N+1) = 0 keeps the slot-S payment term well formed
    Allocation {
        ranked_bidders: ranked,
        scores: sorted_scores,
        n_slots,
    }
}

/// Seller revenue of one auction:
/// `Rev(r,b) = Σ_s c_s ( q^(s+1)/e^(s)·1{q^(s+1) ≥ e^(s)·r^(s)} + r^(s)·1{q^(s+1) < e^(s)·r^(s) ≤ q^(s)} )`.
///
/// Slots whose winner has score 0 (no qualifying bidder) contribute 0.
pub fn revenue(
    config: &AuctionConfig,
    reserves: &ReserveVector,
    bids: &BidProfile,
    tie_seed: u64,
) -> Result<f64> {
    let q = quality_scores(config, reserves, bids)?;
    let alloc = rank(&q, config.n_slots, tie_seed);
    let mut total = 0.0;
    for s in 0..config.n_slots {
        let bidder = alloc.ranked_bidders[s];
        let e_s = config.effective_ctr(bidder);
        let r_s = reserves.reserves[bidder];
        let q_s = alloc.scores[s];
        let q_next = alloc.scores[s + 1];
        let payment = if q_next >= e_s * r_s && q_s > 0.0 {
            q_next / e_s
        } else if q_next < e_s * r_s && e_s * r_s <= q_s {
            r_s
        } else {
            0.0
        };
        total += config.position_factors[s] * payment;
    }
    Ok(total)
}

/// Negated revenue; the quantity both learning algorithms minimize.
pub fn loss(
    config: &AuctionConfig,
    reserves: &ReserveVector,
    bids: &BidProfile,
    tie_seed: u64,
) -> Result<f64> {
    Ok(-revenue(config, reserves, bids, tie_seed)?)
}

/// Simplified scalar-reserve loss of one auction:
/// `L̃(r,b) = −Σ_s (c_s/e^(s)) ( q̃^(s+1)·1{q̃^(s+1) ≥ r} + r·1{q̃^(s+1) < r ≤ q̃^(s)} )`
/// with `q̃_i = e_i·b_i` (no reserve indicator) sorted descending.
///
/// Equals `loss` at reserves `r_i = r/e_i` for tie-free profiles. Score ties
/// are broken deterministically by bidder index; they are measure-zero under
/// continuous sampling.
pub fn simplified_loss(r: f64, config: &AuctionConfig, bids: &BidProfile) -> f64 {
    debug_assert!(r >= 0.0, "reserve must be non-negative");
    debug_assert_eq!(bids.len(), config.n_bidders);
    let n = config.n_bidders;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let qa = config.effective_ctr(a) * bids.bids[a];
        let qb = config.effective_ctr(b) * bids.bids[b];
        qb.total_cmp(&qa).then(a.cmp(&b))
    });
    let q_sorted: Vec<f64> = order
        .iter()
        .map(|&i| config.effective_ctr(i) * bids.bids[i])
        .collect();
    let mut total = 0.0;
    for s in 0..config.n_slots {
        let e_s = config.effective_ctr(order[s]);
        let q_s = q_sorted[s];
        let q_next = if s + 1 < n { q_sorted[s + 1] } else { 0.0 };
        let w = config.position_factors[s] / e_s;
        if q_next >= r {
            total -= w * q_next;
        } else if r <= q_s {
            total -= w * r;
        }
    }
    total
}

fn check_dims(config: &AuctionConfig, reserves: &ReserveVector, bids: &BidProfile) -> Result<()> {
    if bids.len() != config.n_bidders {
        return Err(Error::DimensionMismatch {
            what: "bids",
            expected: config.n_bidders,
            got: bids.len(),
        });
    }
    if reserves.reserves.len() != config.n_bidders {
        return Err(Error::DimensionMismatch {
            what: "reserves",
            expected: config.n_bidders,
            got: reserves.reserves.len(),
        });
    }
    Ok(())
}
