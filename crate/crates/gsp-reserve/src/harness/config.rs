//! Experiment configuration: the auction, the valuation distribution, the
//! sample sizes, and the master seed every derived stream hangs off of.

use crate::auction::{AuctionConfig, RankingRule};
use crate::equilibrium::ValuationSample;
use crate::error::{Error, Result};
use crate::seed::SeedTree;
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Valuation distributions used by the experiment drivers.
///
/// Truncation works by rejection, so a truncation point deep in the left
/// tail of the parent distribution is rejected up front: the acceptance
/// probability is computable in closed form and must stay above
/// [`MIN_ACCEPTANCE_RATE`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ValuationDist {
    /// Uniform on `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// Log-normal with location `mu` and scale `sigma`, truncated to
    /// support `(0, hi]`.
    TruncLogNormal { mu: f64, sigma: f64, hi: f64 },
    /// Finite mixture; weights must sum to one.
    Mixture {
        components: Vec<(f64, ValuationDist)>,
    },
}

/// Rejection sampling refuses to run below this acceptance probability.
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-3;

impl ValuationDist {
    /// Validates parameters, including the closed-form acceptance rate of
    /// every truncated component.
    pub fn validate(&self) -> Result<()> {
        match self {
            ValuationDist::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && *lo < *hi && *lo >= 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "uniform support [{lo}, {hi}) must satisfy 0 ≤ lo < hi"
                    )));
                }
            }
            ValuationDist::TruncLogNormal { mu, sigma, hi } => {
                if !(mu.is_finite() && sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "log-normal parameters mu = {mu}, sigma = {sigma} are invalid"
                    )));
                }
                if !(hi.is_finite() && *hi > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "truncation point {hi} must be positive and finite"
                    )));
                }
                let rate = self.acceptance_rate();
                if rate < MIN_ACCEPTANCE_RATE {
                    return Err(Error::InvalidConfig(format!(
                        "truncation at {hi} accepts a fraction {rate:.2e} of draws \
                         (minimum {MIN_ACCEPTANCE_RATE:.0e})"
                    )));
                }
            }
            ValuationDist::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidConfig("mixture has no components".into()));
                }
                let mut total = 0.0;
                for (w, dist) in components {
                    if !(w.is_finite() && *w > 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "mixture weight {w} must be positive"
                        )));
                    }
                    total += w;
                    dist.validate()?;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "mixture weights sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Probability that a single parent draw survives truncation
    /// (1 for untruncated distributions, the weighted average for mixtures).
    pub fn acceptance_rate(&self) -> f64 {
        match self {
            ValuationDist::Uniform { .. } => 1.0,
            ValuationDist::TruncLogNormal { mu, sigma, hi } => {
                // P(X ≤ hi) for X log-normal = Φ((ln hi − μ)/σ).
                let z = (hi.ln() - mu) / sigma;
                0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
            }
            ValuationDist::Mixture { components } => components
                .iter()
                .map(|(w, d)| w * d.acceptance_rate())
                .sum(),
        }
    }

    /// Draws one valuation. Assumes [`ValuationDist::validate`] passed; the
    /// attempt cap is a safety net, not the primary guard.
    fn sample_one<R: Rng>(&self, rng: &mut R) -> Result<f64> {
        match self {
            ValuationDist::Uniform { lo, hi } => Ok(rng.gen_range(*lo..*hi)),
            ValuationDist::TruncLogNormal { mu, sigma, hi } => {
                let parent = rand_distr::LogNormal::new(*mu, *sigma)
                    .map_err(|e| Error::InvalidConfig(format!("log-normal: {e}")))?;
                for _ in 0..1_000_000 {
                    let draw = parent.sample(rng);
                    if draw <= *hi {
                        return Ok(draw);
                    }
                }
                Err(Error::NumericalFailure(format!(
                    "rejection sampling failed to accept below {hi} in 1e6 attempts"
                )))
            }
            ValuationDist::Mixture { components } => {
                let mut u = rng.gen_range(0.0..1.0);
                for (w, dist) in components {
                    if u < *w {
                        return dist.sample_one(rng);
                    }
                    u -= w;
                }
                // Weights sum to 1 up to rounding; attribute the sliver to
                // the last component.
                components
                    .last()
                    .expect("validated non-empty")
                    .1
                    .sample_one(rng)
            }
        }
    }
}

/// Draws `n` i.i.d. valuations in stream order, without sorting. The
/// simulator needs this: sorting would tie valuation rank to bidder
/// identity, which matters once click-through rates differ per bidder.
pub(crate) fn sample_raw(dist: &ValuationDist, n: usize, tree: &SeedTree) -> Result<Vec<f64>> {
    dist.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(tree.seed_u64());
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(dist.sample_one(&mut rng)?);
    }
    Ok(values)
}

/// Draws `n` i.i.d. valuations from `dist` (sorted, as every consumer of a
/// [`ValuationSample`] expects) using a raw stream seed.
///
/// Experiment drivers should prefer [`sample_valuations`], which derives the
/// seed from a labelled [`SeedTree`] node instead of an ad-hoc integer.
pub fn sample_valuations_from_seed(
    dist: &ValuationDist,
    n: usize,
    seed: u64,
) -> Result<ValuationSample> {
    dist.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(dist.sample_one(&mut rng)?);
    }
    ValuationSample::new(values)
}

/// Draws `n` i.i.d. valuations from `dist`, seeded by a [`SeedTree`] node.
pub fn sample_valuations(
    dist: &ValuationDist,
    n: usize,
    tree: &SeedTree,
) -> Result<ValuationSample> {
    sample_valuations_from_seed(dist, n, tree.seed_u64())
}

fn default_grid_n() -> usize {
    2000
}

/// Everything an experiment needs: the mechanism, the valuation
/// distribution, the split sizes, and the master seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub auction: AuctionConfig,
    pub valuation_dist: ValuationDist,
    pub n_train: usize,
    pub n_test: usize,
    pub master_seed: u64,
    /// Grid size for fitting the equilibrium bid function β̂.
    #[serde(default = "default_grid_n")]
    pub equilibrium_grid_n: usize,
}

impl ExperimentConfig {
    /// Validates every field group.
    pub fn validate(&self) -> Result<()> {
        self.auction.validate()?;
        self.valuation_dist.validate()?;
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::InvalidConfig(format!(
                "n_train = {} and n_test = {} must both be ≥ 1",
                self.n_train, self.n_test
            )));
        }
        if self.equilibrium_grid_n < 2 {
            return Err(Error::InvalidConfig(format!(
                "equilibrium_grid_n = {} must be ≥ 2",
                self.equilibrium_grid_n
            )));
        }
        Ok(())
    }

    /// The benchmark configuration used throughout the experiment suite:
    /// four bidders, three slots with factors (1, 0.45, 0.1), rank-by-bid,
    /// and an even mixture of two truncated log-normals —
    /// LogNormal(ln 0.5, 0.8) on (0, 1.5] and LogNormal(ln 2, 0.1) on
    /// (0, 2.5] — with a 300-auction training set and 500-auction test set.
    pub fn benchmark(master_seed: u64) -> Self {
        let auction = AuctionConfig::new(
            4,
            3,
            vec![1.0, 0.45, 0.1],
            vec![1.0; 4],
            RankingRule::RankByBid,
        )
        .expect("benchmark auction config is valid");
        ExperimentConfig {
            auction,
            valuation_dist: ValuationDist::Mixture {
                components: vec![
                    (
                        0.5,
                        ValuationDist::TruncLogNormal {
                            mu: 0.5f64.ln(),
                            sigma: 0.8,
                            hi: 1.5,
                        },
                    ),
                    (
                        0.5,
                        ValuationDist::TruncLogNormal {
                            mu: 2.0f64.ln(),
                            sigma: 0.1,
                            hi: 2.5,
                        },
                    ),
                ],
            },
            n_train: 300,
            n_test: 500,
            master_seed,
            equilibrium_grid_n: 2000,
        }
    }

    /// SHA-256 of the canonical (compact JSON) encoding, hex-encoded.
    /// Ties datasets to the exact configuration that produced them.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// The seed tree rooted at this experiment's master seed.
    pub fn seed_tree(&self) -> SeedTree {
        SeedTree::new(self.master_seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_sorted() {
        let dist = ValuationDist::Uniform { lo: 0.0, hi: 1.0 };
        let tree = SeedTree::new(42).child("sample");
        let a = sample_valuations(&dist, 4, &tree).unwrap();
        let b = sample_valuations(&dist, 4, &tree).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.values().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(a.len(), 4);
        // A different label gives a different stream.
        let c = sample_valuations(&dist, 4, &SeedTree::new(42).child("other")).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn truncated_draws_respect_the_support() {
        let dist = ValuationDist::TruncLogNormal {
            mu: 2.0f64.ln(),
            sigma: 0.1,
            hi: 2.5,
        };
        let sample = sample_valuations(&dist, 2000, &SeedTree::new(7).child("trunc")).unwrap();
        assert!(sample.values().iter().all(|&v| v > 0.0 && v <= 2.5));
    }

    #[test]
    fn mixture_components_are_drawn_evenly() {
        // The benchmark mixture's first component lives on (0, 1.5] and the
        // second concentrates near 2, so draws below 1.5 count component
        // one. At n = 10⁴ the frequency must sit within 3σ of 1/2 — the
        // second component's mass below 1.5 is negligible (≈ Φ(−2.8/0.1)).
        let cfg = ExperimentConfig::benchmark(11);
        let sample = sample_valuations(
            &cfg.valuation_dist,
            10_000,
            &SeedTree::new(11).child("mixture"),
        )
        .unwrap();
        let low = sample.values().iter().filter(|&&v| v <= 1.5).count() as f64;
        let freq = low / 10_000.0;
        let three_sigma = 3.0 * (0.25f64 / 10_000.0).sqrt();
        assert!(
            (freq - 0.5).abs() <= three_sigma,
            "component frequency {freq} outside ±{three_sigma:.4}"
        );
    }

    #[test]
    fn hopeless_truncation_is_rejected_up_front() {
        // ln(hi) sits 4σ below the mean: acceptance ≈ 3e−5 < 1e−3.
        let dist = ValuationDist::TruncLogNormal {
            mu: 0.0,
            sigma: 1.0,
            hi: (-4.0f64).exp(),
        };
        assert!(matches!(
            sample_valuations_from_seed(&dist, 10, 1),
            Err(Error::InvalidConfig(_))
        ));
        // A mild truncation is fine.
        let ok = ValuationDist::TruncLogNormal {
            mu: 0.0,
            sigma: 1.0,
            hi: 1.0,
        };
        assert!(ok.validate().is_ok());
        assert!((ok.acceptance_rate() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mixture_weights_must_sum_to_one() {
        let bad = ValuationDist::Mixture {
            components: vec![
                (0.6, ValuationDist::Uniform { lo: 0.0, hi: 1.0 }),
                (0.6, ValuationDist::Uniform { lo: 0.0, hi: 1.0 }),
            ],
        };
        assert!(bad.validate().is_err());
        assert!(ValuationDist::Mixture { components: vec![] }
            .validate()
            .is_err());
    }

    #[test]
    fn config_hash_tracks_every_field() {
        let a = ExperimentConfig::benchmark(1);
        let mut b = a.clone();
        assert_eq!(a.config_hash(), b.config_hash());
        b.n_test += 1;
        assert_ne!(a.config_hash(), b.config_hash());
        let mut c = a.clone();
        c.master_seed = 2;
        assert_ne!(a.config_hash(), c.config_hash());
    }

    #[test]
    fn benchmark_config_validates_and_round_trips_through_json() {
        let cfg = ExperimentConfig::benchmark(424242);
        cfg.validate().unwrap();
        let json = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
        // equilibrium_grid_n falls back to 2000 when omitted.
        let mut value: serde_json::Value = serde_json::from_str(&json).unwrap();
        value.as_object_mut().unwrap().remove("equilibrium_grid_n");
        let trimmed: ExperimentConfig = serde_json::from_value(value).unwrap();
        assert_eq!(trimmed.equilibrium_grid_n, 2000);
    }
}
