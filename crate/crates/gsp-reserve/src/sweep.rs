//! Discriminative reserve learning: exact minimization of the empirical
//! simplified loss by a sorted breakpoint sweep.
//!
//! Each (auction, slot) pair contributes one piecewise-linear "v-function"
//! to the empirical loss: constant `−w·p2` while the reserve is below the
//! second score, `−w·r` while it sits between the two scores, and zero once
//! it passes the top score. The total loss is therefore piecewise linear with
//! knots only at score values, and its minimum is attained at a knot (or at
//! r = 0). [`minimize`] visits the `2nS` sorted knot values once, maintaining
//! the running coefficients `(d1, d2)` of the current segment `L = d1 − r·d2`,
//! for an `O(nS log nS)` total. [`brute_force`] is the independent quadratic
//! oracle used to validate it.

use crate::auction::{AuctionConfig, BidProfile};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Coefficients of a general v-function
/// `V(r) = −a1·1{r ≤ q2} − a2·r·1{q2 < r ≤ q1} + (r/η − a3)·1{q1 < r < (1+η)q1}`
/// (with the convention 0·∞ = 0, so η = ∞ makes the last branch the constant −a3).
///
/// GSP slot losses are the η = 0 case: the third branch is empty and
/// `a1 = a2·q2` makes the function continuous from the left at `q2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VFunctionParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub eta: f64,
}

impl VFunctionParams {
    /// Coefficients of the slot loss `L_{s,i}`: `η = 0`, `a2 = c_s/e^(s)`,
    /// `a1 = a2·q̃^(s+1)`.
    pub fn slot_loss(weight: f64, q2: f64) -> Self {
        VFunctionParams {
            a1: weight * q2,
            a2: weight,
            a3: 0.0,
            eta: 0.0,
        }
    }

    /// Evaluates the v-function at reserve `r` on the support pair `(q1, q2)`.
    pub fn evaluate(&self, r: f64, q1: f64, q2: f64) -> f64 {
        debug_assert!(q1 >= q2 && q2 >= 0.0);
        if r <= q2 {
            -self.a1
        } else if r <= q1 {
            -self.a2 * r
        } else if self.eta > 0.0 && r < (1.0 + self.eta) * q1 {
            // 0·∞ = 0: an infinite η turns r/η into 0.
            let slope = if self.eta.is_infinite() {
                0.0
            } else {
                r / self.eta
            };
            slope - self.a3
        } else {
            0.0
        }
    }
}

/// One breakpoint triple `(q̃^(s), q̃^(s+1), c_s/e^(s))` of an (auction, slot) pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BreakpointPair {
    /// Upper score `p1 = q̃^(s)`.
    pub p1: f64,
    /// Lower score `p2 = q̃^(s+1)`.
    pub p2: f64,
    /// Loss weight `c_s/e^(s)`.
    pub weight: f64,
}

/// All breakpoint pairs of a dataset (`n·S` of them).
#[derive(Clone, Debug, PartialEq)]
pub struct VBreakpoints {
    pub pairs: Vec<BreakpointPair>,
}

impl VBreakpoints {
    /// Wraps raw pairs, rejecting malformed entries (`p1 ≥ p2 ≥ 0`, `weight > 0`).
    pub fn new(pairs: Vec<BreakpointPair>) -> Result<Self> {
        for (k, p) in pairs.iter().enumerate() {
            let ok = p.p1.is_finite()
                && p.p2.is_finite()
                && p.weight.is_finite()
                && p.p2 >= 0.0
                && p.p1 >= p.p2
                && p.weight > 0.0;
            if !ok {
                return Err(Error::InvalidConfig(format!(
                    "breakpoint pair {k} is malformed: {p:?}"
                )));
            }
        }
        Ok(VBreakpoints { pairs })
    }

    /// The v-function coefficients of each pair (all with η = 0).
    pub fn v_function_params(&self) -> Vec<VFunctionParams> {
        self.pairs
            .iter()
            .map(|p| VFunctionParams::slot_loss(p.weight, p.p2))
            .collect()
    }
}

/// Result of a reserve minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReserveSolution {
    /// The minimizing reserve r*.
    pub reserve: f64,
    /// Total empirical loss at r*, re-evaluated by direct summation.
    pub loss_value: f64,
    /// Number of candidate reserves inspected.
    pub candidates_evaluated: usize,
}

/// Emits the `n·S` breakpoint triples of a dataset: per auction, scores
/// `q̃_i = e_i·b_i` sorted descending (index tie-break, `q̃^(N+1) = 0`), one
/// `(q̃^(s), q̃^(s+1), c_s/e^(s))` triple per slot.
pub fn extract_breakpoints(dataset: &[BidProfile], config: &AuctionConfig) -> Result<VBreakpoints> {
    let n = config.n_bidders;
    let mut pairs = Vec::with_capacity(dataset.len() * config.n_slots);
    for bids in dataset {
        if bids.len() != n {
            return Err(Error::DimensionMismatch {
                what: "bids",
                expected: n,
                got: bids.len(),
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let qa = config.effective_ctr(a) * bids.bids[a];
            let qb = config.effective_ctr(b) * bids.bids[b];
            qb.total_cmp(&qa).then(a.cmp(&b))
        });
        let score = |rank: usize| -> f64 {
            if rank < n {
                config.effective_ctr(order[rank]) * bids.bids[order[rank]]
            } else {
                0.0
            }
        };
        for (s, &winner) in order.iter().take(config.n_slots).enumerate() {
            pairs.push(BreakpointPair {
                p1: score(s),
                p2: score(s + 1),
                weight: config.position_factors[s] / config.effective_ctr(winner),
            });
        }
    }
    VBreakpoints::new(pairs)
}

/// Direct evaluation of the empirical loss `Σ w·(−p2·1{p2 ≥ r} − r·1{p2 < r ≤ p1})`.
fn direct_loss(pairs: &[BreakpointPair], r: f64) -> f64 {
    let terms: Vec<f64> = pairs
        .iter()
        .map(|p| {
            if p.p2 >= r {
                -p.weight * p.p2
            } else if r <= p.p1 {
                -p.weight * r
            } else {
                0.0
            }
        })
        .collect();
    pairwise_sum(&terms)
}

/// Candidate reserves: 0 plus every distinct breakpoint value, ascending.
fn candidate_values(pairs: &[BreakpointPair]) -> Vec<f64> {
    let mut values: Vec<f64> = Vec::with_capacity(2 * pairs.len() + 1);
    values.push(0.0);
    for p in pairs {
        values.push(p.p1);
        values.push(p.p2);
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// Minimizes the empirical loss over v-functions in general-coefficient form.
///
/// Only the η = 0 (GSP slot loss) case is supported; η > 0 inputs are
/// rejected. Each entry pairs the coefficients with their support `(q1, q2)`.
pub fn minimize_v_functions(funcs: &[(VFunctionParams, (f64, f64))]) -> Result<ReserveSolution> {
    let mut pairs = Vec::with_capacity(funcs.len());
    for (k, (params, (q1, q2))) in funcs.iter().enumerate() {
        if params.eta > 0.0 {
            return Err(Error::InvalidConfig(format!(
                "v-function {k} has η = {} > 0; the sweep implements only the η = 0 (GSP) case",
                params.eta
            )));
        }
        debug_assert!(
            (params.a1 - params.a2 * q2).abs() <= 1e-9 * params.a1.abs().max(1.0),
            "v-function constraint a1 = a2·q2 violated"
        );
        if params.a2 > 0.0 {
            pairs.push(BreakpointPair {
                p1: *q1,
                p2: *q2,
                weight: params.a2,
            });
        }
    }
    minimize(&VBreakpoints::new(pairs)?)
}

/// Event-sweep minimizer: exact global minimizer of the empirical loss in
/// `O(nS log nS)`. Ties in minimal loss resolve to the smaller reserve.
pub fn minimize(bp: &VBreakpoints) -> Result<ReserveSolution> {
    let pairs = &bp.pairs;
    if pairs.is_empty() {
        return Err(Error::InsufficientData {
            what: "breakpoint sweep",
            needed: 1,
            got: 0,
        });
    }

    // Sorted crossing events. Crossing above p2 moves a pair from its
    // constant branch (−w·p2) to its linear branch (−w·r); crossing above p1
    // retires the linear branch.
    #[derive(Clone, Copy)]
    struct Event {
        value: f64,
        d1_delta: f64,
        d2_delta: f64,
    }
    let mut events = Vec::with_capacity(2 * pairs.len());
    for p in pairs {
        events.push(Event {
            value: p.p2,
            d1_delta: p.weight * p.p2,
            d2_delta: p.weight,
        });
        events.push(Event {
            value: p.p1,
            d1_delta: 0.0,
            d2_delta: -p.weight,
        });
    }
    events.sort_by(|a, b| a.value.total_cmp(&b.value));

    let candidates = candidate_values(pairs);

    // Segment coefficients at r = 0: every pair sits in its constant branch.
    let init_terms: Vec<f64> = pairs.iter().map(|p| -p.weight * p.p2).collect();
    let mut d1 = pairwise_sum(&init_terms);
    let mut d2 = 0.0;

    // Cheap self-check from the derivation: the d1 initialization must agree
    // with direct evaluation of the loss at the first candidate (r = 0).
    let direct_at_zero = direct_loss(pairs, candidates[0]);
    assert!(
        (d1 - candidates[0] * d2 - direct_at_zero).abs() <= 1e-9 * direct_at_zero.abs().max(1.0),
        "sweep initialization disagrees with direct evaluation"
    );

    let check_segments = cfg!(debug_assertions) && pairs.len() <= 512;

    let mut next_event = 0usize;
    let mut best_r = candidates[0];
    let mut best_loss = d1 - candidates[0] * d2;
    for &x in &candidates {
        // Apply every crossing strictly below x: at r = p2 the pair is still
        // in its constant branch (the indicator is 1{p2 ≥ r}).
        while next_event < events.len() && events[next_event].value < x {
            d1 += events[next_event].d1_delta;
            d2 += events[next_event].d2_delta;
            next_event += 1;
        }
        let loss = d1 - x * d2;
        if check_segments {
            let direct = direct_loss(pairs, x);
            debug_assert!(
                (loss - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                "segment coefficients diverge from direct evaluation at r = {x}"
            );
        }
        if loss < best_loss {
            best_loss = loss;
            best_r = x;
        }
    }

    // Report the independently re-evaluated loss (the type's invariant).
    let reported = direct_loss(pairs, best_r);
    assert!(
        (best_loss - reported).abs() <= 1e-9 * reported.abs().max(1.0),
        "swept loss diverges from direct evaluation at the minimizer"
    );
    Ok(ReserveSolution {
        reserve: best_r,
        loss_value: reported,
        candidates_evaluated: candidates.len(),
    })
}

/// Quadratic oracle: evaluates the loss at 0 and every breakpoint value by
/// direct summation and returns the best (smaller reserve on ties).
pub fn brute_force(bp: &VBreakpoints) -> Result<ReserveSolution> {
    let pairs = &bp.pairs;
    if pairs.is_empty() {
        return Err(Error::InsufficientData {
            what: "brute-force reserve search",
            needed: 1,
            got: 0,
        });
    }
    let candidates = candidate_values(pairs);
    let mut best_r = candidates[0];
    let mut best_loss = direct_loss(pairs, candidates[0]);
    for &x in &candidates[1..] {
        let loss = direct_loss(pairs, x);
        if loss < best_loss {
            best_loss = loss;
            best_r = x;
        }
    }
    Ok(ReserveSolution {
        reserve: best_r,
        loss_value: best_loss,
        candidates_evaluated: candidates.len(),
    })
}

/// Generalization bound `C(𝔐, 𝔪, n, δ) = 1/√n + √(log(e·n)/n) + √(𝔐·log(1/δ)/(2𝔪n))`.
pub fn generalization_bound(m_sum_c: f64, m_min_e: f64, n: usize, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidConfig("bound requires n ≥ 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "bound requires δ ∈ (0,1), got {delta}"
        )));
    }
    if !(m_min_e > 0.0 && m_sum_c > 0.0) {
        return Err(Error::InvalidConfig(
            "bound requires 𝔐 > 0 and 𝔪 > 0".into(),
        ));
    }
    let n = n as f64;
    Ok(1.0 / n.sqrt()
        + ((std::f64::consts::E * n).ln() / n).sqrt()
        + (m_sum_c * (1.0 / delta).ln() / (2.0 * m_min_e * n)).sqrt())
}

/// Mean simplified loss of a dataset at reserve `r` (test revenue = −value).
pub fn evaluate_reserve(r: f64, dataset: &[BidProfile], config: &AuctionConfig) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::InsufficientData {
            what: "reserve evaluation",
            needed: 1,
            got: 0,
        });
    }
    for bids in dataset {
        if bids.len() != config.n_bidders {
            return Err(Error::DimensionMismatch {
                what: "bids",
                expected: config.n_bidders,
                got: bids.len(),
            });
        }
    }
    let losses: Vec<f64> = dataset
        .iter()
        .map(|b| crate::auction::simplified_loss(r, config, b))
        .collect();
    Ok(pairwise_sum(&losses) / dataset.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::RankingRule;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn bp(pairs: &[(f64, f64, f64)]) -> VBreakpoints {
        VBreakpoints::new(
            pairs
                .iter()
                .map(|&(p1, p2, weight)| BreakpointPair { p1, p2, weight })
                .collect(),
        )
        .unwrap()
    }

    fn random_instance(seed: u64) -> VBreakpoints {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=50);
        let s = rng.gen_range(1..=4);
        let mut pairs = Vec::new();
        for _ in 0..n {
            let mut scores: Vec<f64> = (0..s + 1).map(|_| rng.gen_range(0.0..2.5)).collect();
            scores.sort_by(|a, b| b.total_cmp(a));
            for k in 0..s {
                pairs.push(BreakpointPair {
                    p1: scores[k],
                    p2: scores[k + 1],
                    weight: rng.gen_range(0.1..2.0),
                });
            }
        }
        VBreakpoints::new(pairs).unwrap()
    }

    #[test]
    fn extract_breakpoints_example() {
        let config = AuctionConfig::new(
            3,
            2,
            vec![1.0, 0.5],
            vec![1.0, 1.0, 1.0],
            RankingRule::RankByRevenue,
        )
        .unwrap();
        let dataset = vec![BidProfile::new(vec![0.9, 0.6, 0.3]).unwrap()];
        let got = extract_breakpoints(&dataset, &config).unwrap();
        assert_eq!(
            got.pairs,
            vec![
                BreakpointPair {
                    p1: 0.9,
                    p2: 0.6,
                    weight: 1.0
                },
                BreakpointPair {
                    p1: 0.6,
                    p2: 0.3,
                    weight: 0.5
                },
            ]
        );
    }

    #[test]
    fn extract_breakpoints_zero_bids_and_rank_by_bid() {
        let config = AuctionConfig::new(
            3,
            2,
            vec![1.0, 0.5],
            vec![0.5, 1.0, 1.0],
            RankingRule::RankByBid,
        )
        .unwrap();
        let zeros = vec![BidProfile::new(vec![0.0, 0.0, 0.0]).unwrap()];
        let got = extract_breakpoints(&zeros, &config).unwrap();
        for p in &got.pairs {
            assert_eq!((p.p1, p.p2), (0.0, 0.0));
        }
        // Rank-by-bid ignores the CTRs: scores are the bids themselves and
        // weights are the bare position factors.
        let dataset = vec![BidProfile::new(vec![0.9, 0.6, 0.3]).unwrap()];
        let got = extract_breakpoints(&dataset, &config).unwrap();
        assert_eq!(
            got.pairs,
            vec![
                BreakpointPair {
                    p1: 0.9,
                    p2: 0.6,
                    weight: 1.0
                },
                BreakpointPair {
                    p1: 0.6,
                    p2: 0.3,
                    weight: 0.5
                },
            ]
        );
    }

    #[test]
    fn minimize_single_pair_example() {
        // Loss is −0.6 for r ≤ 0.6, then −r on (0.6, 0.9], then 0.
        let solution = minimize(&bp(&[(0.9, 0.6, 1.0)])).unwrap();
        assert_eq!(solution.reserve, 0.9);
        assert!((solution.loss_value + 0.9).abs() < 1e-12);
        assert_eq!(solution.candidates_evaluated, 3); // {0, 0.6, 0.9}
    }

    #[test]
    fn minimize_finds_global_not_local_minimum() {
        let mut pairs = vec![(1.0, 0.0, 1.0)];
        pairs.extend(std::iter::repeat_n((0.4, 0.39, 1.0), 10));
        let instance = bp(&pairs);
        let swept = minimize(&instance).unwrap();
        let oracle = brute_force(&instance).unwrap();
        assert_eq!(swept.reserve, 0.4);
        assert!((swept.loss_value + 4.4).abs() < 1e-12);
        assert_eq!(swept.reserve, oracle.reserve);
        assert_eq!(swept.loss_value, oracle.loss_value);
    }

    #[test]
    fn sweep_matches_brute_force_on_random_instances() {
        for seed in 0..25 {
            let instance = random_instance(seed);
            let swept = minimize(&instance).unwrap();
            let oracle = brute_force(&instance).unwrap();
            assert_eq!(
                swept.loss_value, oracle.loss_value,
                "seed {seed}: sweep {swept:?} vs oracle {oracle:?}"
            );
            assert_eq!(swept.reserve, oracle.reserve, "seed {seed}");
        }
    }

    #[test]
    fn loss_ties_resolve_to_smaller_reserve() {
        // L(1) = L(2) = −2: both algorithms must report r = 1.
        let instance = bp(&[(1.0, 0.0, 1.0), (2.0, 1.0, 1.0)]);
        assert_eq!(minimize(&instance).unwrap().reserve, 1.0);
        assert_eq!(brute_force(&instance).unwrap().reserve, 1.0);
    }

    #[test]
    fn empty_breakpoints_rejected() {
        let empty = VBreakpoints::new(vec![]).unwrap();
        assert!(minimize(&empty).is_err());
        assert!(brute_force(&empty).is_err());
    }

    #[test]
    fn v_function_params_match_slot_loss() {
        let params = VFunctionParams::slot_loss(0.5, 0.3);
        assert_eq!(params.a1, 0.15);
        assert_eq!(params.a2, 0.5);
        assert_eq!(params.eta, 0.0);
        // The Definition's branches reproduce the slot loss on (q1, q2) = (0.6, 0.3).
        assert_eq!(params.evaluate(0.2, 0.6, 0.3), -0.15);
        assert_eq!(params.evaluate(0.3, 0.6, 0.3), -0.15);
        assert_eq!(params.evaluate(0.5, 0.6, 0.3), -0.25);
        assert_eq!(params.evaluate(0.7, 0.6, 0.3), 0.0);
    }

    #[test]
    fn minimize_v_functions_rejects_positive_eta() {
        let params = VFunctionParams {
            a1: 0.0,
            a2: 1.0,
            a3: 1.0,
            eta: 0.5,
        };
        let err = minimize_v_functions(&[(params, (1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));

        let slot = (VFunctionParams::slot_loss(1.0, 0.6), (0.9, 0.6));
        let solution = minimize_v_functions(&[slot]).unwrap();
        assert_eq!(solution.reserve, 0.9);
    }

    #[test]
    fn generalization_bound_examples() {
        // n=1, δ=1/e, 𝔐=𝔪=1: 1 + 1 + √(1/2).
        let c = generalization_bound(1.0, 1.0, 1, (-1.0f64).exp()).unwrap();
        assert!((c - (2.0 + 0.5f64.sqrt())).abs() < 1e-12);

        // Monotone non-increasing in n.
        let mut prev = f64::INFINITY;
        for n in 1..200 {
            let c = generalization_bound(1.55, 0.5, n, 0.05).unwrap();
            assert!(c <= prev + 1e-15, "bound increased at n={n}");
            prev = c;
        }

        // Doubling 𝔐 multiplies the third term by √2 exactly.
        let prefix = |n: f64| 1.0 / n.sqrt() + ((std::f64::consts::E * n).ln() / n).sqrt();
        let third1 = generalization_bound(1.0, 0.7, 9, 0.1).unwrap() - prefix(9.0);
        let third2 = generalization_bound(2.0, 0.7, 9, 0.1).unwrap() - prefix(9.0);
        assert!((third2 - 2.0f64.sqrt() * third1).abs() < 1e-12);

        // Domain violations.
        assert!(generalization_bound(1.0, 1.0, 0, 0.1).is_err());
        assert!(generalization_bound(1.0, 1.0, 5, 0.0).is_err());
        assert!(generalization_bound(1.0, 1.0, 5, 1.0).is_err());
        assert!(generalization_bound(1.0, 0.0, 5, 0.1).is_err());
    }

    #[test]
    fn evaluate_reserve_consistency_with_minimize() {
        let config = AuctionConfig::new(
            3,
            2,
            vec![1.0, 0.5],
            vec![0.9, 0.8, 0.7],
            RankingRule::RankByRevenue,
        )
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let dataset: Vec<BidProfile> = (0..40)
            .map(|_| BidProfile::new((0..3).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap())
            .collect();
        let instance = extract_breakpoints(&dataset, &config).unwrap();
        let solution = minimize(&instance).unwrap();
        let mean = evaluate_reserve(solution.reserve, &dataset, &config).unwrap();
        assert!(
            (mean - solution.loss_value / dataset.len() as f64).abs() < 1e-9,
            "mean {mean} vs total/n {}",
            solution.loss_value / dataset.len() as f64
        );
        // r = 0 reduces to mean negated second-score revenue.
        let at_zero = evaluate_reserve(0.0, &dataset, &config).unwrap();
        let oracle: f64 = dataset
            .iter()
            .map(|b| crate::auction::simplified_loss(0.0, &config, b))
            .sum::<f64>()
            / dataset.len() as f64;
        assert!((at_zero - oracle).abs() < 1e-12);
    }

    proptest! {
        /// Scaling all scores by λ scales the optimal reserve and loss by λ.
        #[test]
        fn scaling_equivariance(seed in 0u64..500, lambda in 0.1f64..10.0) {
            let instance = random_instance(seed);
            let scaled = VBreakpoints::new(
                instance.pairs.iter().map(|p| BreakpointPair {
                    p1: p.p1 * lambda,
                    p2: p.p2 * lambda,
                    weight: p.weight,
                }).collect()
            ).unwrap();
            let base = minimize(&instance).unwrap();
            let scaled = minimize(&scaled).unwrap();
            prop_assert!((scaled.reserve - lambda * base.reserve).abs() <= 1e-9 * lambda.max(1.0));
            prop_assert!((scaled.loss_value - lambda * base.loss_value).abs()
                <= 1e-9 * lambda.max(1.0) * base.loss_value.abs().max(1.0));
        }

        /// Appending zero-bid auctions never changes the solution.
        #[test]
        fn zero_bid_auctions_are_inert(seed in 0u64..500, extra in 1usize..10) {
            let instance = random_instance(seed);
            let mut padded = instance.pairs.clone();
            padded.extend(std::iter::repeat_n(
                BreakpointPair {
                    p1: 0.0,
                    p2: 0.0,
                    weight: 1.0,
                },
                extra,
            ));
            let base = minimize(&instance).unwrap();
            let padded = minimize(&VBreakpoints::new(padded).unwrap()).unwrap();
            prop_assert_eq!(base.reserve, padded.reserve);
            prop_assert!((base.loss_value - padded.loss_value).abs() < 1e-12);
        }
    }

    /// Smoke benchmark for the O(nS log nS) claim; run with
    /// `cargo test -- --ignored sweep_scales` and inspect the printed ratios.
    #[test]
    #[ignore]
    fn sweep_scales_near_linearithmically() {
        use std::time::Instant;
        let mut rng = ChaCha12Rng::seed_from_u64(123);
        let mut timings = Vec::new();
        for size in [250_000usize, 500_000, 1_000_000] {
            let pairs: Vec<BreakpointPair> = (0..size)
                .map(|_| {
                    let p2 = rng.gen_range(0.0..1.0);
                    BreakpointPair {
                        p1: p2 + rng.gen_range(0.0..1.0),
                        p2,
                        weight: rng.gen_range(0.1..1.0),
                    }
                })
                .collect();
            let instance = VBreakpoints::new(pairs).unwrap();
            let start = Instant::now();
            let solution = minimize(&instance).unwrap();
            let elapsed = start.elapsed().as_secs_f64();
            println!("nS = {size}: {elapsed:.3}s (r* = {})", solution.reserve);
            timings.push(elapsed);
        }
        for pair in timings.windows(2) {
            println!("doubling ratio: {:.2}", pair[1] / pair[0]);
        }
    }
}
