//! Density-estimation route to the optimal uniform reserve.
//!
//! The pipeline mirrors the structural estimation approach from empirical
//! auction theory: observed equilibrium bids are i.i.d. draws from
//! `G(b) = F(β⁻¹(b))`, so an estimate of `(G, g)` can be pushed through the
//! closed-form inverse of the equilibrium bid function to recover a sample
//! from the valuation distribution `F` itself.
//!
//! 1. Pool all observed scores (`e_i·b_i` under rank-by-revenue, raw bids
//!    under rank-by-bid) and fit `Ĝ` ([`EmpiricalCdf`]) and `ĝ` ([`Kde`],
//!    triangular kernel, rule-of-thumb [`bandwidth`]).
//! 2. Invert each bid with [`invert_bid`] to obtain `v̂_i = β⁻¹(b_i)`.
//! 3. Re-fit `F̂` and `f̂` on the recovered valuations.
//! 4. Solve the monopoly-reserve fixed point `r̄·f(r̄) = 1 − F(r̄)` with
//!    [`solve_reserve`] and expand it per bidder with [`reserve_vector`].
//!
//! The two-step smoothing (ĝ then f̂) caps the attainable rate, so this
//! route trades statistical efficiency for interpretability; the sweep in
//! [`crate::sweep`] is the direct competitor that skips density estimation
//! entirely.

use crate::auction::{AuctionConfig, BidProfile, ReserveVector};
use crate::error::{Error, Result};
use crate::numeric::{binomial, pairwise_sum};
use crate::sweep::evaluate_reserve;
use rayon::prelude::*;

/// Smoothing kernels supported by [`Kde`].
///
/// Only the triangular kernel `K(u) = (1 − |u|)·1{|u| ≤ 1}` is implemented:
/// it is compactly supported, integrates to one, and keeps every density
/// evaluation an O(log n + window) lookup over sorted centers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Triangular,
}

/// Empirical distribution function of a pooled sample.
///
/// Evaluation returns the fraction of sample points `≤ x`, the standard
/// right-continuous step estimate. Values live in `[0, 1]` and are
/// non-decreasing in `x` by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    /// Sample points, sorted ascending.
    points: Vec<f64>,
}

impl EmpiricalCdf {
    /// Sorts and stores the sample. Rejects empty or non-finite input.
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData {
                what: "empirical CDF sample",
                needed: 1,
                got: 0,
            });
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig(
                "empirical CDF sample must be finite".into(),
            ));
        }
        points.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { points })
    }

    /// Fraction of sample points `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&p| p <= x);
        k as f64 / self.points.len() as f64
    }

    /// Number of sample points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the sample is empty (unreachable through [`EmpiricalCdf::new`]).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest sample point.
    pub fn min(&self) -> f64 {
        self.points[0]
    }

    /// Largest sample point.
    pub fn max(&self) -> f64 {
        *self.points.last().expect("non-empty by construction")
    }

    /// The sorted sample.
    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Rule-of-thumb kernel bandwidth `h = 1.06·σ̂·n^(−1/5)`.
///
/// `σ̂` is the sample standard deviation (the unbiased `n − 1` divisor).
/// Requires `n ≥ 2` and a non-degenerate sample; a constant sample has no
/// scale to smooth over and is rejected.
pub fn bandwidth(sample: &[f64]) -> Result<f64> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            what: "bandwidth sample",
            needed: 2,
            got: n,
        });
    }
    let mean = pairwise_sum(sample) / n as f64;
    let sq: Vec<f64> = sample.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let sigma = (pairwise_sum(&sq) / (n - 1) as f64).sqrt();
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::DegenerateSample(format!(
            "sample standard deviation {sigma} leaves nothing to smooth"
        )));
    }
    Ok(1.06 * sigma * (n as f64).powf(-0.2))
}

/// Kernel density estimate `ĝ(x) = (1/(n·h))·Σ_i K((x − b_i)/h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kde {
    /// Kernel centers, sorted ascending.
    points: Vec<f64>,
    bandwidth: f64,
    kernel: Kernel,
}

impl Kde {
    /// Builds the estimator from explicit centers and bandwidth.
    pub fn new(mut points: Vec<f64>, bandwidth: f64, kernel: Kernel) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData {
                what: "KDE sample",
                needed: 1,
                got: 0,
            });
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("KDE sample must be finite".into()));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "bandwidth {bandwidth} must be positive and finite"
            )));
        }
        points.sort_by(f64::total_cmp);
        Ok(Kde {
            points,
            bandwidth,
            kernel,
        })
    }

    /// Builds the estimator with the rule-of-thumb [`bandwidth`].
    pub fn with_rule_of_thumb(points: Vec<f64>) -> Result<Self> {
        let h = bandwidth(&points)?;
        Kde::new(points, h, Kernel::Triangular)
    }

    /// Density estimate at `x`. Non-negative everywhere; zero outside
    /// `[min − h, max + h]` thanks to the compact kernel support.
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        // Only centers within one bandwidth of x contribute.
        let lo = self.points.partition_point(|&p| p <= x - h);
        let hi = self.points.partition_point(|&p| p < x + h);
        let mut acc = 0.0;
        for &p in &self.points[lo..hi] {
            let u = (x - p) / h;
            match self.kernel {
                Kernel::Triangular => {
                    let w = 1.0 - u.abs();
                    if w > 0.0 {
                        acc += w;
                    }
                }
            }
        }
        acc / (self.points.len() as f64 * h)
    }

    /// The bandwidth `h`.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The sorted kernel centers.
    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Denominator floor for the bid inversion: below this the inverse formula
/// divides by (numerical) zero, so the entry is clamped and flagged instead.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;

/// One inverted observation: the pooled score it came from, the recovered
/// valuation, and whether the inversion denominator had to be floored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvertedBid {
    /// Pooled score the inversion was applied to (`e_i·b_i` under
    /// rank-by-revenue, the raw bid under rank-by-bid).
    pub bid: f64,
    /// Recovered valuation `v̂ = β̂⁻¹(bid)`.
    pub valuation: f64,
    /// True when the denominator fell below [`DENOMINATOR_FLOOR`]; flagged
    /// entries are kept for inspection but excluded from downstream fits.
    pub floored: bool,
}

/// Valuations recovered by inverting the equilibrium bid function.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredValuations {
    entries: Vec<InvertedBid>,
}

impl RecoveredValuations {
    /// Wraps pre-computed entries, rejecting non-finite valuations.
    pub fn new(entries: Vec<InvertedBid>) -> Result<Self> {
        for e in &entries {
            if !e.valuation.is_finite() || !e.bid.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "recovered valuation {} from bid {} is not finite",
                    e.valuation, e.bid
                )));
            }
        }
        Ok(RecoveredValuations { entries })
    }

    /// Treats raw valuation draws as already inverted. This is the plug-in
    /// entry point for fitting `F̂`/`f̂` directly on observed valuations,
    /// used when the inversion step is not part of the experiment.
    pub fn from_raw(values: &[f64]) -> Result<Self> {
        RecoveredValuations::new(
            values
                .iter()
                .map(|&v| InvertedBid {
                    bid: v,
                    valuation: v,
                    floored: false,
                })
                .collect(),
        )
    }

    /// All entries in input order.
    pub fn entries(&self) -> &[InvertedBid] {
        &self.entries
    }

    /// Valuations whose inversion did not hit the denominator floor.
    pub fn unflagged(&self) -> Vec<f64> {
        self.entries
            .iter()
            .filter(|e| !e.floored)
            .map(|e| e.valuation)
            .collect()
    }

    /// Number of entries, flagged included.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no entries are present.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries that hit the denominator floor.
    pub fn n_flagged(&self) -> usize {
        self.entries.iter().filter(|e| e.floored).count()
    }
}

/// Pre-computed pieces of the bid inversion shared by every evaluation:
/// the per-slot prefix sums behind the empirical integral estimate
/// `Î_s(b) = (1/m)·Σ_{b_j ≤ b} p·Ĝ(b_j)^{p−1}·b_j`, `p = N − s`.
struct InversionContext<'a> {
    ghat: &'a EmpiricalCdf,
    gdens: &'a Kde,
    config: &'a AuctionConfig,
    sorted: &'a [f64],
    /// `prefix[s][k]` = partial sum of the first `k` sorted points for slot
    /// `s` (1-indexed; index 0 unused, slots with `p = 0` stay empty since
    /// the `p` factor annihilates every term).
    prefix: Vec<Vec<f64>>,
}

impl<'a> InversionContext<'a> {
    fn new(
        ghat: &'a EmpiricalCdf,
        gdens: &'a Kde,
        config: &'a AuctionConfig,
        sorted: &'a [f64],
    ) -> Result<Self> {
        if sorted.is_empty() {
            return Err(Error::InsufficientData {
                what: "pooled bids",
                needed: 1,
                got: 0,
            });
        }
        if sorted.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidConfig(
                "pooled bids must be sorted ascending".into(),
            ));
        }
        let m = sorted.len();
        let n_bidders = config.n_bidders;
        let mut prefix = vec![Vec::new(); config.n_slots + 1];
        for (s, slot) in prefix.iter_mut().enumerate().skip(2) {
            let p = n_bidders - s;
            if p == 0 {
                continue; // Î_N ≡ 0: the p factor kills every summand.
            }
            let mut acc = Vec::with_capacity(m + 1);
            acc.push(0.0);
            let mut run = 0.0;
            let mut j = 0;
            while j < m {
                // All ties share the same empirical CDF value (fraction ≤).
                let mut end = j + 1;
                while end < m && sorted[end] == sorted[j] {
                    end += 1;
                }
                let g = end as f64 / m as f64;
                let coeff = p as f64 * g.powi(p as i32 - 1);
                for &b in &sorted[j..end] {
                    run += coeff * b;
                    acc.push(run);
                }
                j = end;
            }
            *slot = acc;
        }
        Ok(InversionContext {
            ghat,
            gdens,
            config,
            sorted,
            prefix,
        })
    }

    /// Empirical integral estimate `Î_s(b)` for slot `s`.
    fn integral(&self, s: usize, b: f64) -> f64 {
        let acc = &self.prefix[s];
        if acc.is_empty() {
            return 0.0;
        }
        let k = self.sorted.partition_point(|&p| p <= b);
        acc[k] / self.sorted.len() as f64
    }

    /// Inverts one bid. The numerator and denominator follow from
    /// differentiating the equilibrium identity
    /// `Σ_s c_s·C(N−1,s−1)·∫₀^b β⁻¹(u)·w_s′(u) du
    ///    = Σ_s c_s·C(N−1,s−1)·(1−G(b))^{s−1}·∫₀^b p·u·G(u)^{p−1}·g(u) du`
    /// with `w_s(b) = (1−G(b))^{s−1}·G(b)^p`, which gives `v = (A − B)/D`:
    ///
    /// - `A = Σ_s c_s·C(N−1,s−1)·(1−Ĝ)^{s−1}·b·p·Ĝ^{p−1}·ĝ(b)`
    /// - `B = Σ_s c_s·C(N−1,s−1)·(s−1)·(1−Ĝ)^{s−2}·ĝ(b)·Î_s(b)`
    /// - `D = Σ_s c_s·C(N−1,s−1)·ĝ(b)·[p·Ĝ^{p−1}·(1−Ĝ)^{s−1} − (s−1)·(1−Ĝ)^{s−2}·Ĝ^p]`
    ///
    /// Every term carries the binomial coefficient: it enters through the
    /// slot-allocation probabilities and survives differentiation unchanged.
    /// `D` is `ĝ(b)` times the `G`-derivative of `Σ_s c_s·z̄_s`, which is a
    /// non-negative polynomial whenever the position factors decrease
    /// (summation by parts over the slot index), so only `D ≈ 0` needs the
    /// floor, not a sign correction.
    ///
    /// Note that `A`, `B`, and `D` each carry exactly one factor of `ĝ(b)`,
    /// so the kernel estimate cancels in the ratio: the recovered valuation
    /// depends only on `Ĝ` and the empirical integral. `ĝ` still sets the
    /// scale of `D`, hence the flooring decision, and it is what the later
    /// fixed-point stage genuinely smooths with.
    fn invert(&self, b: f64) -> InvertedBid {
        let gb = self.ghat.eval(b);
        let dens = self.gdens.eval(b);
        let n_bidders = self.config.n_bidders;
        let mut a_term = 0.0;
        let mut b_term = 0.0;
        let mut d_term = 0.0;
        for (idx, &c_s) in self.config.position_factors.iter().enumerate() {
            let s = idx + 1;
            let p = n_bidders - s;
            let binom = binomial((n_bidders - 1) as u64, (s - 1) as u64);
            // Zero coefficients short-circuit before negative powers of Ĝ
            // or (1 − Ĝ) can produce ∞·0.
            let p_g_pow = if p == 0 {
                0.0
            } else {
                p as f64 * gb.powi(p as i32 - 1)
            };
            let one_m_g_sm1 = (1.0 - gb).powi(s as i32 - 1);
            a_term += c_s * binom * one_m_g_sm1 * b * p_g_pow * dens;
            if s >= 2 {
                let one_m_g_sm2 = (1.0 - gb).powi(s as i32 - 2);
                let sm1 = (s - 1) as f64;
                b_term += c_s * binom * sm1 * one_m_g_sm2 * dens * self.integral(s, b);
                d_term += c_s
                    * binom
                    * dens
                    * (p_g_pow * one_m_g_sm1 - sm1 * one_m_g_sm2 * gb.powi(p as i32));
            } else {
                d_term += c_s * binom * dens * p_g_pow * one_m_g_sm1;
            }
        }
        let floored = d_term < DENOMINATOR_FLOOR;
        let den = if floored { DENOMINATOR_FLOOR } else { d_term };
        InvertedBid {
            bid: b,
            valuation: (a_term - b_term) / den,
            floored,
        }
    }
}

/// Inverts a single bid through the estimated equilibrium bid function.
///
/// `ghat`, `gdens`, and `sorted_bids` must all be fitted on the same pooled
/// sample; `b` must lie within the observed bid range (the estimate has no
/// support outside it). Entries whose denominator falls below
/// [`DENOMINATOR_FLOOR`] come back flagged rather than infinite.
pub fn invert_bid(
    b: f64,
    ghat: &EmpiricalCdf,
    gdens: &Kde,
    config: &AuctionConfig,
    sorted_bids: &[f64],
) -> Result<InvertedBid> {
    let ctx = InversionContext::new(ghat, gdens, config, sorted_bids)?;
    let (lo, hi) = (sorted_bids[0], sorted_bids[sorted_bids.len() - 1]);
    if !(b >= lo && b <= hi) {
        return Err(Error::InvalidConfig(format!(
            "bid {b} outside observed range [{lo}, {hi}]"
        )));
    }
    Ok(ctx.invert(b))
}

/// Runs the full recovery pipeline over a dataset of bid profiles.
///
/// Pools the scores of every auction (`e_i·b_i` under rank-by-revenue, the
/// bid itself under rank-by-bid), fits `Ĝ` and `ĝ` on the pool, and inverts
/// each score. Output order matches the input (auction-major, bidder-minor),
/// regardless of the parallel execution underneath.
pub fn recover_valuations(
    dataset: &[BidProfile],
    config: &AuctionConfig,
) -> Result<RecoveredValuations> {
    let mut pooled = Vec::with_capacity(dataset.len() * config.n_bidders);
    for bids in dataset {
        if bids.len() != config.n_bidders {
            return Err(Error::DimensionMismatch {
                what: "bids",
                expected: config.n_bidders,
                got: bids.len(),
            });
        }
        for (i, &b) in bids.bids.iter().enumerate() {
            pooled.push(config.effective_ctr(i) * b);
        }
    }
    if pooled.len() < 10 {
        return Err(Error::InsufficientData {
            what: "pooled bids",
            needed: 10,
            got: pooled.len(),
        });
    }
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let ghat = EmpiricalCdf::new(sorted.clone())?;
    let gdens = Kde::with_rule_of_thumb(sorted.clone())?;
    let ctx = InversionContext::new(&ghat, &gdens, config, &sorted)?;
    let entries: Vec<InvertedBid> = pooled.par_iter().map(|&b| ctx.invert(b)).collect();
    RecoveredValuations::new(entries)
}

/// Number of grid points scanned for sign changes of `h(r) = r·f̂(r) − (1 − F̂(r))`.
pub const FIXED_POINT_GRID: usize = 2000;

/// Bisection stops once the bracketing interval is narrower than this.
pub const FIXED_POINT_TOL: f64 = 1e-6;

/// Outcome of the fixed-point scan: every bracketed root, plus the grid
/// point of smallest `|h|` as a fallback when no sign change exists.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSolve {
    /// Roots of `h`, ascending, each bisected to [`FIXED_POINT_TOL`].
    pub roots: Vec<f64>,
    /// Grid argmin of `|h|`; meaningful when `roots` is empty.
    pub fallback: f64,
    /// `h` at the fallback point.
    pub fallback_h: f64,
}

/// Scans `h(r) = r·dens(r) − (1 − cdf(r))` for roots on `[lo, hi]`.
///
/// `h` is evaluated on a [`FIXED_POINT_GRID`]-point grid; each sign change
/// is refined by bisection to [`FIXED_POINT_TOL`]. The caller supplies the
/// distribution as closures so the same scan serves both the plug-in
/// estimates and exact closed-form distributions.
pub fn solve_fixed_point<C, D>(cdf: C, dens: D, lo: f64, hi: f64) -> Result<FixedPointSolve>
where
    C: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidConfig(format!(
            "fixed-point interval [{lo}, {hi}] must be finite and non-degenerate"
        )));
    }
    let h = |r: f64| r * dens(r) - (1.0 - cdf(r));
    let step = (hi - lo) / (FIXED_POINT_GRID - 1) as f64;
    let grid: Vec<f64> = (0..FIXED_POINT_GRID)
        .map(|i| lo + step * i as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&r| h(r)).collect();
    for (&r, &v) in grid.iter().zip(&values) {
        if !v.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "fixed-point objective is {v} at r = {r}"
            )));
        }
    }
    let mut roots = Vec::new();
    for i in 0..FIXED_POINT_GRID - 1 {
        if values[i] == 0.0 {
            roots.push(grid[i]);
        } else if values[i] * values[i + 1] < 0.0 {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let mut ha = values[i];
            while b - a > FIXED_POINT_TOL {
                let mid = 0.5 * (a + b);
                let hm = h(mid);
                if hm == 0.0 {
                    a = mid;
                    b = mid;
                } else if ha * hm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ha = hm;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    if *values.last().expect("non-empty grid") == 0.0 {
        roots.push(hi);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= FIXED_POINT_TOL);
    let (k, _) = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .expect("non-empty grid");
    Ok(FixedPointSolve {
        roots,
        fallback: grid[k],
        fallback_h: values[k],
    })
}

/// A solved reserve fixed point together with how trustworthy it is.
#[derive(Clone, Debug, PartialEq)]
pub struct ReserveEstimate {
    /// The selected reserve `r̄`.
    pub r_bar: f64,
    /// False when no sign change existed and `r_bar` is merely the grid
    /// argmin of `|h|` — callers should treat the estimate as suspect.
    pub is_root: bool,
    /// All bracketed roots the scan found, ascending.
    pub roots: Vec<f64>,
}

/// Fits `F̂`/`f̂` on the unflagged recovered valuations and solves the
/// reserve fixed point `r̄·f̂(r̄) = 1 − F̂(r̄)`.
///
/// The scan runs over `[min v̂, max v̂]`. When several roots are bracketed
/// (kernel estimates can wiggle), the one with the smallest estimated
/// expected loss on `training` wins; with no training data the smallest
/// root is kept. When no sign change exists the grid argmin of `|h|` is
/// returned with `is_root = false` so callers can refuse to act on it.
pub fn solve_reserve(
    values: &RecoveredValuations,
    training: &[BidProfile],
    config: &AuctionConfig,
) -> Result<ReserveEstimate> {
    let usable = values.unflagged();
    if usable.len() < 10 {
        return Err(Error::InsufficientData {
            what: "unflagged valuations",
            needed: 10,
            got: usable.len(),
        });
    }
    let fhat = EmpiricalCdf::new(usable.clone())?;
    let fdens = Kde::with_rule_of_thumb(usable)?;
    let solve = solve_fixed_point(|r| fhat.eval(r), |r| fdens.eval(r), fhat.min(), fhat.max())?;
    if solve.roots.is_empty() {
        return Ok(ReserveEstimate {
            r_bar: solve.fallback,
            is_root: false,
            roots: Vec::new(),
        });
    }
    let r_bar = if solve.roots.len() == 1 || training.is_empty() {
        solve.roots[0]
    } else {
        let mut best = (f64::INFINITY, solve.roots[0]);
        for &r in &solve.roots {
            let loss = evaluate_reserve(r, training, config)?;
            if loss < best.0 {
                best = (loss, r);
            }
        }
        best.1
    };
    Ok(ReserveEstimate {
        r_bar,
        is_root: true,
        roots: solve.roots,
    })
}

/// Expands the scalar fixed point into the per-bidder reserve vector
/// `r_i = r̄/e_i` (with `e_i = 1` under rank-by-bid).
pub fn reserve_vector(r_bar: f64, config: &AuctionConfig) -> Result<ReserveVector> {
    if !r_bar.is_finite() || r_bar < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "reserve {r_bar} must be finite and ≥ 0"
        )));
    }
    ReserveVector::new(
        (0..config.n_bidders)
            .map(|i| r_bar / config.effective_ctr(i))
            .collect(),
    )
}
