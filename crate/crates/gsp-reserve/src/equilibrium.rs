//! Discrete symmetric-equilibrium bid functions for the GSP.
//!
//! The continuous equilibrium ODE has no usable quadrature scheme, so the
//! equilibrium is computed on the empirical grid of a sorted valuation sample
//! `v_1 < … < v_n`: with `F_i = i/n` and `G_i = 1 − F_i`, the discrete bid
//! vector β solves a lower-triangular linear system `M β = u` whose entries
//! are rank probabilities of the discrete order-statistics model. Forward
//! substitution then yields `β_i = β̂(v_i)` and [`bid_at`] interpolates between
//! grid knots.
//!
//! [`convergence_sweep`] re-solves the system on fresh samples of increasing
//! size and measures the sup-distance to a large-sample reference solution,
//! reproducing the empirical `O(1/√n)` convergence study.

use crate::auction::AuctionConfig;
use crate::error::{Error, Result};
use crate::numeric::{binomial, multinomial3};
use crate::seed::SeedTree;
use rayon::prelude::*;

/// Minimum spacing injected between tied valuations before building grids.
const TIE_EPSILON: f64 = 1e-12;

/// A sorted sample of valuations (or quality scores).
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationSample {
    values: Vec<f64>,
}

impl ValuationSample {
    /// Sorts and validates a sample (finite, non-negative entries).
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "valuation {v} must be finite and ≥ 0"
                )));
            }
        }
        values.sort_by(f64::total_cmp);
        Ok(ValuationSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The empirical CDF grid `F_i = i/n` and its complement `G_i = 1 − F_i`,
/// indexed 0..=n with the conventions `F_0 = 0`, `G_0 = 1`.
#[derive(Clone, Debug)]
pub struct EmpiricalGrids {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl EmpiricalGrids {
    pub fn new(n: usize) -> Self {
        let f: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let g: Vec<f64> = f.iter().map(|&fi| 1.0 - fi).collect();
        EmpiricalGrids { f, g }
    }
}

/// Lower-triangular system `M β = u` on the valuation grid.
///
/// `M` is stored packed by rows (row `i` holds entries `j ≤ i`); the grid
/// values are carried along so the solution knows its knots.
#[derive(Clone, Debug)]
pub struct TriangularSystem {
    n: usize,
    /// Packed rows of M: entry (i, j), 0-indexed, lives at `i(i+1)/2 + j`.
    m: Vec<f64>,
    u: Vec<f64>,
    values: Vec<f64>,
}

impl TriangularSystem {
    /// Entry `M_{ij}` (0-indexed); zero above the diagonal.
    pub fn m(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.m[i * (i + 1) / 2 + j]
        }
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid knots (tie-perturbed sorted valuations).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `‖Mβ − u‖_∞`, for solver verification.
    pub fn residual_inf_norm(&self, beta: &[f64]) -> f64 {
        assert_eq!(beta.len(), self.n);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let row = &self.m[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            let mb: f64 = row.iter().zip(beta).map(|(m, b)| m * b).sum();
            worst = worst.max((mb - self.u[i]).abs());
        }
        worst
    }
}

/// Post-solve observations about an [`EmpiricalBidFunction`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveDiagnostics {
    /// Number of grid points with β_i < 0.
    pub negative_bids: usize,
    /// Number of adjacent pairs violating monotonicity by more than 1e−9.
    pub monotonicity_violations: usize,
    /// Largest decrease β_{i−1} − β_i observed (0 if monotone).
    pub max_monotonicity_violation: f64,
    /// Largest overshoot β_i − v_i (equilibrium bids should never exceed
    /// the valuation behind them).
    pub max_excess_over_value: f64,
}

impl SolveDiagnostics {
    /// True when bids are non-negative, monotone to 1e−9, and at most
    /// `slack` above their valuations.
    pub fn is_clean(&self, slack: f64) -> bool {
        self.negative_bids == 0
            && self.monotonicity_violations == 0
            && self.max_excess_over_value <= slack
    }
}

/// The discrete equilibrium bid function: knots `(v_i, β_i)`.
#[derive(Clone, Debug)]
pub struct EmpiricalBidFunction {
    pub grid_values: Vec<f64>,
    pub grid_bids: Vec<f64>,
    pub diagnostics: SolveDiagnostics,
}

/// Probability of winning slot `s` for a bidder at CDF value `f` in the
/// continuous model: `C(N−1, s−1)·(1−f)^{s−1}·f^{N−s}`.
///
/// `s` ranges over all N ranks (summing over them yields 1).
pub fn z_continuous(s: usize, f: f64, config: &AuctionConfig) -> Result<f64> {
    let n_bidders = config.n_bidders;
    if s == 0 || s > n_bidders {
        return Err(Error::InvalidConfig(format!(
            "rank s = {s} outside 1..={n_bidders}"
        )));
    }
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidConfig(format!("CDF value {f} outside [0,1]")));
    }
    let p = (n_bidders - s) as i32;
    Ok(binomial(n_bidders as u64 - 1, s as u64 - 1) * (1.0 - f).powi(s as i32 - 1) * f.powi(p))
}

/// Shared kernel of `z_hat` and the diagonal entries `M_{ii}(s)`:
/// `Σ_{j=0}^{j_max} Σ_{k=0}^{s−1} multinom(N−1; j,k)·F_{i−1}^j·G_i^k / ((N−j−k)·n^{N−1−j−k})`.
fn z_hat_sum(s: usize, i: usize, n: usize, n_bidders: usize, j_max: isize) -> f64 {
    debug_assert!(s >= 1 && s <= n_bidders && i >= 1 && i <= n);
    let f_prev = (i - 1) as f64 / n as f64;
    let g_i = 1.0 - i as f64 / n as f64;
    let nf = n as f64;
    let mut total = 0.0;
    let mut j = 0isize;
    while j <= j_max {
        for k in 0..s {
            let rest = n_bidders - 1 - j as usize - k;
            let coeff = multinomial3(n_bidders as u64 - 1, j as u64, k as u64);
            total += coeff * f_prev.powi(j as i32) * g_i.powi(k as i32)
                / ((n_bidders - j as usize - k) as f64 * nf.powi(rest as i32));
        }
        j += 1;
    }
    total
}

/// Discrete probability that the bidder holding the i-th sorted valuation
/// wins rank `s`: a double sum over how many opponents draw a grid value
/// below i and how many tie with it.
pub fn z_hat(s: usize, i: usize, n: usize, config: &AuctionConfig) -> f64 {
    z_hat_sum(s, i, n, config.n_bidders, (config.n_bidders - s) as isize)
}

/// Left limit `ẑ_s⁻(v_i) = C(N−1,s−1)·F_{i−1}^{N−s}·G_{i−1}^{s−1}`: the rank-s
/// probability when bidding just below the i-th value.
pub fn z_hat_minus(s: usize, i: usize, n: usize, config: &AuctionConfig) -> f64 {
    let n_bidders = config.n_bidders;
    debug_assert!(s >= 1 && s <= n_bidders && i >= 1 && i <= n);
    let f_prev = (i - 1) as f64 / n as f64;
    let g_prev = 1.0 - (i - 1) as f64 / n as f64;
    binomial(n_bidders as u64 - 1, s as u64 - 1)
        * f_prev.powi((n_bidders - s) as i32)
        * g_prev.powi(s as i32 - 1)
}

/// Returns a strictly increasing copy of the sorted values, separating ties
/// by `TIE_EPSILON` steps.
fn separate_ties(values: &[f64]) -> Result<Vec<f64>> {
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig(
            "valuation sample is not sorted ascending".into(),
        ));
    }
    let mut v = values.to_vec();
    for i in 1..v.len() {
        if v[i] <= v[i - 1] {
            v[i] = v[i - 1] + TIE_EPSILON;
        }
    }
    Ok(v)
}

/// Assembles the lower-triangular equilibrium system `M β = u` of a sample.
///
/// `M = Σ_s c_s M(s)` where the diagonal `M_{ii}(s)` is the slot-win sum
/// truncated to `j ≤ N−s−1` (the strictly-priced configurations) and the
/// off-diagonal, for `i > j`, is
/// `M_{ij}(s) = −C(N−1,s−1)·n·Δ(F^p)_j·Δ(G^s)_i / s` with backward differences
/// of the *powered* grids (`F_0 = 0`, `G_0 = 1`).
/// `u_i = Σ_s c_s ( ẑ_s(v_i)·v_i − Σ_{j≤i} ẑ_s⁻(v_j)·Δv_j )`.
pub fn build_system(sample: &ValuationSample, config: &AuctionConfig) -> Result<TriangularSystem> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            what: "equilibrium system",
            needed: 2,
            got: n,
        });
    }
    let values = separate_ties(sample.values())?;
    let grids = EmpiricalGrids::new(n);
    let n_bidders = config.n_bidders;
    let nf = n as f64;

    let mut m = vec![0.0f64; n * (n + 1) / 2];
    let mut u = vec![0.0f64; n];

    for s in 1..=config.n_slots {
        let c_s = config.position_factors[s - 1];
        let p = n_bidders - s;
        let binom = binomial(n_bidders as u64 - 1, s as u64 - 1);

        // Backward differences of the powered grids. For p = 0 (slot N) the
        // F-differences vanish identically and slot N contributes nothing to
        // M — the last slot has nobody below it to set a price.
        let df_p: Vec<f64> = (1..=n)
            .map(|j| grids.f[j].powi(p as i32) - grids.f[j - 1].powi(p as i32))
            .collect();
        let dg_s: Vec<f64> = (1..=n)
            .map(|i| grids.g[i].powi(s as i32) - grids.g[i - 1].powi(s as i32))
            .collect();

        for i in 1..=n {
            let row = &mut m[(i - 1) * i / 2..(i - 1) * i / 2 + i];
            // Diagonal: the j ≤ N−s−1 truncation of the slot-win sum.
            row[i - 1] += c_s * z_hat_sum(s, i, n, n_bidders, p as isize - 1);
            // Off-diagonal: rank-1 outer product in (i, j).
            let scale = -c_s * binom * nf * dg_s[i - 1] / s as f64;
            if scale != 0.0 {
                for j in 1..i {
                    row[j - 1] += scale * df_p[j - 1];
                }
            }
        }

        // u accumulates the payoff terms with a running ẑ⁻ prefix sum.
        let mut prefix = 0.0;
        for i in 1..=n {
            let dv = if i == 1 {
                values[0]
            } else {
                values[i - 1] - values[i - 2]
            };
            prefix += z_hat_minus(s, i, n, config) * dv;
            u[i - 1] += c_s * (z_hat(s, i, n, config) * values[i - 1] - prefix);
        }
    }

    Ok(TriangularSystem { n, m, u, values })
}

/// Solves `M β = u` by forward substitution.
///
/// Fails with a structured error if any diagonal entry is zero or negative
/// (e.g. the degenerate N = S = 1 system, whose slot never prices).
pub fn solve(system: &TriangularSystem) -> Result<EmpiricalBidFunction> {
    let n = system.n;
    let mut beta = vec![0.0f64; n];
    for i in 0..n {
        let diag = system.m(i, i);
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::SingularDiagonal {
                index: i,
                value: diag,
            });
        }
        let row = &system.m[i * (i + 1) / 2..i * (i + 1) / 2 + i];
        let dot: f64 = row.iter().zip(&beta).map(|(m, b)| m * b).sum();
        beta[i] = (system.u[i] - dot) / diag;
    }

    let mut diagnostics = SolveDiagnostics::default();
    for i in 0..n {
        if beta[i] < 0.0 {
            diagnostics.negative_bids += 1;
        }
        diagnostics.max_excess_over_value = diagnostics
            .max_excess_over_value
            .max(beta[i] - system.values[i]);
        if i > 0 {
            let drop = beta[i - 1] - beta[i];
            if drop > 1e-9 {
                diagnostics.monotonicity_violations += 1;
                diagnostics.max_monotonicity_violation =
                    diagnostics.max_monotonicity_violation.max(drop);
            }
        }
    }

    Ok(EmpiricalBidFunction {
        grid_values: system.values.clone(),
        grid_bids: beta,
        diagnostics,
    })
}

/// Piecewise-linear interpolation of the bid function, clamped to
/// `[β_1, β_n]` outside the grid.
pub fn bid_at(f: &EmpiricalBidFunction, v: f64) -> f64 {
    let values = &f.grid_values;
    let bids = &f.grid_bids;
    assert!(!values.is_empty(), "empty bid function");
    if v <= values[0] {
        return bids[0];
    }
    if v >= values[values.len() - 1] {
        return bids[bids.len() - 1];
    }
    // First index with values[idx] > v; the knot below is idx − 1.
    let idx = values.partition_point(|&x| x <= v);
    let (v0, v1) = (values[idx - 1], values[idx]);
    let (b0, b1) = (bids[idx - 1], bids[idx]);
    if v1 == v0 {
        return b0;
    }
    b0 + (b1 - b0) * (v - v0) / (v1 - v0)
}

/// One repetition's result in a convergence study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub rep: usize,
    pub sup_error: f64,
}

/// Per-n summary of sup-errors across repetitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceSummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

/// Full output of [`convergence_sweep`].
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub reference_n: usize,
}

impl ConvergenceTable {
    /// Mean/min/max/median sup-error per sample size, ascending in n.
    pub fn summaries(&self) -> Vec<ConvergenceSummary> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.iter()
            .map(|&n| {
                let mut errors: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.n == n)
                    .map(|r| r.sup_error)
                    .collect();
                errors.sort_by(f64::total_cmp);
                let count = errors.len();
                let median = if count % 2 == 1 {
                    errors[count / 2]
                } else {
                    0.5 * (errors[count / 2 - 1] + errors[count / 2])
                };
                ConvergenceSummary {
                    n,
                    mean: errors.iter().sum::<f64>() / count as f64,
                    min: errors[0],
                    max: errors[count - 1],
                    median,
                }
            })
            .collect()
    }

    /// Median sup-error at a given n (panics if n was not swept).
    pub fn median_sup_error(&self, n: usize) -> f64 {
        self.summaries()
            .into_iter()
            .find(|s| s.n == n)
            .map(|s| s.median)
            .expect("sample size not present in convergence table")
    }
}

/// Re-solves the equilibrium on fresh samples of each size in `n_list`
/// (`reps` times each) and measures `sup_i |β̂_n(v_i) − β_ref(v_i)|` against a
/// reference solution of size `reference_n`, interpolated via [`bid_at`].
///
/// The sup runs over the repetition's knots that fall inside the reference
/// grid's range: outside it `bid_at` clamps, so a single extreme draw would
/// measure extrapolation mismatch rather than estimation error (for unbounded
/// distributions a fresh sample overshoots the reference maximum with
/// probability n/(n + reference_n)).
///
/// The sampler receives a derived seed and a count and must return that many
/// valuations. Repetitions run in parallel; results depend only on the seeds.
pub fn convergence_sweep<S>(
    sampler: &S,
    n_list: &[usize],
    reps: usize,
    config: &AuctionConfig,
    reference_n: usize,
    master_seed: u64,
) -> Result<ConvergenceTable>
where
    S: Fn(u64, usize) -> Result<ValuationSample> + Sync,
{
    let max_n = n_list
        .iter()
        .copied()
        .max()
        .ok_or(Error::InsufficientData {
            what: "convergence sweep sizes",
            needed: 1,
            got: 0,
        })?;
    if reps == 0 {
        return Err(Error::InsufficientData {
            what: "convergence repetitions",
            needed: 1,
            got: 0,
        });
    }
    if reference_n < max_n {
        return Err(Error::InvalidConfig(format!(
            "reference_n = {reference_n} must be ≥ max(n_list) = {max_n}"
        )));
    }

    let seeds = SeedTree::new(master_seed);
    let reference_sample = sampler(seeds.child("reference").seed_u64(), reference_n)?;
    let reference = solve(&build_system(&reference_sample, config)?)?;
    let ref_lo = reference.grid_values[0];
    let ref_hi = reference.grid_values[reference.grid_values.len() - 1];

    let jobs: Vec<(usize, usize)> = n_list
        .iter()
        .flat_map(|&n| (0..reps).map(move |rep| (n, rep)))
        .collect();
    let rows: Vec<ConvergenceRow> = jobs
        .par_iter()
        .map(|&(n, rep)| -> Result<ConvergenceRow> {
            let seed = seeds.indexed(&format!("n/{n}/rep"), rep).seed_u64();
            let sample = sampler(seed, n)?;
            let solution = solve(&build_system(&sample, config)?)?;
            let sup_error = solution
                .grid_values
                .iter()
                .zip(&solution.grid_bids)
                .filter(|(&v, _)| v >= ref_lo && v <= ref_hi)
                .map(|(&v, &b)| (b - bid_at(&reference, v)).abs())
                .fold(0.0f64, f64::max);
            Ok(ConvergenceRow { n, rep, sup_error })
        })
        .collect::<Result<_>>()?;

    Ok(ConvergenceTable { rows, reference_n })
}
