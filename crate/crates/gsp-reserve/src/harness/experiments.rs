//! Experiment drivers: train both reserve learners and score them on a
//! fresh test split, measure equilibrium convergence rates, and compare
//! valuation-recovery methods histogram-to-histogram.

use crate::auction::simplified_loss;
use crate::density::{recover_valuations, solve_reserve, RecoveredValuations};
use crate::equilibrium::{convergence_sweep, ConvergenceTable};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::sweep::{extract_breakpoints, minimize};
use serde::{Deserialize, Serialize};
use std::time::Instant;

use super::config::{sample_valuations_from_seed, ExperimentConfig};
use super::simulate::{simulate_auctions, Dataset, Simulation};
use super::sne::sne_recover;
use super::stats::{ks_distance, Histogram};

/// One trained method's outcome on the test split.
///
/// `runtime_seconds` is informational only and deliberately excluded from
/// serialization: emitted files must be a pure function of the
/// configuration, and wall-clock time is not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub method: String,
    /// The scalar reserve r̄ (score space).
    pub reserve: f64,
    /// Per-bidder expansion r_i = r̄/e_i.
    pub reserve_vector: Vec<f64>,
    /// Mean of per-auction revenue (= −simplified loss) on the test split.
    pub mean_test_revenue: f64,
    /// Standard error of that mean over test auctions.
    pub std_error: f64,
    /// Standard deviation of per-auction revenue (n − 1 divisor).
    pub std_dev: f64,
    pub n_test: usize,
    /// For the density method: whether the fixed point was a genuine root
    /// (`None` for methods without a root-finding step).
    pub is_root: Option<bool>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

/// Mean, standard error, and standard deviation of per-auction revenue at
/// scalar reserve `r_bar`.
pub fn revenue_on(
    dataset: &Dataset,
    config: &crate::auction::AuctionConfig,
    r_bar: f64,
) -> Result<(f64, f64, f64)> {
    if dataset.auctions.is_empty() {
        return Err(Error::InsufficientData {
            what: "revenue evaluation",
            needed: 1,
            got: 0,
        });
    }
    let revenues: Vec<f64> = dataset
        .auctions
        .iter()
        .map(|bids| -simplified_loss(r_bar, config, bids))
        .collect();
    let n = revenues.len() as f64;
    let mean = pairwise_sum(&revenues) / n;
    let sq: Vec<f64> = revenues.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let sd = if revenues.len() > 1 {
        (pairwise_sum(&sq) / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok((mean, sd / n.sqrt(), sd))
}

/// Everything `run_table1` produces: both records plus the empirical-oracle
/// revenue (the best constant reserve chosen on the test set itself, an
/// upper bound no honest learner can beat on the same data).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Run {
    pub discriminative: ResultRecord,
    pub density: ResultRecord,
    pub oracle_reserve: f64,
    pub oracle_revenue: f64,
}

/// The two reserve learners the experiments compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnMethod {
    /// The breakpoint sweep minimizing the empirical revenue loss directly.
    Sweep,
    /// The density pipeline: invert bids, fit F̂/f̂, solve the fixed point.
    Density,
}

impl LearnMethod {
    /// The method name used in records and file names.
    pub fn name(self) -> &'static str {
        match self {
            LearnMethod::Sweep => "discriminative",
            LearnMethod::Density => "density",
        }
    }
}

/// Trains one learner on `train` and scores it on the experiment's
/// (simulated) test split.
pub fn run_learn(
    cfg: &ExperimentConfig,
    method: LearnMethod,
    train: &Dataset,
) -> Result<ResultRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let (r_bar, is_root) = match method {
        LearnMethod::Sweep => {
            let breakpoints = extract_breakpoints(&train.auctions, &cfg.auction)?;
            (minimize(&breakpoints)?.reserve, None)
        }
        LearnMethod::Density => {
            let recovered = recover_valuations(&train.auctions, &cfg.auction)?;
            let estimate = solve_reserve(&recovered, &train.auctions, &cfg.auction)?;
            (estimate.r_bar, Some(estimate.is_root))
        }
    };
    let runtime = start.elapsed().as_secs_f64();
    let test = simulate_auctions(cfg, cfg.n_test, "test")?;
    finish_record(method.name(), r_bar, is_root, runtime, &test.dataset, cfg)
}

/// Trains the breakpoint-sweep learner and the density pipeline on
/// `n_train` simulated auctions and evaluates both on `n_test` fresh ones.
pub fn run_table1(cfg: &ExperimentConfig) -> Result<Table1Run> {
    cfg.validate()?;
    let train = simulate_auctions(cfg, cfg.n_train, "train")?;
    let discriminative = run_learn(cfg, LearnMethod::Sweep, &train.dataset)?;
    let density = run_learn(cfg, LearnMethod::Density, &train.dataset)?;

    // Empirical oracle: minimize the same loss directly on the test split.
    let test = simulate_auctions(cfg, cfg.n_test, "test")?;
    let oracle = minimize(&extract_breakpoints(&test.dataset.auctions, &cfg.auction)?)?;
    let (oracle_revenue, _, _) = revenue_on(&test.dataset, &cfg.auction, oracle.reserve)?;

    Ok(Table1Run {
        discriminative,
        density,
        oracle_reserve: oracle.reserve,
        oracle_revenue,
    })
}

fn finish_record(
    method: &str,
    r_bar: f64,
    is_root: Option<bool>,
    runtime_seconds: f64,
    test: &Dataset,
    cfg: &ExperimentConfig,
) -> Result<ResultRecord> {
    let (mean, se, sd) = revenue_on(test, &cfg.auction, r_bar)?;
    let reserve_vector = crate::density::reserve_vector(r_bar.max(0.0), &cfg.auction)?;
    Ok(ResultRecord {
        method: method.to_string(),
        reserve: r_bar,
        reserve_vector: reserve_vector.reserves,
        mean_test_revenue: mean,
        std_error: se,
        std_dev: sd,
        n_test: test.auctions.len(),
        is_root,
        runtime_seconds,
    })
}

/// Output of [`run_convergence`]: the raw per-(n, rep) table plus the
/// envelope constant `c = max_n median_n·√n`, the smallest constant for
/// which every median sits on or below `c/√n`.
#[derive(Clone, Debug)]
pub struct ConvergenceRun {
    pub table: ConvergenceTable,
    pub fitted_c: f64,
}

/// Drives the equilibrium convergence sweep with valuations drawn from the
/// experiment's configured distribution.
pub fn run_convergence(
    cfg: &ExperimentConfig,
    n_list: &[usize],
    reps: usize,
) -> Result<ConvergenceRun> {
    cfg.validate()?;
    let dist = cfg.valuation_dist.clone();
    let sampler = move |seed: u64, count: usize| sample_valuations_from_seed(&dist, count, seed);
    let table = convergence_sweep(
        &sampler,
        n_list,
        reps,
        &cfg.auction,
        cfg.equilibrium_grid_n,
        cfg.master_seed,
    )?;
    let fitted_c = table
        .summaries()
        .iter()
        .map(|s| s.median * (s.n as f64).sqrt())
        .fold(0.0f64, f64::max);
    Ok(ConvergenceRun { table, fitted_c })
}

/// The three-way histogram comparison: true valuations vs. the SNE baseline
/// vs. the density pipeline, all on the training split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRun {
    pub true_hist: Histogram,
    pub sne_hist: Histogram,
    pub density_hist: Histogram,
    /// KS(true, SNE-recovered).
    pub ks_sne: f64,
    /// KS(true, density-recovered).
    pub ks_density: f64,
    /// The samples behind the histograms, for downstream checks.
    pub true_valuations: Vec<f64>,
    pub sne_valuations: Vec<f64>,
    pub density_valuations: Vec<f64>,
}

/// Number of bins in the comparison histograms.
pub const HISTOGRAM_BINS: usize = 40;

/// Recovers valuations from the training split by both methods and bins
/// everything on one shared axis.
pub fn run_histograms(cfg: &ExperimentConfig) -> Result<HistogramRun> {
    cfg.validate()?;
    let Simulation {
        dataset,
        true_valuations,
    } = simulate_auctions(cfg, cfg.n_train, "train")?;
    let sne = sne_recover(&dataset, &cfg.auction)?.unflagged();
    let density = recover_valuations(&dataset.auctions, &cfg.auction)?;
    let density_vals: Vec<f64> = clamp_non_negative(density.unflagged());
    let ks_sne = ks_distance(&true_valuations, &sne)?;
    let ks_density = ks_distance(&true_valuations, &density_vals)?;
    let hi = true_valuations
        .iter()
        .chain(&sne)
        .chain(&density_vals)
        .fold(0.0f64, |a, &x| a.max(x));
    let hi = if hi > 0.0 { hi } else { 1.0 };
    Ok(HistogramRun {
        true_hist: Histogram::new(&true_valuations, HISTOGRAM_BINS, 0.0, hi)?,
        sne_hist: Histogram::new(&sne, HISTOGRAM_BINS, 0.0, hi)?,
        density_hist: Histogram::new(&density_vals, HISTOGRAM_BINS, 0.0, hi)?,
        ks_sne,
        ks_density,
        true_valuations,
        sne_valuations: sne,
        density_valuations: density_vals,
    })
}

/// The inversion can undershoot slightly below zero near the support's left
/// edge where Ĝ ≈ 0; valuations are non-negative by assumption, so clip for
/// the comparison instead of discarding.
fn clamp_non_negative(values: Vec<f64>) -> Vec<f64> {
    values.into_iter().map(|v| v.max(0.0)).collect()
}

/// Re-checks a stored record against a dataset: the recorded revenue must
/// equal an independent re-evaluation of the stored reserve to `tol`.
pub fn verify_record(
    record: &ResultRecord,
    test: &Dataset,
    config: &crate::auction::AuctionConfig,
    tol: f64,
) -> Result<()> {
    let (mean, _, _) = revenue_on(test, config, record.reserve)?;
    if (mean - record.mean_test_revenue).abs() > tol {
        return Err(Error::ProvenanceMismatch {
            path: record.method.clone(),
            detail: format!(
                "stored revenue {} but re-evaluation gives {mean}",
                record.mean_test_revenue
            ),
        });
    }
    Ok(())
}

/// Validated, provenance-checked view of recovered valuations used by the
/// CLI `histograms` subcommand when re-loading is needed.
pub fn recovered_from_dataset(
    dataset: &Dataset,
    config: &crate::auction::AuctionConfig,
) -> Result<RecoveredValuations> {
    recover_valuations(&dataset.auctions, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_benchmark(seed: u64) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::benchmark(seed);
        cfg.n_train = 60;
        cfg.n_test = 80;
        cfg.equilibrium_grid_n = 400;
        cfg
    }

    #[test]
    fn table1_runs_and_the_oracle_dominates() {
        let run = run_table1(&small_benchmark(3)).unwrap();
        assert_eq!(run.discriminative.method, "discriminative");
        assert_eq!(run.density.method, "density");
        assert_eq!(run.discriminative.n_test, 80);
        // The oracle reserve minimizes the test loss exactly, so no learner
        // can beat it on the same data.
        assert!(run.discriminative.mean_test_revenue <= run.oracle_revenue + 1e-12);
        assert!(run.density.mean_test_revenue <= run.oracle_revenue + 1e-12);
        // Stored revenue matches an independent re-evaluation.
        let test = simulate_auctions(&small_benchmark(3), 80, "test").unwrap();
        verify_record(
            &run.discriminative,
            &test.dataset,
            &small_benchmark(3).auction,
            1e-9,
        )
        .unwrap();
        verify_record(
            &run.density,
            &test.dataset,
            &small_benchmark(3).auction,
            1e-9,
        )
        .unwrap();
        // And a tampered record is caught.
        let mut bad = run.discriminative.clone();
        bad.mean_test_revenue += 0.5;
        assert!(verify_record(&bad, &test.dataset, &small_benchmark(3).auction, 1e-9).is_err());
    }

    #[test]
    fn table1_is_deterministic() {
        let a = run_table1(&small_benchmark(5)).unwrap();
        let b = run_table1(&small_benchmark(5)).unwrap();
        // Everything except wall-clock runtime must match bit for bit.
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn convergence_run_reports_the_envelope_constant() {
        let mut cfg = small_benchmark(9);
        cfg.auction = crate::auction::AuctionConfig::new(
            3,
            2,
            vec![1.0, 0.5],
            vec![1.0; 3],
            crate::auction::RankingRule::RankByBid,
        )
        .unwrap();
        cfg.valuation_dist = super::super::config::ValuationDist::Uniform { lo: 0.0, hi: 1.0 };
        cfg.equilibrium_grid_n = 400;
        let run = run_convergence(&cfg, &[50, 100], 3).unwrap();
        assert_eq!(run.table.rows.len(), 6);
        let expected = run
            .table
            .summaries()
            .iter()
            .map(|s| s.median * (s.n as f64).sqrt())
            .fold(0.0f64, f64::max);
        assert_eq!(run.fitted_c, expected);
        assert!(run.fitted_c > 0.0);
    }

    #[test]
    fn histogram_run_compares_three_series_on_one_axis() {
        let run = run_histograms(&small_benchmark(13)).unwrap();
        assert_eq!(run.true_hist.counts.len(), HISTOGRAM_BINS);
        assert_eq!(run.true_hist.total() as usize, run.true_valuations.len());
        assert_eq!(run.sne_hist.total() as usize, run.sne_valuations.len());
        assert_eq!(
            run.density_hist.total() as usize,
            run.density_valuations.len()
        );
        assert_eq!(run.true_hist.lo, run.density_hist.lo);
        assert_eq!(run.true_hist.hi, run.sne_hist.hi);
        assert!(run.ks_sne > 0.0 && run.ks_density > 0.0);
    }
}
