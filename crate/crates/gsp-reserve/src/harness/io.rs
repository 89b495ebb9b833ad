//! File formats: dataset CSV with a provenance sidecar, result records as
//! JSON/CSV, convergence and histogram tables as CSV.
//!
//! Every writer emits bytes that are a pure function of its inputs —
//! no timestamps, no machine identifiers, no hash-map iteration order —
//! so re-running an experiment reproduces every file bit for bit.

use crate::auction::BidProfile;
use crate::equilibrium::EmpiricalBidFunction;
use crate::error::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::experiments::{ConvergenceRun, HistogramRun, ResultRecord, Table1Run};
use super::simulate::{Dataset, Provenance};
use super::stats::Histogram;

/// Derives the sidecar path for a dataset CSV: `x.csv` → `x.meta.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `name.csv` (`auction_id,bidder_id,bid`) and `name.meta.json`
/// (provenance with the SHA-256 of the CSV bytes) into `dir`. Returns the
/// completed provenance record.
pub fn write_dataset(dir: &Path, name: &str, dataset: &Dataset) -> Result<Provenance> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{name}.csv"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["auction_id", "bidder_id", "bid"])?;
    for (a, auction) in dataset.auctions.iter().enumerate() {
        for (i, &b) in auction.bids.iter().enumerate() {
            writer.write_record([a.to_string(), i.to_string(), b.to_string()])?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::NumericalFailure(format!("CSV buffer: {e}")))?;
    fs::write(&csv_path, &bytes)?;
    let mut provenance = dataset.provenance.clone();
    provenance.data_sha256 = hex::encode(Sha256::digest(&bytes));
    fs::write(sidecar_path(&csv_path), to_pretty_json(&provenance)?)?;
    Ok(provenance)
}

/// Loads a dataset CSV and verifies its sidecar: the data hash must match
/// the file bytes, and, when `expected` is given, the recorded config hash
/// must match the experiment about to consume it.
pub fn load_dataset(csv_path: &Path, expected: Option<&ExperimentConfig>) -> Result<Dataset> {
    let bytes = fs::read(csv_path)?;
    let sidecar = sidecar_path(csv_path);
    let provenance: Provenance = serde_json::from_str(&fs::read_to_string(&sidecar)?)?;
    let digest = hex::encode(Sha256::digest(&bytes));
    if digest != provenance.data_sha256 {
        return Err(Error::ProvenanceMismatch {
            path: csv_path.display().to_string(),
            detail: format!(
                "data hash {digest} does not match sidecar {}",
                provenance.data_sha256
            ),
        });
    }
    if let Some(cfg) = expected {
        let expected_hash = cfg.config_hash();
        if expected_hash != provenance.config_hash {
            return Err(Error::ProvenanceMismatch {
                path: csv_path.display().to_string(),
                detail: format!(
                    "dataset was generated under config {} but this run uses {expected_hash}",
                    provenance.config_hash
                ),
            });
        }
    }

    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let mut auctions: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::InvalidConfig(format!(
                "dataset row has {} fields, expected 3",
                record.len()
            )));
        }
        let parse = |idx: usize, what: &str| -> Result<f64> {
            record[idx].parse::<f64>().map_err(|e| {
                Error::InvalidConfig(format!("dataset {what} {:?}: {e}", &record[idx]))
            })
        };
        let auction_id = parse(0, "auction_id")? as usize;
        let bidder_id = parse(1, "bidder_id")? as usize;
        let bid = parse(2, "bid")?;
        if auction_id == auctions.len() {
            auctions.push(Vec::new());
        } else if auction_id > auctions.len() {
            return Err(Error::InvalidConfig(format!(
                "auction ids must be dense and ascending; jumped to {auction_id}"
            )));
        }
        let auction = auctions.last_mut().expect("pushed above");
        if bidder_id != auction.len() {
            return Err(Error::InvalidConfig(format!(
                "bidder ids must count 0..N per auction; got {bidder_id} at position {}",
                auction.len()
            )));
        }
        auction.push(bid);
    }
    if auctions.is_empty() {
        return Err(Error::InsufficientData {
            what: "dataset auctions",
            needed: 1,
            got: 0,
        });
    }
    let width = auctions[0].len();
    let profiles = auctions
        .into_iter()
        .map(|bids| {
            if bids.len() != width {
                return Err(Error::DimensionMismatch {
                    what: "bids",
                    expected: width,
                    got: bids.len(),
                });
            }
            BidProfile::new(bids)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        auctions: profiles,
        provenance,
    })
}

/// Writes one learned record as `{method}.json`.
pub fn write_record(dir: &Path, record: &ResultRecord) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", record.method));
    fs::write(&path, to_pretty_json(record)?)?;
    Ok(path)
}

/// Writes the full revenue comparison: `table1.json` plus a flat
/// `table1.csv` (one row per method).
pub fn write_table1(dir: &Path, run: &Table1Run) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("table1.json"), to_pretty_json(run)?)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "method",
        "reserve",
        "mean_test_revenue",
        "std_error",
        "std_dev",
        "n_test",
    ])?;
    for record in [&run.discriminative, &run.density] {
        writer.write_record([
            record.method.clone(),
            record.reserve.to_string(),
            record.mean_test_revenue.to_string(),
            record.std_error.to_string(),
            record.std_dev.to_string(),
            record.n_test.to_string(),
        ])?;
    }
    writer.write_record([
        "oracle".to_string(),
        run.oracle_reserve.to_string(),
        run.oracle_revenue.to_string(),
        String::new(),
        String::new(),
        run.discriminative.n_test.to_string(),
    ])?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::NumericalFailure(format!("CSV buffer: {e}")))?;
    fs::write(dir.join("table1.csv"), bytes)?;
    Ok(())
}

/// Writes `convergence.csv` (`n,rep,sup_error`) and
/// `convergence_summary.json` (per-n statistics plus the envelope constant).
pub fn write_convergence(dir: &Path, run: &ConvergenceRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["n", "rep", "sup_error"])?;
    for row in &run.table.rows {
        writer.write_record([
            row.n.to_string(),
            row.rep.to_string(),
            row.sup_error.to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::NumericalFailure(format!("CSV buffer: {e}")))?;
    fs::write(dir.join("convergence.csv"), bytes)?;

    let summaries: Vec<serde_json::Value> = run
        .table
        .summaries()
        .iter()
        .map(|s| {
            serde_json::json!({
                "n": s.n,
                "mean": s.mean,
                "min": s.min,
                "max": s.max,
                "median": s.median,
            })
        })
        .collect();
    let summary = serde_json::json!({
        "reference_n": run.table.reference_n,
        "fitted_c": run.fitted_c,
        "summaries": summaries,
    });
    fs::write(
        dir.join("convergence_summary.json"),
        to_pretty_json(&summary)?,
    )?;
    Ok(())
}

fn write_histogram_csv(path: &Path, hist: &Histogram) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["bin_lo", "bin_hi", "count"])?;
    for k in 0..hist.counts.len() {
        let (lo, hi) = hist.bin_edges(k);
        writer.write_record([lo.to_string(), hi.to_string(), hist.counts[k].to_string()])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::NumericalFailure(format!("CSV buffer: {e}")))?;
    fs::write(path, bytes)?;
    Ok(())
}

/// Writes the three comparison histograms (`*_valuations.csv`) and a
/// `histograms_summary.json` with both Kolmogorov–Smirnov distances.
pub fn write_histograms(dir: &Path, run: &HistogramRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_histogram_csv(&dir.join("true_valuations.csv"), &run.true_hist)?;
    write_histogram_csv(&dir.join("sne_valuations.csv"), &run.sne_hist)?;
    write_histogram_csv(&dir.join("density_valuations.csv"), &run.density_hist)?;
    let summary = serde_json::json!({
        "ks_true_vs_sne": run.ks_sne,
        "ks_true_vs_density": run.ks_density,
        "n_true": run.true_valuations.len(),
        "n_sne": run.sne_valuations.len(),
        "n_density": run.density_valuations.len(),
    });
    fs::write(
        dir.join("histograms_summary.json"),
        to_pretty_json(&summary)?,
    )?;
    Ok(())
}

/// Writes the fitted bid function as `bid_function.csv` (`value,bid`).
pub fn write_bid_function(dir: &Path, beta: &EmpiricalBidFunction) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["value", "bid"])?;
    for (v, b) in beta.grid_values.iter().zip(&beta.grid_bids) {
        writer.write_record([v.to_string(), b.to_string()])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::NumericalFailure(format!("CSV buffer: {e}")))?;
    fs::write(dir.join("bid_function.csv"), bytes)?;
    Ok(())
}
