//! Small statistics helpers for the experiment drivers: the two-sample
//! Kolmogorov–Smirnov distance and fixed-range histograms.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Two-sample Kolmogorov–Smirnov statistic
/// `D = sup_x |F̂_a(x) − F̂_b(x)|`, evaluated over the pooled sample points
/// (the supremum of a difference of step functions is attained there).
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData {
            what: "Kolmogorov–Smirnov sample",
            needed: 1,
            got: 0,
        });
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() || j < sb.len() {
        // Advance past the smallest remaining point (and all its ties) in
        // both samples, then compare the CDFs just after it.
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!("loop condition"),
        };
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// A histogram over `[lo, hi]` with equal-width bins; the final bin is
/// closed on the right so the maximum lands inside the range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins `data` into `n_bins` equal-width bins over `[lo, hi]`.
    /// Out-of-range points are an error: callers choose the range from the
    /// pooled data precisely so every series shares the same axes.
    pub fn new(data: &[f64], n_bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if n_bins == 0 || !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "histogram needs n_bins ≥ 1 and a finite range, got {n_bins} bins on [{lo}, {hi}]"
            )));
        }
        let mut counts = vec![0u64; n_bins];
        let width = (hi - lo) / n_bins as f64;
        for &x in data {
            if !(x >= lo && x <= hi) {
                return Err(Error::InvalidConfig(format!(
                    "histogram point {x} outside [{lo}, {hi}]"
                )));
            }
            let k = (((x - lo) / width) as usize).min(n_bins - 1);
            counts[k] += 1;
        }
        Ok(Histogram { lo, hi, counts })
    }

    /// The `(lower, upper)` edges of bin `k`.
    pub fn bin_edges(&self, k: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + width * k as f64, self.lo + width * (k + 1) as f64)
    }

    /// Total number of binned points.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}
