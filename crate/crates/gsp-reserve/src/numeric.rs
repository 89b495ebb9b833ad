//! Small numeric helpers shared across modules: combinatorial coefficients
//! that stay exact for the bidder counts we care about, and an
//! order-independent summation primitive.

use statrs::function::gamma::ln_gamma;

/// Largest `n` for which binomial/multinomial coefficients are computed by
/// exact integer arithmetic (the results fit comfortably in `u128` and are
/// exactly representable in `f64` for three-part splits).
const EXACT_LIMIT: u64 = 20;

/// Binomial coefficient `C(n, k)` as `f64`.
///
/// Exact for `n <= 20`; computed via log-gamma for larger arguments to avoid
/// overflow. Returns 0 for `k > n`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        binomial_u128(n, k) as f64
    } else {
        ln_choose(n, k).exp()
    }
}

/// Trinomial coefficient `n! / (j! k! (n-j-k)!)` as `f64`.
///
/// Exact for `n <= 20`; log-gamma otherwise. Returns 0 when `j + k > n`.
pub fn multinomial3(n: u64, j: u64, k: u64) -> f64 {
    if j + k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        (binomial_u128(n, j) * binomial_u128(n - j, k)) as f64
    } else {
        (ln_choose(n, j) + ln_choose(n - j, k)).exp()
    }
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Multiply before dividing; the intermediate product of a valid
        // binomial prefix is always divisible by (i + 1).
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Sums a slice by recursive pairwise reduction.
///
/// The result depends only on the slice contents (never on thread scheduling),
/// and the error constant is O(log n) rather than O(n), which keeps the
/// determinism contract cheap to honor for large accumulations.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Factorial-based oracle, valid up to 34! (u128 overflow above).
    fn multinomial3_factorial(n: u64, j: u64, k: u64) -> f64 {
        fn fact(n: u64) -> u128 {
            (1..=n as u128).product::<u128>().max(1)
        }
        (fact(n) / (fact(j) * fact(k) * fact(n - j - k))) as f64
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(10, 10), 1.0);
        assert_eq!(binomial(4, 7), 0.0);
    }

    #[test]
    fn multinomial_matches_factorial_oracle_in_exact_range() {
        for n in 0..=12u64 {
            for j in 0..=n {
                for k in 0..=(n - j) {
                    assert_eq!(
                        multinomial3(n, j, k),
                        multinomial3_factorial(n, j, k),
                        "n={n} j={j} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn log_gamma_path_agrees_with_exact_path() {
        // n = 21..34 exercises the log-gamma branch; the factorial oracle is
        // still exact there, so agreement must hold to floating precision.
        for n in 21..=30u64 {
            for &(j, k) in &[(0, 0), (1, 3), (n / 2, n / 4), (n - 1, 1), (n, 0)] {
                if j + k > n {
                    continue;
                }
                let exact = multinomial3_factorial(n, j, k);
                let approx = multinomial3(n, j, k);
                assert!(
                    ((approx - exact) / exact).abs() < 1e-12,
                    "n={n} j={j} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn pairwise_sum_matches_sequential_on_benign_input() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let seq: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - seq).abs() < 1e-9);
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[3.5]), 3.5);
    }
}
