//! Small statistical helpers for the Monte Carlo checks.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Standard error of a Bernoulli frequency with success probability `p`.
pub fn bernoulli_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Wilson score interval for `successes` out of `trials` at `z` standard deviations.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Pearson chi-square statistic and p-value against a uniform distribution.
pub fn chi_square_uniform(counts: &[usize]) -> (f64, f64) {
    let total: usize = counts.iter().sum();
    let k = counts.len();
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("at least two categories");
    (stat, 1.0 - dist.cdf(stat))
}

/// Wald-Wolfowitz runs test; returns the two-sided p-value.
pub fn runs_test(bits: &[bool]) -> f64 {
    let n1 = bits.iter().filter(|&&b| b).count() as f64;
    let n0 = bits.len() as f64 - n1;
    if n0 == 0.0 || n1 == 0.0 {
        return 0.0;
    }
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let n = n0 + n1;
    let mean = 2.0 * n0 * n1 / n + 1.0;
    let var = 2.0 * n0 * n1 * (2.0 * n0 * n1 - n) / (n * n * (n - 1.0));
    let z = (runs as f64 - mean) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    2.0 * (1.0 - normal.cdf(z.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_point_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 0, 3.0), (0.0, 1.0));
    }

    #[test]
    fn chi_square_flags_skew() {
        assert!(chi_square_uniform(&[100, 100, 100, 100]).1 > 0.99);
        assert!(chi_square_uniform(&[400, 0, 0, 0]).1 < 1e-6);
    }

    #[test]
    fn runs_test_rejects_alternation() {
        let alt: Vec<bool> = (0..1000).map(|i| i % 2 == 0).collect();
        assert!(runs_test(&alt) < 1e-6);
        let blocks: Vec<bool> = (0..1000).map(|i| i < 500).collect();
        assert!(runs_test(&blocks) < 1e-6);
    }
}
