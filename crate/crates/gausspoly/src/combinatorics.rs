//! Binomial coefficients, factorial ratios and subset enumeration helpers.
//!
//! Prefactors are computed in log space so that quantities like
//! `binom(n, k+1)` stay usable for n far beyond the exact-integer range;
//! an exact path is used for small n.

use crate::special;

/// Largest n for which binomials are computed by exact integer arithmetic.
pub const EXACT_BINOMIAL_MAX_N: u64 = 30;

/// ln n! via the log-gamma function.
pub fn ln_factorial(n: u64) -> f64 {
    special::log_gamma(n as f64 + 1.0)
}

/// ln binom(n, k); 0 when k > n is the caller's responsibility to avoid.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// binom(n, k) as a float, exact for n <= 30.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_MAX_N {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// ln of the falling factorial n (n-1) ... (n-d), a product of d+1 terms.
///
/// Computed as a sum of logs so n up to 10^6 and beyond is fine.
pub fn ln_falling_factorial(n: f64, terms: u32) -> f64 {
    (0..terms).map(|i| (n - i as f64).ln()).sum()
}

/// Visits every k-subset of {0, .., n-1} in lexicographic order.
///
/// The callback receives the current index slice; enumeration order is fixed,
/// which keeps downstream summations deterministic.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut visit: F) {
    if k > n {
        return;
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Number of k-subsets of an n-set, saturating at u128::MAX.
pub fn subset_count(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_exact_small() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(30, 15), 155117520.0);
        assert_eq!(binomial(5, 7), 0.0);
    }

    #[test]
    fn binomial_log_path_matches_exact() {
        // n = 30 is served by the exact path; compare a recurrence value at n = 40.
        let exact = (0..20u128).fold(1u128, |acc, i| acc * (40 - i) / (i + 1));
        let rel = (binomial(40, 20) - exact as f64).abs() / exact as f64;
        assert!(rel < 1e-12, "rel={rel}");
    }

    #[test]
    fn falling_factorial_matches_product() {
        // 10*9*8 = 720
        assert!((ln_falling_factorial(10.0, 3).exp() - 720.0).abs() < 1e-9);
    }

    #[test]
    fn subset_enumeration_is_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn subset_count_matches_binomial() {
        assert_eq!(subset_count(18, 9), 48620);
        assert_eq!(subset_count(22, 11), 705432);
    }
}
