//! Intrinsic volumes of scaled simplices and generalized crosspolytopes, and
//! the expected volumes of the corresponding heteroscedastic Gaussian
//! polytopes.
//!
//! Each intrinsic volume is a sum over index subsets (and sign patterns, for
//! the crosspolytope). Every term is a product factor times a quadrature of
//! `phi(x sigma) * prod CDF-factors`; the quadratures are deduplicated by the
//! multiset of scales they depend on, which collapses the cost substantially
//! when scale entries repeat. Enumeration order is fixed, so sums are
//! deterministic.

use std::collections::HashMap;

use crate::combinatorics::{for_each_subset, subset_count};
use crate::error::{Error, Result};
use crate::quad::{self, GaussianPowerIntegrand};
use crate::special;

/// Cap on the number of scales for the simplex-type sums (C(n, m) terms).
pub const SIMPLEX_SUBSET_CAP: u64 = 22;
/// Cap for the crosspolytope sums (C(n, m) 2^m terms).
pub const CROSS_SUBSET_CAP: u64 = 18;

const REL_TOL: f64 = 1e-12;
const ABS_TOL: f64 = 1e-300;

/// Strictly positive scale parameters l_1, .., l_n.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleVector {
    scales: Vec<f64>,
}

impl ScaleVector {
    pub fn new(scales: Vec<f64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::invalid("scale vector must be non-empty"));
        }
        if scales.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::invalid(
                "scale entries must be strictly positive and finite",
            ));
        }
        Ok(ScaleVector { scales })
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[f64] {
        &self.scales
    }
}

/// Paired positive scales (l_i^+, l_i^-) of a generalized crosspolytope.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedScaleVector {
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl SignedScaleVector {
    pub fn new(plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        if plus.is_empty() || plus.len() != minus.len() {
            return Err(Error::invalid(
                "plus/minus scale lists must be non-empty and of equal length",
            ));
        }
        if plus
            .iter()
            .chain(minus.iter())
            .any(|&l| !(l > 0.0) || !l.is_finite())
        {
            return Err(Error::invalid(
                "scale entries must be strictly positive and finite",
            ));
        }
        Ok(SignedScaleVector { plus, minus })
    }

    pub fn symmetric(scales: Vec<f64>) -> Result<Self> {
        Self::new(scales.clone(), scales)
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn plus(&self) -> &[f64] {
        &self.plus
    }

    pub fn minus(&self) -> &[f64] {
        &self.minus
    }
}

/// Scales of a heteroscedastic polytope model, one-sided or paired.
#[derive(Debug, Clone, PartialEq)]
pub enum HeteroScales {
    Simplex(ScaleVector),
    Cross(SignedScaleVector),
}

/// Elementary symmetric polynomial s_k by incremental polynomial
/// multiplication; s_0 = 1 by the empty-product convention.
pub fn elementary_symmetric(values: &[f64], k: usize) -> f64 {
    if k > values.len() {
        return 0.0;
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in values {
        for j in (1..=k).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e[k]
}

type CdfKey = (u64, Vec<u64>);

/// Quadrature of phi(x sigma) prod_i Phi(x / l_i), memoized on
/// (sigma^2, multiset of scales).
///
/// Substituting y = x sigma turns the term into
/// (1/sigma) int phi(y) prod_i Phi(y / (sigma l_i)) dy, which stays
/// well-scaled for arbitrarily large sigma (the vanishing-scale limit).
fn simplex_term_quad(
    sigma_sq: f64,
    complement: &[f64],
    half_line: bool,
    cache: &mut HashMap<CdfKey, f64>,
) -> Result<f64> {
    let mut key_scales: Vec<u64> = complement.iter().map(|l| l.to_bits()).collect();
    key_scales.sort_unstable();
    let key = (sigma_sq.to_bits(), key_scales);
    if let Some(&v) = cache.get(&key) {
        return Ok(v);
    }
    let sigma = sigma_sq.sqrt();
    let mut integrand = if half_line {
        GaussianPowerIntegrand::half_line_cdf(0.0, 1.0)
    } else {
        GaussianPowerIntegrand::full_line(0.0, 1.0)
    };
    if !complement.is_empty() {
        integrand = integrand.with_cdf_scales(complement.iter().map(|&l| sigma * l).collect());
    }
    let q = quad::integrate(&integrand, REL_TOL, ABS_TOL)?;
    let v = q.value / sigma;
    cache.insert(key, v);
    Ok(v)
}

type TwoSidedKey = (u64, Vec<(u64, u64)>);

/// Half-line quadrature of phi(x sigma) prod_i (Phi(x/p_i) - Phi(-x/m_i)),
/// rescaled the same way as [`simplex_term_quad`].
fn cross_term_quad(
    sigma_sq: f64,
    complement: &[(f64, f64)],
    cache: &mut HashMap<TwoSidedKey, f64>,
) -> Result<f64> {
    let mut key_scales: Vec<(u64, u64)> = complement
        .iter()
        .map(|&(p, m)| (p.to_bits(), m.to_bits()))
        .collect();
    key_scales.sort_unstable();
    let key = (sigma_sq.to_bits(), key_scales);
    if let Some(&v) = cache.get(&key) {
        return Ok(v);
    }
    let sigma = sigma_sq.sqrt();
    let mut integrand = GaussianPowerIntegrand::half_line_cdf(0.0, 1.0);
    if !complement.is_empty() {
        integrand = integrand.with_two_sided_scales(
            complement
                .iter()
                .map(|&(p, m)| (sigma * p, sigma * m))
                .collect(),
        );
    }
    let q = quad::integrate(&integrand, REL_TOL, ABS_TOL)?;
    let v = q.value / sigma;
    cache.insert(key, v);
    Ok(v)
}

fn check_simplex_cap(n: usize, m: usize) -> Result<()> {
    if n as u64 > SIMPLEX_SUBSET_CAP {
        return Err(Error::CombinatorialBlowup {
            terms: subset_count(n as u64, m as u64),
            cap: subset_count(SIMPLEX_SUBSET_CAP, SIMPLEX_SUBSET_CAP / 2),
        });
    }
    Ok(())
}

/// V_{m-1} of the simplex conv[l_1 e_1, .., l_n e_n].
pub fn simplex_intrinsic_volume(scales: &ScaleVector, m: usize) -> Result<f64> {
    let n = scales.len();
    if m == 0 || m > n {
        return Err(Error::invalid(format!(
            "simplex intrinsic volume requires 1 <= m <= n = {n}, got m={m}"
        )));
    }
    check_simplex_cap(n, m)?;
    let ls = scales.entries();
    let mut cache: HashMap<CdfKey, f64> = HashMap::new();
    let mut total = 0.0;
    let mut failure = None;
    for_each_subset(n, m, |subset| {
        if failure.is_some() {
            return;
        }
        let mut lprod = 1.0;
        let mut sigma_sq = 0.0;
        for &i in subset {
            lprod *= ls[i];
            sigma_sq += 1.0 / (ls[i] * ls[i]);
        }
        let mut iter = subset.iter().peekable();
        let complement: Vec<f64> = (0..n)
            .filter(|i| {
                if iter.peek() == Some(&i) {
                    iter.next();
                    false
                } else {
                    true
                }
            })
            .map(|i| ls[i])
            .collect();
        match simplex_term_quad(sigma_sq, &complement, false, &mut cache) {
            Ok(q) => total += lprod * sigma_sq * q,
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total / special::gamma(m as f64))
}

/// (n-1)-dimensional volume of the simplex conv[l_1 e_1, .., l_n e_n]:
/// (l_1 .. l_n / (n-1)!) sqrt(sum 1/l_i^2).
pub fn simplex_facet_volume(scales: &ScaleVector) -> Result<f64> {
    let n = scales.len();
    if n < 2 {
        return Err(Error::invalid("facet volume requires n >= 2 scales"));
    }
    let ls = scales.entries();
    let lprod: f64 = ls.iter().product();
    let sum_inv_sq: f64 = ls.iter().map(|&l| 1.0 / (l * l)).sum();
    Ok(lprod / special::gamma(n as f64) * sum_inv_sq.sqrt())
}

/// V_{m-1} of the generalized crosspolytope
/// conv[l_1^+ e_1, -l_1^- e_1, .., l_n^+ e_n, -l_n^- e_n].
///
/// `m = n + 1` is the top case: the volume is the sum over orthants,
/// prod_i (l_i^+ + l_i^-) / n!.
pub fn crosspolytope_intrinsic_volume(scales: &SignedScaleVector, m: usize) -> Result<f64> {
    let n = scales.len();
    if m == 0 || m > n + 1 {
        return Err(Error::invalid(format!(
            "crosspolytope intrinsic volume requires 1 <= m <= n + 1 = {}, got m={m}",
            n + 1
        )));
    }
    if m == n + 1 {
        let prod: f64 = scales
            .plus()
            .iter()
            .zip(scales.minus())
            .map(|(&p, &mi)| p + mi)
            .product();
        return Ok(prod / special::gamma(n as f64 + 1.0));
    }
    if n as u64 > CROSS_SUBSET_CAP {
        return Err(Error::CombinatorialBlowup {
            terms: subset_count(n as u64, m as u64).saturating_mul(1u128 << m.min(127)),
            cap: subset_count(CROSS_SUBSET_CAP, CROSS_SUBSET_CAP / 2)
                .saturating_mul(1u128 << CROSS_SUBSET_CAP),
        });
    }
    let plus = scales.plus();
    let minus = scales.minus();
    let mut cache: HashMap<TwoSidedKey, f64> = HashMap::new();
    let mut total = 0.0;
    let mut failure = None;
    for_each_subset(n, m, |subset| {
        if failure.is_some() {
            return;
        }
        let complement: Vec<(f64, f64)> = {
            let mut iter = subset.iter().peekable();
            (0..n)
                .filter(|i| {
                    if iter.peek() == Some(&i) {
                        iter.next();
                        false
                    } else {
                        true
                    }
                })
                .map(|i| (plus[i], minus[i]))
                .collect()
        };
        for signs in 0..(1u32 << m) {
            let mut lprod = 1.0;
            let mut sigma_sq = 0.0;
            for (bit, &i) in subset.iter().enumerate() {
                let l = if signs >> bit & 1 == 0 { plus[i] } else { minus[i] };
                lprod *= l;
                sigma_sq += 1.0 / (l * l);
            }
            match cross_term_quad(sigma_sq, &complement, &mut cache) {
                Ok(q) => total += lprod * sigma_sq * q,
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total / special::gamma(m as f64))
}

/// Collapsed form for the origin-symmetric case l^+ = l^-: a factor 2^m
/// replaces the sign-pattern sum. Kept as an independent code path and
/// checked against the general formula in the tests.
pub fn symmetric_crosspolytope_intrinsic_volume(scales: &ScaleVector, m: usize) -> Result<f64> {
    let n = scales.len();
    if m == 0 || m > n + 1 {
        return Err(Error::invalid(format!(
            "crosspolytope intrinsic volume requires 1 <= m <= n + 1 = {}, got m={m}",
            n + 1
        )));
    }
    let ls = scales.entries();
    if m == n + 1 {
        let prod: f64 = ls.iter().map(|&l| 2.0 * l).product();
        return Ok(prod / special::gamma(n as f64 + 1.0));
    }
    if n as u64 > CROSS_SUBSET_CAP {
        return Err(Error::CombinatorialBlowup {
            terms: subset_count(n as u64, m as u64),
            cap: subset_count(CROSS_SUBSET_CAP, CROSS_SUBSET_CAP / 2),
        });
    }
    let mut cache: HashMap<TwoSidedKey, f64> = HashMap::new();
    let mut total = 0.0;
    let mut failure = None;
    for_each_subset(n, m, |subset| {
        if failure.is_some() {
            return;
        }
        let mut lprod = 1.0;
        let mut sigma_sq = 0.0;
        for &i in subset {
            lprod *= ls[i];
            sigma_sq += 1.0 / (ls[i] * ls[i]);
        }
        let mut iter = subset.iter().peekable();
        let complement: Vec<(f64, f64)> = (0..n)
            .filter(|i| {
                if iter.peek() == Some(&i) {
                    iter.next();
                    false
                } else {
                    true
                }
            })
            .map(|i| (ls[i], ls[i]))
            .collect();
        match cross_term_quad(sigma_sq, &complement, &mut cache) {
            Ok(q) => total += lprod * sigma_sq * q,
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total * 2f64.powi(m as i32) / special::gamma(m as f64))
}

/// V_{m-1} of the simplex conv[0, l_1 e_1, .., l_N e_N]: the power-of-two
/// term plus half-line quadratures, the supported limit of vanishing scale.
pub fn rect_simplex_intrinsic_volume(scales: &ScaleVector, m: usize) -> Result<f64> {
    let n = scales.len();
    if m == 0 || m > n + 1 {
        return Err(Error::invalid(format!(
            "rect-simplex intrinsic volume requires 1 <= m <= n + 1 = {}, got m={m}",
            n + 1
        )));
    }
    check_simplex_cap(n, m)?;
    let ls = scales.entries();
    let term1 =
        elementary_symmetric(ls, m - 1) / 2f64.powi((n as i32 + 1) - m as i32);
    let mut total = 0.0;
    if m <= n {
        let mut cache: HashMap<CdfKey, f64> = HashMap::new();
        let mut failure = None;
        for_each_subset(n, m, |subset| {
            if failure.is_some() {
                return;
            }
            let mut lprod = 1.0;
            let mut sigma_sq = 0.0;
            for &i in subset {
                lprod *= ls[i];
                sigma_sq += 1.0 / (ls[i] * ls[i]);
            }
            let mut iter = subset.iter().peekable();
            let complement: Vec<f64> = (0..n)
                .filter(|i| {
                    if iter.peek() == Some(&i) {
                        iter.next();
                        false
                    } else {
                        true
                    }
                })
                .map(|i| ls[i])
                .collect();
            match simplex_term_quad(sigma_sq, &complement, true, &mut cache) {
                Ok(q) => total += lprod * sigma_sq * q,
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok((term1 + total) / special::gamma(m as f64))
}

/// Expected volume of the heteroscedastic Gaussian polytope:
/// d! V_d / (Gamma(d/2 + 1) 2^{d/2}) with V_d the matching intrinsic volume.
pub fn heteroscedastic_expected_volume(scales: &HeteroScales, d: u32) -> Result<f64> {
    let d_us = d as usize;
    if d == 0 {
        return Err(Error::invalid("expected volume requires d >= 1"));
    }
    let v = match scales {
        HeteroScales::Simplex(s) => {
            if d_us + 1 > s.len() {
                return Err(Error::invalid(format!(
                    "simplex scales support d + 1 <= n = {}, got d={d}",
                    s.len()
                )));
            }
            simplex_intrinsic_volume(s, d_us + 1)?
        }
        HeteroScales::Cross(s) => {
            if d_us > s.len() {
                return Err(Error::invalid(format!(
                    "crosspolytope scales support d <= n = {}, got d={d}",
                    s.len()
                )));
            }
            crosspolytope_intrinsic_volume(s, d_us + 1)?
        }
    };
    let df = d as f64;
    let factor = (special::log_gamma(df + 1.0)
        - special::log_gamma(0.5 * df + 1.0)
        - 0.5 * df * std::f64::consts::LN_2)
        .exp();
    Ok(factor * v)
}
