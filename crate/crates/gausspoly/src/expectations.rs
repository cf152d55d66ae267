//! Expected volumes and expected intrinsic volumes of Gaussian, symmetric,
//! zero-anchored and poissonized Gaussian polytopes, and of Gaussian
//! zonotopes.
//!
//! Factorial ratios like n!/(n-d-1)! are accumulated as sums of logs, so the
//! formulas stay usable for n up to 10^6 and beyond.

use crate::combinatorics::{binomial, ln_falling_factorial, ln_factorial};
use crate::error::{Error, Result};
use crate::quad::{self, GaussianPowerIntegrand};
use crate::special;

const REL_TOL: f64 = 1e-12;
const ABS_TOL: f64 = 1e-300;

/// A Gaussian-type random polytope model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomPolytopeModel {
    /// conv[X_1, .., X_n]
    Gaussian { n: u64, d: u32 },
    /// conv[+-X_1, .., +-X_n]
    Symmetric { n: u64, d: u32 },
    /// conv[0, X_1, .., X_n]
    WithZero { n: u64, d: u32 },
    /// [0, X_1] + .. + [0, X_n]
    Zonotope { n: u64, d: u32 },
    /// conv of a Poisson(rate) number of Gaussian points
    PoissonGaussian { rate: f64, d: u32 },
    /// symmetric hull of a Poisson(rate) number of Gaussian points
    PoissonSymmetric { rate: f64, d: u32 },
}

impl RandomPolytopeModel {
    pub fn dim(&self) -> u32 {
        match self {
            RandomPolytopeModel::Gaussian { d, .. }
            | RandomPolytopeModel::Symmetric { d, .. }
            | RandomPolytopeModel::WithZero { d, .. }
            | RandomPolytopeModel::Zonotope { d, .. }
            | RandomPolytopeModel::PoissonGaussian { d, .. }
            | RandomPolytopeModel::PoissonSymmetric { d, .. } => *d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::model("the dimension d must satisfy d >= 1"));
        }
        match *self {
            RandomPolytopeModel::Gaussian { n, d } => {
                if n <= d as u64 {
                    return Err(Error::model(format!(
                        "the Gaussian model requires 1 <= d < n, got n={n}, d={d}"
                    )));
                }
            }
            RandomPolytopeModel::Symmetric { n, d } => {
                if n < d as u64 {
                    return Err(Error::model(format!(
                        "the symmetric model requires 1 <= d <= n, got n={n}, d={d}"
                    )));
                }
            }
            RandomPolytopeModel::WithZero { n, d } => {
                if n < d as u64 {
                    return Err(Error::model(format!(
                        "the zero-anchored model requires 1 <= d <= n, got n={n}, d={d}"
                    )));
                }
            }
            RandomPolytopeModel::Zonotope { n, d } => {
                if n < d as u64 {
                    return Err(Error::model(format!(
                        "the zonotope model requires 1 <= d <= n, got n={n}, d={d}"
                    )));
                }
            }
            RandomPolytopeModel::PoissonGaussian { rate, .. }
            | RandomPolytopeModel::PoissonSymmetric { rate, .. } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(Error::model(format!(
                        "poissonized models require rate > 0, got {rate}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// ln of kappa_d n! / (d! (n-d-1)!).
fn ln_binomial_prefactor(n: u64, d: u32) -> f64 {
    special::unit_ball_volume(d).ln() + ln_falling_factorial(n as f64, d + 1)
        - ln_factorial(d as u64)
}

/// Expected d-dimensional volume of the model.
pub fn expected_volume(model: &RandomPolytopeModel) -> Result<f64> {
    model.validate()?;
    match *model {
        RandomPolytopeModel::Gaussian { n, d } => {
            let q = quad::integrate(
                &GaussianPowerIntegrand::full_line((n - d as u64 - 1) as f64, (d + 1) as f64),
                REL_TOL,
                ABS_TOL,
            )?;
            Ok((ln_binomial_prefactor(n, d) + q.value.ln()).exp())
        }
        RandomPolytopeModel::Symmetric { n, d } => {
            if n == d as u64 {
                // top case via V_d(C^d) = 2^d/d!: E = 2^{d/2} / Gamma(d/2 + 1)
                let df = d as f64;
                return Ok((0.5 * df * std::f64::consts::LN_2
                    - special::log_gamma(0.5 * df + 1.0))
                .exp());
            }
            let q = quad::integrate(
                &GaussianPowerIntegrand::half_line_symmetric(
                    (n - d as u64 - 1) as f64,
                    (d + 1) as f64,
                ),
                REL_TOL,
                ABS_TOL,
            )?;
            // (2 phi)^{d+1}
            let ln_pref = ln_binomial_prefactor(n, d) + (d + 1) as f64 * std::f64::consts::LN_2;
            Ok((ln_pref + q.value.ln()).exp())
        }
        RandomPolytopeModel::WithZero { n, d } => {
            let df = d as f64;
            let ln_t1 = binomial(n, d as u64).ln()
                - (n as f64 - 0.5 * df) * std::f64::consts::LN_2
                - special::log_gamma(0.5 * df + 1.0);
            let t1 = ln_t1.exp();
            if n == d as u64 {
                // the falling-factorial coefficient vanishes at n = d
                return Ok(t1);
            }
            let q = quad::integrate(
                &GaussianPowerIntegrand::half_line_cdf(
                    (n - d as u64 - 1) as f64,
                    (d + 1) as f64,
                ),
                REL_TOL,
                ABS_TOL,
            )?;
            Ok(t1 + (ln_binomial_prefactor(n, d) + q.value.ln()).exp())
        }
        RandomPolytopeModel::Zonotope { n, d } => {
            let df = d as f64;
            Ok((ln_falling_factorial(n as f64, d)
                - 0.5 * df * std::f64::consts::LN_2
                - special::log_gamma(0.5 * df + 1.0))
            .exp())
        }
        RandomPolytopeModel::PoissonGaussian { rate, d } => {
            let q = quad::integrate(
                &GaussianPowerIntegrand::poisson(rate, (d + 1) as f64),
                REL_TOL,
                ABS_TOL,
            )?;
            let ln_pref = special::unit_ball_volume(d).ln() + (d + 1) as f64 * rate.ln()
                - ln_factorial(d as u64);
            Ok((ln_pref + q.value.ln()).exp())
        }
        RandomPolytopeModel::PoissonSymmetric { rate, d } => {
            let q = quad::integrate(
                &GaussianPowerIntegrand::poisson(2.0 * rate, (d + 1) as f64),
                REL_TOL,
                ABS_TOL,
            )?;
            // restrict the poissonized integrand to [0, inf)
            let q = restrict_poisson_half_line(2.0 * rate, d, q.value)?;
            let ln_pref = special::unit_ball_volume(d).ln()
                + (d + 1) as f64 * (2.0 * rate).ln()
                - ln_factorial(d as u64);
            Ok((ln_pref + q.ln()).exp())
        }
    }
}

/// The symmetric poissonized display integrates over [0, inf) only; subtract
/// the (tiny but nonzero) mass of the left half-line.
fn restrict_poisson_half_line(rate: f64, d: u32, full_value: f64) -> Result<f64> {
    let ig = GaussianPowerIntegrand::poisson(rate, (d + 1) as f64);
    let (lo, _) = quad::truncation_bounds(&ig, ABS_TOL)?;
    if lo >= 0.0 {
        return Ok(full_value);
    }
    let left = quad::integrate_clamped(&ig, Some(0.0), REL_TOL, ABS_TOL)?;
    Ok(full_value - left.value)
}

/// Expected m-th intrinsic volume, m <= d, for the Gaussian, symmetric and
/// zonotope models.
pub fn expected_intrinsic_volume(model: &RandomPolytopeModel, m: u32) -> Result<f64> {
    model.validate()?;
    let d = model.dim();
    if m == 0 || m > d {
        return Err(Error::invalid(format!(
            "expected intrinsic volume requires 1 <= m <= d = {d}, got m={m}"
        )));
    }
    // kappa_d / kappa_{d-m}
    let ln_ball_ratio =
        special::unit_ball_volume(d).ln() - special::unit_ball_volume(d - m).ln();
    match *model {
        RandomPolytopeModel::Gaussian { n, .. } => {
            let q = quad::integrate(
                &GaussianPowerIntegrand::full_line((n - m as u64 - 1) as f64, (m + 1) as f64),
                REL_TOL,
                ABS_TOL,
            )?;
            let ln_pref = ((m + 1) as f64).ln()
                + crate::combinatorics::ln_binomial(n, m as u64 + 1)
                + binomial(d as u64, m as u64).ln()
                + ln_ball_ratio;
            Ok((ln_pref + q.value.ln()).exp())
        }
        RandomPolytopeModel::Symmetric { n, .. } => {
            if m as u64 == n {
                // m = d = n: the display's index range ends, use the top case
                return expected_volume(model);
            }
            let q = quad::integrate(
                &GaussianPowerIntegrand::half_line_symmetric(
                    (n - m as u64 - 1) as f64,
                    (m + 1) as f64,
                ),
                REL_TOL,
                ABS_TOL,
            )?;
            let ln_pref = ((m + 1) as f64).ln()
                + crate::combinatorics::ln_binomial(n, m as u64 + 1)
                + binomial(d as u64, m as u64).ln()
                + ln_ball_ratio
                + (m + 1) as f64 * std::f64::consts::LN_2;
            Ok((ln_pref + q.value.ln()).exp())
        }
        RandomPolytopeModel::Zonotope { n, .. } => {
            let mf = m as f64;
            let ln_pref = binomial(d as u64, m as u64).ln() + ln_ball_ratio
                - special::unit_ball_volume(m).ln();
            let ln_val = ln_falling_factorial(n as f64, m)
                - 0.5 * mf * std::f64::consts::LN_2
                - special::log_gamma(0.5 * mf + 1.0);
            Ok((ln_pref + ln_val).exp())
        }
        _ => Err(Error::invalid(
            "expected intrinsic volumes cover the gaussian, symmetric and zonotope models",
        )),
    }
}

/// The two equivalent closed forms for E Vol_d of the Gaussian simplex
/// (n = d + 1), equal by the Legendre duplication formula.
pub fn miles_equivalence(d: u32) -> (f64, f64) {
    let df = d as f64;
    let a = ((0.5 * (df + 1.0).ln()) - special::log_gamma(0.5 * df + 1.0)
        - 0.5 * df * std::f64::consts::LN_2)
        .exp();
    let b = (0.5 * (df + 1.0).ln()
        + 0.5 * df * std::f64::consts::LN_2
        + special::log_gamma(0.5 * df + 0.5)
        - special::log_gamma(0.5)
        - ln_factorial(d as u64))
    .exp();
    (a, b)
}

/// Poisson mixture of fixed-n expected volumes, truncated at `n_max`;
/// used to validate the poissonized displays.
pub fn poisson_mixture_expected_volume(rate: f64, d: u32, n_max: u64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::invalid("rate must be positive"));
    }
    let mut total = 0.0;
    for n in (d as u64 + 1)..=n_max {
        let ln_weight = -rate + n as f64 * rate.ln() - ln_factorial(n);
        let ev = expected_volume(&RandomPolytopeModel::Gaussian { n, d })?;
        total += ln_weight.exp() * ev;
    }
    Ok(total)
}

/// Truncation point for Poisson mixtures: tail mass beyond is < 1e-12 for
/// rate <= 1e4.
pub fn poisson_truncation_bound(rate: f64) -> u64 {
    (rate + 12.0 * rate.sqrt() + 30.0).ceil() as u64
}
