//! Standard-normal density and distribution function (including log scale),
//! Gamma-family functions and unit-ball volumes.
//!
//! The distribution function goes through the complementary error function,
//! which keeps full relative accuracy on both tails. The log variant switches
//! to the asymptotic tail series once `erfc` itself would leave the normal
//! f64 range, so `log_std_normal_cdf` stays finite far beyond t = -200.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Below this argument the direct `ln(erfc(..)/2)` path would hit the bottom
/// of the normal f64 range; the tail series takes over.
const LOG_CDF_SERIES_SWITCH: f64 = -37.0;

fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Standard normal density (2 pi)^{-1/2} e^{-t^2/2}.
pub fn std_normal_pdf(t: f64) -> Result<f64> {
    check_finite("t", t)?;
    Ok(log_std_normal_pdf_unchecked(t).exp())
}

/// Log of the standard normal density.
pub fn log_std_normal_pdf(t: f64) -> Result<f64> {
    check_finite("t", t)?;
    Ok(log_std_normal_pdf_unchecked(t))
}

#[inline]
pub(crate) fn log_std_normal_pdf_unchecked(t: f64) -> f64 {
    -0.5 * t * t - LN_SQRT_2PI
}

#[inline]
pub(crate) fn std_normal_pdf_unchecked(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal distribution function Phi(t).
pub fn std_normal_cdf(t: f64) -> Result<f64> {
    check_finite("t", t)?;
    Ok(std_normal_cdf_unchecked(t))
}

#[inline]
pub(crate) fn std_normal_cdf_unchecked(t: f64) -> f64 {
    0.5 * libm::erfc(-t / SQRT_2)
}

/// ln Phi(t), finite for every finite t (in particular t = -200 and below).
pub fn log_std_normal_cdf(t: f64) -> Result<f64> {
    check_finite("t", t)?;
    Ok(log_std_normal_cdf_unchecked(t))
}

pub(crate) fn log_std_normal_cdf_unchecked(t: f64) -> f64 {
    if t >= 0.0 {
        // ln(1 - Q) via log1p keeps full relative accuracy; plain ln of the
        // rounded CDF would leave ~1e-16 absolute noise, ruinous once
        // multiplied by powers in the millions
        (-0.5 * libm::erfc(t / SQRT_2)).ln_1p()
    } else if t >= LOG_CDF_SERIES_SWITCH {
        std_normal_cdf_unchecked(t).ln()
    } else {
        log_tail_series(-t)
    }
}

/// ln erf(x) for x >= 0, switching to log1p of the complement once
/// erf passes 1/2 for the same reason as the CDF above.
pub(crate) fn log_erf(x: f64) -> f64 {
    if x > 0.5 {
        (-libm::erfc(x)).ln_1p()
    } else {
        libm::erf(x).ln()
    }
}

/// ln(1 - Phi(x)) for large positive x via the asymptotic Mills-ratio series
/// 1 - Phi(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...),
/// summed until the terms stop improving.
fn log_tail_series(x: f64) -> f64 {
    debug_assert!(x > 10.0);
    let x2 = x * x;
    let mut sum = 1.0;
    let mut term = 1.0_f64;
    let mut k = 0.0_f64;
    loop {
        let next = -term * (2.0 * k + 1.0) / x2;
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    log_std_normal_pdf_unchecked(x) - x.ln() + sum.ln()
}

/// phi(t)/Phi(t), computed in log scale so the left tail does not underflow.
pub(crate) fn pdf_over_cdf(t: f64) -> f64 {
    (log_std_normal_pdf_unchecked(t) - log_std_normal_cdf_unchecked(t)).exp()
}

/// Two-term expansion of the normal tail: phi(t)/t * (1 - [order>=1] t^{-2}).
///
/// Approximates 1 - Phi(t) for t > 0; `order` 0 keeps the leading term only.
pub fn normal_tail_expansion(t: f64, order: u32) -> Result<f64> {
    check_finite("t", t)?;
    if t <= 0.0 {
        return Err(Error::invalid(format!(
            "normal_tail_expansion requires t > 0, got {t}"
        )));
    }
    let lead = std_normal_pdf_unchecked(t) / t;
    Ok(if order >= 1 {
        lead * (1.0 - 1.0 / (t * t))
    } else {
        lead
    })
}

/// Joint density/distribution evaluation of the standard normal at t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalEval {
    pub t: f64,
    pub pdf: f64,
    pub cdf: f64,
    pub log_pdf: f64,
    pub log_cdf: f64,
}

impl NormalEval {
    pub fn at(t: f64) -> Result<Self> {
        check_finite("t", t)?;
        let log_pdf = log_std_normal_pdf_unchecked(t);
        let log_cdf = log_std_normal_cdf_unchecked(t);
        Ok(NormalEval {
            t,
            pdf: log_pdf.exp(),
            cdf: std_normal_cdf_unchecked(t),
            log_pdf,
            log_cdf,
        })
    }
}

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
pub fn unit_ball_volume(d: u32) -> f64 {
    let d = d as f64;
    (0.5 * d * std::f64::consts::PI.ln() - log_gamma(0.5 * d + 1.0)).exp()
}

/// Gamma(alpha) for alpha > 0.
pub fn gamma(alpha: f64) -> f64 {
    libm::tgamma(alpha)
}

/// ln Gamma(alpha) for alpha > 0.
pub fn log_gamma(alpha: f64) -> f64 {
    libm::lgamma(alpha)
}

/// Digamma psi(alpha) for alpha > 0: recurrence shift until the argument
/// exceeds 10, then the asymptotic series.
pub fn digamma(alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    let mut x = alpha;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n})
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    acc + x.ln() - 0.5 / x - series
}

/// Gamma, log-Gamma and digamma at a common argument; Gamma'(alpha) is
/// recoverable as `gamma * digamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFamily {
    pub gamma: f64,
    pub log_gamma: f64,
    pub digamma: f64,
}

pub fn gamma_family(alpha: f64) -> Result<GammaFamily> {
    check_finite("alpha", alpha)?;
    if alpha <= 0.0 {
        return Err(Error::invalid(format!(
            "gamma_family requires alpha > 0, got {alpha}"
        )));
    }
    Ok(GammaFamily {
        gamma: gamma(alpha),
        log_gamma: log_gamma(alpha),
        digamma: digamma(alpha),
    })
}
