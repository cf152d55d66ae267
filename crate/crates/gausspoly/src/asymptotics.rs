//! Extreme-value norming constants and two-term expansions of the expected
//! volumes, intrinsic volumes and Gaussian-power integrals.
//!
//! The argument n is accepted as a real so the binomial and poissonized
//! paths share code; the poissonized variants differ only in which (m, u)
//! pair enters the same two-term shape.

use crate::error::{Error, Result};
use crate::special::{self, EULER_GAMMA};

/// Two-term expansion: value = leading + correction, with the norming
/// constant it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticExpansion {
    pub u: f64,
    pub leading: f64,
    pub correction: f64,
    pub value: f64,
}

impl AsymptoticExpansion {
    fn new(u: f64, leading: f64, correction: f64) -> Self {
        AsymptoticExpansion {
            u,
            leading,
            correction,
            value: leading + correction,
        }
    }
}

/// Which random-polytope family an expected-volume expansion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionModel {
    Gaussian,
    Symmetric,
    PoissonGaussian,
    PoissonSymmetric,
}

/// Regular-polytope family for the intrinsic-volume expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionFamily {
    Simplex,
    Crosspolytope,
}

/// Integral family of the two-term integral asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    /// Phi^n phi^alpha over the full line.
    Binomial,
    /// (2 Phi - 1)^n phi^alpha over the half line.
    Symmetric,
    /// e^{lambda (Phi - 1)} phi^alpha over the full line.
    Poisson,
}

/// Norming constant of the maximum of n standard normals:
/// sqrt(2 log n) - (log log n / 2 + log(2 sqrt pi)) / sqrt(2 log n).
pub fn evt_norming_constant(n: f64) -> Result<f64> {
    if !n.is_finite() || n <= std::f64::consts::E {
        return Err(Error::invalid(format!(
            "the norming constant requires n > e, got {n}"
        )));
    }
    let s = (2.0 * n.ln()).sqrt();
    Ok(s - (0.5 * n.ln().ln() + (2.0 * std::f64::consts::PI.sqrt()).ln()) / s)
}

/// gamma_E - sum_{j=2}^d 1/j, the constant in the u^{d-2} correction term.
pub fn gamma_correction_constant(d: u32) -> f64 {
    let harmonic: f64 = (2..=d).map(|j| 1.0 / j as f64).sum();
    EULER_GAMMA - harmonic
}

/// Expected height of the hull-boundary limit process over any point:
/// sum_{j=2}^d 1/j - gamma_E + (d - 1) log sqrt(2 pi).
pub fn festoon_height_constant(d: u32) -> f64 {
    let harmonic: f64 = (2..=d).map(|j| 1.0 / j as f64).sum();
    harmonic - EULER_GAMMA + (d as f64 - 1.0) * 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Shared two-term shape u^d + d u^{d-2} (gamma_E - sum 1/j), scaled by
/// `ln_scale` in log space on the leading factor.
fn volume_expansion_with_u(u: f64, d: u32, scale: f64) -> AsymptoticExpansion {
    let df = d as f64;
    let leading = scale * u.powi(d as i32);
    let correction = scale * df * u.powi(d as i32 - 2) * gamma_correction_constant(d);
    AsymptoticExpansion::new(u, leading, correction)
}

/// Two-term expansion of the expected volume:
/// kappa_d u^d + d kappa_d u^{d-2} (gamma_E - sum_{j=2}^d 1/j),
/// with u = u_n, u_{2n}, u_lambda or u_{2 lambda} depending on the model.
pub fn expected_volume_expansion(
    model: ExpansionModel,
    n_or_rate: f64,
    d: u32,
) -> Result<AsymptoticExpansion> {
    if d == 0 {
        return Err(Error::invalid("expansion requires d >= 1"));
    }
    let m = match model {
        ExpansionModel::Gaussian | ExpansionModel::PoissonGaussian => n_or_rate,
        ExpansionModel::Symmetric | ExpansionModel::PoissonSymmetric => 2.0 * n_or_rate,
    };
    let u = evt_norming_constant(m)?;
    Ok(volume_expansion_with_u(u, d, special::unit_ball_volume(d)))
}

/// Two-term expansion of the regular-polytope intrinsic volume:
/// (2 pi)^{d/2}/d! (u^d + d u^{d-2} (gamma_E - sum 1/j)).
pub fn intrinsic_volume_expansion(
    family: ExpansionFamily,
    n: f64,
    d: u32,
) -> Result<AsymptoticExpansion> {
    if d == 0 {
        return Err(Error::invalid("expansion requires d >= 1"));
    }
    let m = match family {
        ExpansionFamily::Simplex => n,
        ExpansionFamily::Crosspolytope => 2.0 * n,
    };
    let u = evt_norming_constant(m)?;
    let df = d as f64;
    let scale = (0.5 * df * (2.0 * std::f64::consts::PI).ln()
        - special::log_gamma(df + 1.0))
    .exp();
    Ok(volume_expansion_with_u(u, d, scale))
}

/// Two-term asymptotics of the Gaussian-power integrals:
/// m^{-alpha} (u^{alpha-1} Gamma(alpha)
///             + u^{alpha-3} (alpha - 1)(Gamma(alpha) - Gamma'(alpha)))
/// with (m, u) = (n, u_n), (2n, u_{2n}) or (lambda, u_lambda) per kind.
pub fn integral_asymptotic(
    alpha: f64,
    n_or_rate: f64,
    kind: IntegralKind,
) -> Result<AsymptoticExpansion> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let m = match kind {
        IntegralKind::Binomial | IntegralKind::Poisson => n_or_rate,
        IntegralKind::Symmetric => 2.0 * n_or_rate,
    };
    let u = evt_norming_constant(m)?;
    let g = special::gamma(alpha);
    let g_prime = g * special::digamma(alpha);
    let scale = (-alpha * m.ln()).exp();
    let leading = scale * u.powf(alpha - 1.0) * g;
    let correction = scale * u.powf(alpha - 3.0) * (alpha - 1.0) * (g - g_prime);
    Ok(AsymptoticExpansion::new(u, leading, correction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expectations::{self, RandomPolytopeModel};
    use crate::quad::{self, GaussianPowerIntegrand};
    use crate::regular::{self, RegularFamily};

    #[test]
    fn norming_constant_reference() {
        let u10 = evt_norming_constant(10.0).unwrap();
        assert!((u10 - 1.3619236297664478).abs() < 1e-14, "u10={u10}");
        assert!(evt_norming_constant(2.0).is_err());
        assert!(evt_norming_constant(f64::NAN).is_err());
    }

    #[test]
    fn norming_constant_defining_property() {
        // n phi(u_n)/u_n -> 1; at n = 10^6 the ratio is within 3%
        let n = 1e6;
        let u = evt_norming_constant(n).unwrap();
        let ratio = n * crate::special::std_normal_pdf(u).unwrap() / u;
        assert!((ratio - 1.0).abs() < 0.03, "ratio={ratio}");
        // the exact-tail form converges far more slowly; frozen oracle value
        let exact = n * crate::special::log_std_normal_cdf(-u).unwrap().exp();
        assert!((exact - 0.93956944315917149).abs() < 1e-10, "exact={exact}");
    }

    #[test]
    fn norming_constant_monotone() {
        let mut n = 10.0;
        while n < 1e9 {
            assert!(
                evt_norming_constant(n).unwrap() < evt_norming_constant(4.0 * n).unwrap(),
                "n={n}"
            );
            n *= 4.0;
        }
    }

    #[test]
    fn gamma_correction_values() {
        assert!((gamma_correction_constant(1) - 0.5772156649015329).abs() < 1e-15);
        assert!((gamma_correction_constant(2) - 0.07721566490153287).abs() < 1e-15);
        // d! c(d) = Gamma(d+1)(1 - psi(d+1))
        for d in 1..=10u32 {
            let lhs = crate::special::gamma(d as f64 + 1.0) * gamma_correction_constant(d);
            let rhs = crate::special::gamma(d as f64 + 1.0)
                * (1.0 - crate::special::digamma(d as f64 + 1.0));
            assert!((lhs - rhs).abs() / rhs.abs() < 1e-11, "d={d}");
        }
    }

    #[test]
    fn festoon_constants() {
        assert!((festoon_height_constant(1) + 0.5772156649015329).abs() < 1e-15);
        assert!((festoon_height_constant(2) - 0.8417228683031399).abs() < 1e-13);
        let mut prev = festoon_height_constant(1);
        for d in 2..=12u32 {
            let v = festoon_height_constant(d);
            assert!(v > prev, "d={d}");
            prev = v;
        }
    }

    #[test]
    fn volume_expansion_d1_shape() {
        // d = 1: value = 2 (u_n + gamma / u_n)
        let n = 5e4;
        let e = expected_volume_expansion(ExpansionModel::Gaussian, n, 1).unwrap();
        let u = evt_norming_constant(n).unwrap();
        let want = 2.0 * (u + 0.5772156649015329 / u);
        assert!((e.value - want).abs() < 1e-12);
        assert_eq!(e.leading, 2.0 * u);
    }

    #[test]
    fn volume_expansion_against_quadrature() {
        // d = 2, n = 10^5: within 2% of the exact quadrature value
        let e = expected_volume_expansion(ExpansionModel::Gaussian, 1e5, 2).unwrap();
        let q = expectations::expected_volume(&RandomPolytopeModel::Gaussian {
            n: 100_000,
            d: 2,
        })
        .unwrap();
        assert!((e.value - q).abs() / q <= 0.02, "gap={}", (e.value - q).abs() / q);

        // symmetric model tracks the crosspolytope display with u_{2n}
        let e = expected_volume_expansion(ExpansionModel::Symmetric, 1e5, 2).unwrap();
        let q = expectations::expected_volume(&RandomPolytopeModel::Symmetric {
            n: 100_000,
            d: 2,
        })
        .unwrap();
        assert!((e.value - q).abs() / q <= 0.02);
        assert_eq!(e.u, evt_norming_constant(2e5).unwrap());
    }

    #[test]
    fn leading_term_ratio_decays_toward_one() {
        // the (2 log n)^{d/2} form converges log-slowly; assert decay plus
        // closeness at an astronomically large real n
        for d in 1..=3u32 {
            let ratio_at = |n: f64| {
                let e = expected_volume_expansion(ExpansionModel::Gaussian, n, d).unwrap();
                let target =
                    crate::special::unit_ball_volume(d) * (2.0 * n.ln()).powf(d as f64 / 2.0);
                e.leading / target
            };
            let r8 = ratio_at(1e8);
            let r120 = ratio_at(1e120);
            assert!((r120 - 1.0).abs() < 0.05, "d={d} r120={r120}");
            assert!((r120 - 1.0).abs() < (r8 - 1.0).abs(), "d={d}");
        }
    }

    #[test]
    fn intrinsic_expansion_matches_quadrature_and_shared_formula() {
        // d = 2, n = 10^4 against exact quadrature
        let e = intrinsic_volume_expansion(ExpansionFamily::Simplex, 1e4, 2).unwrap();
        let q = regular::intrinsic_volume(&RegularFamily::Simplex { n: 10_000 }, 2).unwrap();
        assert!((e.value - q).abs() / q < 0.03, "gap={}", (e.value - q).abs() / q);

        // equals the expected-volume expansion times (2 pi)^{d/2} / (d! kappa_d)
        for d in 1..=4u32 {
            let iv = intrinsic_volume_expansion(ExpansionFamily::Crosspolytope, 1e6, d).unwrap();
            let ev = expected_volume_expansion(ExpansionModel::Symmetric, 1e6, d).unwrap();
            let df = d as f64;
            let factor = (0.5 * df * (2.0 * std::f64::consts::PI).ln()
                - crate::special::log_gamma(df + 1.0))
            .exp()
                / crate::special::unit_ball_volume(d);
            assert!(
                (iv.value - ev.value * factor).abs() / iv.value < 1e-14,
                "d={d}"
            );
        }

        // d = 1 mean-width asymptote sqrt(4 pi log n): log-slow, test decay
        let ratio_at = |n: f64| {
            let e = intrinsic_volume_expansion(ExpansionFamily::Simplex, n, 1).unwrap();
            e.value / (4.0 * std::f64::consts::PI * n.ln()).sqrt()
        };
        assert!((ratio_at(1e12) - 1.0).abs() < 0.05);
        assert!((ratio_at(1e12) - 1.0).abs() < (ratio_at(1e6) - 1.0).abs());
    }

    #[test]
    fn integral_asymptotic_alpha_one_is_reciprocal() {
        // alpha = 1: expansion is 1/n exactly (zero correction); the exact
        // integral is 1/(n+1)
        let n = 1e4;
        let e = integral_asymptotic(1.0, n, IntegralKind::Binomial).unwrap();
        assert_eq!(e.correction, 0.0);
        let exact = 1.0 / (n + 1.0);
        assert!((e.value / exact - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn integral_asymptotic_against_quadrature() {
        let q = quad::integrate(
            &GaussianPowerIntegrand::full_line(1e5, 2.0),
            1e-12,
            1e-300,
        )
        .unwrap();
        let e = integral_asymptotic(2.0, 1e5, IntegralKind::Binomial).unwrap();
        let gap = (e.value - q.value).abs() / q.value;
        assert!(gap <= 0.01, "gap={gap}");

        // leading term vs n^{-alpha} (2 log n)^{(alpha-1)/2} Gamma(alpha)
        let n = 1e8_f64;
        let e = integral_asymptotic(2.0, n, IntegralKind::Binomial).unwrap();
        let first_order = n.powf(-2.0) * (2.0 * n.ln()).sqrt();
        assert!((e.leading / first_order - 1.0).abs() < 0.10);
    }

    #[test]
    fn integral_asymptotic_error_decay() {
        let gap = |n: f64| {
            let q = quad::integrate(
                &GaussianPowerIntegrand::full_line(n, 3.0),
                1e-12,
                1e-300,
            )
            .unwrap();
            let e = integral_asymptotic(3.0, n, IntegralKind::Binomial).unwrap();
            (e.value - q.value).abs() / q.value
        };
        assert!(gap(1e7) < gap(1e4), "g7={} g4={}", gap(1e7), gap(1e4));
    }

    #[test]
    fn truncated_integral_equivalence() {
        // for huge powers the mass sits far right of 0, so [0, inf) and the
        // full line agree
        let full = quad::integrate(
            &GaussianPowerIntegrand::full_line(1e5, 2.0),
            1e-12,
            1e-300,
        )
        .unwrap();
        let half = quad::integrate(
            &GaussianPowerIntegrand::half_line_cdf(1e5, 2.0),
            1e-12,
            1e-300,
        )
        .unwrap();
        assert!((full.value - half.value).abs() / full.value < 1e-6);
    }

    #[test]
    fn symmetric_kind_scales_by_two_n() {
        let n = 1e5;
        let alpha = 2.5;
        let e = integral_asymptotic(alpha, n, IntegralKind::Symmetric).unwrap();
        let u = evt_norming_constant(2.0 * n).unwrap();
        let g = crate::special::gamma(alpha);
        let gp = g * crate::special::digamma(alpha);
        let want = (u.powf(alpha - 1.0) * g
            + u.powf(alpha - 3.0) * (alpha - 1.0) * (g - gp))
            * (2.0 * n).powf(-alpha);
        assert!((e.value - want).abs() / want < 1e-13);

        // poissonized kind shares the shape with (m, u) = (lambda, u_lambda)
        let p = integral_asymptotic(alpha, n, IntegralKind::Poisson).unwrap();
        let b = integral_asymptotic(alpha, n, IntegralKind::Binomial).unwrap();
        assert_eq!(p.value, b.value);
    }
}
