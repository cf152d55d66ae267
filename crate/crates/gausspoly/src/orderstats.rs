//! Multiple-maximum conditional densities, the vanishing-gap limit moments,
//! the intrinsic-volume identities they induce, and the Gumbel-type limit
//! density of the conditioned maximum.
//!
//! Everything here is driven by integrals of f(s) Phi^{n-k}(s) phi^k(s)
//! (or the absolute-value variant on the half line), with f restricted to
//! the closed set of shapes the theory uses: 1, s, and indicators.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::quad::{self, GaussianPowerIntegrand};
use crate::special;

const REL_TOL: f64 = 1e-12;
const ABS_TOL: f64 = 1e-300;

/// Whether the sample is the raw normals or their absolute values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicityFamily {
    /// events on xi_1, .., xi_n
    Plain,
    /// events on |xi_1|, .., |xi_n|
    Absolute,
}

/// Integrand shape f in the moment limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentFunction {
    One,
    Identity,
    /// f(s) = 1_{s <= t0}
    IndicatorLeq(f64),
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "multiplicity requires 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Base integrand Phi^{n-k} phi^k (plain) or (2Phi-1)^{n-k} (2 phi)^k on
/// [0, inf) (absolute); the caller multiplies the 2^k in the absolute case.
fn base_integrand(n: u64, k: u64, family: MultiplicityFamily) -> GaussianPowerIntegrand {
    match family {
        MultiplicityFamily::Plain => {
            GaussianPowerIntegrand::full_line((n - k) as f64, k as f64)
        }
        MultiplicityFamily::Absolute => {
            GaussianPowerIntegrand::half_line_symmetric((n - k) as f64, k as f64)
        }
    }
}

fn ln_two_power(k: u64, family: MultiplicityFamily) -> f64 {
    match family {
        MultiplicityFamily::Plain => 0.0,
        MultiplicityFamily::Absolute => k as f64 * std::f64::consts::LN_2,
    }
}

/// Density of the maximum conditioned on multiplicity k:
/// Phi^{n-k}(t) phi^k(t) over its normalizer (absolute variant on [0, inf)).
pub fn conditional_max_density(
    t: f64,
    n: u64,
    k: u64,
    family: MultiplicityFamily,
) -> Result<f64> {
    check_nk(n, k)?;
    if !t.is_finite() {
        return Err(Error::NonFinite { name: "t", value: t });
    }
    if family == MultiplicityFamily::Absolute && t < 0.0 {
        return Err(Error::invalid(
            "the absolute-value density is supported on t >= 0",
        ));
    }
    let z = quad::integrate(&base_integrand(n, k, family), REL_TOL, ABS_TOL)?;
    let ln_num = match family {
        MultiplicityFamily::Plain => {
            (n - k) as f64 * special::log_std_normal_cdf(t)?
                + k as f64 * special::log_std_normal_pdf(t)?
        }
        MultiplicityFamily::Absolute => {
            (n - k) as f64 * special::log_erf(t / std::f64::consts::SQRT_2)
                + k as f64 * special::log_std_normal_pdf(t)?
        }
    };
    Ok((ln_num - z.value.ln()).exp())
}

/// The vanishing-gap limit moment
/// k binom(n, k) int f(s) Phi^{n-k}(s) phi^k(s) ds
/// (absolute variant with (2Phi-1)^{n-k} (2 phi)^k on [0, inf)).
pub fn multiplicity_event_moment(
    f: MomentFunction,
    n: u64,
    k: u64,
    family: MultiplicityFamily,
) -> Result<f64> {
    check_nk(n, k)?;
    let prefactor = k as f64 * binomial(n, k);
    let ln_two = ln_two_power(k, family);
    let integrand = base_integrand(n, k, family);
    let value = match f {
        MomentFunction::One => quad::integrate(&integrand, REL_TOL, ABS_TOL)?.value,
        MomentFunction::Identity => {
            quad::integrate(&integrand.with_monomial(1), REL_TOL, ABS_TOL)?.value
        }
        MomentFunction::IndicatorLeq(t0) => {
            if !t0.is_finite() {
                return Err(Error::NonFinite { name: "t0", value: t0 });
            }
            if family == MultiplicityFamily::Absolute && t0 <= 0.0 {
                return Ok(0.0);
            }
            quad::integrate_clamped(&integrand, Some(t0), REL_TOL, ABS_TOL)?.value
        }
    };
    Ok(prefactor * ln_two.exp() * value)
}

/// Intrinsic volume V_k of the matching regular family expressed through the
/// conditioned expected maximum: (2 pi)^{k/2} / k! times the identity moment.
pub fn intrinsic_volume_via_multiple_maxima(
    n: u64,
    k: u64,
    family: MultiplicityFamily,
) -> Result<f64> {
    check_nk(n, k)?;
    if k >= n {
        return Err(Error::invalid(format!(
            "the intrinsic-volume identity requires k < n, got n={n}, k={k}"
        )));
    }
    let moment = multiplicity_event_moment(MomentFunction::Identity, n, k, family)?;
    let ln_pref = 0.5 * k as f64 * (2.0 * std::f64::consts::PI).ln()
        - special::log_gamma(k as f64 + 1.0);
    Ok(ln_pref.exp() * moment)
}

/// Both sides of the partial-integration identity
/// int Phi^{n-k-1} phi^{k+1} = k/(n-k) int s Phi^{n-k} phi^k,
/// each computed by its own quadrature.
pub fn partial_integration_check(n: u64, k: u64) -> Result<(f64, f64)> {
    check_nk(n, k)?;
    if k >= n {
        return Err(Error::invalid(format!(
            "partial integration requires k < n, got n={n}, k={k}"
        )));
    }
    let lhs = quad::integrate(
        &GaussianPowerIntegrand::full_line((n - k - 1) as f64, (k + 1) as f64),
        REL_TOL,
        ABS_TOL,
    )?
    .value;
    let rhs = k as f64 / (n - k) as f64
        * quad::integrate(
            &GaussianPowerIntegrand::full_line((n - k) as f64, k as f64).with_monomial(1),
            REL_TOL,
            ABS_TOL,
        )?
        .value;
    Ok((lhs, rhs))
}

/// Limit density of u_n (xi_(n) - u_n) conditioned on a k-fold maximum:
/// e^{-e^{-z}} e^{-kz} / Gamma(k).
pub fn conditional_max_limit_density(z: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("the limit density requires k >= 1"));
    }
    if !z.is_finite() {
        return Err(Error::NonFinite { name: "z", value: z });
    }
    Ok((-(-z).exp() - k as f64 * z - special::log_gamma(k as f64)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::{self, RegularFamily};
    use MultiplicityFamily::{Absolute, Plain};

    /// Plain Simpson rule on a grid; the test-side oracle for density mass.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, steps: usize) -> f64 {
        let h = (b - a) / steps as f64;
        let mut acc = f(a) + f(b);
        for i in 1..steps {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn classical_max_density_spot_value() {
        // k = 1: n Phi^{n-1}(t) phi(t); at n = 3, t = 0: 3 * (1/4) * phi(0)
        let got = conditional_max_density(0.0, 3, 1, Plain).unwrap();
        assert!((got - 0.29920671030107453).abs() < 1e-11, "got={got}");
    }

    #[test]
    fn double_maximum_density_is_scaled_normal() {
        // n = k = 2: phi^2 normalized is N(0, 1/2); peak value 1/sqrt(pi)
        let got = conditional_max_density(0.0, 2, 2, Plain).unwrap();
        assert!((got - 0.5641895835477563).abs() < 1e-11, "got={got}");
    }

    #[test]
    fn densities_normalize_to_one() {
        for &(n, k) in &[(5u64, 2u64), (10, 4)] {
            let mass = simpson(
                |t| conditional_max_density(t, n, k, Plain).unwrap(),
                -10.0,
                10.0,
                4000,
            );
            assert!((mass - 1.0).abs() < 1e-10, "plain n={n} k={k} mass={mass}");
            let mass = simpson(
                |t| conditional_max_density(t, n, k, Absolute).unwrap(),
                0.0,
                12.0,
                4000,
            );
            assert!((mass - 1.0).abs() < 1e-10, "abs n={n} k={k} mass={mass}");
        }
        assert!(conditional_max_density(-0.1, 5, 2, Absolute).is_err());
    }

    #[test]
    fn unit_moment_cases() {
        // k = 1, f = 1: the ordinary maximum has total mass one
        for n in 1..=12u64 {
            let got = multiplicity_event_moment(MomentFunction::One, n, 1, Plain).unwrap();
            assert!((got - 1.0).abs() < 1e-10, "n={n} got={got}");
        }
        // n = k = 2: 2 int phi^2 = 1/sqrt(pi)
        let got = multiplicity_event_moment(MomentFunction::One, 2, 2, Plain).unwrap();
        assert!((got - 0.5641895835477563).abs() < 1e-11, "got={got}");
        // frozen 30-digit value of the identity moment at n = 5, k = 2
        let got = multiplicity_event_moment(MomentFunction::Identity, 5, 2, Plain).unwrap();
        assert!((got - 0.80002043597063283).abs() < 1e-11, "got={got}");
    }

    #[test]
    fn indicator_moment_matches_density_mass() {
        for &(n, k, t0) in &[(6u64, 2u64, 0.5f64), (8, 3, 1.0)] {
            let ratio = multiplicity_event_moment(MomentFunction::IndicatorLeq(t0), n, k, Plain)
                .unwrap()
                / multiplicity_event_moment(MomentFunction::One, n, k, Plain).unwrap();
            let mass = simpson(
                |t| conditional_max_density(t, n, k, Plain).unwrap(),
                -10.0,
                t0,
                4000,
            );
            assert!(
                (ratio - mass).abs() < 1e-9,
                "n={n} k={k} t0={t0} ratio={ratio} mass={mass}"
            );
        }
        // absolute family: indicator below the support is empty
        let got =
            multiplicity_event_moment(MomentFunction::IndicatorLeq(-1.0), 5, 2, Absolute)
                .unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn identity_moment_recovers_mean_width() {
        // k = 1, n = 2: sqrt(2 pi) E max(xi1, xi2) = sqrt 2 = V_1(S^1)
        let got = intrinsic_volume_via_multiple_maxima(2, 1, Plain).unwrap();
        assert!((got - std::f64::consts::SQRT_2).abs() < 1e-11, "got={got}");
    }

    #[test]
    fn intrinsic_volumes_match_regular_families() {
        for n in 2..=8u64 {
            for k in 1..n {
                let via_max = intrinsic_volume_via_multiple_maxima(n, k, Plain).unwrap();
                let direct =
                    regular::intrinsic_volume(&RegularFamily::Simplex { n }, k).unwrap();
                assert!(
                    (via_max - direct).abs() / direct < 1e-9,
                    "simplex n={n} k={k} via={via_max} direct={direct}"
                );
                let via_max = intrinsic_volume_via_multiple_maxima(n, k, Absolute).unwrap();
                let direct =
                    regular::intrinsic_volume(&RegularFamily::Crosspolytope { n }, k).unwrap();
                assert!(
                    (via_max - direct).abs() / direct < 1e-9,
                    "cross n={n} k={k} via={via_max} direct={direct}"
                );
            }
        }
    }

    #[test]
    fn partial_integration_identity() {
        for &(n, k) in &[(5u64, 2u64), (3, 1), (10, 9), (8, 4)] {
            let (lhs, rhs) = partial_integration_check(n, k).unwrap();
            assert!(
                (lhs - rhs).abs() / lhs.abs() < 1e-10,
                "n={n} k={k} lhs={lhs} rhs={rhs}"
            );
        }
        // frozen 30-digit value at n = 5, k = 2
        let (lhs, _) = partial_integration_check(5, 2).unwrap();
        assert!((lhs - 0.026667347865687761).abs() < 1e-13);
        assert!(partial_integration_check(5, 5).is_err());
    }

    #[test]
    fn limit_density_properties() {
        let got = conditional_max_limit_density(0.0, 1).unwrap();
        assert!((got - 0.36787944117144233).abs() < 1e-14);
        for &k in &[1u64, 2, 5] {
            let mass = simpson(
                |z| conditional_max_limit_density(z, k).unwrap(),
                -6.0,
                60.0,
                20000,
            );
            assert!((mass - 1.0).abs() < 1e-10, "k={k} mass={mass}");
        }
        // mode at z = -log k
        let k = 3u64;
        let mode = -(3f64).ln();
        let at_mode = conditional_max_limit_density(mode, k).unwrap();
        for dz in [-0.05, 0.05] {
            assert!(conditional_max_limit_density(mode + dz, k).unwrap() < at_mode);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(conditional_max_density(0.0, 5, 0, Plain).is_err());
        assert!(conditional_max_density(0.0, 5, 6, Plain).is_err());
        assert!(intrinsic_volume_via_multiple_maxima(5, 5, Plain).is_err());
        assert!(conditional_max_limit_density(f64::INFINITY, 1).is_err());
    }
}
