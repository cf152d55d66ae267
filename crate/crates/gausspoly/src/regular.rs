//! External angles and intrinsic volumes of the regular simplex, regular
//! crosspolytope, rectangular simplex, cube and parallelotope.
//!
//! Angles and intrinsic volumes share the same quadrature kernels; only the
//! combinatorial prefactors differ. Prefactors are assembled in log space so
//! n in the millions works; binomials use the exact integer path for small n.

use crate::combinatorics::{binomial, ln_binomial, ln_factorial};
use crate::error::{Error, Result};
use crate::hetero;
use crate::quad::{self, GaussianPowerIntegrand};

const REL_TOL: f64 = 1e-12;
const ABS_TOL: f64 = 1e-300;

const LN_2PI: f64 = 1.837_877_066_409_345_6;

/// One of the regular polytope families treated by the closed forms.
#[derive(Debug, Clone, PartialEq)]
pub enum RegularFamily {
    /// S^{n-1} = conv[e_1, .., e_n], an (n-1)-dimensional simplex.
    Simplex { n: u64 },
    /// C^n = conv[+-e_1, .., +-e_n].
    Crosspolytope { n: u64 },
    /// S^n_0 = conv[0, e_1, .., e_n].
    RectSimplex { n: u64 },
    /// Q_n = [0, 1]^n.
    Cube { n: u64 },
    /// [0, l_1] x .. x [0, l_n].
    Parallelotope { sides: Vec<f64> },
}

impl RegularFamily {
    /// Dimension of the polytope as a convex body.
    pub fn dim(&self) -> u64 {
        match self {
            RegularFamily::Simplex { n } => n - 1,
            RegularFamily::Crosspolytope { n }
            | RegularFamily::RectSimplex { n }
            | RegularFamily::Cube { n } => *n,
            RegularFamily::Parallelotope { sides } => sides.len() as u64,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = match self {
            RegularFamily::Parallelotope { sides } => {
                if sides.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
                    return Err(Error::invalid("parallelotope sides must be positive"));
                }
                sides.len() as u64
            }
            RegularFamily::Simplex { n }
            | RegularFamily::Crosspolytope { n }
            | RegularFamily::RectSimplex { n }
            | RegularFamily::Cube { n } => *n,
        };
        if n == 0 {
            return Err(Error::invalid("family requires n >= 1"));
        }
        Ok(())
    }
}

/// External angle of the family at any k-dimensional face.
///
/// For the rectangular simplex the formula covers the k-faces not
/// containing 0. Cubes and parallelotopes are not supported.
pub fn external_angle(family: &RegularFamily, k: u64) -> Result<f64> {
    family.validate()?;
    let n = match family {
        RegularFamily::Simplex { n }
        | RegularFamily::Crosspolytope { n }
        | RegularFamily::RectSimplex { n } => *n,
        RegularFamily::Cube { .. } | RegularFamily::Parallelotope { .. } => {
            return Err(Error::invalid(
                "external angles are only available for simplex, crosspolytope and \
                 rectangular simplex",
            ))
        }
    };
    if k >= n {
        return Err(Error::invalid(format!(
            "external angle requires 0 <= k < n, got k={k}, n={n}"
        )));
    }
    let a = (n - k - 1) as f64;
    let b = (k + 1) as f64;
    let integrand = match family {
        RegularFamily::Simplex { .. } => GaussianPowerIntegrand::full_line(a, b),
        RegularFamily::Crosspolytope { .. } => GaussianPowerIntegrand::half_line_symmetric(a, b),
        RegularFamily::RectSimplex { .. } => GaussianPowerIntegrand::half_line_cdf(a, b),
        _ => unreachable!(),
    };
    let quad = quad::integrate(&integrand, REL_TOL, ABS_TOL)?;
    let ln_pref = 0.5 * k as f64 * LN_2PI + 0.5 * ((k + 1) as f64).ln();
    let angle = (ln_pref + quad.value.ln()).exp();
    // the prefactor cancellation can land a hair above 1 at the top face
    Ok(angle.min(1.0))
}

/// Intrinsic volume V_k of the family.
pub fn intrinsic_volume(family: &RegularFamily, k: u64) -> Result<f64> {
    family.validate()?;
    let dim = family.dim();
    if k > dim {
        return Err(Error::invalid(format!(
            "intrinsic volume requires 0 <= k <= {dim}, got k={k}"
        )));
    }
    match family {
        RegularFamily::Cube { n } => Ok(binomial(*n, k)),
        RegularFamily::Parallelotope { sides } => {
            Ok(hetero::elementary_symmetric(sides, k as usize))
        }
        RegularFamily::Simplex { n } => {
            if k == n - 1 {
                // top intrinsic volume = facet volume sqrt(n) / (n-1)!
                Ok((0.5 * (*n as f64).ln() - ln_factorial(n - 1)).exp())
            } else {
                let quad = quad::integrate(
                    &GaussianPowerIntegrand::full_line((n - k - 1) as f64, (k + 1) as f64),
                    REL_TOL,
                    ABS_TOL,
                )?;
                Ok((face_prefactor_ln(*n, k) + quad.value.ln()).exp())
            }
        }
        RegularFamily::Crosspolytope { n } => {
            if k == *n {
                // V_n(C^n) = 2^n / n!
                Ok((*n as f64 * std::f64::consts::LN_2 - ln_factorial(*n)).exp())
            } else {
                let quad = quad::integrate(
                    &GaussianPowerIntegrand::half_line_symmetric(
                        (n - k - 1) as f64,
                        (k + 1) as f64,
                    ),
                    REL_TOL,
                    ABS_TOL,
                )?;
                // (2 phi)^{k+1} contributes the extra 2-power
                let ln_pref = face_prefactor_ln(*n, k) + (k + 1) as f64 * std::f64::consts::LN_2;
                Ok((ln_pref + quad.value.ln()).exp())
            }
        }
        RegularFamily::RectSimplex { n } => {
            // binom(n,k) / (k! 2^{n-k}) plus the half-line integral term
            let ln_t1 = ln_binomial(*n, k)
                - ln_factorial(k)
                - (n - k) as f64 * std::f64::consts::LN_2;
            let t1 = ln_t1.exp();
            if k == *n {
                return Ok(t1);
            }
            let quad = quad::integrate(
                &GaussianPowerIntegrand::half_line_cdf((n - k - 1) as f64, (k + 1) as f64),
                REL_TOL,
                ABS_TOL,
            )?;
            Ok(t1 + (face_prefactor_ln(*n, k) + quad.value.ln()).exp())
        }
    }
}

/// ln of (2 pi)^{k/2} binom(n, k+1) (k+1) / k!.
fn face_prefactor_ln(n: u64, k: u64) -> f64 {
    0.5 * k as f64 * LN_2PI + ln_binomial(n, k + 1) + ((k + 1) as f64).ln() - ln_factorial(k)
}

/// Number of k-faces and the k-volume of each face, for the simplex and
/// crosspolytope families.
pub fn face_data(family: &RegularFamily, k: u64) -> Result<(f64, f64)> {
    family.validate()?;
    let (n, doubled) = match family {
        RegularFamily::Simplex { n } => (*n, false),
        RegularFamily::Crosspolytope { n } => (*n, true),
        _ => {
            return Err(Error::invalid(
                "face data is only available for simplex and crosspolytope",
            ))
        }
    };
    if k >= n {
        return Err(Error::invalid(format!(
            "face data requires 0 <= k < n, got k={k}, n={n}"
        )));
    }
    let mut count = binomial(n, k + 1);
    if doubled {
        count *= 2f64.powi(k as i32 + 1);
    }
    let volume = (0.5 * ((k + 1) as f64).ln() - ln_factorial(k)).exp();
    Ok((count, volume))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(n: u64) -> RegularFamily {
        RegularFamily::Simplex { n }
    }
    fn cross(n: u64) -> RegularFamily {
        RegularFamily::Crosspolytope { n }
    }
    fn rect(n: u64) -> RegularFamily {
        RegularFamily::RectSimplex { n }
    }

    #[test]
    fn angle_reference_values() {
        // vertex angle of the segment conv[e1, e2]
        assert!((external_angle(&simplex(2), 0).unwrap() - 0.5).abs() < 1e-12);
        // octahedron vertex: int_0^inf (2Phi-1)^2 phi = 1/6
        let got = external_angle(&cross(3), 0).unwrap();
        assert!((got - 1.0 / 6.0).abs() < 1e-12, "got={got}");
        // top face of the 3-simplex: prefactor cancels the Gaussian product integral
        let got = external_angle(&simplex(4), 3).unwrap();
        assert!((got - 1.0).abs() < 1e-11, "got={got}");
        // edge angle of the tetrahedron, frozen from 30-digit quadrature
        let got = external_angle(&simplex(4), 1).unwrap();
        assert!((got - 0.30408672398469636).abs() < 1e-11, "got={got}");
    }

    #[test]
    fn angle_closures() {
        for n in 2..=10u64 {
            let s = n as f64 * external_angle(&simplex(n), 0).unwrap();
            assert!((s - 1.0).abs() < 1e-10, "simplex n={n} sum={s}");
            let c = 2.0 * n as f64 * external_angle(&cross(n), 0).unwrap();
            assert!((c - 1.0).abs() < 1e-10, "cross n={n} sum={c}");
        }
    }

    #[test]
    fn angle_domain_errors() {
        assert!(external_angle(&simplex(3), 3).is_err());
        assert!(external_angle(&RegularFamily::Cube { n: 3 }, 0).is_err());
        assert!(external_angle(
            &RegularFamily::Parallelotope {
                sides: vec![1.0, 2.0]
            },
            0
        )
        .is_err());
    }

    #[test]
    fn intrinsic_volume_reference_values() {
        // V_1 of conv[e1, e2] is its length
        let got = intrinsic_volume(&simplex(2), 1).unwrap();
        assert!((got - std::f64::consts::SQRT_2).abs() < 1e-12);
        // frozen 30-digit quadrature values
        let cases: [(RegularFamily, u64, f64); 6] = [
            (simplex(5), 2, 2.5133383243670437),
            (simplex(6), 3, 1.4102355421224373),
            (simplex(3), 1, 2.1213203435596426),
            (cross(4), 2, 4.618802153517006),
            (cross(3), 1, 3.324758543877432),
            (rect(5), 2, 2.603356998670554),
        ];
        for (fam, k, want) in cases {
            let got = intrinsic_volume(&fam, k).unwrap();
            assert!(
                (got - want).abs() / want < 1e-11,
                "{fam:?} k={k} got={got} want={want}"
            );
        }
        // cube and crosspolytope closed forms
        assert_eq!(intrinsic_volume(&RegularFamily::Cube { n: 4 }, 2).unwrap(), 6.0);
        let got = intrinsic_volume(&cross(3), 3).unwrap();
        assert!((got - 4.0 / 3.0).abs() < 1e-13);
        // rectangular simplex top volume 1/n!
        let got = intrinsic_volume(&rect(4), 4).unwrap();
        assert!((got - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn v0_is_one_for_every_family() {
        for n in 1..=12u64 {
            for fam in [simplex(n), cross(n), rect(n), RegularFamily::Cube { n }] {
                let got = intrinsic_volume(&fam, 0).unwrap();
                assert!((got - 1.0).abs() < 1e-10, "{fam:?} V_0={got}");
            }
        }
        let p = RegularFamily::Parallelotope {
            sides: vec![0.3, 2.0, 5.5],
        };
        assert_eq!(intrinsic_volume(&p, 0).unwrap(), 1.0);
    }

    #[test]
    fn product_reconstruction_matches_direct_formula() {
        for n in 2..=8u64 {
            for k in 0..n - 1 {
                let (count, vol) = face_data(&simplex(n), k).unwrap();
                let angle = external_angle(&simplex(n), k).unwrap();
                let direct = intrinsic_volume(&simplex(n), k).unwrap();
                let rebuilt = count * vol * angle;
                assert!(
                    (rebuilt - direct).abs() / direct < 1e-12,
                    "simplex n={n} k={k}"
                );

                let (count, vol) = face_data(&cross(n), k).unwrap();
                let angle = external_angle(&cross(n), k).unwrap();
                let direct = intrinsic_volume(&cross(n), k).unwrap();
                let rebuilt = count * vol * angle;
                assert!(
                    (rebuilt - direct).abs() / direct < 1e-12,
                    "cross n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn face_data_reference_values() {
        let (count, vol) = face_data(&simplex(4), 1).unwrap();
        assert_eq!(count, 6.0);
        assert!((vol - std::f64::consts::SQRT_2).abs() < 1e-14);
        let (count, _) = face_data(&cross(3), 1).unwrap();
        assert_eq!(count, 12.0);
        let (count, vol) = face_data(&simplex(3), 2).unwrap();
        assert_eq!(count, 1.0);
        assert!((vol - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!(face_data(&rect(3), 0).is_err());
        assert!(face_data(&simplex(3), 3).is_err());
    }

    #[test]
    fn parallelotope_with_unit_sides_matches_cube() {
        for k in 0..=4u64 {
            let p = RegularFamily::Parallelotope {
                sides: vec![1.0; 4],
            };
            let c = RegularFamily::Cube { n: 4 };
            assert_eq!(
                intrinsic_volume(&p, k).unwrap(),
                intrinsic_volume(&c, k).unwrap()
            );
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let v = intrinsic_volume(&simplex(200_000), 2).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // V_2 ~ (4 pi log n)/2! to leading order
        let approx = 4.0 * std::f64::consts::PI * (200_000f64).ln() / 2.0;
        assert!((v - approx).abs() / approx < 0.2, "v={v} approx={approx}");
    }
}
