//! Exact convex-hull volumes in dimensions 1 through 5.
//!
//! d = 1 is a range, d = 2 a monotone chain plus the shoelace formula. For
//! 3 <= d <= 5 the clouds in scope are tiny (tens of points), so facets are
//! found by brute force: every d-subset spanning a hyperplane with all other
//! points on one side is a facet candidate; candidates sharing their
//! on-plane vertex set are merged, which handles coplanar inputs such as
//! cube corners exactly. The volume is the sum of pyramids over the facets
//! from the centroid, with facet areas computed recursively in hyperplane
//! coordinates.

use std::collections::HashSet;

use crate::combinatorics::for_each_subset;

/// Side-test determinants smaller than this (relative to the cloud scale)
/// take the degenerate path: the subset is skipped rather than rejected.
const DEGENERATE_TOL: f64 = 1e-12;

/// Maximum hull dimension.
pub const HULL_DIM_CAP: usize = 5;

/// Exact volume of the convex hull of `pts` (flat storage, stride `d`).
/// Degenerate (lower-dimensional) hulls yield 0.
pub fn polytope_volume(d: usize, pts: &[f64]) -> f64 {
    debug_assert!(d >= 1 && d <= HULL_DIM_CAP);
    debug_assert_eq!(pts.len() % d, 0);
    let n = pts.len() / d;
    if n < d + 1 {
        return 0.0;
    }
    match d {
        1 => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &x in pts {
                lo = lo.min(x);
                hi = hi.max(x);
            }
            (hi - lo).max(0.0)
        }
        2 => {
            let points: Vec<[f64; 2]> = (0..n).map(|i| [pts[2 * i], pts[2 * i + 1]]).collect();
            convex_polygon_area(&points)
        }
        _ => pyramid_volume(d, pts),
    }
}

/// Area of the convex hull of planar points (monotone chain + shoelace).
fn convex_polygon_area(points: &[[f64; 2]]) -> f64 {
    let hull = monotone_chain(points);
    if hull.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..hull.len() {
        let [x1, y1] = hull[i];
        let [x2, y2] = hull[(i + 1) % hull.len()];
        twice += x1 * y2 - x2 * y1;
    }
    0.5 * twice.abs()
}

/// Convex hull of planar points in counterclockwise order.
pub(crate) fn monotone_chain(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn point(pts: &[f64], d: usize, i: usize) -> &[f64] {
    &pts[d * i..d * (i + 1)]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facet enumeration by hyperplane classification, for 3 <= d <= 5.
fn pyramid_volume(d: usize, pts: &[f64]) -> f64 {
    let n = pts.len() / d;
    let scale = pts.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    let tol = DEGENERATE_TOL * scale;

    let mut centroid = vec![0.0; d];
    for i in 0..n {
        for (c, &x) in centroid.iter_mut().zip(point(pts, d, i)) {
            *c += x;
        }
    }
    for c in centroid.iter_mut() {
        *c /= n as f64;
    }

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut total = 0.0;

    for_each_subset(n, d, |subset| {
        let base = point(pts, d, subset[0]);
        // orthonormal basis of the subset's hyperplane from its edges
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
        for &i in &subset[1..] {
            let mut v: Vec<f64> = point(pts, d, i)
                .iter()
                .zip(base)
                .map(|(x, b)| x - b)
                .collect();
            for e in &basis {
                let proj = dot(&v, e);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= proj * ei;
                }
            }
            let norm = dot(&v, &v).sqrt();
            if norm < tol {
                return; // affinely dependent subset
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
        // unit normal: the coordinate axis residual with the largest norm
        let mut normal = vec![0.0; d];
        let mut best = -1.0;
        for axis in 0..d {
            let mut v = vec![0.0; d];
            v[axis] = 1.0;
            for e in &basis {
                let proj = dot(&v, e);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= proj * ei;
                }
            }
            let norm = dot(&v, &v).sqrt();
            if norm > best {
                best = norm;
                normal = v;
            }
        }
        if best < tol {
            return;
        }
        for x in normal.iter_mut() {
            *x /= best;
        }
        let offset = dot(&normal, base);

        let mut on_plane: Vec<u32> = Vec::new();
        let mut has_pos = false;
        let mut has_neg = false;
        for i in 0..n {
            let s = dot(&normal, point(pts, d, i)) - offset;
            if s > tol {
                has_pos = true;
            } else if s < -tol {
                has_neg = true;
            } else {
                on_plane.push(i as u32);
            }
            if has_pos && has_neg {
                return; // not a supporting hyperplane
            }
        }
        if !seen.insert(on_plane.clone()) {
            return; // facet already counted through another subset
        }
        let height = (dot(&normal, &centroid) - offset).abs();
        if height < tol {
            return;
        }
        // facet area in hyperplane coordinates
        let mut local: Vec<f64> = Vec::with_capacity(on_plane.len() * (d - 1));
        for &i in &on_plane {
            let p = point(pts, d, i as usize);
            for e in &basis {
                local.push(p.iter().zip(e).zip(base).fold(0.0, |acc, ((x, ei), b)| {
                    acc + (x - b) * ei
                }));
            }
        }
        let area = polytope_volume(d - 1, &local);
        total += area * height / d as f64;
    });
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_triangle() {
        let square = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        assert!((polytope_volume(2, &square) - 1.0).abs() < 1e-14);
        let tri = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        assert!((polytope_volume(2, &tri) - 0.5).abs() < 1e-14);
        // interior point changes nothing
        let with_inner = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 0.5];
        assert!((polytope_volume(2, &with_inner) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn intervals() {
        assert!((polytope_volume(1, &[0.3, -1.5, 2.0]) - 3.5).abs() < 1e-15);
        assert_eq!(polytope_volume(1, &[4.0]), 0.0);
    }

    #[test]
    fn unit_cube_with_coplanar_facets() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.extend([(i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64]);
        }
        assert!((polytope_volume(3, &pts) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_matches_determinant() {
        // hull of d+1 random points has volume |det| / d!
        let mut g = crate::mc::rng::GaussianStream::new(11, 0);
        for d in 3..=5usize {
            for _ in 0..20 {
                let pts: Vec<f64> = (0..(d + 1) * d).map(|_| g.next_normal()).collect();
                let mut mat = vec![0.0; d * d];
                for r in 0..d {
                    for c in 0..d {
                        mat[r * d + c] = pts[(r + 1) * d + c] - pts[c];
                    }
                }
                let want = super::super::zonotope::det_abs(d, &mut mat)
                    / crate::special::gamma(d as f64 + 1.0);
                let got = polytope_volume(d, &pts);
                assert!(
                    (got - want).abs() / want.max(1e-12) < 1e-9,
                    "d={d} got={got} want={want}"
                );
            }
        }
    }

    #[test]
    fn degenerate_clouds_have_zero_volume() {
        // coplanar points in R^3
        let pts = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.3, 0.4, 0.0];
        assert_eq!(polytope_volume(3, &pts), 0.0);
        // too few points
        assert_eq!(polytope_volume(3, &pts[..9]), 0.0);
    }

    #[test]
    fn rotation_invariance() {
        // fixed rotation: Givens in the (0,1) plane times Givens in (1,2)
        let (c1, s1) = (0.8, 0.6);
        let (c2, s2) = (0.28, 0.96);
        let rotate = |p: &[f64]| -> [f64; 3] {
            let q = [c1 * p[0] - s1 * p[1], s1 * p[0] + c1 * p[1], p[2]];
            [q[0], c2 * q[1] - s2 * q[2], s2 * q[1] + c2 * q[2]]
        };
        let mut g = crate::mc::rng::GaussianStream::new(5, 0);
        let pts: Vec<f64> = (0..8 * 3).map(|_| g.next_normal()).collect();
        let rotated: Vec<f64> = pts.chunks(3).flat_map(|p| rotate(p)).collect();
        let a = polytope_volume(3, &pts);
        let b = polytope_volume(3, &rotated);
        assert!((a - b).abs() < 1e-9 * a.max(1.0), "a={a} b={b}");
    }

    #[test]
    fn octahedron_volume() {
        let pts = [
            1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0,
            0.0, -1.0,
        ];
        // 2^3 / 3!
        assert!((polytope_volume(3, &pts) - 4.0 / 3.0).abs() < 1e-12);
    }
}
