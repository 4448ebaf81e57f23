//! Numerical range boundary scans.
//!
//! For each angle `theta` the rotated real part `Re(e^{-i theta} A)` has a
//! top eigenpair `(p(theta), u)`; the Rayleigh point `<Au, u>` lies on the
//! boundary of `W(A)` and the line `{ Re(e^{-i theta} z) = p(theta) }` is a
//! supporting line. Collecting both over a sweep of angles gives an inner
//! polygon (the Rayleigh points) and an outer polygon (the support-line
//! intersections) sandwiching the true range.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

use super::{radius, rayleigh, top_eigenvector, FovError};

/// One full sweep of support values and boundary points.
#[derive(Clone, Debug)]
pub struct BoundaryScan {
    /// Sample angles, uniform on `[0, 2*pi)`.
    pub angles: Vec<f64>,
    /// `p(theta) = lambda_max(Re(e^{-i theta} A))` per angle.
    pub support_values: Vec<f64>,
    /// Rayleigh points of the top eigenvectors; on the boundary of `W(A)`.
    pub boundary_points: Vec<Complex64>,
}

impl BoundaryScan {
    /// Intersections of consecutive supporting lines. These vertices trace
    /// a convex polygon containing `W(A)`; together with `boundary_points`
    /// (which lie inside) they bracket the range.
    pub fn outer_vertices(&self) -> Vec<Complex64> {
        let m = self.angles.len();
        let mut out = Vec::with_capacity(m);
        for k in 0..m {
            let (tl, pl) = (self.angles[k], self.support_values[k]);
            let (tr, pr) = (self.angles[(k + 1) % m], self.support_values[(k + 1) % m]);
            let det = (tr - tl).sin();
            // Supporting lines: x cos t + y sin t = p(t); solve the 2x2
            // system for neighbouring angles. det never vanishes for a
            // uniform sweep with more than two samples.
            let x = (pl * tr.sin() - pr * tl.sin()) / det;
            let y = (pr * tl.cos() - pl * tr.cos()) / det;
            out.push(Complex64::new(x, y));
        }
        out
    }
}

/// Sweeps `n_angles` uniform directions; `n_angles >= 8` required.
pub fn boundary_polygon(a: &ComplexMatrix, n_angles: usize) -> Result<BoundaryScan, FovError> {
    if n_angles < 8 {
        return Err(FovError::TooFewAngles(n_angles));
    }
    let mut angles = Vec::with_capacity(n_angles);
    let mut support_values = Vec::with_capacity(n_angles);
    let mut boundary_points = Vec::with_capacity(n_angles);
    for k in 0..n_angles {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n_angles as f64);
        let h = radius::rotated_real_part(a, theta);
        let (p, u) = top_eigenvector(&h)?;
        angles.push(theta);
        support_values.push(p);
        boundary_points.push(rayleigh(a, &u));
    }
    Ok(BoundaryScan { angles, support_values, boundary_points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fov::support_function;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_too_few_angles() {
        let a = ComplexMatrix::identity(2);
        assert!(matches!(boundary_polygon(&a, 7), Err(FovError::TooFewAngles(7))));
    }

    #[test]
    fn normal_matrix_range_is_eigenvalue_hull() {
        // diag(1, -1): W(A) = [-1, 1] on the real axis.
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let scan = boundary_polygon(&a, 64).unwrap();
        for (theta, p) in scan.angles.iter().zip(&scan.support_values) {
            assert!((p - theta.cos().abs()).abs() <= 1e-12);
        }
        for z in &scan.boundary_points {
            assert!(z.im.abs() <= 1e-9);
            assert!(z.re.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn jordan_block_boundary_is_half_radius_circle() {
        // 2x2 nilpotent Jordan block: W(A) is the disc of radius 1/2.
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let scan = boundary_polygon(&a, 48).unwrap();
        for p in &scan.support_values {
            assert!((p - 0.5).abs() <= 1e-12);
        }
        for z in &scan.boundary_points {
            assert!((z.norm() - 0.5).abs() <= 1e-9);
        }
    }

    #[test]
    fn rayleigh_points_lie_on_their_support_lines() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.5), c(0.3, -0.2), c(0.0, 0.1)],
            vec![c(0.0, 0.0), c(-0.4, 1.0), c(0.7, 0.0)],
            vec![c(0.2, 0.2), c(0.0, -0.6), c(0.5, -1.0)],
        ])
        .unwrap();
        let scan = boundary_polygon(&a, 32).unwrap();
        for ((theta, p), z) in scan.angles.iter().zip(&scan.support_values).zip(&scan.boundary_points) {
            let proj = z.re * theta.cos() + z.im * theta.sin();
            assert!((proj - p).abs() <= 1e-9, "theta {theta}: {proj} vs {p}");
        }
    }

    #[test]
    fn inner_points_sit_inside_outer_polygon() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 1.0), c(0.8, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, -0.5)],
        ])
        .unwrap();
        let scan = boundary_polygon(&a, 90).unwrap();
        // Every inner point satisfies every supporting-line inequality.
        for z in &scan.boundary_points {
            for (theta, p) in scan.angles.iter().zip(&scan.support_values) {
                let proj = z.re * theta.cos() + z.im * theta.sin();
                assert!(proj <= p + 1e-9);
            }
        }
        // Outer vertices exceed none of the supporting values by more than
        // the polygonal gap, and dominate their two defining lines exactly.
        let outer = scan.outer_vertices();
        for (k, v) in outer.iter().enumerate() {
            let (tl, pl) = (scan.angles[k], scan.support_values[k]);
            let proj = v.re * tl.cos() + v.im * tl.sin();
            assert!((proj - pl).abs() <= 1e-9);
        }
    }

    #[test]
    fn support_function_matches_scan_values() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 2.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, -1.0)],
        ])
        .unwrap();
        let scan = boundary_polygon(&a, 16).unwrap();
        for (theta, p) in scan.angles.iter().zip(&scan.support_values) {
            let (q, _) = support_function(&a, *theta).unwrap();
            assert!((p - q).abs() <= 1e-12);
        }
    }
}
