//! Accretivity, sector indices and cone fits.
//!
//! A matrix is accretive when `Re(A)` is positive definite; `W(A)` then
//! lives in the open right half-plane and the sector index is the smallest
//! half-angle `gamma` with `W(A)` inside `{ Re z > 0, |Im z| <= tan(gamma)
//! Re z }`. Two independent routes compute it:
//!
//! * `sectorial_index`: `arctan || P^{-1/2} K P^{-1/2} ||` with
//!   `P = Re(A)`, `K = Im(A)`, via the Hermitian eigensolver;
//! * `sectorial_index_sweep`: bisection on rotated support predicates,
//!   purely from the geometry of `W(A)`.
//!
//! Their agreement is a standing cross-check used by the test suites.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, cartesian_parts, ComplexMatrix};

use super::{fro_scale, FovError};

/// Default accretivity margin as a multiple of the Frobenius norm.
pub const ACCRETIVE_MARGIN_REL: f64 = 1e-10;
/// Relative size of `Im(A)` under which the index is reported as exactly 0.
pub const HERMITIAN_CUTOFF_REL: f64 = 1e-12;
/// Bisection stops once the bracket is this narrow (radians).
const BISECT_TOL: f64 = 1e-12;
/// Arg-range slack used to classify degenerate (real-axis touching) cones.
const CONE_AXIS_SLACK: f64 = 1e-9;

/// Sector of half-angle `gamma` about the positive real axis,
/// `0 <= gamma < pi/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorCone {
    gamma: f64,
}

impl SectorCone {
    pub fn new(gamma: f64) -> Result<Self, FovError> {
        if !(0.0..FRAC_PI_2).contains(&gamma) {
            return Err(FovError::InvalidSectorAngle(gamma));
        }
        Ok(SectorCone { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tan(&self) -> f64 {
        self.gamma.tan()
    }

    pub fn sin(&self) -> f64 {
        self.gamma.sin()
    }
}

/// Which side of (a rotation of) the real axis a cone-confined range sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `W(A)` inside `{ r e^{-i theta} : theta1 <= theta <= theta2 }`.
    Lower,
    /// `W(A)` inside `{ r e^{+i theta} : theta1 <= theta <= theta2 }`.
    Upper,
}

/// A ray cone `0 <= theta1 <= theta2 <= pi/2` pinched against one side of
/// the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayCone {
    pub theta1: f64,
    pub theta2: f64,
    pub orientation: Orientation,
}

impl RayCone {
    pub fn new(theta1: f64, theta2: f64, orientation: Orientation) -> Result<Self, FovError> {
        if !(0.0..=FRAC_PI_2).contains(&theta1) || !(theta1..=FRAC_PI_2).contains(&theta2) {
            return Err(FovError::InvalidConeAngles(theta1, theta2));
        }
        Ok(RayCone { theta1, theta2, orientation })
    }

    /// Half-angle of the smallest symmetric sector containing both the cone
    /// and its reflection through multiplication by `i`:
    /// `gamma1 = max(theta2, pi/2 - theta1)`.
    pub fn gamma1(&self) -> f64 {
        self.theta2.max(FRAC_PI_2 - self.theta1)
    }
}

/// Default accretivity margin for `a`.
pub fn default_margin(a: &ComplexMatrix) -> f64 {
    ACCRETIVE_MARGIN_REL * fro_scale(a)
}

/// Tests `lambda_min(Re A) > margin`; returns the flag and the eigenvalue.
pub fn is_accretive(a: &ComplexMatrix, margin: f64) -> Result<(bool, f64), FovError> {
    assert!(margin >= 0.0, "margin must be nonnegative");
    let (re, _) = cartesian_parts(a);
    let delta = linalg::lambda_min(&re)?;
    Ok((delta > margin, delta))
}

/// Tests that both Cartesian parts are positive definite past `margin`.
pub fn is_accretive_dissipative(a: &ComplexMatrix, margin: f64) -> Result<bool, FovError> {
    assert!(margin >= 0.0, "margin must be nonnegative");
    let (re, im) = cartesian_parts(a);
    let d_re = linalg::lambda_min(&re)?;
    let d_im = linalg::lambda_min(&im)?;
    Ok(d_re > margin && d_im > margin)
}

/// Minimal sector half-angle through the weighted-norm route:
/// `gamma = arctan || P^{-1/2} K P^{-1/2} ||`.
///
/// Inputs whose imaginary part is negligible (below
/// `HERMITIAN_CUTOFF_REL * ||A||_F`) report exactly 0.
pub fn sectorial_index(a: &ComplexMatrix) -> Result<SectorCone, FovError> {
    let (acc, delta) = is_accretive(a, 0.0)?;
    if !acc {
        return Err(FovError::NotAccretive { delta });
    }
    let (p, k) = cartesian_parts(a);
    if k.frobenius_norm() <= HERMITIAN_CUTOFF_REL * fro_scale(a) {
        return SectorCone::new(0.0);
    }
    let eig = linalg::hermitian_eig(&p)?;
    let n = a.dim();
    // P^{-1/2} = V diag(lambda^{-1/2}) V*; positive spectrum is guaranteed
    // by the accretivity gate above.
    let mut root = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for l in 0..n {
                let w = 1.0 / eig.values[l].sqrt();
                acc += eig.vectors.get(i, l) * eig.vectors.get(j, l).conj() * w;
            }
            root.set(i, j, acc);
        }
    }
    let m = root.mul(&k)?.mul(&root)?;
    // Symmetrize: the triple product is Hermitian up to rounding.
    let (m, _) = cartesian_parts(&m);
    let vals = linalg::hermitian_eigenvalues(&m)?;
    let rho = vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    SectorCone::new(rho.atan().min(FRAC_PI_2 - f64::EPSILON))
}

/// Largest `arg z` over `W(A)` for accretive `A`, found by bisection on the
/// monotone predicate `W(A) ⊆ { Im(e^{-i phi} z) <= 0 }`, which reads
/// `lambda_max(Im(e^{-i phi} A)) <= 0` on the rotated Cartesian part.
fn max_arg(a: &ComplexMatrix) -> Result<f64, FovError> {
    let n = a.dim();
    let pred = |phi: f64| -> Result<bool, FovError> {
        let w = num_complex::Complex64::from_polar(1.0, -phi);
        // Im(wA) = (wA - (wA)*) / (2i), assembled directly.
        let h = ComplexMatrix::from_fn(n, |i, j| {
            let d = w * a.get(i, j) - (w * a.get(j, i)).conj();
            num_complex::Complex64::new(d.im * 0.5, -d.re * 0.5)
        });
        Ok(linalg::lambda_max(&h)? <= 0.0)
    };
    let mut lo = -FRAC_PI_2; // predicate false: Im(e^{i pi/2} A) = Re(A) > 0
    let mut hi = FRAC_PI_2; // predicate true for accretive A
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Range `[alpha_min, alpha_max]` of `arg z` over `W(A)`, accretive inputs
/// only. Both ends are located to about 1e-12 radians.
pub fn arg_range(a: &ComplexMatrix) -> Result<(f64, f64), FovError> {
    let (acc, delta) = is_accretive(a, 0.0)?;
    if !acc {
        return Err(FovError::NotAccretive { delta });
    }
    let alpha_max = max_arg(a)?;
    // W(conj A) is the reflection of W(A), so the minimum arg comes from
    // the same bisection on the entrywise conjugate.
    let alpha_min = -max_arg(&a.conj())?;
    Ok((alpha_min, alpha_max))
}

/// Sector index measured from the boundary geometry alone:
/// `max(|alpha_min|, |alpha_max|)` over the arg range of `W(A)`.
pub fn sectorial_index_sweep(a: &ComplexMatrix) -> Result<SectorCone, FovError> {
    let (alpha_min, alpha_max) = arg_range(a)?;
    let gamma = alpha_min.abs().max(alpha_max.abs());
    SectorCone::new(gamma.clamp(0.0, FRAC_PI_2 - f64::EPSILON))
}

/// Fits the arg range of `W(A)` into a single-side ray cone.
///
/// Returns the `Lower` orientation when the range sits at or below the real
/// axis, `Upper` when at or above; a range properly straddling the axis is
/// not cone-confined and errors. A degenerate range hugging the axis (for
/// example a positive diagonal matrix) reports `theta1 = theta2 = 0`.
pub fn cone_fit(a: &ComplexMatrix) -> Result<RayCone, FovError> {
    let (alpha_min, alpha_max) = arg_range(a)?;
    let slack = CONE_AXIS_SLACK;
    if alpha_max <= slack {
        let theta1 = (-alpha_max).clamp(0.0, FRAC_PI_2);
        let theta2 = (-alpha_min).clamp(theta1, FRAC_PI_2);
        return RayCone::new(theta1, theta2, Orientation::Lower);
    }
    if alpha_min >= -slack {
        let theta1 = alpha_min.clamp(0.0, FRAC_PI_2);
        let theta2 = alpha_max.clamp(theta1, FRAC_PI_2);
        return RayCone::new(theta1, theta2, Orientation::Upper);
    }
    Err(FovError::NotConeConfined { alpha_min, alpha_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accretivity_of_diagonal_matrices() {
        let a = ComplexMatrix::diagonal(&[c(3.0, 2.0), c(1.0, 0.0)]);
        let (flag, delta) = is_accretive(&a, default_margin(&a)).unwrap();
        assert!(flag);
        assert!((delta - 1.0).abs() <= 1e-14);

        let b = ComplexMatrix::diagonal(&[c(-0.5, 1.0), c(2.0, 0.0)]);
        let (flag, delta) = is_accretive(&b, 0.0).unwrap();
        assert!(!flag);
        assert!((delta + 0.5).abs() <= 1e-14);
    }

    #[test]
    fn accretive_dissipative_needs_both_parts_positive() {
        let ad = ComplexMatrix::diagonal(&[c(1.0, 1.0), c(2.0, 0.5)]);
        assert!(is_accretive_dissipative(&ad, 0.0).unwrap());
        // diag(1+i, 1-i) is accretive but its imaginary part is indefinite.
        let not = ComplexMatrix::diagonal(&[c(1.0, 1.0), c(1.0, -1.0)]);
        assert!(!is_accretive_dissipative(&not, 0.0).unwrap());
        assert!(is_accretive(&not, 0.0).unwrap().0);
    }

    #[test]
    fn index_of_reference_diagonals() {
        let a = ComplexMatrix::diagonal(&[c(3.0, 2.0), c(1.0, 0.0)]);
        let s = sectorial_index(&a).unwrap();
        let expect = (2.0f64 / 3.0).atan();
        assert!((s.gamma() - expect).abs() <= 1e-12, "{} vs {expect}", s.gamma());
        assert!((s.sin() - 2.0 / 13.0f64.sqrt()).abs() <= 1e-12);

        let b = ComplexMatrix::diagonal(&[c(1.0, 1.0), c(1.0, -1.0)]);
        let s = sectorial_index(&b).unwrap();
        assert!((s.gamma() - FRAC_PI_4).abs() <= 1e-12);
    }

    #[test]
    fn hermitian_positive_definite_has_index_zero() {
        let h = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let s = sectorial_index(&h).unwrap();
        assert_eq!(s.gamma(), 0.0);
    }

    #[test]
    fn non_accretive_input_is_rejected() {
        let m = ComplexMatrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(sectorial_index(&m), Err(FovError::NotAccretive { .. })));
        assert!(matches!(arg_range(&m), Err(FovError::NotAccretive { .. })));
    }

    #[test]
    fn both_index_routes_agree_on_diagonals() {
        for (re, im) in [(3.0, 2.0), (1.0, 0.3), (5.0, -4.0), (2.0, 1.99)] {
            let a = ComplexMatrix::diagonal(&[c(re, im), c(1.0, 0.0)]);
            let g1 = sectorial_index(&a).unwrap().gamma();
            let g2 = sectorial_index_sweep(&a).unwrap().gamma();
            assert!((g1 - g2).abs() <= 1e-6, "gev {g1} sweep {g2}");
        }
    }

    #[test]
    fn arg_range_of_normal_matrix_spans_eigenvalue_args() {
        let a = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, -FRAC_PI_6),
            Complex64::from_polar(2.0, -FRAC_PI_4),
        ]);
        let (lo, hi) = arg_range(&a).unwrap();
        assert!((lo + FRAC_PI_4).abs() <= 1e-9, "{lo}");
        assert!((hi + FRAC_PI_6).abs() <= 1e-9, "{hi}");
    }

    #[test]
    fn cone_fit_reference_example() {
        let a = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, -FRAC_PI_6),
            Complex64::from_polar(2.0, -FRAC_PI_4),
        ]);
        let cone = cone_fit(&a).unwrap();
        assert_eq!(cone.orientation, Orientation::Lower);
        assert!((cone.theta1 - FRAC_PI_6).abs() <= 1e-9);
        assert!((cone.theta2 - FRAC_PI_4).abs() <= 1e-9);
        assert!((cone.gamma1() - PI / 3.0).abs() <= 1e-9);
    }

    #[test]
    fn cone_fit_upper_orientation_from_adjoint() {
        let a = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, FRAC_PI_6),
            Complex64::from_polar(2.0, FRAC_PI_4),
        ]);
        let cone = cone_fit(&a).unwrap();
        assert_eq!(cone.orientation, Orientation::Upper);
        assert!((cone.theta1 - FRAC_PI_6).abs() <= 1e-9);
        assert!((cone.theta2 - FRAC_PI_4).abs() <= 1e-9);
    }

    #[test]
    fn cone_fit_degenerate_positive_diagonal() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let cone = cone_fit(&a).unwrap();
        assert!(cone.theta1.abs() <= 1e-9);
        assert!(cone.theta2.abs() <= 1e-9);
    }

    #[test]
    fn straddling_range_is_not_cone_confined() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 1.0), c(1.0, -1.0)]);
        assert!(matches!(cone_fit(&a), Err(FovError::NotConeConfined { .. })));
    }

    #[test]
    fn gamma1_of_reference_cones() {
        let cone = RayCone::new(FRAC_PI_6, FRAC_PI_4, Orientation::Lower).unwrap();
        assert!((cone.gamma1() - PI / 3.0).abs() <= 1e-15);
        let tight = RayCone::new(0.4 * PI, 0.45 * PI, Orientation::Lower).unwrap();
        assert!((tight.gamma1() - 0.45 * PI).abs() <= 1e-15);
    }

    #[test]
    fn cone_constructor_validates_angles() {
        assert!(RayCone::new(0.5, 0.4, Orientation::Lower).is_err());
        assert!(RayCone::new(-0.1, 0.4, Orientation::Lower).is_err());
        assert!(RayCone::new(0.1, 2.0, Orientation::Lower).is_err());
        assert!(SectorCone::new(FRAC_PI_2).is_err());
        assert!(SectorCone::new(-0.01).is_err());
    }
}
