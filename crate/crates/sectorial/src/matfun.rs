//! Fractional matrix powers of accretive matrices.
//!
//! Two routes:
//!
//! * a resolvent contour integral `A^t = (1/2*pi*i) \oint z^t (zI - A)^{-1} dz`
//!   over a circle in the open right half-plane, discretized by the
//!   trapezoid rule with node doubling (`fractional_power`);
//! * the Denman-Beavers coupled Newton iteration for the principal square
//!   root (`sqrt_db`), chained for exponents `1/2^k` (`power_chain`).
//!
//! The trapezoid rule converges geometrically here because the integrand is
//! analytic in a neighbourhood of the contour; the last doubling difference
//! is reported as the quadrature error estimate.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::fov::{self, FovError};
use crate::linalg::{self, cartesian_parts, ComplexMatrix, LinalgError};

/// Relative stop for node doubling.
pub const QUAD_TOL_REL: f64 = 1e-10;
/// Trapezoid node count of the first pass.
pub const QUAD_START_NODES: usize = 16;
/// Default node-count cap; quadrature gives up past this.
pub const QUAD_DEFAULT_MAX_NODES: usize = 1 << 14;
/// Error-estimate inflation when the doubling loop hits the cap.
const QUAD_FAIL_INFLATION: f64 = 8.0;
/// `delta / w` below this marks the contour as ill-conditioned.
pub const ILL_CONDITIONED_RATIO: f64 = 1e-6;
/// Relative stop for the Denman-Beavers iteration.
pub const DB_TOL_REL: f64 = 1e-12;
/// Iteration cap for Denman-Beavers; the current iterate is returned at it.
pub const DB_MAX_ITERS: usize = 100;
/// Largest supported length of a repeated-square-root chain.
pub const MAX_HALVINGS: usize = 6;
/// Largest supported denominator exponent for dyadic powers.
pub const MAX_DYADIC_LOG2: usize = 12;
/// Tolerance handed to the internal numerical-radius call that sizes the
/// contour; only the contour geometry depends on it.
const CONTOUR_RADIUS_TOL_REL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MatFunError {
    #[error("matrix is not accretive: min Re eigenvalue {delta:.3e}")]
    NotAccretive { delta: f64 },
    #[error("exponent {0} outside (0, 1)")]
    ExponentOutOfRange(f64),
    #[error("halvings {0} outside 1..={MAX_HALVINGS}")]
    HalvingsOutOfRange(usize),
    #[error("dyadic denominator exponent {0} outside 1..={MAX_DYADIC_LOG2}")]
    DyadicDepthOutOfRange(usize),
    #[error("iterate became singular at Denman-Beavers step {iter}")]
    SingularIterate { iter: usize },
    #[error("node cap {0} below the starting resolution {min}", min = 2 * QUAD_START_NODES)]
    NodeCapTooSmall(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fov(#[from] FovError),
}

/// Integration circle `z = center + radius * e^{i phi}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContourSpec {
    pub center: f64,
    pub radius: f64,
    /// Numerical radius of the matrix the contour was sized for.
    pub w: f64,
    /// `lambda_min(Re A)`, the distance from `W(A)` to the imaginary axis.
    pub delta: f64,
    /// Set when `delta / w` is small enough that the required node counts
    /// blow up; results should be treated as low-accuracy.
    pub ill_conditioned: bool,
}

/// Sizes a circle that encloses `W(A)` (hence the spectrum) while staying
/// in the open right half-plane.
///
/// With `c = max(w^2/delta, 2w)` every point of
/// `{ |z| <= w, Re z >= delta }` is within `sqrt(c^2 - w^2)` of `c`, and
/// `r = (c + sqrt(c^2 - w^2)) / 2` splits the gap between that bound and
/// the origin-clearance limit `c`.
pub fn contour_for(w: f64, delta: f64) -> Result<ContourSpec, MatFunError> {
    if !(delta > 0.0) {
        return Err(MatFunError::NotAccretive { delta });
    }
    assert!(w > 0.0 && w.is_finite(), "numerical radius must be positive");
    let c = (w * w / delta).max(2.0 * w);
    let s = (c * c - w * w).max(0.0).sqrt();
    Ok(ContourSpec {
        center: c,
        radius: 0.5 * (c + s),
        w,
        delta,
        ill_conditioned: delta < ILL_CONDITIONED_RATIO * w,
    })
}

/// Outcome of the contour quadrature.
#[derive(Clone, Debug)]
pub struct PowerResult {
    pub matrix: ComplexMatrix,
    /// Frobenius norm of the last node-doubling difference; inflated when
    /// the loop stopped at the cap instead of converging.
    pub quadrature_error: f64,
    pub t: f64,
    pub nodes: usize,
    pub converged: bool,
    pub contour: ContourSpec,
}

/// One trapezoid term `e^{i phi} z^t (zI - A)^{-1}` at `phi`.
fn node_term(
    a: &ComplexMatrix,
    t: f64,
    spec: &ContourSpec,
    phi: f64,
) -> Result<ComplexMatrix, MatFunError> {
    let n = a.dim();
    let e = Complex64::from_polar(1.0, phi);
    let z = Complex64::new(spec.center, 0.0) + spec.radius * e;
    let shifted = ComplexMatrix::from_fn(n, |i, j| {
        let d = if i == j { z } else { Complex64::new(0.0, 0.0) };
        d - a.get(i, j)
    });
    let resolvent = linalg::inverse(&shifted)?;
    Ok(resolvent.scale(z.powf(t) * e))
}

/// `A^t` for accretive `A` and `t` in `(0, 1)`, default node cap.
pub fn fractional_power(a: &ComplexMatrix, t: f64) -> Result<PowerResult, MatFunError> {
    fractional_power_with_cap(a, t, QUAD_DEFAULT_MAX_NODES)
}

/// `A^t` with an explicit node cap. Hitting the cap is not an error: the
/// result carries `converged = false` and an inflated error estimate.
pub fn fractional_power_with_cap(
    a: &ComplexMatrix,
    t: f64,
    max_nodes: usize,
) -> Result<PowerResult, MatFunError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(MatFunError::ExponentOutOfRange(t));
    }
    if max_nodes < 2 * QUAD_START_NODES {
        return Err(MatFunError::NodeCapTooSmall(max_nodes));
    }
    let (re, _) = cartesian_parts(a);
    let delta = linalg::lambda_min(&re)?;
    if delta <= 0.0 {
        return Err(MatFunError::NotAccretive { delta });
    }
    let scale = a.frobenius_norm();
    let w = fov::numerical_radius(a, CONTOUR_RADIUS_TOL_REL * scale)?.value;
    let spec = contour_for(w, delta)?;

    let n = a.dim();
    let tau = 2.0 * std::f64::consts::PI;
    let mut m = QUAD_START_NODES;
    // S_M = (r/M) sum_k e^{i phi_k} z_k^t (z_k I - A)^{-1}, phi_k = tau*k/M.
    let mut sum = ComplexMatrix::zeros(n);
    for k in 0..m {
        sum = sum.add(&node_term(a, t, &spec, tau * (k as f64) / (m as f64))?)?;
    }
    let mut approx = sum.scale(Complex64::new(spec.radius / (m as f64), 0.0));
    loop {
        // The 2M grid reuses all M old nodes; only odd indices are new.
        let mm = 2 * m;
        let mut odd = ComplexMatrix::zeros(n);
        for j in (1..mm).step_by(2) {
            odd = odd.add(&node_term(a, t, &spec, tau * (j as f64) / (mm as f64))?)?;
        }
        let refined = approx
            .scale(Complex64::new(0.5, 0.0))
            .add(&odd.scale(Complex64::new(spec.radius / (mm as f64), 0.0)))?;
        let diff = refined.sub(&approx).unwrap().frobenius_norm();
        let target = QUAD_TOL_REL * refined.frobenius_norm();
        if diff <= target {
            return Ok(PowerResult {
                matrix: refined,
                quadrature_error: diff,
                t,
                nodes: mm,
                converged: true,
                contour: spec,
            });
        }
        if mm >= max_nodes {
            return Ok(PowerResult {
                matrix: refined,
                quadrature_error: diff * QUAD_FAIL_INFLATION,
                t,
                nodes: mm,
                converged: false,
                contour: spec,
            });
        }
        approx = refined;
        m = mm;
    }
}

/// Principal square root by the Denman-Beavers iteration
/// `X <- (X + Y^{-1})/2`, `Y <- (Y + X^{-1})/2` from `X = A`, `Y = I`,
/// both updates using the previous pair.
pub fn sqrt_db(a: &ComplexMatrix) -> Result<ComplexMatrix, MatFunError> {
    let (re, _) = cartesian_parts(a);
    let delta = linalg::lambda_min(&re)?;
    if delta <= 0.0 {
        return Err(MatFunError::NotAccretive { delta });
    }
    let n = a.dim();
    let mut x = a.clone();
    let mut y = ComplexMatrix::identity(n);
    let half = Complex64::new(0.5, 0.0);
    for iter in 0..DB_MAX_ITERS {
        let y_inv = linalg::inverse(&y).map_err(|_| MatFunError::SingularIterate { iter })?;
        let x_inv = linalg::inverse(&x).map_err(|_| MatFunError::SingularIterate { iter })?;
        let x_next = x.add(&y_inv)?.scale(half);
        let y_next = y.add(&x_inv)?.scale(half);
        let step = x_next.sub(&x)?.frobenius_norm();
        let done = step <= DB_TOL_REL * x.frobenius_norm();
        x = x_next;
        y = y_next;
        if done {
            break;
        }
    }
    Ok(x)
}

/// Repeated square roots: element `k` is `A^(1/2^(k+1))`,
/// `k = 0..halvings`.
pub fn power_chain(a: &ComplexMatrix, halvings: usize) -> Result<Vec<ComplexMatrix>, MatFunError> {
    if halvings == 0 || halvings > MAX_HALVINGS {
        return Err(MatFunError::HalvingsOutOfRange(halvings));
    }
    let mut out = Vec::with_capacity(halvings);
    let mut cur = sqrt_db(a)?;
    for _ in 1..halvings {
        let next = sqrt_db(&cur)?;
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    Ok(out)
}

/// `A^(numer / 2^log2_denom)` for accretive `A`, with the exponent in
/// `(0, 1)`, assembled from a repeated-square-root chain: each set bit of
/// the (reduced) numerator contributes one factor `A^(1/2^j)`.
///
/// All factors are functions of `A` and commute, so the product order does
/// not matter. The cost, unlike the contour quadrature, does not depend on
/// how close `W(A)` comes to the imaginary axis.
pub fn dyadic_power(
    a: &ComplexMatrix,
    numer: u32,
    log2_denom: usize,
) -> Result<ComplexMatrix, MatFunError> {
    if log2_denom == 0 || log2_denom > MAX_DYADIC_LOG2 {
        return Err(MatFunError::DyadicDepthOutOfRange(log2_denom));
    }
    let denom = 1u64 << log2_denom;
    if numer == 0 || u64::from(numer) >= denom {
        return Err(MatFunError::ExponentOutOfRange(numer as f64 / denom as f64));
    }
    let mut k = numer;
    let mut m = log2_denom;
    while k & 1 == 0 {
        k >>= 1;
        m -= 1;
    }
    // roots[i] = A^(1/2^(i+1)); sqrt_db re-checks accretivity at each level.
    let mut roots = Vec::with_capacity(m);
    let mut cur = sqrt_db(a)?;
    for _ in 1..m {
        let next = sqrt_db(&cur)?;
        roots.push(cur);
        cur = next;
    }
    roots.push(cur);
    let mut out: Option<ComplexMatrix> = None;
    for j in 0..m {
        if (k >> j) & 1 == 1 {
            let factor = &roots[m - 1 - j];
            out = Some(match out {
                None => factor.clone(),
                Some(p) => p.mul(factor)?,
            });
        }
    }
    Ok(out.expect("reduced numerator is odd, so bit 0 is set"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Nonnormal accretive fixture: Hermitian parts that do not commute.
    fn skewed() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.2), c(0.3, 0.1)],
            vec![c(0.3, 0.1), c(1.0, -0.1)],
        ])
        .unwrap()
    }

    fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm()
    }

    #[test]
    fn contour_for_identity_scale() {
        let spec = contour_for(1.0, 1.0).unwrap();
        assert!((spec.center - 2.0).abs() <= 1e-15);
        assert!((spec.radius - 0.5 * (2.0 + 3.0f64.sqrt())).abs() <= 1e-15);
        assert!(!spec.ill_conditioned);
        // Leftmost contour point stays right of the origin.
        assert!(spec.center - spec.radius > 0.0);
    }

    #[test]
    fn contour_for_spread_diagonal() {
        // diag(4, 1): w = 4, delta = 1, so c = 16 and r = (16 + sqrt(240))/2.
        let spec = contour_for(4.0, 1.0).unwrap();
        assert!((spec.center - 16.0).abs() <= 1e-15);
        assert!((spec.radius - 0.5 * (16.0 + 240.0f64.sqrt())).abs() <= 1e-12);
        assert!(spec.center - spec.radius > 0.0);
    }

    #[test]
    fn contour_flags_tiny_accretivity_margin() {
        let spec = contour_for(1.0, 1e-8).unwrap();
        assert!(spec.ill_conditioned);
        assert!(!contour_for(1.0, 1e-4).unwrap().ill_conditioned);
    }

    #[test]
    fn square_root_of_diagonal_matrix() {
        let a = ComplexMatrix::diagonal(&[c(4.0, 0.0), c(1.0, 0.0)]);
        let res = fractional_power(&a, 0.5).unwrap();
        assert!(res.converged);
        let expect = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(rel_diff(&res.matrix, &expect) <= 1e-9, "err {}", rel_diff(&res.matrix, &expect));
    }

    #[test]
    fn quarter_power_of_diagonal_matrix() {
        let a = ComplexMatrix::diagonal(&[c(4.0, 0.0), c(1.0, 0.0)]);
        let res = fractional_power(&a, 0.25).unwrap();
        let expect = ComplexMatrix::diagonal(&[c(2.0f64.sqrt(), 0.0), c(1.0, 0.0)]);
        assert!(rel_diff(&res.matrix, &expect) <= 1e-9);
    }

    #[test]
    fn complex_diagonal_power_matches_scalar_branch() {
        let z1 = Complex64::from_polar(2.0, 0.7);
        let z2 = Complex64::from_polar(1.5, -0.4);
        let a = ComplexMatrix::diagonal(&[z1, z2]);
        let res = fractional_power(&a, 0.6).unwrap();
        let expect = ComplexMatrix::diagonal(&[z1.powf(0.6), z2.powf(0.6)]);
        assert!(rel_diff(&res.matrix, &expect) <= 1e-9);
    }

    #[test]
    fn denman_beavers_square_root() {
        let a = ComplexMatrix::diagonal(&[c(4.0, 0.0), c(1.0, 0.0)]);
        let root = sqrt_db(&a).unwrap();
        let expect = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(rel_diff(&root, &expect) <= 1e-12);

        let b = skewed();
        let root = sqrt_db(&b).unwrap();
        assert!(rel_diff(&root.mul(&root).unwrap(), &b) <= 1e-10);
    }

    #[test]
    fn contour_and_denman_beavers_agree() {
        let a = skewed();
        let quad = fractional_power(&a, 0.5).unwrap();
        assert!(quad.converged);
        let db = sqrt_db(&a).unwrap();
        assert!(rel_diff(&quad.matrix, &db) <= 1e-8, "gap {}", rel_diff(&quad.matrix, &db));
    }

    #[test]
    fn powers_compose_along_the_semigroup() {
        let a = skewed();
        let p3 = fractional_power(&a, 0.3).unwrap().matrix;
        let p4 = fractional_power(&a, 0.4).unwrap().matrix;
        let p7 = fractional_power(&a, 0.7).unwrap().matrix;
        assert!(rel_diff(&p3.mul(&p4).unwrap(), &p7) <= 1e-8);
    }

    #[test]
    fn power_chain_matches_direct_exponents() {
        let a = skewed();
        let chain = power_chain(&a, 3).unwrap();
        assert_eq!(chain.len(), 3);
        for (k, m) in chain.iter().enumerate() {
            let t = 0.5f64.powi(k as i32 + 1);
            let direct = fractional_power(&a, t).unwrap().matrix;
            assert!(rel_diff(m, &direct) <= 1e-8, "k={k}");
        }
    }

    #[test]
    fn dyadic_power_on_diagonal_matrix() {
        let a = ComplexMatrix::diagonal(&[c(4.0, 0.0), c(1.0, 0.0)]);
        let got = dyadic_power(&a, 3, 3).unwrap();
        let expect = ComplexMatrix::diagonal(&[c(4.0f64.powf(0.375), 0.0), c(1.0, 0.0)]);
        assert!(rel_diff(&got, &expect) <= 1e-10, "err {}", rel_diff(&got, &expect));
    }

    #[test]
    fn dyadic_power_matches_contour_route() {
        let a = skewed();
        for (numer, log2, t) in [(5u32, 4usize, 0.3125), (3, 3, 0.375), (11, 6, 0.171875)] {
            let fast = dyadic_power(&a, numer, log2).unwrap();
            let quad = fractional_power(&a, t).unwrap();
            assert!(quad.converged);
            let gap = rel_diff(&fast, &quad.matrix);
            assert!(gap <= 1e-8, "t={t} gap {gap}");
        }
    }

    #[test]
    fn dyadic_power_reduces_even_numerators() {
        let a = skewed();
        // 4/8 = 1/2 must collapse to a single square root.
        let half = dyadic_power(&a, 4, 3).unwrap();
        let root = sqrt_db(&a).unwrap();
        assert!(rel_diff(&half, &root) <= 1e-14);
    }

    #[test]
    fn dyadic_power_validation() {
        let a = ComplexMatrix::identity(2);
        assert!(matches!(dyadic_power(&a, 0, 3), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(dyadic_power(&a, 8, 3), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(dyadic_power(&a, 9, 3), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(dyadic_power(&a, 1, 0), Err(MatFunError::DyadicDepthOutOfRange(0))));
        assert!(matches!(dyadic_power(&a, 1, 13), Err(MatFunError::DyadicDepthOutOfRange(13))));
    }

    #[test]
    fn parameter_validation() {
        let a = ComplexMatrix::identity(2);
        assert!(matches!(fractional_power(&a, 0.0), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(fractional_power(&a, 1.0), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(fractional_power(&a, -0.5), Err(MatFunError::ExponentOutOfRange(_))));
        assert!(matches!(power_chain(&a, 0), Err(MatFunError::HalvingsOutOfRange(0))));
        assert!(matches!(power_chain(&a, 7), Err(MatFunError::HalvingsOutOfRange(7))));
        assert!(matches!(
            fractional_power_with_cap(&a, 0.5, 16),
            Err(MatFunError::NodeCapTooSmall(16))
        ));
    }

    #[test]
    fn non_accretive_inputs_are_rejected() {
        let m = ComplexMatrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(fractional_power(&m, 0.5), Err(MatFunError::NotAccretive { .. })));
        assert!(matches!(sqrt_db(&m), Err(MatFunError::NotAccretive { .. })));
    }

    #[test]
    fn tight_node_cap_reports_honest_failure() {
        // Spread spectrum forces many nodes; a cap of 32 cannot converge.
        let a = ComplexMatrix::diagonal(&[c(100.0, 0.0), c(0.01, 0.0)]);
        let res = fractional_power_with_cap(&a, 0.5, 32).unwrap();
        assert!(!res.converged);
        assert_eq!(res.nodes, 32);
        let expect = ComplexMatrix::diagonal(&[c(10.0, 0.0), c(0.1, 0.0)]);
        // The inflated estimate must cover the actual error.
        let actual = res.matrix.sub(&expect).unwrap().frobenius_norm();
        assert!(res.quadrature_error >= actual, "estimate {} actual {actual}", res.quadrature_error);
    }

    #[test]
    fn identity_power_is_identity() {
        let a = ComplexMatrix::identity(3);
        let res = fractional_power(&a, 0.37).unwrap();
        assert!(rel_diff(&res.matrix, &a) <= 1e-10);
        assert!(res.quadrature_error <= 1e-9);
    }
}
