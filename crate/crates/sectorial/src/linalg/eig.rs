//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation is a complex Givens rotation absorbing the phase of the
//! pivot entry, so the 2x2 subproblem reduces to the classical real case.
//! Sweeps run over all (p, q) pairs; the iteration stops when the
//! off-diagonal Frobenius mass falls below `JACOBI_OFF_TOL_REL * ||H||_F`.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, HERMITICITY_TOL_REL, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL_REL};

/// Eigendecomposition of a Hermitian matrix. `values` ascend; `vectors`
/// holds the matching eigenvectors as columns and is unitary.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Full eigendecomposition. The input is checked for Hermiticity up to
/// `HERMITICITY_TOL_REL` relative asymmetry and symmetrized before the sweep.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let (values, vectors) = jacobi(h, true)?;
    Ok(HermitianEigen { values, vectors: vectors.expect("vectors requested") })
}

/// Eigenvalues only (ascending); skips accumulating the unitary factor.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let (values, _) = jacobi(h, false)?;
    Ok(values)
}

fn offdiag_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(
    h: &ComplexMatrix,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<ComplexMatrix>), LinalgError> {
    let n = h.dim();
    let scale = h.frobenius_norm();

    let mut residual = 0.0f64;
    for i in 0..n {
        for j in i..n {
            residual += (h.get(i, j) - h.get(j, i).conj()).norm_sqr();
        }
    }
    let residual = residual.sqrt();
    let allowed = HERMITICITY_TOL_REL * scale;
    if residual > allowed {
        return Err(LinalgError::NotHermitian { residual, allowed });
    }

    // Symmetrized working copy; diagonal forced real.
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
        }
        let d = a[i * n + i];
        a[i * n + i] = Complex64::new(d.re, 0.0);
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n).entries().to_vec());

    if scale == 0.0 || n == 1 {
        return finish(a, v, n);
    }

    let target = JACOBI_OFF_TOL_REL * scale;
    // Entries individually below this cannot push the off-diagonal mass
    // over the target, so rotating on them is wasted work.
    let skip = target / (2.0 * n as f64);

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if offdiag_norm(&a, n) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let abs = apq.norm();
                if abs <= skip {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = (t * c) * phase; // sigma * e^{i*phi}

                // Column update: A <- A R with R[p][p]=R[q][q]=c,
                // R[p][q]=s, R[q][p]=-conj(s).
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * s.conj();
                    a[k * n + q] = akp * s + akq * c;
                }
                // Row update: A <- R^H A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * s;
                    a[q * n + k] = apk * s.conj() + aqk * c;
                }
                // The 2x2 block is solved exactly; pin it to kill rounding.
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * abs, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * abs, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * s.conj();
                        v[k * n + q] = vkp * s + vkq * c;
                    }
                }
            }
        }
    }
    if !converged && offdiag_norm(&a, n) > target {
        return Err(LinalgError::EigNonConvergence(JACOBI_MAX_SWEEPS));
    }
    finish(a, v, n)
}

fn finish(
    a: Vec<Complex64>,
    v: Option<Vec<Complex64>>,
    n: usize,
) -> Result<(Vec<f64>, Option<ComplexMatrix>), LinalgError> {
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| {
        ComplexMatrix::from_fn(n, |i, j| v[i * n + order[j]])
    });
    Ok((values, vectors))
}
