//! LU factorization with partial pivoting, used for linear solves and the
//! resolvent evaluations in the contour quadrature.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, LU_PIVOT_FLOOR_REL};

/// Packed LU factors of a row-permuted matrix: `P A = L U` with unit lower
/// triangle. `pivots[k]` records the row swapped into position `k`.
#[derive(Clone, Debug)]
pub struct LuFactorization {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

pub fn lu_factor(a: &ComplexMatrix) -> Result<LuFactorization, LinalgError> {
    let n = a.dim();
    let floor = LU_PIVOT_FLOOR_REL * a.frobenius_norm();
    let mut lu = a.entries().to_vec();
    let mut pivots = vec![0usize; n];

    for k in 0..n {
        let mut best = k;
        let mut best_abs = lu[k * n + k].norm();
        for i in (k + 1)..n {
            let v = lu[i * n + k].norm();
            if v > best_abs {
                best = i;
                best_abs = v;
            }
        }
        pivots[k] = best;
        if best != k {
            for j in 0..n {
                lu.swap(k * n + j, best * n + j);
            }
        }
        if best_abs < floor || best_abs == 0.0 {
            return Err(LinalgError::Singular { pivot: best_abs, floor });
        }
        let inv_piv = Complex64::new(1.0, 0.0) / lu[k * n + k];
        for i in (k + 1)..n {
            let m = lu[i * n + k] * inv_piv;
            lu[i * n + k] = m;
            if m.re == 0.0 && m.im == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let ukj = lu[k * n + j];
                lu[i * n + j] -= m * ukj;
            }
        }
    }
    Ok(LuFactorization { n, lu, pivots })
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A X = B` for square `B` using the packed factors.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        let n = self.n;
        if b.dim() != n {
            return Err(LinalgError::DimensionMismatch(n, b.dim()));
        }
        let mut x = b.entries().to_vec();
        // Apply the recorded row swaps.
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                for j in 0..n {
                    x.swap(k * n + j, p * n + j);
                }
            }
        }
        // Forward substitution with the unit lower triangle.
        for i in 1..n {
            for k in 0..i {
                let m = self.lu[i * n + k];
                if m.re == 0.0 && m.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let xkj = x[k * n + j];
                    x[i * n + j] -= m * xkj;
                }
            }
        }
        // Back substitution with U.
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = self.lu[i * n + k];
                if u.re == 0.0 && u.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let xkj = x[k * n + j];
                    x[i * n + j] -= u * xkj;
                }
            }
            let d = self.lu[i * n + i];
            for j in 0..n {
                x[i * n + j] /= d;
            }
        }
        ComplexMatrix::from_entries(n, x)
    }
}

/// One-shot factor-and-solve of `A X = B`.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    lu_factor(a)?.solve(b)
}

/// Matrix inverse through `lu_solve(A, I)`.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    lu_solve(a, &ComplexMatrix::identity(a.dim()))
}
