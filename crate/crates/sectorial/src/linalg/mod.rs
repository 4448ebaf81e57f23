//! Dense square complex matrices and the small set of factorizations the
//! rest of the crate is built on.

use num_complex::Complex64;
use thiserror::Error;

mod eig;
mod lu;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianEigen};
pub use lu::{inverse, lu_factor, lu_solve, LuFactorization};

/// Relative pivot floor below which `lu_factor` declares the matrix singular.
pub const LU_PIVOT_FLOOR_REL: f64 = 1e-14;
/// Relative Hermiticity tolerance accepted by `hermitian_eig`.
pub const HERMITICITY_TOL_REL: f64 = 1e-10;
/// Relative off-diagonal mass at which the Jacobi sweep stops.
pub const JACOBI_OFF_TOL_REL: f64 = 1e-13;
/// Sweep budget for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 30;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("matrix of dimension 0 is not allowed")]
    EmptyMatrix,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },
    #[error("not Hermitian: asymmetry {residual:.3e} exceeds {allowed:.3e}")]
    NotHermitian { residual: f64, allowed: f64 },
    #[error("Jacobi eigensolver did not reach the off-diagonal target in {0} sweeps")]
    EigNonConvergence(usize),
    #[error("numerically singular: pivot {pivot:.3e} below floor {floor:.3e}")]
    Singular { pivot: f64, floor: f64 },
}

/// Square matrix of `Complex64`, row-major. Entries are finite by
/// construction; checked constructors reject anything else.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = diag[i];
        }
        m
    }

    /// Builds from a closure over (row, col). The closure must produce
    /// finite entries; this is asserted.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = f(i, j);
                assert!(z.re.is_finite() && z.im.is_finite(), "non-finite entry at ({i},{j})");
                entries.push(z);
            }
        }
        ComplexMatrix { n, entries }
    }

    /// Checked constructor from nested rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LinalgError::RaggedRows { row: i, got: row.len(), expected: n });
            }
            for &z in row {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(LinalgError::NonFiniteEntry);
                }
                entries.push(z);
            }
        }
        Ok(ComplexMatrix { n, entries })
    }

    /// Checked constructor from a row-major slice of length `n*n`.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(LinalgError::RaggedRows { row: 0, got: entries.len(), expected: n * n });
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFiniteEntry);
        }
        Ok(ComplexMatrix { n, entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.entries[i * self.n + j] = z;
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { n: self.n, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(ComplexMatrix { n: self.n, entries })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                let row_b = &other.entries[k * n..(k + 1) * n];
                let row_o = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    row_o[j] += aik * row_b[j];
                }
            }
        }
        Ok(ComplexMatrix { n, entries: out })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self.entries.iter().map(|a| a * c).collect();
        ComplexMatrix { n: self.n, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        ComplexMatrix::from_fn(n, |i, j| self.entries[j * n + i].conj())
    }

    /// Entrywise conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let entries = self.entries.iter().map(|z| z.conj()).collect();
        ComplexMatrix { n: self.n, entries }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.entries[i * self.n + i]).sum()
    }

    fn check_dim(&self, other: &Self) -> Result<(), LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// Cartesian decomposition `A = Re(A) + i Im(A)` with both parts Hermitian:
/// `Re(A) = (A + A*)/2`, `Im(A) = (A - A*)/(2i)`.
pub fn cartesian_parts(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut re = ComplexMatrix::zeros(n);
    let mut im = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let aij = a.get(i, j);
            let aji_c = a.get(j, i).conj();
            re.set(i, j, (aij + aji_c) * 0.5);
            // (aij - conj(aji)) / (2i) == -i/2 * (aij - conj(aji))
            let d = aij - aji_c;
            im.set(i, j, Complex64::new(d.im * 0.5, -d.re * 0.5));
        }
    }
    (re, im)
}

/// Spectral norm `sqrt(lambda_max(A* A))`. Exact zero for the zero matrix.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.frobenius_norm() == 0.0 {
        return 0.0;
    }
    let g = a.adjoint().mul(a).expect("square");
    // A*A is Hermitian to the last bit, so the eigensolver cannot reject it.
    let vals = hermitian_eigenvalues(&g).expect("gram matrix is Hermitian");
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn lambda_max(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    let vals = hermitian_eigenvalues(h)?;
    Ok(*vals.last().expect("nonempty"))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    let vals = hermitian_eigenvalues(h)?;
    Ok(vals[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        // Tiny xorshift so unit tests do not depend on the ensemble module.
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        ComplexMatrix::from_fn(n, |_, _| c(next(), next()))
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let a = random_matrix(5, 3);
        let i = ComplexMatrix::identity(5);
        let left = i.mul(&a).unwrap();
        let right = a.mul(&i).unwrap();
        assert_eq!(left, a);
        assert_eq!(right, a);
    }

    #[test]
    fn product_adjoint_matches_reversed_adjoint_product() {
        // Oracle: both sides assembled entrywise from the definitions.
        for seed in 0..10u64 {
            let a = random_matrix(5, 2 * seed + 1);
            let b = random_matrix(5, 7 * seed + 5);
            let lhs = a.mul(&b).unwrap().adjoint();
            let rhs = b.adjoint().mul(&a.adjoint()).unwrap();
            let mut worst = 0.0f64;
            for i in 0..5 {
                for j in 0..5 {
                    // (AB)*[i][j] = conj((AB)[j][i]) = conj(sum_k A[j][k] B[k][i])
                    let direct: Complex64 =
                        (0..5).map(|k| a.get(j, k) * b.get(k, i)).sum::<Complex64>().conj();
                    worst = worst.max((lhs.get(i, j) - direct).norm());
                    worst = worst.max((rhs.get(i, j) - direct).norm());
                }
            }
            assert!(worst <= 1e-14, "adjoint identity violated by {worst:.3e}");
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = ComplexMatrix::identity(3);
        let b = ComplexMatrix::identity(4);
        assert!(matches!(a.mul(&b), Err(LinalgError::DimensionMismatch(3, 4))));
        assert!(matches!(a.add(&b), Err(LinalgError::DimensionMismatch(3, 4))));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(ComplexMatrix::from_rows(vec![]), Err(LinalgError::EmptyMatrix)));
        let ragged = vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]];
        assert!(matches!(ComplexMatrix::from_rows(ragged), Err(LinalgError::RaggedRows { .. })));
        let nan = vec![vec![c(f64::NAN, 0.0)]];
        assert!(matches!(ComplexMatrix::from_rows(nan), Err(LinalgError::NonFiniteEntry)));
    }

    #[test]
    fn cartesian_parts_recompose_and_are_hermitian() {
        for seed in 0..8u64 {
            let a = random_matrix(6, seed + 11);
            let (re, im) = cartesian_parts(&a);
            for i in 0..6 {
                for j in 0..6 {
                    // Hermitian symmetry must hold exactly by construction.
                    assert_eq!(re.get(i, j), re.get(j, i).conj());
                    assert_eq!(im.get(i, j), im.get(j, i).conj());
                    let back = re.get(i, j) + Complex64::new(0.0, 1.0) * im.get(i, j);
                    assert!((back - a.get(i, j)).norm() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn cartesian_parts_of_jordan_block() {
        // A = [[0,1],[0,0]]: Re = [[0,1/2],[1/2,0]], Im = [[0,-i/2],[i/2,0]]
        // scaled into real/imag entries by the defining formulas.
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let (re, im) = cartesian_parts(&a);
        // Oracle: direct formula evaluation.
        let adj = a.adjoint();
        for i in 0..2 {
            for j in 0..2 {
                let re_expect = (a.get(i, j) + adj.get(i, j)) * 0.5;
                let d = a.get(i, j) - adj.get(i, j);
                let im_expect = Complex64::new(d.im * 0.5, -d.re * 0.5);
                assert!((re.get(i, j) - re_expect).norm() <= 1e-16);
                assert!((im.get(i, j) - im_expect).norm() <= 1e-16);
            }
        }
        assert!((re.get(0, 1) - c(0.5, 0.0)).norm() <= 1e-16);
        assert!((im.get(0, 1) - c(0.0, -0.5)).norm() <= 1e-16);
    }

    #[test]
    fn hermitian_input_has_zero_imaginary_part() {
        let h = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, 3.0)],
            vec![c(1.0, -3.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let (re, im) = cartesian_parts(&h);
        assert!(im.frobenius_norm() <= 1e-15);
        assert!(re.sub(&h).unwrap().frobenius_norm() <= 1e-15);
    }

    #[test]
    fn operator_norm_of_simple_matrices() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(4)), 0.0);
        let d = ComplexMatrix::diagonal(&[c(3.0, 4.0), c(1.0, 0.0)]);
        assert!((operator_norm(&d) - 5.0).abs() <= 5.0 * 1e-12);
        // Jordan block has norm 1 though every eigenvalue is 0.
        let j = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!((operator_norm(&j) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn operator_norm_is_submultiplicative_on_random_pairs() {
        for seed in 0..12u64 {
            let a = random_matrix(5, seed + 31);
            let b = random_matrix(5, 3 * seed + 17);
            let ab = a.mul(&b).unwrap();
            let na = operator_norm(&a);
            let nb = operator_norm(&b);
            let nab = operator_norm(&ab);
            assert!(nab <= na * nb * (1.0 + 1e-10), "{nab} > {na}*{nb}");
        }
    }
}
