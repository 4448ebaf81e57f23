//! Field-of-values geometry: support functions, certified numerical radius,
//! boundary scans, accretivity predicates, sector indices and cone fits.
//!
//! The field of values of `A` is `W(A) = { <Ax, x> : ||x|| = 1 }`, a compact
//! convex set. Everything in this module reduces questions about `W(A)` to
//! Hermitian eigenproblems of rotated real parts.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};

mod boundary;
mod radius;
mod sector;

pub use boundary::{boundary_polygon, BoundaryScan};
pub use radius::{
    numerical_radius, numerical_radius_profiled, support_function, CertifiedRadius, RadiusProfile,
};
pub use sector::{
    arg_range, cone_fit, default_margin, is_accretive, is_accretive_dissipative, sectorial_index,
    sectorial_index_sweep, Orientation, RayCone, SectorCone,
};

#[derive(Debug, Error)]
pub enum FovError {
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("too few scan angles: {0}")]
    TooFewAngles(usize),
    #[error("matrix is not accretive: min Re eigenvalue {delta:.3e}")]
    NotAccretive { delta: f64 },
    #[error(
        "numerical range straddles the real axis: arg range [{alpha_min:.6}, {alpha_max:.6}] fits neither cone orientation"
    )]
    NotConeConfined { alpha_min: f64, alpha_max: f64 },
    #[error("sector half-angle {0} outside [0, pi/2)")]
    InvalidSectorAngle(f64),
    #[error("cone angles ({0}, {1}) violate 0 <= theta1 <= theta2 <= pi/2")]
    InvalidConeAngles(f64, f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Scale used by relative tolerances throughout this module.
pub(crate) fn fro_scale(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Rayleigh quotient `<Ax, x>` for a unit vector `x`.
pub(crate) fn rayleigh(a: &ComplexMatrix, x: &[Complex64]) -> Complex64 {
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += a.get(i, j) * x[j];
        }
        acc += x[i].conj() * row;
    }
    acc
}

pub(crate) fn top_eigenvector(h: &ComplexMatrix) -> Result<(f64, Vec<Complex64>), LinalgError> {
    let eig = linalg::hermitian_eig(h)?;
    let n = h.dim();
    let last = n - 1;
    let x: Vec<Complex64> = (0..n).map(|i| eig.vectors.get(i, last)).collect();
    Ok((eig.values[last], x))
}
