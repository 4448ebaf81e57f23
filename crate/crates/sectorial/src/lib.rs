//! Dense complex linear algebra focused on numerical-range geometry.
//!
//! The crate is organised around five pieces:
//!
//! * [`linalg`]: the dense `ComplexMatrix` substrate, a cyclic Jacobi
//!   eigensolver for Hermitian matrices, and LU solves with partial pivoting.
//! * [`fov`]: field-of-values machinery: support functions, a certified
//!   numerical radius, boundary scans, accretivity tests, sector indices and
//!   cone fits.
//! * [`matfun`]: principal fractional powers `A^t` through a resolvent
//!   contour quadrature, plus a coupled square-root iteration used as an
//!   independent route to `A^{1/2}`.
//! * [`catalog`]: a registry of numerical-radius inequalities keyed by
//!   stable ids, evaluated with first-order certified error propagation.
//! * [`ensemble`]: seeded random generators whose outputs carry exact
//!   structural guarantees (sector index, cone confinement, double
//!   commutation), suitable for reproducible falsification sweeps.
//!
//! All angles are radians. Tolerances are relative to the Frobenius norm of
//! the input unless a doc comment says otherwise.

pub mod catalog;
pub mod ensemble;
pub mod fov;
pub mod linalg;
pub mod matfun;

pub use linalg::ComplexMatrix;
