//! Built-in regression check: recompute the reference example
//! A = diag(3+2i, 1) from first principles and compare against its known
//! closed-form values. Everything here goes through the public library
//! APIs, so a drift anywhere in the radius scan, the index solver, or the
//! catalog shows up as a table mismatch.

use num_complex::Complex64;

use sectorial::catalog::{evaluate, EvalOptions, InequalityInput};
use sectorial::fov::{numerical_radius, sectorial_index};
use sectorial::ComplexMatrix;

use crate::run::RunError;

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub label: &'static str,
    pub computed: f64,
    pub expected: f64,
}

impl GoldenRow {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.expected).abs()
    }
}

fn reference_matrix() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex64::new(3.0, 2.0), Complex64::new(1.0, 0.0)])
}

/// The five checked quantities. Expected values are exact closed forms:
/// w^2 = 13, the damped lower bound meets it, the quarter bound gives
/// 13/2, sin(gamma) = 2/sqrt(13), and the sharpness threshold
/// sqrt(2)*sin(gamma) = 2*sqrt(2)/sqrt(13).
pub fn rows() -> Result<Vec<GoldenRow>, RunError> {
    let a = reference_matrix();
    let tol = 1e-12 * a.frobenius_norm();
    let radius = numerical_radius(&a, tol).map_err(CatalogFrom::lift)?;
    let opts = EvalOptions::default();
    let damped = evaluate("thm-2.2", &InequalityInput::single(a.clone()), &opts)?;
    let quarter = evaluate("base-quarter", &InequalityInput::single(a.clone()), &opts)?;
    let gamma = sectorial_index(&a).map_err(CatalogFrom::lift)?.gamma();
    let sqrt13 = 13f64.sqrt();
    Ok(vec![
        GoldenRow { label: "w^2(A)", computed: radius.value * radius.value, expected: 13.0 },
        GoldenRow { label: "thm-2.2 rhs", computed: damped.rhs, expected: 13.0 },
        GoldenRow { label: "base-quarter rhs", computed: quarter.rhs, expected: 6.5 },
        GoldenRow { label: "sin(gamma)", computed: gamma.sin(), expected: 2.0 / sqrt13 },
        GoldenRow {
            label: "sqrt(2)*sin(gamma)",
            computed: 2f64.sqrt() * gamma.sin(),
            expected: 2.0 * 2f64.sqrt() / sqrt13,
        },
    ])
}

/// Fixed-format table; identical runs produce identical bytes.
pub fn render(rows: &[GoldenRow]) -> String {
    let mut out = String::from(
        "quantity               computed                expected                |diff|\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{:<22} {:<23.15e} {:<23.15e} {:.3e}\n",
            row.label,
            row.computed,
            row.expected,
            row.deviation()
        ));
    }
    let worst = rows.iter().map(GoldenRow::deviation).fold(0.0f64, f64::max);
    if worst <= TOLERANCE {
        out.push_str(&format!("all quantities within {TOLERANCE:.1e}\n"));
    } else {
        out.push_str(&format!("REGRESSION: worst deviation {worst:.3e} exceeds {TOLERANCE:.1e}\n"));
    }
    out
}

pub fn max_deviation(rows: &[GoldenRow]) -> f64 {
    rows.iter().map(GoldenRow::deviation).fold(0.0f64, f64::max)
}

/// Adapter so fov errors surface through the shared error type.
struct CatalogFrom;
impl CatalogFrom {
    fn lift(e: sectorial::fov::FovError) -> RunError {
        RunError::Catalog(sectorial::catalog::CatalogError::Fov(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_table_matches_closed_forms() {
        let rows = rows().unwrap();
        assert_eq!(rows.len(), 5);
        for row in &rows {
            assert!(
                row.deviation() <= TOLERANCE,
                "{}: computed {:.15e}, expected {:.15e}",
                row.label,
                row.computed,
                row.expected
            );
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render(&rows().unwrap());
        let b = render(&rows().unwrap());
        assert_eq!(a, b);
        assert!(a.ends_with("within 1.0e-9\n"), "{a}");
        assert!(!a.contains('\r'));
    }
}
