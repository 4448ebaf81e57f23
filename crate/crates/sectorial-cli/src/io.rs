//! Flat-file formats: matrix JSON documents, ensemble configs, and the
//! boundary CSV export.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sectorial::ensemble::EnsembleSpec;
use sectorial::fov::BoundaryScan;
use sectorial::ComplexMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Malformed { path: String, detail: String },
}

/// On-disk matrix document: `{"n": k, "entries": [[[re, im], ...], ...]}`
/// with rows of length `n` and each entry an `[re, im]` pair.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

fn malformed(path: &Path, detail: impl Into<String>) -> IoError {
    IoError::Malformed { path: path.display().to_string(), detail: detail.into() }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, IoError> {
    let text = fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    let doc: MatrixFile =
        serde_json::from_str(&text).map_err(|e| malformed(path, e.to_string()))?;
    if doc.n == 0 {
        return Err(malformed(path, "dimension must be at least 1"));
    }
    if doc.entries.len() != doc.n {
        return Err(malformed(
            path,
            format!("expected {} rows, found {}", doc.n, doc.entries.len()),
        ));
    }
    for (i, row) in doc.entries.iter().enumerate() {
        if row.len() != doc.n {
            return Err(malformed(
                path,
                format!("row {} has {} entries, expected {}", i, row.len(), doc.n),
            ));
        }
    }
    let rows = doc
        .entries
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(rows).map_err(|e| malformed(path, e.to_string()))
}

pub fn write_matrix(path: &Path, a: &ComplexMatrix) -> Result<(), IoError> {
    let n = a.dim();
    let entries = (0..n)
        .map(|i| (0..n).map(|j| [a.get(i, j).re, a.get(i, j).im]).collect())
        .collect();
    let doc = MatrixFile { n, entries };
    let text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    fs::write(path, text)
        .map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

pub fn read_ensemble(path: &Path) -> Result<EnsembleSpec, IoError> {
    let text = fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    let spec: EnsembleSpec =
        serde_json::from_str(&text).map_err(|e| malformed(path, e.to_string()))?;
    spec.validate().map_err(|e| malformed(path, e.to_string()))?;
    Ok(spec)
}

/// Boundary export, one row per scan angle. LF endings, fixed float format,
/// so identical scans serialize to identical bytes.
pub fn write_boundary_csv(path: &Path, scan: &BoundaryScan) -> Result<(), IoError> {
    let mut out = Vec::with_capacity(64 * scan.angles.len() + 16);
    out.extend_from_slice(b"theta,p,re,im\n");
    for k in 0..scan.angles.len() {
        let z = scan.boundary_points[k];
        writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e}",
            scan.angles[k], scan.support_values[k], z.re, z.im
        )
        .expect("writing to a Vec cannot fail");
    }
    fs::write(path, out)
        .map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("sectorial-io-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn matrix_round_trip_preserves_entries() {
        let a = ComplexMatrix::from_rows(vec![
            vec![Complex64::new(3.0, 2.0), Complex64::new(0.5, -0.25)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
        ])
        .unwrap();
        let path = tmp("round-trip.json");
        write_matrix(&path, &a).unwrap();
        let back = read_matrix(&path).unwrap();
        assert_eq!(a.entries(), back.entries());
    }

    #[test]
    fn non_square_documents_are_rejected() {
        let path = tmp("ragged.json");
        fs::write(&path, r#"{"n":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#).unwrap();
        let err = read_matrix(&path).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");

        let path = tmp("short.json");
        fs::write(&path, r#"{"n":3,"entries":[[[1,0],[0,0],[0,0]]]}"#).unwrap();
        let err = read_matrix(&path).unwrap_err();
        assert!(err.to_string().contains("expected 3 rows"), "{err}");
    }

    #[test]
    fn boundary_csv_has_header_and_lf_rows() {
        let a = ComplexMatrix::identity(2);
        let scan = sectorial::fov::boundary_polygon(&a, 8).unwrap();
        let path = tmp("boundary.csv");
        write_boundary_csv(&path, &scan).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("theta,p,re,im\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 9);
        for line in text.lines().skip(1) {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            let [theta, p, re, im] = cells[..] else { panic!("{line}") };
            assert!((p - theta.cos()).abs() <= 1e-12);
            assert!((re - 1.0).abs() <= 1e-12 && im.abs() <= 1e-12);
        }
    }
}
