//! Seeded matrix ensembles with structural guarantees built in.
//!
//! Every sampler is a construction, not a rejection loop: sectorial samples
//! carry their index exactly, cone samples attain both boundary rays,
//! double-commuting families share one unitary. That exactness is what lets
//! the harness assert "hypotheses hold" without re-verifying each draw.
//!
//! Streams are counter-based: sample `index` under `seed` is produced by a
//! ChaCha12 generator keyed from `splitmix64(seed, index)`, so draws are
//! reproducible under any parallel schedule.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fov::{Orientation, RayCone, SectorCone};
use crate::linalg::{ComplexMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("family size must be at least 1")]
    InvalidFamilySize,
    #[error("modulus range [{0}, {1}] must satisfy 0 < min <= max")]
    InvalidModulusRange(f64, f64),
    #[error("gamma target does not fit the ensemble kind: {0}")]
    InvalidGammaTarget(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    Sectorial,
    AccretiveDissipative,
    DoubleCommuting,
    Cone,
    Generic,
}

/// Sector half-angle for accretive kinds, ray pair for cone samples.
/// Serialized untagged: a bare number is a sector, an object is a cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaTarget {
    Sector(f64),
    Cone { theta1: f64, theta2: f64 },
}

fn default_family_size() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    #[serde(default = "default_family_size")]
    pub family_size: usize,
    pub gamma_target: GammaTarget,
    pub modulus_range: [f64; 2],
    pub seed: u64,
}

/// One draw: `family_size` matrices plus the hypothesis they were built to
/// satisfy. `gamma` is the exact shared sectorial index for accretive kinds,
/// `cone` the exact shared ray pair for cone samples.
#[derive(Debug, Clone)]
pub struct Sample {
    pub matrices: Vec<ComplexMatrix>,
    pub gamma: Option<SectorCone>,
    pub cone: Option<RayCone>,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), EnsembleError> {
        if self.n == 0 {
            return Err(EnsembleError::InvalidDimension);
        }
        if self.family_size == 0 {
            return Err(EnsembleError::InvalidFamilySize);
        }
        let [lo, hi] = self.modulus_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(EnsembleError::InvalidModulusRange(lo, hi));
        }
        match (self.kind, self.gamma_target) {
            (EnsembleKind::Cone, GammaTarget::Cone { theta1, theta2 }) => {
                if !(theta1 > 0.0 && theta1 <= theta2 && theta2 < std::f64::consts::FRAC_PI_2) {
                    return Err(EnsembleError::InvalidGammaTarget(format!(
                        "cone rays ({theta1}, {theta2}) outside 0 < theta1 <= theta2 < pi/2"
                    )));
                }
            }
            (EnsembleKind::Cone, GammaTarget::Sector(_)) => {
                return Err(EnsembleError::InvalidGammaTarget(
                    "cone ensemble needs theta1/theta2 rays".into(),
                ));
            }
            (EnsembleKind::AccretiveDissipative, GammaTarget::Sector(g)) => {
                if !(g > 0.0 && g < std::f64::consts::FRAC_PI_2) {
                    return Err(EnsembleError::InvalidGammaTarget(format!(
                        "accretive-dissipative index {g} outside (0, pi/2)"
                    )));
                }
            }
            (EnsembleKind::Sectorial | EnsembleKind::DoubleCommuting, GammaTarget::Sector(g)) => {
                if !(g >= 0.0 && g < std::f64::consts::FRAC_PI_2) {
                    return Err(EnsembleError::InvalidGammaTarget(format!(
                        "sector index {g} outside [0, pi/2)"
                    )));
                }
            }
            (EnsembleKind::Generic, _) => {}
            (kind, GammaTarget::Cone { .. }) => {
                return Err(EnsembleError::InvalidGammaTarget(format!(
                    "{kind:?} ensemble takes a sector half-angle, not cone rays"
                )));
            }
        }
        Ok(())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-based stream for sample `index` under `seed`. For a fixed seed
/// the map index -> key is injective, so distinct samples never share a
/// stream.
pub fn stream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut state = seed ^ index.wrapping_mul(0xA24BAED4963EE407);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn complex_gaussian(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar unitary via double modified Gram-Schmidt on a complex Gaussian
/// matrix. MGS keeps the implied triangular factor's diagonal positive,
/// which is exactly the normalization that makes Q Haar-distributed.
fn haar_unitary(rng: &mut ChaCha12Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| complex_gaussian(rng)).collect())
        .collect();
    for _pass in 0..2 {
        for j in 0..n {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|k| cols[i][k].conj() * cols[j][k]).sum();
                for k in 0..n {
                    let correction = proj * cols[i][k];
                    cols[j][k] -= correction;
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for k in 0..n {
                cols[j][k] /= norm;
            }
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Deterministic Haar-distributed unitary for a bare seed.
pub fn random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::InvalidDimension);
    }
    Ok(haar_unitary(&mut stream(seed, 0), n))
}

fn uniform_in(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// U diag(d) U* for real d.
fn conjugated_diagonal(u: &ComplexMatrix, d: &[f64]) -> ComplexMatrix {
    let diag: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let m = ComplexMatrix::diagonal(&diag);
    u.mul(&m).expect("square factors").mul(&u.adjoint()).expect("square factors")
}

/// A = R (I + iS) R with R = P^(1/2). Re A = P stays positive definite and
/// the index of A is exactly arctan of the spectral radius of S, attained
/// at the pinned eigenvalue of S.
fn skewed_product(
    rng: &mut ChaCha12Rng,
    n: usize,
    s_eigs: &[f64],
    modulus_range: [f64; 2],
) -> ComplexMatrix {
    let u1 = haar_unitary(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| uniform_in(rng, modulus_range[0], modulus_range[1]).sqrt())
        .collect();
    let root = conjugated_diagonal(&u1, &d);
    let u2 = haar_unitary(rng, n);
    let s = conjugated_diagonal(&u2, s_eigs);
    let mut inner = s.scale(Complex64::new(0.0, 1.0));
    for i in 0..n {
        let z = inner.get(i, i) + 1.0;
        inner.set(i, i, z);
    }
    root.mul(&inner).expect("square factors").mul(&root).expect("square factors")
}

fn gen_sectorial_one(
    rng: &mut ChaCha12Rng,
    n: usize,
    gamma: f64,
    modulus_range: [f64; 2],
) -> ComplexMatrix {
    let t = gamma.tan();
    let mut s = vec![0.0; n];
    if t > 0.0 {
        s[0] = if rng.gen::<bool>() { t } else { -t };
        for item in s.iter_mut().skip(1) {
            *item = uniform_in(rng, -t, t);
        }
    }
    skewed_product(rng, n, &s, modulus_range)
}

fn gen_accretive_dissipative_one(
    rng: &mut ChaCha12Rng,
    n: usize,
    gamma: f64,
    modulus_range: [f64; 2],
) -> ComplexMatrix {
    let t = gamma.tan();
    let mut s = vec![t; n];
    // Floor at 0.1 t keeps Im A uniformly positive definite.
    for item in s.iter_mut().skip(1) {
        *item = uniform_in(rng, 0.1 * t, t);
    }
    skewed_product(rng, n, &s, modulus_range)
}

fn gen_cone_one(
    rng: &mut ChaCha12Rng,
    n: usize,
    theta1: f64,
    theta2: f64,
    modulus_range: [f64; 2],
) -> ComplexMatrix {
    let (lo, hi) = (-theta2.tan(), -theta1.tan());
    let mut s = vec![lo; n];
    if n > 1 {
        s[n - 1] = hi;
        for item in s.iter_mut().take(n - 1).skip(1) {
            *item = uniform_in(rng, lo, hi);
        }
    }
    skewed_product(rng, n, &s, modulus_range)
}

fn gen_double_commuting(
    rng: &mut ChaCha12Rng,
    n: usize,
    gamma: f64,
    family_size: usize,
    modulus_range: [f64; 2],
) -> Vec<ComplexMatrix> {
    let u = haar_unitary(rng, n);
    (0..family_size)
        .map(|member| {
            let diag: Vec<Complex64> = (0..n)
                .map(|entry| {
                    let r = uniform_in(rng, modulus_range[0], modulus_range[1]);
                    let arg = if member == 0 && entry == 0 {
                        gamma
                    } else {
                        uniform_in(rng, -gamma, gamma)
                    };
                    Complex64::from_polar(r, arg)
                })
                .collect();
            let d = ComplexMatrix::diagonal(&diag);
            u.mul(&d).expect("square factors").mul(&u.adjoint()).expect("square factors")
        })
        .collect()
}

fn gen_generic_one(rng: &mut ChaCha12Rng, n: usize, scale: f64) -> ComplexMatrix {
    let sigma = scale / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng) * sigma)
}

/// Draw sample `index` from the ensemble. Stateless in `index`, so sweeps
/// may be sharded freely without changing any draw.
pub fn draw(spec: &EnsembleSpec, index: u64) -> Result<Sample, EnsembleError> {
    spec.validate()?;
    let mut rng = stream(spec.seed, index);
    let n = spec.n;
    match (spec.kind, spec.gamma_target) {
        (EnsembleKind::Sectorial, GammaTarget::Sector(g)) => {
            let matrices = (0..spec.family_size)
                .map(|_| gen_sectorial_one(&mut rng, n, g, spec.modulus_range))
                .collect();
            Ok(Sample {
                matrices,
                gamma: Some(SectorCone::new(g).expect("validated")),
                cone: None,
            })
        }
        (EnsembleKind::AccretiveDissipative, GammaTarget::Sector(g)) => {
            let matrices = (0..spec.family_size)
                .map(|_| gen_accretive_dissipative_one(&mut rng, n, g, spec.modulus_range))
                .collect();
            Ok(Sample {
                matrices,
                gamma: Some(SectorCone::new(g).expect("validated")),
                cone: None,
            })
        }
        (EnsembleKind::DoubleCommuting, GammaTarget::Sector(g)) => {
            let matrices = gen_double_commuting(&mut rng, n, g, spec.family_size, spec.modulus_range);
            Ok(Sample {
                matrices,
                gamma: Some(SectorCone::new(g).expect("validated")),
                cone: None,
            })
        }
        (EnsembleKind::Cone, GammaTarget::Cone { theta1, theta2 }) => {
            let matrices = (0..spec.family_size)
                .map(|_| gen_cone_one(&mut rng, n, theta1, theta2, spec.modulus_range))
                .collect();
            Ok(Sample {
                matrices,
                gamma: None,
                cone: Some(RayCone::new(theta1, theta2, Orientation::Lower).expect("validated")),
            })
        }
        (EnsembleKind::Generic, _) => {
            let matrices = (0..spec.family_size)
                .map(|_| gen_generic_one(&mut rng, n, spec.modulus_range[1]))
                .collect();
            Ok(Sample { matrices, gamma: None, cone: None })
        }
        _ => unreachable!("validate rejects kind/target mismatches"),
    }
}
