//! Registry and evaluators for the numerical-radius inequality catalog.
//!
//! Each row names one inequality: a target quantity, a bound on it, and the
//! hypotheses under which the bound applies. Evaluators compute both sides
//! with certified error bounds and report a signed slack with
//! `holds = slack >= -certified_error`. A sound implementation therefore
//! reports a violation only when the inequality fails beyond numerical
//! doubt; for the registered bounds (all proved) a violation indicates an
//! implementation bug.
//!
//! Bound ids are a stable public contract shared with the CLI and report
//! files.

mod certified;
mod commutator;
mod family;
mod single;

pub(crate) use certified::Certified;

use serde::Serialize;
use thiserror::Error;

use crate::fov::{
    self, FovError, Orientation, RadiusProfile, RayCone, SectorCone,
};
use crate::linalg::{self, cartesian_parts, ComplexMatrix, LinalgError};
use crate::matfun::{self, MatFunError};

/// csc-based bounds are refused below this sector index.
pub const GAMMA_NONZERO_CUTOFF: f64 = 1e-6;
/// Relative error folded per operator-norm evaluation.
const NORM_ERR_REL: f64 = 1e-11;
/// Absolute angle error assumed for the weighted-norm index route.
const GAMMA_ERR: f64 = 1e-9;
/// Absolute angle error assumed for cone fits.
const CONE_ERR: f64 = 1e-9;
/// Angle error assumed for caller-supplied gamma or cone overrides.
const OVERRIDE_ERR: f64 = 1e-12;
/// Frobenius-relative error of one Denman-Beavers square root.
const SQRT_ERR_REL: f64 = 1e-10;
/// Frobenius-relative error of a dyadic power built from a root chain.
const DYADIC_ERR_REL: f64 = 1e-9;
/// Safety factor applied to the contour quadrature's convergence estimate.
const QUAD_ERR_FOLD: f64 = 4.0;
/// Double-commuting residual acceptance, relative to the operand norms.
const COMMUTING_TOL_REL: f64 = 1e-8;
/// Exponents within this of `k/4096` take the square-root-chain route.
const DYADIC_SNAP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The bound sits below the target: holds means `target >= bound`.
    Lower,
    /// The bound sits above the target: holds means `target <= bound`.
    Upper,
}

/// Matrix inputs a row consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arity {
    /// One matrix `A`.
    Single,
    /// Matrices `A` and `B`.
    Pair,
    /// `A`, `B` plus weight matrices `X`, `Y`.
    Weighted,
    /// A family `A_1..A_k`.
    Family,
    /// Two families `A_1..A_k`, `B_1..B_k` of equal length.
    FamilyPair,
}

/// Which evaluator owns a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Single,
    Commutator,
    Family,
}

/// Hypotheses checked before a row is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    /// Accretive with a finite sector index (gamma may be 0).
    Sectorial,
    /// Sectorial with index at least `GAMMA_NONZERO_CUTOFF`.
    SectorialNonzeroGamma,
    /// Both Cartesian parts positive definite.
    AccretiveDissipative,
    /// Accretive (keeps the spectrum off `(-inf, 0]`).
    Accretive,
    /// Every pair of distinct members commutes and adjoint-commutes.
    DoubleCommuting,
    /// The numerical range fits a ray cone on one side of the real axis.
    ConeConfined,
}

/// Sign choice for the `+-` rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

/// Registry row: identity and metadata of one inequality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundSpec {
    pub id: &'static str,
    pub side: Side,
    pub target: &'static str,
    pub arity: Arity,
    pub group: Group,
    pub applicability: &'static [Requirement],
}

use Arity::{Family, FamilyPair, Pair, Single, Weighted};
use Group as G;
use Requirement::{
    Accretive, AccretiveDissipative, ConeConfined, DoubleCommuting, Sectorial,
    SectorialNonzeroGamma,
};
use Side::{Lower, Upper};

const REGISTRY: &[BoundSpec] = &[
    // Norm brackets and single-matrix lower bounds.
    BoundSpec { id: "eq-1.1-lower", side: Lower, target: "w(A)", arity: Single, group: G::Single, applicability: &[] },
    BoundSpec { id: "eq-1.1-upper", side: Upper, target: "w(A)", arity: Single, group: G::Single, applicability: &[] },
    BoundSpec { id: "eq-1.2-cos", side: Lower, target: "w(A)", arity: Single, group: G::Single, applicability: &[Sectorial] },
    BoundSpec { id: "lem-2.1-im", side: Upper, target: "||Im(A)||", arity: Single, group: G::Single, applicability: &[Sectorial] },
    BoundSpec { id: "thm-2.2", side: Lower, target: "w^2(A)", arity: Single, group: G::Single, applicability: &[SectorialNonzeroGamma] },
    BoundSpec { id: "base-quarter", side: Lower, target: "w^2(A)", arity: Single, group: G::Single, applicability: &[] },
    BoundSpec { id: "base-refined", side: Lower, target: "w^2(A)", arity: Single, group: G::Single, applicability: &[] },
    // Norm-vs-radius upper bounds and their iterated-root versions.
    BoundSpec { id: "lem-2.9", side: Upper, target: "||A||", arity: Single, group: G::Single, applicability: &[Sectorial] },
    BoundSpec { id: "lem-2.9-ad", side: Upper, target: "||A||", arity: Single, group: G::Single, applicability: &[Sectorial, AccretiveDissipative] },
    BoundSpec { id: "cor-2.11", side: Upper, target: "w^(1/2)(A)", arity: Single, group: G::Single, applicability: &[Sectorial] },
    BoundSpec { id: "cor-2.11-ad", side: Upper, target: "w^(1/2)(A)", arity: Single, group: G::Single, applicability: &[Sectorial, AccretiveDissipative] },
    BoundSpec { id: "thm-2.12", side: Upper, target: "w^(1/2^n)(A)", arity: Single, group: G::Single, applicability: &[Sectorial] },
    BoundSpec { id: "thm-2.12-ad", side: Upper, target: "w^(1/2^n)(A)", arity: Single, group: G::Single, applicability: &[Sectorial, AccretiveDissipative] },
    // Cone-confined refinements and the baselines they sharpen.
    BoundSpec { id: "thm-3.1", side: Upper, target: "||A||", arity: Single, group: G::Single, applicability: &[ConeConfined] },
    BoundSpec { id: "eq-3.2-rot", side: Upper, target: "||A||", arity: Single, group: G::Single, applicability: &[ConeConfined] },
    BoundSpec { id: "lem-3.4", side: Lower, target: "w(A)", arity: Single, group: G::Single, applicability: &[SectorialNonzeroGamma] },
    BoundSpec { id: "thm-3.5", side: Lower, target: "w(A)", arity: Single, group: G::Single, applicability: &[ConeConfined] },
    BoundSpec { id: "base-1p", side: Lower, target: "w(A)", arity: Single, group: G::Single, applicability: &[] },
    BoundSpec { id: "thm-3.7", side: Lower, target: "w^2(A)", arity: Single, group: G::Single, applicability: &[ConeConfined] },
    BoundSpec { id: "base-2p", side: Lower, target: "w^2(A)", arity: Single, group: G::Single, applicability: &[] },
    // Commutator-type bounds.
    BoundSpec { id: "thm-2.4", side: Upper, target: "w(AXB+-BYA)", arity: Weighted, group: G::Commutator, applicability: &[SectorialNonzeroGamma] },
    BoundSpec { id: "cor-2.5", side: Upper, target: "w(AB+-BA)", arity: Pair, group: G::Commutator, applicability: &[SectorialNonzeroGamma] },
    BoundSpec { id: "cor-2.7", side: Upper, target: "w(AB+-BA)", arity: Pair, group: G::Commutator, applicability: &[SectorialNonzeroGamma] },
    BoundSpec { id: "base-fong", side: Upper, target: "w(AB+-BA)", arity: Pair, group: G::Commutator, applicability: &[] },
    BoundSpec { id: "base-kitt-comm", side: Upper, target: "w(AB+-BA)", arity: Pair, group: G::Commutator, applicability: &[] },
    // Sums, fractional-power splittings, and product bounds.
    BoundSpec { id: "prop-2.8", side: Upper, target: "||sum Ai||^(1/2)", arity: Family, group: G::Family, applicability: &[Accretive] },
    BoundSpec { id: "cor-2.10", side: Upper, target: "w^(1/2)(sum Ai)", arity: Family, group: G::Family, applicability: &[Sectorial] },
    BoundSpec { id: "cor-2.10-ad", side: Upper, target: "w^(1/2)(sum Ai)", arity: Family, group: G::Family, applicability: &[Sectorial, AccretiveDissipative] },
    BoundSpec { id: "prop-2.13-i", side: Upper, target: "||A+B||", arity: Pair, group: G::Family, applicability: &[Accretive] },
    BoundSpec { id: "prop-2.13-ii", side: Upper, target: "||A+B||", arity: Pair, group: G::Family, applicability: &[Accretive] },
    BoundSpec { id: "cor-2.14-i", side: Upper, target: "w(A+B)", arity: Pair, group: G::Family, applicability: &[Sectorial] },
    BoundSpec { id: "cor-2.14-ii", side: Upper, target: "w(A+B)", arity: Pair, group: G::Family, applicability: &[Sectorial] },
    BoundSpec { id: "lem-2.15", side: Upper, target: "w(sum Ai Bi)", arity: FamilyPair, group: G::Family, applicability: &[DoubleCommuting] },
    BoundSpec { id: "thm-2.16", side: Upper, target: "w(sum Ai Bi)", arity: FamilyPair, group: G::Family, applicability: &[Sectorial, DoubleCommuting] },
    BoundSpec { id: "cor-2.17", side: Upper, target: "w(AB)", arity: Pair, group: G::Family, applicability: &[Sectorial, DoubleCommuting] },
    BoundSpec { id: "lem-3.2", side: Upper, target: "w(AB)", arity: Pair, group: G::Family, applicability: &[Sectorial] },
    BoundSpec { id: "lem-3.2-ad", side: Upper, target: "w(AB)", arity: Pair, group: G::Family, applicability: &[Sectorial, AccretiveDissipative] },
    BoundSpec { id: "thm-3.3", side: Upper, target: "w(AB)", arity: Pair, group: G::Family, applicability: &[ConeConfined] },
    BoundSpec { id: "eq-3.4-rot", side: Upper, target: "w(AB)", arity: Pair, group: G::Family, applicability: &[ConeConfined] },
];

/// Every registered bound, in catalog order.
pub fn list_catalog() -> &'static [BoundSpec] {
    REGISTRY
}

/// Metadata for one id.
pub fn spec_for(id: &str) -> Option<&'static BoundSpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

/// Matrices and parameters one evaluation consumes. Role occupancy must
/// match the row's arity; unset options fall back per row (sign defaults to
/// `+`, halvings to 2, gamma and cone to freshly computed values).
#[derive(Clone, Debug, Default)]
pub struct InequalityInput {
    pub a_family: Vec<ComplexMatrix>,
    pub b_family: Vec<ComplexMatrix>,
    pub x: Option<ComplexMatrix>,
    pub y: Option<ComplexMatrix>,
    pub sign: Sign,
    pub alpha: Option<f64>,
    pub n_halvings: Option<usize>,
    /// Common sector half-angle; when absent the max index over the
    /// participating matrices is computed.
    pub gamma: Option<SectorCone>,
    /// Common ray cone; when absent a fit is computed and merged.
    pub cone: Option<RayCone>,
}

impl InequalityInput {
    pub fn single(a: ComplexMatrix) -> Self {
        InequalityInput { a_family: vec![a], ..Default::default() }
    }

    pub fn pair(a: ComplexMatrix, b: ComplexMatrix) -> Self {
        InequalityInput { a_family: vec![a], b_family: vec![b], ..Default::default() }
    }

    pub fn weighted(a: ComplexMatrix, b: ComplexMatrix, x: ComplexMatrix, y: ComplexMatrix) -> Self {
        InequalityInput {
            a_family: vec![a],
            b_family: vec![b],
            x: Some(x),
            y: Some(y),
            ..Default::default()
        }
    }

    pub fn family(mats: Vec<ComplexMatrix>) -> Self {
        InequalityInput { a_family: mats, ..Default::default() }
    }

    pub fn family_pair(a: Vec<ComplexMatrix>, b: Vec<ComplexMatrix>) -> Self {
        InequalityInput { a_family: a, b_family: b, ..Default::default() }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_halvings(mut self, n: usize) -> Self {
        self.n_halvings = Some(n);
        self
    }

    pub fn with_gamma(mut self, gamma: SectorCone) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_cone(mut self, cone: RayCone) -> Self {
        self.cone = Some(cone);
        self
    }
}

/// Work and tolerance knobs for evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Radius tolerance relative to the Frobenius norm of the operand.
    pub radius_tol_rel: f64,
    pub radius_profile: RadiusProfile,
    /// Node cap handed to contour quadrature for non-dyadic exponents.
    pub max_quad_nodes: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            radius_tol_rel: 1e-8,
            radius_profile: RadiusProfile::default(),
            max_quad_nodes: matfun::QUAD_DEFAULT_MAX_NODES,
        }
    }
}

impl EvalOptions {
    /// Cheap settings for bulk stress sweeps; error bounds stay honest,
    /// just looser.
    pub fn sweep() -> Self {
        EvalOptions {
            radius_tol_rel: 1e-5,
            radius_profile: RadiusProfile::coarse(),
            max_quad_nodes: 1 << 11,
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown bound id {0:?}")]
    UnknownBound(String),
    #[error("{bound}: {detail}")]
    BadInput { bound: &'static str, detail: String },
    #[error("{bound} not applicable: {predicate}")]
    NotApplicable { bound: &'static str, predicate: String },
    #[error(transparent)]
    Fov(#[from] FovError),
    #[error(transparent)]
    MatFun(#[from] MatFunError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One evaluated inequality. `lhs` is always the target quantity, `rhs`
/// the bound; `slack >= 0` means the inequality holds as written and
/// `holds` forgives at most `certified_error` of numerical slop.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct BoundEvaluation {
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub certified_error: f64,
    pub holds: bool,
}

impl BoundEvaluation {
    fn from_parts(spec: &BoundSpec, target: Certified, bound: Certified) -> Self {
        let slack = match spec.side {
            Side::Lower => target.value - bound.value,
            Side::Upper => bound.value - target.value,
        };
        let certified_error = target.err + bound.err;
        BoundEvaluation {
            bound_id: spec.id.to_string(),
            lhs: target.value,
            rhs: bound.value,
            slack,
            certified_error,
            holds: slack >= -certified_error,
        }
    }

    /// Slack normalized by the magnitude of the larger side.
    pub fn slack_rel(&self) -> f64 {
        self.slack / self.lhs.abs().max(self.rhs.abs()).max(f64::MIN_POSITIVE)
    }
}

/// Evaluates any registered bound.
pub fn evaluate(
    bound_id: &str,
    input: &InequalityInput,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, CatalogError> {
    let spec = spec_for(bound_id).ok_or_else(|| CatalogError::UnknownBound(bound_id.into()))?;
    let ctx = Ctx { spec, input, opts };
    match spec.group {
        Group::Single => single::evaluate(&ctx),
        Group::Commutator => commutator::evaluate(&ctx),
        Group::Family => family::evaluate(&ctx),
    }
}

fn evaluate_in_group(
    bound_id: &str,
    input: &InequalityInput,
    opts: &EvalOptions,
    group: Group,
) -> Result<BoundEvaluation, CatalogError> {
    let spec = spec_for(bound_id).ok_or_else(|| CatalogError::UnknownBound(bound_id.into()))?;
    if spec.group != group {
        return Err(CatalogError::BadInput {
            bound: spec.id,
            detail: format!("belongs to the {:?} group", spec.group),
        });
    }
    evaluate(bound_id, input, opts)
}

/// Single-matrix bounds only.
pub fn evaluate_single(
    bound_id: &str,
    input: &InequalityInput,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, CatalogError> {
    evaluate_in_group(bound_id, input, opts, Group::Single)
}

/// Commutator-type bounds only.
pub fn evaluate_commutator(
    bound_id: &str,
    input: &InequalityInput,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, CatalogError> {
    evaluate_in_group(bound_id, input, opts, Group::Commutator)
}

/// Family, sum and product bounds only.
pub fn evaluate_family(
    bound_id: &str,
    input: &InequalityInput,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, CatalogError> {
    evaluate_in_group(bound_id, input, opts, Group::Family)
}

/// Shared machinery for the evaluator submodules.
pub(crate) struct Ctx<'a> {
    pub spec: &'static BoundSpec,
    pub input: &'a InequalityInput,
    pub opts: &'a EvalOptions,
}

impl Ctx<'_> {
    pub fn bad(&self, detail: impl Into<String>) -> CatalogError {
        CatalogError::BadInput { bound: self.spec.id, detail: detail.into() }
    }

    pub fn na(&self, predicate: impl Into<String>) -> CatalogError {
        CatalogError::NotApplicable { bound: self.spec.id, predicate: predicate.into() }
    }

    pub fn only_a(&self) -> Result<&ComplexMatrix, CatalogError> {
        match (self.input.a_family.as_slice(), self.input.b_family.is_empty()) {
            ([a], true) => Ok(a),
            _ => Err(self.bad("expects exactly one matrix A")),
        }
    }

    pub fn pair(&self) -> Result<(&ComplexMatrix, &ComplexMatrix), CatalogError> {
        match (self.input.a_family.as_slice(), self.input.b_family.as_slice()) {
            ([a], [b]) if a.dim() == b.dim() => Ok((a, b)),
            ([a], [b]) => Err(self.bad(format!("A is {0}x{0} but B is {1}x{1}", a.dim(), b.dim()))),
            _ => Err(self.bad("expects exactly one A and one B")),
        }
    }

    pub fn weights(&self) -> Result<(&ComplexMatrix, &ComplexMatrix), CatalogError> {
        match (&self.input.x, &self.input.y) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(self.bad("expects weight matrices X and Y")),
        }
    }

    pub fn families(&self) -> Result<(&[ComplexMatrix], &[ComplexMatrix]), CatalogError> {
        let a = self.input.a_family.as_slice();
        let b = self.input.b_family.as_slice();
        if a.is_empty() || a.len() != b.len() {
            return Err(self.bad("expects equal-length nonempty families A_i, B_i"));
        }
        if a.iter().chain(b).any(|m| m.dim() != a[0].dim()) {
            return Err(self.bad("family members must share one dimension"));
        }
        Ok((a, b))
    }

    pub fn a_members(&self) -> Result<&[ComplexMatrix], CatalogError> {
        let a = self.input.a_family.as_slice();
        if a.is_empty() || !self.input.b_family.is_empty() {
            return Err(self.bad("expects a nonempty family A_i and nothing else"));
        }
        if a.iter().any(|m| m.dim() != a[0].dim()) {
            return Err(self.bad("family members must share one dimension"));
        }
        Ok(a)
    }

    pub fn alpha(&self) -> Result<f64, CatalogError> {
        match self.input.alpha {
            Some(t) if t > 0.0 && t < 1.0 => Ok(t),
            Some(t) => Err(self.bad(format!("alpha {t} outside (0, 1)"))),
            None => Err(self.bad("alpha is required")),
        }
    }

    pub fn halvings(&self) -> Result<usize, CatalogError> {
        let n = self.input.n_halvings.unwrap_or(2);
        if n == 0 || n > matfun::MAX_HALVINGS {
            return Err(self.bad(format!("n_halvings {n} outside 1..={}", matfun::MAX_HALVINGS)));
        }
        Ok(n)
    }

    /// Certified numerical radius; `matrix_err` is a Frobenius-level bound
    /// on how far the handed-in matrix sits from the intended one. The
    /// radius is 1-Lipschitz in the operator norm, so that error folds in
    /// additively.
    pub fn radius_approx(
        &self,
        m: &ComplexMatrix,
        matrix_err: f64,
    ) -> Result<Certified, CatalogError> {
        let tol = (self.opts.radius_tol_rel * m.frobenius_norm()).max(1e-300);
        let r = fov::numerical_radius_profiled(m, tol, self.opts.radius_profile)?;
        Ok(Certified::new(r.value, r.error_bound + matrix_err))
    }

    pub fn radius(&self, m: &ComplexMatrix) -> Result<Certified, CatalogError> {
        self.radius_approx(m, 0.0)
    }

    pub fn opnorm_approx(&self, m: &ComplexMatrix, matrix_err: f64) -> Certified {
        Certified::new(
            linalg::operator_norm(m),
            NORM_ERR_REL * m.frobenius_norm() + matrix_err,
        )
    }

    pub fn opnorm(&self, m: &ComplexMatrix) -> Certified {
        self.opnorm_approx(m, 0.0)
    }

    /// Operator norm of a Hermitian matrix straight from its spectrum.
    pub fn opnorm_hermitian(&self, h: &ComplexMatrix) -> Result<Certified, CatalogError> {
        let vals = linalg::hermitian_eigenvalues(h)?;
        let top = vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        Ok(Certified::new(top, NORM_ERR_REL * h.frobenius_norm()))
    }

    /// Sector index of one matrix as a certified angle. Non-accretive
    /// inputs surface as inapplicability, not as evaluation failures.
    fn gamma_one(&self, m: &ComplexMatrix) -> Result<Certified, CatalogError> {
        let cone = fov::sectorial_index(m).map_err(|e| match e {
            FovError::NotAccretive { delta } => self.na(format!(
                "sector index needs an accretive matrix (min Re eigenvalue {delta:.3e})"
            )),
            other => CatalogError::Fov(other),
        })?;
        let gamma = cone.gamma();
        if gamma > 0.0 {
            return Ok(Certified::new(gamma, GAMMA_ERR));
        }
        // Hermitian shortcut: the index reported exactly 0 because the
        // imaginary part is negligible. Rayleigh quotients still bound the
        // true index by arctan(||Im||_F / delta).
        let (re, im) = cartesian_parts(m);
        let im_fro = im.frobenius_norm();
        if im_fro == 0.0 {
            return Ok(Certified::exact(0.0));
        }
        let delta = linalg::lambda_min(&re)?;
        Ok(Certified::new(0.0, (im_fro / delta.max(f64::MIN_POSITIVE)).atan()))
    }

    /// Common sector half-angle for the given members: the caller override
    /// when present, otherwise the max of the computed indices.
    pub fn gamma_for(&self, members: &[&ComplexMatrix]) -> Result<Certified, CatalogError> {
        if let Some(g) = self.input.gamma {
            return Ok(Certified::new(g.gamma(), OVERRIDE_ERR));
        }
        let mut acc = Certified::exact(0.0);
        for m in members {
            acc = acc.max(self.gamma_one(m)?);
        }
        Ok(acc)
    }

    /// Enforces the csc cutoff for rows that divide by sin(gamma).
    pub fn gamma_nonzero(&self, gamma: Certified) -> Result<Certified, CatalogError> {
        if gamma.value < GAMMA_NONZERO_CUTOFF {
            return Err(self.na(format!(
                "sector index {:.3e} below the csc cutoff {GAMMA_NONZERO_CUTOFF:.0e}",
                gamma.value
            )));
        }
        Ok(gamma)
    }

    /// Common ray cone: the override when present, otherwise per-member
    /// fits merged to (min theta1, max theta2). Mixed orientations do not
    /// share a cone and are inapplicable.
    pub fn cone_for(
        &self,
        members: &[&ComplexMatrix],
    ) -> Result<(Certified, Certified, Orientation), CatalogError> {
        if let Some(c) = self.input.cone {
            return Ok((
                Certified::new(c.theta1, OVERRIDE_ERR),
                Certified::new(c.theta2, OVERRIDE_ERR),
                c.orientation,
            ));
        }
        let mut fit: Option<(Certified, Certified, Orientation)> = None;
        for m in members {
            let cone = fov::cone_fit(m).map_err(|e| match e {
                FovError::NotConeConfined { alpha_min, alpha_max } => self.na(format!(
                    "numerical range straddles the real axis (arg range [{alpha_min:.6}, {alpha_max:.6}])"
                )),
                FovError::NotAccretive { delta } => self.na(format!(
                    "cone fit needs an accretive matrix (min Re eigenvalue {delta:.3e})"
                )),
                other => CatalogError::Fov(other),
            })?;
            let t1 = Certified::new(cone.theta1, CONE_ERR);
            let t2 = Certified::new(cone.theta2, CONE_ERR);
            fit = Some(match fit {
                None => (t1, t2, cone.orientation),
                Some((u1, u2, o)) if o == cone.orientation => (u1.min(t1), u2.max(t2), o),
                Some(_) => {
                    return Err(self.na("cone orientations differ across the members"));
                }
            });
        }
        fit.ok_or_else(|| self.bad("cone fit needs at least one matrix"))
    }

    /// `gamma_1 = max(theta2, pi/2 - theta1)` of a fitted cone.
    pub fn gamma1(&self, theta1: Certified, theta2: Certified) -> Certified {
        theta2.max(Certified::exact(std::f64::consts::FRAC_PI_2).sub(theta1))
    }

    /// Principal square root plus a Frobenius-level error estimate.
    pub fn sqrt_m(&self, m: &ComplexMatrix) -> Result<(ComplexMatrix, f64), CatalogError> {
        let root = matfun::sqrt_db(m).map_err(|e| self.power_err(e))?;
        let err = SQRT_ERR_REL * root.frobenius_norm();
        Ok((root, err))
    }

    /// `A^(1/2^n)` via the root chain, with accumulated error estimate.
    pub fn chain_to(
        &self,
        m: &ComplexMatrix,
        halvings: usize,
    ) -> Result<(ComplexMatrix, f64), CatalogError> {
        let chain = matfun::power_chain(m, halvings).map_err(|e| self.power_err(e))?;
        let last = chain.into_iter().last().expect("halvings >= 1");
        let err = halvings as f64 * SQRT_ERR_REL * last.frobenius_norm();
        Ok((last, err))
    }

    /// `A^t` for `t` in `(0, 1)`: the square-root-chain route when `t` is
    /// a dyadic `k/4096`, the contour quadrature otherwise.
    pub fn alpha_power(
        &self,
        m: &ComplexMatrix,
        t: f64,
    ) -> Result<(ComplexMatrix, f64), CatalogError> {
        let scaled = t * 4096.0;
        let k = scaled.round();
        if (scaled - k).abs() <= DYADIC_SNAP * 4096.0 && (1.0..=4095.0).contains(&k) {
            let p = matfun::dyadic_power(m, k as u32, 12).map_err(|e| self.power_err(e))?;
            let err = DYADIC_ERR_REL * p.frobenius_norm();
            return Ok((p, err));
        }
        let res = matfun::fractional_power_with_cap(m, t, self.opts.max_quad_nodes)
            .map_err(|e| self.power_err(e))?;
        let fold = if res.converged { QUAD_ERR_FOLD } else { 1.0 };
        Ok((res.matrix, res.quadrature_error * fold))
    }

    fn power_err(&self, e: MatFunError) -> CatalogError {
        match e {
            MatFunError::NotAccretive { delta } => self.na(format!(
                "fractional powers need an accretive matrix (min Re eigenvalue {delta:.3e})"
            )),
            other => CatalogError::MatFun(other),
        }
    }

    pub fn require_accretive(&self, m: &ComplexMatrix, label: &str) -> Result<(), CatalogError> {
        let (ok, delta) = fov::is_accretive(m, fov::default_margin(m))?;
        if !ok {
            return Err(self.na(format!(
                "{label} is not accretive (min Re eigenvalue {delta:.3e})"
            )));
        }
        Ok(())
    }

    pub fn require_accretive_dissipative(
        &self,
        m: &ComplexMatrix,
        label: &str,
    ) -> Result<(), CatalogError> {
        if !fov::is_accretive_dissipative(m, fov::default_margin(m))? {
            return Err(self.na(format!("{label} is not accretive-dissipative")));
        }
        Ok(())
    }

    /// Checks that every pair of distinct members commutes and
    /// adjoint-commutes up to `COMMUTING_TOL_REL` times the norm product.
    pub fn require_double_commuting(
        &self,
        members: &[&ComplexMatrix],
    ) -> Result<(), CatalogError> {
        let norms: Vec<f64> = members.iter().map(|m| linalg::operator_norm(m)).collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let scale = (norms[i] * norms[j]).max(f64::MIN_POSITIVE);
                let p = members[i];
                let q = members[j];
                let comm = p.mul(q)?.sub(&q.mul(p)?)?.frobenius_norm();
                let q_adj = q.adjoint();
                let star = p.mul(&q_adj)?.sub(&q_adj.mul(p)?)?.frobenius_norm();
                if comm > COMMUTING_TOL_REL * scale || star > COMMUTING_TOL_REL * scale {
                    return Err(self.na(format!(
                        "members {i} and {j} fail double commuting \
                         (residuals {comm:.3e}, {star:.3e} vs scale {scale:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn run_requirements_single(&self, m: &ComplexMatrix) -> Result<(), CatalogError> {
        for req in self.spec.applicability {
            if *req == AccretiveDissipative {
                self.require_accretive_dissipative(m, "A")?;
            }
            if *req == Accretive {
                self.require_accretive(m, "A")?;
            }
        }
        Ok(())
    }
}

/// `1 + k sin^2(angle)` as a certified scalar.
pub(crate) fn one_plus_sin2(angle: Certified, k: f64) -> Certified {
    Certified::exact(1.0).add(angle.sin_angle().square().scale(k))
}

/// Sum of a family.
pub(crate) fn sum_family(mats: &[ComplexMatrix]) -> Result<ComplexMatrix, LinalgError> {
    let mut acc = ComplexMatrix::zeros(mats[0].dim());
    for m in mats {
        acc = acc.add(m)?;
    }
    Ok(acc)
}
