//! Falsification sweeps: draw hypothesis-satisfying samples, evaluate one
//! bound per trial, and aggregate certified slacks into a report.
//!
//! Every trial is a pure function of (bound id, base seed, trial index), so
//! sweeps are schedule-independent: the worker pool only changes wall time,
//! never a single drawn matrix or slack.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sectorial::catalog::{
    evaluate, spec_for, Arity, BoundEvaluation, BoundSpec, CatalogError, EvalOptions,
    InequalityInput, Sign,
};
use sectorial::ensemble::{draw, stream, EnsembleError, EnsembleKind, EnsembleSpec, GammaTarget};

/// Salt separating the per-trial parameter stream from the matrix streams.
const META_SALT: u64 = 0x4D45_5441_u64;
/// Salt for the unstructured side operands (B, X, Y) of one-sided rows.
const AUX_SALT: u64 = 0x4155_585F_u64;

const DEFAULT_MODULUS_RANGE: [f64; 2] = [1.0, 2.0];

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown bound id {0:?}")]
    UnknownBound(String),
    #[error("bad run configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Relative-slack bucket labels, left-closed. The first bucket collects
/// certified violations and anything within numerical error of equality
/// lands in the small buckets next to it.
pub const HISTOGRAM_LABELS: [&str; 8] = [
    "< 0",
    "[0, 1e-9)",
    "[1e-9, 1e-6)",
    "[1e-6, 1e-3)",
    "[1e-3, 1e-2)",
    "[1e-2, 1e-1)",
    "[1e-1, 1)",
    ">= 1",
];

fn histogram_bucket(slack_rel: f64) -> usize {
    if slack_rel < 0.0 {
        0
    } else if slack_rel < 1e-9 {
        1
    } else if slack_rel < 1e-6 {
        2
    } else if slack_rel < 1e-3 {
        3
    } else if slack_rel < 1e-2 {
        4
    } else if slack_rel < 1e-1 {
        5
    } else if slack_rel < 1.0 {
        6
    } else {
        7
    }
}

/// Everything needed to re-draw and re-evaluate the extremal trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub trial_index: u64,
    pub spec: EnsembleSpec,
    pub aux_spec: Option<EnsembleSpec>,
    pub sign: Sign,
    pub alpha: Option<f64>,
    pub n_halvings: Option<usize>,
    pub evaluation: BoundEvaluation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub bound_id: String,
    pub trials: u64,
    /// Trials whose slack fell below the certified error margin.
    pub violations: u64,
    /// Smallest absolute slack seen; None when no trials ran.
    pub min_slack: Option<f64>,
    pub min_slack_witness: Option<Witness>,
    /// Counts of relative slack per `HISTOGRAM_LABELS` bucket.
    pub slack_histogram: Vec<u64>,
    pub wall_time_seconds: Option<f64>,
}

impl RunReport {
    /// Copy with timing stripped; two equally-seeded runs serialize this
    /// identically.
    pub fn without_timing(&self) -> RunReport {
        RunReport { wall_time_seconds: None, ..self.clone() }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("bound        {}\n", self.bound_id));
        out.push_str(&format!("trials       {}\n", self.trials));
        out.push_str(&format!("violations   {}\n", self.violations));
        match self.min_slack {
            Some(s) => out.push_str(&format!("min slack    {s:.12e}\n")),
            None => out.push_str("min slack    +inf (no trials)\n"),
        }
        if let Some(w) = &self.min_slack_witness {
            out.push_str(&format!(
                "witness      trial {} (n = {}, lhs = {:.12e}, rhs = {:.12e})\n",
                w.trial_index, w.spec.n, w.evaluation.lhs, w.evaluation.rhs
            ));
        }
        out.push_str("relative slack histogram\n");
        for (label, count) in HISTOGRAM_LABELS.iter().zip(&self.slack_histogram) {
            out.push_str(&format!("  {label:<14} {count}\n"));
        }
        if let Some(t) = self.wall_time_seconds {
            out.push_str(&format!("wall time    {t:.3}s\n"));
        }
        out
    }
}

/// Which hypothesis the structured operands must satisfy.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Hypothesis {
    Generic,
    Sectorial,
    AccretiveDissipative,
    DoubleCommuting,
    Cone,
}

/// How operands are assembled from the draws.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// One structured matrix.
    Single,
    /// Two structured matrices from one sample (shared hypothesis).
    PairShared,
    /// Structured A, unstructured B.
    PairAux,
    /// Structured A, unstructured B plus weights X, Y.
    WeightedAux,
    /// Structured family of one to three members.
    Family,
    /// Double-commuting sample split into two equal families.
    SplitFamilies,
}

#[derive(Clone, Copy)]
struct Plan {
    hypothesis: Hypothesis,
    shape: Shape,
    needs_alpha: bool,
    needs_halvings: bool,
    signed: bool,
}

impl Plan {
    const fn new(hypothesis: Hypothesis, shape: Shape) -> Self {
        Plan { hypothesis, shape, needs_alpha: false, needs_halvings: false, signed: false }
    }
    const fn alpha(mut self) -> Self {
        self.needs_alpha = true;
        self
    }
    const fn halvings(mut self) -> Self {
        self.needs_halvings = true;
        self
    }
    const fn signed(mut self) -> Self {
        self.signed = true;
        self
    }
}

/// Matched ensemble for each registered bound: the weakest structure that
/// makes the row's applicability predicates hold by construction.
fn plan_for(id: &str) -> Option<Plan> {
    use Hypothesis as H;
    use Shape as S;
    let plan = match id {
        "eq-1.1-lower" | "eq-1.1-upper" | "base-quarter" | "base-refined" | "base-1p"
        | "base-2p" => Plan::new(H::Generic, S::Single),
        "eq-1.2-cos" | "lem-2.1-im" | "thm-2.2" | "lem-2.9" | "cor-2.11" | "lem-3.4" => {
            Plan::new(H::Sectorial, S::Single)
        }
        "thm-2.12" => Plan::new(H::Sectorial, S::Single).halvings(),
        "lem-2.9-ad" | "cor-2.11-ad" => Plan::new(H::AccretiveDissipative, S::Single),
        "thm-2.12-ad" => Plan::new(H::AccretiveDissipative, S::Single).halvings(),
        "thm-3.1" | "eq-3.2-rot" | "thm-3.5" | "thm-3.7" => Plan::new(H::Cone, S::Single),
        "thm-2.4" => Plan::new(H::Sectorial, S::WeightedAux).signed(),
        "cor-2.5" => Plan::new(H::Sectorial, S::PairAux).signed(),
        "cor-2.7" => Plan::new(H::Sectorial, S::PairShared).signed(),
        "base-fong" | "base-kitt-comm" => Plan::new(H::Generic, S::PairAux).signed(),
        "prop-2.8" | "cor-2.10" => Plan::new(H::Sectorial, S::Family),
        "cor-2.10-ad" => Plan::new(H::AccretiveDissipative, S::Family),
        "prop-2.13-i" | "prop-2.13-ii" => Plan::new(H::Sectorial, S::PairShared).alpha(),
        "cor-2.14-i" | "cor-2.14-ii" => Plan::new(H::Sectorial, S::PairShared).alpha(),
        "lem-2.15" | "thm-2.16" => Plan::new(H::DoubleCommuting, S::SplitFamilies),
        "cor-2.17" => Plan::new(H::DoubleCommuting, S::PairShared),
        "lem-3.2" => Plan::new(H::Sectorial, S::PairShared),
        "lem-3.2-ad" => Plan::new(H::AccretiveDissipative, S::PairShared),
        "thm-3.3" | "eq-3.4-rot" => Plan::new(H::Cone, S::PairShared),
        _ => return None,
    };
    Some(plan)
}

fn kind_of(h: Hypothesis) -> EnsembleKind {
    match h {
        Hypothesis::Generic => EnsembleKind::Generic,
        Hypothesis::Sectorial => EnsembleKind::Sectorial,
        Hypothesis::AccretiveDissipative => EnsembleKind::AccretiveDissipative,
        Hypothesis::DoubleCommuting => EnsembleKind::DoubleCommuting,
        Hypothesis::Cone => EnsembleKind::Cone,
    }
}

fn members_for(shape: Shape, meta: &mut ChaCha12Rng) -> usize {
    match shape {
        Shape::Single | Shape::PairAux | Shape::WeightedAux => 1,
        Shape::PairShared => 2,
        Shape::Family => meta.gen_range(1..=3),
        Shape::SplitFamilies => 2 * meta.gen_range(1..=3usize),
    }
}

/// Per-trial primary spec. Without a user config, dimension and angles are
/// drawn fresh each trial: n in 2..=8, sector indices in [0.05, 1.5].
fn primary_spec(
    plan: Plan,
    seed: u64,
    user: Option<&EnsembleSpec>,
    meta: &mut ChaCha12Rng,
) -> Result<EnsembleSpec, RunError> {
    if let Some(cfg) = user {
        let mut spec = cfg.clone();
        match plan.shape {
            Shape::Single | Shape::PairAux | Shape::WeightedAux => spec.family_size = 1,
            Shape::PairShared => spec.family_size = 2,
            Shape::Family => {}
            Shape::SplitFamilies => {
                if spec.family_size % 2 != 0 || spec.family_size == 0 {
                    return Err(RunError::BadConfig(format!(
                        "family_size {} cannot split into two equal families",
                        spec.family_size
                    )));
                }
            }
        }
        return Ok(spec);
    }
    let n = meta.gen_range(2..=8usize);
    let family_size = members_for(plan.shape, meta);
    let gamma_target = match plan.hypothesis {
        Hypothesis::Cone => {
            let theta2 = meta.gen_range(0.1..=1.5);
            let theta1 = theta2 * meta.gen_range(0.05..=1.0);
            GammaTarget::Cone { theta1, theta2 }
        }
        _ => GammaTarget::Sector(meta.gen_range(0.05..=1.5)),
    };
    Ok(EnsembleSpec {
        kind: kind_of(plan.hypothesis),
        n,
        family_size,
        gamma_target,
        modulus_range: DEFAULT_MODULUS_RANGE,
        seed,
    })
}

fn aux_spec(plan: Plan, primary: &EnsembleSpec, seed: u64) -> Option<EnsembleSpec> {
    let family_size = match plan.shape {
        Shape::PairAux => 1,
        Shape::WeightedAux => 3,
        _ => return None,
    };
    Some(EnsembleSpec {
        kind: EnsembleKind::Generic,
        n: primary.n,
        family_size,
        gamma_target: GammaTarget::Sector(0.0),
        modulus_range: primary.modulus_range,
        seed: seed ^ AUX_SALT,
    })
}

struct TrialDraw {
    input: InequalityInput,
    /// First structured matrix, kept for conditioning in comparisons.
    primary: sectorial::ComplexMatrix,
    spec: EnsembleSpec,
    aux: Option<EnsembleSpec>,
    sign: Sign,
    alpha: Option<f64>,
    halvings: Option<usize>,
}

struct TrialOutcome {
    index: u64,
    spec: EnsembleSpec,
    aux: Option<EnsembleSpec>,
    sign: Sign,
    alpha: Option<f64>,
    halvings: Option<usize>,
    evaluation: BoundEvaluation,
}

fn draw_trial(
    plan: Plan,
    seed: u64,
    user: Option<&EnsembleSpec>,
    index: u64,
) -> Result<TrialDraw, RunError> {
    let mut meta = stream(seed ^ META_SALT, index);
    let spec = primary_spec(plan, seed, user, &mut meta)?;
    let sample = draw(&spec, index)?;
    let aux = aux_spec(plan, &spec, seed);
    let aux_sample = aux.as_ref().map(|s| draw(s, index)).transpose()?;

    let sign = if plan.signed && meta.gen::<bool>() { Sign::Minus } else { Sign::Plus };
    let alpha = plan.needs_alpha.then(|| meta.gen_range(7..=57u32) as f64 / 64.0);
    let halvings = plan.needs_halvings.then(|| meta.gen_range(1..=3usize));

    let mut mats = sample.matrices;
    let primary = mats[0].clone();
    let mut input = match plan.shape {
        Shape::Single => InequalityInput::single(mats.swap_remove(0)),
        Shape::PairShared => {
            let b = mats.pop().expect("two members");
            let a = mats.pop().expect("two members");
            InequalityInput::pair(a, b)
        }
        Shape::PairAux => {
            let mut aux_mats = aux_sample.expect("aux drawn").matrices;
            InequalityInput::pair(mats.swap_remove(0), aux_mats.swap_remove(0))
        }
        Shape::WeightedAux => {
            let mut aux_mats = aux_sample.expect("aux drawn").matrices;
            let y = aux_mats.pop().expect("three aux");
            let x = aux_mats.pop().expect("three aux");
            let b = aux_mats.pop().expect("three aux");
            InequalityInput::weighted(mats.swap_remove(0), b, x, y)
        }
        Shape::Family => InequalityInput::family(mats),
        Shape::SplitFamilies => {
            let half = mats.len() / 2;
            let tail = mats.split_off(half);
            InequalityInput::family_pair(mats, tail)
        }
    };
    if let Some(g) = sample.gamma {
        input = input.with_gamma(g);
    }
    if let Some(c) = sample.cone {
        input = input.with_cone(c);
    }
    input = input.with_sign(sign);
    if let Some(a) = alpha {
        input = input.with_alpha(a);
    }
    if let Some(h) = halvings {
        input = input.with_halvings(h);
    }
    Ok(TrialDraw { input, primary, spec, aux, sign, alpha, halvings })
}

/// The exact input a falsify trial of `row` would see, plus the primary
/// matrix for conditioning. Shared with the sharpness comparisons so both
/// commands sample identical universes.
pub(crate) fn comparison_input(
    row: &BoundSpec,
    seed: u64,
    user: Option<&EnsembleSpec>,
    index: u64,
) -> Result<(InequalityInput, sectorial::ComplexMatrix), RunError> {
    let plan = plan_for(row.id)
        .ok_or_else(|| RunError::BadConfig(format!("no matched ensemble for {}", row.id)))?;
    let drawn = draw_trial(plan, seed, user, index)?;
    Ok((drawn.input, drawn.primary))
}

fn run_trial(
    row: &BoundSpec,
    plan: Plan,
    seed: u64,
    user: Option<&EnsembleSpec>,
    opts: &EvalOptions,
    index: u64,
) -> Result<TrialOutcome, RunError> {
    let drawn = draw_trial(plan, seed, user, index)?;
    let evaluation = evaluate(row.id, &drawn.input, opts)?;
    Ok(TrialOutcome {
        index,
        spec: drawn.spec,
        aux: drawn.aux,
        sign: drawn.sign,
        alpha: drawn.alpha,
        halvings: drawn.halvings,
        evaluation,
    })
}

/// Sweep one bound over its matched ensemble (or `config` when given).
/// Violations are certified: a trial counts only when slack falls below
/// the propagated numerical error.
pub fn falsify(
    bound_id: &str,
    config: Option<&EnsembleSpec>,
    trials: u64,
    seed: u64,
) -> Result<RunReport, RunError> {
    let row = spec_for(bound_id).ok_or_else(|| RunError::UnknownBound(bound_id.into()))?;
    let plan = plan_for(row.id)
        .ok_or_else(|| RunError::BadConfig(format!("no matched ensemble for {bound_id}")))?;
    if let Some(cfg) = config {
        cfg.validate()?;
    }
    let opts = EvalOptions::sweep();
    let started = Instant::now();
    let outcomes: Result<Vec<TrialOutcome>, RunError> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(row, plan, seed, config, &opts, i))
        .collect();
    let outcomes = outcomes?;

    let mut violations = 0u64;
    let mut histogram = vec![0u64; HISTOGRAM_LABELS.len()];
    let mut extremal: Option<&TrialOutcome> = None;
    for outcome in &outcomes {
        if !outcome.evaluation.holds {
            violations += 1;
        }
        histogram[histogram_bucket(outcome.evaluation.slack_rel())] += 1;
        if extremal.is_none_or(|m| outcome.evaluation.slack < m.evaluation.slack) {
            extremal = Some(outcome);
        }
    }
    let witness = extremal.map(|o| Witness {
        trial_index: o.index,
        spec: o.spec.clone(),
        aux_spec: o.aux.clone(),
        sign: o.sign,
        alpha: o.alpha,
        n_halvings: o.halvings,
        evaluation: o.evaluation.clone(),
    });
    Ok(RunReport {
        bound_id: bound_id.to_string(),
        trials,
        violations,
        min_slack: extremal.map(|o| o.evaluation.slack),
        min_slack_witness: witness,
        slack_histogram: histogram,
        wall_time_seconds: Some(started.elapsed().as_secs_f64()),
    })
}

/// Re-evaluate a report's witness; the regression hook for archived runs.
pub fn replay(witness: &Witness, bound_id: &str) -> Result<BoundEvaluation, RunError> {
    let row = spec_for(bound_id).ok_or_else(|| RunError::UnknownBound(bound_id.into()))?;
    let plan = plan_for(row.id)
        .ok_or_else(|| RunError::BadConfig(format!("no matched ensemble for {bound_id}")))?;
    let outcome = run_trial(
        row,
        plan,
        witness.spec.seed,
        Some(&witness.spec),
        &EvalOptions::sweep(),
        witness.trial_index,
    )?;
    Ok(outcome.evaluation)
}

/// Every registered bound id, in catalog order; the full-suite driver.
pub fn all_bound_ids() -> Vec<&'static str> {
    sectorial::catalog::list_catalog().iter().map(|s| s.id).collect()
}

/// Check-side helper: how many matrix files a bound consumes on the
/// command line (weights travel separately).
pub fn positional_matrix_count(arity: Arity) -> Option<usize> {
    match arity {
        Arity::Single => Some(1),
        Arity::Pair | Arity::Weighted => Some(2),
        Arity::Family | Arity::FamilyPair => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_bound_has_a_matched_plan() {
        for row in sectorial::catalog::list_catalog() {
            assert!(plan_for(row.id).is_some(), "no plan for {}", row.id);
        }
    }

    #[test]
    fn small_sweeps_run_clean_across_groups() {
        for id in ["eq-1.1-upper", "thm-2.2", "cor-2.5", "cor-2.17", "thm-3.3", "cor-2.14-ii"] {
            let report = falsify(id, None, 25, 7).unwrap();
            assert_eq!(report.trials, 25);
            assert_eq!(report.violations, 0, "{id}: {:?}", report.min_slack);
            assert!(report.min_slack.is_some());
            let total: u64 = report.slack_histogram.iter().sum();
            assert_eq!(total, 25);
        }
    }

    #[test]
    fn zero_trials_reports_the_empty_sentinel() {
        let report = falsify("thm-2.2", None, 0, 1).unwrap();
        assert_eq!(report.trials, 0);
        assert_eq!(report.violations, 0);
        assert!(report.min_slack.is_none());
        assert!(report.min_slack_witness.is_none());
        assert!(report.render_text().contains("+inf"));
    }

    #[test]
    fn reports_are_deterministic_without_timing() {
        let a = falsify("lem-3.2", None, 20, 99).unwrap();
        let b = falsify("lem-3.2", None, 20, 99).unwrap();
        let ja = serde_json::to_string(&a.without_timing()).unwrap();
        let jb = serde_json::to_string(&b.without_timing()).unwrap();
        assert_eq!(ja, jb);
        let c = falsify("lem-3.2", None, 20, 100).unwrap();
        assert_ne!(
            serde_json::to_string(&c.without_timing()).unwrap(),
            ja,
            "different seeds must differ"
        );
    }

    #[test]
    fn witnesses_replay_to_the_same_slack() {
        let report = falsify("thm-2.2", None, 30, 5).unwrap();
        let witness = report.min_slack_witness.unwrap();
        let again = replay(&witness, "thm-2.2").unwrap();
        assert_eq!(again.slack, witness.evaluation.slack);
        assert_eq!(again.lhs, witness.evaluation.lhs);
    }

    #[test]
    fn user_config_pins_the_ensemble() {
        let cfg = EnsembleSpec {
            kind: EnsembleKind::Sectorial,
            n: 3,
            family_size: 1,
            gamma_target: GammaTarget::Sector(0.9),
            modulus_range: [1.0, 1.5],
            seed: 11,
        };
        let report = falsify("thm-2.2", Some(&cfg), 10, 11).unwrap();
        assert_eq!(report.violations, 0);
        let w = report.min_slack_witness.unwrap();
        assert_eq!(w.spec.n, 3);
        assert_eq!(w.spec.gamma_target, GammaTarget::Sector(0.9));

        let bad = EnsembleSpec { family_size: 3, ..cfg };
        let err = falsify("lem-2.15", Some(&bad), 5, 1).unwrap_err();
        assert!(matches!(err, RunError::BadConfig(_)), "{err}");
    }
}
