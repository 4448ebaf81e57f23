//! Sharpness comparisons: evaluate two bounds with the same target on the
//! same drawn inputs and report how often the first is at least as tight,
//! overall and split by which Cartesian part of A dominates.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use sectorial::catalog::{evaluate, spec_for, EvalOptions, Side};
use sectorial::ensemble::EnsembleSpec;
use sectorial::linalg::{cartesian_parts, operator_norm};

use crate::run::RunError;

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct FractionRow {
    pub samples: u64,
    pub dominant: u64,
}

impl FractionRow {
    pub fn fraction(&self) -> Option<f64> {
        (self.samples > 0).then(|| self.dominant as f64 / self.samples as f64)
    }

    fn record(&mut self, dominant: bool) {
        self.samples += 1;
        if dominant {
            self.dominant += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub bound_a: String,
    pub bound_b: String,
    /// Trials drawn (some may exceed `requested` when a conditional quota
    /// was set).
    pub trials: u64,
    pub overall: FractionRow,
    /// Samples with ||Im A|| >= ||Re A||.
    pub im_heavy: FractionRow,
    /// The complement.
    pub im_light: FractionRow,
    pub wall_time_seconds: Option<f64>,
}

impl SharpnessReport {
    pub fn without_timing(&self) -> SharpnessReport {
        SharpnessReport { wall_time_seconds: None, ..self.clone() }
    }

    pub fn render_text(&self) -> String {
        fn line(label: &str, row: &FractionRow) -> String {
            match row.fraction() {
                Some(f) => {
                    format!("{label:<22} {:>7}/{:<7} = {f:.6}\n", row.dominant, row.samples)
                }
                None => format!("{label:<22} no samples\n"),
            }
        }
        let mut out = String::new();
        out.push_str(&format!("sharper bound        {}\n", self.bound_a));
        out.push_str(&format!("baseline             {}\n", self.bound_b));
        out.push_str(&format!("trials               {}\n", self.trials));
        out.push_str(&line("overall", &self.overall));
        out.push_str(&line("||Im|| >= ||Re||", &self.im_heavy));
        out.push_str(&line("||Im|| <  ||Re||", &self.im_light));
        if let Some(t) = self.wall_time_seconds {
            out.push_str(&format!("wall time            {t:.3}s\n"));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("condition,samples,dominant,fraction\n");
        for (label, row) in [
            ("overall", &self.overall),
            ("im_heavy", &self.im_heavy),
            ("im_light", &self.im_light),
        ] {
            out.push_str(&format!(
                "{label},{},{},{}\n",
                row.samples,
                row.dominant,
                row.fraction().map_or_else(|| "nan".into(), |f| format!("{f:.6}")),
            ));
        }
        out
    }
}

/// Evaluate both bounds on identical inputs drawn from `bound_a`'s matched
/// ensemble (or `config`). With `quota` set, drawing continues past
/// `trials` until the im-heavy bucket holds that many samples, capped at
/// fifty times the quota.
pub fn compare(
    bound_a: &str,
    bound_b: &str,
    config: Option<&EnsembleSpec>,
    trials: u64,
    seed: u64,
    quota: Option<u64>,
) -> Result<SharpnessReport, RunError> {
    let row_a = spec_for(bound_a).ok_or_else(|| RunError::UnknownBound(bound_a.into()))?;
    let row_b = spec_for(bound_b).ok_or_else(|| RunError::UnknownBound(bound_b.into()))?;
    if row_a.side != row_b.side || row_a.target != row_b.target {
        return Err(RunError::BadConfig(format!(
            "{bound_a} ({} bound on {}) and {bound_b} ({} bound on {}) are not comparable",
            side_name(row_a.side),
            row_a.target,
            side_name(row_b.side),
            row_b.target,
        )));
    }

    let opts = EvalOptions::sweep();
    let started = Instant::now();
    let mut report = SharpnessReport {
        bound_a: bound_a.to_string(),
        bound_b: bound_b.to_string(),
        trials: 0,
        overall: FractionRow::default(),
        im_heavy: FractionRow::default(),
        im_light: FractionRow::default(),
        wall_time_seconds: None,
    };
    let cap = quota.map_or(trials, |q| trials.max(q.saturating_mul(50)));
    let mut index = 0u64;
    while index < cap {
        let (input, primary) = crate::run::comparison_input(row_a, seed, config, index)?;
        let eval_a = evaluate(bound_a, &input, &opts)?;
        let eval_b = evaluate(bound_b, &input, &opts)?;
        // Ties within the certified error count as dominant; remark-style
        // claims are "at least as sharp".
        let margin = eval_a.certified_error + eval_b.certified_error;
        let dominant = match row_a.side {
            Side::Lower => eval_a.rhs >= eval_b.rhs - margin,
            Side::Upper => eval_a.rhs <= eval_b.rhs + margin,
        };
        let (re, im) = cartesian_parts(&primary);
        let im_heavy = operator_norm(&im) >= operator_norm(&re);
        report.overall.record(dominant);
        if im_heavy {
            report.im_heavy.record(dominant);
        } else {
            report.im_light.record(dominant);
        }
        report.trials += 1;
        index += 1;
        let quota_met = quota.is_none_or(|q| report.im_heavy.samples >= q);
        if index >= trials && quota_met {
            break;
        }
    }
    report.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    Ok(report)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Lower => "lower",
        Side::Upper => "upper",
    }
}
