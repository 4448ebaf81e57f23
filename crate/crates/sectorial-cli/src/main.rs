//! `sectorial`: numerical-radius toolkit front end.
//!
//! Exit codes: 0 success or bound holds; 1 violation, regression, or a
//! failed check; 2 usage or parse problems; 3 hypothesis not applicable.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sectorial::catalog::{
    evaluate, list_catalog, spec_for, Arity, CatalogError, EvalOptions, InequalityInput, Sign,
};
use sectorial::ensemble::{draw, EnsembleSpec};
use sectorial::fov::{
    boundary_polygon, default_margin, is_accretive, numerical_radius, sectorial_index,
    Orientation, RayCone, SectorCone,
};
use sectorial::linalg::operator_norm;

use sectorial_cli::io;
use sectorial_cli::reproduce;
use sectorial_cli::run::{self, RunError};
use sectorial_cli::sharp;

#[derive(Parser)]
#[command(
    name = "sectorial",
    version,
    about = "Numerical radius, range geometry, and bound verification for sectorial matrices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certified numerical radius of a matrix file, with norm and sector index
    Radius {
        matrix: PathBuf,
        /// Enclosure tolerance relative to the Frobenius norm
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Evaluate one registered bound on explicit matrices
    Check {
        bound_id: String,
        /// Operand files; count must match the bound's arity
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        /// Use the minus sign for commutator-type targets
        #[arg(long)]
        minus: bool,
        /// Splitting exponent in (0, 1) for fractional-power rows
        #[arg(long)]
        alpha: Option<f64>,
        /// Iterated-root depth for the repeated-halving row
        #[arg(long)]
        halvings: Option<usize>,
        /// Weight matrix files X and Y for the weighted commutator row
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        weights: Option<Vec<PathBuf>>,
        /// For two-family rows: how many leading files form the first family
        #[arg(long)]
        split: Option<usize>,
        /// Trusted sector half-angle override in radians
        #[arg(long)]
        gamma: Option<f64>,
        /// Trusted lower-cone override: theta1 theta2 in radians
        #[arg(long, num_args = 2, value_names = ["THETA1", "THETA2"])]
        cone: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Random sweep of one bound over its matched ensemble
    Falsify {
        bound_id: String,
        /// Ensemble config file overriding the matched default
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare two same-target bounds' right-hand sides on shared samples
    Report {
        bound_a: String,
        bound_b: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// Keep drawing until this many samples satisfy ||Im|| >= ||Re||
        #[arg(long)]
        qualifying: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export the numerical-range boundary scan as CSV
    Range {
        matrix: PathBuf,
        #[arg(long, default_value_t = 256)]
        angles: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw one ensemble sample and write its matrices as JSON files
    Gen {
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// List every registered bound id with its side and target
    Catalog,
    /// Recompute the built-in reference example and compare to goldens
    Reproduce,
}

enum Failure {
    /// Bound violated, regression mismatch, falsification hit.
    Violation(String),
    /// Bad arguments, unreadable files, malformed configs.
    Usage(String),
    /// Hypothesis predicates rejected the input.
    NotApplicable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NotApplicable(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Violation(m) | Failure::Usage(m) | Failure::NotApplicable(m) => m,
        }
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::NotApplicable { .. } => Failure::NotApplicable(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Catalog(inner) => inner.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Radius { matrix, tol } => cmd_radius(&matrix, tol),
        Cmd::Check { bound_id, matrices, minus, alpha, halvings, weights, split, gamma, cone, format } => {
            cmd_check(&bound_id, &matrices, minus, alpha, halvings, weights, split, gamma, cone, format)
        }
        Cmd::Falsify { bound_id, config, trials, seed, out, format } => {
            cmd_falsify(&bound_id, config.as_deref(), trials, seed, out.as_deref(), format)
        }
        Cmd::Report { bound_a, bound_b, config, trials, qualifying, seed, format } => {
            cmd_report(&bound_a, &bound_b, config.as_deref(), trials, qualifying, seed, format)
        }
        Cmd::Range { matrix, angles, out } => cmd_range(&matrix, angles, &out),
        Cmd::Gen { config, index, out_dir } => cmd_gen(&config, index, &out_dir),
        Cmd::Catalog => {
            for row in list_catalog() {
                println!("{:<16} {:<5} {}", row.id, side_str(row), row.target);
            }
            Ok(())
        }
        Cmd::Reproduce => cmd_reproduce(),
    }
}

fn side_str(row: &sectorial::catalog::BoundSpec) -> &'static str {
    match row.side {
        sectorial::catalog::Side::Lower => "lower",
        sectorial::catalog::Side::Upper => "upper",
    }
}

fn cmd_radius(path: &Path, tol: f64) -> Result<(), Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("tolerance {tol} must be a positive number")));
    }
    let a = io::read_matrix(path)?;
    let abs_tol = tol * a.frobenius_norm().max(1.0);
    let radius = numerical_radius(&a, abs_tol)
        .map_err(|e| Failure::Usage(format!("radius computation failed: {e}")))?;
    println!("w(A)        = {:.12e} +- {:.3e}", radius.value, radius.error_bound);
    println!("||A||       = {:.12e}", operator_norm(&a));
    let margin = default_margin(&a);
    match is_accretive(&a, margin) {
        Ok((true, delta)) => {
            let gamma = sectorial_index(&a)
                .map_err(|e| Failure::Usage(format!("index computation failed: {e}")))?;
            println!("gamma       = {:.12e} rad (accretive, Re-part floor {:.3e})", gamma.gamma(), delta);
            println!("sin(gamma)  = {:.12e}", gamma.gamma().sin());
        }
        Ok((false, _)) => println!("gamma       = n/a (matrix is not accretive)"),
        Err(e) => return Err(Failure::Usage(e.to_string())),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    bound_id: &str,
    files: &[PathBuf],
    minus: bool,
    alpha: Option<f64>,
    halvings: Option<usize>,
    weights: Option<Vec<PathBuf>>,
    split: Option<usize>,
    gamma: Option<f64>,
    cone: Option<Vec<f64>>,
    format: Format,
) -> Result<(), Failure> {
    let row = spec_for(bound_id)
        .ok_or_else(|| Failure::Usage(format!("unknown bound id {bound_id:?}")))?;
    let mats: Vec<_> = files.iter().map(|p| io::read_matrix(p)).collect::<Result<_, _>>()?;

    let mut input = match row.arity {
        Arity::Single => {
            let [a] = take_exact::<1>(bound_id, mats)?;
            InequalityInput::single(a)
        }
        Arity::Pair => {
            let [a, b] = take_exact::<2>(bound_id, mats)?;
            InequalityInput::pair(a, b)
        }
        Arity::Weighted => {
            let [a, b] = take_exact::<2>(bound_id, mats)?;
            let weight_files = weights.ok_or_else(|| {
                Failure::Usage(format!("{bound_id} needs --weights X.json Y.json"))
            })?;
            let x = io::read_matrix(&weight_files[0])?;
            let y = io::read_matrix(&weight_files[1])?;
            InequalityInput::weighted(a, b, x, y)
        }
        Arity::Family => InequalityInput::family(mats),
        Arity::FamilyPair => {
            let k = split.unwrap_or(mats.len() / 2);
            if k == 0 || k >= mats.len() {
                return Err(Failure::Usage(format!(
                    "--split {k} must leave both families nonempty ({} files given)",
                    mats.len()
                )));
            }
            let mut first = mats;
            let second = first.split_off(k);
            InequalityInput::family_pair(first, second)
        }
    };
    if minus {
        input = input.with_sign(Sign::Minus);
    }
    if let Some(a) = alpha {
        input = input.with_alpha(a);
    }
    if let Some(h) = halvings {
        input = input.with_halvings(h);
    }
    if let Some(g) = gamma {
        let sector = SectorCone::new(g).map_err(|e| Failure::Usage(e.to_string()))?;
        input = input.with_gamma(sector);
    }
    if let Some(angles) = cone {
        let ray = RayCone::new(angles[0], angles[1], Orientation::Lower)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        input = input.with_cone(ray);
    }

    let result = evaluate(bound_id, &input, &EvalOptions::default())?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&result).expect("serializes")),
        Format::Text => {
            println!("bound           {}", result.bound_id);
            println!("lhs             {:.12e}", result.lhs);
            println!("rhs             {:.12e}", result.rhs);
            println!("slack           {:.12e}", result.slack);
            println!("relative slack  {:.12e}", result.slack_rel());
            println!("certified error {:.3e}", result.certified_error);
            println!("verdict         {}", if result.holds { "holds" } else { "VIOLATED" });
        }
        Format::Csv => {
            return Err(Failure::Usage("csv output applies to report only".into()));
        }
    }
    if result.holds {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{bound_id} violated: slack {:.6e} below -{:.3e}",
            result.slack, result.certified_error
        )))
    }
}

fn take_exact<const K: usize>(
    bound_id: &str,
    mats: Vec<sectorial::ComplexMatrix>,
) -> Result<[sectorial::ComplexMatrix; K], Failure> {
    let found = mats.len();
    mats.try_into().map_err(|_| {
        Failure::Usage(format!("{bound_id} takes exactly {K} matrix files, found {found}"))
    })
}

fn read_config(path: Option<&Path>) -> Result<Option<EnsembleSpec>, Failure> {
    path.map(io::read_ensemble).transpose().map_err(Into::into)
}

fn cmd_falsify(
    bound_id: &str,
    config: Option<&Path>,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<(), Failure> {
    let config = read_config(config)?;
    let report = run::falsify(bound_id, config.as_ref(), trials, seed)?;
    let json = serde_json::to_string_pretty(&report).expect("serializes");
    if let Some(path) = out {
        std::fs::write(path, &json)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    match format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", report.render_text()),
        Format::Csv => return Err(Failure::Usage("csv output applies to report only".into())),
    }
    if report.violations == 0 {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{} violation(s) in {} trials of {bound_id}",
            report.violations, report.trials
        )))
    }
}

fn cmd_report(
    bound_a: &str,
    bound_b: &str,
    config: Option<&Path>,
    trials: u64,
    qualifying: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<(), Failure> {
    let config = read_config(config)?;
    let report = sharp::compare(bound_a, bound_b, config.as_ref(), trials, seed, qualifying)?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializes"))
        }
        Format::Csv => print!("{}", report.render_csv()),
        Format::Text => print!("{}", report.render_text()),
    }
    Ok(())
}

fn cmd_range(matrix: &Path, angles: usize, out: &Path) -> Result<(), Failure> {
    let a = io::read_matrix(matrix)?;
    let scan = boundary_polygon(&a, angles).map_err(|e| Failure::Usage(e.to_string()))?;
    io::write_boundary_csv(out, &scan)?;
    println!("wrote {} boundary rows to {}", scan.angles.len(), out.display());
    Ok(())
}

fn cmd_gen(config: &Path, index: u64, out_dir: &Path) -> Result<(), Failure> {
    let spec = io::read_ensemble(config)?;
    let sample = draw(&spec, index).map_err(|e| Failure::Usage(e.to_string()))?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", out_dir.display())))?;
    for (k, m) in sample.matrices.iter().enumerate() {
        let path = out_dir.join(format!("sample_{index}_{k}.json"));
        io::write_matrix(&path, m)?;
        println!("{}", path.display());
    }
    if let Some(g) = sample.gamma {
        println!("sector index {:.12e} rad (exact by construction)", g.gamma());
    }
    if let Some(c) = sample.cone {
        println!("lower cone [{:.12e}, {:.12e}] rad (exact by construction)", c.theta1, c.theta2);
    }
    Ok(())
}

fn cmd_reproduce() -> Result<(), Failure> {
    let rows = reproduce::rows()?;
    print!("{}", reproduce::render(&rows));
    let worst = reproduce::max_deviation(&rows);
    if worst <= reproduce::TOLERANCE {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "reference example drifted: worst deviation {worst:.3e}"
        )))
    }
}
