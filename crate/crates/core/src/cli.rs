//! The `spaceform` command line: spectra, basis exports, point evaluation,
//! polynomial exports and verification suites.
//!
//! Exit codes: 0 on success (and on passing verification), 1 when a
//! verification suite fails, 2 on usage errors. Output is deterministic
//! byte-for-byte for identical flags and seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::geometry::{from_cartesian, CartesianPoint, ToroidalPoint};
use crate::modes::{
    enumerate_basis, mode_normalized, mode_unnormalized, ModeIndex, SphereFunction,
};
use crate::polynomial::to_polynomial;
use crate::quotient::{spectrum, BasisExport, QuotientSpace, Spectrum};
use crate::symmetry::character_trace;
use crate::validation::{
    build_rule, gram_matrix, helmholtz_residual, invariance_residual, max_identity_deviation,
    random_points, reference_lens_spectra, VerificationReport,
};
use crate::{ikeda_multiplicity, lens_multiplicity, prism_multiplicity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Validated space argument: "s3", "lens:p,q" or "prism:n".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceSpec(pub QuotientSpace);

impl FromStr for SpaceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QuotientSpace::from_str(s)
            .map(SpaceSpec)
            .map_err(|e| format!("{e}; usage: --space s3 | lens:p,q | prism:n"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "spaceform",
    about = "Laplacian eigenmode bases and spectra for the 3-sphere, lens spaces and prism spaces",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate eigenvalue multiplicities up to a wave number.
    Spectrum(SpectrumArgs),
    /// Export the orthonormal eigenbasis at one wave number.
    Basis(BasisArgs),
    /// Evaluate a mode or a basis vector on a file of points.
    Eval(EvalArgs),
    /// Export the exact polynomial form of a mode.
    Poly(PolyArgs),
    /// Run a verification suite and report pass/fail.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Space: s3 | lens:p,q | prism:n
    #[arg(long)]
    space: SpaceSpec,
    /// Largest wave number to tabulate (at most 10000).
    #[arg(long)]
    kmax: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BasisArgs {
    /// Space: s3 | lens:p,q | prism:n
    #[arg(long)]
    space: SpaceSpec,
    /// Wave number.
    #[arg(long)]
    k: u32,
    /// Only json is meaningful for basis exports.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Mode index "k,l,m".
    #[arg(long, conflicts_with_all = ["space", "k", "index"])]
    mode: Option<String>,
    /// Space of the basis vector to evaluate.
    #[arg(long, requires = "k", requires = "index")]
    space: Option<SpaceSpec>,
    /// Wave number of the basis vector.
    #[arg(long)]
    k: Option<u32>,
    /// Zero-based position of the vector in the basis export order.
    #[arg(long)]
    index: Option<usize>,
    /// Points file: one point per line, 3 columns (chi theta phi) or
    /// 4 columns (x y z w); blank lines and #-comments are skipped.
    #[arg(long)]
    points: PathBuf,
    /// Evaluate the normalized mode instead of the unnormalized one.
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Mode index "k,l,m".
    #[arg(long)]
    mode: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// orthonormality | harmonicity | helmholtz | invariance | table1 | ikeda
    #[arg(long)]
    suite: String,
    /// Largest wave number, where the suite takes one.
    #[arg(long)]
    kmax: Option<u32>,
    /// Largest prism parameter n (ikeda suite).
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Largest lens order p (invariance/orthonormality suites).
    #[arg(long = "p-max")]
    p_max: Option<u32>,
    /// Seed for the sampled points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses the CLI and runs it, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success; everything
            // else is a usage error.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

struct UsageError(String);

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

fn dispatch(cli: Cli) -> Result<i32, UsageError> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Basis(args) => cmd_basis(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Poly(args) => cmd_poly(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<i32, UsageError> {
    if args.kmax > 10_000 {
        return Err(UsageError("--kmax must be at most 10000".into()));
    }
    let space = args.space.0;
    let table = spectrum(&space, args.kmax);
    let text = match args.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = table
                .iter()
                .map(|(k, m)| {
                    serde_json::json!({
                        "k": k,
                        "eigenvalue": Spectrum::eigenvalue(k),
                        "multiplicity": m,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "space": space.to_string(),
                "entries": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("spectrum JSON");
            s.push('\n');
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_basis(args: BasisArgs) -> Result<i32, UsageError> {
    if args.format == OutputFormat::Csv {
        return Err(UsageError(
            "basis exports are JSON; use --format json".into(),
        ));
    }
    let export = BasisExport::new(&args.space.0, args.k);
    let mut text = export.to_json();
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

fn parse_mode(text: &str) -> Result<ModeIndex, UsageError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(UsageError(format!("mode must be \"k,l,m\", got {text:?}")));
    }
    let numbers: Result<Vec<i64>, _> = parts.iter().map(|p| p.parse::<i64>()).collect();
    let numbers = numbers.map_err(|e| UsageError(format!("invalid mode {text:?}: {e}")))?;
    ModeIndex::new(numbers[0], numbers[1], numbers[2])
        .map_err(|e| UsageError(format!("invalid mode {text:?}: {e}")))
}

/// Parses a points file into toroidal points; 3 columns are (χ, θ, φ), 4 are
/// Cartesian (x, y, z, w) which must be unit norm.
fn parse_points(path: &PathBuf) -> Result<Vec<ToroidalPoint>, UsageError> {
    let content = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (line_number, line) in content.lines().enumerate() {
        let line_number = line_number + 1;
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        let values: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values =
            values.map_err(|e| UsageError(format!("line {line_number}: malformed number: {e}")))?;
        let point = match values.len() {
            3 => ToroidalPoint::new(values[0], values[1], values[2])
                .map_err(|e| UsageError(format!("line {line_number}: {e}")))?,
            4 => from_cartesian(&CartesianPoint::new(
                values[0], values[1], values[2], values[3],
            ))
            .map_err(|e| UsageError(format!("line {line_number}: {e}")))?,
            n => {
                return Err(UsageError(format!(
                    "line {line_number}: expected 3 or 4 columns, found {n}"
                )))
            }
        };
        points.push(point);
    }
    Ok(points)
}

fn cmd_eval(args: EvalArgs) -> Result<i32, UsageError> {
    let points = parse_points(&args.points)?;
    let values: Vec<f64> = match (&args.mode, args.space) {
        (Some(mode_text), None) => {
            let idx = parse_mode(mode_text)?;
            points
                .iter()
                .map(|p| {
                    if args.normalized {
                        mode_normalized(&idx, p)
                    } else {
                        mode_unnormalized(&idx, p)
                    }
                })
                .collect()
        }
        (None, Some(space)) => {
            let k = args.k.expect("clap enforces --k with --space");
            let index = args.index.expect("clap enforces --index with --space");
            let basis = space.0.basis(k);
            let vector = basis.get(index).ok_or_else(|| {
                UsageError(format!(
                    "--index {index} out of range: basis of {} at k={k} has {} vectors",
                    space.0,
                    basis.len()
                ))
            })?;
            let f = vector.function();
            points.iter().map(|p| f.value(p)).collect()
        }
        _ => {
            return Err(UsageError(
                "exactly one of --mode or --space/--k/--index is required".into(),
            ))
        }
    };
    let mut text = String::new();
    for v in values {
        // 17 significant digits: enough to reproduce the f64 exactly.
        writeln!(text, "{v:.16e}").expect("writing to string");
    }
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_poly(args: PolyArgs) -> Result<i32, UsageError> {
    let idx = parse_mode(&args.mode)?;
    let mut text = to_polynomial(&idx).to_json();
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, UsageError> {
    let seed = args.seed;
    let report = match args.suite.as_str() {
        "orthonormality" => verify_orthonormality(args.kmax.unwrap_or(12), seed),
        "harmonicity" => verify_harmonicity(args.kmax.unwrap_or(12), seed),
        "helmholtz" => verify_helmholtz(args.kmax.unwrap_or(8), seed),
        "invariance" => verify_invariance(
            args.kmax.unwrap_or(10),
            args.p_max.unwrap_or(9),
            args.n_max.unwrap_or(4),
            seed,
        ),
        "table1" => verify_table1(seed),
        "ikeda" => verify_ikeda(args.n_max.unwrap_or(6), args.kmax.unwrap_or(24), seed),
        other => {
            return Err(UsageError(format!(
                "unknown suite {other:?}; expected orthonormality | harmonicity | helmholtz | invariance | table1 | ikeda"
            )))
        }
    };
    let mut text = report.to_json();
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn params_of(entries: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Gram matrices of normalized B_k (k ≤ kmax) and of the quotient bases
/// (p ≤ 9, n ≤ 4, k ≤ min(kmax, 10)) must equal the identity within 1e-10.
fn verify_orthonormality(k_max: u32, seed: u64) -> VerificationReport {
    let mut worst = 0.0f64;
    let rule = build_rule(k_max);
    for k in 0..=k_max {
        let functions: Vec<_> = enumerate_basis(k)
            .into_iter()
            .map(crate::modes::ModeFunction::normalized)
            .collect();
        worst = worst.max(max_identity_deviation(&gram_matrix(&functions, &rule)));
    }
    let quotient_k_max = k_max.min(10);
    let quotient_rule = build_rule(quotient_k_max);
    let mut spaces: Vec<QuotientSpace> = reference_lens_spectra()
        .iter()
        .skip(1)
        .map(|row| QuotientSpace::lens(row.p, row.q).expect("table rows are valid"))
        .collect();
    for n in 1..=4 {
        spaces.push(QuotientSpace::prism(n).expect("n >= 1"));
    }
    for space in spaces {
        for k in 0..=quotient_k_max {
            let functions: Vec<_> = space.basis(k).iter().map(|v| v.function()).collect();
            if functions.is_empty() {
                continue;
            }
            worst = worst.max(max_identity_deviation(&gram_matrix(
                &functions,
                &quotient_rule,
            )));
        }
    }
    VerificationReport {
        suite: "orthonormality".into(),
        params: params_of(&[
            ("kmax", serde_json::json!(k_max)),
            ("p_max", serde_json::json!(9)),
            ("n_max", serde_json::json!(4)),
            ("tolerance", serde_json::json!(1e-10)),
        ]),
        max_residual: worst,
        pass: worst <= 1e-10,
        seed,
    }
}

/// Every mode polynomial with k ≤ kmax must be homogeneous of degree k with
/// exactly zero Laplacian. The residual is symbolic, hence exactly 0 or 1.
fn verify_harmonicity(k_max: u32, seed: u64) -> VerificationReport {
    let mut failures = 0u64;
    for k in 0..=k_max {
        for idx in enumerate_basis(k) {
            let poly = to_polynomial(&idx);
            if !crate::polynomial::is_homogeneous_harmonic(&poly, k) {
                failures += 1;
            }
        }
    }
    VerificationReport {
        suite: "harmonicity".into(),
        params: params_of(&[("kmax", serde_json::json!(k_max))]),
        max_residual: failures as f64,
        pass: failures == 0,
        seed,
    }
}

/// Finite-difference Helmholtz residuals at seeded interior points: ≤ 1e-2 at
/// h = 1e-3, with second-order decay (ratio in [3.5, 4.5]) under h → h/2.
fn verify_helmholtz(k_max: u32, seed: u64) -> VerificationReport {
    let h = 1e-3;
    let points = random_points(100, seed, 0.3);
    let mut worst = 0.0f64;
    let mut pass = true;
    for k in 0..=k_max {
        for idx in enumerate_basis(k) {
            // Track the largest-residual point; the decay ratio is measured
            // there, safely above the stencil's rounding floor.
            let mut peak: Option<(&ToroidalPoint, f64)> = None;
            for p in &points {
                let r = helmholtz_residual(&idx, p, h).expect("points are interior");
                worst = worst.max(r.abs());
                if peak.is_none_or(|(_, best)| r.abs() > best.abs()) {
                    peak = Some((p, r));
                }
            }
            let (peak_point, coarse) = peak.expect("at least one point");
            if coarse.abs() >= 1e-9 {
                let fine = helmholtz_residual(&idx, peak_point, h / 2.0).expect("interior");
                let ratio = coarse / fine;
                if !(3.5..=4.5).contains(&ratio) {
                    pass = false;
                }
            }
        }
    }
    if worst > 1e-2 {
        pass = false;
    }
    VerificationReport {
        suite: "helmholtz".into(),
        params: params_of(&[
            ("kmax", serde_json::json!(k_max)),
            ("h", serde_json::json!(h)),
            ("points", serde_json::json!(100)),
            ("tolerance", serde_json::json!(1e-2)),
        ]),
        max_residual: worst,
        pass,
        seed,
    }
}

/// Every emitted basis vector must be pointwise invariant under its space's
/// generator(s) within 1e-10 at 100 seeded points.
fn verify_invariance(k_max: u32, p_max: u32, n_max: u32, seed: u64) -> VerificationReport {
    let points = random_points(100, seed, 0.0);
    let mut worst = 0.0f64;
    let mut spaces = Vec::new();
    for p in 2..=p_max {
        for q in 1..p {
            if let Ok(space) = QuotientSpace::lens(i64::from(p), i64::from(q)) {
                spaces.push(space);
            }
        }
    }
    for n in 1..=n_max {
        spaces.push(QuotientSpace::prism(i64::from(n)).expect("n >= 1"));
    }
    for space in spaces {
        for k in 0..=k_max {
            for vector in space.basis(k) {
                worst = worst.max(invariance_residual(&space, &vector, &points));
            }
        }
    }
    VerificationReport {
        suite: "invariance".into(),
        params: params_of(&[
            ("kmax", serde_json::json!(k_max)),
            ("p_max", serde_json::json!(p_max)),
            ("n_max", serde_json::json!(n_max)),
            ("points", serde_json::json!(100)),
            ("tolerance", serde_json::json!(1e-10)),
        ]),
        max_residual: worst,
        pass: worst <= 1e-10,
        seed,
    }
}

/// All 13×15 reference multiplicities, exact integer equality.
fn verify_table1(seed: u64) -> VerificationReport {
    let mut failures = 0u64;
    let mut checked = 0u64;
    for row in reference_lens_spectra() {
        for (k, &expected) in row.multiplicities.iter().enumerate() {
            checked += 1;
            let got = lens_multiplicity(row.p, row.q, k as u32).expect("table rows are valid");
            if got != expected {
                failures += 1;
            }
        }
    }
    VerificationReport {
        suite: "table1".into(),
        params: params_of(&[("entries", serde_json::json!(checked))]),
        max_residual: failures as f64,
        pass: failures == 0,
        seed,
    }
}

/// prism_multiplicity must equal Ikeda's closed form for n ≤ n_max, k ≤ kmax
/// (and be zero for odd k).
fn verify_ikeda(n_max: u32, k_max: u32, seed: u64) -> VerificationReport {
    let mut failures = 0u64;
    for n in 1..=i64::from(n_max) {
        for k in 0..=k_max {
            let enumerated = prism_multiplicity(n, k).expect("n >= 1");
            let closed_form = ikeda_multiplicity(n, k).expect("n >= 1");
            if enumerated != closed_form {
                failures += 1;
            }
        }
    }
    VerificationReport {
        suite: "ikeda".into(),
        params: params_of(&[
            ("n_max", serde_json::json!(n_max)),
            ("kmax", serde_json::json!(k_max)),
        ]),
        max_residual: failures as f64,
        pass: failures == 0,
        seed,
    }
}

/// The group-averaged character trace; used by tests and kept here so the
/// trace oracle and the CLI share one definition.
pub fn averaged_trace(p: u32, q: u32, k: u32) -> f64 {
    let generator =
        crate::geometry::TorusIsometry::from_fractions(1, i64::from(p), i64::from(q), i64::from(p));
    let total: f64 = (0..p).map(|j| character_trace(&generator.pow(j), k)).sum();
    total / f64::from(p)
}
