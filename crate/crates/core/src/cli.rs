//! Command-line front end: JSON approximant documents and CSV data.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{error_curve, sup_error, SUP_SCAN};
use crate::brasil::{best_approx, frequency_limit, sweep, BestApproximation, Init, SolverOptions};
use crate::error::Error;
use crate::interp::{interpolate_unitary, NodeSet};
use crate::lawson::{aaa_lawson_cheb, LawsonOptions};
use crate::pade::{best_error_estimate, pade_error_bound, ChebQuotient, PadeApproximant};
use crate::unitary::{structural_checks_with, CheckReport, UnitaryBarycentric, UnitaryEval};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Grid for the unitarity and symmetry checks stored in documents.
const CHECK_GRID: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Best,
    InterpCheb,
    Lawson,
    Pade,
    ChebQuotient,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Best => "best",
            Method::InterpCheb => "interp-cheb",
            Method::Lawson => "lawson",
            Method::Pade => "pade",
            Method::ChebQuotient => "cheb-quotient",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleArrays {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl PoleArrays {
    fn from_poles(poles: &[Complex64]) -> Self {
        Self {
            re: poles.iter().map(|p| p.re).collect(),
            im: poles.iter().map(|p| p.im).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub unitarity_defect: f64,
    pub symmetry_defect: f64,
    pub stability_ok: bool,
}

impl From<CheckReport> for Checks {
    fn from(c: CheckReport) -> Self {
        Self {
            unitarity_defect: c.unitarity_defect,
            symmetry_defect: c.symmetry_defect,
            stability_ok: c.stability_ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximantDocument {
    pub schema_version: String,
    pub method: Method,
    pub n: usize,
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotated_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation_nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equioscillation_points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrema_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<PoleArrays>,
    pub max_error: f64,
    pub error_estimate: f64,
    pub pade_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    pub checks: Checks,
}

/// An approximant of any supported method, evaluable on `[-1, 1]`.
#[derive(Debug, Clone)]
pub enum Approximant {
    Barycentric(UnitaryBarycentric),
    Pade { pade: PadeApproximant, omega: f64 },
    ChebQuotient(ChebQuotient),
}

impl Approximant {
    fn with_eval<T>(&self, f: impl FnOnce(&dyn UnitaryEval) -> T) -> T {
        match self {
            Approximant::Barycentric(b) => f(b),
            Approximant::Pade { pade, omega } => f(&pade.scaled(*omega)),
            Approximant::ChebQuotient(q) => f(q),
        }
    }

    /// Poles in the `z` plane of `z -> r(z)` with `r(ix)` the approximant.
    pub fn poles(&self) -> crate::error::Result<Vec<Complex64>> {
        match self {
            Approximant::Barycentric(b) => b.poles(),
            Approximant::Pade { pade, omega } => Ok(pade.poles()?.into_iter().map(|p| p / *omega).collect()),
            Approximant::ChebQuotient(q) => q.poles(),
        }
    }

    pub fn checks(&self) -> crate::error::Result<CheckReport> {
        let poles = self.poles().ok();
        self.with_eval(|r| structural_checks_with(r, poles.as_deref(), CHECK_GRID))
    }

    pub fn sup_error(&self, omega: f64) -> crate::error::Result<f64> {
        self.with_eval(|r| sup_error(r, omega, SUP_SCAN).map(|e| e.0))
    }

    pub fn curve_csv(&self, omega: f64, m: usize) -> crate::error::Result<String> {
        let curve = self.with_eval(|r| error_curve(r, omega, m))?;
        let mut out = String::from("x,re_err,im_err,abs_err,phase_err\n");
        for row in &curve.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                row.x, row.re_err, row.im_err, row.abs_err, row.phase_err
            )
            .expect("writing to a String cannot fail");
        }
        Ok(out)
    }
}

/// A computed approximant with its document.
pub struct Solved {
    pub approximant: Approximant,
    pub document: ApproximantDocument,
}

fn base_document(method: Method, n: usize, omega: f64, approx: &Approximant) -> crate::error::Result<ApproximantDocument> {
    let (support_nodes, rotated_weights) = match approx {
        Approximant::Barycentric(b) => (Some(b.support_nodes().to_vec()), Some(b.rotated_weights().to_vec())),
        _ => (None, None),
    };
    Ok(ApproximantDocument {
        schema_version: SCHEMA_VERSION.into(),
        method,
        n,
        omega,
        support_nodes,
        rotated_weights,
        interpolation_nodes: None,
        equioscillation_points: None,
        extrema_values: None,
        poles: approx.poles().ok().map(|p| PoleArrays::from_poles(&p)),
        max_error: approx.sup_error(omega)?,
        error_estimate: best_error_estimate(n, omega),
        pade_bound: pade_error_bound(n, omega),
        iterations: None,
        converged: None,
        deviation: None,
        checks: approx.checks()?.into(),
    })
}

pub fn best_document(best: &BestApproximation) -> crate::error::Result<Solved> {
    let approximant = Approximant::Barycentric(best.approximant.clone());
    let mut document = base_document(Method::Best, best.n(), best.omega(), &approximant)?;
    document.interpolation_nodes = Some(best.interpolation_nodes.clone());
    document.equioscillation_points = Some(best.equioscillation_points.clone());
    document.extrema_values = Some(best.extrema_values.clone());
    document.max_error = best.max_error;
    document.iterations = Some(best.iterations);
    document.converged = Some(best.converged);
    document.deviation = Some(best.deviation);
    Ok(Solved { approximant, document })
}

fn check_window(n: usize, omega: f64) -> crate::error::Result<()> {
    let limit = frequency_limit(n);
    if !(omega > 0.0) || !omega.is_finite() || omega >= limit {
        return Err(Error::InfeasibleFrequency { n, omega, limit });
    }
    Ok(())
}

/// Computes `method` at `(n, omega)` with default options.
pub fn solve(method: Method, n: usize, omega: f64) -> crate::error::Result<Solved> {
    match method {
        Method::Best => best_document(&best_approx(n, omega, &SolverOptions::default())?),
        Method::InterpCheb => {
            check_window(n, omega)?;
            let interp = interpolate_unitary(omega, &NodeSet::chebyshev(n))?;
            let approximant = Approximant::Barycentric(interp.approximant);
            let mut document = base_document(method, n, omega, &approximant)?;
            document.interpolation_nodes = Some(interp.nodes);
            Ok(Solved { approximant, document })
        }
        Method::Lawson => lawson_document(n, omega, &LawsonOptions::default()),
        Method::Pade => {
            if !(omega > 0.0) || !omega.is_finite() {
                return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
            }
            let approximant = Approximant::Pade {
                pade: PadeApproximant::new(n),
                omega,
            };
            let document = base_document(method, n, omega, &approximant)?;
            Ok(Solved { approximant, document })
        }
        Method::ChebQuotient => {
            let approximant = Approximant::ChebQuotient(ChebQuotient::new(n, omega)?);
            let document = base_document(method, n, omega, &approximant)?;
            Ok(Solved { approximant, document })
        }
    }
}

fn lawson_document(n: usize, omega: f64, opts: &LawsonOptions) -> crate::error::Result<Solved> {
    let res = aaa_lawson_cheb(n, omega, opts)?;
    let approximant = Approximant::Barycentric(res.approximant);
    let mut document = base_document(Method::Lawson, n, omega, &approximant)?;
    document.iterations = Some(res.iterations);
    Ok(Solved { approximant, document })
}

/// Rebuilds the approximant a document describes.
pub fn approximant_from_document(doc: &ApproximantDocument) -> crate::error::Result<Approximant> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!("unsupported schema version {}", doc.schema_version)));
    }
    match doc.method {
        Method::Best | Method::InterpCheb | Method::Lawson => {
            let (Some(s), Some(v)) = (&doc.support_nodes, &doc.rotated_weights) else {
                return Err(Error::InvalidInput("document lacks support nodes or weights".into()));
            };
            if s.len() != doc.n + 1 {
                return Err(Error::InvalidInput(format!("degree {} needs {} support nodes", doc.n, doc.n + 1)));
            }
            Ok(Approximant::Barycentric(UnitaryBarycentric::new(doc.omega, s.clone(), v.clone())?))
        }
        Method::Pade => Ok(Approximant::Pade {
            pade: PadeApproximant::new(doc.n),
            omega: doc.omega,
        }),
        Method::ChebQuotient => Ok(Approximant::ChebQuotient(ChebQuotient::new(doc.n, doc.omega)?)),
    }
}

#[derive(Debug, Parser)]
#[command(name = "uniexp", version, about = "Unitary rational approximation of exp(i omega x) on [-1, 1]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unitary best approximation.
    Best(BestArgs),
    /// Unitary interpolant at the 2n+1 Chebyshev nodes.
    Interp(SolveArgs),
    /// Lawson weighted least-squares fit with Chebyshev support nodes.
    Lawson(LawsonArgs),
    /// Diagonal Padé approximant scaled to the frequency.
    Pade(SolveArgs),
    /// Error curve as CSV.
    Curve(CurveArgs),
    /// Error versus frequency as CSV.
    Sweep(SweepArgs),
    /// Poles of the best approximation for several frequencies as CSV.
    Poles(PolesArgs),
    /// Unitarity, symmetry, stability and irreducibility checks as JSON.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Auto,
    Chebyshev,
    Uniform,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub n: usize,
    #[arg(allow_negative_numbers = true)]
    pub omega: f64,
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BestArgs {
    pub n: usize,
    #[arg(allow_negative_numbers = true)]
    pub omega: f64,
    /// Target relative deviation of the extrema.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Exponent of the interval rescaling.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = InitArg::Auto)]
    pub init: InitArg,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LawsonArgs {
    pub n: usize,
    #[arg(allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[arg(long, default_value_t = 50)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub stagnation_tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Read the approximant from a JSON document.
    #[arg(long, conflicts_with_all = ["method", "n", "omega"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, requires_all = ["n", "omega"])]
    pub method: Option<Method>,
    #[arg(long, requires = "omega")]
    pub n: Option<usize>,
    #[arg(long, requires = "n", allow_negative_numbers = true)]
    pub omega: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of samples.
    #[arg(short, long, default_value_t = 1000)]
    pub m: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub n: usize,
    #[arg(allow_negative_numbers = true)]
    pub omega_start: f64,
    #[arg(allow_negative_numbers = true)]
    pub omega_end: f64,
    pub steps: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "best")]
    pub methods: Vec<Method>,
    /// Solve every frequency from scratch, in parallel.
    #[arg(long)]
    pub cold: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolesArgs {
    pub n: usize,
    /// Comma-separated frequencies.
    #[arg(value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub omegas: Vec<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = CHECK_GRID)]
    pub grid: usize,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InfeasibleFrequency { .. } => EXIT_INFEASIBLE,
            Error::InvalidInput(_) => EXIT_USAGE,
            Error::NonConvergence { .. } | Error::RoundingLimited { .. } => EXIT_NON_CONVERGENCE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn document_json(doc: &ApproximantDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn read_document(path: &Path) -> Result<ApproximantDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn resolve(source: &Source) -> Result<(Approximant, f64), Failure> {
    if let Some(path) = &source.input {
        let doc = read_document(path)?;
        return Ok((approximant_from_document(&doc)?, doc.omega));
    }
    let (Some(n), Some(omega)) = (source.n, source.omega) else {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "give --input or --n and --omega".into(),
        });
    };
    let method = source.method.unwrap_or(Method::Best);
    Ok((solve(method, n, omega)?.approximant, omega))
}

/// The best iterate carried by a non-convergence error.
fn failed_best(e: &Error) -> Option<&BestApproximation> {
    match e {
        Error::NonConvergence { best, .. } => Some(best),
        Error::RoundingLimited { source, .. } => failed_best(source),
        _ => None,
    }
}

fn cmd_best(args: &BestArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let opts = SolverOptions {
        eq_tolerance: args.tol,
        max_iterations: args.max_iter,
        rescale_exponent: args.gamma,
        init: match args.init {
            InitArg::Auto => Init::Auto,
            InitArg::Chebyshev => Init::Chebyshev,
            InitArg::Uniform => Init::UniformLimit,
        },
        ..SolverOptions::default()
    };
    match best_approx(args.n, args.omega, &opts) {
        Ok(best) => emit(args.json.as_deref(), &document_json(&best_document(&best)?.document), stdout),
        Err(e) => {
            if let Some(best) = failed_best(&e) {
                emit(args.json.as_deref(), &document_json(&best_document(best)?.document), stdout)?;
            }
            Err(e.into())
        }
    }
}

fn cmd_solve(method: Method, args: &SolveArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let solved = solve(method, args.n, args.omega)?;
    emit(args.json.as_deref(), &document_json(&solved.document), stdout)
}

fn cmd_lawson(args: &LawsonArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let opts = LawsonOptions {
        grid_size: args.grid,
        iterations: args.iterations,
        stagnation_tol: args.stagnation_tol,
    };
    let solved = lawson_document(args.n, args.omega, &opts)?;
    emit(args.json.as_deref(), &document_json(&solved.document), stdout)
}

fn cmd_curve(args: &CurveArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let (approx, omega) = resolve(&args.source)?;
    let csv = approx.curve_csv(omega, args.m)?;
    emit(args.csv.as_deref(), &csv, stdout)
}

fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps)
            .map(|k| {
                if k + 1 == steps {
                    b
                } else {
                    a + (b - a) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

fn method_error(method: Method, n: usize, omega: f64) -> f64 {
    solve(method, n, omega).map(|s| s.document.max_error).unwrap_or(f64::NAN)
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    if args.steps == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "steps must be positive".into(),
        });
    }
    if args.omega_end < args.omega_start {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "omega_end must not be below omega_start".into(),
        });
    }
    let n = args.n;
    check_window(n, args.omega_start)?;
    check_window(n, args.omega_end)?;
    let omegas = linspace(args.omega_start, args.omega_end, args.steps);
    let mut methods = args.methods.clone();
    methods.sort();
    methods.dedup();
    let columns: Vec<Vec<f64>> = methods
        .iter()
        .map(|&method| {
            if method == Method::Best && !args.cold {
                sweep(n, &omegas, &SolverOptions::default())
                    .into_iter()
                    .map(|r| r.map(|b| b.max_error).unwrap_or(f64::NAN))
                    .collect()
            } else {
                omegas.par_iter().map(|&w| method_error(method, n, w)).collect()
            }
        })
        .collect();
    let mut out = String::from("omega,method,max_error,estimate,pade_bound\n");
    let mut any_ok = false;
    for (k, &omega) in omegas.iter().enumerate() {
        for (method, col) in methods.iter().zip(&columns) {
            any_ok |= col[k].is_finite();
            writeln!(
                out,
                "{:.16e},{},{:.16e},{:.16e},{:.16e}",
                omega,
                method.name(),
                col[k],
                best_error_estimate(n, omega),
                pade_error_bound(n, omega)
            )
            .expect("writing to a String cannot fail");
        }
    }
    emit(args.csv.as_deref(), &out, stdout)?;
    if any_ok {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_NON_CONVERGENCE,
            message: "every sweep point failed".into(),
        })
    }
}

fn cmd_poles(args: &PolesArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let mut omegas = args.omegas.clone();
    omegas.sort_by(f64::total_cmp);
    for &w in &omegas {
        check_window(args.n, w)?;
    }
    let results: Vec<_> = omegas
        .par_iter()
        .map(|&w| best_approx(args.n, w, &SolverOptions::default()))
        .collect();
    let mut out = String::from("omega,j,re,im,re_scaled,im_scaled\n");
    let mut failure: Option<Failure> = None;
    for (&omega, res) in omegas.iter().zip(&results) {
        let best = match res {
            Ok(b) => b,
            Err(e) => match failed_best(e) {
                Some(b) => {
                    failure.get_or_insert(Failure {
                        code: EXIT_NON_CONVERGENCE,
                        message: e.to_string(),
                    });
                    b
                }
                None => {
                    failure.get_or_insert(Failure {
                        code: EXIT_NON_CONVERGENCE,
                        message: e.to_string(),
                    });
                    continue;
                }
            },
        };
        let mut poles = best.approximant.poles()?;
        poles.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        for (j, p) in poles.iter().enumerate() {
            writeln!(
                out,
                "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                omega,
                j + 1,
                p.re,
                p.im,
                omega * p.re,
                omega * p.im
            )
            .expect("writing to a String cannot fail");
        }
    }
    emit(args.csv.as_deref(), &out, stdout)?;
    failure.map_or(Ok(()), Err)
}

#[derive(Serialize)]
struct CheckOutput {
    unitarity_defect: f64,
    symmetry_defect: f64,
    stability_ok: bool,
    irreducible_ok: bool,
}

fn cmd_check(args: &CheckArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let (approx, _) = resolve(&args.source)?;
    let poles = approx.poles().ok();
    let report = approx.with_eval(|r| structural_checks_with(r, poles.as_deref(), args.grid))?;
    let out = CheckOutput {
        unitarity_defect: report.unitarity_defect,
        symmetry_defect: report.symmetry_defect,
        stability_ok: report.stability_ok,
        irreducible_ok: report.irreducible_ok,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("reports serialize");
    s.push('\n');
    emit(None, &s, stdout)
}

fn thread_cap() -> Option<usize> {
    std::env::var("UNIEXP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
}

fn dispatch(cli: &Cli, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    match &cli.command {
        Command::Best(a) => cmd_best(a, stdout),
        Command::Interp(a) => cmd_solve(Method::InterpCheb, a, stdout),
        Command::Lawson(a) => cmd_lawson(a, stdout),
        Command::Pade(a) => cmd_solve(Method::Pade, a, stdout),
        Command::Curve(a) => cmd_curve(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Poles(a) => cmd_poles(a, stdout),
        Command::Check(a) => cmd_check(a, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    // Output is buffered so that worker threads never touch the caller's
    // writer.
    let mut buf = Vec::new();
    let result = match thread_cap() {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
            Err(e) => Err(Failure {
                code: EXIT_FAILURE,
                message: format!("thread pool: {e}"),
            }),
        },
        None => dispatch(&cli, &mut buf),
    };
    let result = stdout
        .write_all(&buf)
        .and_then(|()| stdout.flush())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))
        .and(result);
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("uniexp: {}", f.message);
            f.code
        }
    }
}
