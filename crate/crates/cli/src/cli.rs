//! Argument parsing and the three commands.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stasheff_core::assoc::{build_complex_capped, build_spec, catalan, grid_points, vertices, DEFAULT_MAX_N};
use stasheff_core::cubic::verify_complex;
use stasheff_core::engine::phi;
use stasheff_core::paths::Bump;

use crate::json;
use crate::suites::{self, Settings, Suite};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "stasheff", version, about = "Associahedra as cubic complexes and A-infinity checks for path concatenation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the polytope K_n (vertices, center, facets) and optionally the complex K(n).
    Build(BuildArgs),
    /// Run verification suites and write a JSON report. The cubic suite
    /// checks complexes pairwise only up to K(5).
    Verify(VerifyArgs),
    /// Tabulate phi_n on the rational grid of K_n.
    DumpPhi(DumpPhiArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest n for which K(n) is built.
    #[arg(long, env = "AINFTY_MAX_N", default_value_t = DEFAULT_MAX_N)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub n: usize,
    /// Also build the cubic complex K(n).
    #[arg(long)]
    pub complex: bool,
    /// Run the pairwise complex verification on K(n) (slow beyond n = 5).
    #[arg(long, requires = "complex")]
    pub check: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BumpArg {
    Exp,
    ExpSquared,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Dimension of the target R^d.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// (rho, sigma) pairs per facet and points of K_n per arity.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    pub tol_point: f64,
    #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
    pub tol_deriv: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Denominator of the rational sample lattices.
    #[arg(long, default_value_t = 8)]
    pub den: u32,
    #[arg(long, value_enum, default_value_t = BumpArg::Exp)]
    pub bump: BumpArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct DumpPhiArgs {
    #[arg(long)]
    pub n: usize,
    /// Grid denominator.
    #[arg(long, default_value_t = 4)]
    pub den: u32,
    #[command(flatten)]
    pub common: Common,
}

/// Exit statuses: 0 pass, 1 verification failure, 2 usage error.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
        }
    }
}

impl From<stasheff_core::Error> for Failure {
    fn from(e: stasheff_core::Error) -> Self {
        match e {
            stasheff_core::Error::Usage(m) => Failure::Usage(m),
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn emit(common: &Common, v: &Value) -> Result<(), Failure> {
    let text = json::to_string(v);
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

pub fn build(args: &BuildArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return usage("--n must be at least 1");
    }
    let spec = build_spec(args.n)?;
    let mut problems = Vec::new();
    if args.n >= 2 && spec.vertices().len() as u64 != catalan(args.n - 1) {
        problems.push(format!("{} vertices, expected {}", spec.vertices().len(), catalan(args.n - 1)));
    }
    let mut out = json!({ "command": "build", "polytope": json::polytope(&spec) });
    if args.complex {
        if args.n > args.common.max_n {
            return usage(format!("--n {} exceeds --max-n {}", args.n, args.common.max_n));
        }
        let k = build_complex_capped(args.n, args.common.max_n)?;
        let mut check = json!({ "dim": k.complex.dim(), "boundary_euler": k.boundary.euler_characteristic() });
        if k.complex.dim() != args.n as isize - 2 {
            problems.push(format!("complex has dimension {}", k.complex.dim()));
        }
        if args.check {
            let rep = verify_complex(args.n, k.complex.cells());
            check["pairs_checked"] = json!(rep.pairs_checked);
            check["violations"] = json!(rep.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>());
            problems.extend(rep.violations.iter().map(|v| v.to_string()));
        }
        out["complex"] = json::complex(&k.complex);
        out["check"] = check;
    }
    emit(&args.common, &out)?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(problems.join("\n")))
    }
}

pub fn settings(args: &VerifyArgs) -> Result<Settings, Failure> {
    if [args.tol_point, args.tol_deriv].iter().any(|t| t.is_nan() || *t <= 0.0) {
        return usage("tolerances must be positive");
    }
    if args.n < 1 {
        return usage("--n must be at least 1");
    }
    if args.d < 1 {
        return usage("--d must be at least 1");
    }
    if args.samples < 1 {
        return usage("--samples must be at least 1");
    }
    if args.den < 1 {
        return usage("--den must be at least 1");
    }
    if args.n > args.common.max_n {
        return usage(format!("--n {} exceeds --max-n {}", args.n, args.common.max_n));
    }
    Ok(Settings {
        n: args.n,
        d: args.d,
        samples: args.samples,
        tol_point: args.tol_point,
        tol_deriv: args.tol_deriv,
        seed: args.seed,
        den: args.den,
        max_n: args.common.max_n,
        bump: match args.bump {
            BumpArg::Exp => Bump::Exp,
            BumpArg::ExpSquared => Bump::ExpSquared,
        },
    })
}

/// The full report; deterministic in the settings.
pub fn verify_report(suite: Suite, s: &Settings) -> (Value, Vec<Value>) {
    let reports = suites::run(suite, s);
    let failures: Vec<Value> = reports.iter().flat_map(|r| r.failures().cloned()).collect();
    let pass = reports.iter().all(|r| r.pass());
    let v = json!({
        "command": "verify",
        "suite": suite.name(),
        "seed": s.seed,
        "config": s.to_json(),
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "pass": pass,
    });
    (v, failures)
}

pub fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let s = settings(args)?;
    let (report, failures) = verify_report(args.suite, &s);
    emit(&args.common, &report)?;
    if failures.is_empty() {
        Ok(())
    } else {
        let lines: Vec<String> = failures.iter().map(Value::to_string).collect();
        Err(Failure::Verification(lines.join("\n")))
    }
}

pub fn dump_phi_table(n: usize, den: u32) -> Result<Value, Failure> {
    let rows = grid_points(n, den)
        .iter()
        .map(|t| Ok(json!({ "t": json::rat_vec(t), "phi": json::rationals(phi(n, t)?.r()) })))
        .collect::<Result<Vec<Value>, Failure>>()?;
    Ok(json!({ "n": n, "den": den, "vertices": vertices(n).iter().map(json::rat_vec).collect::<Vec<_>>(), "rows": rows }))
}

pub fn dump_phi(args: &DumpPhiArgs) -> Result<(), Failure> {
    if args.n < 2 || args.n > args.common.max_n {
        return usage(format!("--n must lie in 2..={}", args.common.max_n));
    }
    if args.den < 1 {
        return usage("--den must be at least 1");
    }
    let table = dump_phi_table(args.n, args.den)?;
    emit(&args.common, &table)
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::DumpPhi(a) => dump_phi(a),
    }
}

/// Parses `std::env::args`, runs, reports on stderr and maps to an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Verification(m) => eprintln!("verification failed:\n{m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
