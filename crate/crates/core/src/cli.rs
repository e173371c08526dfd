//! Command-line front end. Every subcommand writes one JSON document.
//!
//! Exit codes: 0 when the check passes, 2 when it runs but fails, 1 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::adjoint::{verify_chevalley, InvariantSet};
use crate::cubic::{cubic_report, CubicForm};
use crate::error::{Error, Result};
use crate::harness::{verify, verify_suite, VerificationConfig, SUITE_STEP};
use crate::periods::{build_homology, raw_period_matrix, PeriodConfig, PeriodReport};
use crate::rootsys::{build_root_system, lie_check, CartanType};
use crate::spectral::{curve_info, CurveSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Relative tolerance for the cubic's symmetry and the agreement of its two evaluators.
pub const CUBIC_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "hitchin-cubic", version, about = "Residue-formula cubic of SL2 Hitchin systems and its numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Io {
    /// JSON input file
    #[arg(long)]
    input: PathBuf,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormArg {
    A,
    B,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counting identities of a root system
    LieCheck {
        #[arg(long = "type")]
        type_name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jacobian of the adjoint quotient against the product of positive roots
    AdjointCheck {
        #[arg(long = "type")]
        type_name: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Genus, branch points and genericity of a spectral curve
    CurveInfo {
        #[command(flatten)]
        io: Io,
    },
    /// Cubic form in the leaf basis
    Cubic {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = FormArg::Both)]
        form: FormArg,
    },
    /// Period matrix with its symmetry and positivity certificate
    Periods {
        #[command(flatten)]
        io: Io,
    },
    /// Compares the cubic with the finite-difference derivative of the period matrix
    Verify {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    detail: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UnsupportedType(_) => "UnsupportedType",
        Error::NotARoot => "NotARoot",
        Error::ClosureOverflow(_) => "ClosureOverflow",
        Error::SampleOnHyperplane(_) => "SampleOnHyperplane",
        Error::InvalidDivisor(_) => "InvalidDivisor",
        Error::InvalidInput(_) => "InvalidInput",
        Error::GenericityViolation { .. } => "GenericityViolation",
        Error::NonConvergence(_) => "NonConvergence",
        Error::DerivativeVanishes(_) => "DerivativeVanishes",
        Error::ContourTooLarge(_) => "ContourTooLarge",
        Error::QuadratureStall { .. } => "QuadratureStall",
        Error::IllConditioned(_) => "IllConditioned",
        Error::SymmetryFail(_) => "SymmetryFail",
        Error::PositivityFail(_) => "PositivityFail",
        Error::MatchingAmbiguous(_) => "MatchingAmbiguous",
        Error::StepTooLarge(_) => "StepTooLarge",
        Error::Json(_) => "Json",
        Error::Io(_) => "Io",
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => fs::write(p, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn with_pass(report: impl Serialize, pass: bool) -> Result<Value> {
    let mut v = serde_json::to_value(report)?;
    if let Value::Object(map) = &mut v {
        map.insert("pass".into(), Value::Bool(pass));
    }
    Ok(v)
}

fn execute(cmd: Command) -> Result<(Value, bool, Option<PathBuf>)> {
    match cmd {
        Command::LieCheck { type_name, out } => {
            let rep = lie_check(type_name.parse::<CartanType>()?)?;
            let pass = rep.identities.all_hold();
            Ok((with_pass(rep, pass)?, pass, out))
        }
        Command::AdjointCheck { type_name, samples, seed, out } => {
            let rs = build_root_system(type_name.parse::<CartanType>()?)?;
            let inv = InvariantSet::new(&rs)?;
            let rep = verify_chevalley(&inv, &rs, samples, seed)?;
            let pass = rep.pass;
            Ok((serde_json::to_value(rep)?, pass, out))
        }
        Command::CurveInfo { io } => {
            let spec: CurveSpec = read_json(&io.input)?;
            let info = curve_info(&spec)?;
            if let Some(v) = &info.violation {
                // still report the verdict, then fail as an input error
                emit(&serde_json::to_value(&info)?, io.out.as_deref())?;
                return Err(spec.build().err().unwrap_or_else(|| Error::InvalidInput(v.clone())));
            }
            Ok((serde_json::to_value(info)?, true, io.out))
        }
        Command::Cubic { io, form } => {
            let curve = read_json::<CurveSpec>(&io.input)?.build()?;
            let form = match form {
                FormArg::A => CubicForm::A,
                FormArg::B => CubicForm::B,
                FormArg::Both => CubicForm::Both,
            };
            let rep = cubic_report(&curve, form)?;
            let pass = rep.symmetry_residual < CUBIC_TOL && rep.ab_residual.is_none_or(|r| r < CUBIC_TOL);
            Ok((with_pass(rep, pass)?, pass, io.out))
        }
        Command::Periods { io } => {
            let cfg: VerificationConfig = read_json(&io.input)?;
            let curve = cfg.curve.build()?;
            let pcfg: PeriodConfig = cfg.period_config();
            let pd = raw_period_matrix(&curve, &build_homology(curve.branch_points())?, &pcfg)?;
            let pass = pd.sym_residual < pcfg.sym_tol && pd.min_imag_eig > 0.0;
            Ok((with_pass(PeriodReport::from(&pd), pass)?, pass, io.out))
        }
        Command::Verify { io } => {
            let cfg: VerificationConfig = read_json(&io.input)?;
            match cfg.suite_points {
                Some(n) if n > 1 => {
                    let rep = verify_suite(&cfg, n, SUITE_STEP)?;
                    let pass = rep.pass;
                    Ok((serde_json::to_value(rep)?, pass, io.out))
                }
                _ => {
                    let rep = verify(&cfg)?;
                    let pass = rep.pass;
                    Ok((serde_json::to_value(rep)?, pass, io.out))
                }
            }
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_ERROR,
            };
        }
    };
    let outcome = execute(cli.command).and_then(|(value, pass, out)| {
        emit(&value, out.as_deref())?;
        Ok(pass)
    });
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let report = ErrorReport { error: error_kind(&e), detail: e.to_string() };
            eprintln!("{}", serde_json::to_string(&report).unwrap_or_else(|_| e.to_string()));
            EXIT_ERROR
        }
    }
}
