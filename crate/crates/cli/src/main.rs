use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;

use sixforms::invariants::coords::{hat_map, PrimitiveCoords};
use sixforms::invariants::{classification_report, SymplecticForm, Tolerance};
use sixforms::io::{form_from_json, read_json, to_json_string, write_atomic};
use sixforms::scalar::Rational;
use sixforms::verify::{self, Report, Suite};

mod data;
mod flow;

#[derive(Parser)]
#[command(
    name = "sixforms",
    version,
    about = "Three-forms on symplectic six-space: orbits, identities, flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a 3-form under GL(6), and under Sp(6) when ω is given.
    Classify {
        /// Form JSON file, or a bundled normal form such as gl/O- or sp/O0+.
        form: String,
        /// Symplectic form JSON file ("standard" for e12 + e34 + e56).
        #[arg(long)]
        omega: Option<String>,
        /// Relative tolerance for the float backend.
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized verification suite.
    Verify {
        /// identities, lemma-bc, gradients, nijenhuis or hessian.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        /// Directory for <suite>.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace Ĥ by Ĥ + 1 in lemma-bc; a negative control.
        #[arg(long, hide = true)]
        corrupt_hat: bool,
    },
    /// Integrate the reduced flow on a Lie algebra.
    Flow(flow::FlowArgs),
    /// The Lagrangian-foliation example.
    Hessian {
        #[command(subcommand)]
        action: HessianAction,
    },
}

#[derive(Subcommand)]
enum HessianAction {
    /// Grid checks over random base metrics.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of base metrics.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Classify { form, omega, tol, out } => classify(&form, omega.as_deref(), tol, out.as_deref()),
        Command::Verify {
            suite,
            seed,
            trials,
            out,
            corrupt_hat,
        } => {
            let suite: Suite = suite.parse()?;
            let report = if corrupt_hat {
                if suite != Suite::LemmaBc {
                    bail!("--corrupt-hat only applies to lemma-bc");
                }
                let n = trials.unwrap_or(suite.default_trials());
                verify::lemma_bc_with(seed, n, &corrupted_hat)?
            } else {
                verify::run(suite, seed, trials)?
            };
            finish_report(&report, out.as_deref())
        }
        Command::Flow(args) => flow::run(&args),
        Command::Hessian {
            action: HessianAction::Verify { seed, trials, out },
        } => finish_report(&verify::run(Suite::Hessian, seed, trials)?, out.as_deref()),
    }
}

fn corrupted_hat(c: &PrimitiveCoords<Rational>) -> PrimitiveCoords<Rational> {
    let mut h = hat_map(c);
    h.0[7] += Rational::from_integer(1.into());
    h
}

fn finish_report(report: &Report, out: Option<&Path>) -> Result<ExitCode> {
    let text = to_json_string(&report.to_json());
    if let Some(dir) = out {
        write_atomic(&dir.join(format!("{}.json", report.suite)), text.as_bytes())?;
    }
    print!("{text}");
    if report.passed {
        return Ok(ExitCode::SUCCESS);
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    eprintln!("{} failed: {}", report.suite, failed.join(", "));
    if let Some(cx) = &report.counterexample {
        eprintln!("counterexample: {cx}");
    }
    Ok(ExitCode::from(1))
}

fn classify(form: &str, omega: Option<&str>, tol: Option<f64>, out: Option<&Path>) -> Result<ExitCode> {
    let phi = form_from_json(&data::form_json(form)?, 3).with_context(|| format!("reading form {form}"))?;
    if phi.value.grade() != 3 {
        bail!("expected a 3-form, got a {}-form", phi.value.grade());
    }
    let omega = match omega {
        Some(o) => {
            let w = form_from_json(&data::form_json(o)?, 2).with_context(|| format!("reading omega {o}"))?;
            Some((SymplecticForm::new(w.value)?, w.exact))
        }
        None => None,
    };
    let mut t = Tolerance::default();
    if let Some(x) = tol {
        t.rel = x;
        t.rank = x;
    }
    let exact = phi.exact && omega.as_ref().is_none_or(|(_, e)| *e);
    let report = if exact {
        classification_report(&phi.value, omega.as_ref().map(|(w, _)| w), t)?
    } else {
        let w = match &omega {
            Some((w, _)) => Some(SymplecticForm::new(w.omega().to_f64())?),
            None => None,
        };
        classification_report(&phi.value.to_f64(), w.as_ref(), t)?
    };
    let mut v = serde_json::to_value(&report)?;
    v["backend"] = Value::from(if exact { "rational" } else { "f64" });
    let text = to_json_string(&v);
    if let Some(path) = out {
        write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

/// Reads JSON from a path.
pub(crate) fn read_file(path: &str) -> Result<Value> {
    Ok(read_json(Path::new(path))?)
}
