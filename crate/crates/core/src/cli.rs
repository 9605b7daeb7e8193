//! Command-line front end. Every command writes JSON lines to stdout.
//!
//! Exit codes: 0 when everything passes or is valid, 1 on a counterexample
//! or failed check, 2 on usage or validation errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::catalog;
use crate::convolution::{ConvAlgebra, LFunction};
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, LatticeDoc};
use crate::relstruct::{RelStructure, StructureDoc};
use crate::suite::{self, RunConfig};
use crate::termlang::{check_equation, eval_term, CheckMode, Equation, Term, DEFAULT_BUDGET, DEFAULT_SAMPLES};

pub const BUDGET_ENV: &str = "CONVALG_BUDGET";
pub const CATALOG_PREFIX: &str = "catalog:";

#[derive(Debug, Parser)]
#[command(name = "convalg", version, about = "Convolution algebras of relational structures over finite lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a lattice document.
    Lattice {
        #[command(subcommand)]
        action: CheckFile,
    },
    /// Validate a relational structure document.
    Structure {
        #[command(subcommand)]
        action: CheckFile,
    },
    /// Evaluate a term under an assignment.
    Eval(EvalArgs),
    /// Equation commands.
    Eq {
        #[command(subcommand)]
        action: EqAction,
    },
    /// Named verification suites.
    Suite {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Catalog of named lattices and structures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CheckFile {
    Check { file: String },
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    lattice: String,
    /// Omit to evaluate in the bare lattice.
    #[arg(long)]
    structure: Option<String>,
    #[arg(long)]
    term: String,
    /// JSON object from variable names to elements: a label for the bare
    /// lattice, a list of labels (one per carrier point) otherwise.
    #[arg(long, default_value = "{}")]
    assign: String,
}

#[derive(Debug, Subcommand)]
enum EqAction {
    Check(EqArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
    Auto,
}

#[derive(Debug, Args)]
struct Budgeted {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides CONVALG_BUDGET and the default of 10^6 evaluations.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct EqArgs {
    #[arg(long)]
    lattice: String,
    /// Omit to check in the bare lattice.
    #[arg(long)]
    structure: Option<String>,
    /// JSON file `{"lhs": ..., "rhs": ...}`.
    #[arg(long)]
    eq: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[command(flatten)]
    run: Budgeted,
}

#[derive(Debug, Subcommand)]
enum SuiteAction {
    Run {
        name: String,
        #[command(flatten)]
        run: Budgeted,
    },
    List,
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
}

/// Loads a lattice from a JSON file or `catalog:NAME`.
pub fn load_lattice(source: &str) -> Result<FiniteLattice> {
    match source.strip_prefix(CATALOG_PREFIX) {
        Some(name) => catalog::get_lattice(name),
        None => {
            let doc: LatticeDoc = serde_json::from_str(&std::fs::read_to_string(source)?)?;
            FiniteLattice::from_doc(&doc)
        }
    }
}

/// Loads a structure from a JSON file or `catalog:NAME`.
pub fn load_structure(source: &str) -> Result<RelStructure> {
    match source.strip_prefix(CATALOG_PREFIX) {
        Some(name) => catalog::get_structure(name),
        None => {
            let doc: StructureDoc = serde_json::from_str(&std::fs::read_to_string(source)?)?;
            RelStructure::from_doc(&doc)
        }
    }
}

/// Bare names such as `chain3` are tried as catalog names when no file of
/// that name exists.
fn resolve(source: &str) -> String {
    if source.starts_with(CATALOG_PREFIX) || std::path::Path::new(source).exists() {
        source.to_string()
    } else {
        format!("{CATALOG_PREFIX}{source}")
    }
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: 0,
                msg: format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`"),
            }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn parse_assignment<E>(text: &str, mut parse: impl FnMut(&Value) -> Result<E>) -> Result<BTreeMap<String, E>> {
    let raw: BTreeMap<String, Value> = serde_json::from_str(text)?;
    raw.iter().map(|(k, v)| Ok((k.clone(), parse(v)?))).collect()
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let lattice = load_lattice(&resolve(&args.lattice))?;
    let term = Term::parse(&args.term)?;
    let value = match &args.structure {
        None => {
            let env = parse_assignment(&args.assign, |v| {
                lattice.element(v.as_str().ok_or_else(|| Error::UnknownElement(v.to_string()))?)
            })?;
            lattice.describe(&eval_term(&term, &lattice, &env)?)
        }
        Some(s) => {
            let alg = ConvAlgebra::new(lattice.clone(), load_structure(&resolve(s))?);
            let env = parse_assignment(&args.assign, |v| {
                let labels: Vec<String> = serde_json::from_value(v.clone())?;
                let f = LFunction::from_labels(&lattice, &labels)?;
                alg.check_function(&f)?;
                Ok(f)
            })?;
            alg.describe(&eval_term(&term, &alg, &env)?)
        }
    };
    emit(out, &json!({"term": term.to_string(), "value": value}))?;
    Ok(0)
}

fn cmd_eq(args: &EqArgs, out: &mut dyn Write) -> Result<i32> {
    let lattice = load_lattice(&resolve(&args.lattice))?;
    let eq = Equation::from_json(&std::fs::read_to_string(&args.eq)?)?;
    let budget = budget(args.run.budget)?;
    let mode = match args.mode {
        ModeArg::Exhaustive => CheckMode::Exhaustive,
        ModeArg::Sample => CheckMode::Sample {
            samples: args.samples,
            seed: args.run.seed,
        },
        ModeArg::Auto => CheckMode::Auto {
            samples: args.samples,
            seed: args.run.seed,
        },
    };
    let (verdict, valid) = match &args.structure {
        None => {
            let v = check_equation(&eq, &lattice, mode, budget)?;
            (v.to_json(&lattice, &eq), v.is_valid())
        }
        Some(s) => {
            let alg = ConvAlgebra::new(lattice, load_structure(&resolve(s))?);
            let v = check_equation(&eq, &alg, mode, budget)?;
            (v.to_json(&alg, &eq), v.is_valid())
        }
    };
    let mut line = json!({
        "equation": eq.to_string(),
        "lattice": args.lattice,
        "structure": args.structure,
        "budget": budget,
    });
    line["verdict"] = verdict;
    emit(out, &line)?;
    Ok(if valid { 0 } else { 1 })
}

fn cmd_suite(name: &str, run: &Budgeted, out: &mut dyn Write) -> Result<i32> {
    let spec = suite::by_name(name)?;
    let config = RunConfig {
        seed: run.seed,
        budget: budget(run.budget)?,
    };
    let results = suite::run(&spec, &config)?;
    for r in &results {
        for rep in &r.reports {
            writeln!(out, "{}", rep.to_json_line())?;
        }
    }
    for r in &results {
        writeln!(out, "{}", r.to_json_line())?;
    }
    emit(out, &suite::summary(&spec, &results))?;
    Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Lattice {
            action: CheckFile::Check { file },
        } => {
            let l = load_lattice(&resolve(&file))?;
            emit(
                out,
                &json!({"lattice": file, "status": "valid", "size": l.size(), "labels": l.labels(),
                        "distributive": l.is_distributive(), "boolean": l.is_boolean()}),
            )?;
            Ok(0)
        }
        Command::Structure {
            action: CheckFile::Check { file },
        } => {
            let s = load_structure(&resolve(&file))?;
            let relations: Vec<Value> = s
                .signature()
                .iter()
                .enumerate()
                .map(|(i, spec)| {
                    json!({"name": spec.name, "arity": spec.arity, "mode": spec.mode,
                           "tuples": s.relation(i).tuples().len()})
                })
                .collect();
            emit(
                out,
                &json!({"structure": file, "status": "valid", "carrier": s.carrier(),
                        "relations": relations, "ordered": s.order().is_some()}),
            )?;
            Ok(0)
        }
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Eq {
            action: EqAction::Check(args),
        } => cmd_eq(&args, out),
        Command::Suite {
            action: SuiteAction::Run { name, run },
        } => cmd_suite(&name, &run, out),
        Command::Suite {
            action: SuiteAction::List,
        } => {
            for name in suite::names() {
                emit(out, &json!({"suite": name}))?;
            }
            Ok(0)
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            for entry in catalog::list() {
                emit(out, &serde_json::to_value(entry)?)?;
            }
            Ok(0)
        }
    }
}

/// Parses `argv` (program name first) and runs the command. Errors are
/// written to `err` as a JSON line.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": e.to_string()}));
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("convalg").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lattice_and_catalog() {
        let (code, out, _) = run(&["lattice", "check", "catalog:N5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["distributive"], json!(false));
        let (code, out, _) = run(&["catalog", "list"]);
        assert_eq!(code, 0);
        assert!(out.lines().count() >= 10);
        let (code, _, err) = run(&["lattice", "check", "catalog:nope"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown catalog name"));
    }

    #[test]
    fn eval_terms() {
        let (code, out, _) = run(&[
            "eval",
            "--lattice",
            "chain3",
            "--structure",
            "Z2",
            "--term",
            "(op * x y)",
            "--assign",
            r#"{"x": ["m", "0"], "y": ["0", "1"]}"#,
        ]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["value"], json!(["0", "m"]));
        let (code, out, _) = run(&["eval", "--lattice", "N5", "--term", "(join a b)", "--assign", r#"{"a":"a","b":"b"}"#]);
        assert_eq!(code, 0);
        assert!(out.contains("\"value\":\"1\""));
        let (code, _, _) = run(&["eval", "--lattice", "N5", "--term", "(join a", "--assign", "{}"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["suite", "run", "unknown-suite"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }
}
