// SPDX-License-Identifier: Apache-2.0

//! The `igl` command-line front end.
//!
//! Exit codes: 0 success, 1 logical negative (violation, rejection,
//! countermodel, false harness), 2 input error. With `--machine` every
//! record is one JSON object per line on stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::calculus::{check_proof, parse_proof, AxiomCatalog};
use crate::model::{audit, parse_grammar, parse_model, saturate, GrammarSpec, Model};
use crate::search::{
    find_countermodel, soundness_harness, HarnessConfig, SearchResult, DEFAULT_BUDGET,
};
use crate::semantics::{satisfies, BoxClause};
use crate::syntax::{Alphabet, Formula, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "igl", version, about = "Intuitionistic grammar logic toolkit")]
struct Cli {
    /// Grammar file; its `alphabet:` line is the alphabet for every input.
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Forward characters, space separated, when no grammar file is given.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// Emit line-delimited JSON records.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse { formula: String },
    /// Check a model file against the frame conditions.
    Audit {
        #[arg(long)]
        model: PathBuf,
        /// Close the model under the grammar before auditing.
        #[arg(long)]
        saturate: bool,
    },
    /// Print the least closure of a model under the grammar.
    Saturate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a formula at a world.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        formula: String,
    },
    /// Check a Hilbert proof file.
    Prove { proof: PathBuf },
    /// Search for a countermodel up to a world bound.
    Refute {
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
    /// Check axiom instances on all small models.
    Harness {
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Fault {
    /// Evaluate `[x]A` without the preorder successors.
    LocalBox,
}

/// An input problem; rendered and mapped to exit code 2.
struct InputError {
    message: String,
    column: Option<usize>,
}

impl InputError {
    fn new(message: impl ToString) -> InputError {
        InputError {
            message: message.to_string(),
            column: None,
        }
    }

    fn in_file(path: &Path, e: impl std::fmt::Display) -> InputError {
        InputError::new(format!("{}: {e}", path.display()))
    }
}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError {
            column: Some(e.column()),
            message: e.to_string(),
        }
    }
}

struct Output<'a> {
    machine: bool,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    /// Writes `human` in human mode and `record` in machine mode.
    fn emit(&mut self, human: impl std::fmt::Display, record: Value) {
        let _ = if self.machine {
            writeln!(self.out, "{record}")
        } else {
            writeln!(self.out, "{human}")
        };
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let machine = cli.machine;
    let mut output = Output { machine, out };
    match execute(&cli, &mut output) {
        Ok(code) => code,
        Err(e) => {
            if machine {
                let record = json!({"status": "error", "message": e.message, "column": e.column});
                let _ = writeln!(output.out, "{record}");
            }
            let _ = writeln!(err, "error: {}", e.message);
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::in_file(path, e))
}

/// The alphabet and grammar shared by all inputs, if either was given.
fn declared(cli: &Cli) -> Result<Option<(Alphabet, GrammarSpec)>, InputError> {
    let from_flag = cli
        .alphabet
        .as_deref()
        .map(|s| {
            Alphabet::new(s.split_whitespace())
                .map_err(|e| InputError::new(format!("--alphabet: {e}")))
        })
        .transpose()?;
    let Some(path) = &cli.grammar else {
        return Ok(from_flag.map(|a| (a, GrammarSpec::empty())));
    };
    let (alphabet, g) = parse_grammar(&read(path)?).map_err(|e| InputError::in_file(path, e))?;
    if let Some(flag) = from_flag {
        if flag != alphabet {
            return Err(InputError::new(format!(
                "--alphabet `{flag}` disagrees with the grammar's `{alphabet}`"
            )));
        }
    }
    Ok(Some((alphabet, g)))
}

fn default_alphabet() -> Alphabet {
    Alphabet::new(["a"]).expect("valid name")
}

fn load_model(path: &Path, alphabet: Option<&Alphabet>) -> Result<Model, InputError> {
    parse_model(&read(path)?, alphabet).map_err(|e| InputError::in_file(path, e))
}

fn execute(cli: &Cli, o: &mut Output) -> Result<i32, InputError> {
    let declared = declared(cli)?;
    match &cli.command {
        Command::Parse { formula } => {
            let f = match &declared {
                Some((alphabet, _)) => Formula::parse(formula, alphabet)?,
                None => Formula::parse_unchecked(formula)?,
            };
            o.emit(&f, json!({"status": "ok", "formula": f}));
            Ok(EXIT_OK)
        }
        Command::Audit {
            model,
            saturate: close,
        } => {
            let (alphabet, g) = split(&declared);
            let mut m = load_model(model, alphabet)?;
            if *close {
                m = saturate(&m, &g).map_err(InputError::new)?;
            }
            let report = audit(&m, &g).map_err(InputError::new)?;
            for v in &report.violations {
                o.emit(v, serde_json::to_value(v).expect("serializable"));
            }
            let n = report.violations.len();
            if n == 0 {
                o.emit("ok", json!({"status": "ok"}));
                Ok(EXIT_OK)
            } else {
                o.emit(
                    format!("{n} violation(s)"),
                    json!({"status": "violations", "count": n}),
                );
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Saturate { model } => {
            let (alphabet, g) = split(&declared);
            let m = load_model(model, alphabet)?;
            let s = saturate(&m, &g).map_err(InputError::new)?;
            o.emit(
                s.to_string().trim_end(),
                json!({"status": "ok", "model": s.to_string()}),
            );
            Ok(EXIT_OK)
        }
        Command::Check {
            model,
            world,
            formula,
        } => {
            let (alphabet, g) = split(&declared);
            let m = load_model(model, alphabet)?;
            let f = Formula::parse(formula, m.alphabet())?;
            let report = audit(&m, &g).map_err(InputError::new)?;
            if let Some(v) = report.violations.first() {
                return Err(InputError::new(format!(
                    "{}: not a model of the grammar ({v}); run `saturate` or `audit`",
                    model.display()
                )));
            }
            let holds = satisfies(&m, world, &f).map_err(InputError::new)?;
            o.emit(
                holds,
                json!({"status": "ok", "world": world, "formula": f, "holds": holds}),
            );
            Ok(EXIT_OK)
        }
        Command::Prove { proof } => {
            let (alphabet, g) =
                declared.unwrap_or_else(|| (default_alphabet(), GrammarSpec::empty()));
            let catalog = AxiomCatalog::new(&alphabet, &g).map_err(InputError::new)?;
            let p =
                parse_proof(&read(proof)?, &alphabet).map_err(|e| InputError::in_file(proof, e))?;
            match check_proof(&p, &catalog) {
                Ok(theorem) => {
                    o.emit(
                        format!("accepted: {theorem}"),
                        json!({"status": "accepted", "theorem": theorem}),
                    );
                    Ok(EXIT_OK)
                }
                Err(r) => {
                    o.emit(
                        &r,
                        json!({"status": "rejected", "line": r.line, "detail": r.reason, "message": r.to_string()}),
                    );
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Refute {
            formula,
            max_worlds,
        } => {
            let (alphabet, g) = match declared {
                Some(d) => d,
                None => {
                    let f = Formula::parse_unchecked(formula)?;
                    let names: Vec<String> = f
                        .characters()
                        .iter()
                        .map(|x| x.base().to_string())
                        .collect();
                    let alphabet = if names.is_empty() {
                        default_alphabet()
                    } else {
                        Alphabet::new(names).map_err(InputError::new)?
                    };
                    (alphabet, GrammarSpec::empty())
                }
            };
            let f = Formula::parse(formula, &alphabet)?;
            match find_countermodel(&f, &alphabet, &g, *max_worlds, DEFAULT_BUDGET)
                .map_err(InputError::new)?
            {
                SearchResult::Countermodel { model, world } => {
                    let text = format!("# countermodel: {f} fails at {world}\n{model}");
                    o.emit(
                        text.trim_end(),
                        json!({"status": "countermodel", "formula": f, "world": world, "model": model.to_string()}),
                    );
                    Ok(EXIT_NEGATIVE)
                }
                SearchResult::ValidUpTo(k) => {
                    o.emit(
                        format!("valid-up-to {k}"),
                        json!({"status": "valid-up-to", "formula": f, "max_worlds": k}),
                    );
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Harness {
            max_worlds,
            depth,
            seed,
            inject_fault,
        } => {
            if *depth == 0 {
                return Err(InputError::new("--depth must be at least 1"));
            }
            let (alphabet, g) =
                declared.unwrap_or_else(|| (default_alphabet(), GrammarSpec::empty()));
            let catalog = AxiomCatalog::new(&alphabet, &g).map_err(InputError::new)?;
            let config = HarnessConfig {
                max_worlds: *max_worlds,
                depth: *depth,
                seed: *seed,
                box_clause: match inject_fault {
                    Some(Fault::LocalBox) => BoxClause::LocalOnly,
                    None => BoxClause::Intuitionistic,
                },
                ..HarnessConfig::default()
            };
            let report =
                soundness_harness(&catalog, &alphabet, &g, &config).map_err(InputError::new)?;
            for failure in &report.failures {
                o.emit(
                    format!(
                        "{} {} fails at {}: {}",
                        failure.schema, failure.binding, failure.world, failure.instance
                    ),
                    serde_json::to_value(failure).expect("serializable"),
                );
            }
            o.emit(
                format!(
                    "{} schemas, {} instances, {} models: {} failures",
                    report.schemas_checked,
                    report.axioms_checked,
                    report.models_checked,
                    report.failure_count
                ),
                json!({
                    "status": if report.is_clean() { "ok" } else { "failures" },
                    "seed": seed,
                    "depth": depth,
                    "max_worlds": max_worlds,
                    "report": report,
                }),
            );
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
    }
}

fn split(declared: &Option<(Alphabet, GrammarSpec)>) -> (Option<&Alphabet>, GrammarSpec) {
    match declared {
        Some((a, g)) => (Some(a), g.clone()),
        None => (None, GrammarSpec::empty()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("igl").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parse_canonical() {
        assert_eq!(
            call(&["parse", "p->p"]),
            (0, "p -> p\n".into(), String::new())
        );
    }

    #[test]
    fn parse_error_reports_column() {
        let (code, _, err) = call(&["parse", "p ->"]);
        assert_eq!(code, 2);
        assert!(err.contains("column 5"), "{err}");
    }

    #[test]
    fn parse_undeclared() {
        let (code, _, err) = call(&["--alphabet", "a", "parse", "<b>p"]);
        assert_eq!(code, 2);
        assert!(err.contains("undeclared character `b`"), "{err}");
    }

    #[test]
    fn machine_error_record() {
        let (code, out, _) = call(&["--machine", "parse", "p ->"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["column"], 5);
    }

    #[test]
    fn refute_and_valid() {
        let (code, out, _) = call(&["refute", "p | ~p", "--max-worlds", "2"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("# countermodel"));
        assert_eq!(call(&["refute", "~<a>false"]).1, "valid-up-to 3\n");
    }

    #[test]
    fn usage_errors_are_input_errors() {
        assert_eq!(call(&["refute"]).0, 2);
        assert_eq!(call(&["nonsense"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
