// SPDX-License-Identifier: Apache-2.0

//! Hilbert-style proofs and their checker.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::catalog::{AxiomCatalog, CHAR_VAR};
use crate::syntax::{match_schema, Binding, Character, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An instance of a catalog schema, with an optional explicit binding.
    Axiom {
        name: String,
        binding: Option<Binding>,
    },
    /// From `minor` (A) and `major` (A -> B), conclude B.
    ModusPonens { minor: usize, major: usize },
    /// From `line` (A), conclude `[x]A`.
    Necessitation { line: usize, character: Character },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(lines: Vec<ProofLine>) -> Proof {
        Proof { lines }
    }

    /// Appends a line numbered after the current last line.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        let number = self.lines.len() + 1;
        self.lines.push(ProofLine {
            number,
            formula,
            justification,
        });
        number
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RejectReason {
    #[error("the proof has no lines")]
    Empty,
    #[error("expected line number {expected}, found {found}")]
    Numbering { expected: usize, found: usize },
    #[error("axiom `{name}` is not available")]
    UnknownAxiom { name: String },
    #[error("formula is not an instance of `{name}`")]
    NoMatchingSchema { name: String },
    #[error("binding {binding} does not instantiate `{name}` to this formula")]
    BindingMismatch { name: String, binding: String },
    #[error("`{name}` is not available for character `{character}`")]
    CharacterNotAdmitted { name: String, character: Character },
    #[error("line {cited} is not an earlier line")]
    ForwardReference { cited: usize },
    #[error("modus ponens needs line {major} to be `({minor_formula}) -> ({conclusion})`")]
    MpShape {
        minor: usize,
        major: usize,
        minor_formula: String,
        conclusion: String,
    },
    #[error("necessitation needs this line to be `[{character}]` applied to line {line}")]
    NecShape { line: usize, character: Character },
}

/// Why and where a proof was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("rejected at line {line}: {reason}")]
pub struct Rejection {
    pub line: usize,
    pub reason: RejectReason,
}

fn reject<T>(line: usize, reason: RejectReason) -> Result<T, Rejection> {
    Err(Rejection { line, reason })
}

/// Checks every line of `proof` and returns the theorem on its last line.
pub fn check_proof(proof: &Proof, catalog: &AxiomCatalog) -> Result<Formula, Rejection> {
    if proof.lines.is_empty() {
        return reject(0, RejectReason::Empty);
    }
    for (i, line) in proof.lines.iter().enumerate() {
        let expected = i + 1;
        if line.number != expected {
            return reject(
                line.number,
                RejectReason::Numbering {
                    expected,
                    found: line.number,
                },
            );
        }
        check_line(proof, line, catalog)?;
    }
    Ok(proof.lines.last().expect("non-empty").formula.clone())
}

fn earlier(proof: &Proof, current: usize, cited: usize) -> Result<&Formula, Rejection> {
    if cited == 0 || cited >= current {
        return reject(current, RejectReason::ForwardReference { cited });
    }
    Ok(&proof.lines[cited - 1].formula)
}

fn check_line(proof: &Proof, line: &ProofLine, catalog: &AxiomCatalog) -> Result<(), Rejection> {
    let n = line.number;
    match &line.justification {
        Justification::Axiom { name, binding } => {
            let Some(entry) = catalog.get(name) else {
                return reject(n, RejectReason::UnknownAxiom { name: name.clone() });
            };
            let binding = match binding {
                Some(b) => {
                    if entry.schema.instantiate(b).as_ref() != Ok(&line.formula) {
                        return reject(
                            n,
                            RejectReason::BindingMismatch {
                                name: name.clone(),
                                binding: b.to_string(),
                            },
                        );
                    }
                    b.clone()
                }
                None => match match_schema(&entry.schema, &line.formula) {
                    Some(b) => b,
                    None => {
                        return reject(n, RejectReason::NoMatchingSchema { name: name.clone() })
                    }
                },
            };
            if let Some(x) = binding.chars.get(CHAR_VAR) {
                if !entry.admits(x) {
                    return reject(
                        n,
                        RejectReason::CharacterNotAdmitted {
                            name: name.clone(),
                            character: x.clone(),
                        },
                    );
                }
            }
            Ok(())
        }
        Justification::ModusPonens { minor, major } => {
            let a = earlier(proof, n, *minor)?;
            let ab = earlier(proof, n, *major)?;
            match ab {
                Formula::Impl(lhs, rhs) if **lhs == *a && **rhs == line.formula => Ok(()),
                _ => reject(
                    n,
                    RejectReason::MpShape {
                        minor: *minor,
                        major: *major,
                        minor_formula: a.to_string(),
                        conclusion: line.formula.to_string(),
                    },
                ),
            }
        }
        Justification::Necessitation {
            line: cited,
            character,
        } => {
            let a = earlier(proof, n, *cited)?;
            match &line.formula {
                Formula::Box(x, inner) if x == character && **inner == *a => Ok(()),
                _ => reject(
                    n,
                    RejectReason::NecShape {
                        line: *cited,
                        character: character.clone(),
                    },
                ),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Rejected(#[from] Rejection),
    #[error("proved `{proved}`, which is neither `{goal}` nor `B1 & ... & Bn -> {goal}` over the premises")]
    WrongShape { proved: String, goal: String },
}

/// Checks that `proof` establishes `premises ⊢ goal`: its last line is `goal`
/// itself or `B1 & (B2 & ... Bn) -> goal` with every `Bi` a premise.
///
/// Returns the premises actually used.
pub fn derives(
    premises: &[Formula],
    proof: &Proof,
    catalog: &AxiomCatalog,
    goal: &Formula,
) -> Result<Vec<Formula>, DerivationError> {
    let proved = check_proof(proof, catalog)?;
    if proved == *goal {
        return Ok(Vec::new());
    }
    if let Formula::Impl(lhs, rhs) = &proved {
        if **rhs == *goal {
            if let Some(used) = prefix_cover(lhs, premises) {
                return Ok(used);
            }
        }
    }
    Err(DerivationError::WrongShape {
        proved: proved.to_string(),
        goal: goal.to_string(),
    })
}

/// Reads `f` as `B1 & (B2 & (... & Bn))` with each `Bi` a premise, allowing
/// a premise to be a conjunction itself.
fn prefix_cover(f: &Formula, premises: &[Formula]) -> Option<Vec<Formula>> {
    if premises.contains(f) {
        return Some(vec![f.clone()]);
    }
    if let Formula::And(head, tail) = f {
        if premises.contains(head) {
            let mut rest = prefix_cover(tail, premises)?;
            rest.insert(0, (**head).clone());
            return Some(rest);
        }
    }
    None
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom {
                name,
                binding: None,
            } => write!(f, "axiom {name}"),
            Justification::Axiom {
                name,
                binding: Some(b),
            } => write!(f, "axiom {name} {b}"),
            Justification::ModusPonens { minor, major } => write!(f, "mp {minor} {major}"),
            Justification::Necessitation { line, character } => write!(f, "nec {line} {character}"),
        }
    }
}

impl fmt::Display for Proof {
    /// Renders the proof file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(
                f,
                "{}. {} ; {}",
                line.number, line.formula, line.justification
            )?;
        }
        Ok(())
    }
}
