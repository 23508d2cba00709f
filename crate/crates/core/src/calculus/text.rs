// SPDX-License-Identifier: Apache-2.0

//! Proof file format, one step per line:
//!
//! ```text
//! 1. p -> (q -> p) ; axiom IPL1
//! 2. [a](p -> (q -> p)) ; nec 1 a
//! 3. <a>p -> <a>p ; axiom IPL1 [A:=<a>p, B:=q]
//! 4. q ; mp 1 2
//! ```

use super::proof::{Justification, Proof, ProofLine};
use crate::model::FormatError;
use crate::syntax::{Alphabet, Binding, Character, Formula};

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

fn number(no: usize, s: &str, what: &str) -> Result<usize, FormatError> {
    s.parse()
        .or_else(|_| err(no, format!("expected {what}, found `{s}`")))
}

fn character(no: usize, s: &str, alphabet: &Alphabet) -> Result<Character, FormatError> {
    let x: Character = s.parse().or_else(|e| err(no, format!("{e}")))?;
    if !alphabet.contains(&x) {
        return err(no, format!("undeclared character `{x}`"));
    }
    Ok(x)
}

fn binding(no: usize, block: &str, alphabet: &Alphabet) -> Result<Binding, FormatError> {
    let mut b = Binding::default();
    for item in block.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((key, value)) = item.split_once(":=") else {
            return err(no, format!("expected `<var>:=<value>`, found `{item}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.starts_with(|c: char| c.is_ascii_uppercase()) {
            let f = Formula::parse(value, alphabet)
                .or_else(|e| err(no, format!("in binding for {key}: {e}")))?;
            b.formulas.insert(key.to_string(), f);
        } else {
            b.chars
                .insert(key.to_string(), character(no, value, alphabet)?);
        }
    }
    Ok(b)
}

fn justification(no: usize, text: &str, alphabet: &Alphabet) -> Result<Justification, FormatError> {
    let text = text.trim();
    let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let args: Vec<&str> = rest.split_whitespace().collect();
    match keyword {
        "axiom" => {
            let (name, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if name.is_empty() {
                return err(no, "axiom justification needs a schema name");
            }
            let tail = tail.trim();
            let binding = if tail.is_empty() {
                None
            } else {
                let Some(block) = tail.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
                    return err(
                        no,
                        format!("expected a `[...]` binding block, found `{tail}`"),
                    );
                };
                Some(binding(no, block, alphabet)?)
            };
            Ok(Justification::Axiom {
                name: name.to_string(),
                binding,
            })
        }
        "mp" => match args.as_slice() {
            [i, j] => Ok(Justification::ModusPonens {
                minor: number(no, i, "a line number")?,
                major: number(no, j, "a line number")?,
            }),
            _ => err(no, "expected `mp <i> <j>`"),
        },
        "nec" => match args.as_slice() {
            [i, x] => Ok(Justification::Necessitation {
                line: number(no, i, "a line number")?,
                character: character(no, x, alphabet)?,
            }),
            _ => err(no, "expected `nec <i> <char>`"),
        },
        other => err(no, format!("unknown justification `{other}`")),
    }
}

/// Parses a proof file. Blank lines and `#` comments are skipped.
pub fn parse_proof(text: &str, alphabet: &Alphabet) -> Result<Proof, FormatError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((label, rest)) = line.split_once('.') else {
            return err(no, "expected `<n>. <formula> ; <justification>`");
        };
        let number = number(no, label.trim(), "a step number")?;
        let Some((formula, just)) = rest.split_once(';') else {
            return err(no, "missing `;` before the justification");
        };
        let formula =
            Formula::parse(formula.trim(), alphabet).or_else(|e| err(no, e.to_string()))?;
        lines.push(ProofLine {
            number,
            formula,
            justification: justification(no, just, alphabet)?,
        });
    }
    Ok(Proof::new(lines))
}
