// SPDX-License-Identifier: Apache-2.0

//! Line-oriented text formats for models and grammar specs.
//!
//! Model files:
//!
//! ```text
//! worlds: w0 w1 w2
//! leq: w0 w1, w1 w2
//! rel a: w0 w1, w1 w2
//! val w0: p q
//! ```
//!
//! Grammar files:
//!
//! ```text
//! alphabet: a b
//! serial: a b-
//! prod a -> a a
//! prod b ->
//! ```
//!
//! `#` starts a comment. Only forward characters may head a `rel` line; an
//! empty `rel a:` line declares `a` without edges.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{GrammarSpec, Model, Production};
use crate::syntax::{Alphabet, Character};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl fmt::Display) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.to_string(),
    })
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn world_pairs(line: usize, rest: &str) -> Result<Vec<(String, String)>, FormatError> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    rest.split(',')
        .map(|pair| {
            let parts: Vec<&str> = pair.split_whitespace().collect();
            match parts.as_slice() {
                [w, u] => Ok((w.to_string(), u.to_string())),
                _ => err(
                    line,
                    format!("expected a pair of worlds, found `{}`", pair.trim()),
                ),
            }
        })
        .collect()
}

/// Parses a model file. With `alphabet`, `rel` lines must name declared
/// characters; without it, the alphabet is the set of `rel` names.
pub fn parse_model(text: &str, alphabet: Option<&Alphabet>) -> Result<Model, FormatError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let mut worlds = None;
    let mut rel_names = BTreeSet::new();
    for &(no, line) in &lines {
        let Some((key, rest)) = line.split_once(':') else {
            return err(no, format!("expected `<key>: ...`, found `{line}`"));
        };
        let key: Vec<&str> = key.split_whitespace().collect();
        match key.as_slice() {
            ["worlds"] => {
                if worlds.is_some() {
                    return err(no, "duplicate `worlds` line");
                }
                worlds = Some((
                    no,
                    rest.split_whitespace()
                        .map(str::to_string)
                        .collect::<Vec<_>>(),
                ));
            }
            ["rel", name] => {
                let x: Character = name.parse().map_err(|e| FormatError {
                    line: no,
                    message: format!("{e}"),
                })?;
                if !x.is_forward() {
                    return err(
                        no,
                        format!("`rel` lines take forward characters only, found `{x}`"),
                    );
                }
                if let Some(sigma) = alphabet {
                    if !sigma.contains(&x) {
                        return err(no, format!("undeclared character `{x}`"));
                    }
                }
                rel_names.insert(x.base().to_string());
            }
            ["leq"] | ["val", _] => {}
            _ => return err(no, format!("unknown declaration `{}`", key.join(" "))),
        }
    }
    let Some((worlds_line, worlds)) = worlds else {
        return err(0, "missing `worlds:` line");
    };
    let alphabet = match alphabet {
        Some(sigma) => sigma.clone(),
        None => Alphabet::new(rel_names).map_err(|_| FormatError {
            line: 0,
            message: "model declares no characters; add a `rel <char>:` line or supply a grammar"
                .into(),
        })?,
    };
    let mut model = Model::new(alphabet, worlds).map_err(|e| FormatError {
        line: worlds_line,
        message: e.to_string(),
    })?;

    for &(no, line) in &lines {
        let (key, rest) = line.split_once(':').expect("checked above");
        let key: Vec<&str> = key.split_whitespace().collect();
        let wrap = |e: super::ModelError| FormatError {
            line: no,
            message: e.to_string(),
        };
        match key.as_slice() {
            ["leq"] => {
                for (w, u) in world_pairs(no, rest)? {
                    model.add_leq(&w, &u).map_err(wrap)?;
                }
            }
            ["rel", name] => {
                let x = Character::forward(*name);
                for (w, u) in world_pairs(no, rest)? {
                    model.add_edge(&x, &w, &u).map_err(wrap)?;
                }
            }
            ["val", w] => {
                for atom in rest.split_whitespace() {
                    model.add_atom(w, atom).map_err(wrap)?;
                }
                // a `val` line with no atoms still has to name a real world
                model.world_index(w).map_err(wrap)?;
            }
            _ => {}
        }
    }
    Ok(model)
}

fn join_pairs(model: &Model, pairs: impl Iterator<Item = (usize, usize)>) -> String {
    pairs
        .map(|(w, u)| format!("{} {}", model.world_name(w), model.world_name(u)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn header(key: &str, body: &str) -> String {
    if body.is_empty() {
        format!("{key}:")
    } else {
        format!("{key}: {body}")
    }
}

impl fmt::Display for Model {
    /// Renders the model file format; every pair is listed explicitly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", header("worlds", &self.worlds.join(" ")))?;
        writeln!(f, "{}", header("leq", &join_pairs(self, self.leq.pairs())))?;
        for (name, r) in &self.rel {
            writeln!(
                f,
                "{}",
                header(&format!("rel {name}"), &join_pairs(self, r.pairs()))
            )?;
        }
        for (w, atoms) in self.val.iter().enumerate() {
            let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
            writeln!(
                f,
                "{}",
                header(&format!("val {}", self.worlds[w]), &atoms.join(" "))
            )?;
        }
        Ok(())
    }
}

fn parse_char(no: usize, s: &str, alphabet: Option<&Alphabet>) -> Result<Character, FormatError> {
    let x: Character = s.parse().map_err(|e| FormatError {
        line: no,
        message: format!("{e}"),
    })?;
    if let Some(sigma) = alphabet {
        if !sigma.contains(&x) {
            return err(no, format!("undeclared character `{x}`"));
        }
    }
    Ok(x)
}

/// Parses a grammar file; the `alphabet:` line is required.
pub fn parse_grammar(text: &str) -> Result<(Alphabet, GrammarSpec), FormatError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let mut alphabet = None;
    for &(no, line) in &lines {
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if alphabet.is_some() {
                return err(no, "duplicate `alphabet` line");
            }
            let sigma = Alphabet::new(rest.split_whitespace()).map_err(|e| FormatError {
                line: no,
                message: e.to_string(),
            })?;
            alphabet = Some(sigma);
        }
    }
    let Some(alphabet) = alphabet else {
        return err(0, "missing `alphabet:` line");
    };

    let mut g = GrammarSpec::empty();
    for (no, line) in lines {
        if line.starts_with("alphabet:") {
            continue;
        } else if let Some(rest) = line.strip_prefix("serial:") {
            for s in rest.split_whitespace() {
                g.serial.insert(parse_char(no, s, Some(&alphabet))?);
            }
        } else if let Some(rest) = line.strip_prefix("prod ") {
            let Some((lhs, rhs)) = rest.split_once("->") else {
                return err(no, "expected `prod <char> -> <chars>`");
            };
            let lhs = parse_char(no, lhs.trim(), Some(&alphabet))?;
            let rhs = rhs
                .split_whitespace()
                .map(|s| parse_char(no, s, Some(&alphabet)))
                .collect::<Result<Vec<_>, _>>()?;
            g.productions.push(Production::new(lhs, rhs));
        } else {
            return err(no, format!("unknown declaration `{line}`"));
        }
    }
    Ok((alphabet, g))
}

/// Renders a grammar file.
pub fn grammar_to_text(alphabet: &Alphabet, g: &GrammarSpec) -> String {
    let mut out = format!("alphabet: {alphabet}\n");
    if !g.serial.is_empty() {
        let serial: Vec<String> = g.serial.iter().map(ToString::to_string).collect();
        out.push_str(&format!("serial: {}\n", serial.join(" ")));
    }
    for p in &g.productions {
        out.push_str(&format!("prod {p}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "\
# a two-step chain
worlds: w0 w1 w2
leq: w0 w0, w1 w1, w2 w2
rel a: w0 w1, w1 w2
val w2: p q
";

    #[test]
    fn parse_and_render_model() {
        let m = parse_model(CHAIN, None).unwrap();
        assert_eq!(m.world_count(), 3);
        assert_eq!(m.edge_lookup(&Character::forward("a")).unwrap().len(), 2);
        assert!(m.valuation(2).contains("q"));
        let again = parse_model(&m.to_string(), None).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rendered_model_lists_empty_declarations() {
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let m = Model::new(sigma.clone(), ["w0"]).unwrap();
        assert_eq!(m.to_string(), "worlds: w0\nleq:\nrel a:\nrel b:\nval w0:\n");
        assert_eq!(parse_model(&m.to_string(), None).unwrap(), m);
        assert_eq!(parse_model(&m.to_string(), Some(&sigma)).unwrap(), m);
    }

    #[test]
    fn model_format_errors() {
        let e = parse_model("worlds: w0\nrel a-: w0 w0\n", None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_model("worlds: w0\nrel a: w0\n", None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_model("worlds: w0\nrel a: w0 w9\n", None).unwrap_err();
        assert!(e.message.contains("w9"));
        let e = parse_model("rel a:\n", None).unwrap_err();
        assert!(e.message.contains("worlds"));
        let e = parse_model("worlds: w0\n", None).unwrap_err();
        assert!(e.message.contains("no characters"));
        let sigma = Alphabet::new(["a"]).unwrap();
        assert!(parse_model("worlds: w0\nrel b:\n", Some(&sigma)).is_err());
        assert!(parse_model("worlds: w0\nval w1: p\n", None).is_err());
        assert!(parse_model("worlds: w0\nrel a:\nval w1:\n", None).is_err());
        assert!(parse_model("worlds: w0\nfoo: bar\n", None).is_err());
    }

    #[test]
    fn parse_grammar_file() {
        let text = "alphabet: a b\nserial: a b-\nprod a -> a a\nprod b ->   # reflexive\n";
        let (sigma, g) = parse_grammar(text).unwrap();
        assert_eq!(sigma, Alphabet::new(["a", "b"]).unwrap());
        assert_eq!(g.serial.len(), 2);
        assert!(g.serial.contains(&Character::backward("b")));
        assert_eq!(g.productions.len(), 2);
        assert!(g.productions[1].rhs.is_empty());
        assert_eq!(g.productions[0].to_string(), "a -> a a");
        assert_eq!(
            parse_grammar(&grammar_to_text(&sigma, &g)).unwrap(),
            (sigma, g)
        );
    }

    #[test]
    fn grammar_format_errors() {
        assert!(parse_grammar("serial: a\n").is_err());
        assert_eq!(
            parse_grammar("alphabet: a\nprod c -> a\n")
                .unwrap_err()
                .line,
            2
        );
        assert!(parse_grammar("alphabet: a\nprod a a\n").is_err());
        assert!(parse_grammar("alphabet:\n").is_err());
    }
}
