// SPDX-License-Identifier: Apache-2.0

//! Axiom schemas and one-sided syntactic matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{parser, print, Alphabet, Character, Formula, ParseError};

/// A modal index inside a schema: either a concrete character or a
/// character metavariable, possibly under a converse mark.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharPattern {
    Var { name: String, converse: bool },
    Fixed(Character),
}

impl fmt::Display for CharPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharPattern::Var { name, converse } => {
                write!(f, "{name}{}", if *converse { "-" } else { "" })
            }
            CharPattern::Fixed(x) => write!(f, "{x}"),
        }
    }
}

/// A formula-shaped tree with metavariables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Schema {
    Meta(String),
    Atom(String),
    Bottom,
    Or(Box<Schema>, Box<Schema>),
    And(Box<Schema>, Box<Schema>),
    Impl(Box<Schema>, Box<Schema>),
    Dia(CharPattern, Box<Schema>),
    Box(CharPattern, Box<Schema>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("no binding for formula metavariable `{0}`")]
    UnboundFormula(String),
    #[error("no binding for character metavariable `{0}`")]
    UnboundCharacter(String),
}

/// A substitution instance: formulas for formula metavariables, characters
/// for character metavariables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub formulas: BTreeMap<String, Formula>,
    pub chars: BTreeMap<String, Character>,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let formulas = self.formulas.iter().map(|(k, v)| format!("{k}:={v}"));
        let chars = self.chars.iter().map(|(k, v)| format!("{k}:={v}"));
        let parts: Vec<String> = formulas.chain(chars).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Schema {
    pub(crate) fn or(a: Schema, b: Schema) -> Schema {
        Schema::Or(Box::new(a), Box::new(b))
    }

    pub(crate) fn and(a: Schema, b: Schema) -> Schema {
        Schema::And(Box::new(a), Box::new(b))
    }

    pub(crate) fn implies(a: Schema, b: Schema) -> Schema {
        Schema::Impl(Box::new(a), Box::new(b))
    }

    /// Parses schema text. Uppercase identifiers are formula metavariables;
    /// character names listed in `char_vars` are character metavariables.
    pub fn parse(text: &str, char_vars: &[&str]) -> Result<Schema, ParseError> {
        parser::parse_schema(text, None, char_vars)
    }

    /// As [`Schema::parse`], additionally checking concrete characters.
    pub fn parse_with(
        text: &str,
        alphabet: &Alphabet,
        char_vars: &[&str],
    ) -> Result<Schema, ParseError> {
        parser::parse_schema(text, Some(alphabet), char_vars)
    }

    /// Formula metavariables in order of first occurrence.
    pub fn formula_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out, &mut Vec::new());
        out
    }

    /// Character metavariables in order of first occurrence.
    pub fn char_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_vars(&self, formulas: &mut Vec<String>, chars: &mut Vec<String>) {
        match self {
            Schema::Meta(m) => {
                if !formulas.contains(m) {
                    formulas.push(m.clone());
                }
            }
            Schema::Atom(_) | Schema::Bottom => {}
            Schema::Or(a, b) | Schema::And(a, b) | Schema::Impl(a, b) => {
                a.collect_vars(formulas, chars);
                b.collect_vars(formulas, chars);
            }
            Schema::Dia(x, a) | Schema::Box(x, a) => {
                if let CharPattern::Var { name, .. } = x {
                    if !chars.contains(name) {
                        chars.push(name.clone());
                    }
                }
                a.collect_vars(formulas, chars);
            }
        }
    }

    pub fn instantiate(&self, binding: &Binding) -> Result<Formula, InstantiateError> {
        Ok(match self {
            Schema::Meta(m) => binding
                .formulas
                .get(m)
                .cloned()
                .ok_or_else(|| InstantiateError::UnboundFormula(m.clone()))?,
            Schema::Atom(p) => Formula::Atom(p.clone()),
            Schema::Bottom => Formula::Bottom,
            Schema::Or(a, b) => Formula::or(a.instantiate(binding)?, b.instantiate(binding)?),
            Schema::And(a, b) => Formula::and(a.instantiate(binding)?, b.instantiate(binding)?),
            Schema::Impl(a, b) => {
                Formula::implies(a.instantiate(binding)?, b.instantiate(binding)?)
            }
            Schema::Dia(x, a) => Formula::dia(resolve(x, binding)?, a.instantiate(binding)?),
            Schema::Box(x, a) => Formula::boxed(resolve(x, binding)?, a.instantiate(binding)?),
        })
    }

    /// Concrete characters occurring in the schema.
    pub fn fixed_characters(&self) -> BTreeSet<Character> {
        let mut out = BTreeSet::new();
        self.each_pattern(&mut |x| {
            if let CharPattern::Fixed(c) = x {
                out.insert(c.clone());
            }
        });
        out
    }

    fn each_pattern(&self, f: &mut impl FnMut(&CharPattern)) {
        match self {
            Schema::Meta(_) | Schema::Atom(_) | Schema::Bottom => {}
            Schema::Or(a, b) | Schema::And(a, b) | Schema::Impl(a, b) => {
                a.each_pattern(f);
                b.each_pattern(f);
            }
            Schema::Dia(x, a) | Schema::Box(x, a) => {
                f(x);
                a.each_pattern(f);
            }
        }
    }

    /// Converts a metavariable-free tree into a formula.
    pub fn to_formula(&self) -> Option<Formula> {
        self.instantiate(&Binding::default()).ok()
    }
}

fn resolve(x: &CharPattern, binding: &Binding) -> Result<Character, InstantiateError> {
    x.resolve(binding)
}

impl CharPattern {
    /// The character this pattern denotes under `binding`.
    pub fn resolve(&self, binding: &Binding) -> Result<Character, InstantiateError> {
        match self {
            CharPattern::Fixed(c) => Ok(c.clone()),
            CharPattern::Var { name, converse } => {
                let c = binding
                    .chars
                    .get(name)
                    .ok_or_else(|| InstantiateError::UnboundCharacter(name.clone()))?;
                Ok(if *converse { c.converse() } else { c.clone() })
            }
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_tree(f, self, print::Level::Top)
    }
}

/// Finds a binding under which `schema` instantiates to exactly `formula`.
///
/// Repeated metavariables must bind to identical subformulas. A character
/// metavariable seen under a converse mark binds to the converse of the
/// character found there.
pub fn match_schema(schema: &Schema, formula: &Formula) -> Option<Binding> {
    let mut binding = Binding::default();
    if match_into(schema, formula, &mut binding) {
        Some(binding)
    } else {
        None
    }
}

fn match_into(schema: &Schema, formula: &Formula, b: &mut Binding) -> bool {
    match (schema, formula) {
        (Schema::Meta(m), f) => match b.formulas.get(m) {
            Some(bound) => bound == f,
            None => {
                b.formulas.insert(m.clone(), f.clone());
                true
            }
        },
        (Schema::Atom(p), Formula::Atom(q)) => p == q,
        (Schema::Bottom, Formula::Bottom) => true,
        (Schema::Or(s1, s2), Formula::Or(f1, f2))
        | (Schema::And(s1, s2), Formula::And(f1, f2))
        | (Schema::Impl(s1, s2), Formula::Impl(f1, f2)) => {
            match_into(s1, f1, b) && match_into(s2, f2, b)
        }
        (Schema::Dia(x, s), Formula::Dia(y, f)) | (Schema::Box(x, s), Formula::Box(y, f)) => {
            match_char(x, y, b) && match_into(s, f, b)
        }
        _ => false,
    }
}

fn match_char(pattern: &CharPattern, actual: &Character, b: &mut Binding) -> bool {
    match pattern {
        CharPattern::Fixed(c) => c == actual,
        CharPattern::Var { name, converse } => {
            let wanted = if *converse {
                actual.converse()
            } else {
                actual.clone()
            };
            match b.chars.get(name) {
                Some(bound) => *bound == wanted,
                None => {
                    b.chars.insert(name.clone(), wanted);
                    true
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s, &sigma()).unwrap()
    }

    fn s(text: &str) -> Schema {
        Schema::parse(text, &["x"]).unwrap()
    }

    #[test]
    fn a7_match_binds_through_converse() {
        let a7 = s("(A -> [x]<x->A) & (<x>[x-]A -> A)");
        let b = match_schema(&a7, &f("(q -> [b]<b->q) & (<b>[b-]q -> q)")).unwrap();
        assert_eq!(b.formulas["A"], f("q"));
        assert_eq!(b.chars["x"], Character::forward("b"));
        assert_eq!(b.formulas.len(), 1);
        assert_eq!(b.chars.len(), 1);
    }

    #[test]
    fn a7_with_backward_character() {
        let a7 = s("(A -> [x]<x->A) & (<x>[x-]A -> A)");
        let b = match_schema(&a7, &f("(q -> [b-]<b>q) & (<b->[b]q -> q)")).unwrap();
        assert_eq!(b.chars["x"], Character::backward("b"));
        // inconsistent converse use
        assert!(match_schema(&a7, &f("(q -> [b]<b>q) & (<b>[b-]q -> q)")).is_none());
    }

    #[test]
    fn shape_mismatch() {
        let a1 = s("[x](A -> B) -> ([x]A -> [x]B)");
        assert_eq!(match_schema(&a1, &f("p -> p")), None);
    }

    #[test]
    fn seriality_match() {
        let d = s("[x]A -> <x>A");
        let b = match_schema(&d, &f("[a]p -> <a>p")).unwrap();
        assert_eq!(b.formulas["A"], f("p"));
        assert_eq!(b.chars["x"], Character::forward("a"));
        assert!(match_schema(&d, &f("[a]p -> <b>p")).is_none());
        assert!(match_schema(&d, &f("[a]p -> <a>q")).is_none());
    }

    #[test]
    fn fixed_characters_must_agree() {
        let t = Schema::parse("(A -> <a>A) & ([a]A -> A)", &[]).unwrap();
        assert!(match_schema(&t, &f("(p -> <a>p) & ([a]p -> p)")).is_some());
        assert!(match_schema(&t, &f("(p -> <b>p) & ([b]p -> p)")).is_none());
        assert_eq!(t.fixed_characters().len(), 1);
    }

    #[test]
    fn instantiate_and_errors() {
        let a1 = s("[x](A -> B) -> ([x]A -> [x]B)");
        assert_eq!(a1.formula_vars(), ["A", "B"]);
        assert_eq!(a1.char_vars(), ["x"]);
        let mut b = Binding::default();
        b.formulas.insert("A".into(), f("p"));
        assert_eq!(
            a1.instantiate(&b),
            Err(InstantiateError::UnboundCharacter("x".into()))
        );
        b.chars.insert("x".into(), Character::forward("a"));
        assert_eq!(
            a1.instantiate(&b),
            Err(InstantiateError::UnboundFormula("B".into()))
        );
        b.formulas.insert("B".into(), f("q"));
        assert_eq!(
            a1.instantiate(&b).unwrap(),
            f("[a](p -> q) -> ([a]p -> [a]q)")
        );
    }

    #[test]
    fn schema_printing() {
        assert_eq!(s("~<x>false").to_string(), "<x>false -> false");
        assert_eq!(
            s("(A -> [x]<x->A) & (<x>[x-]A -> A)").to_string(),
            "(A -> [x]<x->A) & (<x>[x-]A -> A)"
        );
    }
}
