// SPDX-License-Identifier: Apache-2.0

//! Alphabets of modal indices, the formula language, and axiom schemas.
//!
//! Characters come in two sorts: forward characters `a` and their backward
//! twins `a-` (the converse). Formulas are built from atoms, `false`,
//! `|`, `&`, `->`, and the modalities `<x>` and `[x]`. Negation `~A` and the
//! biconditional `A <-> B` are abbreviations and never appear in the tree.

mod parser;
mod print;
mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parser::ParseError;
pub use schema::{match_schema, Binding, CharPattern, InstantiateError, Schema};

/// Which half of the alphabet a character belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Forward,
    Backward,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Forward => Polarity::Backward,
            Polarity::Backward => Polarity::Forward,
        }
    }
}

/// A modal index: a forward name together with a polarity tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    base: String,
    polarity: Polarity,
}

impl Character {
    pub fn new(base: impl Into<String>, polarity: Polarity) -> Character {
        Character {
            base: base.into(),
            polarity,
        }
    }

    pub fn forward(base: impl Into<String>) -> Character {
        Character::new(base, Polarity::Forward)
    }

    pub fn backward(base: impl Into<String>) -> Character {
        Character::new(base, Polarity::Backward)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_forward(&self) -> bool {
        self.polarity == Polarity::Forward
    }

    /// The converse character: same base, opposite polarity.
    pub fn converse(&self) -> Character {
        Character {
            base: self.base.clone(),
            polarity: self.polarity.flip(),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Forward => write!(f, "{}", self.base),
            Polarity::Backward => write!(f, "{}-", self.base),
        }
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must declare at least one character")]
    Empty,
    #[error("`{0}` is not a valid character name")]
    InvalidName(String),
    #[error("undeclared character `{0}`")]
    Undeclared(Character),
}

impl FromStr for Character {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, polarity) = match s.strip_suffix('-') {
            Some(base) => (base, Polarity::Backward),
            None => (s, Polarity::Forward),
        };
        if !is_identifier(base) {
            return Err(AlphabetError::InvalidName(s.to_string()));
        }
        Ok(Character::new(base, polarity))
    }
}

/// `[a-z][a-zA-Z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The declared forward characters. Backward characters are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    forward: BTreeSet<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut forward = BTreeSet::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(AlphabetError::InvalidName(name));
            }
            forward.insert(name);
        }
        if forward.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet { forward })
    }

    pub fn forward_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.forward.iter().map(String::as_str)
    }

    pub fn declares(&self, base: &str) -> bool {
        self.forward.contains(base)
    }

    pub fn contains(&self, x: &Character) -> bool {
        self.declares(x.base())
    }

    pub fn check(&self, x: &Character) -> Result<(), AlphabetError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(AlphabetError::Undeclared(x.clone()))
        }
    }

    /// All characters, forward ones first, each group in name order.
    pub fn characters(&self) -> Vec<Character> {
        let forward = self.forward.iter().map(Character::forward);
        let backward = self.forward.iter().map(Character::backward);
        forward.chain(backward).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.forward_names().collect();
        write!(f, "{}", names.join(" "))
    }
}

/// A formula of the modal language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bottom,
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Dia(Character, Box<Formula>),
    Box(Character, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn dia(x: Character, a: Formula) -> Formula {
        Formula::Dia(x, Box::new(a))
    }

    pub fn boxed(x: Character, a: Formula) -> Formula {
        Formula::Box(x, Box::new(a))
    }

    /// `~A`, i.e. `A -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    /// `A <-> B`, i.e. `(A -> B) & (B -> A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Parses `text` against `alphabet`. See the crate README for the grammar.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
        parser::parse_formula(text, Some(alphabet))
    }

    /// Parses without checking characters against an alphabet.
    pub fn parse_unchecked(text: &str) -> Result<Formula, ParseError> {
        parser::parse_formula(text, None)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn characters(&self) -> BTreeSet<Character> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Dia(x, _) | Formula::Box(x, _) = f {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Nesting depth of connectives; atoms and `false` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Impl(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Dia(_, a) | Formula::Box(_, a) => 1 + a.depth(),
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::Bottom => {}
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Impl(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Dia(_, a) | Formula::Box(_, a) => a.visit(f),
        }
    }

    /// Simultaneously replaces atoms by formulas. Atoms outside the map stay.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(p) => map.get(p).cloned().unwrap_or_else(|| self.clone()),
            Formula::Bottom => Formula::Bottom,
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Impl(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Dia(x, a) => Formula::dia(x.clone(), a.substitute(map)),
            Formula::Box(x, a) => Formula::boxed(x.clone(), a.substitute(map)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_tree(f, self, print::Level::Top)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Free-function form of [`Character::converse`].
pub fn converse(x: &Character) -> Character {
    x.converse()
}
