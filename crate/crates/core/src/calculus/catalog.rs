// SPDX-License-Identifier: Apache-2.0

//! Axiom schemas.

use std::collections::BTreeSet;

use crate::model::{GrammarSpec, Production};
use crate::syntax::{Alphabet, AlphabetError, CharPattern, Character, Schema};

/// Name of the character metavariable used by the modal schemas.
pub const CHAR_VAR: &str = "x";

/// Intuitionistic propositional basis.
const PROPOSITIONAL: [(&str, &str); 9] = [
    ("IPL1", "A -> (B -> A)"),
    ("IPL2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    ("IPL3", "A & B -> A"),
    ("IPL4", "A & B -> B"),
    ("IPL5", "A -> (B -> A & B)"),
    ("IPL6", "A -> A | B"),
    ("IPL7", "B -> A | B"),
    ("IPL8", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
    ("IPL9", "false -> A"),
];

const MODAL: [(&str, &str); 9] = [
    ("A1", "[x](A -> B) -> ([x]A -> [x]B)"),
    ("A2", "[x](A & B) <-> [x]A & [x]B"),
    ("A3", "<x>(A | B) <-> <x>A | <x>B"),
    ("A4", "[x](A -> B) -> (<x>A -> <x>B)"),
    ("A5", "[x]A & <x>B -> <x>(A & B)"),
    ("A6", "~<x>false"),
    ("A7", "(A -> [x]<x->A) & (<x>[x-]A -> A)"),
    ("A8", "(<x>A -> [x]B) -> [x](A -> B)"),
    ("A9", "<x>(A -> B) -> ([x]A -> <x>B)"),
];

/// The seriality schema `[x]A -> <x>A`.
pub fn seriality_schema() -> Schema {
    Schema::parse("[x]A -> <x>A", &[CHAR_VAR]).expect("built-in schema")
}

/// The path axiom of a production `x -> x1 ... xn`:
/// `(<x1>...<xn>A -> <x>A) & ([x]A -> [x1]...[xn]A)`.
pub fn ipa_schema(prod: &Production) -> Schema {
    let a = || Schema::Meta("A".into());
    let fixed = |x: &Character| CharPattern::Fixed(x.clone());
    let dia_chain = prod
        .rhs
        .iter()
        .rev()
        .fold(a(), |acc, x| Schema::Dia(fixed(x), Box::new(acc)));
    let box_chain = prod
        .rhs
        .iter()
        .rev()
        .fold(a(), |acc, x| Schema::Box(fixed(x), Box::new(acc)));
    Schema::and(
        Schema::implies(dia_chain, Schema::Dia(fixed(&prod.lhs), Box::new(a()))),
        Schema::implies(Schema::Box(fixed(&prod.lhs), Box::new(a())), box_chain),
    )
}

/// Conventional name of a production's path axiom, when it has one.
fn classic_name(prod: &Production) -> Option<String> {
    let x = &prod.lhs;
    let xc = x.converse();
    let family = match prod.rhs.as_slice() {
        [] => "T",
        [y] if *y == xc => "B",
        [y, z] if *y == *x && *z == *x => "4",
        [y, z] if *y == xc && *z == *x => "5",
        _ => return None,
    };
    Some(format!("{family}_{x}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub schema: Schema,
    /// Characters the metavariable `x` may stand for; `None` means any.
    pub char_domain: Option<BTreeSet<Character>>,
}

impl CatalogEntry {
    fn new(name: &str, schema: Schema) -> CatalogEntry {
        CatalogEntry {
            name: name.to_string(),
            aliases: Vec::new(),
            schema,
            char_domain: None,
        }
    }

    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }

    /// Whether `x` may instantiate the character metavariable.
    pub fn admits(&self, x: &Character) -> bool {
        self.char_domain.as_ref().is_none_or(|d| d.contains(x))
    }
}

/// The axioms available for one grammar: the propositional basis, A1–A9,
/// `D` for serial characters, and one path axiom per production.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCatalog {
    entries: Vec<CatalogEntry>,
}

impl AxiomCatalog {
    /// The base logic without extra axioms.
    pub fn base() -> AxiomCatalog {
        let entries = PROPOSITIONAL
            .iter()
            .chain(MODAL.iter())
            .map(|(name, text)| {
                CatalogEntry::new(
                    name,
                    Schema::parse(text, &[CHAR_VAR]).expect("built-in schema"),
                )
            })
            .collect();
        AxiomCatalog { entries }
    }

    pub fn new(alphabet: &Alphabet, g: &GrammarSpec) -> Result<AxiomCatalog, AlphabetError> {
        g.check(alphabet)?;
        let mut catalog = AxiomCatalog::base();
        if !g.serial.is_empty() {
            let mut d = CatalogEntry::new("D", seriality_schema());
            d.char_domain = Some(g.serial.clone());
            catalog.entries.push(d);
        }
        for (i, prod) in g.productions.iter().enumerate() {
            let mut entry = CatalogEntry::new(&format!("IPA{}", i + 1), ipa_schema(prod));
            entry.aliases.extend(classic_name(prod));
            catalog.entries.push(entry);
        }
        Ok(catalog)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.answers_to(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{match_schema, Formula};

    fn sigma() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn a() -> Character {
        Character::forward("a")
    }

    fn inst(s: &Schema, text: &str) -> bool {
        match_schema(s, &Formula::parse(text, &sigma()).unwrap()).is_some()
    }

    #[test]
    fn ipa_reflexive() {
        let s = ipa_schema(&Production::new(a(), []));
        assert_eq!(s.to_string(), "(A -> <a>A) & ([a]A -> A)");
    }

    #[test]
    fn ipa_transitive() {
        let s = ipa_schema(&Production::new(a(), [a(), a()]));
        assert_eq!(s.to_string(), "(<a><a>A -> <a>A) & ([a]A -> [a][a]A)");
    }

    #[test]
    fn ipa_euclidean_and_symmetric() {
        let s = ipa_schema(&Production::new(a(), [a().converse(), a()]));
        assert_eq!(s.to_string(), "(<a-><a>A -> <a>A) & ([a]A -> [a-][a]A)");
        let s = ipa_schema(&Production::new(a(), [a().converse()]));
        assert_eq!(s.to_string(), "(<a->A -> <a>A) & ([a]A -> [a-]A)");
    }

    #[test]
    fn classic_names() {
        let names: Vec<Option<String>> = [
            Production::new(a(), []),
            Production::new(a(), [a().converse()]),
            Production::new(a(), [a(), a()]),
            Production::new(a(), [a().converse(), a()]),
            Production::new(a(), [a()]),
        ]
        .iter()
        .map(classic_name)
        .collect();
        assert_eq!(
            names,
            [
                Some("T_a".to_string()),
                Some("B_a".to_string()),
                Some("4_a".to_string()),
                Some("5_a".to_string()),
                None
            ]
        );
        let ac = a().converse();
        assert_eq!(
            classic_name(&Production::new(ac.clone(), [])).unwrap(),
            "T_a-"
        );
    }

    #[test]
    fn base_catalog_contents() {
        let c = AxiomCatalog::base();
        assert_eq!(c.entries().len(), 18);
        assert!(inst(&c.get("A6").unwrap().schema, "~<a->false"));
        assert!(inst(
            &c.get("A2").unwrap().schema,
            "([a](p & q) -> [a]p & [a]q) & ([a]p & [a]q -> [a](p & q))"
        ));
        assert!(inst(&c.get("IPL9").unwrap().schema, "false -> <a>p"));
        assert!(c.get("D").is_none());
    }

    #[test]
    fn extended_catalog() {
        let g = GrammarSpec::empty()
            .with_serial(a())
            .with_production(Production::new(a(), []))
            .with_production(Production::new(a(), [a(), a(), a()]));
        let c = AxiomCatalog::new(&sigma(), &g).unwrap();
        assert_eq!(c.entries().len(), 21);
        let d = c.get("D").unwrap();
        assert!(d.admits(&a()) && !d.admits(&a().converse()));
        assert_eq!(c.get("T_a").unwrap().name, "IPA1");
        assert!(c.get("IPA2").is_some());
        assert!(c.get("IPA3").is_none());
        assert!(AxiomCatalog::new(
            &sigma(),
            &GrammarSpec::empty().with_serial(Character::forward("b"))
        )
        .is_err());
    }
}
