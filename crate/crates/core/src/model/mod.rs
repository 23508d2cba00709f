// SPDX-License-Identifier: Apache-2.0

//! Finite bi-relational models.
//!
//! A [`Model`] stores a preorder `≤`, one accessibility relation per forward
//! character, and a valuation. The relation of a backward character `a-` is
//! always read off as the converse of the stored relation for `a`, so the
//! converse law holds by construction.
//!
//! [`saturate`] computes the least closure of a pre-model under the preorder
//! laws, monotone valuation, and the frame conditions of a [`GrammarSpec`]'s
//! productions. [`audit`] checks every condition and reports witnesses; the
//! existential conditions (F1, F2, seriality) are only ever audited.

mod relation;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{is_identifier, Alphabet, AlphabetError, Character};

pub use relation::{Relation, WorldSet, MAX_WORLDS};
pub use text::{grammar_to_text, parse_grammar, parse_model, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("{0} worlds requested, at most {MAX_WORLDS} supported")]
    TooManyWorlds(usize),
    #[error("world `{0}` declared twice")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("`{0}` is not a valid atom name")]
    InvalidAtom(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    alphabet: Alphabet,
    worlds: Vec<String>,
    leq: Relation,
    rel: BTreeMap<String, Relation>,
    val: Vec<BTreeSet<String>>,
}

impl Model {
    /// A model with the given worlds and no pairs or atoms at all.
    pub fn new<I, S>(alphabet: Alphabet, worlds: I) -> Result<Model, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        if worlds.len() > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(worlds.len()));
        }
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        let rel = alphabet
            .forward_names()
            .map(|a| (a.to_string(), Relation::empty(n)))
            .collect();
        Ok(Model {
            alphabet,
            leq: Relation::empty(n),
            rel,
            val: vec![BTreeSet::new(); n],
            worlds,
        })
    }

    /// Builds a model from index-level parts. Worlds are named `w0`, `w1`, ...
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        leq: Relation,
        rel: BTreeMap<String, Relation>,
        val: Vec<BTreeSet<String>>,
    ) -> Model {
        let n = leq.size();
        debug_assert!(rel.values().all(|r| r.size() == n) && val.len() == n);
        Model {
            alphabet,
            worlds: (0..n).map(|i| format!("w{i}")).collect(),
            leq,
            rel,
            val,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn leq(&self) -> &Relation {
        &self.leq
    }

    /// Stored relation of a forward character name.
    pub fn forward_relation(&self, base: &str) -> Option<&Relation> {
        self.rel.get(base)
    }

    pub fn valuation(&self, w: usize) -> &BTreeSet<String> {
        &self.val[w]
    }

    /// Worlds whose valuation contains `atom`.
    pub fn atom_worlds(&self, atom: &str) -> WorldSet {
        let mut set = WorldSet::EMPTY;
        for (w, v) in self.val.iter().enumerate() {
            if v.contains(atom) {
                set.insert(w);
            }
        }
        set
    }

    /// All atoms occurring in the valuation.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.val.iter().flatten().cloned().collect()
    }

    pub fn add_leq(&mut self, w: &str, u: &str) -> Result<(), ModelError> {
        let (w, u) = (self.world_index(w)?, self.world_index(u)?);
        self.leq.insert(w, u);
        Ok(())
    }

    /// Adds `w R_x u`; for a backward `x` this stores `u R_a w`.
    pub fn add_edge(&mut self, x: &Character, w: &str, u: &str) -> Result<(), ModelError> {
        self.alphabet.check(x)?;
        let (w, u) = (self.world_index(w)?, self.world_index(u)?);
        let stored = self.rel.get_mut(x.base()).expect("declared");
        if x.is_forward() {
            stored.insert(w, u);
        } else {
            stored.insert(u, w);
        }
        Ok(())
    }

    pub fn add_atom(&mut self, w: &str, atom: &str) -> Result<(), ModelError> {
        if !is_identifier(atom) || atom == "false" {
            return Err(ModelError::InvalidAtom(atom.to_string()));
        }
        let w = self.world_index(w)?;
        self.val[w].insert(atom.to_string());
        Ok(())
    }

    /// The accessibility relation of any character, converse-aware.
    pub fn accessibility(&self, x: &Character) -> Result<Relation, ModelError> {
        self.alphabet.check(x)?;
        let stored = &self.rel[x.base()];
        Ok(if x.is_forward() {
            stored.clone()
        } else {
            stored.transpose()
        })
    }

    /// `R_x` as a set of named world pairs.
    pub fn edge_lookup(&self, x: &Character) -> Result<BTreeSet<(String, String)>, ModelError> {
        Ok(self
            .accessibility(x)?
            .pairs()
            .map(|(w, u)| (self.worlds[w].clone(), self.worlds[u].clone()))
            .collect())
    }

    /// Composition `R_{x1} ; ... ; R_{xn}`; the identity for an empty path.
    fn path_relation(&self, path: &[Character]) -> Result<Relation, ModelError> {
        path.iter()
            .try_fold(Relation::identity(self.world_count()), |acc, x| {
                Ok(acc.compose(&self.accessibility(x)?))
            })
    }

    /// Adds all pairs of `r` to `R_x`; returns whether anything changed.
    fn extend_relation(&mut self, x: &Character, r: &Relation) -> bool {
        let stored = self.rel.get_mut(x.base()).expect("declared");
        if x.is_forward() {
            stored.union_with(r)
        } else {
            stored.union_with(&r.transpose())
        }
    }
}

/// Free-function form of [`Model::edge_lookup`].
pub fn edge_lookup(m: &Model, x: &Character) -> Result<BTreeSet<(String, String)>, ModelError> {
    m.edge_lookup(x)
}

/// A production `x -> x1 ... xn`, read as the path axiom it encodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Character,
    pub rhs: Vec<Character>,
}

impl Production {
    pub fn new(lhs: Character, rhs: impl IntoIterator<Item = Character>) -> Production {
        Production {
            lhs,
            rhs: rhs.into_iter().collect(),
        }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for x in &self.rhs {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

impl Serialize for Production {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The extra axioms: seriality for some characters, and path axioms given as
/// context-free productions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrammarSpec {
    pub serial: BTreeSet<Character>,
    pub productions: Vec<Production>,
}

impl GrammarSpec {
    pub fn empty() -> GrammarSpec {
        GrammarSpec::default()
    }

    pub fn with_serial(mut self, x: Character) -> GrammarSpec {
        self.serial.insert(x);
        self
    }

    pub fn with_production(mut self, p: Production) -> GrammarSpec {
        self.productions.push(p);
        self
    }

    pub fn characters(&self) -> BTreeSet<Character> {
        let mut out = self.serial.clone();
        for p in &self.productions {
            out.insert(p.lhs.clone());
            out.extend(p.rhs.iter().cloned());
        }
        out
    }

    pub fn check(&self, alphabet: &Alphabet) -> Result<(), AlphabetError> {
        self.characters().iter().try_for_each(|x| alphabet.check(x))
    }
}

/// Least extension of `m` that is a preorder-closed, monotone model whose
/// relations are closed under every production of `g`.
///
/// Fails only when `g` mentions a character outside the model's alphabet.
pub fn saturate(m: &Model, g: &GrammarSpec) -> Result<Model, ModelError> {
    g.check(&m.alphabet)?;
    let mut out = m.clone();
    out.leq = m.leq.reflexive_transitive_closure();
    // leq is transitive now, so one pass propagates every atom.
    for (w, u) in out.leq.pairs().collect::<Vec<_>>() {
        if w != u {
            let inherited = out.val[w].clone();
            out.val[u].extend(inherited);
        }
    }
    loop {
        let mut changed = false;
        for p in &g.productions {
            let path = out.path_relation(&p.rhs)?;
            changed |= out.extend_relation(&p.lhs, &path);
        }
        if !changed {
            break;
        }
    }
    Ok(out)
}

/// One failed frame condition, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Violation {
    PreorderReflexive {
        world: String,
    },
    PreorderTransitive {
        w: String,
        u: String,
        v: String,
    },
    MonotoneValuation {
        w: String,
        u: String,
        atom: String,
    },
    #[serde(rename = "F1")]
    F1 {
        character: Character,
        w: String,
        v: String,
        v_prime: String,
    },
    #[serde(rename = "F2")]
    F2 {
        character: Character,
        w: String,
        w_prime: String,
        v: String,
    },
    Seriality {
        character: Character,
        world: String,
    },
    Path {
        production: Production,
        from: String,
        to: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PreorderReflexive { world } => {
                write!(f, "preorder-reflexive: not {world} <= {world}")
            }
            Violation::PreorderTransitive { w, u, v } => {
                write!(f, "preorder-transitive: {w} <= {u} and {u} <= {v} but not {w} <= {v}")
            }
            Violation::MonotoneValuation { w, u, atom } => write!(
                f,
                "monotone-valuation: {w} <= {u} and {atom} holds at {w} but not at {u}"
            ),
            Violation::F1 {
                character: x,
                w,
                v,
                v_prime,
            } => write!(
                f,
                "F1({x}): {w} R_{x} {v} and {v} <= {v_prime} but no w' with {w} <= w' and w' R_{x} {v_prime}"
            ),
            Violation::F2 {
                character: x,
                w,
                w_prime,
                v,
            } => write!(
                f,
                "F2({x}): {w} <= {w_prime} and {w} R_{x} {v} but no v' with {w_prime} R_{x} v' and {v} <= v'"
            ),
            Violation::Seriality { character: x, world } => {
                write!(f, "seriality({x}): {world} has no {x}-successor")
            }
            Violation::Path {
                production,
                from,
                to,
            } => write!(
                f,
                "path({production}): a path from {from} to {to} but not {from} R_{} {to}",
                production.lhs
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Triples `(w, v, v')` with `w R v`, `v ≤ v'` and no `w'` with `w ≤ w' R v'`.
pub(crate) fn f1_failures<'a>(
    leq: &'a Relation,
    r: &'a Relation,
) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
    r.pairs().flat_map(move |(w, v)| {
        leq.row(v).iter().filter_map(move |v2| {
            let reach = r.image(leq.row(w));
            (!reach.contains(v2)).then_some((w, v, v2))
        })
    })
}

/// Triples `(w, w', v)` with `w ≤ w'`, `w R v` and no `v'` with `w' R v' ≥ v`.
pub(crate) fn f2_failures<'a>(
    leq: &'a Relation,
    r: &'a Relation,
) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
    (0..leq.size()).flat_map(move |w| {
        leq.row(w).iter().flat_map(move |w2| {
            r.row(w).iter().filter_map(move |v| {
                r.row(w2)
                    .intersection(leq.row(v))
                    .is_empty()
                    .then_some((w, w2, v))
            })
        })
    })
}

/// Checks every condition a bi-relational model for `g` must satisfy.
pub fn audit(m: &Model, g: &GrammarSpec) -> Result<AuditReport, ModelError> {
    g.check(&m.alphabet)?;
    let name = |w: usize| m.worlds[w].clone();
    let n = m.world_count();
    let leq = &m.leq;
    let mut violations = Vec::new();

    for w in 0..n {
        if !leq.contains(w, w) {
            violations.push(Violation::PreorderReflexive { world: name(w) });
        }
    }
    for (w, u) in leq.pairs() {
        for v in leq.row(u).iter() {
            if !leq.contains(w, v) {
                violations.push(Violation::PreorderTransitive {
                    w: name(w),
                    u: name(u),
                    v: name(v),
                });
            }
        }
    }
    for (w, u) in leq.pairs() {
        for atom in m.val[w].difference(&m.val[u]) {
            violations.push(Violation::MonotoneValuation {
                w: name(w),
                u: name(u),
                atom: atom.clone(),
            });
        }
    }
    for x in m.alphabet.characters() {
        let r = m.accessibility(&x)?;
        for (w, v, v_prime) in f1_failures(leq, &r) {
            violations.push(Violation::F1 {
                character: x.clone(),
                w: name(w),
                v: name(v),
                v_prime: name(v_prime),
            });
        }
        for (w, w_prime, v) in f2_failures(leq, &r) {
            violations.push(Violation::F2 {
                character: x.clone(),
                w: name(w),
                w_prime: name(w_prime),
                v: name(v),
            });
        }
    }
    for x in &g.serial {
        let r = m.accessibility(x)?;
        for w in 0..n {
            if r.row(w).is_empty() {
                violations.push(Violation::Seriality {
                    character: x.clone(),
                    world: name(w),
                });
            }
        }
    }
    for p in &g.productions {
        let path = m.path_relation(&p.rhs)?;
        let target = m.accessibility(&p.lhs)?;
        for (from, to) in path.pairs() {
            if !target.contains(from, to) {
                violations.push(Violation::Path {
                    production: p.clone(),
                    from: name(from),
                    to: name(to),
                });
            }
        }
    }
    Ok(AuditReport { violations })
}

/// Whether `m` is a bi-relational model satisfying every condition of `g`.
pub fn is_birelational(m: &Model, g: &GrammarSpec) -> Result<bool, ModelError> {
    Ok(audit(m, g)?.is_empty())
}
