// SPDX-License-Identifier: Apache-2.0

//! Exhaustive enumeration of small models up to isomorphism.
//!
//! For a world count `n` the enumerator walks every preorder on `n` worlds,
//! every assignment of forward relations, and every monotone valuation. A
//! candidate is kept when its relations are already closed under the
//! grammar's productions (the closure of any other candidate is itself a
//! candidate) and it passes F1, F2 and seriality for every character.
//! Survivors are deduplicated by the lexicographically least encoding over
//! all world permutations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use super::SearchError;
use crate::model::{f1_failures, f2_failures, GrammarSpec, Model, Relation, WorldSet};
use crate::syntax::{Alphabet, Character};

/// Default cap on `preorders × relation assignments` examined per world count.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Largest world count the permutation-based canonizer accepts.
pub const MAX_ENUMERATION_WORLDS: usize = 6;

/// Enumerates audited, saturated models over a fixed alphabet and atom set.
#[derive(Clone, Debug)]
pub struct Enumerator {
    alphabet: Alphabet,
    grammar: GrammarSpec,
    atoms: Vec<String>,
    budget: u64,
}

impl Enumerator {
    pub fn new(
        alphabet: &Alphabet,
        grammar: &GrammarSpec,
        atoms: impl IntoIterator<Item = impl Into<String>>,
        budget: u64,
    ) -> Result<Enumerator, SearchError> {
        grammar.check(alphabet)?;
        let atoms: BTreeSet<String> = atoms.into_iter().map(Into::into).collect();
        Ok(Enumerator {
            alphabet: alphabet.clone(),
            grammar: grammar.clone(),
            atoms: atoms.into_iter().collect(),
            budget,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// All models with exactly `n` worlds, one per isomorphism class.
    pub fn models_of_size(&self, n: usize) -> Result<Vec<Model>, SearchError> {
        if n == 0 || n > MAX_ENUMERATION_WORLDS {
            return Err(SearchError::InvalidBound(n));
        }
        let names: Vec<&str> = self.alphabet.forward_names().collect();
        let bits_per_char = n * n;
        let rel_bits = bits_per_char * names.len();
        let preorders = preorders(n);
        let needed = if rel_bits >= 64 {
            u128::MAX
        } else {
            preorders.len() as u128 * (1u128 << rel_bits)
        };
        if needed > self.budget as u128 {
            return Err(SearchError::Budget {
                worlds: n,
                needed,
                budget: self.budget,
            });
        }
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let characters = self.alphabet.characters();

        let per_preorder: Vec<Vec<(Vec<u64>, Structure)>> = preorders
            .par_iter()
            .map(|leq| {
                let upsets = upsets(leq);
                let mut local = Vec::new();
                let mut seen = HashSet::new();
                for code in 0..(1u64 << rel_bits) {
                    let rel: Vec<Relation> = (0..names.len())
                        .map(|i| decode(code >> (i * bits_per_char), n))
                        .collect();
                    if !self.admissible(leq, &names, &rel, &characters) {
                        continue;
                    }
                    for val in valuations(&upsets, self.atoms.len()) {
                        let s = Structure {
                            leq: leq.clone(),
                            rel: rel.clone(),
                            val,
                        };
                        let (key, canonical) = s.canonical(&perms);
                        if seen.insert(key.clone()) {
                            local.push((key, canonical));
                        }
                    }
                }
                local
            })
            .collect();

        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (key, s) in per_preorder.into_iter().flatten() {
            if seen.insert(key) {
                out.push(s.into_model(&self.alphabet, &names, &self.atoms));
            }
        }
        Ok(out)
    }

    fn admissible(
        &self,
        leq: &Relation,
        names: &[&str],
        rel: &[Relation],
        characters: &[Character],
    ) -> bool {
        let lookup = |x: &Character| {
            let i = names.iter().position(|b| *b == x.base()).expect("declared");
            if x.is_forward() {
                rel[i].clone()
            } else {
                rel[i].transpose()
            }
        };
        for p in &self.grammar.productions {
            let n = leq.size();
            let path = p
                .rhs
                .iter()
                .fold(Relation::identity(n), |acc, x| acc.compose(&lookup(x)));
            if !path.is_subset(&lookup(&p.lhs)) {
                return false;
            }
        }
        for x in &self.grammar.serial {
            if lookup(x).rows().iter().any(|r| r.is_empty()) {
                return false;
            }
        }
        characters.iter().all(|x| {
            let r = lookup(x);
            f1_failures(leq, &r).next().is_none() && f2_failures(leq, &r).next().is_none()
        })
    }

    /// Models with 1 to `max_worlds` worlds, in increasing size.
    pub fn models_up_to(&self, max_worlds: usize) -> Result<Vec<Model>, SearchError> {
        let mut out = Vec::new();
        for n in 1..=max_worlds {
            out.extend(self.models_of_size(n)?);
        }
        Ok(out)
    }
}

/// Every audited, saturated model with at most `max_worlds` worlds, up to
/// isomorphism, smallest first.
pub fn enumerate_models(
    alphabet: &Alphabet,
    grammar: &GrammarSpec,
    atoms: &BTreeSet<String>,
    max_worlds: usize,
    budget: u64,
) -> Result<Vec<Model>, SearchError> {
    if max_worlds == 0 {
        return Err(SearchError::InvalidBound(0));
    }
    Enumerator::new(alphabet, grammar, atoms.iter().cloned(), budget)?.models_up_to(max_worlds)
}

#[derive(Clone)]
struct Structure {
    leq: Relation,
    rel: Vec<Relation>,
    val: Vec<WorldSet>,
}

impl Structure {
    fn encode(&self) -> Vec<u64> {
        let rows = |r: &Relation| r.rows().iter().map(|s| s.0).collect::<Vec<_>>();
        let mut key = rows(&self.leq);
        for r in &self.rel {
            key.extend(rows(r));
        }
        key.extend(self.val.iter().map(|s| s.0));
        key
    }

    fn permuted(&self, perm: &[usize]) -> Structure {
        Structure {
            leq: permute_relation(&self.leq, perm),
            rel: self.rel.iter().map(|r| permute_relation(r, perm)).collect(),
            val: self.val.iter().map(|s| permute_set(*s, perm)).collect(),
        }
    }

    fn canonical(&self, perms: &[Vec<usize>]) -> (Vec<u64>, Structure) {
        perms
            .iter()
            .map(|p| {
                let s = self.permuted(p);
                (s.encode(), s)
            })
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("at least the identity permutation")
    }

    fn into_model(self, alphabet: &Alphabet, names: &[&str], atoms: &[String]) -> Model {
        let n = self.leq.size();
        let rel: BTreeMap<String, Relation> =
            names.iter().map(|s| s.to_string()).zip(self.rel).collect();
        let mut val = vec![BTreeSet::new(); n];
        for (atom, set) in atoms.iter().zip(&self.val) {
            for w in set.iter() {
                val[w].insert(atom.clone());
            }
        }
        Model::from_parts(alphabet.clone(), self.leq, rel, val)
    }
}

fn permute_set(s: WorldSet, perm: &[usize]) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for w in s.iter() {
        out.insert(perm[w]);
    }
    out
}

fn permute_relation(r: &Relation, perm: &[usize]) -> Relation {
    let mut out = Relation::empty(r.size());
    for (w, u) in r.pairs() {
        out.insert(perm[w], perm[u]);
    }
    out
}

fn decode(code: u64, n: usize) -> Relation {
    let row_mask = (1u64 << n) - 1;
    Relation::from_rows(
        (0..n)
            .map(|w| WorldSet((code >> (w * n)) & row_mask))
            .collect(),
    )
}

/// All preorders on `n` worlds.
pub(crate) fn preorders(n: usize) -> Vec<Relation> {
    let off_diagonal: Vec<(usize, usize)> = (0..n)
        .flat_map(|w| (0..n).filter(move |&u| u != w).map(move |u| (w, u)))
        .collect();
    (0..(1u64 << off_diagonal.len()))
        .filter_map(|mask| {
            let mut r = Relation::identity(n);
            for (i, &(w, u)) in off_diagonal.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    r.insert(w, u);
                }
            }
            (r.reflexive_transitive_closure() == r).then_some(r)
        })
        .collect()
}

/// Sets of worlds closed upward under `leq`.
fn upsets(leq: &Relation) -> Vec<WorldSet> {
    (0..(1u64 << leq.size()))
        .map(WorldSet)
        .filter(|s| s.iter().all(|w| leq.row(w).is_subset(*s)))
        .collect()
}

/// One up-set per atom, in every combination.
fn valuations(upsets: &[WorldSet], atoms: usize) -> Vec<Vec<WorldSet>> {
    let mut out = vec![Vec::new()];
    for _ in 0..atoms {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                upsets.iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(*s);
                    v
                })
            })
            .collect();
    }
    out
}
