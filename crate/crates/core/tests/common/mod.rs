// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracles shared by the integration tests.
//!
//! Everything here works on plain sets of index or name pairs and follows
//! the definitions literally, without the bitset machinery of the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use igl::model::{GrammarSpec, Model};
use igl::syntax::{Character, Formula};
use itertools::Itertools;

pub type Pairs = BTreeSet<(usize, usize)>;

/// A model as literal sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Naive {
    pub n: usize,
    pub leq: Pairs,
    /// Forward relations by base name.
    pub rel: BTreeMap<String, Pairs>,
    pub val: Vec<BTreeSet<String>>,
}

impl Naive {
    pub fn from_model(m: &Model) -> Naive {
        let names: Vec<String> = m.alphabet().forward_names().map(str::to_string).collect();
        Naive {
            n: m.world_count(),
            leq: m.leq().pairs().collect(),
            rel: names
                .into_iter()
                .map(|b| {
                    let pairs = m.forward_relation(&b).expect("declared").pairs().collect();
                    (b, pairs)
                })
                .collect(),
            val: (0..m.world_count())
                .map(|w| m.valuation(w).clone())
                .collect(),
        }
    }

    pub fn access(&self, x: &Character) -> Pairs {
        let r = &self.rel[x.base()];
        if x.is_forward() {
            r.clone()
        } else {
            r.iter().map(|&(w, u)| (u, w)).collect()
        }
    }

    fn le(&self, w: usize, u: usize) -> bool {
        self.leq.contains(&(w, u))
    }

    /// `M, w ⊩ A`, clause by clause.
    pub fn holds(&self, w: usize, a: &Formula) -> bool {
        let ws = 0..self.n;
        match a {
            Formula::Atom(p) => self.val[w].contains(p),
            Formula::Bottom => false,
            Formula::Or(a, b) => self.holds(w, a) || self.holds(w, b),
            Formula::And(a, b) => self.holds(w, a) && self.holds(w, b),
            Formula::Impl(a, b) => ws
                .filter(|&u| self.le(w, u))
                .all(|u| !self.holds(u, a) || self.holds(u, b)),
            Formula::Dia(x, a) => self
                .access(x)
                .iter()
                .any(|&(s, t)| s == w && self.holds(t, a)),
            Formula::Box(x, a) => {
                let r = self.access(x);
                ws.filter(|&u| self.le(w, u)).all(|u| {
                    r.iter()
                        .filter(|e| e.0 == u)
                        .all(|&(_, v)| self.holds(v, a))
                })
            }
        }
    }

    pub fn valid(&self, a: &Formula) -> bool {
        (0..self.n).all(|w| self.holds(w, a))
    }

    /// Every frame condition of a bi-relational model of `g`, checked from
    /// the definitions.
    pub fn is_model_of(&self, g: &GrammarSpec) -> bool {
        let n = self.n;
        let ws = || 0..n;
        let reflexive = ws().all(|w| self.le(w, w));
        let transitive = ws()
            .cartesian_product(ws())
            .cartesian_product(ws())
            .all(|((w, u), v)| !(self.le(w, u) && self.le(u, v)) || self.le(w, v));
        let monotone = self
            .leq
            .iter()
            .all(|&(w, u)| self.val[w].is_subset(&self.val[u]));
        if !(reflexive && transitive && monotone) {
            return false;
        }
        let chars: Vec<Character> = self
            .rel
            .keys()
            .flat_map(|b| {
                [
                    Character::forward(b.clone()),
                    Character::backward(b.clone()),
                ]
            })
            .collect();
        for x in &chars {
            let r = self.access(x);
            // F1: w R v, v ≤ v' ⇒ ∃w' ≥ w, w' R v'
            for &(w, v) in &r {
                for v2 in ws().filter(|&v2| self.le(v, v2)) {
                    if !ws().any(|w2| self.le(w, w2) && r.contains(&(w2, v2))) {
                        return false;
                    }
                }
            }
            // F2: w ≤ w', w R v ⇒ ∃v' ≥ v, w' R v'
            for &(w, v) in &r {
                for w2 in ws().filter(|&w2| self.le(w, w2)) {
                    if !ws().any(|v2| self.le(v, v2) && r.contains(&(w2, v2))) {
                        return false;
                    }
                }
            }
        }
        for x in &g.serial {
            let r = self.access(x);
            if !ws().all(|w| r.iter().any(|e| e.0 == w)) {
                return false;
            }
        }
        for p in &g.productions {
            let target = self.access(&p.lhs);
            if !path(self, &p.rhs).is_subset(&target) {
                return false;
            }
        }
        true
    }

    /// The model under a world permutation.
    pub fn permuted(&self, perm: &[usize]) -> Naive {
        let map = |s: &Pairs| s.iter().map(|&(w, u)| (perm[w], perm[u])).collect();
        let mut val = vec![BTreeSet::new(); self.n];
        for (w, atoms) in self.val.iter().enumerate() {
            val[perm[w]] = atoms.clone();
        }
        Naive {
            n: self.n,
            leq: map(&self.leq),
            rel: self.rel.iter().map(|(b, r)| (b.clone(), map(r))).collect(),
            val,
        }
    }

    /// Least representative of the isomorphism class.
    pub fn canonical(&self) -> Naive {
        (0..self.n)
            .permutations(self.n)
            .map(|p| self.permuted(&p))
            .min()
            .expect("identity")
    }
}

fn path(m: &Naive, xs: &[Character]) -> Pairs {
    let mut acc: Pairs = (0..m.n).map(|w| (w, w)).collect();
    for x in xs {
        let r = m.access(x);
        acc = acc
            .iter()
            .flat_map(|&(w, u)| {
                r.iter()
                    .filter(move |e| e.0 == u)
                    .map(move |&(_, v)| (w, v))
            })
            .collect();
    }
    acc
}

fn subsets(universe: &[(usize, usize)]) -> Vec<Pairs> {
    (0..(1u64 << universe.len()))
        .map(|mask| {
            universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect()
        })
        .collect()
}

/// Generate-and-filter: every structure on `n` worlds, kept if it is a model
/// of `g`, one per isomorphism class.
pub fn brute_force_models(
    names: &[&str],
    g: &GrammarSpec,
    atoms: &[&str],
    n: usize,
) -> BTreeSet<Naive> {
    let all_pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
    let relations = subsets(&all_pairs);
    let worlds: Vec<usize> = (0..n).collect();
    let world_sets: Vec<BTreeSet<usize>> = worlds
        .iter()
        .copied()
        .powerset()
        .map(|s| s.into_iter().collect())
        .collect();
    let mut out = BTreeSet::new();
    let rel_choices = names
        .iter()
        .map(|_| relations.iter())
        .multi_cartesian_product();
    let rel_choices: Vec<Vec<&Pairs>> = if names.is_empty() {
        vec![Vec::new()]
    } else {
        rel_choices.collect()
    };
    let val_choices: Vec<Vec<&BTreeSet<usize>>> = if atoms.is_empty() {
        vec![Vec::new()]
    } else {
        atoms
            .iter()
            .map(|_| world_sets.iter())
            .multi_cartesian_product()
            .collect()
    };
    for leq in &relations {
        for rels in &rel_choices {
            for vals in &val_choices {
                let mut val = vec![BTreeSet::new(); n];
                for (p, set) in atoms.iter().zip(vals) {
                    for &w in *set {
                        val[w].insert(p.to_string());
                    }
                }
                let m = Naive {
                    n,
                    leq: leq.clone(),
                    rel: names
                        .iter()
                        .zip(rels)
                        .map(|(b, r)| (b.to_string(), (*r).clone()))
                        .collect(),
                    val,
                };
                if m.is_model_of(g) {
                    out.insert(m.canonical());
                }
            }
        }
    }
    out
}

/// Named pre-model for the saturation oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPreModel {
    pub leq: BTreeSet<(String, String)>,
    /// Forward relations by base name.
    pub rel: BTreeMap<String, BTreeSet<(String, String)>>,
    pub val: BTreeMap<String, BTreeSet<String>>,
}

impl NamedPreModel {
    pub fn from_model(m: &Model) -> NamedPreModel {
        let name = |w: usize| m.world_name(w).to_string();
        NamedPreModel {
            leq: m.leq().pairs().map(|(w, u)| (name(w), name(u))).collect(),
            rel: m
                .alphabet()
                .forward_names()
                .map(|b| {
                    let r = m.forward_relation(b).expect("declared");
                    (
                        b.to_string(),
                        r.pairs().map(|(w, u)| (name(w), name(u))).collect(),
                    )
                })
                .collect(),
            val: (0..m.world_count())
                .map(|w| (name(w), m.valuation(w).clone()))
                .collect(),
        }
    }
}

/// Iterates every closure rule on string pairs until nothing changes.
pub fn naive_saturate(worlds: &[String], pre: &NamedPreModel, g: &GrammarSpec) -> NamedPreModel {
    let mut m = pre.clone();
    let edges = |m: &NamedPreModel, x: &Character| -> BTreeSet<(String, String)> {
        let r = &m.rel[x.base()];
        if x.is_forward() {
            r.clone()
        } else {
            r.iter().map(|(w, u)| (u.clone(), w.clone())).collect()
        }
    };
    loop {
        let mut changed = false;
        for w in worlds {
            changed |= m.leq.insert((w.clone(), w.clone()));
        }
        let snapshot = m.leq.clone();
        for (w, u) in &snapshot {
            for (u2, v) in &snapshot {
                if u == u2 {
                    changed |= m.leq.insert((w.clone(), v.clone()));
                }
            }
        }
        for (w, u) in &m.leq.clone() {
            let from = m.val[w].clone();
            let to = m.val.get_mut(u).expect("world");
            for p in from {
                changed |= to.insert(p);
            }
        }
        for p in &g.productions {
            let mut reach: BTreeSet<(String, String)> =
                worlds.iter().map(|w| (w.clone(), w.clone())).collect();
            for x in &p.rhs {
                let r = edges(&m, x);
                reach = reach
                    .iter()
                    .flat_map(|(w, u)| {
                        r.iter()
                            .filter(move |(s, _)| s == u)
                            .map(move |(_, v)| (w.clone(), v.clone()))
                    })
                    .collect();
            }
            let stored = m.rel.get_mut(p.lhs.base()).expect("declared");
            for (w, v) in reach {
                let e = if p.lhs.is_forward() { (w, v) } else { (v, w) };
                changed |= stored.insert(e);
            }
        }
        if !changed {
            return m;
        }
    }
}
