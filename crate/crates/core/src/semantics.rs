// SPDX-License-Identifier: Apache-2.0

//! The satisfaction relation on bi-relational models.
//!
//! Formulas are evaluated bottom-up to the set of worlds where they hold.
//! Callers are expected to pass models that are saturated and audited; the
//! evaluator does not check frame conditions itself.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Model, ModelError, Relation, WorldSet};
use crate::syntax::{AlphabetError, Character, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("undeclared character `{0}`")]
    UndeclaredCharacter(Character),
}

impl From<ModelError> for EvalError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownWorld(w) => EvalError::UnknownWorld(w),
            ModelError::Alphabet(AlphabetError::Undeclared(x)) => EvalError::UndeclaredCharacter(x),
            other => unreachable!("evaluation cannot raise {other}"),
        }
    }
}

/// Which clause interprets `[x]A`.
///
/// `Intuitionistic` is the real semantics. `LocalOnly` drops the
/// quantification over `≤`-successors and exists so the soundness harness
/// can be shown to catch a broken evaluator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoxClause {
    #[default]
    Intuitionistic,
    LocalOnly,
}

/// Evaluates formulas on one model, caching per-character relations.
pub struct Evaluator<'m> {
    model: &'m Model,
    clause: BoxClause,
    // per character: (R_x, ≤ ; R_x)
    relations: HashMap<Character, (Relation, Relation)>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Evaluator<'m> {
        Evaluator::with_clause(model, BoxClause::Intuitionistic)
    }

    pub fn with_clause(model: &'m Model, clause: BoxClause) -> Evaluator<'m> {
        let relations = model
            .alphabet()
            .characters()
            .into_iter()
            .map(|x| {
                let r = model.accessibility(&x).expect("alphabet character");
                let up_then_r = model.leq().compose(&r);
                (x, (r, up_then_r))
            })
            .collect();
        Evaluator {
            model,
            clause,
            relations,
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    fn relations(&self, x: &Character) -> Result<&(Relation, Relation), EvalError> {
        self.relations
            .get(x)
            .ok_or_else(|| EvalError::UndeclaredCharacter(x.clone()))
    }

    /// The set of worlds satisfying `a`.
    pub fn truth_set(&self, a: &Formula) -> Result<WorldSet, EvalError> {
        Ok(match a {
            Formula::Atom(p) => self.model.atom_worlds(p),
            Formula::Bottom => WorldSet::EMPTY,
            Formula::Or(a, b) => self.truth_set(a)?.union(self.truth_set(b)?),
            Formula::And(a, b) => self.truth_set(a)?.intersection(self.truth_set(b)?),
            Formula::Impl(a, b) => self.implication(self.truth_set(a)?, self.truth_set(b)?),
            Formula::Dia(x, a) => self.diamond(x, self.truth_set(a)?)?,
            Formula::Box(x, a) => self.boxed(x, self.truth_set(a)?)?,
        })
    }

    /// Worlds all of whose `≤`-successors in `a` are in `b`.
    pub fn implication(&self, a: WorldSet, b: WorldSet) -> WorldSet {
        let leq = self.model.leq();
        let bad = a.difference(b);
        collect(self.model.world_count(), |w| {
            leq.row(w).intersection(bad).is_empty()
        })
    }

    /// Worlds with an `x`-successor in `a`.
    pub fn diamond(&self, x: &Character, a: WorldSet) -> Result<WorldSet, EvalError> {
        let (r, _) = self.relations(x)?;
        Ok(collect(self.model.world_count(), |w| {
            !r.row(w).intersection(a).is_empty()
        }))
    }

    /// Worlds where `[x]` of a formula true exactly on `a` holds.
    pub fn boxed(&self, x: &Character, a: WorldSet) -> Result<WorldSet, EvalError> {
        let (r, up_then_r) = self.relations(x)?;
        let reach = match self.clause {
            BoxClause::Intuitionistic => up_then_r,
            BoxClause::LocalOnly => r,
        };
        Ok(collect(self.model.world_count(), |w| {
            reach.row(w).is_subset(a)
        }))
    }

    pub fn satisfies_at(&self, w: usize, a: &Formula) -> Result<bool, EvalError> {
        Ok(self.truth_set(a)?.contains(w))
    }

    pub fn globally_true(&self, a: &Formula) -> Result<bool, EvalError> {
        Ok(self.truth_set(a)? == WorldSet::full(self.model.world_count()))
    }
}

fn collect(n: usize, keep: impl Fn(usize) -> bool) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for w in 0..n {
        if keep(w) {
            out.insert(w);
        }
    }
    out
}

/// `M, w ⊩ A`.
pub fn satisfies(m: &Model, world: &str, a: &Formula) -> Result<bool, EvalError> {
    let w = m.world_index(world)?;
    Evaluator::new(m).satisfies_at(w, a)
}

/// `A` holds at every world of `m`.
pub fn globally_true(m: &Model, a: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(m).globally_true(a)
}

/// If every premise holds at `world`, so does `a`.
pub fn implies_at(
    m: &Model,
    world: &str,
    premises: &[Formula],
    a: &Formula,
) -> Result<bool, EvalError> {
    let w = m.world_index(world)?;
    let eval = Evaluator::new(m);
    for b in premises {
        if !eval.satisfies_at(w, b)? {
            return Ok(true);
        }
    }
    eval.satisfies_at(w, a)
}
