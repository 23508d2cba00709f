// SPDX-License-Identifier: Apache-2.0

//! Bounded model search: enumeration, countermodels, and the soundness
//! harness.

mod enumerate;
mod gen;
mod harness;

use thiserror::Error;

use crate::model::{audit, GrammarSpec, Model};
use crate::semantics::{EvalError, Evaluator};
use crate::syntax::{Alphabet, AlphabetError, Formula};

pub use enumerate::{enumerate_models, Enumerator, DEFAULT_BUDGET, MAX_ENUMERATION_WORLDS};
pub use gen::{formulas_up_to_depth_one, leaves, random_formula};
pub use harness::{
    rule_preservation_check, soundness_harness, HarnessConfig, HarnessFailure, HarnessReport,
    RuleReport, MAX_RECORDED_FAILURES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("enumerating {worlds}-world models needs {needed} candidates, budget is {budget}")]
    Budget {
        worlds: usize,
        needed: u128,
        budget: u64,
    },
    #[error("world bound {0} is outside 1..={max}", max = MAX_ENUMERATION_WORLDS)]
    InvalidBound(usize),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("candidate countermodel failed re-verification")]
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    /// `world` refutes the formula in `model`.
    Countermodel { model: Model, world: String },
    /// No countermodel with at most this many worlds.
    ValidUpTo(usize),
}

/// Searches models of `g` in increasing size for a world refuting `a`.
///
/// Only the atoms of `a` are valuated. A hit is re-audited and re-evaluated
/// before it is returned.
pub fn find_countermodel(
    a: &Formula,
    alphabet: &Alphabet,
    g: &GrammarSpec,
    max_worlds: usize,
    budget: u64,
) -> Result<SearchResult, SearchError> {
    if max_worlds == 0 || max_worlds > MAX_ENUMERATION_WORLDS {
        return Err(SearchError::InvalidBound(max_worlds));
    }
    for x in a.characters() {
        alphabet.check(&x)?;
    }
    let e = Enumerator::new(alphabet, g, a.atoms(), budget)?;
    for n in 1..=max_worlds {
        for m in e.models_of_size(n)? {
            let holds = Evaluator::new(&m).truth_set(a)?;
            if let Some(w) = (0..n).find(|&w| !holds.contains(w)) {
                let clean = audit(&m, g).map_err(|_| SearchError::VerificationFailed)?;
                let w_name = m.world_name(w).to_string();
                if !clean.is_empty() || crate::semantics::satisfies(&m, &w_name, a)? {
                    return Err(SearchError::VerificationFailed);
                }
                return Ok(SearchResult::Countermodel {
                    model: m,
                    world: w_name,
                });
            }
        }
    }
    Ok(SearchResult::ValidUpTo(max_worlds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::AxiomCatalog;
    use crate::model::Production;
    use crate::semantics::{satisfies, BoxClause};
    use crate::syntax::Character;

    fn sigma() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s, &sigma()).unwrap()
    }

    fn a() -> Character {
        Character::forward("a")
    }

    #[test]
    fn excluded_middle_refuted_on_two_worlds() {
        let r = find_countermodel(
            &f("p | ~p"),
            &sigma(),
            &GrammarSpec::empty(),
            3,
            DEFAULT_BUDGET,
        )
        .unwrap();
        match r {
            SearchResult::Countermodel { model, world } => {
                assert_eq!(model.world_count(), 2);
                assert!(!satisfies(&model, &world, &f("p | ~p")).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reflexivity_axiom_needs_production() {
        let t = f("[a]p -> p");
        let empty =
            find_countermodel(&t, &sigma(), &GrammarSpec::empty(), 2, DEFAULT_BUDGET).unwrap();
        assert!(matches!(empty, SearchResult::Countermodel { .. }));
        let g = GrammarSpec::empty().with_production(Production::new(a(), []));
        let r = find_countermodel(&t, &sigma(), &g, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r, SearchResult::ValidUpTo(2));
    }

    #[test]
    fn undeclared_character_rejected() {
        let stray = Formula::parse_unchecked("<b>p").unwrap();
        assert!(matches!(
            find_countermodel(&stray, &sigma(), &GrammarSpec::empty(), 1, DEFAULT_BUDGET),
            Err(SearchError::Alphabet(_))
        ));
    }

    #[test]
    fn harness_clean_on_base_logic() {
        let g = GrammarSpec::empty();
        let c = AxiomCatalog::new(&sigma(), &g).unwrap();
        let r = soundness_harness(&c, &sigma(), &g, &HarnessConfig::default()).unwrap();
        assert!(r.is_clean(), "{:?}", r.failures.first());
        assert_eq!(r.schemas_checked, 18);
        assert!(r.models_checked > 0);
    }

    #[test]
    fn harness_catches_local_box() {
        let g = GrammarSpec::empty();
        let c = AxiomCatalog::new(&sigma(), &g).unwrap();
        let config = HarnessConfig {
            box_clause: BoxClause::LocalOnly,
            ..HarnessConfig::default()
        };
        let r = soundness_harness(&c, &sigma(), &g, &config).unwrap();
        assert!(!r.is_clean());
        // A7 and A8 only need F1 and the converse, so the local clause keeps them.
        let failing = r.failing_schemas();
        assert!(failing.contains(&"IPL1"));
        assert!(
            !failing.contains(&"A7") && !failing.contains(&"A8"),
            "{failing:?}"
        );
    }

    #[test]
    fn rules_preserve_truth() {
        let atoms = vec!["p".to_string()];
        let sample = formulas_up_to_depth_one(&atoms, &sigma().characters());
        let r =
            rule_preservation_check(&sigma(), &GrammarSpec::empty(), 2, &sample, DEFAULT_BUDGET)
                .unwrap();
        assert!(r.is_clean(), "{r:?}");
        assert!(r.mp_checked > 0 && r.nec_checked > 0);
    }
}
