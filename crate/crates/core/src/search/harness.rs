// SPDX-License-Identifier: Apache-2.0

//! Bounded soundness checks: every catalog axiom instance must be globally
//! true on every enumerated model, and the inference rules must preserve
//! global truth.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{Enumerator, DEFAULT_BUDGET};
use super::gen::{formulas_up_to_depth_one, leaves, random_formula};
use super::SearchError;
use crate::calculus::{AxiomCatalog, CatalogEntry, CHAR_VAR};
use crate::model::{GrammarSpec, Model, WorldSet};
use crate::semantics::{BoxClause, Evaluator};
use crate::syntax::{Alphabet, Binding, CharPattern, Character, Formula, Schema};

/// Failures beyond this many are counted but not recorded.
pub const MAX_RECORDED_FAILURES: usize = 200;

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub max_worlds: usize,
    /// Formulas substituted for metavariables have at most this depth.
    pub depth: usize,
    pub seed: u64,
    pub atoms: Vec<String>,
    /// Random formulas added to the pool when `depth > 1`.
    pub random_pool: usize,
    /// Random bindings drawn per schema when `depth > 1`.
    pub random_bindings: usize,
    pub budget: u64,
    pub box_clause: BoxClause,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            max_worlds: 2,
            depth: 1,
            seed: 0,
            atoms: vec!["p".into(), "q".into()],
            random_pool: 32,
            random_bindings: 256,
            budget: DEFAULT_BUDGET,
            box_clause: BoxClause::Intuitionistic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessFailure {
    pub schema: String,
    pub binding: Binding,
    pub instance: Formula,
    pub model: Model,
    pub world: String,
}

impl Serialize for HarnessFailure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("HarnessFailure", 5)?;
        s.serialize_field("schema", &self.schema)?;
        s.serialize_field("binding", &self.binding.to_string())?;
        s.serialize_field("instance", &self.instance)?;
        s.serialize_field("world", &self.world)?;
        s.serialize_field("model", &self.model.to_string())?;
        s.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub schemas_checked: usize,
    /// Axiom instances checked, each against every model.
    pub axioms_checked: usize,
    pub models_checked: usize,
    pub failure_count: usize,
    /// Failing instances per schema name, over all failures.
    pub failures_by_schema: BTreeMap<String, usize>,
    #[serde(skip)]
    pub failures: Vec<HarnessFailure>,
}

impl HarnessReport {
    pub fn is_clean(&self) -> bool {
        self.failure_count == 0
    }

    /// Names of the schemas with at least one failing instance.
    pub fn failing_schemas(&self) -> Vec<&str> {
        self.failures_by_schema.keys().map(String::as_str).collect()
    }
}

/// One instantiation: pool indices for the formula metavariables, in
/// `formula_vars` order, and an index into the character bindings.
struct Choice {
    formulas: Vec<usize>,
    chars: usize,
}

/// Character bindings admitted by `entry`, and every instantiation to check.
fn choices_for(
    entry: &CatalogEntry,
    exhaustive: usize,
    pool: usize,
    chars: &[Character],
    random_draws: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<Binding>, Vec<Choice>) {
    let formula_vars = entry.schema.formula_vars();
    let char_vars = entry.schema.char_vars();
    let char_bindings: Vec<Binding> = if char_vars.is_empty() {
        vec![Binding::default()]
    } else {
        char_vars
            .iter()
            .map(|v| {
                chars
                    .iter()
                    .filter(|x| v != CHAR_VAR || entry.admits(x))
                    .map(|x| (v.clone(), x.clone()))
                    .collect::<Vec<_>>()
                    .into_iter()
            })
            .multi_cartesian_product()
            .map(|pairs| Binding {
                formulas: Default::default(),
                chars: pairs.into_iter().collect(),
            })
            .collect()
    };
    let formula_tuples: Vec<Vec<usize>> = if formula_vars.is_empty() {
        vec![Vec::new()]
    } else {
        formula_vars
            .iter()
            .map(|_| 0..exhaustive)
            .multi_cartesian_product()
            .collect()
    };

    let mut out = Vec::new();
    for fs in &formula_tuples {
        for cs in 0..char_bindings.len() {
            out.push(Choice {
                formulas: fs.clone(),
                chars: cs,
            });
        }
    }
    if !char_bindings.is_empty() {
        for _ in 0..random_draws {
            let formulas = formula_vars
                .iter()
                .map(|_| rng.gen_range(0..pool))
                .collect();
            let chars = rng.gen_range(0..char_bindings.len());
            out.push(Choice { formulas, chars });
        }
    }
    (char_bindings, out)
}

/// Truth set of `s` with each metavariable read from `metas`.
fn schema_truth_set(
    eval: &Evaluator,
    s: &Schema,
    metas: &[(&str, WorldSet)],
    chars: &Binding,
) -> Result<WorldSet, SearchError> {
    let rec = |t: &Schema| schema_truth_set(eval, t, metas, chars);
    let resolve = |x: &CharPattern| x.resolve(chars).expect("total binding");
    Ok(match s {
        Schema::Meta(m) => {
            metas
                .iter()
                .find(|(name, _)| name == m)
                .expect("total binding")
                .1
        }
        Schema::Atom(p) => eval.model().atom_worlds(p),
        Schema::Bottom => WorldSet::EMPTY,
        Schema::Or(a, b) => rec(a)?.union(rec(b)?),
        Schema::And(a, b) => rec(a)?.intersection(rec(b)?),
        Schema::Impl(a, b) => eval.implication(rec(a)?, rec(b)?),
        Schema::Dia(x, a) => eval.diamond(&resolve(x), rec(a)?)?,
        Schema::Box(x, a) => eval.boxed(&resolve(x), rec(a)?)?,
    })
}

/// The pool seen through one model: formulas with equal truth sets share a
/// class, since an instance's truth set depends only on those of its parts.
struct PoolView {
    classes: Vec<WorldSet>,
    class_of: Vec<usize>,
}

impl PoolView {
    fn new(eval: &Evaluator, pool: &[Formula]) -> Result<PoolView, SearchError> {
        let mut classes: Vec<WorldSet> = Vec::new();
        let mut class_of = Vec::with_capacity(pool.len());
        for f in pool {
            let t = eval.truth_set(f)?;
            let k = match classes.iter().position(|c| *c == t) {
                Some(k) => k,
                None => {
                    classes.push(t);
                    classes.len() - 1
                }
            };
            class_of.push(k);
        }
        Ok(PoolView { classes, class_of })
    }

    fn code(&self, formulas: &[usize]) -> usize {
        formulas
            .iter()
            .fold(0, |acc, &k| acc * self.classes.len() + self.class_of[k])
    }

    /// For each character binding and class tuple, the first world where the
    /// schema fails, if any.
    fn failure_table(
        &self,
        eval: &Evaluator,
        schema: &Schema,
        formula_vars: &[String],
        char_bindings: &[Binding],
    ) -> Result<Vec<Vec<Option<usize>>>, SearchError> {
        let width = self.classes.len().pow(formula_vars.len() as u32);
        let n = eval.model().world_count();
        char_bindings
            .iter()
            .map(|b| {
                (0..width)
                    .map(|mut code| {
                        let mut metas: Vec<(&str, WorldSet)> = formula_vars
                            .iter()
                            .rev()
                            .map(|v| {
                                let set = self.classes[code % self.classes.len()];
                                code /= self.classes.len();
                                (v.as_str(), set)
                            })
                            .collect();
                        metas.reverse();
                        let holds = schema_truth_set(eval, schema, &metas, b)?;
                        Ok((0..n).find(|&w| !holds.contains(w)))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Checks every catalog axiom instance from the binding pool on every
/// enumerated model of `g` with up to `config.max_worlds` worlds.
///
/// Metavariables range over all formulas of depth at most one. When
/// `config.depth > 1`, seeded random bindings drawn from a pool that also
/// holds deeper random formulas are added. Results depend only on the inputs
/// and the seed.
pub fn soundness_harness(
    catalog: &AxiomCatalog,
    alphabet: &Alphabet,
    g: &GrammarSpec,
    config: &HarnessConfig,
) -> Result<HarnessReport, SearchError> {
    if config.max_worlds == 0 {
        return Err(SearchError::InvalidBound(0));
    }
    let models = Enumerator::new(alphabet, g, config.atoms.iter().cloned(), config.budget)?
        .models_up_to(config.max_worlds)?;
    let evaluators: Vec<Evaluator> = models
        .iter()
        .map(|m| Evaluator::with_clause(m, config.box_clause))
        .collect();

    let chars = alphabet.characters();
    let exhaustive = if config.depth == 0 {
        leaves(&config.atoms)
    } else {
        formulas_up_to_depth_one(&config.atoms, &chars)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pool = exhaustive.clone();
    let random_draws = if config.depth > 1 {
        for _ in 0..config.random_pool {
            pool.push(random_formula(
                &mut rng,
                &config.atoms,
                &chars,
                config.depth,
            ));
        }
        config.random_bindings
    } else {
        0
    };
    let views: Vec<PoolView> = evaluators
        .par_iter()
        .map(|e| PoolView::new(e, &pool))
        .collect::<Result<_, _>>()?;

    let mut report = HarnessReport {
        models_checked: models.len(),
        ..HarnessReport::default()
    };
    for entry in catalog.entries() {
        let formula_vars = entry.schema.formula_vars();
        let (char_bindings, choices) = choices_for(
            entry,
            exhaustive.len(),
            pool.len(),
            &chars,
            random_draws,
            &mut rng,
        );
        let tables: Vec<Vec<Vec<Option<usize>>>> = views
            .par_iter()
            .zip(&evaluators)
            .map(|(v, e)| v.failure_table(e, &entry.schema, &formula_vars, &char_bindings))
            .collect::<Result<_, _>>()?;
        for c in &choices {
            let hit = views
                .iter()
                .zip(&tables)
                .enumerate()
                .find_map(|(i, (v, t))| t[c.chars][v.code(&c.formulas)].map(|w| (i, w)));
            let Some((i, w)) = hit else { continue };
            report.failure_count += 1;
            *report
                .failures_by_schema
                .entry(entry.name.clone())
                .or_default() += 1;
            if report.failures.len() < MAX_RECORDED_FAILURES {
                let binding = Binding {
                    formulas: formula_vars
                        .iter()
                        .cloned()
                        .zip(c.formulas.iter().map(|&k| pool[k].clone()))
                        .collect(),
                    chars: char_bindings[c.chars].chars.clone(),
                };
                let instance = entry.schema.instantiate(&binding).expect("total binding");
                report.failures.push(HarnessFailure {
                    schema: entry.name.clone(),
                    binding,
                    instance,
                    model: models[i].clone(),
                    world: models[i].world_name(w).to_string(),
                });
            }
        }
        report.schemas_checked += 1;
        report.axioms_checked += choices.len();
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub models_checked: usize,
    pub nec_checked: usize,
    /// `(A, x)` with `A` globally true on all models but `[x]A` not.
    pub nec_failures: Vec<(Formula, Character)>,
    pub mp_checked: usize,
    /// `(A, B, world count)` where A and A -> B held globally but B did not.
    pub mp_failures: Vec<(Formula, Formula, usize)>,
}

impl RuleReport {
    pub fn is_clean(&self) -> bool {
        self.nec_failures.is_empty() && self.mp_failures.is_empty()
    }
}

/// Checks that necessitation preserves validity over the enumerated models
/// and that modus ponens preserves global truth on each model.
pub fn rule_preservation_check(
    alphabet: &Alphabet,
    g: &GrammarSpec,
    max_worlds: usize,
    sample: &[Formula],
    budget: u64,
) -> Result<RuleReport, SearchError> {
    let atoms: Vec<String> = sample.iter().flat_map(|f| f.atoms()).collect();
    let models = Enumerator::new(alphabet, g, atoms, budget)?.models_up_to(max_worlds)?;
    let evaluators: Vec<Evaluator> = models.iter().map(Evaluator::new).collect();
    let valid = |f: &Formula| -> Result<bool, SearchError> {
        for e in &evaluators {
            if !e.globally_true(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut report = RuleReport {
        models_checked: models.len(),
        ..RuleReport::default()
    };
    for a in sample {
        if !valid(a)? {
            continue;
        }
        for x in alphabet.characters() {
            report.nec_checked += 1;
            let boxed = Formula::boxed(x.clone(), a.clone());
            if !valid(&boxed)? {
                report.nec_failures.push((a.clone(), x));
            }
        }
    }
    for e in &evaluators {
        let truths: Vec<bool> = sample
            .iter()
            .map(|f| e.globally_true(f))
            .collect::<Result<_, _>>()?;
        for (i, a) in sample.iter().enumerate() {
            if !truths[i] {
                continue;
            }
            for (j, b) in sample.iter().enumerate() {
                let ab = Formula::implies(a.clone(), b.clone());
                if e.globally_true(&ab)? {
                    report.mp_checked += 1;
                    if !truths[j] {
                        report
                            .mp_failures
                            .push((a.clone(), b.clone(), e.model().world_count()));
                    }
                }
            }
        }
    }
    Ok(report)
}
