// SPDX-License-Identifier: Apache-2.0

//! Formula pools: exhaustive at depth one, seeded random above.

use rand::Rng;

use crate::syntax::{Character, Formula};

/// Atoms and `false`.
pub fn leaves(atoms: &[String]) -> Vec<Formula> {
    atoms
        .iter()
        .map(Formula::atom)
        .chain(std::iter::once(Formula::Bottom))
        .collect()
}

/// Every formula of depth at most one over `atoms` and `chars`.
pub fn formulas_up_to_depth_one(atoms: &[String], chars: &[Character]) -> Vec<Formula> {
    let base = leaves(atoms);
    let mut out = base.clone();
    for a in &base {
        for b in &base {
            out.push(Formula::or(a.clone(), b.clone()));
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::implies(a.clone(), b.clone()));
        }
    }
    for x in chars {
        for a in &base {
            out.push(Formula::dia(x.clone(), a.clone()));
            out.push(Formula::boxed(x.clone(), a.clone()));
        }
    }
    out
}

/// A random formula of depth at most `max_depth`.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    chars: &[Character],
    max_depth: usize,
) -> Formula {
    if max_depth == 0 || rng.gen_bool(0.25) {
        let k = rng.gen_range(0..=atoms.len());
        return match atoms.get(k) {
            Some(p) => Formula::atom(p.as_str()),
            None => Formula::Bottom,
        };
    }
    let d = max_depth - 1;
    let modal = if chars.is_empty() { 0 } else { 2 };
    match rng.gen_range(0..3 + modal) {
        0 => Formula::or(
            random_formula(rng, atoms, chars, d),
            random_formula(rng, atoms, chars, d),
        ),
        1 => Formula::and(
            random_formula(rng, atoms, chars, d),
            random_formula(rng, atoms, chars, d),
        ),
        2 => Formula::implies(
            random_formula(rng, atoms, chars, d),
            random_formula(rng, atoms, chars, d),
        ),
        k => {
            let x = chars[rng.gen_range(0..chars.len())].clone();
            let a = random_formula(rng, atoms, chars, d);
            if k == 3 {
                Formula::dia(x, a)
            } else {
                Formula::boxed(x, a)
            }
        }
    }
}
