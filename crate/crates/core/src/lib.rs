// SPDX-License-Identifier: Apache-2.0

//! Reasoning toolkit for intuitionistic grammar logics.
//!
//! Modules, bottom-up:
//!
//! - [`syntax`]: characters with converses, formulas, parsing, schemas.
//! - [`model`]: finite bi-relational models, saturation, frame-condition audits.
//! - [`semantics`]: the intuitionistic satisfaction relation.
//! - [`calculus`]: axiom catalog and Hilbert proof checking.
//! - [`search`]: model enumeration, countermodel search, soundness harness.
//! - [`cli`]: the `igl` command-line front end.

pub mod calculus;
pub mod cli;
pub mod model;
pub mod search;
pub mod semantics;
pub mod syntax;
