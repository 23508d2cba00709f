// SPDX-License-Identifier: Apache-2.0

//! Hilbert calculus: axiom catalog, proofs, and the proof checker.

mod catalog;
mod proof;
mod text;

pub use catalog::{ipa_schema, seriality_schema, AxiomCatalog, CatalogEntry, CHAR_VAR};
pub use proof::{
    check_proof, derives, DerivationError, Justification, Proof, ProofLine, RejectReason, Rejection,
};
pub use text::parse_proof;
