//! Counting assignments to free relation and function variables of
//! first-order formulas over finite ordered structures.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod count;
pub mod error;
pub mod eval;
pub mod formula;
pub mod interpret;
pub mod model;
pub mod prop;
pub mod transforms;

/// Exact counts; results routinely exceed `u64`.
pub type BigCount = num_bigint::BigUint;

pub use count::{
    candidate_count, count_assignments, count_functional, count_relational, count_skolem,
    count_universal_fragment, sigma0_closed_form, CountRequest, Semantics, DEFAULT_BUDGET,
};
pub use circuit::{
    circuit_from_prenex, circuit_to_structure, circuit_vocabulary, structure_to_circuit, Circuit,
    Gate, GateKind,
};
pub use error::{Error, Result};
pub use eval::{models, Assignment, FunctionTable};
pub use interpret::{apply_interpretation, parity_interpretation, Interpretation};
pub use formula::{parse_query, Formula, Query, Signature, Term};
pub use model::{BitString, Builtin, Element, Structure, Vocabulary};
