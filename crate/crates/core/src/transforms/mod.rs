//! Formula-to-formula constructions that preserve or rescale counts.
//!
//! Every pass returns a [`TransformReport`] whose [`Claim`] can be checked on
//! a concrete structure with [`check_claim`].

mod dnf;
mod functions;
mod skolem;
mod witness;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::count::{pow, CountRequest, Semantics};
use crate::error::{Error, Result};
use crate::formula::{Decl, Query};
use crate::model::Structure;
use crate::BigCount;

pub use dnf::{
    build_dnf_structure, cnf_to_dnf_count, count_dnf_by_logic, dnf_reduction_report,
    dnf_vocabulary, phi_3dnf, phi_3dnf_func, reduce_dnf,
};
pub use functions::{denest_functions, relations_to_functions, succ_formula};
pub use skolem::{deskolemize, skolemize};
pub use witness::{to_pi1, unique_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pass {
    Skolemize,
    Deskolemize,
    UniqueWitness,
    ToPi1,
    RelationsToFunctions,
    DenestFunctions,
    DnfToFunctions,
}

impl Pass {
    pub const ALL: [Pass; 7] = [
        Pass::Skolemize,
        Pass::Deskolemize,
        Pass::UniqueWitness,
        Pass::ToPi1,
        Pass::RelationsToFunctions,
        Pass::DenestFunctions,
        Pass::DnfToFunctions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pass::Skolemize => "skolemize",
            Pass::Deskolemize => "deskolemize",
            Pass::UniqueWitness => "unique-witness",
            Pass::ToPi1 => "to-pi1",
            Pass::RelationsToFunctions => "rel2func",
            Pass::DenestFunctions => "denest",
            Pass::DnfToFunctions => "dnf2func",
        }
    }

    /// Runs the pass on a parsed query.
    pub fn apply(self, q: &Query) -> Result<TransformReport> {
        match self {
            Pass::Skolemize => skolemize(q),
            Pass::Deskolemize => deskolemize(q),
            Pass::UniqueWitness => unique_witness(q),
            Pass::ToPi1 => to_pi1(q),
            Pass::RelationsToFunctions => relations_to_functions(q),
            Pass::DenestFunctions => denest_functions(q),
            Pass::DnfToFunctions => Err(Error::precondition(
                "dnf2func has a fixed input; use dnf_reduction_report",
            )),
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Pass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pass::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownSymbol(s.into()))
    }
}

/// How the count of the output relates to the count of the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// Same structure, equal counts.
    Equal { input: Semantics, output: Semantics },
    /// The output is counted on `extend_universe(A, n)` and equals the input
    /// count on `A` times `n^(2n) · 2^n`.
    DoubledUniverse { input: Semantics, output: Semantics },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Equal { input, output } => write!(f, "equal ({input} = {output})"),
            Claim::DoubledUniverse { input, output } => {
                write!(f, "scaled ({input} * n^(2n) * 2^n = {output} on the doubled universe)")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub pass: Pass,
    pub input: Query,
    pub output: Query,
    /// Symbols absent from the input; individual variables have arity 0.
    pub fresh: Vec<Decl>,
    pub claim: Claim,
    /// Smallest universe on which the claim holds.
    pub min_universe: usize,
}

/// Both sides of a claim evaluated on one structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub lhs: BigCount,
    pub rhs: BigCount,
}

impl ClaimCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `n^(2n) · 2^n`.
pub fn doubling_scale(n: usize) -> BigCount {
    pow(n, 2 * n) * pow(2, n)
}

pub fn check_claim(report: &TransformReport, a: &Structure, budget: u64) -> Result<ClaimCheck> {
    if a.size() < report.min_universe {
        return Err(Error::domain(alloc::format!(
            "{} needs a universe of at least {} elements, got {}",
            report.pass,
            report.min_universe,
            a.size()
        )));
    }
    let count = |s: &Structure, q: &Query, mode| CountRequest::new(s, q, mode).with_budget(budget).run();
    match report.claim {
        Claim::Equal { input, output } => Ok(ClaimCheck {
            lhs: count(a, &report.input, input)?,
            rhs: count(a, &report.output, output)?,
        }),
        Claim::DoubledUniverse { input, output } => {
            let n = a.size();
            let lhs: BigUint = count(a, &report.input, input)? * doubling_scale(n);
            let rhs = count(&a.extend_universe(n), &report.output, output)?;
            Ok(ClaimCheck { lhs, rhs })
        }
    }
}

/// Relational when the query has only relation variables, functional otherwise.
pub(crate) fn free_semantics(q: &Query) -> Semantics {
    if q.sig.funvars.is_empty() && !q.sig.relvars.is_empty() {
        Semantics::Relational
    } else {
        Semantics::Functional
    }
}
