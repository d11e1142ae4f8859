use alloc::vec::Vec;

use super::{Claim, Pass, TransformReport};
use crate::count::{count_relational, pow, Semantics};
use crate::error::{Error, Result};
use crate::formula::{CmpOp, Decl, Formula, Query, Signature, Term};
use crate::model::{Builtin, Structure, Vocabulary};
use crate::prop::{Cnf, Dnf, Literal};
use crate::BigCount;

const D: [&str; 4] = ["D0", "D1", "D2", "D3"];

/// Ternary `D0 … D3` with LEQ, LT, BIT, MIN and MAX.
pub fn dnf_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new();
    for d in D {
        v.add_relation(d, 3).expect("distinct names");
    }
    v.with_builtins([Builtin::Leq, Builtin::Lt, Builtin::Bit, Builtin::Min, Builtin::Max])
}

/// Pads a disjunct to three literals: negative literals first, then the last
/// literal repeated.
fn shape(term: &[Literal]) -> [Literal; 3] {
    let mut lits: Vec<Literal> = term.iter().filter(|l| !l.positive).copied().collect();
    lits.extend(term.iter().filter(|l| l.positive));
    let last = *lits.last().expect("disjuncts are non-empty");
    lits.resize(3, last);
    [lits[0], lits[1], lits[2]]
}

/// Structure over the variables of `dnf` in which `D_i(x, y, z)` holds when
/// `¬x ∧ … ∧ x_{i+1} ∧ …` with `i` negated literals is a disjunct.
pub fn build_dnf_structure(dnf: &Dnf) -> Result<Structure> {
    let dnf = Dnf::new(dnf.vars, dnf.terms.clone())?;
    let mut a = Structure::empty(dnf_vocabulary(), dnf.vars)?;
    for term in &dnf.terms {
        let lits = shape(term);
        let negatives = lits.iter().filter(|l| !l.positive).count();
        a.insert(D[negatives], &lits.map(|l| l.var))?;
    }
    Ok(a)
}

fn dnf_signature() -> Signature {
    Signature {
        relations: D.iter().map(|d| Decl::new(d, 3)).collect(),
        ..Signature::default()
    }
}

fn dnf_body(literal: impl Fn(&str) -> Formula) -> Formula {
    let vars = ["x", "y", "z"];
    let disjuncts = (0..4).map(|i| {
        let args = vars.iter().map(|v| Term::var(v));
        let lits = vars.iter().enumerate().map(|(k, v)| {
            if k < i {
                Formula::not(literal(v))
            } else {
                literal(v)
            }
        });
        Formula::and_all(core::iter::once(Formula::rel(D[i], args)).chain(lits))
    });
    let matrix = Formula::or_all(disjuncts);
    vars.iter().rev().fold(matrix, |f, v| Formula::exists(v, f))
}

/// `∃x∃y∃z ⋁ᵢ (Dᵢ(x, y, z) ∧ literals)` over a free unary relation `T`.
pub fn phi_3dnf() -> Query {
    let sig = Signature {
        relvars: alloc::vec![Decl::new("T", 1)],
        ..dnf_signature()
    };
    let mut q = Query::new(sig, dnf_body(|v| Formula::rel("T", [Term::var(v)])));
    q.sync_builtins();
    q
}

/// [`phi_3dnf`] with every `T(v)` replaced by `BIT(min, f(v))`.
pub fn phi_3dnf_func() -> Query {
    let sig = Signature {
        funvars: alloc::vec![Decl::new("f", 1)],
        ..dnf_signature()
    };
    let mut q = Query::new(
        sig,
        dnf_body(|v| Formula::cmp(CmpOp::Bit, Term::Min, Term::app("f", [Term::var(v)]))),
    );
    q.sync_builtins();
    q
}

/// `(extend_universe(A, n), n^(2n) · 2^n)`.
pub fn reduce_dnf(a: &Structure) -> (Structure, BigCount) {
    let n = a.size();
    (a.extend_universe(n), pow(n, 2 * n) * pow(2, n))
}

/// The relational-to-functional step for 3DNF as a checkable report.
pub fn dnf_reduction_report() -> TransformReport {
    TransformReport {
        pass: Pass::DnfToFunctions,
        input: phi_3dnf(),
        output: phi_3dnf_func(),
        fresh: alloc::vec![Decl::new("f", 1)],
        claim: Claim::DoubledUniverse {
            input: Semantics::Relational,
            output: Semantics::Functional,
        },
        min_universe: 1,
    }
}

/// Model count of `dnf` through the structure encoding and [`phi_3dnf`].
pub fn count_dnf_by_logic(dnf: &Dnf, budget: u64) -> Result<BigCount> {
    count_relational(&build_dnf_structure(dnf)?, &phi_3dnf(), budget)
}

/// `2^n` minus the model count of the clause-wise negation.
pub fn cnf_to_dnf_count(cnf: &Cnf, dnf_counter: impl FnOnce(&Dnf) -> Result<BigCount>) -> Result<BigCount> {
    let cnf = Cnf::new(cnf.vars, cnf.clauses.clone())?;
    let total = pow(2, cnf.vars);
    let non_models = dnf_counter(&cnf.negate())?;
    if non_models > total {
        return Err(Error::domain("DNF counter exceeded 2^n"));
    }
    Ok(total - non_models)
}
