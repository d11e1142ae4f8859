//! Exhaustive counting of satisfying assignments.
//!
//! Every counter first computes the exact number of candidate assignments and
//! refuses to start when it exceeds the caller's budget, so a returned count is
//! always the result of a complete enumeration.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::eval::{eval_term, CTerm, Compiled, Env};
use crate::formula::{
    classify_fragment, prefix_of, Alternation, Formula, Quantifier, Query, Signature, Term,
};
use crate::model::{tuple_rank, Element, Structure};
use crate::BigCount;

/// Candidate assignments enumerated before a counter gives up.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// What a count ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    /// Free relation variables and free individual variables.
    Relational,
    /// Free function variables and free individual variables.
    Functional,
    /// Skolem functions of a prenex sentence.
    Skolem,
}

impl core::fmt::Display for Semantics {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Semantics::Relational => "relational",
            Semantics::Functional => "functional",
            Semantics::Skolem => "skolem",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CountRequest<'a> {
    pub structure: &'a Structure,
    pub query: &'a Query,
    pub mode: Semantics,
    pub budget: u64,
}

impl<'a> CountRequest<'a> {
    pub fn new(structure: &'a Structure, query: &'a Query, mode: Semantics) -> Self {
        CountRequest {
            structure,
            query,
            mode,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn run(&self) -> Result<BigCount> {
        if self.budget == 0 {
            return Err(Error::precondition("budget must be positive"));
        }
        match self.mode {
            Semantics::Relational => count_relational(self.structure, self.query, self.budget),
            Semantics::Functional => count_functional(self.structure, self.query, self.budget),
            Semantics::Skolem => count_skolem(self.structure, self.query, self.budget),
        }
    }
}

pub(crate) fn pow(base: usize, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

fn check_budget(required: &BigUint, budget: u64) -> Result<u64> {
    match required.to_u64() {
        Some(r) if r <= budget => Ok(r),
        _ => Err(Error::Budget {
            budget,
            required: required.clone(),
        }),
    }
}

/// Number of candidate assignments to the free variables of `sig` over `n` elements.
pub fn candidate_count(sig: &Signature, n: usize) -> BigCount {
    let mut total = pow(n, sig.freevars.len());
    for d in &sig.relvars {
        total *= pow(2, n.pow(d.arity as u32));
    }
    for d in &sig.funvars {
        total *= pow(n, n.pow(d.arity as u32));
    }
    total
}

/// One position of the odometer that drives every enumeration.
#[derive(Clone, Copy, Debug)]
enum Digit {
    Slot(usize),
    Func(usize, usize),
    Rel(usize, usize),
}

struct Odometer {
    digits: Vec<(Digit, usize)>,
}

impl Odometer {
    /// Individuals first, then relation tables, then function tables; the last
    /// digit turns fastest, so assignments come out in lexicographic order.
    fn for_query(compiled: &Compiled<'_>, individuals: usize) -> Self {
        let n = compiled.structure.size();
        let mut digits: Vec<(Digit, usize)> = (0..individuals).map(|s| (Digit::Slot(s), n)).collect();
        for (r, &a) in compiled.relvar_arity.iter().enumerate() {
            digits.extend((0..n.pow(a as u32)).map(|p| (Digit::Rel(r, p), 2)));
        }
        for (f, &a) in compiled.func_arity.iter().enumerate() {
            digits.extend((0..n.pow(a as u32)).map(|p| (Digit::Func(f, p), n)));
        }
        Odometer { digits }
    }

    fn get(env: &Env, d: Digit) -> usize {
        match d {
            Digit::Slot(s) => env.slots[s],
            Digit::Func(f, p) => env.funcs[f][p],
            Digit::Rel(r, p) => usize::from(env.rels[r][p]),
        }
    }

    fn set(env: &mut Env, d: Digit, v: usize) {
        match d {
            Digit::Slot(s) => env.slots[s] = v,
            Digit::Func(f, p) => env.funcs[f][p] = v,
            Digit::Rel(r, p) => env.rels[r][p] = v == 1,
        }
    }

    /// Advances to the next assignment; false once every assignment has been visited.
    fn advance(&self, env: &mut Env) -> bool {
        for &(d, radix) in self.digits.iter().rev() {
            let v = Self::get(env, d) + 1;
            if v < radix {
                Self::set(env, d, v);
                return true;
            }
            Self::set(env, d, 0);
        }
        false
    }
}

fn enumerate(compiled: &Compiled<'_>, individuals: usize) -> u64 {
    let odo = Odometer::for_query(compiled, individuals);
    let mut env = compiled.env();
    let mut count = 0u64;
    loop {
        if compiled.eval(&mut env) {
            count += 1;
        }
        if !odo.advance(&mut env) {
            return count;
        }
    }
}

/// Counts assignments to every free variable of the query, relation and
/// function variables alike.
pub fn count_assignments(a: &Structure, q: &Query, budget: u64) -> Result<BigCount> {
    let compiled = Compiled::query(a, q)?;
    check_budget(&candidate_count(&q.sig, a.size()), budget)?;
    Ok(BigUint::from(enumerate(&compiled, q.sig.freevars.len())))
}

/// Counts `(S₁, …, S_k, c₁, …, c_ℓ)` with `A ⊨ φ(S̄, c̄)`.
pub fn count_relational(a: &Structure, q: &Query, budget: u64) -> Result<BigCount> {
    if let Some(f) = q.sig.funvars.first() {
        return Err(Error::precondition(format!(
            "relational counting over free function variable `{}`",
            f.name
        )));
    }
    count_assignments(a, q, budget)
}

/// Counts `(f₁, …, f_k, c₁, …, c_ℓ)` with `A ⊨ φ(f̄, c̄)`.
pub fn count_functional(a: &Structure, q: &Query, budget: u64) -> Result<BigCount> {
    if let Some(r) = q.sig.relvars.first() {
        return Err(Error::precondition(format!(
            "functional counting over free relation variable `{}`",
            r.name
        )));
    }
    count_assignments(a, q, budget)
}

/// Skolem shape of a prenex sentence: for each existential variable, the
/// positions of the universal variables to its left.
pub(crate) struct SkolemShape {
    pub prefix: Vec<(Quantifier, String)>,
    /// For each prefix position: indices (into `universals`) of the universal
    /// variables to its left, when the position is existential.
    pub universals: Vec<usize>,
    pub existentials: Vec<(usize, usize)>,
}

pub(crate) fn skolem_shape(q: &Query) -> Result<(SkolemShape, &Formula)> {
    let (prefix, matrix) = prefix_of(&q.body);
    if !matrix.is_quantifier_free() {
        return Err(Error::precondition("Skolem counting needs a prenex formula"));
    }
    let mut universals = Vec::new();
    let mut existentials = Vec::new();
    for (i, (quant, _)) in prefix.iter().enumerate() {
        match quant {
            Quantifier::Forall => universals.push(i),
            Quantifier::Exists => existentials.push((i, universals.len())),
        }
    }
    Ok((
        SkolemShape {
            prefix,
            universals,
            existentials,
        },
        matrix,
    ))
}

/// Counts tuples of Skolem functions of a prenex sentence: every existential
/// variable gets a function of the universal variables to its left, and the
/// universal closure of the matrix must hold.
pub fn count_skolem(a: &Structure, q: &Query, budget: u64) -> Result<BigCount> {
    if !q.is_sentence() {
        return Err(Error::precondition("Skolem counting needs a sentence"));
    }
    let (shape, matrix) = skolem_shape(q)?;
    let n = a.size();
    let open: Vec<String> = shape.prefix.iter().map(|(_, v)| v.clone()).collect();
    let compiled = Compiled::new(a, q, matrix, &open)?;

    let mut required = BigUint::one();
    for &(_, arity) in &shape.existentials {
        required *= pow(n, n.pow(arity as u32));
    }
    check_budget(&required, budget)?;

    let mut tables: Vec<Vec<Element>> = shape
        .existentials
        .iter()
        .map(|&(_, arity)| alloc::vec![0; n.pow(arity as u32)])
        .collect();
    let mut env = compiled.env();
    let mut universal_values: Vec<Element> = alloc::vec![0; shape.universals.len()];
    let mut count = 0u64;
    loop {
        if skolem_tables_hold(&compiled, &shape, &tables, &mut env, &mut universal_values) {
            count += 1;
        }
        if !advance_tables(&mut tables, n) {
            return Ok(BigUint::from(count));
        }
    }
}

fn skolem_tables_hold(
    compiled: &Compiled<'_>,
    shape: &SkolemShape,
    tables: &[Vec<Element>],
    env: &mut Env,
    uvals: &mut [Element],
) -> bool {
    let n = compiled.structure.size();
    uvals.iter_mut().for_each(|v| *v = 0);
    loop {
        for (k, &pos) in shape.universals.iter().enumerate() {
            env.slots[pos] = uvals[k];
        }
        for (table, &(pos, arity)) in tables.iter().zip(&shape.existentials) {
            env.slots[pos] = table[tuple_rank(n, &uvals[..arity])];
        }
        if !compiled.eval(env) {
            return false;
        }
        // next universal binding
        let mut carried = true;
        for v in uvals.iter_mut().rev() {
            *v += 1;
            if *v < n {
                carried = false;
                break;
            }
            *v = 0;
        }
        if carried {
            return true;
        }
    }
}

fn advance_tables(tables: &mut [Vec<Element>], n: usize) -> bool {
    for table in tables.iter_mut().rev() {
        for v in table.iter_mut().rev() {
            *v += 1;
            if *v < n {
                return true;
            }
            *v = 0;
        }
    }
    false
}

/// Occurrence bookkeeping for the quantifier-free closed form.
struct Occurrence {
    function: usize,
    args: Vec<Term>,
}

/// Counts a quantifier-free query without enumerating function tables.
///
/// Each syntactically distinct application `F_i(e_ij)` is replaced by a fresh
/// individual `y_ij`; for every binding of the free variables and the `y_ij`
/// that satisfies the rewritten matrix, the number of function tuples taking
/// the chosen values is
/// `[consistent] · n^(Σ n^{a_i} − m) · n^(#{(i,j) : e_ij equals an earlier e_ij'})`.
pub fn sigma0_closed_form(a: &Structure, q: &Query, budget: u64) -> Result<BigCount> {
    if !q.body.is_quantifier_free() {
        return Err(Error::precondition("closed form needs a quantifier-free formula"));
    }
    if !q.sig.relvars.is_empty() {
        return Err(Error::precondition("closed form counts function variables only"));
    }
    let mut nested = false;
    q.body.for_each_term(&mut |t| {
        if let Term::App(_, args) = t {
            nested |= args.iter().any(Term::is_app);
        }
    });
    if nested {
        return Err(Error::precondition(
            "nested function applications; apply denest_functions first",
        ));
    }

    let n = a.size();
    let mut occurrences: Vec<Occurrence> = Vec::new();
    q.body.for_each_term(&mut |t| {
        if let Term::App(f, args) = t {
            let function = q.sig.funvars.iter().position(|d| &d.name == f).unwrap_or(usize::MAX);
            if !occurrences.iter().any(|o| o.function == function && &o.args == args) {
                occurrences.push(Occurrence {
                    function,
                    args: args.clone(),
                });
            }
        }
    });
    if occurrences.iter().any(|o| o.function == usize::MAX) {
        return Err(Error::precondition("undeclared function variable"));
    }
    // group by function, keeping order of occurrence within each
    occurrences.sort_by_key(|o| o.function);

    let mut names = q.names();
    let fresh: Vec<String> = occurrences
        .iter()
        .map(|o| {
            let v = crate::formula::fresh_name(&format!("y_{}", q.sig.funvars[o.function].name), &names);
            names.insert(v.clone());
            v
        })
        .collect();
    let body = q.body.map_terms(&mut |t| match t {
        Term::App(f, args) => {
            let i = occurrences
                .iter()
                .position(|o| q.sig.funvars[o.function].name == *f && o.args == *args)
                .expect("every application was recorded");
            Term::Var(fresh[i].clone())
        }
        other => other.clone(),
    });
    let mut open = q.sig.freevars.clone();
    open.extend(fresh.iter().cloned());
    let mut sig = q.sig.clone();
    sig.funvars.clear();
    let flat = Query::new(sig, body);
    let compiled = Compiled::new(a, &flat, &flat.body, &open)?;
    let arg_terms: Vec<Vec<CTerm>> = {
        let probe_sig = Query::new(flat.sig.clone(), Formula::True);
        occurrences
            .iter()
            .map(|o| {
                o.args
                    .iter()
                    .map(|t| {
                        let atom = Formula::eq(t.clone(), t.clone());
                        let c = Compiled::new(a, &probe_sig, &atom, &q.sig.freevars)?;
                        match c.root {
                            crate::eval::Node::Cmp(_, lhs, _) => Ok(lhs),
                            _ => unreachable!("equality compiles to a comparison"),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
    };

    let k = q.sig.freevars.len();
    let m = occurrences.len();
    check_budget(&pow(n, k + m), budget)?;
    // cells - (m - duplicates) is the number of unconstrained table entries
    let cells: usize = q.sig.funvars.iter().map(|d| n.pow(d.arity as u32)).sum();

    let mut env = compiled.env();
    let mut by_exponent: BTreeMap<usize, u64> = BTreeMap::new();
    let mut points: Vec<Vec<Element>> = alloc::vec![Vec::new(); m];
    loop {
        if compiled.eval(&mut env) {
            for (p, terms) in points.iter_mut().zip(&arg_terms) {
                p.clear();
                p.extend(terms.iter().map(|t| eval_term(t, n, &env)));
            }
            let mut consistent = true;
            let mut duplicates = 0;
            for j in 0..m {
                let earlier = (0..j).filter(|&i| {
                    occurrences[i].function == occurrences[j].function && points[i] == points[j]
                });
                let mut any = false;
                for i in earlier {
                    any = true;
                    consistent &= env.slots[k + i] == env.slots[k + j];
                }
                duplicates += usize::from(any);
            }
            if consistent {
                *by_exponent.entry(cells + duplicates - m).or_default() += 1;
            }
        }
        if !advance_slots(&mut env.slots[..k + m], n) {
            break;
        }
    }
    Ok(by_exponent
        .into_iter()
        .fold(BigUint::zero(), |acc, (e, c)| acc + BigUint::from(c) * pow(n, e)))
}

fn advance_slots(slots: &mut [Element], n: usize) -> bool {
    for v in slots.iter_mut().rev() {
        *v += 1;
        if *v < n {
            return true;
        }
        *v = 0;
    }
    false
}

/// [`count_functional`] restricted to `Π₁` formulas with at most `k` universal variables.
pub fn count_universal_fragment(a: &Structure, q: &Query, k: usize, budget: u64) -> Result<BigCount> {
    let info = classify_fragment(&q.body);
    if !info.alternation.within_pi(1) {
        return Err(Error::precondition(format!(
            "formula is {}, not Pi1",
            info.alternation
        )));
    }
    if info.universal_count > k {
        return Err(Error::precondition(format!(
            "formula has m = {} universal variables, more than k = {k}",
            info.universal_count
        )));
    }
    debug_assert!(matches!(
        info.alternation,
        Alternation::QuantifierFree | Alternation::Pi(1)
    ));
    count_functional(a, q, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_query;
    use crate::model::{Builtin, Vocabulary};

    fn plain(n: usize) -> Structure {
        Structure::empty(Vocabulary::new().with_builtins(Builtin::ALL), n).unwrap()
    }

    fn q(src: &str) -> Query {
        parse_query(src, None).unwrap()
    }

    #[test]
    fn functional_counts() {
        assert_eq!(count_functional(&plain(2), &q("funvar F/1; F(min) = min"), DEFAULT_BUDGET).unwrap(), 2u32.into());
        assert_eq!(count_functional(&plain(3), &q("funvar F/1; true"), DEFAULT_BUDGET).unwrap(), 27u32.into());
    }

    #[test]
    fn relational_counts() {
        assert_eq!(count_relational(&plain(2), &q("relvar R/1; true"), DEFAULT_BUDGET).unwrap(), 4u32.into());
        assert_eq!(count_relational(&plain(2), &q("relvar R/1; R(min)"), DEFAULT_BUDGET).unwrap(), 2u32.into());
    }

    #[test]
    fn semantics_reject_foreign_variables() {
        assert!(matches!(
            count_relational(&plain(2), &q("funvar F/1; true"), DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            count_functional(&plain(2), &q("relvar R/1; true"), DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn budget_errors_name_the_requirement() {
        let err = count_functional(&plain(3), &q("funvar F/2; true"), 1000).unwrap_err();
        assert_eq!(
            err,
            Error::Budget {
                budget: 1000,
                required: 19683u32.into()
            }
        );
        // raising the budget only turns the error into a count
        assert_eq!(count_functional(&plain(3), &q("funvar F/2; true"), 19683).unwrap(), 19683u32.into());
    }

    #[test]
    fn skolem_counts() {
        assert_eq!(count_skolem(&plain(3), &q("forall x exists y (y = x)"), DEFAULT_BUDGET).unwrap(), 1u32.into());
        assert_eq!(count_skolem(&plain(3), &q("forall x exists y (y = y)"), DEFAULT_BUDGET).unwrap(), 27u32.into());
        assert_eq!(count_skolem(&plain(3), &q("exists y forall x (y <= x)"), DEFAULT_BUDGET).unwrap(), 1u32.into());
        assert_eq!(count_skolem(&plain(3), &q("forall x (x = x)"), DEFAULT_BUDGET).unwrap(), 1u32.into());
        assert_eq!(count_skolem(&plain(3), &q("forall x (x < x)"), DEFAULT_BUDGET).unwrap(), 0u32.into());
    }

    #[test]
    fn skolem_needs_prenex_sentence() {
        assert!(matches!(
            count_skolem(&plain(2), &q("(exists x (x = x)) /\\ (exists y (y = y))"), DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            count_skolem(&plain(2), &q("freevar z; exists y (y = z)"), DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        let f = q("funvar F/1; F(min) = min");
        assert_eq!(sigma0_closed_form(&plain(2), &f, DEFAULT_BUDGET).unwrap(), 2u32.into());
        let f = q("funvar F/1; freevar x; F(x) = F(x)");
        assert_eq!(sigma0_closed_form(&plain(2), &f, DEFAULT_BUDGET).unwrap(), 8u32.into());
        let f = q("freevar x, y; x < y");
        assert_eq!(sigma0_closed_form(&plain(3), &f, DEFAULT_BUDGET).unwrap(), 3u32.into());
    }

    #[test]
    fn closed_form_with_more_occurrences_than_cells() {
        let f = q("funvar F/1; freevar u; F(min) = F(u) /\\ F(max) = u");
        assert_eq!(sigma0_closed_form(&plain(1), &f, DEFAULT_BUDGET).unwrap(), 1u32.into());
        assert_eq!(
            sigma0_closed_form(&plain(2), &f, DEFAULT_BUDGET).unwrap(),
            count_functional(&plain(2), &f, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn closed_form_rejects_nesting_and_quantifiers() {
        let f = q("funvar F/1; F(F(min)) = min");
        assert!(matches!(sigma0_closed_form(&plain(2), &f, DEFAULT_BUDGET), Err(Error::Precondition(_))));
        let f = q("funvar F/1; forall x F(x) = min");
        assert!(matches!(sigma0_closed_form(&plain(2), &f, DEFAULT_BUDGET), Err(Error::Precondition(_))));
    }

    #[test]
    fn universal_fragment_enforces_k() {
        let f = q("funvar F/2; forall x1 forall x2 F(x1, x2) = x1");
        assert!(matches!(count_universal_fragment(&plain(2), &f, 1, DEFAULT_BUDGET), Err(Error::Precondition(m)) if m.contains("m = 2")));
        assert_eq!(count_universal_fragment(&plain(2), &f, 2, DEFAULT_BUDGET).unwrap(), 1u32.into());
        let s = q("funvar F/1; exists x F(x) = x");
        assert!(count_universal_fragment(&plain(2), &s, 3, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn count_request_dispatches() {
        let a = plain(2);
        let f = q("funvar F/1; F(min) = min");
        assert_eq!(CountRequest::new(&a, &f, Semantics::Functional).run().unwrap(), 2u32.into());
        assert!(CountRequest::new(&a, &f, Semantics::Functional).with_budget(0).run().is_err());
    }
}
