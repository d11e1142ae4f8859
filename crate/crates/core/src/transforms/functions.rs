use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{free_semantics, Claim, Pass, TransformReport};
use crate::count::Semantics;
use crate::error::{Error, Result};
use crate::formula::{fresh_name, Atom, Decl, Formula, Query, Signature, Term};
use crate::model::{Builtin, Vocabulary};

/// Replaces each relation variable `R` of arity `a` by a function variable
/// `f_R` of arity `a` ranging over `{0, 1}`, with `R(z̄)` read as `f_R(z̄) = min`.
pub fn relations_to_functions(q: &Query) -> Result<TransformReport> {
    if !q.sig.funvars.is_empty() {
        return Err(Error::precondition("input already has function variables"));
    }
    let mut used = q.names();
    let mut renamed: BTreeMap<String, String> = BTreeMap::new();
    let mut fresh = Vec::new();
    for d in &q.sig.relvars {
        let f = fresh_name(&format!("f_{}", d.name), &used);
        used.insert(f.clone());
        renamed.insert(d.name.clone(), f.clone());
        fresh.push(Decl::new(&f, d.arity));
    }
    let body = q.body.map_atoms(&mut |a| match a {
        Atom::Rel(r, args) if renamed.contains_key(r) => {
            Formula::eq(Term::App(renamed[r].clone(), args.clone()), Term::Min)
        }
        other => Formula::Atom(other.clone()),
    });

    let mut ranges = Vec::new();
    for d in &fresh {
        let args: Vec<String> = (0..d.arity).map(|i| {
            let v = fresh_name(&format!("w{i}"), &used);
            used.insert(v.clone());
            v
        }).collect();
        let y = fresh_name("y", &used);
        used.insert(y.clone());
        let value = Term::App(d.name.clone(), args.iter().map(|v| Term::Var(v.clone())).collect());
        let ty = Term::var(&y);
        // value is min, or the element right above min
        let one = Formula::and(
            Formula::lt(Term::Min, value.clone()),
            Formula::forall(&y, Formula::implies(Formula::lt(ty.clone(), value.clone()), Formula::eq(ty, Term::Min))),
        );
        let range = Formula::or(Formula::eq(value, Term::Min), one);
        ranges.push(args.iter().rev().fold(range, |f, v| Formula::forall(v, f)));
    }
    ranges.push(body);

    let mut sig = q.sig.clone();
    sig.relvars.clear();
    sig.funvars = fresh.clone();
    let mut out = Query::new(sig, Formula::and_all(ranges));
    out.sync_builtins();
    Ok(TransformReport {
        pass: Pass::RelationsToFunctions,
        input: q.clone(),
        output: out,
        fresh,
        claim: Claim::Equal {
            input: Semantics::Relational,
            output: Semantics::Functional,
        },
        min_universe: 2,
    })
}

/// Removes nested applications from a quantifier-free formula: each function
/// application used as an argument becomes a fresh free variable `v` with
/// `v = G(…)` conjoined in front.
pub fn denest_functions(q: &Query) -> Result<TransformReport> {
    if !q.body.is_quantifier_free() {
        return Err(Error::precondition("denest_functions needs a quantifier-free formula"));
    }
    let mut used = q.names();
    let mut defined: Vec<(Term, String)> = Vec::new();
    let body = q.body.map_terms(&mut |t| {
        t.map(&mut |s| match s {
            Term::App(f, args) => Term::App(
                f,
                args.into_iter()
                    .map(|a| {
                        if !a.is_app() {
                            return a;
                        }
                        let v = match defined.iter().find(|(t, _)| *t == a) {
                            Some((_, v)) => v.clone(),
                            None => {
                                let v = fresh_name("v", &used);
                                used.insert(v.clone());
                                defined.push((a, v.clone()));
                                v
                            }
                        };
                        Term::Var(v)
                    })
                    .collect(),
            ),
            other => other,
        })
    });
    let fresh: Vec<Decl> = defined.iter().map(|(_, v)| Decl::new(v, 0)).collect();
    let mut parts: Vec<Formula> = defined
        .iter()
        .map(|(t, v)| Formula::eq(Term::Var(v.clone()), t.clone()))
        .collect();
    parts.push(body);
    let mut sig = q.sig.clone();
    sig.freevars.extend(defined.into_iter().map(|(_, v)| v));
    let sem = free_semantics(q);
    Ok(TransformReport {
        pass: Pass::DenestFunctions,
        input: q.clone(),
        output: Query::new(sig, Formula::and_all(parts)),
        fresh,
        claim: Claim::Equal { input: sem, output: sem },
        min_universe: 1,
    })
}

/// `Π₁` formula over unary `s`, `p` whose only model is successor and
/// predecessor, both saturating at the ends.
///
/// Besides the interior clause and the end points, it carries
/// `x < max → x < s(x)` and `min < x → p(x) < x`; without them `s(min)` and
/// `p(max)` are unconstrained on a two-element universe.
pub fn succ_formula(vocab: &Vocabulary) -> Result<Query> {
    for b in [Builtin::Lt, Builtin::Min, Builtin::Max] {
        if !vocab.has_builtin(b) {
            return Err(Error::precondition(format!("succ_formula needs built-in {b}")));
        }
    }
    let x = Term::var("x");
    let s = |t: Term| Term::app("s", [t]);
    let p = |t: Term| Term::app("p", [t]);
    let interior = Formula::and(Formula::lt(x.clone(), Term::Max), Formula::lt(Term::Min, x.clone()));
    let step = Formula::and_all([
        Formula::lt(x.clone(), s(x.clone())),
        Formula::lt(p(x.clone()), x.clone()),
        Formula::eq(p(s(x.clone())), x.clone()),
        Formula::eq(s(p(x.clone())), x.clone()),
    ]);
    let body = Formula::and_all([
        Formula::implies(interior, step),
        Formula::eq(p(Term::Min), Term::Min),
        Formula::eq(s(Term::Max), Term::Max),
        Formula::implies(Formula::lt(x.clone(), Term::Max), Formula::lt(x.clone(), s(x.clone()))),
        Formula::implies(Formula::lt(Term::Min, x.clone()), Formula::lt(p(x.clone()), x.clone())),
    ]);
    let sig = Signature {
        funvars: alloc::vec![Decl::new("s", 1), Decl::new("p", 1)],
        ..Signature::default()
    };
    let mut q = Query::new(sig, Formula::forall("x", body));
    q.sync_builtins();
    Ok(q)
}
