use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Claim, Pass, TransformReport};
use crate::count::Semantics;
use crate::error::{Error, Result};
use crate::formula::{fresh_name, is_prefix_restricted, prefix_of, Decl, Formula, Quantifier, Query, Term};

/// Replaces every existential variable of a prenex sentence by a fresh
/// function of the universal variables to its left.
pub fn skolemize(q: &Query) -> Result<TransformReport> {
    if !q.is_sentence() {
        return Err(Error::precondition("skolemize needs a sentence"));
    }
    let renamed = q.renamed_apart();
    let (prefix, matrix) = prefix_of(&renamed.body);
    if !matrix.is_quantifier_free() {
        return Err(Error::precondition("skolemize needs a prenex formula"));
    }
    let mut used = renamed.names();
    let mut universals: Vec<Term> = Vec::new();
    let mut kept = Vec::new();
    let mut fresh = Vec::new();
    let mut body = matrix.clone();
    for (quant, v) in prefix {
        match quant {
            Quantifier::Forall => {
                universals.push(Term::Var(v.clone()));
                kept.push((quant, v));
            }
            Quantifier::Exists => {
                let name = fresh_name(&format!("sk_{v}"), &used);
                used.insert(name.clone());
                body = body.subst(&v, &Term::App(name.clone(), universals.clone()));
                fresh.push(Decl::new(&name, universals.len()));
            }
        }
    }
    let mut sig = renamed.sig.clone();
    sig.funvars.extend(fresh.iter().cloned());
    Ok(TransformReport {
        pass: Pass::Skolemize,
        input: q.clone(),
        output: Query::new(sig, Formula::quantify(&kept, body)),
        fresh,
        claim: Claim::Equal {
            input: Semantics::Skolem,
            output: Semantics::Functional,
        },
        min_universe: 1,
    })
}

/// Turns a prefix-restricted `Π₁` formula back into a prenex sentence: free
/// individual variables and nullary functions become leading existentials,
/// and a function of arity `a` becomes an existential right after `∀y_a`.
pub fn deskolemize(q: &Query) -> Result<TransformReport> {
    if !q.sig.relvars.is_empty() {
        return Err(Error::precondition("deskolemize does not handle relation variables"));
    }
    if !is_prefix_restricted(&q.body)? {
        return Err(Error::precondition("formula is not prefix-restricted"));
    }
    let (prefix, matrix) = prefix_of(&q.body);
    let k = prefix.len();
    if let Some(d) = q.sig.funvars.iter().find(|d| d.arity > k) {
        return Err(Error::precondition(format!(
            "function `{}` has arity {} but only {k} universal variables",
            d.name, d.arity
        )));
    }

    let mut used = q.names();
    let mut slots: Vec<Vec<String>> = alloc::vec![Vec::new(); k + 1];
    slots[0].extend(q.sig.freevars.iter().cloned());
    let mut fresh = Vec::new();
    let mut replacement: Vec<(String, String)> = Vec::new();
    for d in &q.sig.funvars {
        let v = fresh_name(&format!("v_{}", d.name), &used);
        used.insert(v.clone());
        slots[d.arity].push(v.clone());
        fresh.push(Decl::new(&v, 0));
        replacement.push((d.name.clone(), v));
    }
    let body = matrix.map_terms(&mut |t| {
        t.map(&mut |s| match s {
            Term::App(f, _) => match replacement.iter().find(|(g, _)| *g == f) {
                Some((_, v)) => Term::Var(v.clone()),
                None => Term::App(f, Vec::new()),
            },
            other => other,
        })
    });

    let mut out_prefix = Vec::new();
    for (i, group) in slots.into_iter().enumerate() {
        if i > 0 {
            out_prefix.push(prefix[i - 1].clone());
        }
        out_prefix.extend(group.into_iter().map(|v| (Quantifier::Exists, v)));
    }
    let mut sig = q.sig.clone();
    sig.funvars.clear();
    sig.freevars.clear();
    Ok(TransformReport {
        pass: Pass::Deskolemize,
        input: q.clone(),
        output: Query::new(sig, Formula::quantify(&out_prefix, body)),
        fresh,
        claim: Claim::Equal {
            input: Semantics::Functional,
            output: Semantics::Skolem,
        },
        min_universe: 1,
    })
}
