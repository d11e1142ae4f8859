use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{free_semantics, Claim, Pass, TransformReport};
use crate::error::{Error, Result};
use crate::formula::{
    classify_fragment, fresh_name, prefix_of, to_prenex, CmpOp, Decl, Formula, Quantifier, Query,
    Term,
};
use crate::model::Builtin;

fn order_of(q: &Query) -> Result<Builtin> {
    [Builtin::Lt, Builtin::Leq]
        .into_iter()
        .find(|b| q.sig.builtins.contains(b))
        .ok_or_else(|| Error::precondition("needs an order built-in; declare `builtin LT;` or `builtin LEQ;`"))
}

/// `a < b`, spelled `~(b <= a)` when only LEQ is available.
fn less(order: Builtin, a: Term, b: Term) -> Formula {
    match order {
        Builtin::Lt => Formula::lt(a, b),
        _ => Formula::not(Formula::cmp(CmpOp::Leq, b, a)),
    }
}

fn report(pass: Pass, q: &Query, output: Query, fresh: Vec<Decl>) -> TransformReport {
    let sem = free_semantics(q);
    TransformReport {
        pass,
        input: q.clone(),
        output,
        fresh,
        claim: Claim::Equal { input: sem, output: sem },
        min_universe: 1,
    }
}

/// Rewrites every `∃y θ(y)`, innermost first, to
/// `∃y (θ(y) ∧ ∀z (¬θ(z) ∨ y < z ∨ y = z))`.
pub fn unique_witness(q: &Query) -> Result<TransformReport> {
    let order = order_of(q)?;
    let mut used = q.names();
    let body = smallest(&q.body, order, &mut used);
    let body = body.rename_apart(&q.sig.names());
    let mut out = Query::new(q.sig.clone(), body);
    out.sync_builtins();
    Ok(report(Pass::UniqueWitness, q, out, Vec::new()))
}

fn smallest(f: &Formula, order: Builtin, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(smallest(g, order, used)),
        Formula::And(a, b) => Formula::and(smallest(a, order, used), smallest(b, order, used)),
        Formula::Or(a, b) => Formula::or(smallest(a, order, used), smallest(b, order, used)),
        Formula::Implies(a, b) => Formula::implies(smallest(a, order, used), smallest(b, order, used)),
        Formula::Quant(Quantifier::Forall, v, g) => Formula::forall(v, smallest(g, order, used)),
        Formula::Quant(Quantifier::Exists, y, g) => {
            let theta = smallest(g, order, used);
            let z = fresh_name("z", used);
            used.insert(z.clone());
            let theta_z = theta.subst(y, &Term::Var(z.clone()));
            let (ty, tz) = (Term::Var(y.clone()), Term::Var(z.clone()));
            let not_theta = Formula::not(theta_z);
            let clause = match order {
                Builtin::Lt => Formula::or(
                    Formula::or(not_theta, Formula::lt(ty.clone(), tz.clone())),
                    Formula::eq(ty, tz),
                ),
                _ => Formula::or(not_theta, Formula::cmp(CmpOp::Leq, ty, tz)),
            };
            let minimal = Formula::forall(&z, clause);
            Formula::exists(y, Formula::and(theta, minimal))
        }
    }
}

/// Equivalent-count `Π₁` formula.
///
/// Prenex `Π≤1` input is returned as is, and so is input whose prenex image is
/// `Π≤1`. Otherwise, with prefix `Q₀v₀ … Q_{k−1}v_{k−1}` whose leading universal
/// block is `v₀ … v_{j−1}`, each later `v_i` is replaced by a choice function
/// `ch_i(v₀, …, v_{i−1})` pinned down to the least witness (for `∃`) or least
/// counterexample (for `∀`), and `0` when there is none. The pinning constraints
/// are universal, so the choice functions are unique whenever they exist.
pub fn to_pi1(q: &Query) -> Result<TransformReport> {
    let info = classify_fragment(&q.body);
    if info.in_prenex && info.alternation.within_pi(1) {
        return Ok(report(Pass::ToPi1, q, q.clone(), Vec::new()));
    }
    let prenex = to_prenex(&q.renamed_apart().body);
    let (prefix, matrix) = prefix_of(&prenex);
    if classify_fragment(&prenex).alternation.within_pi(1) {
        return Ok(report(Pass::ToPi1, q, Query::new(q.sig.clone(), prenex.clone()), Vec::new()));
    }
    let order = order_of(q)?;
    let k = prefix.len();
    let j = prefix.iter().take_while(|(quant, _)| *quant == Quantifier::Forall).count();
    let vars: Vec<Term> = prefix.iter().map(|(_, v)| Term::Var(v.clone())).collect();

    let mut used = q.names();
    used.extend(prenex.names());
    let mut fresh = Vec::new();
    let mut choice: Vec<Term> = Vec::with_capacity(k);
    for (i, (_, v)) in prefix.iter().enumerate() {
        if i < j {
            choice.push(vars[i].clone());
            continue;
        }
        let name = fresh_name(&format!("ch_{v}"), &used);
        used.insert(name.clone());
        fresh.push(Decl::new(&name, i));
        choice.push(Term::App(name, vars[..i].to_vec()));
    }
    let z = fresh_name("z", &used);
    used.insert(z.clone());
    let tz = Term::Var(z.clone());

    // suffix[i]: truth of `Q_i v_i … Q_{k−1} v_{k−1} matrix` with v_0 … v_{i−1} open
    let mut suffix: Vec<Formula> = alloc::vec![Formula::True; k + 1];
    suffix[k] = matrix.clone();
    for i in (j..k).rev() {
        suffix[i] = suffix[i + 1].subst(&prefix[i].1, &choice[i]);
    }
    let mut parts = alloc::vec![suffix[j].clone()];
    for i in j..k {
        let (quant, v) = &prefix[i];
        let r = match quant {
            Quantifier::Exists => suffix[i + 1].clone(),
            Quantifier::Forall => Formula::not(suffix[i + 1].clone()),
        };
        let rz = r.subst(v, &tz);
        let rc = r.subst(v, &choice[i]);
        let below = less(order, tz.clone(), choice[i].clone());
        parts.push(Formula::and_all([
            Formula::implies(rz.clone(), rc.clone()),
            Formula::implies(below.clone(), Formula::not(rz)),
            Formula::or(rc, Formula::not(below)),
        ]));
    }
    let universal: Vec<(Quantifier, String)> = prefix[..k - 1]
        .iter()
        .map(|(_, v)| (Quantifier::Forall, v.clone()))
        .chain([(Quantifier::Forall, z)])
        .collect();
    let mut sig = q.sig.clone();
    sig.funvars.extend(fresh.iter().cloned());
    let mut out = Query::new(sig, Formula::quantify(&universal, Formula::and_all(parts)));
    out.sync_builtins();
    Ok(report(Pass::ToPi1, q, out, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_functional, count_skolem, DEFAULT_BUDGET};
    use crate::eval::{models, Assignment};
    use crate::formula::{parse_query, Alternation};
    use crate::model::{Structure, Vocabulary};
    use crate::transforms::{check_claim, skolemize};
    use alloc::string::ToString;

    fn q(src: &str) -> Query {
        parse_query(src, None).unwrap()
    }

    fn structures(n: usize) -> Vec<Structure> {
        let vocab = Vocabulary::new().with_relation("P", 1).unwrap().with_builtins(Builtin::ALL);
        (0..1usize << n)
            .map(|mask| {
                let mut a = Structure::empty(vocab.clone(), n).unwrap();
                for e in (0..n).filter(|e| mask >> e & 1 == 1) {
                    a.insert("P", &[e]).unwrap();
                }
                a
            })
            .collect()
    }

    #[test]
    fn smallest_witness_of_trivial_formula() {
        let r = unique_witness(&q("builtin LT; exists y (y = y)")).unwrap();
        assert_eq!(
            r.output.body.to_string(),
            "exists y (y = y /\\ forall z (~z = z \\/ y < z \\/ y = z))"
        );
        let a = &structures(3)[0];
        let (_, m) = prefix_of(&r.output.body);
        let witnesses: Vec<usize> = (0..3)
            .filter(|&y| {
                let probe = Query::new(
                    Signature { freevars: alloc::vec!["y".into()], ..r.output.sig.clone() },
                    m.clone(),
                );
                models(a, &probe, &Assignment::new().individual("y", y)).unwrap()
            })
            .collect();
        assert_eq!(witnesses, alloc::vec![0]);
    }

    use crate::formula::Signature;

    #[test]
    fn unique_witness_needs_order() {
        assert!(matches!(unique_witness(&q("exists y (y = y)")), Err(Error::Precondition(_))));
        assert!(unique_witness(&q("builtin LEQ; exists y (y = y)")).is_ok());
    }

    #[test]
    fn unique_witness_preserves_counts() {
        let corpus = [
            "rel P/1; builtin LT; funvar F/1; exists y (F(y) = min)",
            "rel P/1; builtin LEQ; freevar x; exists y (P(y) /\\ x <= y)",
            "rel P/1; builtin LT; funvar F/1; forall x exists y (F(x) = y /\\ ~exists w (P(w) /\\ w < y))",
        ];
        for src in corpus {
            let r = unique_witness(&q(src)).unwrap();
            for n in 1..=3 {
                for a in structures(n) {
                    assert!(check_claim(&r, &a, DEFAULT_BUDGET).unwrap().holds(), "{src} n={n}");
                }
            }
        }
    }

    #[test]
    fn to_pi1_short_circuits() {
        let f = q("funvar F/1; forall x F(x) = x");
        assert_eq!(to_pi1(&f).unwrap().output, f);
        let f = q("funvar F/1; F(min) = min");
        assert_eq!(to_pi1(&f).unwrap().output, f);
    }

    #[test]
    fn to_pi1_handles_existentials() {
        let f = q("builtin LT; funvar F/1; exists y (F(y) = min)");
        let r = to_pi1(&f).unwrap();
        assert_eq!(classify_fragment(&r.output.body).alternation, Alternation::Pi(1));
        for n in 1..=3 {
            for a in structures(n) {
                let c = check_claim(&r, &a, DEFAULT_BUDGET).unwrap();
                assert!(c.holds(), "n={n}: {} vs {}", c.lhs, c.rhs);
            }
        }
    }

    #[test]
    fn to_pi1_on_sigma2() {
        let corpus = [
            "rel P/1; builtin LT; exists y forall u (P(u) -> u <= y)",
            "rel P/1; builtin LEQ; funvar F/1; exists y forall u (F(u) = y \\/ P(u))",
            "rel P/1; builtin LT; freevar x; ~forall y exists u (P(u) /\\ y < u /\\ x < y)",
        ];
        for src in corpus {
            let r = to_pi1(&q(src)).unwrap();
            assert!(classify_fragment(&r.output.body).alternation.within_pi(1), "{src}");
            for n in 1..=3 {
                for a in structures(n) {
                    let c = check_claim(&r, &a, DEFAULT_BUDGET).unwrap();
                    assert!(c.holds(), "{src} n={n}: {} vs {}", c.lhs, c.rhs);
                }
            }
        }
    }

    /// Skolemizing every existential of the prenexed unique-witness form lets the
    /// witness of a negated copy float freely whenever it is not needed.
    #[test]
    fn naive_composition_overcounts() {
        let f = q("rel P/1; builtin LT; exists y forall u (P(u) \\/ y < u \\/ y = u)");
        let uw = unique_witness(&f).unwrap().output;
        let prenex = Query::new(uw.sig.clone(), to_prenex(&uw.body));
        let naive = skolemize(&prenex).unwrap().output;
        let a = &structures(3)[0];
        let truth = count_functional(a, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(count_skolem(a, &f, DEFAULT_BUDGET).unwrap(), truth);
        let naive_count = count_functional(a, &naive, DEFAULT_BUDGET).unwrap();
        let fixed = count_functional(a, &to_pi1(&f).unwrap().output, DEFAULT_BUDGET).unwrap();
        assert_eq!(truth, 1u32.into());
        assert_eq!(fixed, truth);
        assert!(naive_count > truth);
    }
}
