//! Negation and prenex normal forms, and the fragment classifier.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Formula, Quantifier, Term};
use crate::error::{Error, Result};

/// One entry of a quantifier prefix.
pub type Quantified = (Quantifier, String);

/// Splits leading quantifiers off a formula.
pub fn prefix_of(f: &Formula) -> (Vec<Quantified>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Formula::Quant(q, v, g) = cur {
        prefix.push((*q, v.clone()));
        cur = g;
    }
    (prefix, cur)
}

/// Negations only in front of atoms; implications eliminated.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True if negate => Formula::False,
        Formula::False if negate => Formula::True,
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(_) if negate => Formula::not(f.clone()),
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => nnf(g, !negate),
        Formula::And(a, b) if negate => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if negate => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::Implies(a, b) if negate => Formula::and(nnf(a, false), nnf(b, true)),
        Formula::Implies(a, b) => Formula::or(nnf(a, true), nnf(b, false)),
        Formula::Quant(q, v, g) => {
            let q = if negate { q.dual() } else { *q };
            Formula::Quant(q, v.clone(), alloc::boxed::Box::new(nnf(g, negate)))
        }
    }
}

/// Logically equivalent prenex formula.
///
/// Quantifiers are extracted left to right in source order; negation and the
/// antecedent of an implication dualize the quantifiers they contain. Bound
/// variables are renamed apart first so extraction cannot capture.
pub fn to_prenex(f: &Formula) -> Formula {
    let f = f.rename_apart(&BTreeSet::new());
    let (prefix, matrix) = prenex(&f);
    Formula::quantify(&prefix, matrix)
}

fn dualized(prefix: Vec<Quantified>) -> Vec<Quantified> {
    prefix.into_iter().map(|(q, v)| (q.dual(), v)).collect()
}

fn prenex(f: &Formula) -> (Vec<Quantified>, Formula) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => (Vec::new(), f.clone()),
        Formula::Not(g) => {
            let (p, m) = prenex(g);
            (dualized(p), Formula::not(m))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (pa, ma) = prenex(a);
            let (pb, mb) = prenex(b);
            let (mut prefix, matrix) = match f {
                Formula::And(..) => (pa, Formula::and(ma, mb)),
                Formula::Or(..) => (pa, Formula::or(ma, mb)),
                _ => (dualized(pa), Formula::implies(ma, mb)),
            };
            prefix.extend(pb);
            (prefix, matrix)
        }
        Formula::Quant(q, v, g) => {
            let (mut p, m) = prenex(g);
            p.insert(0, (*q, v.clone()));
            (p, m)
        }
    }
}

/// Position in the quantifier alternation hierarchy, counted in maximal
/// blocks of like quantifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alternation {
    QuantifierFree,
    Sigma(usize),
    Pi(usize),
}

impl Alternation {
    /// Membership in `Σ_k` (every class sits in the next one up).
    pub fn within_sigma(self, k: usize) -> bool {
        match self {
            Alternation::QuantifierFree => true,
            Alternation::Sigma(j) => j <= k,
            Alternation::Pi(j) => j < k,
        }
    }

    pub fn within_pi(self, k: usize) -> bool {
        match self {
            Alternation::QuantifierFree => true,
            Alternation::Pi(j) => j <= k,
            Alternation::Sigma(j) => j < k,
        }
    }
}

impl core::fmt::Display for Alternation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Alternation::QuantifierFree => f.write_str("Sigma0/Pi0"),
            Alternation::Sigma(k) => write!(f, "Sigma{k}"),
            Alternation::Pi(k) => write!(f, "Pi{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FragmentInfo {
    pub in_prenex: bool,
    pub alternation: Alternation,
    /// Universal quantifiers in the prefix of the prenex image.
    pub universal_count: usize,
    pub prefix_restricted: bool,
}

pub fn classify_fragment(f: &Formula) -> FragmentInfo {
    let in_prenex = prefix_of(f).1.is_quantifier_free();
    let image;
    let prenex_form = if in_prenex {
        f
    } else {
        image = to_prenex(f);
        &image
    };
    let (prefix, _) = prefix_of(prenex_form);
    let blocks = blocks(&prefix);
    let alternation = match prefix.first() {
        None => Alternation::QuantifierFree,
        Some((Quantifier::Exists, _)) => Alternation::Sigma(blocks),
        Some((Quantifier::Forall, _)) => Alternation::Pi(blocks),
    };
    FragmentInfo {
        in_prenex,
        alternation,
        universal_count: prefix.iter().filter(|(q, _)| *q == Quantifier::Forall).count(),
        prefix_restricted: is_prefix_restricted(prenex_form).unwrap_or(false),
    }
}

/// Number of maximal blocks of like quantifiers.
pub(crate) fn blocks(prefix: &[Quantified]) -> usize {
    prefix.windows(2).filter(|w| w[0].0 != w[1].0).count() + usize::from(!prefix.is_empty())
}

/// Whether every function application in a prenex Π₁ formula `∀y₁…∀y_k ψ`
/// has the form `F(y₁, …, y_a)` for `a` the arity of `F`.
pub fn is_prefix_restricted(f: &Formula) -> Result<bool> {
    let (prefix, matrix) = prefix_of(f);
    if !matrix.is_quantifier_free() || prefix.iter().any(|(q, _)| *q != Quantifier::Forall) {
        return Err(Error::precondition("prefix restriction is defined for prenex Pi1 formulas"));
    }
    let vars: Vec<&str> = prefix.iter().map(|(_, v)| v.as_str()).collect();
    let mut ok = true;
    matrix.for_each_term(&mut |t| {
        if let Term::App(_, args) = t {
            let exact = args.len() <= vars.len()
                && args
                    .iter()
                    .zip(&vars)
                    .all(|(a, v)| matches!(a, Term::Var(x) if x == v));
            ok &= exact;
        }
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_query, Query};
    use alloc::string::ToString;

    fn q(src: &str) -> Query {
        parse_query(src, None).unwrap()
    }

    #[test]
    fn prenex_of_conjunction() {
        let f = q("rel P/1, Q/1; (forall x P(x)) /\\ (forall y Q(y))");
        assert_eq!(to_prenex(&f.body).to_string(), "forall x forall y (P(x) /\\ Q(y))");
    }

    #[test]
    fn prenex_of_negated_existential() {
        let f = q("rel P/1; ~exists x P(x)");
        assert_eq!(to_prenex(&f.body).to_string(), "forall x ~P(x)");
    }

    #[test]
    fn prenex_dualizes_antecedent() {
        let f = q("rel P/1; (exists x P(x)) -> P(min)");
        assert_eq!(to_prenex(&f.body).to_string(), "forall x (P(x) -> P(min))");
    }

    #[test]
    fn nnf_pushes_negation() {
        let f = q("rel A/1, B/1; ~(A(min) /\\ B(min))");
        assert_eq!(to_nnf(&f.body).to_string(), "~A(min) \\/ ~B(min)");
        let f = q("rel A/1; ~forall x (A(x) -> exists y A(y))");
        assert_eq!(to_nnf(&f.body).to_string(), "exists x (A(x) /\\ forall y ~A(y))");
    }

    #[test]
    fn classifies_l1_formula() {
        let f = q("rel E/2; const c, d; forall x forall y exists z ((E(x,y) -> z = c \\/ z = d) /\\ (~E(x,y) -> z = c))");
        let info = classify_fragment(&f.body);
        assert!(info.in_prenex);
        assert_eq!(info.alternation, Alternation::Pi(2));
        assert_eq!(info.universal_count, 2);

        let sk = q("rel E/2; const c, d; funvar f/2; forall x forall y ((E(x,y) -> f(x,y) = c \\/ f(x,y) = d) /\\ (~E(x,y) -> f(x,y) = c))");
        let info = classify_fragment(&sk.body);
        assert_eq!((info.alternation, info.universal_count), (Alternation::Pi(1), 2));
        assert!(info.prefix_restricted);
    }

    #[test]
    fn classifies_quantifier_free() {
        let f = q("funvar F/1; F(min) = min");
        let info = classify_fragment(&f.body);
        assert_eq!(info.alternation, Alternation::QuantifierFree);
        assert!(info.alternation.within_sigma(0) && info.alternation.within_pi(0));
        assert_eq!(info.universal_count, 0);
    }

    #[test]
    fn classifies_non_prenex_by_image() {
        let f = q("rel P/1; ~forall x exists y (P(x) /\\ P(y))");
        let info = classify_fragment(&f.body);
        assert!(!info.in_prenex);
        assert_eq!(info.alternation, Alternation::Sigma(2));
        assert!(classify_fragment(&to_prenex(&f.body)).in_prenex);
    }

    #[test]
    fn prefix_restriction() {
        let yes = q("funvar F/2; forall y1 forall y2 F(y1, y2) = min");
        assert_eq!(is_prefix_restricted(&yes.body), Ok(true));
        let no = q("funvar F/2; forall y1 forall y2 F(y2, y1) = min");
        assert_eq!(is_prefix_restricted(&no.body), Ok(false));
        let unary = q("funvar G/1, H/1; forall y1 (G(y1) = min /\\ H(y1) = min)");
        assert_eq!(is_prefix_restricted(&unary.body), Ok(true));
        let nested = q("funvar G/1; forall y1 G(G(y1)) = min");
        assert_eq!(is_prefix_restricted(&nested.body), Ok(false));
        let sigma = q("funvar G/1; exists y1 G(y1) = min");
        assert!(is_prefix_restricted(&sigma.body).is_err());
    }

    #[test]
    fn prefix_restriction_ignores_bound_names() {
        let a = q("funvar F/1; forall y F(y) = min");
        let b = q("funvar F/1; forall zz F(zz) = min");
        assert_eq!(is_prefix_restricted(&a.body), is_prefix_restricted(&b.body));
    }
}
