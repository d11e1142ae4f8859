//! First-order interpretations: structures defined inside other structures.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::Compiled;
use crate::formula::{parse_query, Query};
use crate::model::{string_vocabulary, tuple_unrank, Builtin, Element, Structure, Vocabulary};

/// `φ₀` picks the universe among `k`-tuples; `φ_R` with `k·a` free variables
/// defines each target relation `R` of arity `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    source: Vocabulary,
    target: Vocabulary,
    width: usize,
    universe: Query,
    relations: Vec<Query>,
}

impl Interpretation {
    /// `relations` lists one query per target relation, in declaration order.
    pub fn new(
        source: Vocabulary,
        target: Vocabulary,
        width: usize,
        universe: Query,
        relations: Vec<Query>,
    ) -> Result<Self> {
        if width == 0 {
            return Err(Error::precondition("interpretation width must be positive"));
        }
        if let Some(c) = target.constants().next() {
            return Err(Error::precondition(format!("target constant `{c}` cannot be interpreted")));
        }
        let arities: Vec<(&str, usize)> = target.relations().collect();
        if arities.len() != relations.len() {
            return Err(Error::precondition(format!(
                "{} target relations but {} defining formulas",
                arities.len(),
                relations.len()
            )));
        }
        let check = |name: &str, q: &Query, vars: usize| -> Result<()> {
            if !q.sig.funvars.is_empty() || !q.sig.relvars.is_empty() {
                return Err(Error::precondition(format!("formula for {name} has second-order variables")));
            }
            if q.sig.freevars.len() != vars {
                return Err(Error::precondition(format!(
                    "formula for {name} has {} free variables, expected {vars}",
                    q.sig.freevars.len()
                )));
            }
            q.sig.check_against(&source)
        };
        check("the universe", &universe, width)?;
        for ((name, arity), q) in arities.iter().zip(&relations) {
            check(name, q, width * arity)?;
        }
        Ok(Interpretation {
            source,
            target,
            width,
            universe,
            relations,
        })
    }

    /// `k = 1`, universe `true`, and `R(x̄) := R(x̄)` for every relation.
    pub fn identity(vocab: &Vocabulary) -> Result<Self> {
        let mut target = Vocabulary::new();
        let mut relations = Vec::new();
        for (name, arity) in vocab.relations() {
            target.add_relation(name, arity)?;
            let vars: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
            let src = format!("freevar {}; {name}({})", vars.join(", "), vars.join(", "));
            relations.push(parse_query(&src, Some(vocab))?);
        }
        let universe = parse_query("freevar x; true", Some(vocab))?;
        Interpretation::new(vocab.clone(), target, 1, universe, relations)
    }

    pub fn source(&self) -> &Vocabulary {
        &self.source
    }

    pub fn target(&self) -> &Vocabulary {
        &self.target
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn universe(&self) -> &Query {
        &self.universe
    }

    pub fn relations(&self) -> &[Query] {
        &self.relations
    }
}

/// Target structure whose elements are the `k`-tuples satisfying `φ₀`,
/// numbered in lexicographic order.
pub fn apply_interpretation(i: &Interpretation, a: &Structure) -> Result<Structure> {
    let n = a.size();
    let k = i.width;
    let total = n
        .checked_pow(k as u32)
        .ok_or_else(|| Error::domain("too many candidate tuples"))?;
    let universe = Compiled::query(a, &i.universe)?;
    let mut env = universe.env();
    let mut elements: Vec<Vec<Element>> = Vec::new();
    for rank in 0..total {
        let t = tuple_unrank(n, k, rank);
        env.slots[..k].copy_from_slice(&t);
        if universe.eval(&mut env) {
            elements.push(t);
        }
    }
    if elements.is_empty() {
        return Err(Error::domain("interpretation defines an empty universe"));
    }
    let m = elements.len();
    let mut b = Structure::empty(i.target.clone(), m)?;
    for ((name, arity), q) in i.target.relations().zip(&i.relations) {
        let compiled = Compiled::query(a, q)?;
        let mut env = compiled.env();
        for rank in 0..m.pow(arity as u32) {
            let tuple = tuple_unrank(m, arity, rank);
            for (j, &e) in tuple.iter().enumerate() {
                env.slots[j * k..(j + 1) * k].copy_from_slice(&elements[e]);
            }
            if compiled.eval(&mut env) {
                b.insert(name, &tuple)?;
            }
        }
    }
    Ok(b)
}

/// Interpretation from strings to circuits whose proof-tree count is `1` when
/// the string has even length and `0` otherwise: an AND gate at `min` with
/// one leaf child at `max` holding the low bit of `max`.
pub fn parity_interpretation() -> Interpretation {
    let source = string_vocabulary([Builtin::Lt, Builtin::Bit, Builtin::Min, Builtin::Max]);
    let q = |src: &str| parse_query(src, Some(&source)).expect("fixed formulas parse");
    Interpretation::new(
        source.clone(),
        crate::circuit::circuit_vocabulary(),
        1,
        q("freevar x; true"),
        alloc::vec![
            q("freevar x, y; x = min /\\ y = max /\\ min < max"),
            q("freevar x; x = min /\\ min < max"),
            q("freevar x; false"),
            q("freevar x; x = max /\\ BIT(min, max)"),
            q("freevar x; x = min"),
        ],
    )
    .expect("fixed interpretation is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::structure_to_circuit;
    use crate::model::{string_structure_with, BitString};
    use alloc::vec;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let v = Vocabulary::new().with_relation("E", 2).unwrap().with_builtins([Builtin::Min, Builtin::Leq]);
        let mut a = Structure::empty(v, n).unwrap();
        for &(x, y) in edges {
            a.insert("E", &[x, y]).unwrap();
        }
        a
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        all_perms(n - 1)
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    q
                })
            })
            .collect()
    }

    fn isomorphic(a: &Structure, b: &Structure) -> bool {
        a.size() == b.size() && all_perms(a.size()).iter().any(|p| a.permute(p).unwrap() == *b)
    }

    #[test]
    fn identity_is_identity() {
        let a = graph(3, &[(0, 1), (2, 2)]);
        let i = Interpretation::identity(a.vocabulary()).unwrap();
        let b = apply_interpretation(&i, &a).unwrap();
        assert_eq!(b.tuples("E").unwrap(), a.tuples("E").unwrap());
        assert_eq!(b.size(), 3);
    }

    #[test]
    fn restricted_universe() {
        let a = graph(3, &[]);
        let i = Interpretation::new(
            a.vocabulary().clone(),
            Vocabulary::new(),
            1,
            parse_query("freevar x; x = min", Some(a.vocabulary())).unwrap(),
            vec![],
        )
        .unwrap();
        assert_eq!(apply_interpretation(&i, &a).unwrap().size(), 1);
        let empty = Interpretation::new(
            a.vocabulary().clone(),
            Vocabulary::new(),
            1,
            parse_query("freevar x; false", Some(a.vocabulary())).unwrap(),
            vec![],
        )
        .unwrap();
        assert!(matches!(apply_interpretation(&empty, &a), Err(Error::Domain(_))));
    }

    #[test]
    fn pairs_are_numbered_lexicographically() {
        let a = graph(2, &[(0, 1)]);
        let target = Vocabulary::new().with_relation("E", 2).unwrap();
        let i = Interpretation::new(
            a.vocabulary().clone(),
            target,
            2,
            parse_query("freevar x1, x2; true", Some(a.vocabulary())).unwrap(),
            vec![parse_query("freevar x1, x2, y1, y2; E(x1, y1) /\\ x2 = y2", Some(a.vocabulary())).unwrap()],
        )
        .unwrap();
        let b = apply_interpretation(&i, &a).unwrap();
        assert_eq!(b.size(), 4);
        // (0,0) -> (1,0) and (0,1) -> (1,1)
        assert_eq!(b.tuples("E").unwrap(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn rejects_wrong_arities() {
        let a = graph(2, &[]);
        let target = Vocabulary::new().with_relation("E", 2).unwrap();
        let bad = Interpretation::new(
            a.vocabulary().clone(),
            target,
            1,
            parse_query("freevar x; true", Some(a.vocabulary())).unwrap(),
            vec![parse_query("freevar x; true", Some(a.vocabulary())).unwrap()],
        );
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn commutes_with_renumbering() {
        let a = graph(3, &[(0, 1), (1, 2), (2, 2)]);
        let target = Vocabulary::new().with_relation("P", 2).unwrap();
        let i = Interpretation::new(
            a.vocabulary().clone(),
            target,
            2,
            parse_query("freevar x1, x2; E(x1, x2) \\/ x1 = x2", Some(a.vocabulary())).unwrap(),
            vec![parse_query("freevar x1, x2, y1, y2; x2 = y1", Some(a.vocabulary())).unwrap()],
        )
        .unwrap();
        let b = apply_interpretation(&i, &a).unwrap();
        for p in all_perms(3) {
            let pb = apply_interpretation(&i, &a.permute(&p).unwrap()).unwrap();
            assert!(isomorphic(&b, &pb), "{p:?}");
        }
    }

    #[test]
    fn parity_family() {
        let i = parity_interpretation();
        for n in 1..=6 {
            let w = BitString(vec![false; n]);
            let a = string_structure_with(&w, [Builtin::Lt, Builtin::Bit, Builtin::Min, Builtin::Max]).unwrap();
            let c = structure_to_circuit(&apply_interpretation(&i, &a).unwrap()).unwrap();
            let expected = u32::from(n % 2 == 0 && n >= 2);
            assert_eq!(c.count_proof_trees(), expected.into(), "n={n}");
        }
    }
}
