//! Seeded generators. Instance `i` of a run draws from its own ChaCha8
//! stream, so results do not depend on scheduling.

use funcount_core::formula::{CmpOp, Formula, Term};
use funcount_core::model::tuple_unrank;
use funcount_core::prop::{Cnf, Dnf, Literal};
use funcount_core::{parse_query, Builtin, Query, Structure, Vocabulary};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Every tuple present with probability 1/2; constants uniform.
pub fn random_structure(rng: &mut impl Rng, vocab: &Vocabulary, n: usize) -> Structure {
    let mut a = Structure::empty(vocab.clone(), n).expect("n is positive");
    for (r, arity) in vocab.relations() {
        for rank in 0..n.pow(arity as u32) {
            if rng.gen_bool(0.5) {
                a.insert(r, &tuple_unrank(n, arity, rank)).expect("tuple in range");
            }
        }
    }
    for c in vocab.constants() {
        a.set_constant(c, rng.gen_range(0..n)).expect("value in range");
    }
    a
}

fn term(rng: &mut impl Rng, vocab: &Vocabulary, scope: &[String]) -> Term {
    let mut options: Vec<Term> = scope.iter().map(|v| Term::var(v)).collect();
    options.extend(vocab.constants().map(|c| Term::Const(c.to_string())));
    if vocab.has_builtin(Builtin::Min) {
        options.push(Term::Min);
    }
    if vocab.has_builtin(Builtin::Max) {
        options.push(Term::Max);
    }
    options.choose(rng).cloned().expect("scope is non-empty")
}

fn atom(rng: &mut impl Rng, vocab: &Vocabulary, scope: &[String]) -> Formula {
    let relations: Vec<(&str, usize)> = vocab.relations().collect();
    let mut ops = vec![CmpOp::Eq];
    for (b, op) in [(Builtin::Leq, CmpOp::Leq), (Builtin::Lt, CmpOp::Lt), (Builtin::Succ, CmpOp::Succ), (Builtin::Bit, CmpOp::Bit)] {
        if vocab.has_builtin(b) {
            ops.push(op);
        }
    }
    let k = rng.gen_range(0..relations.len() * 2 + ops.len());
    if k < relations.len() * 2 {
        let (r, arity) = relations[k / 2];
        Formula::rel(r, (0..arity).map(|_| term(rng, vocab, scope)).collect::<Vec<_>>())
    } else {
        let op = ops[k - relations.len() * 2];
        Formula::cmp(op, term(rng, vocab, scope), term(rng, vocab, scope))
    }
}

/// Quantifier-free formula over `scope` of nesting depth at most `depth`.
pub fn random_matrix(rng: &mut impl Rng, vocab: &Vocabulary, scope: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return atom(rng, vocab, scope);
    }
    let kind = rng.gen_range(0..4);
    let a = random_matrix(rng, vocab, scope, depth - 1);
    if kind == 0 {
        return Formula::not(a);
    }
    let b = random_matrix(rng, vocab, scope, depth - 1);
    match kind {
        1 => Formula::and(a, b),
        2 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}

/// Prenex sentence with one to `max_vars` quantified variables, so at most
/// `max_vars` quantifier blocks.
pub fn random_prenex_sentence(rng: &mut impl Rng, vocab: &Vocabulary, max_vars: usize) -> Query {
    let vars: Vec<String> = (0..rng.gen_range(1..=max_vars)).map(|i| format!("x{i}")).collect();
    let matrix = random_matrix(rng, vocab, &vars, 3);
    let body = vars.iter().rev().fold(matrix, |f, v| {
        if rng.gen_bool(0.5) {
            Formula::exists(v, f)
        } else {
            Formula::forall(v, f)
        }
    });
    parse_query(&body.to_string(), Some(vocab)).expect("generated text parses")
}

fn random_lines(rng: &mut impl Rng, vars: usize, max_lines: usize) -> Vec<Vec<Literal>> {
    (0..rng.gen_range(1..=max_lines))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| Literal {
                    var: rng.gen_range(0..vars),
                    positive: rng.gen_bool(0.5),
                })
                .collect()
        })
        .collect()
}

pub fn random_dnf(rng: &mut impl Rng, vars: usize, max_terms: usize) -> Dnf {
    Dnf::new(vars, random_lines(rng, vars, max_terms)).expect("literals in range")
}

pub fn random_cnf(rng: &mut impl Rng, vars: usize, max_clauses: usize) -> Cnf {
    Cnf::new(vars, random_lines(rng, vars, max_clauses)).expect("literals in range")
}

/// All structures of size `n` over a relational vocabulary, in order of
/// their binary encodings.
pub fn all_structures(vocab: &Vocabulary, n: usize) -> Vec<Structure> {
    assert!(vocab.constants().next().is_none(), "exhaustive sweeps are over relational vocabularies");
    let cells: usize = vocab.relations().map(|(_, a)| n.pow(a as u32)).sum();
    assert!(cells < 20, "too many structures to enumerate");
    (0..1u64 << cells)
        .map(|mask| {
            let bits: Vec<bool> = (0..cells).rev().map(|i| mask >> i & 1 == 1).collect();
            Structure::decode(&funcount_core::BitString(bits), vocab, n).expect("length matches")
        })
        .collect()
}
