//! Fixed formula corpora for the verification suites.

use funcount_core::{parse_query, Builtin, Query, Vocabulary};

const ORDER: [Builtin; 4] = [Builtin::Leq, Builtin::Lt, Builtin::Min, Builtin::Max];

/// One unary relation `P`.
pub fn unary_vocabulary() -> Vocabulary {
    Vocabulary::new().with_relation("P", 1).expect("fresh").with_builtins(ORDER)
}

/// One binary relation `E`.
pub fn graph_vocabulary() -> Vocabulary {
    Vocabulary::new().with_relation("E", 2).expect("fresh").with_builtins(ORDER)
}

/// `P/1`, `E/2` and a constant `c`, for the random prenex suites.
pub fn mixed_vocabulary() -> Vocabulary {
    Vocabulary::new()
        .with_relation("P", 1)
        .and_then(|v| v.with_relation("E", 2))
        .and_then(|v| v.with_constant("c"))
        .expect("fresh")
        .with_builtins(ORDER)
}

/// Vocabulary of the l1 fixture: `E/2`, constants `c` and `d`.
pub fn l1_vocabulary() -> Vocabulary {
    Vocabulary::new()
        .with_relation("E", 2)
        .and_then(|v| v.with_constant("c"))
        .and_then(|v| v.with_constant("d"))
        .expect("fresh")
        .with_builtins([Builtin::Leq, Builtin::Bit, Builtin::Min])
}

pub const L1_FORMULA: &str = "forall x forall y exists z ((E(x, y) -> z = c \\/ z = d) /\\ (~E(x, y) -> z = c))";

pub fn l1_formula() -> Query {
    parse_query(L1_FORMULA, Some(&l1_vocabulary())).expect("fixed formula parses")
}

/// General formulas with free function and individual variables, including
/// `Σ₂` and non-prenex shapes. Every choice function `to_pi1` introduces has
/// arity at most 1, which keeps the `n = 3` sweep over `E` small.
pub const FO_UNARY: [&str; 10] = [
    "funvar F/1; exists y F(y) = min",
    "funvar F/1; exists x forall y F(y) = x",
    "funvar F/1; forall x exists y F(y) = x",
    "freevar u; exists x (P(x) /\\ u < x)",
    "funvar F/1; exists x forall y (P(y) -> F(y) <= x)",
    "funvar F/1; freevar u; exists x (F(x) = u /\\ P(x))",
    "funvar F/1; (exists x P(x)) -> forall y P(F(y))",
    "funvar G/0; exists x exists y (x < y /\\ P(x) /\\ G = y)",
    "funvar F/1; ~exists x forall y F(y) = x",
    "freevar u; forall x (P(x) -> x <= u)",
];

pub const FO_GRAPH: [&str; 10] = [
    "funvar F/1; forall x E(x, F(x))",
    "exists x forall y E(x, y)",
    "forall x exists y E(x, y)",
    "freevar u; exists y (E(u, y) /\\ forall z (E(z, y) -> z = u))",
    "funvar F/1; exists x forall y (E(x, y) \\/ F(y) = x)",
    "freevar u, w; exists z (E(u, z) /\\ E(z, w))",
    "funvar F/1; forall x exists y (E(x, y) /\\ F(x) = y)",
    "funvar F/1; exists x (E(x, x) /\\ F(x) = x)",
    "freevar u; (exists x E(u, x)) /\\ (exists y E(y, u))",
    "funvar F/1; exists x forall y (E(y, x) -> F(y) < x)",
];

/// Formulas with free relation variables.
pub const REL_UNARY: [&str; 5] = [
    "relvar X/1; forall x (X(x) -> P(x))",
    "relvar X/1; exists x (X(x) /\\ ~P(x))",
    "relvar X/1; freevar u; X(u) /\\ forall y (X(y) -> y <= u)",
    "relvar X/1, Y/1; forall x (X(x) \\/ Y(x))",
    "relvar X/1; forall x forall y (X(x) /\\ x < y -> X(y))",
];

pub const REL_GRAPH: [&str; 5] = [
    "relvar X/1; forall x forall y (E(x, y) -> (X(x) -> X(y)))",
    "relvar X/1; forall x forall y (E(x, y) -> ~(X(x) /\\ X(y)))",
    "relvar X/2; forall x forall y (X(x, y) -> E(x, y))",
    "relvar X/1; freevar u; exists y (E(u, y) /\\ X(y))",
    "relvar X/1; exists x forall y (X(y) -> E(x, y))",
];

/// Quantifier-free formulas over `P`, some with nested applications.
pub const SIGMA0: [&str; 10] = [
    "funvar F/1; F(min) = max",
    "funvar F/1; freevar u; P(F(u)) /\\ ~(F(u) = u)",
    "funvar F/1, G/1; freevar u; F(G(u)) = u",
    "funvar F/2; freevar u, w; F(u, w) = F(w, u)",
    "funvar F/1; freevar u; P(u) -> F(u) < u",
    "funvar F/1; F(F(min)) = min",
    "funvar F/1, G/2; freevar u; G(F(u), u) = min \\/ P(F(min))",
    "funvar F/1; freevar u, w; F(u) = w /\\ F(w) = u",
    "funvar C/0; freevar u; P(C) /\\ u <= C",
    "funvar F/1; P(F(min)) /\\ ~P(F(max))",
];

/// Parses each entry against `vocab` with `builtin LT;` prepended, so the
/// order-based passes can find their order.
pub fn parse_all(sources: &[&str], vocab: &Vocabulary) -> Vec<Query> {
    sources
        .iter()
        .map(|src| parse_query(&format!("builtin LT; {src}"), Some(vocab)).expect("corpus formula parses"))
        .collect()
}
