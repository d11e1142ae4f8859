//! Model checking.
//!
//! Queries are compiled against a structure into a slot-indexed tree so that
//! the exhaustive counters can re-evaluate them millions of times without
//! name lookups.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formula::{Atom, CmpOp, Formula, Quantifier, Query, Term};
use crate::model::{builtin_relation, tuple_rank, Builtin, Element, Structure};

/// A total function `A^arity → A`, stored by lexicographic argument rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<Element>,
}

impl FunctionTable {
    pub fn new(arity: usize, values: Vec<Element>) -> Self {
        FunctionTable { arity, values }
    }

    pub fn constant(n: usize, arity: usize, value: Element) -> Self {
        FunctionTable {
            arity,
            values: vec![value; n.pow(arity as u32)],
        }
    }

    pub fn apply(&self, n: usize, args: &[Element]) -> Element {
        self.values[tuple_rank(n, args)]
    }
}

/// Interpretation of the free variables of a query.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub individuals: BTreeMap<String, Element>,
    pub relations: BTreeMap<String, BTreeSet<Vec<Element>>>,
    pub functions: BTreeMap<String, FunctionTable>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn individual(mut self, name: &str, value: Element) -> Self {
        self.individuals.insert(name.to_string(), value);
        self
    }

    pub fn relation(mut self, name: &str, tuples: impl IntoIterator<Item = Vec<Element>>) -> Self {
        self.relations.insert(name.to_string(), tuples.into_iter().collect());
        self
    }

    pub fn function(mut self, name: &str, table: FunctionTable) -> Self {
        self.functions.insert(name.to_string(), table);
        self
    }
}

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Slot(usize),
    Elem(Element),
    App(usize, Box<[CTerm]>),
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Const(bool),
    Rel(usize, Box<[CTerm]>),
    RelVar(usize, Box<[CTerm]>),
    Cmp(CmpOp, CTerm, CTerm),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// Values of every slot, function table and relation-variable table.
#[derive(Clone, Debug)]
pub(crate) struct Env {
    pub slots: Vec<Element>,
    pub funcs: Vec<Vec<Element>>,
    pub rels: Vec<Vec<bool>>,
}

/// A query compiled against one structure.
///
/// Slots `0..open.len()` hold the open variables in order; bound variables
/// follow. Function and relation variables are indexed in header order.
#[derive(Clone, Debug)]
pub(crate) struct Compiled<'a> {
    pub structure: &'a Structure,
    pub root: Node,
    pub slot_count: usize,
    pub func_arity: Vec<usize>,
    pub relvar_arity: Vec<usize>,
}

struct Compiler<'q> {
    query: &'q Query,
    structure: &'q Structure,
    next_slot: usize,
}

impl<'a> Compiled<'a> {
    /// Compiles `body` with `open` as its open individual variables.
    pub fn new(structure: &'a Structure, query: &Query, body: &Formula, open: &[String]) -> Result<Self> {
        query.sig.check_against(structure.vocabulary())?;
        let mut c = Compiler {
            query,
            structure,
            next_slot: open.len(),
        };
        let mut scope: Vec<(String, usize)> = open.iter().cloned().zip(0..).collect();
        let root = c.compile_formula(body, &mut scope)?;
        Ok(Compiled {
            structure,
            root,
            slot_count: c.next_slot,
            func_arity: query.sig.funvars.iter().map(|d| d.arity).collect(),
            relvar_arity: query.sig.relvars.iter().map(|d| d.arity).collect(),
        })
    }

    /// Compiles the body of `query` with its declared free variables open.
    pub fn query(structure: &'a Structure, query: &Query) -> Result<Self> {
        Self::new(structure, query, &query.body, &query.sig.freevars)
    }

    pub fn env(&self) -> Env {
        let n = self.structure.size();
        Env {
            slots: vec![0; self.slot_count],
            funcs: self.func_arity.iter().map(|&a| vec![0; n.pow(a as u32)]).collect(),
            rels: self.relvar_arity.iter().map(|&a| vec![false; n.pow(a as u32)]).collect(),
        }
    }

    pub fn eval(&self, env: &mut Env) -> bool {
        eval_node(&self.root, self.structure, env)
    }
}

impl<'q> Compiler<'q> {
    fn compile_term(&self, t: &Term, scope: &[(String, usize)]) -> Result<CTerm> {
        Ok(match t {
            Term::Var(v) => match scope.iter().rev().find(|(n, _)| n == v) {
                Some(&(_, s)) => CTerm::Slot(s),
                None => return Err(Error::Unbound(v.clone())),
            },
            Term::Const(c) => {
                let idx = self
                    .structure
                    .vocabulary()
                    .constant(c)
                    .ok_or_else(|| Error::UnknownSymbol(c.clone()))?;
                CTerm::Elem(self.structure.constant_by_index(idx))
            }
            Term::Min => {
                self.require(Builtin::Min)?;
                CTerm::Elem(0)
            }
            Term::Max => {
                self.require(Builtin::Max)?;
                CTerm::Elem(self.structure.size() - 1)
            }
            Term::App(f, args) => {
                let (idx, decl) = self
                    .query
                    .sig
                    .funvars
                    .iter()
                    .enumerate()
                    .find(|(_, d)| &d.name == f)
                    .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if decl.arity != args.len() {
                    return Err(Error::Arity {
                        symbol: f.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                let args = args
                    .iter()
                    .map(|a| self.compile_term(a, scope))
                    .collect::<Result<Vec<_>>>()?;
                CTerm::App(idx, args.into_boxed_slice())
            }
        })
    }

    fn require(&self, b: Builtin) -> Result<()> {
        if self.structure.vocabulary().has_builtin(b) {
            Ok(())
        } else {
            Err(Error::UnknownSymbol(b.name().to_string()))
        }
    }

    fn compile_args(&self, args: &[Term], scope: &[(String, usize)]) -> Result<Box<[CTerm]>> {
        args.iter()
            .map(|a| self.compile_term(a, scope))
            .collect::<Result<Vec<_>>>()
            .map(Vec::into_boxed_slice)
    }

    fn compile_formula(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(Atom::Rel(r, args)) => {
                let arity_err = |expected| Error::Arity {
                    symbol: r.clone(),
                    expected,
                    found: args.len(),
                };
                if let Some((idx, d)) = self.query.sig.relvars.iter().enumerate().find(|(_, d)| &d.name == r) {
                    if d.arity != args.len() {
                        return Err(arity_err(d.arity));
                    }
                    Node::RelVar(idx, self.compile_args(args, scope)?)
                } else {
                    let (idx, arity) = self
                        .structure
                        .vocabulary()
                        .relation(r)
                        .ok_or_else(|| Error::UnknownSymbol(r.clone()))?;
                    if arity != args.len() {
                        return Err(arity_err(arity));
                    }
                    Node::Rel(idx, self.compile_args(args, scope)?)
                }
            }
            Formula::Atom(Atom::Cmp(op, a, b)) => {
                if let Some(b) = op.builtin() {
                    self.require(b)?;
                }
                Node::Cmp(*op, self.compile_term(a, scope)?, self.compile_term(b, scope)?)
            }
            Formula::Not(g) => Node::Not(Box::new(self.compile_formula(g, scope)?)),
            Formula::And(a, b) => Node::And(
                Box::new(self.compile_formula(a, scope)?),
                Box::new(self.compile_formula(b, scope)?),
            ),
            Formula::Or(a, b) => Node::Or(
                Box::new(self.compile_formula(a, scope)?),
                Box::new(self.compile_formula(b, scope)?),
            ),
            Formula::Implies(a, b) => Node::Implies(
                Box::new(self.compile_formula(a, scope)?),
                Box::new(self.compile_formula(b, scope)?),
            ),
            Formula::Quant(q, v, g) => {
                let slot = self.next_slot;
                self.next_slot += 1;
                scope.push((v.clone(), slot));
                let body = self.compile_formula(g, scope);
                scope.pop();
                let body = Box::new(body?);
                match q {
                    Quantifier::Exists => Node::Exists(slot, body),
                    Quantifier::Forall => Node::Forall(slot, body),
                }
            }
        })
    }
}

#[inline]
pub(crate) fn eval_term(t: &CTerm, n: usize, env: &Env) -> Element {
    match t {
        CTerm::Slot(s) => env.slots[*s],
        CTerm::Elem(e) => *e,
        CTerm::App(f, args) => {
            let rank = args.iter().fold(0, |acc, a| acc * n + eval_term(a, n, env));
            env.funcs[*f][rank]
        }
    }
}

fn rank(args: &[CTerm], n: usize, env: &Env) -> usize {
    args.iter().fold(0, |acc, a| acc * n + eval_term(a, n, env))
}

fn eval_node(node: &Node, a: &Structure, env: &mut Env) -> bool {
    let n = a.size();
    match node {
        Node::Const(b) => *b,
        Node::Rel(r, args) => a.relation_table(*r)[rank(args, n, env)],
        Node::RelVar(r, args) => env.rels[*r][rank(args, n, env)],
        Node::Cmp(op, x, y) => {
            let (i, j) = (eval_term(x, n, env), eval_term(y, n, env));
            match op {
                CmpOp::Eq => i == j,
                CmpOp::Leq => builtin_relation(Builtin::Leq, i, j),
                CmpOp::Lt => builtin_relation(Builtin::Lt, i, j),
                CmpOp::Bit => builtin_relation(Builtin::Bit, i, j),
                CmpOp::Succ => builtin_relation(Builtin::Succ, i, j),
            }
        }
        Node::Not(g) => !eval_node(g, a, env),
        Node::And(x, y) => eval_node(x, a, env) && eval_node(y, a, env),
        Node::Or(x, y) => eval_node(x, a, env) || eval_node(y, a, env),
        Node::Implies(x, y) => !eval_node(x, a, env) || eval_node(y, a, env),
        Node::Exists(s, g) => (0..n).any(|e| {
            env.slots[*s] = e;
            eval_node(g, a, env)
        }),
        Node::Forall(s, g) => (0..n).all(|e| {
            env.slots[*s] = e;
            eval_node(g, a, env)
        }),
    }
}

/// Whether `a ⊨ query[α]`. Every free variable of the query must be bound by `α`.
pub fn models(a: &Structure, query: &Query, alpha: &Assignment) -> Result<bool> {
    let compiled = Compiled::query(a, query)?;
    let n = a.size();
    let mut env = compiled.env();
    for (i, v) in query.sig.freevars.iter().enumerate() {
        let e = *alpha
            .individuals
            .get(v)
            .ok_or_else(|| Error::Unbound(v.clone()))?;
        if e >= n {
            return Err(Error::domain(format!("{v} = {e} outside universe of size {n}")));
        }
        env.slots[i] = e;
    }
    for (i, d) in query.sig.funvars.iter().enumerate() {
        let table = alpha
            .functions
            .get(&d.name)
            .ok_or_else(|| Error::Unbound(d.name.clone()))?;
        if table.arity != d.arity || table.values.len() != n.pow(d.arity as u32) {
            return Err(Error::domain(format!("table for {} is not total over A^{}", d.name, d.arity)));
        }
        if table.values.iter().any(|&v| v >= n) {
            return Err(Error::domain(format!("table for {} leaves the universe", d.name)));
        }
        env.funcs[i].clone_from(&table.values);
    }
    for (i, d) in query.sig.relvars.iter().enumerate() {
        let tuples = alpha
            .relations
            .get(&d.name)
            .ok_or_else(|| Error::Unbound(d.name.clone()))?;
        for t in tuples {
            if t.len() != d.arity || t.iter().any(|&e| e >= n) {
                return Err(Error::domain(format!("tuple {t:?} does not fit {}", d.name)));
            }
            env.rels[i][tuple_rank(n, t)] = true;
        }
    }
    Ok(compiled.eval(&mut env))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_query;
    use crate::model::Vocabulary;

    fn l1_structure() -> Structure {
        let v = Vocabulary::new()
            .with_relation("E", 2)
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_constant("d")
            .unwrap();
        Structure::empty(v, 4)
            .unwrap()
            .with_tuples("E", &[&[0, 1]])
            .unwrap()
            .with_constant("c", 0)
            .unwrap()
            .with_constant("d", 1)
            .unwrap()
    }

    #[test]
    fn edge_admits_both_constants() {
        let a = l1_structure();
        let q = parse_query(
            "freevar x, y, z; (E(x,y) -> z = c \\/ z = d) /\\ (~E(x,y) -> z = c)",
            Some(a.vocabulary()),
        )
        .unwrap();
        let holds = |x, y, z| models(&a, &q, &Assignment::new().individual("x", x).individual("y", y).individual("z", z)).unwrap();
        assert!(holds(0, 1, 0));
        assert!(holds(0, 1, 1));
        assert!(!holds(0, 1, 2));
        assert!(holds(1, 0, 0));
        assert!(!holds(1, 0, 1));
    }

    #[test]
    fn reflexivity_holds_everywhere() {
        for n in 1..4 {
            let a = Structure::empty(Vocabulary::new(), n).unwrap();
            let q = parse_query("forall x (x = x)", None).unwrap();
            assert!(models(&a, &q, &Assignment::new()).unwrap());
        }
    }

    #[test]
    fn unbound_free_variable() {
        let a = Structure::empty(Vocabulary::new(), 2).unwrap();
        let q = parse_query("freevar x; x = x", None).unwrap();
        assert_eq!(models(&a, &q, &Assignment::new()), Err(Error::Unbound("x".into())));
    }

    #[test]
    fn missing_builtin_is_unknown_symbol() {
        let a = Structure::empty(Vocabulary::new(), 2).unwrap();
        let q = parse_query("forall x (min <= x)", None).unwrap();
        assert!(matches!(models(&a, &q, &Assignment::new()), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn function_and_relation_variables() {
        let a = Structure::empty(Vocabulary::new().with_builtins([Builtin::Min]), 3).unwrap();
        let q = parse_query("relvar T/1; funvar F/1; forall x (T(F(x)) \\/ F(x) = min)", None).unwrap();
        let alpha = Assignment::new()
            .function("F", FunctionTable::new(1, vec![0, 2, 0]))
            .relation("T", [vec![2]]);
        assert!(models(&a, &q, &alpha).unwrap());
        let alpha = alpha.relation("T", []);
        assert!(!models(&a, &q, &alpha).unwrap());
    }
}
