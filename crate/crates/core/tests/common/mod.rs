#![allow(dead_code)]

use std::collections::BTreeMap;

use funcount_core::eval::{Assignment, FunctionTable};
use funcount_core::formula::{parse_query, Atom, CmpOp, Formula, Quantifier, Query, Term};
use funcount_core::model::{tuple_rank, Builtin, Structure, Vocabulary};

/// Deterministic choices drawn from a proptest-generated vector.
pub struct Choices<'a> {
    data: &'a [u32],
    pos: usize,
}

impl<'a> Choices<'a> {
    pub fn new(data: &'a [u32]) -> Self {
        Choices { data, pos: 0 }
    }

    pub fn pick(&mut self, k: usize) -> usize {
        if k <= 1 || self.data.is_empty() {
            return 0;
        }
        let v = self.data[self.pos % self.data.len()] as usize;
        self.pos += 1;
        v % k
    }

    pub fn flip(&mut self) -> bool {
        self.pick(2) == 1
    }
}

/// Symbols a generated formula may use.
#[derive(Clone, Debug)]
pub struct Pool {
    pub rels: Vec<(&'static str, usize)>,
    pub consts: Vec<&'static str>,
    pub relvars: Vec<(&'static str, usize)>,
    pub funs: Vec<(&'static str, usize)>,
    pub free: Vec<&'static str>,
    pub quantifiers: bool,
    pub depth: usize,
}

pub const BINDERS: [&str; 3] = ["x", "y", "z"];

impl Pool {
    pub fn standard() -> Self {
        Pool {
            rels: vec![("P", 1), ("E", 2)],
            consts: vec!["c"],
            relvars: vec![],
            funs: vec![],
            free: vec!["u"],
            quantifiers: true,
            depth: 4,
        }
    }

    pub fn header(&self) -> String {
        let mut h = String::new();
        let decls = |kw: &str, ds: &[(&str, usize)]| {
            if ds.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = ds.iter().map(|(n, a)| format!("{n}/{a}")).collect();
                format!("{kw} {};\n", parts.join(", "))
            }
        };
        h += &decls("rel", &self.rels);
        if !self.consts.is_empty() {
            h += &format!("const {};\n", self.consts.join(", "));
        }
        h += "builtin LEQ, LT, SUCC, BIT, MIN, MAX;\n";
        h += &decls("relvar", &self.relvars);
        h += &decls("funvar", &self.funs);
        if !self.free.is_empty() {
            h += &format!("freevar {};\n", self.free.join(", "));
        }
        h
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new().with_builtins(Builtin::ALL);
        for (r, a) in &self.rels {
            v.add_relation(r, *a).unwrap();
        }
        for c in &self.consts {
            v.add_constant(c).unwrap();
        }
        v
    }

    pub fn term(&self, ch: &mut Choices, scope: &[&'static str], depth: usize) -> Term {
        let mut options = scope.len() + self.free.len() + self.consts.len() + 2;
        if depth > 0 {
            options += self.funs.len();
        }
        let mut k = ch.pick(options);
        if k < scope.len() {
            return Term::var(scope[k]);
        }
        k -= scope.len();
        if k < self.free.len() {
            return Term::var(self.free[k]);
        }
        k -= self.free.len();
        if k < self.consts.len() {
            return Term::Const(self.consts[k].into());
        }
        k -= self.consts.len();
        match k {
            0 => Term::Min,
            1 => Term::Max,
            _ => {
                let (f, a) = self.funs[k - 2];
                Term::app(f, (0..a).map(|_| self.term(ch, scope, depth - 1)))
            }
        }
    }

    pub fn atom(&self, ch: &mut Choices, scope: &[&'static str]) -> Formula {
        let rels: Vec<(&str, usize)> = self.rels.iter().chain(&self.relvars).copied().collect();
        let k = ch.pick(rels.len() + 5);
        if k < rels.len() {
            let (r, a) = rels[k];
            return Formula::rel(r, (0..a).map(|_| self.term(ch, scope, 1)));
        }
        let op = [CmpOp::Eq, CmpOp::Leq, CmpOp::Lt, CmpOp::Bit, CmpOp::Succ][k - rels.len()];
        Formula::cmp(op, self.term(ch, scope, 1), self.term(ch, scope, 1))
    }

    pub fn formula(&self, ch: &mut Choices, scope: &mut Vec<&'static str>, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom(ch, scope);
        }
        let kinds = if self.quantifiers { 8 } else { 6 };
        match ch.pick(kinds) {
            0 | 1 => self.atom(ch, scope),
            2 => Formula::not(self.formula(ch, scope, depth - 1)),
            3 => Formula::and(self.formula(ch, scope, depth - 1), self.formula(ch, scope, depth - 1)),
            4 => Formula::or(self.formula(ch, scope, depth - 1), self.formula(ch, scope, depth - 1)),
            5 => Formula::implies(self.formula(ch, scope, depth - 1), self.formula(ch, scope, depth - 1)),
            k => {
                let v = BINDERS[ch.pick(BINDERS.len())];
                scope.push(v);
                let body = self.formula(ch, scope, depth - 1);
                scope.pop();
                if k == 6 {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
        }
    }

    /// A random formula printed and parsed back under this pool's header.
    pub fn query(&self, ch: &mut Choices) -> Query {
        let body = self.formula(ch, &mut Vec::new(), self.depth);
        self.parse(&body.to_string())
    }

    pub fn parse(&self, body: &str) -> Query {
        let src = format!("{}{body}", self.header());
        parse_query(&src, None).unwrap_or_else(|e| panic!("{e}\n{src}"))
    }

    pub fn structure(&self, ch: &mut Choices, n: usize) -> Structure {
        let mut a = Structure::empty(self.vocabulary(), n).unwrap();
        for (r, arity) in &self.rels {
            for rank in 0..n.pow(*arity as u32) {
                if ch.flip() {
                    a.insert(r, &funcount_core::model::tuple_unrank(n, *arity, rank)).unwrap();
                }
            }
        }
        for c in &self.consts {
            a.set_constant(c, ch.pick(n)).unwrap();
        }
        a
    }

    pub fn assignment(&self, ch: &mut Choices, n: usize) -> Assignment {
        let mut alpha = Assignment::new();
        for v in &self.free {
            alpha = alpha.individual(v, ch.pick(n));
        }
        for (r, arity) in &self.relvars {
            let tuples: Vec<Vec<usize>> = (0..n.pow(*arity as u32))
                .filter(|_| ch.flip())
                .map(|rank| funcount_core::model::tuple_unrank(n, *arity, rank))
                .collect();
            alpha = alpha.relation(r, tuples);
        }
        for (f, arity) in &self.funs {
            let values = (0..n.pow(*arity as u32)).map(|_| ch.pick(n)).collect();
            alpha = alpha.function(f, FunctionTable::new(*arity, values));
        }
        alpha
    }
}

/// Every structure over one unary relation `P` (and no constants) of size `n`.
pub fn unary_structures(n: usize) -> Vec<Structure> {
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

/// Tarskian truth computed straight from the syntax tree, sharing nothing
/// with the compiled evaluator.
pub fn naive_models(a: &Structure, f: &Formula, alpha: &Assignment) -> bool {
    naive(a, f, alpha, &mut BTreeMap::new())
}

fn naive_term(a: &Structure, t: &Term, alpha: &Assignment, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env.get(v).copied().unwrap_or_else(|| alpha.individuals[v]),
        Term::Const(c) => a.constant_value(c).unwrap(),
        Term::Min => 0,
        Term::Max => a.size() - 1,
        Term::App(f, args) => {
            let values: Vec<usize> = args.iter().map(|s| naive_term(a, s, alpha, env)).collect();
            alpha.functions[f].values[tuple_rank(a.size(), &values)]
        }
    }
}

fn naive(a: &Structure, f: &Formula, alpha: &Assignment, env: &mut BTreeMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::Rel(r, args)) => {
            let t: Vec<usize> = args.iter().map(|s| naive_term(a, s, alpha, env)).collect();
            match alpha.relations.get(r) {
                Some(set) => set.contains(&t),
                None => a.holds(r, &t).unwrap(),
            }
        }
        Formula::Atom(Atom::Cmp(op, s, t)) => {
            let (i, j) = (naive_term(a, s, alpha, env), naive_term(a, t, alpha, env));
            match op {
                CmpOp::Eq => i == j,
                CmpOp::Leq => i <= j,
                CmpOp::Lt => i < j,
                CmpOp::Bit => i < usize::BITS as usize && (j >> i) & 1 == 1,
                CmpOp::Succ => i + 1 == j,
            }
        }
        Formula::Not(g) => !naive(a, g, alpha, env),
        Formula::And(p, q) => naive(a, p, alpha, env) && naive(a, q, alpha, env),
        Formula::Or(p, q) => naive(a, p, alpha, env) || naive(a, q, alpha, env),
        Formula::Implies(p, q) => !naive(a, p, alpha, env) || naive(a, q, alpha, env),
        Formula::Quant(quant, v, g) => {
            let saved = env.get(v).copied();
            let mut result = *quant == Quantifier::Forall;
            for e in 0..a.size() {
                env.insert(v.clone(), e);
                if naive(a, g, alpha, env) != result {
                    result = !result;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    }
}
