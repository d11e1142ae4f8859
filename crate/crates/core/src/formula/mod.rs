//! First-order formulas with free relation, function and individual variables.

mod normal;
mod parse;
mod print;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Builtin, Vocabulary};

pub use normal::{
    classify_fragment, is_prefix_restricted, prefix_of, to_nnf, to_prenex, Alternation,
    FragmentInfo, Quantified,
};
pub use parse::parse_query;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Min,
    Max,
    /// Application of a free function variable; nullary applications are allowed.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(name: &str, args: impl IntoIterator<Item = Term>) -> Term {
        Term::App(name.to_string(), args.into_iter().collect())
    }

    pub fn is_app(&self) -> bool {
        matches!(self, Term::App(..))
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Const(_) | Term::Min | Term::Max => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Bottom-up rewrite.
    pub fn map(&self, f: &mut impl FnMut(Term) -> Term) -> Term {
        let t = match self {
            Term::App(name, args) => Term::App(name.clone(), args.iter().map(|a| a.map(f)).collect()),
            other => other.clone(),
        };
        f(t)
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.visit(f));
        }
        f(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Leq,
    Lt,
    Bit,
    Succ,
}

impl CmpOp {
    pub fn builtin(self) -> Option<Builtin> {
        match self {
            CmpOp::Eq => None,
            CmpOp::Leq => Some(Builtin::Leq),
            CmpOp::Lt => Some(Builtin::Lt),
            CmpOp::Bit => Some(Builtin::Bit),
            CmpOp::Succ => Some(Builtin::Succ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// A vocabulary relation or a free relation variable applied to terms.
    Rel(String, Vec<Term>),
    Cmp(CmpOp, Term, Term),
}

impl Atom {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (slice, pair): (&[Term], Option<[&Term; 2]>) = match self {
            Atom::Rel(_, args) => (args, None),
            Atom::Cmp(_, a, b) => (&[], Some([a, b])),
        };
        slice.iter().chain(pair.into_iter().flatten())
    }

    fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Rel(r, args) => Atom::Rel(r.clone(), args.iter().map(&mut *f).collect()),
            Atom::Cmp(op, a, b) => Atom::Cmp(*op, f(a), f(b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn rel(name: &str, args: impl IntoIterator<Item = Term>) -> Formula {
        Formula::Atom(Atom::Rel(name.to_string(), args.into_iter().collect()))
    }

    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Cmp(op, a, b))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::cmp(CmpOp::Eq, a, b)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::cmp(CmpOp::Lt, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v.to_string(), Box::new(f))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn quantify(prefix: &[Quantified], matrix: Formula) -> Formula {
        prefix.iter().rev().fold(matrix, |acc, (q, v)| {
            Formula::Quant(*q, v.clone(), Box::new(acc))
        })
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Quant(..) => false,
        }
    }

    /// Calls `f` on every atom.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) | Formula::Quant(_, _, g) => g.for_each_atom(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    /// Calls `f` on every term and subterm, innermost first.
    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        self.for_each_atom(&mut |a| a.terms().for_each(|t| t.visit(f)));
    }

    /// Rewrites every atom, leaving the connective structure intact.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Quant(q, v, g) => Formula::Quant(*q, v.clone(), Box::new(g.map_atoms(f))),
        }
    }

    /// Rewrites every top-level term of every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        self.map_atoms(&mut |a| Formula::Atom(a.map_terms(f)))
    }

    pub fn bound_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(g) => g.collect_bound(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Formula::Quant(_, v, g) => {
                out.push(v);
                g.collect_bound(out);
            }
        }
    }

    /// Free individual variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for t in a.terms() {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v.to_string());
                        }
                    }
                }
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, g) => {
                bound.push(v);
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every identifier occurring anywhere in the formula.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.bound_vars().into_iter().map(String::from).collect();
        self.for_each_atom(&mut |a| {
            if let Atom::Rel(r, _) = a {
                out.insert(r.clone());
            }
        });
        self.for_each_term(&mut |t| match t {
            Term::Var(v) | Term::Const(v) | Term::App(v, _) => {
                out.insert(v.clone());
            }
            Term::Min | Term::Max => {}
        });
        out
    }

    /// Capture-avoiding substitution of `term` for free occurrences of `var`.
    pub fn subst(&self, var: &str, term: &Term) -> Formula {
        let term_vars: BTreeSet<String> = term.vars().into_iter().map(String::from).collect();
        let mut avoid = self.names();
        avoid.extend(term_vars.iter().cloned());
        avoid.insert(var.to_string());
        self.subst_inner(var, term, &term_vars, &mut avoid)
    }

    fn subst_inner(
        &self,
        var: &str,
        term: &Term,
        term_vars: &BTreeSet<String>,
        avoid: &mut BTreeSet<String>,
    ) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| {
                t.map(&mut |s| match s {
                    Term::Var(ref v) if v == var => term.clone(),
                    other => other,
                })
            })),
            Formula::Not(g) => Formula::not(g.subst_inner(var, term, term_vars, avoid)),
            Formula::And(a, b) => Formula::and(
                a.subst_inner(var, term, term_vars, avoid),
                b.subst_inner(var, term, term_vars, avoid),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_inner(var, term, term_vars, avoid),
                b.subst_inner(var, term, term_vars, avoid),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.subst_inner(var, term, term_vars, avoid),
                b.subst_inner(var, term, term_vars, avoid),
            ),
            Formula::Quant(q, v, g) => {
                if v == var {
                    return self.clone();
                }
                if term_vars.contains(v) {
                    let fresh = fresh_name(v, avoid);
                    avoid.insert(fresh.clone());
                    let renamed = g.subst(v, &Term::Var(fresh.clone()));
                    let body = renamed.subst_inner(var, term, term_vars, avoid);
                    return Formula::Quant(*q, fresh, Box::new(body));
                }
                Formula::Quant(*q, v.clone(), Box::new(g.subst_inner(var, term, term_vars, avoid)))
            }
        }
    }

    /// Renames bound variables so that every binder is distinct and no binder
    /// shares a name with anything in `taken`.
    pub fn rename_apart(&self, taken: &BTreeSet<String>) -> Formula {
        let mut used = taken.clone();
        used.extend(self.free_vars());
        self.rename_inner(&mut used, &BTreeMap::new())
    }

    fn rename_inner(&self, used: &mut BTreeSet<String>, env: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| {
                t.map(&mut |s| match s {
                    Term::Var(ref v) => env.get(v).map(|r| Term::Var(r.clone())).unwrap_or(s),
                    other => other,
                })
            })),
            Formula::Not(g) => Formula::not(g.rename_inner(used, env)),
            Formula::And(a, b) => Formula::and(a.rename_inner(used, env), b.rename_inner(used, env)),
            Formula::Or(a, b) => Formula::or(a.rename_inner(used, env), b.rename_inner(used, env)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_inner(used, env), b.rename_inner(used, env))
            }
            Formula::Quant(q, v, g) => {
                let name = fresh_name(v, used);
                used.insert(name.clone());
                let mut inner = env.clone();
                inner.insert(v.clone(), name.clone());
                Formula::Quant(*q, name, Box::new(g.rename_inner(used, &inner)))
            }
        }
    }
}

/// `base` if unused, otherwise the first free `base_1`, `base_2`, ….
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|c| !used.contains(c))
        .expect("unbounded supply of names")
}

/// A declared symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decl {
    pub name: String,
    pub arity: usize,
}

impl Decl {
    pub fn new(name: &str, arity: usize) -> Self {
        Decl {
            name: name.to_string(),
            arity,
        }
    }
}

/// The header of a formula: vocabulary symbols it mentions and its free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub relations: Vec<Decl>,
    pub constants: Vec<String>,
    pub builtins: BTreeSet<Builtin>,
    pub relvars: Vec<Decl>,
    pub funvars: Vec<Decl>,
    pub freevars: Vec<String>,
}

impl Signature {
    pub fn relvar(&self, name: &str) -> Option<&Decl> {
        self.relvars.iter().find(|d| d.name == name)
    }

    pub fn funvar(&self, name: &str) -> Option<&Decl> {
        self.funvars.iter().find(|d| d.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&Decl> {
        self.relations.iter().find(|d| d.name == name)
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.relations
            .iter()
            .chain(&self.relvars)
            .chain(&self.funvars)
            .map(|d| d.name.clone())
            .chain(self.constants.iter().cloned())
            .chain(self.freevars.iter().cloned())
            .collect()
    }

    /// Vocabulary symbols and built-ins required of a structure.
    pub fn check_against(&self, vocab: &Vocabulary) -> Result<()> {
        for d in &self.relations {
            match vocab.relation(&d.name) {
                Some((_, a)) if a == d.arity => {}
                Some((_, a)) => {
                    return Err(Error::Arity {
                        symbol: d.name.clone(),
                        expected: a,
                        found: d.arity,
                    })
                }
                None => return Err(Error::UnknownSymbol(d.name.clone())),
            }
        }
        if let Some(c) = self.constants.iter().find(|c| vocab.constant(c).is_none()) {
            return Err(Error::UnknownSymbol(c.clone()));
        }
        if let Some(b) = self.builtins.iter().find(|b| !vocab.has_builtin(**b)) {
            return Err(Error::UnknownSymbol(b.name().to_string()));
        }
        Ok(())
    }
}

/// A formula together with its header.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub sig: Signature,
    pub body: Formula,
}

impl Query {
    pub fn new(sig: Signature, body: Formula) -> Self {
        Query { sig, body }
    }

    /// Every identifier in header or body.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = self.sig.names();
        out.extend(self.body.names());
        out
    }

    pub fn fresh(&self, base: &str) -> String {
        fresh_name(base, &self.names())
    }

    pub fn is_sentence(&self) -> bool {
        self.sig.freevars.is_empty() && self.sig.funvars.is_empty() && self.sig.relvars.is_empty()
    }

    /// Rebuilds the body with bound variables renamed apart from each other and the header.
    pub fn renamed_apart(&self) -> Query {
        Query {
            sig: self.sig.clone(),
            body: self.body.rename_apart(&self.sig.names()),
        }
    }

    /// Adds the built-ins mentioned by the body to the header.
    pub(crate) fn sync_builtins(&mut self) {
        let mut found = BTreeSet::new();
        self.body.for_each_atom(&mut |a| {
            if let Atom::Cmp(op, ..) = a {
                found.extend(op.builtin());
            }
        });
        self.body.for_each_term(&mut |t| match t {
            Term::Min => {
                found.insert(Builtin::Min);
            }
            Term::Max => {
                found.insert(Builtin::Max);
            }
            _ => {}
        });
        self.sig.builtins.extend(found);
    }

    /// Canonical representative up to renaming of bound variables and function
    /// variables: binders become `v0, v1, …` in binding order, function variables
    /// `F0, F1, …` in order of first occurrence.
    pub fn canonical(&self) -> Query {
        let mut order: Vec<String> = Vec::new();
        self.body.for_each_term(&mut |t| {
            if let Term::App(f, _) = t {
                if !order.contains(f) {
                    order.push(f.clone());
                }
            }
        });
        let mut unused: Vec<&Decl> = self
            .sig
            .funvars
            .iter()
            .filter(|d| !order.contains(&d.name))
            .collect();
        unused.sort_by_key(|d| d.arity);
        order.extend(unused.into_iter().map(|d| d.name.clone()));
        let fmap: BTreeMap<&str, String> = order
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_str(), format!("F{i}")))
            .collect();
        let mut funvars: Vec<Decl> = self
            .sig
            .funvars
            .iter()
            .map(|d| Decl::new(&fmap[d.name.as_str()], d.arity))
            .collect();
        funvars.sort();
        let body = self.body.map_terms(&mut |t| {
            t.map(&mut |s| match s {
                Term::App(f, args) => Term::App(fmap[f.as_str()].clone(), args),
                other => other,
            })
        });
        let mut counter = 0;
        let body = canonical_binders(&body, &mut counter, &BTreeMap::new());
        Query {
            sig: Signature {
                funvars,
                ..self.sig.clone()
            },
            body,
        }
    }
}

fn canonical_binders(f: &Formula, counter: &mut usize, env: &BTreeMap<String, String>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| {
            t.map(&mut |s| match s {
                Term::Var(ref v) => env.get(v).map(|r| Term::Var(r.clone())).unwrap_or(s),
                other => other,
            })
        })),
        Formula::Not(g) => Formula::not(canonical_binders(g, counter, env)),
        Formula::And(a, b) => {
            let a = canonical_binders(a, counter, env);
            Formula::and(a, canonical_binders(b, counter, env))
        }
        Formula::Or(a, b) => {
            let a = canonical_binders(a, counter, env);
            Formula::or(a, canonical_binders(b, counter, env))
        }
        Formula::Implies(a, b) => {
            let a = canonical_binders(a, counter, env);
            Formula::implies(a, canonical_binders(b, counter, env))
        }
        Formula::Quant(q, v, g) => {
            let name = format!("v{counter}");
            *counter += 1;
            let mut inner = env.clone();
            inner.insert(v.clone(), name.clone());
            Formula::Quant(*q, name, Box::new(canonical_binders(g, counter, &inner)))
        }
    }
}
