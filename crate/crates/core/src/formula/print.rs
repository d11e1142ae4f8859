use core::fmt::{self, Display, Formatter, Write};

use super::{Atom, CmpOp, Decl, Formula, Quantifier, Query, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Min => f.write_str("min"),
            Term::Max => f.write_str("max"),
            Term::App(name, args) if args.is_empty() => f.write_str(name),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel(r, args) => {
                f.write_str(r)?;
                write_args(f, args)
            }
            Atom::Cmp(CmpOp::Bit, a, b) => write!(f, "BIT({a}, {b})"),
            Atom::Cmp(CmpOp::Succ, a, b) => write!(f, "SUCC({a}, {b})"),
            Atom::Cmp(op, a, b) => {
                let sym = match op {
                    CmpOp::Eq => "=",
                    CmpOp::Leq => "<=",
                    _ => "<",
                };
                write!(f, "{a} {sym} {b}")
            }
        }
    }
}

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_prec(out: &mut Formatter<'_>, f: &Formula, ctx: u8) -> fmt::Result {
    let own = precedence(f);
    if own < ctx {
        out.write_char('(')?;
        write_prec(out, f, 0)?;
        return out.write_char(')');
    }
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(g) => {
            out.write_char('~')?;
            write_prec(out, g, UNARY)
        }
        Formula::And(a, b) => {
            write_prec(out, a, AND)?;
            out.write_str(" /\\ ")?;
            write_prec(out, b, UNARY)
        }
        Formula::Or(a, b) => {
            write_prec(out, a, OR)?;
            out.write_str(" \\/ ")?;
            write_prec(out, b, AND)
        }
        Formula::Implies(a, b) => {
            write_prec(out, a, OR)?;
            out.write_str(" -> ")?;
            write_prec(out, b, IMPLIES)
        }
        Formula::Quant(q, v, g) => {
            let kw = match q {
                Quantifier::Exists => "exists",
                Quantifier::Forall => "forall",
            };
            write!(out, "{kw} {v} ")?;
            write_prec(out, g, UNARY)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_prec(f, self, 0)
    }
}

fn write_decls(f: &mut Formatter<'_>, kw: &str, decls: &[Decl]) -> fmt::Result {
    if decls.is_empty() {
        return Ok(());
    }
    write!(f, "{kw} ")?;
    for (i, d) in decls.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}/{}", d.name, d.arity)?;
    }
    f.write_str(";\n")
}

fn write_names<'a>(f: &mut Formatter<'_>, kw: &str, names: impl IntoIterator<Item = &'a str>) -> fmt::Result {
    let mut names = names.into_iter().peekable();
    if names.peek().is_none() {
        return Ok(());
    }
    write!(f, "{kw} ")?;
    for (i, n) in names.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(n)?;
    }
    f.write_str(";\n")
}

/// Header lines followed by the body; parses back to an equal query.
impl Display for Query {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let s = &self.sig;
        write_decls(f, "rel", &s.relations)?;
        write_names(f, "const", s.constants.iter().map(|c| c.as_str()))?;
        write_names(f, "builtin", s.builtins.iter().map(|b| b.name()))?;
        write_decls(f, "relvar", &s.relvars)?;
        write_decls(f, "funvar", &s.funvars)?;
        write_names(f, "freevar", s.freevars.iter().map(|v| v.as_str()))?;
        writeln!(f, "{}", self.body)
    }
}
