//! Parser for the ASCII formula syntax.
//!
//! ```text
//! rel E/2; const c; builtin LT;        # vocabulary symbols (optional)
//! relvar T/1; funvar F/2; freevar x;   # free second-order and individual variables
//! forall x exists y (E(x,y) -> F(x,y) = c \/ y <= max)
//! ```
//!
//! Precedence from tightest: `~` and quantifiers, `/\`, `\/`, `->` (right
//! associative). A quantifier binds the following unary formula, so compound
//! bodies need parentheses.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{fresh_name, Atom, CmpOp, Decl, Formula, Quantifier, Query, Signature, Term};
use crate::error::{Error, Result};
use crate::model::{Builtin, Vocabulary, RESERVED};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Semi,
    Slash,
    Eq,
    Le,
    Lt,
    Not,
    And,
    Or,
    Implies,
    Dot,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::End => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'~' => Tok::Not,
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Le
            }
            b'<' => Tok::Lt,
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                i += 1;
                Tok::And
            }
            b'/' => Tok::Slash,
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 1;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..=i]
                    .parse()
                    .map_err(|_| error_at(src, start, "number too large"))?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_' || bytes[i + 1] == b'\'')
                {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(error_at(src, start, &format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn error_at(src: &str, offset: usize, message: &str) -> Error {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    Error::Parse {
        offset,
        line,
        column,
        message: message.to_string(),
    }
}

const HEADER_KEYWORDS: [&str; 6] = ["rel", "const", "builtin", "relvar", "funvar", "freevar"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    context: Option<&'a Vocabulary>,
    sig: Signature,
    /// Source name of each bound variable in scope, mapped to its unique name.
    scope: Vec<(String, String)>,
    used: BTreeSet<String>,
    depth: usize,
}

/// Deeper nesting of formulas or terms is reported as an error.
const MAX_DEPTH: usize = 256;

/// Parses a formula with its header, resolving unknown relation and constant
/// names against `context` when given.
///
/// Bound variables are renamed so every binder is unique.
pub fn parse_query(src: &str, context: Option<&Vocabulary>) -> Result<Query> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        pos: 0,
        context,
        sig: Signature::default(),
        scope: Vec::new(),
        used: BTreeSet::new(),
        depth: 0,
    };
    p.header()?;
    p.used = p.sig.names();
    if let Some(v) = context {
        p.used.extend(v.symbols().iter().map(|s| s.name().to_string()));
    }
    let body = p.formula()?;
    if matches!(p.peek(), Tok::Semi | Tok::Dot) {
        p.pos += 1;
    }
    p.expect(&Tok::End)?;
    let mut q = Query::new(p.sig, body);
    q.sync_builtins();
    Ok(q)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(error_at(self.src, self.offset(), msg))
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(&format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.err(&format!("expected identifier, found {}", other.describe())),
        }
    }

    fn header(&mut self) -> Result<()> {
        loop {
            let kw = match self.peek() {
                Tok::Ident(s) if HEADER_KEYWORDS.contains(&s.as_str()) => s.clone(),
                _ => return Ok(()),
            };
            // `rel(x)` etc. would be an atom, not a header line
            if matches!(self.peek_at(1), Tok::LParen) {
                return Ok(());
            }
            self.bump();
            loop {
                let at = self.offset();
                let name = self.ident()?;
                match kw.as_str() {
                    "builtin" => {
                        let b: Builtin = name
                            .parse()
                            .map_err(|_| error_at(self.src, at, &format!("unknown built-in `{name}`")))?;
                        self.sig.builtins.insert(b);
                    }
                    "const" | "freevar" => {
                        self.declare_name(&name, at, kw == "const")?;
                        if kw == "const" {
                            self.sig.constants.push(name);
                        } else {
                            self.sig.freevars.push(name);
                        }
                    }
                    _ => {
                        self.expect(&Tok::Slash)?;
                        let arity = match self.bump() {
                            Tok::Num(n) => n,
                            _ => return Err(error_at(self.src, at, "expected arity after `/`")),
                        };
                        if kw != "funvar" && arity == 0 {
                            return Err(error_at(self.src, at, "relation symbols need arity at least 1"));
                        }
                        self.declare_name(&name, at, kw == "rel")?;
                        let d = Decl { name, arity };
                        match kw.as_str() {
                            "rel" => self.sig.relations.push(d),
                            "relvar" => self.sig.relvars.push(d),
                            _ => self.sig.funvars.push(d),
                        }
                    }
                }
                if self.peek() == &Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(&Tok::Semi)?;
        }
    }

    fn declare_name(&self, name: &str, at: usize, vocabulary_symbol: bool) -> Result<()> {
        let clash = self.sig.names().contains(name)
            || RESERVED.contains(&name)
            || HEADER_KEYWORDS.contains(&name)
            || matches!(name, "BIT" | "SUCC")
            || (!vocabulary_symbol
                && self
                    .context
                    .is_some_and(|v| v.symbols().iter().any(|s| s.name() == name)));
        if clash {
            return Err(error_at(self.src, at, &format!("duplicate symbol `{name}`")));
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == &Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.peek() == &Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == &Tok::And {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        if self.depth == MAX_DEPTH {
            return self.err("nesting too deep");
        }
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn unary(&mut self) -> Result<Formula> {
        self.nested(Self::unary_inner)
    }

    fn unary_inner(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let q = if kw == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let at = self.offset();
                let var = self.ident()?;
                if self.is_symbol(&var) || RESERVED.contains(&var.as_str()) {
                    return Err(error_at(self.src, at, &format!("cannot bind symbol `{var}`")));
                }
                let unique = fresh_name(&var, &self.used);
                self.used.insert(unique.clone());
                self.scope.push((var, unique.clone()));
                let body = self.unary();
                self.scope.pop();
                Ok(Formula::Quant(q, unique, Box::new(body?)))
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(kw) if (kw == "BIT" || kw == "SUCC") && self.peek_at(1) == &Tok::LParen => {
                self.bump();
                self.bump();
                let a = self.term()?;
                self.expect(&Tok::Comma)?;
                let b = self.term()?;
                self.expect(&Tok::RParen)?;
                let op = if kw == "BIT" { CmpOp::Bit } else { CmpOp::Succ };
                Ok(Formula::cmp(op, a, b))
            }
            Tok::Ident(name) if self.peek_at(1) == &Tok::LParen && self.relation_arity(&name).is_some() => {
                let at = self.offset();
                self.bump();
                let args = self.args()?;
                let arity = self.relation_arity(&name).unwrap_or_default();
                if args.len() != arity {
                    return Err(error_at(
                        self.src,
                        at,
                        &format!("`{name}` expects {arity} arguments, found {}", args.len()),
                    ));
                }
                self.note_relation(&name);
                Ok(Formula::Atom(Atom::Rel(name, args)))
            }
            _ => {
                let a = self.term()?;
                let op = match self.bump() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Le => CmpOp::Leq,
                    Tok::Lt => CmpOp::Lt,
                    other => {
                        self.pos -= 1;
                        return self.err(&format!(
                            "expected `=`, `<=` or `<` after term, found {}",
                            other.describe()
                        ));
                    }
                };
                let b = self.term()?;
                Ok(Formula::cmp(op, a, b))
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Term>> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek() != &Tok::RParen {
            loop {
                args.push(self.term()?);
                if self.peek() == &Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(args)
    }

    fn is_symbol(&self, name: &str) -> bool {
        self.relation_arity(name).is_some()
            || self.sig.funvar(name).is_some()
            || self.sig.constants.iter().any(|c| c == name)
            || self.context.is_some_and(|v| v.constant(name).is_some())
    }

    fn relation_arity(&self, name: &str) -> Option<usize> {
        self.sig
            .relation(name)
            .or_else(|| self.sig.relvar(name))
            .map(|d| d.arity)
            .or_else(|| self.context.and_then(|v| v.relation(name)).map(|(_, a)| a))
    }

    fn note_relation(&mut self, name: &str) {
        if self.sig.relvar(name).is_none() && self.sig.relation(name).is_none() {
            if let Some((_, a)) = self.context.and_then(|v| v.relation(name)) {
                self.sig.relations.push(Decl::new(name, a));
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.nested(Self::term_inner)
    }

    fn term_inner(&mut self) -> Result<Term> {
        let at = self.offset();
        let name = self.ident()?;
        if let Some((_, unique)) = self.scope.iter().rev().find(|(src, _)| *src == name) {
            if self.peek() == &Tok::LParen {
                return Err(error_at(self.src, at, &format!("variable `{name}` applied as a function")));
            }
            return Ok(Term::Var(unique.clone()));
        }
        match name.as_str() {
            "min" => return Ok(Term::Min),
            "max" => return Ok(Term::Max),
            _ => {}
        }
        if let Some(d) = self.sig.funvar(&name).cloned() {
            let args = if self.peek() == &Tok::LParen {
                self.args()?
            } else {
                Vec::new()
            };
            if args.len() != d.arity {
                return Err(error_at(
                    self.src,
                    at,
                    &format!("`{name}` expects {} arguments, found {}", d.arity, args.len()),
                ));
            }
            return Ok(Term::App(name, args));
        }
        if self.peek() == &Tok::LParen {
            return Err(error_at(self.src, at, &format!("undeclared function symbol `{name}`")));
        }
        if self.sig.freevars.contains(&name) {
            return Ok(Term::Var(name));
        }
        if self.sig.constants.contains(&name) {
            return Ok(Term::Const(name));
        }
        if self.context.is_some_and(|v| v.constant(&name).is_some()) {
            self.sig.constants.push(name.clone());
            return Ok(Term::Const(name));
        }
        Err(error_at(self.src, at, &format!("undeclared symbol `{name}`")))
    }
}
