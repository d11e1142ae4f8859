//! Interpretations as text.
//!
//! ```text
//! width 1
//! source relation E/2
//! source builtins LT MIN MAX
//! target relation F/2
//! universe freevar x; true
//! define F freevar x, y; E(y, x)
//! ```
//!
//! Formulas are single-line queries resolved against the source vocabulary;
//! every target relation has exactly one `define` line.

use std::collections::BTreeMap;
use std::fmt::Write;

use funcount_core::formula::parse_query;
use funcount_core::{Interpretation, Query, Vocabulary};

use super::structure::{parse_builtins, parse_decl};
use super::{content_lines, parse_number};
use crate::{Error, Result};

fn vocabulary_line(vocab: &mut Vocabulary, line: usize, rest: &str) -> Result<()> {
    let (kw, arg) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
    let at = |e: funcount_core::Error| Error::syntax(line, e.to_string());
    match kw {
        "relation" => {
            let (name, arity) = parse_decl(line, arg.trim())?;
            vocab.add_relation(&name, arity).map_err(at)
        }
        "constant" => vocab.add_constant(arg.trim()).map_err(at),
        "builtins" => {
            for b in parse_builtins(line, arg)? {
                vocab.add_builtin(b);
            }
            Ok(())
        }
        other => Err(Error::syntax(line, format!("unknown vocabulary declaration `{other}`"))),
    }
}

pub fn parse_interpretation(src: &str) -> Result<Interpretation> {
    let mut width = None;
    let mut source = Vocabulary::new();
    let mut target = Vocabulary::new();
    let mut universe = None;
    let mut defs: BTreeMap<String, (usize, &str)> = BTreeMap::new();
    for (line, text) in content_lines(src) {
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        match kw {
            "width" => width = Some(parse_number(line, rest)?),
            "source" => vocabulary_line(&mut source, line, rest)?,
            "target" => vocabulary_line(&mut target, line, rest)?,
            "universe" => universe = Some((line, rest)),
            "define" => {
                let (name, formula) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::syntax(line, "expected `define NAME FORMULA`"))?;
                if defs.insert(name.to_string(), (line, formula)).is_some() {
                    return Err(Error::syntax(line, format!("`{name}` defined twice")));
                }
            }
            other => return Err(Error::syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    let width = width.ok_or_else(|| Error::syntax(1, "missing `width K`"))?;
    let query = |(line, text): (usize, &str)| -> Result<Query> {
        parse_query(text, Some(&source)).map_err(|e| Error::syntax(line, e.to_string()))
    };
    let universe = query(universe.ok_or_else(|| Error::syntax(1, "missing `universe FORMULA`"))?)?;
    let mut relations = Vec::new();
    for (name, _) in target.relations() {
        let def = defs
            .remove(name)
            .ok_or_else(|| Error::syntax(1, format!("target relation `{name}` has no `define` line")))?;
        relations.push(query(def)?);
    }
    if let Some((name, (line, _))) = defs.into_iter().next() {
        return Err(Error::syntax(line, format!("`{name}` is not a target relation")));
    }
    Ok(Interpretation::new(source, target, width, universe, relations)?)
}

fn one_line(q: &Query) -> String {
    format!("freevar {}; {}", q.sig.freevars.join(", "), q.body)
}

fn print_vocabulary(out: &mut String, side: &str, v: &Vocabulary) {
    for sym in v.symbols() {
        let _ = match sym {
            funcount_core::model::Symbol::Relation { name, arity } => writeln!(out, "{side} relation {name}/{arity}"),
            funcount_core::model::Symbol::Constant { name } => writeln!(out, "{side} constant {name}"),
        };
    }
    if !v.builtins().is_empty() {
        let names: Vec<&str> = v.builtins().iter().map(|b| b.name()).collect();
        let _ = writeln!(out, "{side} builtins {}", names.join(" "));
    }
}

pub fn print_interpretation(i: &Interpretation) -> String {
    let mut out = format!("width {}\n", i.width());
    print_vocabulary(&mut out, "source", i.source());
    print_vocabulary(&mut out, "target", i.target());
    let _ = writeln!(out, "universe {}", one_line(i.universe()));
    for ((name, _), q) in i.target().relations().zip(i.relations()) {
        let _ = writeln!(out, "define {name} {}", one_line(q));
    }
    out
}
