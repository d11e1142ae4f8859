//! Structures as text.
//!
//! ```text
//! universe 4
//! builtins LEQ BIT MIN
//! relation E/2 (0,1) (1,2) (2,3)
//! relation P/1 (0) (3)
//! constant c = 0
//! ```
//!
//! `universe` comes first; relations and constants are declared in encoding
//! order and every constant needs a value.

use std::fmt::Write;

use funcount_core::{Builtin, Structure, Vocabulary};

use super::{content_lines, parse_number};
use crate::{Error, Result};

/// `NAME/ARITY`.
pub(crate) fn parse_decl(line: usize, s: &str) -> Result<(String, usize)> {
    let (name, arity) = s
        .split_once('/')
        .ok_or_else(|| Error::syntax(line, format!("expected NAME/ARITY, found `{s}`")))?;
    Ok((name.trim().to_string(), parse_number(line, arity)?))
}

pub(crate) fn parse_builtins(line: usize, rest: &str) -> Result<Vec<Builtin>> {
    rest.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| w.parse().map_err(|_| Error::syntax(line, format!("unknown built-in `{w}`"))))
        .collect()
}

fn parse_tuples(line: usize, arity: usize, s: &str) -> Result<Vec<Vec<usize>>> {
    let mut tuples = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let tuple = if let Some(inner) = rest.strip_prefix('(') {
            let close = inner
                .find(')')
                .ok_or_else(|| Error::syntax(line, "unclosed `(`"))?;
            rest = inner[close + 1..].trim_start();
            inner[..close]
                .split(',')
                .map(|e| parse_number(line, e))
                .collect::<Result<Vec<_>>>()?
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let e = parse_number(line, &rest[..end])?;
            rest = rest[end..].trim_start();
            vec![e]
        };
        if tuple.len() != arity {
            return Err(Error::syntax(
                line,
                format!("tuple of length {} for a relation of arity {arity}", tuple.len()),
            ));
        }
        tuples.push(tuple);
    }
    Ok(tuples)
}

enum Entry {
    Relation(String, Vec<Vec<usize>>, usize),
    Constant(String, usize, usize),
}

pub fn parse_structure(src: &str) -> Result<Structure> {
    let mut lines = content_lines(src);
    let (first, header) = lines
        .next()
        .ok_or_else(|| Error::syntax(1, "empty structure file"))?;
    let n = match header.split_once(char::is_whitespace) {
        Some(("universe", size)) => parse_number(first, size)?,
        _ => return Err(Error::syntax(first, "structure files start with `universe N`")),
    };

    let mut vocab = Vocabulary::new();
    let mut entries = Vec::new();
    for (line, text) in lines {
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let at = |e: funcount_core::Error| Error::syntax(line, e.to_string());
        match kw {
            "builtins" => {
                for b in parse_builtins(line, rest)? {
                    vocab.add_builtin(b);
                }
            }
            "relation" => {
                let rest = rest.trim();
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                let (name, arity) = parse_decl(line, &rest[..end])?;
                vocab.add_relation(&name, arity).map_err(at)?;
                entries.push(Entry::Relation(name, parse_tuples(line, arity, &rest[end..])?, line));
            }
            "constant" => {
                let (name, value) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::syntax(line, "expected `constant NAME = VALUE`"))?;
                let name = name.trim().to_string();
                vocab.add_constant(&name).map_err(at)?;
                entries.push(Entry::Constant(name, parse_number(line, value)?, line));
            }
            other => return Err(Error::syntax(line, format!("unknown declaration `{other}`"))),
        }
    }

    let mut a = Structure::empty(vocab, n).map_err(|e| Error::syntax(first, e.to_string()))?;
    for entry in entries {
        match entry {
            Entry::Relation(name, tuples, line) => {
                for t in tuples {
                    a.insert(&name, &t).map_err(|e| Error::syntax(line, e.to_string()))?;
                }
            }
            Entry::Constant(name, value, line) => {
                a.set_constant(&name, value).map_err(|e| Error::syntax(line, e.to_string()))?;
            }
        }
    }
    Ok(a)
}

/// Canonical text: declarations in vocabulary order, tuples in lexicographic order.
pub fn print_structure(a: &Structure) -> String {
    let vocab = a.vocabulary();
    let mut out = format!("universe {}\n", a.size());
    if !vocab.builtins().is_empty() {
        let names: Vec<&str> = vocab.builtins().iter().map(|b| b.name()).collect();
        let _ = writeln!(out, "builtins {}", names.join(" "));
    }
    for sym in vocab.symbols() {
        match sym {
            funcount_core::model::Symbol::Relation { name, arity } => {
                let _ = write!(out, "relation {name}/{arity}");
                for t in a.tuples(name).expect("declared relation") {
                    let items: Vec<String> = t.iter().map(usize::to_string).collect();
                    let _ = write!(out, " ({})", items.join(","));
                }
                out.push('\n');
            }
            funcount_core::model::Symbol::Constant { name } => {
                let _ = writeln!(out, "constant {name} = {}", a.constant_value(name).expect("declared constant"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# sample\nuniverse 4\nbuiltins LEQ BIT MIN\nrelation E/2 (0,1) (1,2)\nrelation P/1 0 (3)\nconstant c = 0\nconstant d = 1\n";

    #[test]
    fn parses_and_prints() {
        let a = parse_structure(SAMPLE).unwrap();
        assert_eq!(a.size(), 4);
        assert!(a.holds("E", &[1, 2]).unwrap());
        assert_eq!(a.tuples("P").unwrap(), vec![vec![0], vec![3]]);
        assert_eq!(a.constant_value("d").unwrap(), 1);
        let printed = print_structure(&a);
        assert_eq!(
            printed,
            "universe 4\nbuiltins LEQ BIT MIN\nrelation E/2 (0,1) (1,2)\nrelation P/1 (0) (3)\nconstant c = 0\nconstant d = 1\n"
        );
        assert_eq!(parse_structure(&printed).unwrap(), a);
    }

    #[test]
    fn reports_lines() {
        let err = |src: &str| match parse_structure(src) {
            Err(Error::Syntax { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("relation E/2"), 1);
        assert_eq!(err("universe 2\nrelation E/2 (0,5)"), 2);
        assert_eq!(err("universe 2\n\nrelation E/2 (0)"), 3);
        assert_eq!(err("universe 2\nbuiltins FOO"), 2);
        assert_eq!(err("universe 0"), 1);
        assert_eq!(err("universe 2\nconstant c 1"), 2);
        assert_eq!(err("universe 2\nrelation E/2 (0,1\n"), 2);
    }
}
