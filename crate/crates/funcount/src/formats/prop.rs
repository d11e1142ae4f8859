//! Propositional 3DNF and 3CNF files in the DIMACS style.
//!
//! ```text
//! c (x1 & ~x2) | x3
//! p dnf 3 2
//! 1 -2 0
//! 3 0
//! ```
//!
//! One disjunct or clause per line, 1-based signed literals, trailing `0`
//! optional. Without a `p` line the variable count is the largest index.

use std::fmt::Write;

use funcount_core::prop::{Cnf, Dnf, Literal};

use crate::{Error, Result};

struct Parsed {
    vars: usize,
    lines: Vec<Vec<Literal>>,
}

fn parse(src: &str, kind: &str) -> Result<Parsed> {
    let mut declared: Option<(usize, usize, usize)> = None;
    let mut lines = Vec::new();
    let mut largest = 0;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text == "c" || text.starts_with("c ") || text.starts_with('%') {
            continue;
        }
        if let Some(rest) = text.strip_prefix("p ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            match words.as_slice() {
                [k, vars, count] if *k == kind => {
                    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::syntax(line, format!("bad number `{s}`")));
                    declared = Some((num(vars)?, num(count)?, line));
                }
                _ => return Err(Error::syntax(line, format!("expected `p {kind} VARS COUNT`"))),
            }
            continue;
        }
        let mut lits = Vec::new();
        let mut words = text.split_whitespace().peekable();
        while let Some(w) = words.next() {
            let v: i64 = w.parse().map_err(|_| Error::syntax(line, format!("bad literal `{w}`")))?;
            if v == 0 {
                if words.peek().is_some() {
                    return Err(Error::syntax(line, "`0` must end the line"));
                }
                break;
            }
            let var = v.unsigned_abs() as usize;
            largest = largest.max(var);
            lits.push(Literal {
                var: var - 1,
                positive: v > 0,
            });
        }
        if lits.is_empty() || lits.len() > 3 {
            return Err(Error::syntax(line, format!("{} literals; expected 1 to 3", lits.len())));
        }
        lines.push(lits);
    }
    let vars = match declared {
        Some((vars, count, line)) => {
            if largest > vars {
                return Err(Error::syntax(line, format!("literal {largest} exceeds the declared {vars} variables")));
            }
            if count != lines.len() {
                return Err(Error::syntax(line, format!("declared {count} lines, found {}", lines.len())));
            }
            vars
        }
        None => largest,
    };
    if vars == 0 {
        return Err(Error::syntax(1, "formula has no variables"));
    }
    Ok(Parsed { vars, lines })
}

pub fn parse_dnf(src: &str) -> Result<Dnf> {
    let p = parse(src, "dnf")?;
    Ok(Dnf::new(p.vars, p.lines)?)
}

pub fn parse_cnf(src: &str) -> Result<Cnf> {
    let p = parse(src, "cnf")?;
    Ok(Cnf::new(p.vars, p.lines)?)
}

fn print(kind: &str, vars: usize, lines: &[Vec<Literal>]) -> String {
    let mut out = format!("p {kind} {vars} {}\n", lines.len());
    for l in lines {
        for lit in l {
            let v = lit.var as i64 + 1;
            let _ = write!(out, "{} ", if lit.positive { v } else { -v });
        }
        out.push_str("0\n");
    }
    out
}

pub fn print_dnf(d: &Dnf) -> String {
    print("dnf", d.vars, &d.terms)
}

pub fn print_cnf(c: &Cnf) -> String {
    print("cnf", c.vars, &c.clauses)
}
