//! Circuits as text: one gate per line, then the root.
//!
//! ```text
//! 0 AND 1,2
//! 1 OR 3,4
//! 2 OR 3,4
//! 3 LEAF 1
//! 4 LEAF 1
//! root 0
//! ```
//!
//! Gate ids are `0..m` in any order, each defined once.

use std::fmt::Write;

use funcount_core::{Circuit, Gate, GateKind};

use super::{content_lines, parse_number};
use crate::{Error, Result};

pub fn parse_circuit(src: &str) -> Result<Circuit> {
    let mut gates: Vec<Option<Gate>> = Vec::new();
    let mut root = None;
    for (line, text) in content_lines(src) {
        let words: Vec<&str> = text.split_whitespace().collect();
        if words[0] == "root" {
            if words.len() != 2 {
                return Err(Error::syntax(line, "expected `root ID`"));
            }
            if root.is_some() {
                return Err(Error::syntax(line, "root declared twice"));
            }
            root = Some(parse_number(line, words[1])?);
            continue;
        }
        let id = parse_number(line, words[0])?;
        let gate = match (words.get(1).copied(), &words[2.min(words.len())..]) {
            (Some("LEAF"), ["0"]) => Gate::leaf(false),
            (Some("LEAF"), ["1"]) => Gate::leaf(true),
            (Some(kind @ ("AND" | "OR")), [children]) => {
                let children = children
                    .split(',')
                    .map(|c| parse_number(line, c))
                    .collect::<Result<Vec<_>>>()?;
                if kind == "AND" {
                    Gate::and(children)
                } else {
                    Gate::or(children)
                }
            }
            _ => return Err(Error::syntax(line, "expected `ID AND|OR C,C,...` or `ID LEAF 0|1`")),
        };
        if gates.len() <= id {
            gates.resize(id + 1, None);
        }
        if gates[id].is_some() {
            return Err(Error::syntax(line, format!("gate {id} defined twice")));
        }
        gates[id] = Some(gate);
    }
    let root = root.ok_or_else(|| Error::syntax(src.lines().count().max(1), "missing `root ID`"))?;
    let gates = gates
        .into_iter()
        .enumerate()
        .map(|(id, g)| {
            g.ok_or_else(|| {
                Error::Core(funcount_core::Error::Structural {
                    element: id,
                    message: "gate is referenced by its id but not defined".into(),
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Circuit::new(gates, root)?)
}

pub fn print_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for (id, g) in c.gates().iter().enumerate() {
        let _ = match g.kind {
            GateKind::Leaf(v) => writeln!(out, "{id} LEAF {}", u8::from(v)),
            GateKind::And | GateKind::Or => {
                let kind = if g.kind == GateKind::And { "AND" } else { "OR" };
                let children: Vec<String> = g.children.iter().map(usize::to_string).collect();
                writeln!(out, "{id} {kind} {}", children.join(","))
            }
        };
    }
    let _ = writeln!(out, "root {}", c.root());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ORS: &str = "0 AND 1,2\n1 OR 3,4\n2 OR 3,4\n3 LEAF 1\n4 LEAF 1\nroot 0\n";

    #[test]
    fn round_trip() {
        let c = parse_circuit(TWO_ORS).unwrap();
        assert_eq!(c.count_proof_trees(), 4u32.into());
        assert_eq!(print_circuit(&c), TWO_ORS);
        let shuffled = "# leaves first\n4 LEAF 1\n3 LEAF 1\nroot 0\n2 OR 3,4\n1 OR 3,4\n0 AND 1,2\n";
        assert_eq!(parse_circuit(shuffled).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_circuit("0 LEAF 2\nroot 0"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_circuit("0 LEAF 1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_circuit("0 LEAF 1\n0 LEAF 0\nroot 0"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(
            parse_circuit("1 LEAF 1\nroot 1"),
            Err(Error::Core(funcount_core::Error::Structural { element: 0, .. }))
        ));
        assert!(matches!(
            parse_circuit("0 OR 1\n1 OR 0\nroot 0"),
            Err(Error::Core(funcount_core::Error::Structural { .. }))
        ));
    }
}
