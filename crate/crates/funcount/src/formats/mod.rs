//! Line-oriented text formats. Blank lines and lines starting with `#` are
//! ignored everywhere except in propositional files, which use `c` comments.

pub mod circuit;
pub mod interpretation;
pub mod prop;
pub mod structure;

pub use circuit::{parse_circuit, print_circuit};
pub use interpretation::{parse_interpretation, print_interpretation};
pub use prop::{parse_cnf, parse_dnf, print_cnf, print_dnf};
pub use structure::{parse_structure, print_structure};

/// Non-empty, non-comment lines with their 1-based numbers.
pub(crate) fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_number(line: usize, s: &str) -> crate::Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| crate::Error::syntax(line, format!("expected a number, found `{}`", s.trim())))
}
