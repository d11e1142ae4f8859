//! Propositional 3DNF and 3CNF formulas with a truth-table oracle.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal {
            positive: !self.positive,
            ..self
        }
    }

    pub fn holds(self, assignment: u64) -> bool {
        (assignment >> self.var & 1 == 1) == self.positive
    }
}

/// Disjunction of conjunctions over variables `0..vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dnf {
    pub vars: usize,
    pub terms: Vec<Vec<Literal>>,
}

/// Conjunction of disjunctions over variables `0..vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

fn check_parts(vars: usize, parts: &[Vec<Literal>], what: &str) -> Result<()> {
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() || p.len() > 3 {
            return Err(Error::format(alloc::format!(
                "{what} {} has {} literals, expected 1 to 3",
                i + 1,
                p.len()
            )));
        }
        if let Some(l) = p.iter().find(|l| l.var >= vars) {
            return Err(Error::format(alloc::format!(
                "{what} {} mentions variable {} of {vars}",
                i + 1,
                l.var + 1
            )));
        }
    }
    Ok(())
}

impl Dnf {
    pub fn new(vars: usize, terms: Vec<Vec<Literal>>) -> Result<Self> {
        check_parts(vars, &terms, "disjunct")?;
        Ok(Dnf { vars, terms })
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.holds(assignment)))
    }

    pub fn count_models(&self) -> u64 {
        truth_table(self.vars, |a| self.eval(a))
    }
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        check_parts(vars, &clauses, "clause")?;
        Ok(Cnf { vars, clauses })
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    pub fn count_models(&self) -> u64 {
        truth_table(self.vars, |a| self.eval(a))
    }

    /// De Morgan, clause by clause: the models of the result are exactly the
    /// non-models of `self`.
    pub fn negate(&self) -> Dnf {
        Dnf {
            vars: self.vars,
            terms: self
                .clauses
                .iter()
                .map(|c| c.iter().map(|l| l.negated()).collect())
                .collect(),
        }
    }
}

fn truth_table(vars: usize, f: impl Fn(u64) -> bool) -> u64 {
    assert!(vars < 64, "truth table over {vars} variables");
    (0..1u64 << vars).filter(|&a| f(a)).count() as u64
}
