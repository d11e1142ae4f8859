//! AND/OR circuits with resolved leaves, proof-tree counting, and the
//! correspondence with structures over `E/2, Gand/1, Gor/1, B/1, r/1`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eval::{Compiled, Env};
use crate::formula::{prefix_of, Quantifier, Query};
use crate::model::{tuple_unrank, Structure, Vocabulary};
use crate::BigCount;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Leaf(bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub children: Vec<usize>,
}

impl Gate {
    pub fn and(children: Vec<usize>) -> Self {
        Gate { kind: GateKind::And, children }
    }

    pub fn or(children: Vec<usize>) -> Self {
        Gate { kind: GateKind::Or, children }
    }

    pub fn leaf(value: bool) -> Self {
        Gate {
            kind: GateKind::Leaf(value),
            children: Vec::new(),
        }
    }
}

/// Gates are numbered `0..len`; the edge relation is acyclic and a gate lists
/// each child at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    root: usize,
    /// Gates reachable from the root, children before parents.
    order: Vec<usize>,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>, root: usize) -> Result<Self> {
        if root >= gates.len() {
            return Err(Error::structural(root, "root is not a gate"));
        }
        for (id, g) in gates.iter().enumerate() {
            match g.kind {
                GateKind::Leaf(_) if !g.children.is_empty() => {
                    return Err(Error::structural(id, "leaf with children"))
                }
                GateKind::And | GateKind::Or if g.children.is_empty() => {
                    return Err(Error::structural(id, "gate without children"))
                }
                _ => {}
            }
            if let Some(&c) = g.children.iter().find(|&&c| c >= gates.len()) {
                return Err(Error::structural(id, format!("child {c} is not a gate")));
            }
            if let Some((_, &c)) = g.children.iter().enumerate().find(|(i, c)| g.children[..*i].contains(c)) {
                return Err(Error::structural(id, format!("child {c} listed twice")));
            }
        }
        let order = topological(&gates, root)?;
        Ok(Circuit { gates, root, order })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn evaluate(&self) -> bool {
        let mut value = alloc::vec![false; self.gates.len()];
        for &id in &self.order {
            let g = &self.gates[id];
            value[id] = match g.kind {
                GateKind::Leaf(b) => b,
                GateKind::And => g.children.iter().all(|&c| value[c]),
                GateKind::Or => g.children.iter().any(|&c| value[c]),
            };
        }
        value[self.root]
    }

    /// Proof trees of the tree unfolding: OR sums, AND multiplies, computed
    /// once per shared gate.
    pub fn count_proof_trees(&self) -> BigCount {
        let mut count: Vec<BigUint> = alloc::vec![BigUint::zero(); self.gates.len()];
        for &id in &self.order {
            let g = &self.gates[id];
            count[id] = match g.kind {
                GateKind::Leaf(b) => BigUint::from(u8::from(b)),
                GateKind::And => g.children.iter().fold(BigUint::one(), |acc, &c| acc * &count[c]),
                GateKind::Or => g.children.iter().fold(BigUint::zero(), |acc, &c| acc + &count[c]),
            };
        }
        core::mem::take(&mut count[self.root])
    }

    /// Gates on a longest path from the root to a leaf.
    pub fn depth(&self) -> usize {
        let mut depth = alloc::vec![0usize; self.gates.len()];
        for &id in &self.order {
            depth[id] = 1 + self.gates[id].children.iter().map(|&c| depth[c]).max().unwrap_or(0);
        }
        depth[self.root]
    }
}

/// Gates reachable from `root`, children first. Every gate is visited, so a
/// cycle anywhere is a structural error.
fn topological(gates: &[Gate], root: usize) -> Result<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = alloc::vec![Mark::New; gates.len()];
    let mut order = Vec::new();
    for start in core::iter::once(root).chain(0..gates.len()) {
        if mark[start] != Mark::New {
            continue;
        }
        let record = start == root;
        let mut stack = alloc::vec![(start, 0usize)];
        mark[start] = Mark::Open;
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            if let Some(&c) = gates[id].children.get(*next) {
                *next += 1;
                match mark[c] {
                    Mark::New => {
                        mark[c] = Mark::Open;
                        stack.push((c, 0));
                    }
                    Mark::Open => return Err(Error::structural(c, "edge relation has a cycle")),
                    Mark::Done => {}
                }
            } else {
                mark[id] = Mark::Done;
                if record {
                    order.push(id);
                }
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Tree-shaped circuit of a prenex sentence: each block of `w` existential
/// (universal) variables is an OR (AND) gate over the `n^w` bindings of the
/// block, and each full binding is a leaf holding the truth of the matrix.
pub fn circuit_from_prenex(a: &Structure, q: &Query) -> Result<Circuit> {
    if !q.is_sentence() {
        return Err(Error::precondition("circuit_from_prenex needs a sentence"));
    }
    let (prefix, matrix) = prefix_of(&q.body);
    if !matrix.is_quantifier_free() {
        return Err(Error::precondition("circuit_from_prenex needs a prenex formula"));
    }
    let open: Vec<_> = prefix.iter().map(|(_, v)| v.clone()).collect();
    let compiled = Compiled::new(a, q, matrix, &open)?;
    let mut blocks: Vec<(Quantifier, usize)> = Vec::new();
    for (quant, _) in &prefix {
        match blocks.last_mut() {
            Some((b, w)) if b == quant => *w += 1,
            _ => blocks.push((*quant, 1)),
        }
    }
    let mut builder = Builder {
        compiled: &compiled,
        env: compiled.env(),
        gates: Vec::new(),
    };
    builder.block(&blocks, 0);
    Circuit::new(builder.gates, 0)
}

struct Builder<'a, 'b> {
    compiled: &'b Compiled<'a>,
    env: Env,
    gates: Vec<Gate>,
}

impl Builder<'_, '_> {
    fn block(&mut self, blocks: &[(Quantifier, usize)], first_slot: usize) -> usize {
        let id = self.gates.len();
        let Some((&(quant, width), rest)) = blocks.split_first() else {
            let value = self.compiled.eval(&mut self.env);
            self.gates.push(Gate::leaf(value));
            return id;
        };
        self.gates.push(Gate::leaf(false));
        let n = self.compiled.structure.size();
        let mut children = Vec::with_capacity(n.pow(width as u32));
        for rank in 0..n.pow(width as u32) {
            for (k, e) in tuple_unrank(n, width, rank).into_iter().enumerate() {
                self.env.slots[first_slot + k] = e;
            }
            children.push(self.block(rest, first_slot + width));
        }
        self.gates[id] = match quant {
            Quantifier::Exists => Gate::or(children),
            Quantifier::Forall => Gate::and(children),
        };
        id
    }
}

/// `E/2, Gand/1, Gor/1, B/1, r/1` with no built-ins.
pub fn circuit_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new();
    for (name, arity) in [("E", 2), ("Gand", 1), ("Gor", 1), ("B", 1), ("r", 1)] {
        v.add_relation(name, arity).expect("distinct names");
    }
    v
}

/// Reads a circuit off a structure: `E(x, y)` when `y` is a child of `x`,
/// `Gand`/`Gor` mark gates, other elements are leaves with value `B(x)`, and
/// `r` marks the root.
pub fn structure_to_circuit(b: &Structure) -> Result<Circuit> {
    let rel = |name: &str| -> Result<Vec<Vec<usize>>> { b.tuples(name) };
    let n = b.size();
    let mut children: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for t in rel("E")? {
        children[t[0]].push(t[1]);
    }
    let and = rel("Gand")?;
    let or = rel("Gor")?;
    let roots = rel("r")?;
    let mut gates = Vec::with_capacity(n);
    for (x, kids) in children.into_iter().enumerate() {
        let is_and = and.iter().any(|t| t[0] == x);
        let is_or = or.iter().any(|t| t[0] == x);
        let kind = match (is_and, is_or) {
            (true, true) => return Err(Error::structural(x, "element is both an AND and an OR gate")),
            (true, false) => GateKind::And,
            (false, true) => GateKind::Or,
            (false, false) if kids.is_empty() => GateKind::Leaf(b.holds("B", &[x])?),
            (false, false) => return Err(Error::structural(x, "leaf with children")),
        };
        gates.push(Gate { kind, children: kids });
    }
    match roots.as_slice() {
        [r] => Circuit::new(gates, r[0]),
        [] => Err(Error::structural(0, "no root")),
        [_, second, ..] => Err(Error::structural(second[0], "more than one root")),
    }
}

pub fn circuit_to_structure(c: &Circuit) -> Result<Structure> {
    let mut b = Structure::empty(circuit_vocabulary(), c.len())?;
    for (id, g) in c.gates().iter().enumerate() {
        for &child in &g.children {
            b.insert("E", &[id, child])?;
        }
        match g.kind {
            GateKind::And => b.insert("Gand", &[id])?,
            GateKind::Or => b.insert("Gor", &[id])?,
            GateKind::Leaf(true) => b.insert("B", &[id])?,
            GateKind::Leaf(false) => {}
        }
    }
    b.insert("r", &[c.root()])?;
    Ok(b)
}
