//! Vocabularies, finite structures over `{0, …, n−1}` and their binary encodings.
//!
//! Built-in symbols (`LEQ`, `LT`, `SUCC`, `BIT`, `MIN`, `MAX`) are never stored;
//! their interpretation is computed from the universe size.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Elements of a universe `{0, …, n−1}`.
pub type Element = usize;

/// Built-in numerical predicates and constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Leq,
    Lt,
    Succ,
    Bit,
    Min,
    Max,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::Leq,
        Builtin::Lt,
        Builtin::Succ,
        Builtin::Bit,
        Builtin::Min,
        Builtin::Max,
    ];

    pub fn arity(self) -> usize {
        match self {
            Builtin::Leq | Builtin::Lt | Builtin::Succ | Builtin::Bit => 2,
            Builtin::Min | Builtin::Max => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Leq => "LEQ",
            Builtin::Lt => "LT",
            Builtin::Succ => "SUCC",
            Builtin::Bit => "BIT",
            Builtin::Min => "MIN",
            Builtin::Max => "MAX",
        }
    }

    pub fn is_relation(self) -> bool {
        self.arity() == 2
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }
}

/// Value of a built-in: a truth value for relations, an element for constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinValue {
    Bool(bool),
    Element(Element),
}

/// A non-built-in vocabulary symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Relation { name: String, arity: usize },
    Constant { name: String },
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::Relation { name, .. } | Symbol::Constant { name } => name,
        }
    }
}

/// Words that can never name a vocabulary symbol.
pub(crate) const RESERVED: [&str; 6] = ["forall", "exists", "true", "false", "min", "max"];

/// A finite relational vocabulary with constants and a set of built-ins.
///
/// Declaration order is significant: it fixes the block order of the
/// binary encoding.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
    builtins: BTreeSet<Builtin>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Self> {
        self.add_relation(name, arity)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn with_builtins(mut self, builtins: impl IntoIterator<Item = Builtin>) -> Self {
        self.builtins.extend(builtins);
        self
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::Arity {
                symbol: name.to_string(),
                expected: 1,
                found: 0,
            });
        }
        self.check_fresh(name)?;
        self.symbols.push(Symbol::Relation {
            name: name.to_string(),
            arity,
        });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<()> {
        self.check_fresh(name)?;
        self.symbols.push(Symbol::Constant {
            name: name.to_string(),
        });
        Ok(())
    }

    pub fn add_builtin(&mut self, builtin: Builtin) {
        self.builtins.insert(builtin);
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        let reserved = Builtin::ALL.iter().any(|b| b.name().eq_ignore_ascii_case(name))
            || RESERVED.iter().any(|r| r.eq_ignore_ascii_case(name));
        if reserved || self.symbols.iter().any(|s| s.name() == name) {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn builtins(&self) -> &BTreeSet<Builtin> {
        &self.builtins
    }

    pub fn has_builtin(&self, b: Builtin) -> bool {
        self.builtins.contains(&b)
    }

    /// Relation symbols in declaration order as `(name, arity)`.
    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().filter_map(|s| match s {
            Symbol::Relation { name, arity } => Some((name.as_str(), *arity)),
            Symbol::Constant { .. } => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> + '_ {
        self.symbols.iter().filter_map(|s| match s {
            Symbol::Constant { name } => Some(name.as_str()),
            Symbol::Relation { .. } => None,
        })
    }

    /// Index among relation symbols and arity.
    pub fn relation(&self, name: &str) -> Option<(usize, usize)> {
        self.relations()
            .enumerate()
            .find(|(_, (n, _))| *n == name)
            .map(|(i, (_, a))| (i, a))
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants().position(|c| c == name)
    }

    pub fn encoding_len(&self, n: usize) -> usize {
        self.relations().map(|(_, a)| n.pow(a as u32)).sum::<usize>()
            + self.constants().count() * constant_width(n)
    }
}

/// `⌈log₂ n⌉`, the bit width of an encoded constant.
pub fn constant_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Lexicographic rank of `tuple` among all tuples over `{0, …, n−1}` of its length.
pub fn tuple_rank(n: usize, tuple: &[Element]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * n + e)
}

/// Inverse of [`tuple_rank`].
pub fn tuple_unrank(n: usize, arity: usize, mut rank: usize) -> Vec<Element> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = rank % n;
        rank /= n;
    }
    out
}

/// A finite structure with universe `{0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Vocabulary,
    size: usize,
    /// One truth table per relation symbol, indexed by [`tuple_rank`].
    relations: Vec<Vec<bool>>,
    constants: Vec<Element>,
}

impl Structure {
    /// A structure with all relations empty and all constants at 0.
    pub fn empty(vocab: Vocabulary, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("universe must be non-empty"));
        }
        let relations = vocab
            .relations()
            .map(|(_, a)| vec![false; size.pow(a as u32)])
            .collect();
        let constants = vec![0; vocab.constants().count()];
        Ok(Structure {
            vocab,
            size,
            relations,
            constants,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, relation: &str, tuple: &[Element]) -> Result<()> {
        let (idx, arity) = self
            .vocab
            .relation(relation)
            .ok_or_else(|| Error::UnknownSymbol(relation.to_string()))?;
        if tuple.len() != arity {
            return Err(Error::Arity {
                symbol: relation.to_string(),
                expected: arity,
                found: tuple.len(),
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::domain(format!(
                "element {e} outside universe of size {}",
                self.size
            )));
        }
        self.relations[idx][tuple_rank(self.size, tuple)] = true;
        Ok(())
    }

    pub fn with_tuples(mut self, relation: &str, tuples: &[&[Element]]) -> Result<Self> {
        for t in tuples {
            self.insert(relation, t)?;
        }
        Ok(self)
    }

    pub fn set_constant(&mut self, name: &str, value: Element) -> Result<()> {
        let idx = self
            .vocab
            .constant(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if value >= self.size {
            return Err(Error::domain(format!(
                "constant {name} = {value} outside universe of size {}",
                self.size
            )));
        }
        self.constants[idx] = value;
        Ok(())
    }

    pub fn with_constant(mut self, name: &str, value: Element) -> Result<Self> {
        self.set_constant(name, value)?;
        Ok(self)
    }

    /// Truth table of the `idx`-th relation symbol, indexed by [`tuple_rank`].
    pub fn relation_table(&self, idx: usize) -> &[bool] {
        &self.relations[idx]
    }

    pub fn holds(&self, relation: &str, tuple: &[Element]) -> Result<bool> {
        let (idx, arity) = self
            .vocab
            .relation(relation)
            .ok_or_else(|| Error::UnknownSymbol(relation.to_string()))?;
        if tuple.len() != arity || tuple.iter().any(|&e| e >= self.size) {
            return Ok(false);
        }
        Ok(self.relations[idx][tuple_rank(self.size, tuple)])
    }

    /// Tuples of a relation in lexicographic order.
    pub fn tuples(&self, relation: &str) -> Result<Vec<Vec<Element>>> {
        let (idx, arity) = self
            .vocab
            .relation(relation)
            .ok_or_else(|| Error::UnknownSymbol(relation.to_string()))?;
        Ok(self.relations[idx]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| tuple_unrank(self.size, arity, r))
            .collect())
    }

    pub fn constant_value(&self, name: &str) -> Result<Element> {
        self.vocab
            .constant(name)
            .map(|i| self.constants[i])
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub(crate) fn constant_by_index(&self, idx: usize) -> Element {
        self.constants[idx]
    }

    pub fn builtin_eval(&self, sym: Builtin, args: &[Element]) -> Result<BuiltinValue> {
        if !self.vocab.has_builtin(sym) {
            return Err(Error::UnknownSymbol(sym.name().to_string()));
        }
        if args.len() != sym.arity() {
            return Err(Error::Arity {
                symbol: sym.name().to_string(),
                expected: sym.arity(),
                found: args.len(),
            });
        }
        if let Some(&e) = args.iter().find(|&&e| e >= self.size) {
            return Err(Error::domain(format!(
                "element {e} outside universe of size {}",
                self.size
            )));
        }
        Ok(match sym {
            Builtin::Min => BuiltinValue::Element(0),
            Builtin::Max => BuiltinValue::Element(self.size - 1),
            _ => BuiltinValue::Bool(builtin_relation(sym, args[0], args[1])),
        })
    }

    /// Row-by-row binary encoding; built-ins are not encoded.
    pub fn encode(&self) -> BitString {
        let width = constant_width(self.size);
        let mut bits = Vec::with_capacity(self.vocab.encoding_len(self.size));
        let (mut r, mut c) = (0, 0);
        for sym in self.vocab.symbols() {
            match sym {
                Symbol::Relation { .. } => {
                    bits.extend_from_slice(&self.relations[r]);
                    r += 1;
                }
                Symbol::Constant { .. } => {
                    let v = self.constants[c];
                    bits.extend((0..width).rev().map(|i| (v >> i) & 1 == 1));
                    c += 1;
                }
            }
        }
        BitString(bits)
    }

    pub fn decode(bits: &BitString, vocab: &Vocabulary, n: usize) -> Result<Self> {
        let expected = vocab.encoding_len(n);
        if bits.len() != expected {
            return Err(Error::format(format!(
                "encoding has {} bits, expected {expected} for universe size {n}",
                bits.len()
            )));
        }
        let mut out = Structure::empty(vocab.clone(), n)?;
        let width = constant_width(n);
        let mut pos = 0;
        let (mut r, mut c) = (0, 0);
        for sym in vocab.symbols() {
            match sym {
                Symbol::Relation { arity, .. } => {
                    let len = n.pow(*arity as u32);
                    out.relations[r].copy_from_slice(&bits.0[pos..pos + len]);
                    pos += len;
                    r += 1;
                }
                Symbol::Constant { name } => {
                    let v = bits.0[pos..pos + width]
                        .iter()
                        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
                    if v >= n {
                        return Err(Error::domain(format!(
                            "constant {name} decodes to {v}, outside universe of size {n}"
                        )));
                    }
                    out.constants[c] = v;
                    pos += width;
                    c += 1;
                }
            }
        }
        Ok(out)
    }

    /// Adds `k` fresh elements that take part in no stored relation.
    pub fn extend_universe(&self, k: usize) -> Structure {
        let n = self.size;
        let m = n + k;
        let relations = self
            .vocab
            .relations()
            .zip(&self.relations)
            .map(|((_, arity), table)| {
                let mut grown = vec![false; m.pow(arity as u32)];
                for (rank, _) in table.iter().enumerate().filter(|(_, &b)| b) {
                    grown[tuple_rank(m, &tuple_unrank(n, arity, rank))] = true;
                }
                grown
            })
            .collect();
        Structure {
            vocab: self.vocab.clone(),
            size: m,
            relations,
            constants: self.constants.clone(),
        }
    }

    /// Renumbers elements: element `e` of `self` becomes `perm[e]`.
    pub fn permute(&self, perm: &[Element]) -> Result<Structure> {
        let n = self.size;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::domain("not a permutation of the universe"));
        }
        let relations = self
            .vocab
            .relations()
            .zip(&self.relations)
            .map(|((_, arity), table)| {
                let mut out = vec![false; table.len()];
                for (rank, _) in table.iter().enumerate().filter(|(_, &b)| b) {
                    let t: Vec<_> = tuple_unrank(n, arity, rank).into_iter().map(|e| perm[e]).collect();
                    out[tuple_rank(n, &t)] = true;
                }
                out
            })
            .collect();
        Ok(Structure {
            vocab: self.vocab.clone(),
            size: n,
            relations,
            constants: self.constants.iter().map(|&c| perm[c]).collect(),
        })
    }
}

pub(crate) fn builtin_relation(sym: Builtin, i: Element, j: Element) -> bool {
    match sym {
        Builtin::Leq => i <= j,
        Builtin::Lt => i < j,
        Builtin::Succ => i + 1 == j,
        Builtin::Bit => i < usize::BITS as usize && (j >> i) & 1 == 1,
        Builtin::Min | Builtin::Max => false,
    }
}

/// The string vocabulary `(≤, S)` extended by `extra` built-ins.
pub fn string_vocabulary(extra: impl IntoIterator<Item = Builtin>) -> Vocabulary {
    Vocabulary::new()
        .with_relation("S", 1)
        .expect("fresh vocabulary")
        .with_builtins(core::iter::once(Builtin::Leq).chain(extra))
}

/// The structure `A_w` of a non-empty bitstring: universe `|w|`, `S` = positions of 1-bits.
pub fn string_structure(w: &BitString) -> Result<Structure> {
    string_structure_with(w, [])
}

/// [`string_structure`] with additional built-ins in the vocabulary.
pub fn string_structure_with(
    w: &BitString,
    extra: impl IntoIterator<Item = Builtin>,
) -> Result<Structure> {
    if w.is_empty() {
        return Err(Error::domain("empty string has no structure"));
    }
    Structure::decode(w, &string_vocabulary(extra), w.len())
}

/// A sequence of bits written as ASCII `0`/`1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}
