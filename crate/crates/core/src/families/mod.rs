//! Function families hidden in the oracle, their tables, and the reversible
//! oracle permutations built from them.
//!
//! For the Deutsch–Jozsa and Simon families the label of a function *is*
//! its table: the outputs for increasing arguments, concatenated, each
//! written with the family's output width.

mod oracle;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};

pub use oracle::OracleUnitary;

pub const REG_B: &str = "B";
pub const REG_A: &str = "A";
pub const REG_V: &str = "V";
pub const REG_A_PRIME: &str = "A'";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Grover,
    DeutschJozsa,
    Simon,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Grover => "grover",
            FamilyKind::DeutschJozsa => "deutsch_jozsa",
            FamilyKind::Simon => "simon",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grover" => Ok(FamilyKind::Grover),
            "dj" | "deutsch_jozsa" | "deutsch-jozsa" => Ok(FamilyKind::DeutschJozsa),
            "simon" => Ok(FamilyKind::Simon),
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

/// Per-table metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMeta {
    /// Grover: the marked argument.
    Marked(BitString),
    Constant,
    Balanced,
    /// Simon: the hidden period `h`.
    Period(BitString),
}

/// One member `f_b` of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    label: BitString,
    values: Vec<u64>,
    output_width: usize,
    meta: TableMeta,
}

impl FunctionTable {
    pub fn label(&self) -> BitString {
        self.label
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn output_width(&self) -> usize {
        self.output_width
    }

    pub fn meta(&self) -> TableMeta {
        self.meta
    }

    pub fn domain_bits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn eval(&self, a: &BitString) -> BitString {
        BitString::new(self.values[a.value() as usize], self.output_width)
    }

    /// Simon period, if any.
    pub fn period(&self) -> Option<BitString> {
        match self.meta {
            TableMeta::Period(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

/// A complete, label-ordered family of functions `{0,1}^n → {0,1}^w`.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    kind: FamilyKind,
    n: usize,
    tables: Vec<FunctionTable>,
    index: HashMap<BitString, usize>,
}

impl FunctionFamily {
    /// Enumerates every member of `kind` over `n`-bit arguments.
    pub fn build(kind: FamilyKind, n: usize) -> Result<Self> {
        let unsupported = || Error::UnsupportedFamily { kind: kind.to_string(), n };
        let tables = match kind {
            FamilyKind::Grover => {
                if !(1..=10).contains(&n) {
                    return Err(unsupported());
                }
                grover_tables(n)
            }
            FamilyKind::DeutschJozsa => {
                if !(2..=4).contains(&n) {
                    return Err(unsupported());
                }
                dj_tables(n)
            }
            FamilyKind::Simon => {
                if !(2..=4).contains(&n) {
                    return Err(unsupported());
                }
                simon_tables(n)
            }
        };
        Ok(Self::assemble(kind, n, tables))
    }

    fn assemble(kind: FamilyKind, n: usize, mut tables: Vec<FunctionTable>) -> Self {
        tables.sort_by_key(|t| t.label);
        let index = tables.iter().enumerate().map(|(i, t)| (t.label, i)).collect();
        FunctionFamily { kind, n, tables, index }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn labels(&self) -> impl Iterator<Item = BitString> + '_ {
        self.tables.iter().map(|t| t.label)
    }

    pub fn output_width(&self) -> usize {
        output_width(self.kind, self.n)
    }

    /// Qubits needed to hold a label.
    pub fn label_width(&self) -> usize {
        label_width(self.kind, self.n)
    }

    pub fn contains(&self, label: &BitString) -> bool {
        self.index.contains_key(label)
    }

    pub fn position(&self, label: &BitString) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn get(&self, label: &BitString) -> Result<&FunctionTable> {
        self.index.get(label).map(|&i| &self.tables[i]).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The classical black box: `f_b(a)`.
    pub fn query(&self, b: &BitString, a: &BitString) -> Result<BitString> {
        let t = self.get(b)?;
        if a.width() != self.n {
            return Err(Error::InvalidArgument(a.to_string()));
        }
        Ok(t.eval(a))
    }

    /// Oracle output for any label the B register can hold, member or not:
    /// the Kronecker delta for Grover, table readout otherwise.
    pub fn readout(&self, label: u64, a: u64) -> u64 {
        match self.kind {
            FamilyKind::Grover => (label == a) as u64,
            FamilyKind::DeutschJozsa | FamilyKind::Simon => {
                let w = self.output_width();
                let entries = 1u64 << self.n;
                let shift = (entries - 1 - a) as usize * w;
                (label >> shift) & ((1u64 << w) - 1)
            }
        }
    }

    /// Labels in the order used for phase symbols φ₀, φ₁, …: increasing for
    /// Grover; for the table families each label below its complement is
    /// followed immediately by that complement.
    pub fn phase_order(&self) -> Vec<BitString> {
        match self.kind {
            FamilyKind::Grover => self.labels().collect(),
            _ => {
                let mut out = Vec::with_capacity(self.len());
                for l in self.labels() {
                    let c = l.complement();
                    if l < c {
                        out.push(l);
                        if self.contains(&c) {
                            out.push(c);
                        }
                    } else if !self.contains(&c) {
                        out.push(l);
                    }
                }
                out
            }
        }
    }

    /// Index of the phase symbol carried by `label`.
    pub fn phase_index(&self, label: &BitString) -> Option<usize> {
        self.phase_order().iter().position(|l| l == label)
    }

    /// Labels whose tables agree with `rows`.
    pub fn consistent_with(&self, rows: &[(BitString, BitString)]) -> Vec<BitString> {
        self.tables.iter().filter(|t| rows.iter().all(|(a, v)| t.eval(a) == *v)).map(|t| t.label).collect()
    }
}

pub fn output_width(kind: FamilyKind, n: usize) -> usize {
    match kind {
        FamilyKind::Grover | FamilyKind::DeutschJozsa => 1,
        FamilyKind::Simon => n - 1,
    }
}

pub fn label_width(kind: FamilyKind, n: usize) -> usize {
    match kind {
        FamilyKind::Grover => n,
        FamilyKind::DeutschJozsa | FamilyKind::Simon => (1usize << n) * output_width(kind, n),
    }
}

fn table_label(values: &[u64], w: usize) -> BitString {
    let v = values.iter().fold(0u64, |acc, &x| (acc << w) | x);
    BitString::new(v, values.len() * w)
}

fn grover_tables(n: usize) -> Vec<FunctionTable> {
    BitString::all(n)
        .map(|b| FunctionTable {
            label: b,
            values: (0..1u64 << n).map(|a| (a == b.value()) as u64).collect(),
            output_width: 1,
            meta: TableMeta::Marked(b),
        })
        .collect()
}

fn dj_tables(n: usize) -> Vec<FunctionTable> {
    let entries = 1usize << n;
    let mut out = Vec::new();
    for ones in 0u64..(1u64 << entries) {
        let k = ones.count_ones() as usize;
        if k != 0 && k != entries && k != entries / 2 {
            continue;
        }
        let values: Vec<u64> = (0..entries).map(|a| (ones >> (entries - 1 - a)) & 1).collect();
        let meta = if k == entries / 2 { TableMeta::Balanced } else { TableMeta::Constant };
        out.push(FunctionTable { label: table_label(&values, 1), values, output_width: 1, meta });
    }
    out
}

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn simon_tables(n: usize) -> Vec<FunctionTable> {
    let w = n - 1;
    let entries = 1u64 << n;
    let outputs: Vec<u64> = (0..1u64 << w).collect();
    let assignments = permutations(&outputs);
    let mut out = Vec::new();
    for h in 1..entries {
        // coset representatives in increasing order
        let reps: Vec<u64> = (0..entries).filter(|&a| a < (a ^ h)).collect();
        for assign in &assignments {
            let mut values = vec![0u64; entries as usize];
            for (&r, &v) in reps.iter().zip(assign) {
                values[r as usize] = v;
                values[(r ^ h) as usize] = v;
            }
            out.push(FunctionTable {
                label: table_label(&values, w),
                values,
                output_width: w,
                meta: TableMeta::Period(BitString::new(h, n)),
            });
        }
    }
    out
}
