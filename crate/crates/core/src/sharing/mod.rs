//! Ways of splitting the determination of Bob's choice between Bob and
//! Alice, and what Alice's half buys her classically.

mod queries;

pub use queries::{count_queries, QuerySearch, DEFAULT_SEARCH_BUDGET};

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, TableMeta, REG_B};
use crate::quantum::{DensityOperator, ParityObservable, RegisterLayout, StateVector, C64};

/// One constraint on `b` known to the holder of a share.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// `mask · b = outcome`.
    Parity { mask: BitString, outcome: bool },
    /// `f_b(a) = value`.
    Row { a: BitString, value: BitString },
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::Parity { mask, outcome } => write!(f, "{mask}·b={}", *outcome as u8),
            Constraint::Row { a, value } => write!(f, "{a}→{value}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Share {
    pub constraints: Vec<Constraint>,
    /// Family labels consistent with every constraint.
    pub induced: Vec<BitString>,
    /// `log₂(|family| / |induced|)` under a uniform prior.
    pub entropy_reduction: f64,
}

impl Share {
    fn from_constraints(family: &FunctionFamily, constraints: Vec<Constraint>) -> Result<Self> {
        let induced: Vec<BitString> = family
            .tables()
            .iter()
            .filter(|t| {
                constraints.iter().all(|c| match c {
                    Constraint::Parity { mask, outcome } => mask.dot(&t.label()) == *outcome,
                    Constraint::Row { a, value } => t.eval(a) == *value,
                })
            })
            .map(|t| t.label())
            .collect();
        if induced.is_empty() {
            return Err(Error::InvalidShare("no family member satisfies the constraints".into()));
        }
        let entropy_reduction = (family.len() as f64 / induced.len() as f64).log2();
        Ok(Share { constraints, induced, entropy_reduction })
    }

    /// Share made of the outcomes of the parity observables `masks` on `b`.
    pub fn parities(family: &FunctionFamily, b: &BitString, masks: &[BitString]) -> Result<Self> {
        let lw = family.label_width();
        let mut cs = Vec::new();
        for m in masks {
            if m.width() != lw || m.is_zero() {
                return Err(Error::InvalidShare(format!("bad parity mask {m}")));
            }
            cs.push(Constraint::Parity { mask: *m, outcome: m.dot(b) });
        }
        Share::from_constraints(family, cs)
    }

    /// Share made of the rows `a ↦ f_b(a)` of `b`'s table.
    pub fn rows(family: &FunctionFamily, b: &BitString, rows: &[BitString]) -> Result<Self> {
        let table = family.get(b)?;
        let mut cs = Vec::new();
        for a in rows {
            if a.width() != family.n() {
                return Err(Error::InvalidShare(format!("bad row {a}")));
            }
            cs.push(Constraint::Row { a: *a, value: table.eval(a) });
        }
        Share::from_constraints(family, cs)
    }

    pub fn contains(&self, b: &BitString) -> bool {
        self.induced.binary_search(b).is_ok()
    }

    pub fn row_values(&self) -> Vec<(BitString, BitString)> {
        self.constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::Row { a, value } => Some((*a, *value)),
                Constraint::Parity { .. } => None,
            })
            .collect()
    }

    pub fn observables(&self) -> Vec<(ParityObservable, bool)> {
        self.constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::Parity { mask, outcome } => {
                    Some((ParityObservable::new(REG_B, *mask).expect("nonzero mask"), *outcome))
                }
                Constraint::Row { .. } => None,
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let cs: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        format!("{{{}}}", cs.join(", "))
    }
}

/// Half tables Alice may hold: constant values for Deutsch–Jozsa, pairwise
/// distinct values for Simon. Grover shares are parity sets, so any rows pass.
pub fn goodness_predicate(kind: FamilyKind, rows: &[(BitString, BitString)]) -> bool {
    match kind {
        FamilyKind::Grover => true,
        FamilyKind::DeutschJozsa => rows.windows(2).all(|w| w[0].1 == w[1].1),
        FamilyKind::Simon => {
            let mut vals: Vec<u64> = rows.iter().map(|r| r.1.value()).collect();
            vals.sort_unstable();
            vals.windows(2).all(|w| w[0] != w[1])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharingPartition {
    pub b: BitString,
    pub bob: Share,
    pub alice: Share,
    /// Reduction Bob's share adds once Alice's is known, in bits.
    pub delta_e_bob: f64,
    /// Reduction Alice's share adds once Bob's is known, in bits.
    pub delta_e_alice: f64,
}

impl SharingPartition {
    pub fn new(b: BitString, bob: Share, alice: Share) -> Self {
        let both = intersection(&bob.induced, &alice.induced).len().max(1) as f64;
        let delta_e_bob = (alice.induced.len() as f64 / both).log2();
        let delta_e_alice = (bob.induced.len() as f64 / both).log2();
        SharingPartition { b, bob, alice, delta_e_bob, delta_e_alice }
    }

    pub fn intersection(&self) -> Vec<BitString> {
        intersection(&self.bob.induced, &self.alice.induced)
    }
}

fn intersection(x: &[BitString], y: &[BitString]) -> Vec<BitString> {
    x.iter().filter(|b| y.binary_search(b).is_ok()).copied().collect()
}

/// A characteristic of `b` that both shares pin down on their own, if any.
/// Grover: a parity of `b`. Deutsch–Jozsa: constant vs balanced. Simon: the
/// period.
pub fn over_determination(family: &FunctionFamily, bob: &Share, alice: &Share) -> Option<String> {
    let pinned = |share: &Share, key: &dyn Fn(&BitString) -> u64| -> Option<u64> {
        let first = key(&share.induced[0]);
        share.induced.iter().all(|b| key(b) == first).then_some(first)
    };
    match family.kind() {
        FamilyKind::Grover => {
            let lw = family.label_width();
            (1..1u64 << lw).find_map(|m| {
                let mask = BitString::new(m, lw);
                let key = |b: &BitString| mask.dot(b) as u64;
                match (pinned(bob, &key), pinned(alice, &key)) {
                    (Some(x), Some(_)) => Some(format!("parity {mask}·b = {x}")),
                    _ => None,
                }
            })
        }
        FamilyKind::DeutschJozsa | FamilyKind::Simon => {
            let key = |b: &BitString| match family.get(b).map(|t| t.meta()) {
                Ok(TableMeta::Constant) => u64::MAX,
                Ok(TableMeta::Period(h)) => h.value(),
                _ => u64::MAX - 1,
            };
            match (pinned(bob, &key), pinned(alice, &key)) {
                (Some(x), Some(_)) => Some(match family.kind() {
                    FamilyKind::Simon => format!("period {}", BitString::new(x, family.n())),
                    _ if x == u64::MAX => "constant".into(),
                    _ => "balanced".into(),
                }),
                _ => None,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharingReport {
    pub intersection: Vec<BitString>,
    /// Condition (i): the shares meet exactly in `{b}` and no characteristic
    /// of `b` is fixed by both.
    pub tight: bool,
    pub over_determined: Option<String>,
    /// Condition (ii).
    pub equal_reduction: bool,
    pub delta_e_bob: f64,
    pub delta_e_alice: f64,
    /// Condition (iii): number of valid partitions the superposition runs over.
    pub support: usize,
}

impl SharingReport {
    pub fn passed(&self) -> bool {
        self.tight && self.over_determined.is_none() && self.equal_reduction
    }
}

fn check(family: &FunctionFamily, p: &SharingPartition) -> (bool, Option<String>, bool) {
    let tight = p.intersection() == vec![p.b];
    let over = over_determination(family, &p.bob, &p.alice);
    let equal = (p.delta_e_bob - p.delta_e_alice).abs() < 1e-12;
    (tight, over, equal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharingOptions {
    /// For odd Grover `n`, emit ⌊n/2⌋ / ⌈n/2⌉ splits instead of nothing.
    pub uneven: bool,
    /// Maximum number of candidate shares examined.
    pub budget: usize,
}

impl Default for SharingOptions {
    fn default() -> Self {
        SharingOptions { uneven: false, budget: 100_000 }
    }
}

/// All partitions of the determination of `b` that satisfy the sharing rule.
pub fn enumerate_sharings(
    family: &FunctionFamily,
    b: &BitString,
    options: &SharingOptions,
) -> Result<Vec<SharingPartition>> {
    family.get(b)?;
    let mut out = Vec::new();
    match family.kind() {
        FamilyKind::Grover => {
            let n = family.n();
            if n % 2 == 1 && !options.uneven {
                return Ok(out);
            }
            let (k1, k2) = (n / 2, n - n / 2);
            let first = subspaces(n, k1, options.budget)?;
            let second = if k1 == k2 { first.clone() } else { subspaces(n, k2, options.budget)? };
            for (i, s) in first.iter().enumerate() {
                for (j, t) in second.iter().enumerate() {
                    if (k1 == k2 && j <= i) || rank(n, s.iter().chain(t)) != n {
                        continue;
                    }
                    let p = SharingPartition::new(*b, Share::parities(family, b, s)?, Share::parities(family, b, t)?);
                    let (tight, over, equal) = check(family, &p);
                    if tight && over.is_none() && (equal || k1 != k2) {
                        out.push(p);
                    }
                }
            }
        }
        FamilyKind::DeutschJozsa | FamilyKind::Simon => {
            let rows = 1usize << family.n();
            let half = rows / 2;
            let table = family.get(b)?;
            let mut examined = 0usize;
            for combo in combinations(rows - 1, half - 1) {
                examined += 1;
                if examined > options.budget {
                    return Err(Error::SearchBudget(options.budget));
                }
                let mut first = vec![0usize];
                first.extend(combo.iter().map(|c| c + 1));
                let second: Vec<usize> = (0..rows).filter(|r| !first.contains(r)).collect();
                let as_rows = |set: &[usize]| -> Vec<(BitString, BitString)> {
                    set.iter()
                        .map(|&a| {
                            let a = BitString::new(a as u64, family.n());
                            (a, table.eval(&a))
                        })
                        .collect()
                };
                if !goodness_predicate(family.kind(), &as_rows(&first))
                    || !goodness_predicate(family.kind(), &as_rows(&second))
                {
                    continue;
                }
                let to_bits = |set: &[usize]| -> Vec<BitString> {
                    set.iter().map(|&a| BitString::new(a as u64, family.n())).collect()
                };
                let p = SharingPartition::new(
                    *b,
                    Share::rows(family, b, &to_bits(&first))?,
                    Share::rows(family, b, &to_bits(&second))?,
                );
                let (tight, over, equal) = check(family, &p);
                if tight && over.is_none() && equal {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Checks the three sharing conditions for a proposed partition.
pub fn verify_sharing_rule(family: &FunctionFamily, partition: &SharingPartition) -> Result<SharingReport> {
    let (tight, over_determined, equal_reduction) = check(family, partition);
    let support = enumerate_sharings(family, &partition.b, &SharingOptions::default())?.len();
    Ok(SharingReport {
        intersection: partition.intersection(),
        tight: tight && over_determined.is_none(),
        over_determined,
        equal_reduction,
        delta_e_bob: partition.delta_e_bob,
        delta_e_alice: partition.delta_e_alice,
        support,
    })
}

/// Bob's register after Alice's projection is advanced to the start: uniform
/// over the labels her share leaves open.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvancedKnowledgeState {
    pub support: Vec<BitString>,
    pub initial_entropy: f64,
    pub entropy: f64,
}

impl AdvancedKnowledgeState {
    fn layout(&self) -> Result<RegisterLayout> {
        let layout = RegisterLayout::new(&[(REG_B, self.support[0].width())])?;
        layout.check_dense()?;
        Ok(layout)
    }

    /// `|support|^{-1/2} Σ e^{iφ_k}|b_k⟩`; missing phases count as zero.
    pub fn ket(&self, phases: &[f64]) -> Result<StateVector> {
        let layout = self.layout()?;
        let w = (self.support.len() as f64).sqrt().recip();
        let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
        for (k, b) in self.support.iter().enumerate() {
            amps[b.value() as usize] = C64::from_polar(w, phases.get(k).copied().unwrap_or(0.0));
        }
        StateVector::new(layout, amps)
    }

    /// Phase-averaged density operator.
    pub fn density(&self) -> Result<DensityOperator> {
        let layout = self.layout()?;
        let kets =
            self.support.iter().map(|b| StateVector::basis(layout.clone(), &[*b])).collect::<Result<Vec<_>>>()?;
        DensityOperator::uniform_mixture(&kets)
    }
}

pub fn advanced_knowledge_state(
    family: &FunctionFamily,
    b: &BitString,
    alice: &Share,
) -> Result<AdvancedKnowledgeState> {
    if !alice.contains(b) {
        return Err(Error::InvalidShare(format!("{b} is excluded by {}", alice.describe())));
    }
    Ok(AdvancedKnowledgeState {
        support: alice.induced.clone(),
        initial_entropy: (family.len() as f64).log2(),
        entropy: (alice.induced.len() as f64).log2(),
    })
}

/// N_a for the candidates Alice's share leaves open.
pub fn count_advanced_queries(family: &FunctionFamily, alice: &Share) -> Result<usize> {
    count_queries(family, &alice.induced)
}

/// Largest N_a over every label and every valid partition.
pub fn worst_case_advanced_queries(family: &FunctionFamily, options: &SharingOptions) -> Result<usize> {
    let mut search = QuerySearch::new(family, DEFAULT_SEARCH_BUDGET);
    let mut worst = 0;
    for b in family.labels() {
        for p in enumerate_sharings(family, &b, options)? {
            worst = worst.max(search.depth(&p.alice.induced)?);
        }
    }
    Ok(worst)
}

fn rank<'a>(n: usize, vs: impl Iterator<Item = &'a BitString>) -> usize {
    let rows: Vec<BitString> = vs.copied().collect();
    crate::algorithms::Gf2System::with_rows(n, &rows).rank()
}

/// Every `k`-dimensional subspace of GF(2)^n as a reduced echelon basis.
/// Rows are ordered so single-bit observables come first, leftmost bit first.
fn subspaces(n: usize, k: usize, budget: usize) -> Result<Vec<Vec<BitString>>> {
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // pivot p is bit position (n-1-p) counted from the right
        let pivot_bits: Vec<usize> = pivots.iter().map(|p| n - 1 - p).collect();
        let free: Vec<Vec<usize>> =
            pivot_bits.iter().map(|&pb| (0..pb).filter(|q| !pivot_bits.contains(q)).collect()).collect();
        let total: usize = free.iter().map(|f| f.len()).sum();
        for fill in 0u64..1 << total {
            let mut shift = 0;
            let mut basis = Vec::with_capacity(k);
            for (i, &pb) in pivot_bits.iter().enumerate() {
                let mut v = 1u64 << pb;
                for (j, &q) in free[i].iter().enumerate() {
                    if (fill >> (shift + j)) & 1 == 1 {
                        v |= 1 << q;
                    }
                }
                shift += free[i].len();
                basis.push(BitString::new(v, n));
            }
            out.push(basis);
            if out.len() > budget {
                return Err(Error::SearchBudget(budget));
            }
        }
    }
    let key = |s: &Vec<BitString>| -> Vec<(u32, u64)> {
        let mut ks: Vec<(u32, u64)> = s.iter().map(|v| (v.value().count_ones(), v.value().reverse_bits())).collect();
        ks.sort_unstable();
        ks
    };
    out.sort_by_key(key);
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
