//! The oracle step written as a superposition of classical computation
//! histories, each a sharp basis state carried through the permutation.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FunctionFamily, OracleUnitary, REG_A, REG_B};
use crate::quantum::{RegisterLayout, StateVector, C64};
use crate::sharing::{QuerySearch, Share, SharingPartition, DEFAULT_SEARCH_BUDGET};

const ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct History {
    #[serde(skip)]
    pub amplitude: C64,
    /// Amplitude with the label's phase factored out.
    #[serde(skip)]
    pub weight: C64,
    /// Index of the phase symbol `φ_k` attached to the history's label.
    pub phase: Option<usize>,
    pub pre_index: usize,
    pub post_index: usize,
    pub pre: Vec<BitString>,
    pub post: Vec<BitString>,
    pub b: Option<BitString>,
    pub a: BitString,
    /// Indices of the shares this history is consistent with.
    pub shares: Vec<usize>,
    pub rendered: String,
}

impl History {
    fn kets(layout: &RegisterLayout, values: &[BitString]) -> String {
        layout.registers().iter().zip(values).map(|(r, v)| format!("|{v}⟩_{}", r.name)).collect()
    }

    /// Symbolic row, for example `-e^{iφ1}|01⟩_B|01⟩_A|1⟩_V → -e^{iφ1}|01⟩_B|01⟩_A|0⟩_V`.
    /// Normalization is left out, as is the sign when it is `+`.
    pub fn render(&self, layout: &RegisterLayout) -> String {
        let coeff = render_coefficient(self.weight, self.phase);
        format!("{coeff}{} → {coeff}{}", Self::kets(layout, &self.pre), Self::kets(layout, &self.post))
    }
}

fn render_coefficient(weight: C64, phase: Option<usize>) -> String {
    let sign = if weight.im.abs() <= ZERO_TOL * weight.norm().max(1.0) {
        if weight.re < 0.0 { "-" } else { "" }.to_string()
    } else {
        format!("({:.6}{:+.6}i)", weight.re, weight.im)
    };
    match phase {
        Some(k) => format!("{sign}e^{{iφ{k}}}"),
        None if sign == "-" => "-".into(),
        None => sign,
    }
}

/// One history per nonzero amplitude of `state`, in basis order.
pub fn decompose(state: &StateVector, oracle: &OracleUnitary) -> Result<Vec<History>> {
    if state.layout() != oracle.layout() {
        return Err(Error::InvalidLayout("state and oracle layouts differ".into()));
    }
    let perm = oracle.permutation();
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotPermutation);
        }
    }
    let layout = state.layout();
    let has_b = layout.contains(REG_B);
    let mut out = Vec::new();
    for (i, &amp) in state.amplitudes().iter().enumerate() {
        if amp.norm() <= ZERO_TOL {
            continue;
        }
        let values = |idx: usize| -> Result<Vec<BitString>> {
            layout.registers().iter().map(|r| layout.extract(idx, &r.name)).collect()
        };
        let j = perm[i];
        let mut h = History {
            amplitude: amp,
            weight: amp,
            phase: None,
            pre_index: i,
            post_index: j,
            pre: values(i)?,
            post: values(j)?,
            b: if has_b { Some(layout.extract(i, REG_B)?) } else { None },
            a: layout.extract(i, REG_A)?,
            shares: Vec::new(),
            rendered: String::new(),
        };
        h.rendered = h.render(layout);
        out.push(h);
    }
    Ok(out)
}

/// Splits each amplitude into `e^{iφ_k}` times a weight, `k` being the
/// label's position in the family's phase order. Histories are then sorted
/// by phase symbol, keeping basis order within one symbol.
pub fn attach_phases(histories: &mut [History], family: &FunctionFamily, phases: &[f64], layout: &RegisterLayout) {
    for h in histories.iter_mut() {
        if let Some(k) = h.b.and_then(|b| family.phase_index(&b)) {
            h.phase = Some(k);
            h.weight = h.amplitude * C64::from_polar(1.0, -phases.get(k).copied().unwrap_or(0.0));
            h.rendered = h.render(layout);
        }
    }
    histories.sort_by_key(|h| (h.phase, h.pre_index));
}

/// `Σ amplitude · |post⟩`. With `phases`, each history's weight is
/// multiplied by the substituted `e^{iφ_k}` instead.
pub fn recompose(histories: &[History], layout: &RegisterLayout, phases: Option<&[f64]>) -> Result<StateVector> {
    let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
    for h in histories {
        if h.post_index >= amps.len() {
            return Err(Error::DimensionMismatch { expected: amps.len(), got: h.post_index + 1 });
        }
        let c = match (phases, h.phase) {
            (Some(ph), Some(k)) => h.weight * C64::from_polar(1.0, ph.get(k).copied().unwrap_or(0.0)),
            _ => h.amplitude,
        };
        amps[h.post_index] += c;
    }
    StateVector::new(layout.clone(), amps)
}

/// Both sides of every partition, each usable as Alice's advanced knowledge.
pub fn alice_shares(partitions: &[SharingPartition]) -> Vec<Share> {
    let mut out: Vec<Share> = Vec::new();
    for p in partitions {
        for s in [&p.alice, &p.bob] {
            if !out.iter().any(|o| o.induced == s.induced) {
                out.push(s.clone());
            }
        }
    }
    out
}

/// Marks each history with the shares whose optimal classical protocol,
/// run on the history's label, would query the history's `a`.
pub fn tag_histories(histories: &mut [History], family: &FunctionFamily, shares: &[Share]) -> Result<()> {
    let mut search = QuerySearch::new(family, DEFAULT_SEARCH_BUDGET);
    let mut cache: HashMap<(usize, BitString), BTreeSet<BitString>> = Default::default();
    for h in histories.iter_mut() {
        h.shares.clear();
        let Some(b) = h.b else { continue };
        for (k, s) in shares.iter().enumerate() {
            if !s.contains(&b) {
                continue;
            }
            let queries = match cache.entry((k, b)) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(search.resolving_queries(&s.induced, &b)?),
            };
            if queries.contains(&h.a) {
                h.shares.push(k);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
