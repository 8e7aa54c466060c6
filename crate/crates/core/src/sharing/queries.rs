//! Classical adaptive query trees over a candidate set of labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::FunctionFamily;

/// Exhaustive minimax search; candidate sets are memoized by table index.
pub struct QuerySearch<'a> {
    family: &'a FunctionFamily,
    memo: HashMap<Vec<u32>, usize>,
    budget: usize,
}

impl<'a> QuerySearch<'a> {
    pub fn new(family: &'a FunctionFamily, budget: usize) -> Self {
        QuerySearch { family, memo: HashMap::new(), budget }
    }

    fn indices(&self, labels: &[BitString]) -> Result<Vec<u32>> {
        let mut idx = labels
            .iter()
            .map(|b| self.family.position(b).map(|i| i as u32).ok_or_else(|| Error::UnknownLabel(b.to_string())))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    fn split(&self, cands: &[u32], a: usize) -> Vec<Vec<u32>> {
        let mut groups: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &c in cands {
            groups.entry(self.family.tables()[c as usize].values()[a]).or_default().push(c);
        }
        groups.into_values().collect()
    }

    fn depth_of(&mut self, cands: &[u32]) -> Result<usize> {
        if cands.len() <= 1 {
            return Ok(0);
        }
        if let Some(&d) = self.memo.get(cands) {
            return Ok(d);
        }
        if self.memo.len() >= self.budget {
            return Err(Error::SearchBudget(self.budget));
        }
        let mut best = usize::MAX;
        for a in 0..1usize << self.family.n() {
            let groups = self.split(cands, a);
            if groups.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for g in &groups {
                worst = worst.max(self.depth_of(g)?);
                if worst + 1 >= best {
                    break;
                }
            }
            best = best.min(worst + 1);
        }
        self.memo.insert(cands.to_vec(), best);
        Ok(best)
    }

    /// Worst-case number of queries that identifies the label among `candidates`.
    pub fn depth(&mut self, candidates: &[BitString]) -> Result<usize> {
        let idx = self.indices(candidates)?;
        self.depth_of(&idx)
    }

    fn optimal_first(&mut self, cands: &[u32]) -> Result<Vec<usize>> {
        let d = self.depth_of(cands)?;
        let mut out = Vec::new();
        if d == 0 {
            return Ok(out);
        }
        for a in 0..1usize << self.family.n() {
            let groups = self.split(cands, a);
            if groups.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for g in &groups {
                worst = worst.max(self.depth_of(g)?);
            }
            if worst + 1 == d {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Queries that appear on `b`'s path in some tree whose every subtree is
    /// itself optimal.
    pub fn resolving_queries(&mut self, candidates: &[BitString], b: &BitString) -> Result<BTreeSet<BitString>> {
        let target = self.family.position(b).ok_or_else(|| Error::UnknownLabel(b.to_string()))? as u32;
        let idx = self.indices(candidates)?;
        let mut out = BTreeSet::new();
        if idx.binary_search(&target).is_err() {
            return Ok(out);
        }
        let mut visited = BTreeSet::new();
        let mut stack = vec![idx];
        while let Some(cands) = stack.pop() {
            if !visited.insert(cands.clone()) {
                continue;
            }
            for a in self.optimal_first(&cands)? {
                out.insert(BitString::new(a as u64, self.family.n()));
                let group = self.split(&cands, a).into_iter().find(|g| g.contains(&target)).expect("target in a group");
                if group.len() > 1 {
                    stack.push(group);
                }
            }
        }
        Ok(out)
    }
}

pub const DEFAULT_SEARCH_BUDGET: usize = 1 << 20;

/// N_a: worst-case classical queries to identify the label within `candidates`.
pub fn count_queries(family: &FunctionFamily, candidates: &[BitString]) -> Result<usize> {
    QuerySearch::new(family, DEFAULT_SEARCH_BUDGET).depth(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::families::FamilyKind;

    fn labels(s: &[&str]) -> Vec<BitString> {
        s.iter().map(|x| bits(x)).collect()
    }

    #[test]
    fn grover_needs_one_fewer_than_candidates() {
        let fam = FunctionFamily::build(FamilyKind::Grover, 4).unwrap();
        assert_eq!(count_queries(&fam, &labels(&["0000", "0001", "0010", "0011"])).unwrap(), 3);
        assert_eq!(count_queries(&fam, &labels(&["0100"])).unwrap(), 0);
        let all: Vec<_> = fam.labels().collect();
        assert_eq!(count_queries(&fam, &all).unwrap(), 15);
    }

    #[test]
    fn grover_resolving_queries() {
        let fam = FunctionFamily::build(FamilyKind::Grover, 2).unwrap();
        let mut s = QuerySearch::new(&fam, 1000);
        let q = s.resolving_queries(&labels(&["01", "00"]), &bits("01")).unwrap();
        assert_eq!(q, labels(&["00", "01"]).into_iter().collect());
        let q = s.resolving_queries(&labels(&["01", "00"]), &bits("11")).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let fam = FunctionFamily::build(FamilyKind::Grover, 4).unwrap();
        let all: Vec<_> = fam.labels().collect();
        let mut s = QuerySearch::new(&fam, 3);
        assert_eq!(s.depth(&all).unwrap_err(), Error::SearchBudget(3));
    }
}
