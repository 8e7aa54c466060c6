//! Linear systems over GF(2) for Simon post-processing.

use crate::bits::BitString;

/// Homogeneous system `s_j · h = 0` in `n` unknowns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gf2System {
    n: usize,
    rows: Vec<BitString>,
}

impl Gf2System {
    pub fn new(n: usize) -> Self {
        assert!((1..64).contains(&n));
        Gf2System { n, rows: Vec::new() }
    }

    pub fn with_rows(n: usize, rows: &[BitString]) -> Self {
        let mut s = Gf2System::new(n);
        for r in rows {
            s.push(*r);
        }
        s
    }

    pub fn push(&mut self, row: BitString) {
        assert_eq!(row.width(), self.n, "row width must match the unknown count");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[BitString] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-reduced basis of the row space, pivots in decreasing bit order.
    fn echelon(&self) -> Vec<u64> {
        let mut basis: Vec<u64> = Vec::new();
        for r in &self.rows {
            let mut v = r.value();
            for &b in &basis {
                let pivot = 63 - b.leading_zeros();
                if (v >> pivot) & 1 == 1 {
                    v ^= b;
                }
            }
            if v != 0 {
                let pivot = 63 - v.leading_zeros();
                for b in basis.iter_mut() {
                    if (*b >> pivot) & 1 == 1 {
                        *b ^= v;
                    }
                }
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.echelon().len()
    }

    /// Basis of the null space.
    pub fn null_space_basis(&self) -> Vec<BitString> {
        let basis = self.echelon();
        let pivots: Vec<u32> = basis.iter().map(|b| 63 - b.leading_zeros()).collect();
        let mut out = Vec::new();
        for free in (0..self.n as u32).rev() {
            if pivots.contains(&free) {
                continue;
            }
            // set the free bit, solve each pivot bit from its row
            let mut x = 1u64 << free;
            for (row, &p) in basis.iter().zip(&pivots) {
                if (row >> free) & 1 == 1 {
                    x |= 1u64 << p;
                }
            }
            out.push(BitString::new(x, self.n));
        }
        out
    }

    /// Every nonzero solution, increasing. A single candidate means the
    /// system pins `h` down.
    pub fn solve(&self) -> Vec<BitString> {
        let basis = self.null_space_basis();
        let mut out: Vec<BitString> = (1u64..(1u64 << basis.len()))
            .map(|mask| {
                let v = basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .fold(0u64, |acc, (_, b)| acc ^ b.value());
                BitString::new(v, self.n)
            })
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    fn brute_force(n: usize, rows: &[BitString]) -> Vec<BitString> {
        BitString::all(n).filter(|h| !h.is_zero() && rows.iter().all(|r| !r.dot(h))).collect()
    }

    #[test]
    fn single_row_two_bits() {
        assert_eq!(Gf2System::with_rows(2, &[bits("10")]).solve(), vec![bits("01")]);
    }

    #[test]
    fn empty_system_admits_everything_nonzero() {
        assert_eq!(Gf2System::new(2).solve(), vec![bits("01"), bits("10"), bits("11")]);
    }

    #[test]
    fn three_bit_system() {
        let s = Gf2System::with_rows(3, &[bits("110"), bits("101")]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.solve(), brute_force(3, s.rows()));
        assert_eq!(s.solve(), vec![bits("111")]);
    }

    proptest! {
        #[test]
        fn solve_matches_exhaustive_search(n in 1usize..7, raw in prop::collection::vec(any::<u64>(), 0..6)) {
            let rows: Vec<BitString> = raw.iter().map(|r| BitString::new(r & ((1 << n) - 1), n)).collect();
            let s = Gf2System::with_rows(n, &rows);
            prop_assert_eq!(s.solve(), brute_force(n, &rows));
            prop_assert_eq!(s.null_space_basis().len(), n - s.rank());
        }
    }
}
