use nalgebra::DMatrix;

use super::{FamilyKind, FunctionFamily, REG_A, REG_A_PRIME, REG_B, REG_V};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::quantum::{RegisterLayout, StateVector, C64};

/// Reversible evaluation `|b⟩|a⟩|v⟩ → |b⟩|a⟩|v ⊕ f_b(a)⟩` as a basis
/// permutation. The extended form also writes `|a′⟩ → |a′ ⊕ b⟩` into an
/// extra register `A'` the size of `B`.
#[derive(Debug, Clone)]
pub struct OracleUnitary {
    kind: FamilyKind,
    layout: RegisterLayout,
    extended: bool,
    conditioned_on: Option<BitString>,
    permutation: Vec<usize>,
}

impl OracleUnitary {
    /// Oracle over the full `B ⊗ (A') ⊗ A ⊗ V` layout.
    pub fn for_family(family: &FunctionFamily, extended: bool) -> Result<Self> {
        let lw = family.label_width();
        let n = family.n();
        let w = family.output_width();
        let layout = if extended {
            RegisterLayout::new(&[(REG_B, lw), (REG_A_PRIME, lw), (REG_A, n), (REG_V, w)])?
        } else {
            RegisterLayout::new(&[(REG_B, lw), (REG_A, n), (REG_V, w)])?
        };
        layout.check_dense()?;
        let mut permutation = Vec::with_capacity(layout.dim());
        for idx in 0..layout.dim() {
            let b = layout.extract(idx, REG_B)?;
            let a = layout.extract(idx, REG_A)?;
            let v = layout.extract(idx, REG_V)?;
            let f = family.readout(b.value(), a.value());
            let mut values = vec![b];
            if extended {
                values.push(layout.extract(idx, REG_A_PRIME)?.xor(&b));
            }
            values.push(a);
            values.push(BitString::new(v.value() ^ f, w));
            permutation.push(layout.index_of(&values)?);
        }
        Ok(OracleUnitary { kind: family.kind(), layout, extended, conditioned_on: None, permutation })
    }

    /// Oracle on `A ⊗ V` alone for a fixed, sharp label `b`.
    pub fn conditioned(family: &FunctionFamily, b: &BitString) -> Result<Self> {
        family.get(b)?;
        let n = family.n();
        let w = family.output_width();
        let layout = RegisterLayout::new(&[(REG_A, n), (REG_V, w)])?;
        layout.check_dense()?;
        let permutation = (0..layout.dim())
            .map(|idx| {
                let a = (idx >> w) as u64;
                let f = family.readout(b.value(), a) as usize;
                idx ^ f
            })
            .collect();
        Ok(OracleUnitary { kind: family.kind(), layout, extended: false, conditioned_on: Some(*b), permutation })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn conditioned_on(&self) -> Option<BitString> {
        self.conditioned_on
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Image of a basis index.
    pub fn image(&self, index: usize) -> usize {
        self.permutation[index]
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.layout() != &self.layout {
            return Err(Error::InvalidLayout("state layout does not match the oracle".into()));
        }
        state.apply_permutation(&self.permutation)
    }

    pub fn is_involution(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| self.permutation[p] == i)
    }

    /// Dense 0/1 matrix; `⟨y|U|x⟩ = 1` iff `y = perm(x)`.
    pub fn matrix(&self) -> Result<DMatrix<C64>> {
        let dim = self.layout.dim();
        if dim > 1 << 11 {
            return Err(Error::LayoutTooLarge { qubits: self.layout.qubits(), limit: 11 });
        }
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (x, &y) in self.permutation.iter().enumerate() {
            m[(y, x)] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn matrix_elements_match_xor_rule_exhaustively() {
        for kind in [FamilyKind::Grover, FamilyKind::DeutschJozsa, FamilyKind::Simon] {
            let fam = FunctionFamily::build(kind, 2).unwrap();
            let o = OracleUnitary::for_family(&fam, false).unwrap();
            let m = o.matrix().unwrap();
            let l = o.layout();
            for x in 0..l.dim() {
                let b = l.extract(x, REG_B).unwrap();
                let a = l.extract(x, REG_A).unwrap();
                let v = l.extract(x, REG_V).unwrap();
                for y in 0..l.dim() {
                    let expected = l.extract(y, REG_B).unwrap() == b
                        && l.extract(y, REG_A).unwrap() == a
                        && l.extract(y, REG_V).unwrap().value() == v.value() ^ fam.readout(b.value(), a.value());
                    assert_eq!(m[(y, x)].re == 1.0, expected);
                }
            }
            assert!(o.is_involution());
        }
    }

    #[test]
    fn extended_oracle_copies_label() {
        let fam = FunctionFamily::build(FamilyKind::DeutschJozsa, 2).unwrap();
        let o = OracleUnitary::for_family(&fam, true).unwrap();
        let l = o.layout();
        let x = l.index_of(&[bits("0011"), bits("0000"), bits("10"), bits("0")]).unwrap();
        let y = o.image(x);
        assert_eq!(l.extract(y, REG_A_PRIME).unwrap(), bits("0011"));
        assert_eq!(l.extract(y, REG_V).unwrap(), bits("1"));
        assert!(o.is_involution());
    }

    #[test]
    fn conditioned_oracle_matches_query() {
        let fam = FunctionFamily::build(FamilyKind::Simon, 3).unwrap();
        let b = fam.labels().nth(17).unwrap();
        let o = OracleUnitary::conditioned(&fam, &b).unwrap();
        for a in BitString::all(3) {
            let x = o.layout().index_of(&[a, bits("00")]).unwrap();
            let v = o.layout().extract(o.image(x), REG_V).unwrap();
            assert_eq!(v, fam.query(&b, &a).unwrap());
        }
    }

    #[test]
    fn oversized_layout_is_rejected() {
        let fam = FunctionFamily::build(FamilyKind::Simon, 3).unwrap();
        assert!(matches!(OracleUnitary::for_family(&fam, false), Err(Error::LayoutTooLarge { .. })));
    }
}
