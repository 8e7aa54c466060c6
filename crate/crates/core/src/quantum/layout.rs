use crate::bits::BitString;
use crate::error::{Error, Result};

/// States with more qubits than this are not allocated.
pub const DENSE_QUBIT_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: usize,
}

/// Ordered set of named registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new(shape: &[(&str, usize)]) -> Result<Self> {
        let mut registers: Vec<Register> = Vec::with_capacity(shape.len());
        for &(name, qubits) in shape {
            if qubits == 0 {
                return Err(Error::InvalidLayout(format!("register `{name}` has no qubits")));
            }
            if registers.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            registers.push(Register { name: name.to_string(), qubits });
        }
        if registers.is_empty() {
            return Err(Error::InvalidLayout("no registers".into()));
        }
        let layout = RegisterLayout { registers };
        if layout.qubits() > 62 {
            return Err(Error::InvalidLayout("more than 62 qubits".into()));
        }
        Ok(layout)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn qubits(&self) -> usize {
        self.registers.iter().map(|r| r.qubits).sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits()
    }

    /// Fails when the layout is too large for a dense representation.
    pub fn check_dense(&self) -> Result<()> {
        if self.qubits() > DENSE_QUBIT_LIMIT {
            return Err(Error::LayoutTooLarge { qubits: self.qubits(), limit: DENSE_QUBIT_LIMIT });
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.registers.iter().position(|r| r.name == name).ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        Ok(self.registers[self.position(name)?].qubits)
    }

    /// Number of index bits to the right of register `name`.
    pub fn shift(&self, name: &str) -> Result<usize> {
        let pos = self.position(name)?;
        Ok(self.registers[pos + 1..].iter().map(|r| r.qubits).sum())
    }

    /// Index mask covering register `name`.
    pub fn mask(&self, name: &str) -> Result<usize> {
        let w = self.width(name)?;
        Ok(((1usize << w) - 1) << self.shift(name)?)
    }

    /// Value held by register `name` in basis index `index`.
    pub fn extract(&self, index: usize, name: &str) -> Result<BitString> {
        let w = self.width(name)?;
        let v = (index >> self.shift(name)?) & ((1usize << w) - 1);
        Ok(BitString::new(v as u64, w))
    }

    /// Basis index for the given register values, one per register in order.
    pub fn index_of(&self, values: &[BitString]) -> Result<usize> {
        if values.len() != self.registers.len() {
            return Err(Error::DimensionMismatch { expected: self.registers.len(), got: values.len() });
        }
        let mut idx = 0usize;
        for (reg, v) in self.registers.iter().zip(values) {
            if v.width() != reg.qubits {
                return Err(Error::DimensionMismatch { expected: reg.qubits, got: v.width() });
            }
            idx = (idx << reg.qubits) | v.value() as usize;
        }
        Ok(idx)
    }

    /// Layout restricted to `names`, keeping this layout's order.
    pub fn sub_layout(&self, names: &[&str]) -> Result<RegisterLayout> {
        for n in names {
            self.position(n)?;
        }
        let shape: Vec<(&str, usize)> = self
            .registers
            .iter()
            .filter(|r| names.contains(&r.name.as_str()))
            .map(|r| (r.name.as_str(), r.qubits))
            .collect();
        RegisterLayout::new(&shape)
    }

    /// Table mapping a concatenated value of `targets` (in the given order)
    /// to the index bits it occupies in this layout.
    pub(crate) fn scatter_table(&self, targets: &[&str]) -> Result<(Vec<usize>, usize)> {
        let mut seen = Vec::new();
        let mut parts = Vec::new();
        for t in targets {
            if seen.contains(t) {
                return Err(Error::DuplicateRegister(t.to_string()));
            }
            seen.push(*t);
            parts.push((self.width(t)?, self.shift(t)?));
        }
        let total: usize = parts.iter().map(|p| p.0).sum();
        let mut table = vec![0usize; 1 << total];
        let mut full_mask = 0usize;
        for &(w, s) in &parts {
            full_mask |= ((1usize << w) - 1) << s;
        }
        for (t, slot) in table.iter_mut().enumerate() {
            let mut rem = total;
            let mut idx = 0usize;
            for &(w, s) in &parts {
                rem -= w;
                let v = (t >> rem) & ((1usize << w) - 1);
                idx |= v << s;
            }
            *slot = idx;
        }
        Ok((table, full_mask))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn bav() -> RegisterLayout {
        RegisterLayout::new(&[("B", 2), ("A", 2), ("V", 1)]).unwrap()
    }

    #[test]
    fn index_convention_is_register_major_big_endian() {
        let l = bav();
        assert_eq!(l.dim(), 32);
        assert_eq!(l.index_of(&[bits("01"), bits("10"), bits("1")]).unwrap(), 13);
        assert_eq!(l.extract(13, "B").unwrap(), bits("01"));
        assert_eq!(l.extract(13, "A").unwrap(), bits("10"));
        assert_eq!(l.extract(13, "V").unwrap(), bits("1"));
    }

    #[test]
    fn rejects_duplicates_and_unknown_names() {
        assert!(matches!(RegisterLayout::new(&[("A", 1), ("A", 2)]), Err(Error::DuplicateRegister(_))));
        assert!(matches!(bav().position("Q"), Err(Error::UnknownRegister(_))));
    }

    #[test]
    fn scatter_table_follows_target_order() {
        let l = bav();
        let (t, mask) = l.scatter_table(&["V", "B"]).unwrap();
        assert_eq!(mask, 0b11001);
        // V=1, B=10 -> concatenated 110
        assert_eq!(t[0b110], 0b10001);
    }
}
