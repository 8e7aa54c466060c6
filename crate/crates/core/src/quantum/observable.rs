use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Parity `c·x` of a register's content, for a nonzero mask `c`.
///
/// On a two-qubit register the masks `10`, `01` and `11` read the left cell,
/// the right cell and their exclusive or.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParityObservable {
    pub register: String,
    pub mask: BitString,
}

impl ParityObservable {
    pub fn new(register: &str, mask: BitString) -> Result<Self> {
        if mask.is_zero() {
            return Err(Error::InvalidBits(format!("zero parity mask {mask}")));
        }
        Ok(ParityObservable { register: register.to_string(), mask })
    }

    /// Eigenvalue on the basis string `x`.
    pub fn eigenvalue(&self, x: &BitString) -> bool {
        self.mask.dot(x)
    }
}

/// A subspace spanned by computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub enum Subspace {
    /// Kets whose register content is one of `strings`.
    Basis { register: String, strings: Vec<BitString> },
    /// Kets on which the parity observable takes `outcome`.
    Parity { observable: ParityObservable, outcome: bool },
}

impl Subspace {
    pub fn basis(register: &str, strings: &[BitString]) -> Self {
        Subspace::Basis { register: register.to_string(), strings: strings.to_vec() }
    }

    pub fn parity(observable: ParityObservable, outcome: bool) -> Self {
        Subspace::Parity { observable, outcome }
    }

    pub fn register(&self) -> &str {
        match self {
            Subspace::Basis { register, .. } => register,
            Subspace::Parity { observable, .. } => &observable.register,
        }
    }

    pub fn contains(&self, x: &BitString) -> bool {
        match self {
            Subspace::Basis { strings, .. } => strings.contains(x),
            Subspace::Parity { observable, outcome } => observable.eigenvalue(x) == *outcome,
        }
    }
}

/// What a measurement reads.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementTarget {
    /// Full content of the listed registers, concatenated in the given order.
    Registers(Vec<String>),
    Parity(ParityObservable),
}

impl MeasurementTarget {
    pub fn register(name: &str) -> Self {
        MeasurementTarget::Registers(vec![name.to_string()])
    }
}
