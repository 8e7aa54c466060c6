//! Dense state-vector and density-operator machinery over named registers.
//!
//! Amplitude indices are register-major: the first register in a layout
//! holds the most significant bits of the index, and inside a register the
//! leftmost written bit is the highest-order bit. For a layout
//! `[("B", 2), ("A", 2), ("V", 1)]` the ket `|01⟩_B|10⟩_A|1⟩_V` sits at index
//! `0b01_10_1 = 13`.

mod density;
mod gates;
mod layout;
mod observable;
mod phase;
mod state;

pub use density::DensityOperator;
pub use gates::{hadamard, identity, inversion_about_mean, is_unitary, unitary_deviation};
pub use layout::{Register, RegisterLayout, DENSE_QUBIT_LIMIT};
pub use observable::{MeasurementTarget, ParityObservable, Subspace};
pub use phase::RandomPhaseEnsemble;
pub use state::{Measurement, StateVector};

pub use num_complex::Complex64 as C64;

/// Maximum deviation of `U†U` from the identity accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Norm and trace tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues at or below this floor contribute nothing to the entropy.
pub const EIGEN_FLOOR: f64 = 1e-12;
