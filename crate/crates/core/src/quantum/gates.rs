use nalgebra::DMatrix;

use super::C64;

pub fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

/// Hadamard transform on `qubits` qubits.
pub fn hadamard(qubits: usize) -> DMatrix<C64> {
    let dim = 1usize << qubits;
    let scale = (dim as f64).sqrt().recip();
    DMatrix::from_fn(dim, dim, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * scale, 0.0)
    })
}

/// `2|s⟩⟨s| − I` with `|s⟩` the uniform superposition.
pub fn inversion_about_mean(qubits: usize) -> DMatrix<C64> {
    let dim = 1usize << qubits;
    let two_over = 2.0 / dim as f64;
    DMatrix::from_fn(dim, dim, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        C64::new(two_over - d, 0.0)
    })
}

/// Largest entry of `|U†U − I|`.
pub fn unitary_deviation(u: &DMatrix<C64>) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let p = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn is_unitary(u: &DMatrix<C64>) -> bool {
    unitary_deviation(u) <= super::UNITARY_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gates_are_unitary() {
        for k in 1..=4 {
            assert!(is_unitary(&hadamard(k)));
            assert!(is_unitary(&inversion_about_mean(k)));
        }
        let h2 = hadamard(2);
        assert!(((&h2 * &h2) - identity(4)).camax() < 1e-15);
    }

    #[test]
    fn non_unitary_detected() {
        let mut m = identity(2);
        m[(0, 0)] = C64::new(1.1, 0.0);
        assert!(!is_unitary(&m));
    }
}
