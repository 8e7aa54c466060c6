use nalgebra::DMatrix;
use serde::Serialize;

use crate::quantum::C64;

/// `U = exp(iH)` with `H = Σ_j θ_j E_j` over a fixed orthonormal Hermitian
/// basis of `d × d` matrices: the `d` diagonal units first, then for each
/// `k < l` the pair `(|k⟩⟨l| + |l⟩⟨k|)/√2`, `(−i|k⟩⟨l| + i|l⟩⟨k|)/√2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterizedUnitary {
    pub registers: Vec<String>,
    pub dim: usize,
    pub params: Vec<f64>,
}

/// Eigendecomposition of `H` cached for repeated use in gradients.
#[derive(Debug, Clone)]
pub(crate) struct Spectral {
    pub vectors: DMatrix<C64>,
    pub values: Vec<f64>,
    pub unitary: DMatrix<C64>,
}

impl ParameterizedUnitary {
    pub fn identity(registers: &[&str], dim: usize) -> Self {
        ParameterizedUnitary {
            registers: registers.iter().map(|r| r.to_string()).collect(),
            dim,
            params: vec![0.0; dim * dim],
        }
    }

    pub fn with_params(registers: &[&str], dim: usize, params: Vec<f64>) -> Self {
        assert_eq!(params.len(), dim * dim, "a d×d generator has d² coefficients");
        ParameterizedUnitary { registers: registers.iter().map(|r| r.to_string()).collect(), dim, params }
    }

    pub fn generator(&self) -> DMatrix<C64> {
        hermitian_from_params(self.dim, &self.params)
    }

    pub(crate) fn spectral(&self) -> Spectral {
        spectral(self.dim, &self.params)
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        self.spectral().unitary
    }
}

pub(crate) fn hermitian_from_params(d: usize, params: &[f64]) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for k in 0..d {
        h[(k, k)] = C64::new(params[k], 0.0);
    }
    let mut j = d;
    for k in 0..d {
        for l in k + 1..d {
            let (x, y) = (params[j] * s, params[j + 1] * s);
            // x(|k⟩⟨l| + |l⟩⟨k|) + y(−i|k⟩⟨l| + i|l⟩⟨k|)
            h[(k, l)] += C64::new(x, -y);
            h[(l, k)] += C64::new(x, y);
            j += 2;
        }
    }
    h
}

pub(crate) fn spectral(d: usize, params: &[f64]) -> Spectral {
    let h = hermitian_from_params(d, params);
    let eig = h.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let vectors = eig.eigenvectors;
    let phases =
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, values.iter().map(|&l| C64::from_polar(1.0, l))));
    let unitary = &vectors * phases * vectors.adjoint();
    Spectral { vectors, values, unitary }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `∂/∂θ_j Re Tr(U Cᵀ)` for every `j`, where `C` collects the costate
/// overlap `C_ij = Σ_rest conj(χ(rest,i)) φ(rest,j)`.
pub(crate) fn gradient_from_overlap(sp: &Spectral, c: &DMatrix<C64>) -> Vec<f64> {
    let d = sp.values.len();
    let v = &sp.vectors;
    let n = v.adjoint() * c.transpose() * v;
    // S = Γᵀ ∘ N with Γ_kl the divided difference of exp(i·) at (λ_k, λ_l)
    let mut s = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for k in 0..d {
        for l in 0..d {
            let (lk, ll) = (sp.values[l], sp.values[k]);
            let gamma = C64::new(0.0, 1.0) * C64::from_polar(1.0, (lk + ll) / 2.0) * sinc((lk - ll) / 2.0);
            s[(k, l)] = gamma * n[(k, l)];
        }
    }
    let q = v * s * v.adjoint();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut grad = Vec::with_capacity(d * d);
    for k in 0..d {
        grad.push(q[(k, k)].re);
    }
    for k in 0..d {
        for l in k + 1..d {
            grad.push(r * (q[(l, k)] + q[(k, l)]).re);
            grad.push(r * (C64::new(0.0, -1.0) * q[(l, k)] + C64::new(0.0, 1.0) * q[(k, l)]).re);
        }
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::unitary_deviation;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn always_unitary(params in proptest::collection::vec(-10.0f64..10.0, 16)) {
            let u = ParameterizedUnitary::with_params(&["A"], 4, params);
            prop_assert!(unitary_deviation(&u.matrix()) < 1e-10);
        }

        #[test]
        fn generator_is_hermitian(params in proptest::collection::vec(-3.0f64..3.0, 9)) {
            let h = hermitian_from_params(3, &params);
            prop_assert!((&h - h.adjoint()).iter().all(|x| x.norm() < 1e-15));
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let d = 3;
        let basis: Vec<DMatrix<C64>> = (0..d * d)
            .map(|j| {
                let mut p = vec![0.0; d * d];
                p[j] = 1.0;
                hermitian_from_params(d, &p)
            })
            .collect();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let ip = (x.adjoint() * y).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_params_give_identity() {
        let u = ParameterizedUnitary::identity(&["A"], 4).matrix();
        assert!((u - DMatrix::<C64>::identity(4, 4)).iter().all(|x| x.norm() < 1e-15));
    }
}
