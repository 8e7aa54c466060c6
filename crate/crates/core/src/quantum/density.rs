use nalgebra::DMatrix;

use super::{RegisterLayout, StateVector, C64, EIGEN_FLOOR, NORM_TOL};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

/// Mixed state over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite.
    pub fn new(layout: RegisterLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(layout, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(layout: RegisterLayout, matrix: DMatrix<C64>) -> Result<Self> {
        layout.check_dense()?;
        if matrix.nrows() != layout.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: layout.dim(), got: matrix.nrows() });
        }
        Ok(DensityOperator { layout, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityOperator { layout: state.layout().clone(), matrix: &v * v.adjoint() }
    }

    /// Equal-weight mixture of the given states.
    pub fn uniform_mixture(states: &[StateVector]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        let w = 1.0 / states.len() as f64;
        let mut m = DMatrix::from_element(first.dim(), first.dim(), C64::new(0.0, 0.0));
        for s in states {
            if s.layout() != first.layout() {
                return Err(Error::InvalidLayout("mixture components on different layouts".into()));
            }
            m += DensityOperator::from_pure(s).matrix * C64::new(w, 0.0);
        }
        Ok(DensityOperator { layout: first.layout().clone(), matrix: m })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|d| d.re).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let herm = (&self.matrix - self.matrix.adjoint()).camax();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -NEGATIVE_EIGEN_TOL {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
            }
        }
        Ok(())
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        let s: f64 = self.eigenvalues().into_iter().filter(|&l| l > EIGEN_FLOOR).map(|l| -l * l.log2()).sum();
        s.max(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced operator on the registers in `keep`.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        let sub = self.layout.sub_layout(keep)?;
        let names: Vec<&str> = sub.registers().iter().map(|r| r.name.as_str()).collect();
        let (scatter, mask) = self.layout.scatter_table(&names)?;
        let d = scatter.len();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for rest in 0..self.layout.dim() {
            if rest & mask != 0 {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += self.matrix[(rest | scatter[i], rest | scatter[j])];
                }
            }
        }
        Ok(DensityOperator { layout: sub, matrix: m })
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        (&self.matrix - &other.matrix).camax()
    }
}
