use nalgebra::DMatrix;
use rand::Rng;

use super::{DensityOperator, StateVector, C64};
use crate::error::{Error, Result};

/// Equal-weight family of orthogonal kets, each carrying an independent
/// uniformly random phase. The phase average of the outer product of
/// `m^{-1/2} Σ e^{iφ_k}|k⟩` is the uniform mixture of the kets.
#[derive(Debug, Clone)]
pub struct RandomPhaseEnsemble {
    kets: Vec<StateVector>,
}

impl RandomPhaseEnsemble {
    pub fn new(kets: Vec<StateVector>) -> Result<Self> {
        let first = kets.first().ok_or_else(|| Error::InvalidDensity("empty ensemble".into()))?;
        for k in &kets {
            if k.layout() != first.layout() {
                return Err(Error::InvalidLayout("ensemble kets on different layouts".into()));
            }
            if !k.is_normalized() {
                return Err(Error::InvalidDensity("ensemble ket not normalized".into()));
            }
        }
        for i in 0..kets.len() {
            for j in i + 1..kets.len() {
                if kets[i].inner(&kets[j])?.norm() > 1e-10 {
                    return Err(Error::InvalidDensity(format!("kets {i} and {j} are not orthogonal")));
                }
            }
        }
        Ok(RandomPhaseEnsemble { kets })
    }

    pub fn kets(&self) -> &[StateVector] {
        &self.kets
    }

    pub fn len(&self) -> usize {
        self.kets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kets.is_empty()
    }

    /// The ket for one assignment of the phase symbols.
    pub fn with_phases(&self, phases: &[f64]) -> Result<StateVector> {
        if phases.len() != self.kets.len() {
            return Err(Error::DimensionMismatch { expected: self.kets.len(), got: phases.len() });
        }
        let w = (self.kets.len() as f64).sqrt().recip();
        let dim = self.kets[0].dim();
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for (k, &phi) in self.kets.iter().zip(phases) {
            let f = C64::from_polar(w, phi);
            for (a, x) in amps.iter_mut().zip(k.amplitudes()) {
                *a += f * x;
            }
        }
        StateVector::new(self.kets[0].layout().clone(), amps)
    }

    /// The limit of the phase average.
    pub fn exact_mixture(&self) -> DensityOperator {
        DensityOperator::uniform_mixture(&self.kets).expect("validated ensemble")
    }

    /// Monte-Carlo phase average over `samples` draws.
    pub fn phase_average<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<DensityOperator> {
        if samples == 0 {
            return Err(Error::Config("phase average needs at least one sample".into()));
        }
        let dim = self.kets[0].dim();
        let mut acc = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let mut phases = vec![0.0; self.kets.len()];
        for _ in 0..samples {
            for p in phases.iter_mut() {
                *p = rng.random::<f64>() * std::f64::consts::TAU;
            }
            let psi = nalgebra::DVector::from_column_slice(self.with_phases(&phases)?.amplitudes());
            acc += &psi * psi.adjoint();
        }
        acc /= C64::new(samples as f64, 0.0);
        DensityOperator::from_matrix_unchecked(self.kets[0].layout().clone(), acc)
    }
}
