use nalgebra::DMatrix;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, TableMeta, REG_A, REG_B};
use crate::quantum::{StateVector, C64, EIGEN_FLOOR};

/// Accepted `A` outcomes for each label.
#[derive(Debug, Clone)]
pub struct SolutionPredicate {
    kind: FamilyKind,
    n: usize,
    metas: std::collections::HashMap<BitString, TableMeta>,
}

impl SolutionPredicate {
    /// Grover: `a = b`. Deutsch–Jozsa: all zeros iff constant. Simon: `a · h = 0`.
    pub fn for_family(family: &FunctionFamily) -> Self {
        SolutionPredicate {
            kind: family.kind(),
            n: family.n(),
            metas: family.tables().iter().map(|t| (t.label(), t.meta())).collect(),
        }
    }

    pub fn accepts(&self, b: &BitString, a: &BitString) -> bool {
        match (self.kind, self.metas.get(b)) {
            (FamilyKind::Grover, Some(_)) => a == b,
            (_, Some(TableMeta::Constant)) => a.is_zero(),
            (_, Some(TableMeta::Balanced)) => !a.is_zero(),
            (_, Some(TableMeta::Period(h))) => !a.dot(h),
            _ => false,
        }
    }

    pub fn accepted(&self, b: &BitString) -> Vec<BitString> {
        BitString::all(self.n).filter(|a| self.accepts(b, a)).collect()
    }
}

/// `p_S`: probability that `A` lands in the accepted set of the label in `B`.
pub fn success_probability(state: &StateVector, predicate: &SolutionPredicate) -> Result<f64> {
    let layout = state.layout();
    let mut p = 0.0;
    for (i, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        if predicate.accepts(&layout.extract(i, REG_B)?, &layout.extract(i, REG_A)?) {
            p += amp.norm_sqr();
        }
    }
    Ok(p / state.norm_sqr())
}

/// `E_A`: entropy of the reduced state of `A`, in bits.
pub fn leaked_information(state: &StateVector) -> Result<f64> {
    Ok(state.reduced_density(&[REG_A])?.entropy())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    SuccessProbability,
    LeakedInformation,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p_s" | "success" | "success_probability" => Ok(Objective::SuccessProbability),
            "e_a" | "leak" | "leaked_information" => Ok(Objective::LeakedInformation),
            _ => Err(Error::InvalidArgument(format!("unknown objective {s}"))),
        }
    }
}

/// Objective bound to a layout: value and `∂f/∂ψ*` on raw amplitudes.
pub(crate) enum BoundObjective {
    Success { accept: Vec<bool> },
    Leak { scatter: Vec<usize>, mask: usize },
}

impl BoundObjective {
    pub fn new(objective: Objective, state: &StateVector, predicate: &SolutionPredicate) -> Result<Self> {
        let layout = state.layout();
        Ok(match objective {
            Objective::SuccessProbability => BoundObjective::Success {
                accept: (0..layout.dim())
                    .map(|i| Ok(predicate.accepts(&layout.extract(i, REG_B)?, &layout.extract(i, REG_A)?)))
                    .collect::<Result<_>>()?,
            },
            Objective::LeakedInformation => {
                let (scatter, mask) = layout.scatter_table(&[REG_A])?;
                BoundObjective::Leak { scatter, mask }
            }
        })
    }

    fn reduced(scatter: &[usize], mask: usize, psi: &[C64]) -> DMatrix<C64> {
        let d = scatter.len();
        let mut rho = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for rest in (0..psi.len()).filter(|r| r & mask == 0) {
            for i in 0..d {
                let x = psi[rest | scatter[i]];
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    rho[(i, j)] += x * psi[rest | scatter[j]].conj();
                }
            }
        }
        rho
    }

    pub fn value(&self, psi: &[C64]) -> f64 {
        match self {
            BoundObjective::Success { accept } => {
                psi.iter().zip(accept).filter(|(_, &a)| a).map(|(x, _)| x.norm_sqr()).sum()
            }
            BoundObjective::Leak { scatter, mask } => {
                let rho = Self::reduced(scatter, *mask, psi);
                let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
                herm.symmetric_eigenvalues()
                    .iter()
                    .filter(|&&l| l > EIGEN_FLOOR)
                    .map(|&l| -l * l.log2())
                    .sum::<f64>()
                    .max(0.0)
            }
        }
    }

    /// `g` with `df = 2 Re⟨g, dψ⟩`.
    pub fn costate(&self, psi: &[C64]) -> Vec<C64> {
        match self {
            BoundObjective::Success { accept } => {
                psi.iter().zip(accept).map(|(x, &a)| if a { *x } else { C64::new(0.0, 0.0) }).collect()
            }
            BoundObjective::Leak { scatter, mask } => {
                let rho = Self::reduced(scatter, *mask, psi);
                let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
                let eig = herm.symmetric_eigen();
                let logs = nalgebra::DVector::from_iterator(
                    scatter.len(),
                    eig.eigenvalues.iter().map(|&l| C64::new(l.max(EIGEN_FLOOR).log2(), 0.0)),
                );
                let log_rho = &eig.eigenvectors * DMatrix::from_diagonal(&logs) * eig.eigenvectors.adjoint();
                let mut g = vec![C64::new(0.0, 0.0); psi.len()];
                for rest in (0..psi.len()).filter(|r| r & mask == 0) {
                    for i in 0..scatter.len() {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..scatter.len() {
                            acc += log_rho[(i, j)] * psi[rest | scatter[j]];
                        }
                        g[rest | scatter[i]] = -acc;
                    }
                }
                g
            }
        }
    }
}
