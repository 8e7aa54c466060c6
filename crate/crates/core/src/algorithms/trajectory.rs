use nalgebra::DMatrix;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::OracleUnitary;
use crate::quantum::{StateVector, Subspace, C64};

/// Whether `B` is carried explicitly or factored out as a sharp label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    TimeSymmetric,
    Conditioned,
}

/// How a stage was obtained from the previous one.
#[derive(Debug, Clone)]
pub enum Operation {
    Prepare,
    Unitary {
        name: String,
        registers: Vec<String>,
        matrix: DMatrix<C64>,
    },
    Oracle,
    /// Renormalized projection of `register` on `value`.
    Project {
        register: String,
        value: BitString,
    },
}

impl Operation {
    pub fn describe(&self) -> String {
        match self {
            Operation::Prepare => "prepare".into(),
            Operation::Unitary { name, registers, .. } => format!("{name} on {}", registers.join(",")),
            Operation::Oracle => "oracle".into(),
            Operation::Project { register, value } => format!("project {register} on {value}"),
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Operation::Unitary { .. } | Operation::Oracle)
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub label: String,
    pub operation: Operation,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub observable: String,
    pub outcome: BitString,
    pub probability: f64,
}

/// Ordered states of one run plus its bookkeeping.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub representation: Representation,
    pub stages: Vec<Stage>,
    pub oracle_calls: usize,
    pub measurements: Vec<MeasurementRecord>,
    /// Phase values substituted for the symbols φ₀, φ₁, … (empty when `B`
    /// is factored out).
    pub phases: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn start(representation: Representation, state: StateVector, phases: Vec<f64>) -> Self {
        Trajectory {
            representation,
            stages: vec![Stage { label: "input".into(), operation: Operation::Prepare, state }],
            oracle_calls: 0,
            measurements: Vec::new(),
            phases,
        }
    }

    pub fn last(&self) -> &StateVector {
        &self.stages.last().expect("trajectory has an input stage").state
    }

    pub fn stage(&self, label: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.label == label)
    }

    pub(crate) fn unitary(&mut self, label: &str, name: &str, matrix: DMatrix<C64>, registers: &[&str]) -> Result<()> {
        let next = self.last().apply_unitary(&matrix, registers)?;
        self.stages.push(Stage {
            label: label.into(),
            operation: Operation::Unitary {
                name: name.into(),
                registers: registers.iter().map(|r| r.to_string()).collect(),
                matrix,
            },
            state: next,
        });
        Ok(())
    }

    pub(crate) fn oracle(&mut self, label: &str, oracle: &OracleUnitary) -> Result<()> {
        let next = oracle.apply(self.last())?;
        self.stages.push(Stage { label: label.into(), operation: Operation::Oracle, state: next });
        self.oracle_calls += 1;
        Ok(())
    }

    pub(crate) fn project(&mut self, label: &str, register: &str, value: BitString) -> Result<f64> {
        let (next, p) = self.last().project(&Subspace::basis(register, &[value]))?;
        self.stages.push(Stage {
            label: label.into(),
            operation: Operation::Project { register: register.into(), value },
            state: next,
        });
        Ok(p)
    }

    /// Replays every stage from its predecessor and returns the smallest
    /// fidelity between the replayed and the stored state.
    pub fn verify(&self, oracle: &OracleUnitary) -> Result<f64> {
        let mut worst = 1.0f64;
        for pair in self.stages.windows(2) {
            let (prev, next) = (&pair[0].state, &pair[1]);
            let replay = match &next.operation {
                Operation::Prepare => return Err(Error::Config("prepare after the input stage".into())),
                Operation::Unitary { matrix, registers, .. } => {
                    let regs: Vec<&str> = registers.iter().map(|s| s.as_str()).collect();
                    prev.apply_unitary(matrix, &regs)?
                }
                Operation::Oracle => oracle.apply(prev)?,
                Operation::Project { register, value } => prev.project(&Subspace::basis(register, &[*value]))?.0,
            };
            worst = worst.min(replay.fidelity(&next.state)?);
        }
        Ok(worst)
    }
}
