use rand::Rng;

use super::{sample_phases, Choice, MeasurementRecord, Representation, Trajectory};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FunctionFamily, OracleUnitary, REG_A, REG_A_PRIME, REG_B, REG_V};
use crate::quantum::{
    hadamard, inversion_about_mean, MeasurementTarget, RegisterLayout, StateVector, C64, DENSE_QUBIT_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Hadamard(&'static str),
    Inversion(&'static str),
    Oracle,
}

#[derive(Debug, Clone)]
pub(crate) struct CircuitRun {
    pub trajectory: Trajectory,
    pub oracle: OracleUnitary,
    pub b: BitString,
    pub distribution: Vec<(BitString, f64)>,
    pub outcome: BitString,
}

pub(crate) fn joint_qubits(family: &FunctionFamily, extended: bool, v_width: usize) -> usize {
    let lw = family.label_width();
    lw * if extended { 2 } else { 1 } + family.n() + v_width
}

pub(crate) fn pick_representation(
    family: &FunctionFamily,
    extended: bool,
    v_width: usize,
    forced: Option<Representation>,
) -> Representation {
    forced.unwrap_or(if joint_qubits(family, extended, v_width) <= DENSE_QUBIT_LIMIT {
        Representation::TimeSymmetric
    } else {
        Representation::Conditioned
    })
}

/// `|B⟩` uniform over the family with the given phases, `A` (and `A'`) all
/// zeros, `V` holding `v`.
pub fn time_symmetric_input(
    family: &FunctionFamily,
    phases: &[f64],
    extended: bool,
    v: BitString,
) -> Result<StateVector> {
    let lw = family.label_width();
    let layout = if extended {
        RegisterLayout::new(&[(REG_B, lw), (REG_A_PRIME, lw), (REG_A, family.n()), (REG_V, v.width())])?
    } else {
        RegisterLayout::new(&[(REG_B, lw), (REG_A, family.n()), (REG_V, v.width())])?
    };
    layout.check_dense()?;
    let w = (family.len() as f64).sqrt().recip();
    let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
    for (k, label) in family.phase_order().iter().enumerate() {
        let mut values = vec![*label];
        if extended {
            values.push(BitString::zeros(lw));
        }
        values.push(BitString::zeros(family.n()));
        values.push(v);
        amps[layout.index_of(&values)?] = C64::from_polar(w, phases.get(k).copied().unwrap_or(0.0));
    }
    StateVector::new(layout, amps)
}

/// `A` all zeros and `V` holding `v`, for a sharp label.
pub fn conditioned_input(family: &FunctionFamily, v: BitString) -> Result<StateVector> {
    let layout = RegisterLayout::new(&[(REG_A, family.n()), (REG_V, v.width())])?;
    StateVector::basis(layout, &[BitString::zeros(family.n()), v])
}

fn resolve_label(family: &FunctionFamily, choice: Choice) -> Result<Option<BitString>> {
    match choice {
        Choice::Label(b) if family.contains(&b) => Ok(Some(b)),
        Choice::Label(b) => Err(Error::UnknownLabel(b.to_string())),
        Choice::Random => Ok(None),
    }
}

/// Runs `steps`, projects `B` on Bob's choice and measures `A`.
pub(crate) fn execute<R: Rng + ?Sized>(
    family: &FunctionFamily,
    choice: Choice,
    steps: &[Step],
    v: BitString,
    extended: bool,
    forced: Option<Representation>,
    rng: &mut R,
) -> Result<CircuitRun> {
    let sharp = resolve_label(family, choice)?;
    let repr = pick_representation(family, extended, v.width(), forced);
    let mut measurements = Vec::new();
    let (mut trajectory, oracle, b) = match repr {
        Representation::TimeSymmetric => {
            let phases = sample_phases(family.len(), rng);
            let input = time_symmetric_input(family, &phases, extended, v)?;
            let oracle = OracleUnitary::for_family(family, extended)?;
            let mut t = Trajectory::start(repr, input, phases);
            run_steps(&mut t, steps, &oracle)?;
            let b = match sharp {
                Some(b) => b,
                None => t.last().measure(&MeasurementTarget::register(REG_B), rng)?.outcome,
            };
            let p = t.project("project B", REG_B, b)?;
            measurements.push(MeasurementRecord { observable: REG_B.into(), outcome: b, probability: p });
            (t, oracle, b)
        }
        Representation::Conditioned => {
            if extended {
                return Err(Error::LayoutTooLarge {
                    qubits: joint_qubits(family, extended, v.width()),
                    limit: DENSE_QUBIT_LIMIT,
                });
            }
            let b = match sharp {
                Some(b) => b,
                None => {
                    let b = family.tables()[rng.random_range(0..family.len())].label();
                    let p = 1.0 / family.len() as f64;
                    measurements.push(MeasurementRecord { observable: REG_B.into(), outcome: b, probability: p });
                    b
                }
            };
            let oracle = OracleUnitary::conditioned(family, &b)?;
            let mut t = Trajectory::start(repr, conditioned_input(family, v)?, Vec::new());
            run_steps(&mut t, steps, &oracle)?;
            (t, oracle, b)
        }
    };
    let target = MeasurementTarget::register(REG_A);
    let distribution = trajectory.last().probabilities(&target)?;
    let m = trajectory.last().measure(&target, rng)?;
    trajectory.project("measure A", REG_A, m.outcome)?;
    measurements.push(MeasurementRecord { observable: REG_A.into(), outcome: m.outcome, probability: m.probability });
    trajectory.measurements = measurements;
    Ok(CircuitRun { trajectory, oracle, b, distribution, outcome: m.outcome })
}

fn run_steps(t: &mut Trajectory, steps: &[Step], oracle: &OracleUnitary) -> Result<()> {
    let mut oracle_no = 0;
    let mut inversion_no = 0;
    let mut hadamards: Vec<&str> = Vec::new();
    for step in steps {
        match *step {
            Step::Hadamard(reg) => {
                hadamards.push(reg);
                let seen = hadamards.iter().filter(|r| **r == reg).count();
                let label = if seen == 1 { format!("hadamard {reg}") } else { format!("hadamard {reg} ({seen})") };
                let w = t.last().layout().width(reg)?;
                t.unitary(&label, "hadamard", hadamard(w), &[reg])?;
            }
            Step::Inversion(reg) => {
                inversion_no += 1;
                let w = t.last().layout().width(reg)?;
                t.unitary(
                    &format!("inversion {inversion_no}"),
                    "inversion about the mean",
                    inversion_about_mean(w),
                    &[reg],
                )?;
            }
            Step::Oracle => {
                oracle_no += 1;
                t.oracle(&format!("oracle {oracle_no}"), oracle)?;
            }
        }
    }
    Ok(())
}

/// Probability mass of `outcome` in a sorted distribution.
pub(crate) fn mass(distribution: &[(BitString, f64)], outcome: &BitString) -> f64 {
    distribution.iter().find(|(o, _)| o == outcome).map_or(0.0, |d| d.1)
}
