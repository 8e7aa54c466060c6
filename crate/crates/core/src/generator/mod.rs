//! Building an oracle algorithm from scratch: free unitaries on `A` (and
//! once on `V`) interleaved with oracle calls, each round tuned to maximize
//! the chance of reading a solution out of `A`.

mod objective;
mod optimize;
mod program;
mod unitary;

pub use objective::{leaked_information, success_probability, Objective, SolutionPredicate};
pub use optimize::{Diagnostics, OptimizerConfig};
pub use unitary::ParameterizedUnitary;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::time_symmetric_input;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, OracleUnitary, REG_A, REG_V};
use crate::quantum::StateVector;
use objective::BoundObjective;
use optimize::multistart;
use program::{Op, Program};

/// Which slots are re-tuned when an oracle call is added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Every slot, warm-started from the previous round.
    #[default]
    Joint,
    /// Only the newest `A` slot after the first round.
    Greedy,
    /// The initial `A`, `V` slots maximize `E_A` after one call and are
    /// then frozen; the later `A` slots maximize `p_S` jointly.
    LeakFirst,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joint" => Ok(Strategy::Joint),
            "greedy" => Ok(Strategy::Greedy),
            "leak_first" | "leak-first" => Ok(Strategy::LeakFirst),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorConfig {
    pub optimizer: OptimizerConfig,
    pub strategy: Strategy,
    /// Defaults to [`default_threshold`].
    pub threshold: Option<f64>,
    pub max_oracle_calls: usize,
    /// Extra rounds run after the threshold is met.
    pub over_iterations: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            optimizer: OptimizerConfig::default(),
            strategy: Strategy::Joint,
            threshold: None,
            max_oracle_calls: 6,
            over_iterations: 1,
        }
    }
}

/// `1 − 10⁻⁹` where one call is known to be exact, `1 − 2^{-n}` otherwise.
pub fn default_threshold(kind: FamilyKind, n: usize) -> f64 {
    match (kind, n) {
        (FamilyKind::Grover, 2) | (FamilyKind::DeutschJozsa, _) | (FamilyKind::Simon, 2) => 1.0 - 1e-9,
        _ => 1.0 - 0.5f64.powi(n as i32),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratedAlgorithm {
    pub kind: FamilyKind,
    pub n: usize,
    pub threshold: f64,
    pub strategy: Strategy,
    /// `A`, `V`, then one `A` slot after each oracle call, as they were
    /// when the threshold was first met.
    pub slots: Vec<ParameterizedUnitary>,
    pub oracle_calls: usize,
    /// `p_S` after 1, 2, … oracle calls.
    pub p_s_trace: Vec<f64>,
    /// `p_S` for the rounds run past the threshold.
    pub over_iteration: Vec<f64>,
    pub diagnostics: Vec<Diagnostics>,
}

impl GeneratedAlgorithm {
    pub fn final_p_s(&self) -> f64 {
        self.p_s_trace.last().copied().unwrap_or(0.0)
    }

    /// The joint state the first `oracle_calls` rounds produce, zero phases.
    pub fn final_state(&self, family: &FunctionFamily) -> Result<StateVector> {
        let (input, oracle) = setup(family)?;
        let prog = Program::new(ops_for(self.oracle_calls), self.slots.clone(), &input, Some(&oracle))?;
        StateVector::new(input.layout().clone(), prog.run(input.amplitudes()))
    }
}

/// `p_S` of the generator's input before any unitary or oracle call.
pub fn initial_success_probability(family: &FunctionFamily) -> Result<f64> {
    let (input, _) = setup(family)?;
    success_probability(&input, &SolutionPredicate::for_family(family))
}

fn setup(family: &FunctionFamily) -> Result<(StateVector, OracleUnitary)> {
    let phases = vec![0.0; family.len()];
    let input = time_symmetric_input(family, &phases, false, BitString::zeros(family.output_width()))?;
    let oracle = OracleUnitary::for_family(family, false)?;
    Ok((input, oracle))
}

fn ops_for(calls: usize) -> Vec<Op> {
    let mut ops = vec![Op::Slot(0), Op::Slot(1)];
    for k in 0..calls {
        ops.push(Op::Oracle);
        ops.push(Op::Slot(k + 2));
    }
    ops
}

fn a_slot(family: &FunctionFamily) -> ParameterizedUnitary {
    ParameterizedUnitary::identity(&[REG_A], 1 << family.n())
}

fn trainable_mask(slots: &[ParameterizedUnitary], on: impl Fn(usize) -> bool) -> Vec<bool> {
    slots.iter().enumerate().flat_map(|(k, s)| std::iter::repeat_n(on(k), s.params.len())).collect()
}

/// Adds oracle calls one at a time until `p_S` reaches the
/// threshold, then runs the configured number of extra rounds.
pub fn generate_algorithm(family: &FunctionFamily, config: &GeneratorConfig) -> Result<GeneratedAlgorithm> {
    let threshold = config.threshold.unwrap_or_else(|| default_threshold(family.kind(), family.n()));
    let (input, oracle) = setup(family)?;
    let predicate = SolutionPredicate::for_family(family);
    let p_s = BoundObjective::new(Objective::SuccessProbability, &input, &predicate)?;
    let mut slots = vec![a_slot(family), ParameterizedUnitary::identity(&[REG_V], 1 << family.output_width())];
    let mut frozen_prefix = 0;

    if config.strategy == Strategy::LeakFirst {
        let (found, _, _) = maximize_initial_leak(family, &config.optimizer)?;
        slots = found;
        frozen_prefix = 2;
    }

    let mut trace = Vec::new();
    let mut over = Vec::new();
    let mut diagnostics = Vec::new();
    let mut reached: Option<usize> = None;
    let mut solution = Vec::new();
    let mut calls = 0;
    loop {
        let done = match reached {
            Some(r) => calls >= r + config.over_iterations,
            None => calls >= config.max_oracle_calls,
        };
        if done {
            break;
        }
        calls += 1;
        slots.push(a_slot(family));
        let mut prog = Program::new(ops_for(calls), slots.clone(), &input, Some(&oracle))?;
        let newest = slots.len() - 1;
        let trainable = match config.strategy {
            Strategy::Joint => trainable_mask(&slots, |_| true),
            Strategy::Greedy if calls == 1 => trainable_mask(&slots, |_| true),
            Strategy::Greedy => trainable_mask(&slots, |k| k == newest),
            Strategy::LeakFirst => trainable_mask(&slots, |k| k >= frozen_prefix),
        };
        let (best, diag) = multistart(
            &prog,
            input.amplitudes(),
            &p_s,
            prog.flat_params(),
            &trainable,
            &config.optimizer,
            calls as u64,
        );
        prog.set_flat(&best.params);
        slots = prog.slots;
        diagnostics.push(diag);
        if reached.is_some() {
            over.push(best.value);
        } else {
            trace.push(best.value);
            if best.value >= threshold {
                reached = Some(calls);
                solution = slots.clone();
            }
        }
    }
    let Some(oracle_calls) = reached else {
        return Err(Error::IterateCap { cap: config.max_oracle_calls, best: trace.last().copied().unwrap_or(0.0) });
    };
    Ok(GeneratedAlgorithm {
        kind: family.kind(),
        n: family.n(),
        threshold,
        strategy: config.strategy,
        slots: solution,
        oracle_calls,
        p_s_trace: trace,
        over_iteration: over,
        diagnostics,
    })
}

/// Tunes the initial `A` and `V` unitaries so that one oracle call leaks as
/// much as possible about `b` into `A`. Returns the slots (with an identity
/// `A` slot after the call), the achieved `E_A` and diagnostics.
pub fn maximize_initial_leak(
    family: &FunctionFamily,
    config: &OptimizerConfig,
) -> Result<(Vec<ParameterizedUnitary>, f64, Diagnostics)> {
    let (input, oracle) = setup(family)?;
    let predicate = SolutionPredicate::for_family(family);
    let leak = BoundObjective::new(Objective::LeakedInformation, &input, &predicate)?;
    let slots = vec![a_slot(family), ParameterizedUnitary::identity(&[REG_V], 1 << family.output_width())];
    let mut prog = Program::new(vec![Op::Slot(0), Op::Slot(1), Op::Oracle], slots, &input, Some(&oracle))?;
    let trainable = vec![true; prog.param_count()];
    let (best, diag) = multistart(&prog, input.amplitudes(), &leak, prog.flat_params(), &trainable, config, 1 << 20);
    prog.set_flat(&best.params);
    Ok((prog.slots, best.value, diag))
}

/// One free unitary on `slot`'s registers applied to `state`, tuned for
/// `objective`. The slot's current parameters are the warm start.
pub fn maximize_step(
    state: &StateVector,
    slot: &ParameterizedUnitary,
    objective: Objective,
    predicate: &SolutionPredicate,
    config: &OptimizerConfig,
) -> Result<(ParameterizedUnitary, f64, Diagnostics)> {
    let bound = BoundObjective::new(objective, state, predicate)?;
    let mut prog = Program::new(vec![Op::Slot(0)], vec![slot.clone()], state, None)?;
    let trainable = vec![true; prog.param_count()];
    let (best, diag) = multistart(&prog, state.amplitudes(), &bound, prog.flat_params(), &trainable, config, 1 << 21);
    prog.set_flat(&best.params);
    Ok((prog.slots.remove(0), best.value, diag))
}

#[cfg(test)]
mod tests;

/// Largest relative gap between the analytic gradient and a central
/// difference, over `probes` random coordinates of a random program with
/// `oracle_calls` calls.
pub fn gradient_discrepancy<R: Rng + ?Sized>(
    family: &FunctionFamily,
    objective: Objective,
    oracle_calls: usize,
    probes: usize,
    rng: &mut R,
) -> Result<f64> {
    let (input, oracle) = setup(family)?;
    let bound = BoundObjective::new(objective, &input, &SolutionPredicate::for_family(family))?;
    let mut slots = vec![a_slot(family), ParameterizedUnitary::identity(&[REG_V], 1 << family.output_width())];
    slots.extend((0..oracle_calls).map(|_| a_slot(family)));
    let mut prog = Program::new(ops_for(oracle_calls), slots, &input, Some(&oracle))?;
    let theta: Vec<f64> = (0..prog.param_count()).map(|_| rng.random_range(-2.0..2.0)).collect();
    prog.set_flat(&theta);
    let (_, grad) = prog.value_and_gradient(input.amplitudes(), &bound);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let j = rng.random_range(0..theta.len());
        let mut shifted = theta.clone();
        shifted[j] = theta[j] + h;
        prog.set_flat(&shifted);
        let up = prog.value(input.amplitudes(), &bound);
        shifted[j] = theta[j] - h;
        prog.set_flat(&shifted);
        let down = prog.value(input.amplitudes(), &bound);
        let fd = (up - down) / (2.0 * h);
        let scale = grad[j].abs().max(fd.abs()).max(1e-3);
        worst = worst.max((grad[j] - fd).abs() / scale);
    }
    Ok(worst)
}
