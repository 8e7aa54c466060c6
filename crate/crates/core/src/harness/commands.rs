use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Checked, ExperimentConfig, Real};
use crate::algorithms::{
    run_deutsch_jozsa, run_grover, run_simon, Choice, Classification, GroverOptions, Representation, SimonOptions,
    Trajectory,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, OracleUnitary, REG_A, REG_B};
use crate::generator::{generate_algorithm, initial_success_probability, GeneratorConfig, OptimizerConfig};
use crate::histories::{alice_shares, attach_phases, decompose, recompose, tag_histories};
use crate::quantum::StateVector;
use crate::sharing::{
    advanced_knowledge_state, count_advanced_queries, enumerate_sharings, verify_sharing_rule,
    worst_case_advanced_queries, Share, SharingOptions,
};

/// Tagging every history against every share is quadratic in the family size.
const TAGGING_FAMILY_LIMIT: usize = 16;

fn rng(config: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

fn family(config: &ExperimentConfig) -> Result<FunctionFamily> {
    FunctionFamily::build(config.family, config.n)
}

fn resolve_label(family: &FunctionFamily, choice: Choice, rng: &mut ChaCha8Rng) -> Result<BitString> {
    match choice {
        Choice::Label(b) => {
            family.get(&b)?;
            Ok(b)
        }
        Choice::Random => {
            let labels: Vec<BitString> = family.labels().collect();
            Ok(*labels.choose(rng).expect("families are never empty"))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageSummary {
    pub label: String,
    pub operation: String,
    pub norm: Real,
    /// Entropy of `A` in bits.
    pub entropy_a: Real,
    /// Entropy of `B` in bits; absent in the conditioned representation.
    pub entropy_b: Option<Real>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tally {
    pub outcome: BitString,
    pub probability: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementSummary {
    pub observable: String,
    pub outcome: BitString,
    pub probability: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimonSummary {
    pub samples: Vec<BitString>,
    pub h: BitString,
    pub repetitions: usize,
    pub orthogonal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub family: FamilyKind,
    pub n: usize,
    pub b: BitString,
    pub representation: Representation,
    pub oracle_calls: usize,
    pub iterates: Option<usize>,
    pub stages: Vec<StageSummary>,
    /// `1 − min fidelity` when every stage is replayed from its predecessor.
    pub replay_infidelity: Checked,
    pub measurements: Vec<MeasurementSummary>,
    /// Distribution of `A` once `B` is projected on `b`.
    pub distribution: Vec<Tally>,
    pub outcome: BitString,
    pub success_probability: Real,
    pub classification: Option<Classification>,
    pub simon: Option<SimonSummary>,
}

fn summarize(
    trajectory: &Trajectory,
    oracle: &OracleUnitary,
) -> Result<(Vec<StageSummary>, Checked, Vec<MeasurementSummary>)> {
    let mut stages = Vec::with_capacity(trajectory.stages.len());
    for stage in &trajectory.stages {
        let entropy_b = if stage.state.layout().contains(REG_B) {
            Some(Real(stage.state.reduced_density(&[REG_B])?.entropy()))
        } else {
            None
        };
        stages.push(StageSummary {
            label: stage.label.clone(),
            operation: stage.operation.describe(),
            norm: Real(stage.state.norm()),
            entropy_a: Real(stage.state.reduced_density(&[REG_A])?.entropy()),
            entropy_b,
        });
    }
    let replay = Checked::at_most(1.0 - trajectory.verify(oracle)?, 1e-12);
    let measurements = trajectory
        .measurements
        .iter()
        .map(|m| MeasurementSummary {
            observable: m.observable.clone(),
            outcome: m.outcome,
            probability: Real(m.probability),
        })
        .collect();
    Ok((stages, replay, measurements))
}

fn tallies(dist: &[(BitString, f64)]) -> Vec<Tally> {
    dist.iter().map(|(o, p)| Tally { outcome: *o, probability: Real(*p) }).collect()
}

/// Runs the canonical algorithm for the configured family.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunResult> {
    let fam = family(config)?;
    let choice = config.choice()?;
    let mut rng = rng(config);
    match fam.kind() {
        FamilyKind::Grover => {
            let opts = GroverOptions { rule: config.iteration_rule, ..GroverOptions::default() };
            let run = run_grover(&fam, choice, &opts, &mut rng)?;
            let (stages, replay, measurements) = summarize(&run.trajectory, &run.oracle)?;
            Ok(RunResult {
                family: fam.kind(),
                n: fam.n(),
                b: run.b,
                representation: run.trajectory.representation,
                oracle_calls: run.trajectory.oracle_calls,
                iterates: Some(run.iterates),
                stages,
                replay_infidelity: replay,
                measurements,
                distribution: tallies(&run.distribution),
                outcome: run.outcome,
                success_probability: Real(run.success_probability),
                classification: None,
                simon: None,
            })
        }
        FamilyKind::DeutschJozsa => {
            let run = run_deutsch_jozsa(&fam, choice, config.extended, None, &mut rng)?;
            let (stages, replay, measurements) = summarize(&run.trajectory, &run.oracle)?;
            Ok(RunResult {
                family: fam.kind(),
                n: fam.n(),
                b: run.b,
                representation: run.trajectory.representation,
                oracle_calls: run.trajectory.oracle_calls,
                iterates: None,
                stages,
                replay_infidelity: replay,
                measurements,
                distribution: tallies(&run.distribution),
                outcome: run.outcome,
                success_probability: Real(run.correct_probability),
                classification: Some(run.classification),
                simon: None,
            })
        }
        FamilyKind::Simon => {
            let run = run_simon(&fam, choice, &SimonOptions::default(), &mut rng)?;
            let (stages, replay, measurements) = summarize(&run.trajectory, &run.oracle)?;
            let period = fam.get(&run.b)?.period().expect("simon tables carry a period");
            // every accepted sample is orthogonal to the period
            let p_s = run.distribution.iter().filter(|(s, _)| !s.dot(&period)).map(|(_, p)| p).sum();
            Ok(RunResult {
                family: fam.kind(),
                n: fam.n(),
                b: run.b,
                representation: run.trajectory.representation,
                oracle_calls: run.oracle_calls,
                iterates: None,
                stages,
                replay_infidelity: replay,
                measurements,
                distribution: tallies(&run.distribution),
                outcome: run.h,
                success_probability: Real(p_s),
                classification: None,
                simon: Some(SimonSummary {
                    orthogonal: run.samples.iter().all(|s| !s.dot(&period)),
                    samples: run.samples,
                    h: run.h,
                    repetitions: run.repetitions,
                }),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShareSummary {
    pub constraints: Vec<String>,
    pub induced: Vec<BitString>,
    pub entropy_reduction: Real,
}

impl From<&Share> for ShareSummary {
    fn from(s: &Share) -> Self {
        ShareSummary {
            constraints: s.constraints.iter().map(|c| c.to_string()).collect(),
            induced: s.induced.clone(),
            entropy_reduction: Real(s.entropy_reduction),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub bob: ShareSummary,
    pub alice: ShareSummary,
    pub intersection: Vec<BitString>,
    pub delta_e_bob: Real,
    pub delta_e_alice: Real,
    pub tight: bool,
    pub over_determined: Option<String>,
    pub equal_reduction: bool,
    /// Entropy of `B` once Alice's half is advanced to the start.
    pub advanced_entropy: Real,
    pub n_a: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShareResult {
    pub family: FamilyKind,
    pub n: usize,
    pub b: BitString,
    pub initial_entropy: Real,
    pub partitions: Vec<PartitionSummary>,
    /// Largest `N_a` over the listed partitions.
    pub n_a: Option<usize>,
    /// Largest `N_a` over every label.
    pub n_a_worst_case: Option<usize>,
}

/// Enumerates sharings of `b` with their entropy accounting and `N_a`.
pub fn cmd_share(config: &ExperimentConfig) -> Result<ShareResult> {
    let fam = family(config)?;
    let b = resolve_label(&fam, config.choice()?, &mut rng(config))?;
    let opts = SharingOptions { uneven: config.uneven, ..SharingOptions::default() };
    let mut partitions = Vec::new();
    for p in enumerate_sharings(&fam, &b, &opts)? {
        let check = verify_sharing_rule(&fam, &p)?;
        let advanced = advanced_knowledge_state(&fam, &b, &p.alice)?;
        partitions.push(PartitionSummary {
            bob: (&p.bob).into(),
            alice: (&p.alice).into(),
            intersection: check.intersection,
            delta_e_bob: Real(p.delta_e_bob),
            delta_e_alice: Real(p.delta_e_alice),
            tight: check.tight,
            over_determined: check.over_determined,
            equal_reduction: check.equal_reduction,
            advanced_entropy: Real(advanced.entropy),
            n_a: count_advanced_queries(&fam, &p.alice)?,
        });
    }
    Ok(ShareResult {
        family: fam.kind(),
        n: fam.n(),
        b,
        initial_entropy: Real((fam.len() as f64).log2()),
        n_a: partitions.iter().map(|p| p.n_a).max(),
        n_a_worst_case: worst_case_advanced_queries(&fam, &opts).ok().filter(|_| !partitions.is_empty()),
        partitions,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryRow {
    pub row: String,
    pub b: Option<BitString>,
    pub a: BitString,
    pub phase: Option<usize>,
    pub shares: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoriesResult {
    pub family: FamilyKind,
    pub n: usize,
    pub b: BitString,
    pub representation: Representation,
    /// Stage the decomposition starts from.
    pub stage: String,
    pub count: usize,
    /// L2 distance between the summed histories and the oracle's output.
    pub recomposition: Checked,
    /// Same, with the phases of the run put back symbolically.
    pub symbolic_recomposition: Option<Checked>,
    pub shares: Vec<String>,
    pub histories: Vec<HistoryRow>,
}

/// Splits the first oracle step of a canonical run into classical histories.
pub fn cmd_histories(config: &ExperimentConfig) -> Result<HistoriesResult> {
    let fam = family(config)?;
    let mut rng = rng(config);
    let choice = config.choice()?;
    let (trajectory, oracle, b) = match fam.kind() {
        FamilyKind::Grover => {
            let opts = GroverOptions { rule: config.iteration_rule, ..GroverOptions::default() };
            let r = run_grover(&fam, choice, &opts, &mut rng)?;
            (r.trajectory, r.oracle, r.b)
        }
        FamilyKind::DeutschJozsa => {
            let r = run_deutsch_jozsa(&fam, choice, config.extended, None, &mut rng)?;
            (r.trajectory, r.oracle, r.b)
        }
        FamilyKind::Simon => {
            let r = run_simon(&fam, choice, &SimonOptions::default(), &mut rng)?;
            (r.trajectory, r.oracle, r.b)
        }
    };
    let first = trajectory
        .stages
        .iter()
        .position(|s| matches!(s.operation, crate::algorithms::Operation::Oracle))
        .ok_or_else(|| Error::InvalidArgument("run made no oracle call".into()))?;
    let before = &trajectory.stages[first - 1];
    let pre = if config.sharp { sharp_copy(&before.state, &b)? } else { before.state.clone() };
    let post = oracle.apply(&pre)?;
    let layout = pre.layout().clone();
    let mut hs = decompose(&pre, &oracle)?;
    let recomposition = Checked::at_most(recompose(&hs, &layout, None)?.distance(&post)?, 1e-12);

    let symbolic = layout.contains(REG_B) && !config.sharp;
    let symbolic_recomposition = if symbolic {
        attach_phases(&mut hs, &fam, &trajectory.phases, &layout);
        Some(Checked::at_most(recompose(&hs, &layout, Some(&trajectory.phases))?.distance(&post)?, 1e-12))
    } else {
        None
    };

    let mut shares = Vec::new();
    if layout.contains(REG_B) && fam.len() <= TAGGING_FAMILY_LIMIT {
        let mut all = Vec::new();
        for label in fam.labels() {
            all.extend(enumerate_sharings(&fam, &label, &SharingOptions::default())?);
        }
        shares = alice_shares(&all);
        tag_histories(&mut hs, &fam, &shares)?;
    }

    Ok(HistoriesResult {
        family: fam.kind(),
        n: fam.n(),
        b,
        representation: trajectory.representation,
        stage: before.label.clone(),
        count: hs.len(),
        recomposition,
        symbolic_recomposition,
        shares: shares.iter().map(|s| s.describe()).collect(),
        histories: hs
            .into_iter()
            .map(|h| HistoryRow { row: h.rendered, b: h.b, a: h.a, phase: h.phase, shares: h.shares })
            .collect(),
    })
}

/// The basis state with `B = b` and every other register at its most likely value.
fn sharp_copy(state: &StateVector, b: &BitString) -> Result<StateVector> {
    let layout = state.layout().clone();
    let values = |i: usize| -> Result<Vec<BitString>> {
        layout.registers().iter().map(|r| layout.extract(i, &r.name)).collect()
    };
    let amps = state.amplitudes();
    let mut best: Option<usize> = None;
    for i in 0..amps.len() {
        if layout.contains(REG_B) && layout.extract(i, REG_B)? != *b {
            continue;
        }
        if best.is_none_or(|j| amps[i].norm_sqr() > amps[j].norm_sqr()) {
            best = Some(i);
        }
    }
    let best = best.ok_or_else(|| Error::InvalidArgument("empty state".into()))?;
    StateVector::basis(layout.clone(), &values(best)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SlotSummary {
    pub registers: Vec<String>,
    pub params: Vec<Real>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepSummary {
    pub restarts: usize,
    pub best_start: usize,
    pub steps: usize,
    pub gradient_norm: Real,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerateResult {
    pub family: FamilyKind,
    pub n: usize,
    pub threshold: Real,
    pub oracle_calls: usize,
    /// `p_S` before any oracle call.
    pub initial_p_s: Real,
    /// `p_S` after each oracle call.
    pub p_s_trace: Vec<Real>,
    pub over_iteration: Vec<Real>,
    /// Classical queries with advanced knowledge, for comparison with `oracle_calls`.
    pub n_a: Option<usize>,
    pub diagnostics: Vec<StepSummary>,
    pub slots: Vec<SlotSummary>,
}

/// Builds an algorithm by maximizing `p_S` over the free unitaries.
pub fn cmd_generate(config: &ExperimentConfig) -> Result<GenerateResult> {
    let fam = family(config)?;
    let gen = GeneratorConfig {
        optimizer: OptimizerConfig { restarts: config.restarts, seed: config.seed, ..OptimizerConfig::default() },
        strategy: config.strategy,
        threshold: config.threshold.map(|t| t.0),
        max_oracle_calls: config.max_oracle_calls,
        ..GeneratorConfig::default()
    };
    let algo = generate_algorithm(&fam, &gen)?;
    let n_a = worst_case_advanced_queries(&fam, &SharingOptions::default()).ok().filter(|&q| q > 0);
    Ok(GenerateResult {
        family: fam.kind(),
        n: fam.n(),
        threshold: Real(algo.threshold),
        oracle_calls: algo.oracle_calls,
        initial_p_s: Real(initial_success_probability(&fam)?),
        p_s_trace: super::reals(&algo.p_s_trace),
        over_iteration: super::reals(&algo.over_iteration),
        n_a,
        diagnostics: algo
            .diagnostics
            .iter()
            .map(|d| StepSummary {
                restarts: d.restarts,
                best_start: d.best_start,
                steps: d.steps,
                gradient_norm: Real(d.gradient_norm),
                converged: d.converged,
            })
            .collect(),
        slots: algo
            .slots
            .iter()
            .map(|s| SlotSummary { registers: s.registers.clone(), params: super::reals(&s.params) })
            .collect(),
    })
}
