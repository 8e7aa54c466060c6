use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::objective::BoundObjective;
use super::program::Program;
use crate::quantum::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Random starts on top of the warm start.
    pub restarts: usize,
    pub max_steps: usize,
    pub gradient_tol: f64,
    pub value_tol: f64,
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            max_steps: 4000,
            gradient_tol: 1e-8,
            value_tol: 1e-12,
            initial_step: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub restarts: usize,
    /// 0 is the warm start, `k ≥ 1` the `k`-th random start.
    pub best_start: usize,
    pub steps: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

pub(crate) struct Ascent {
    pub params: Vec<f64>,
    pub value: f64,
    pub steps: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Gradient ascent with a step that grows on success and halves on failure.
pub(crate) fn ascend(
    program: &Program,
    input: &[C64],
    objective: &BoundObjective,
    start: Vec<f64>,
    trainable: &[bool],
    config: &OptimizerConfig,
) -> Ascent {
    let mut prog = program.clone();
    let mut theta = start;
    prog.set_flat(&theta);
    let masked = |mut g: Vec<f64>| {
        for (x, &t) in g.iter_mut().zip(trainable) {
            if !t {
                *x = 0.0;
            }
        }
        g
    };
    let (mut value, g) = prog.value_and_gradient(input, objective);
    let mut grad = masked(g);
    let mut step = config.initial_step;
    let mut steps = 0;
    let mut converged = false;
    while steps < config.max_steps {
        let norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < config.gradient_tol {
            converged = true;
            break;
        }
        steps += 1;
        let trial: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t + step * g).collect();
        prog.set_flat(&trial);
        let (v, g) = prog.value_and_gradient(input, objective);
        if v > value {
            let gain = v - value;
            theta = trial;
            value = v;
            grad = masked(g);
            step *= 1.5;
            if gain < config.value_tol {
                converged = true;
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-14 {
                converged = true;
                break;
            }
        }
    }
    let gradient_norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ascent { params: theta, value, steps, gradient_norm, converged }
}

/// Warm start plus `restarts` random starts, run in parallel; the best value
/// wins and ties go to the earliest start.
pub(crate) fn multistart(
    program: &Program,
    input: &[C64],
    objective: &BoundObjective,
    warm: Vec<f64>,
    trainable: &[bool],
    config: &OptimizerConfig,
    stream: u64,
) -> (Ascent, Diagnostics) {
    let starts: Vec<Vec<f64>> = std::iter::once(warm.clone())
        .chain((0..config.restarts).map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream.wrapping_mul(1 << 16).wrapping_add(k as u64));
            warm.iter()
                .zip(trainable)
                .map(|(&w, &t)| if t { rng.random_range(-std::f64::consts::PI..std::f64::consts::PI) } else { w })
                .collect()
        }))
        .collect();
    let results: Vec<Ascent> =
        starts.into_par_iter().map(|s| ascend(program, input, objective, s, trainable, config)).collect();
    let mut best = 0;
    for (k, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = k;
        }
    }
    let diag = Diagnostics {
        restarts: config.restarts,
        best_start: best,
        steps: results[best].steps,
        gradient_norm: results[best].gradient_norm,
        converged: results[best].converged,
    };
    (results.into_iter().nth(best).expect("at least the warm start"), diag)
}
