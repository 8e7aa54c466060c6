use nalgebra::DMatrix;

use super::objective::BoundObjective;
use super::unitary::{gradient_from_overlap, spectral, ParameterizedUnitary};
use crate::error::Result;
use crate::families::OracleUnitary;
use crate::quantum::{StateVector, C64};

#[derive(Debug, Clone)]
pub(crate) enum Op {
    Slot(usize),
    Oracle,
}

/// A fixed interleaving of free unitaries and oracle calls over one layout.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub ops: Vec<Op>,
    pub slots: Vec<ParameterizedUnitary>,
    scatter: Vec<(Vec<usize>, usize)>,
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

fn apply(u: &DMatrix<C64>, scatter: &[usize], mask: usize, psi: &[C64]) -> Vec<C64> {
    let d = scatter.len();
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    let mut g = vec![C64::new(0.0, 0.0); d];
    for rest in (0..psi.len()).filter(|r| r & mask == 0) {
        for t in 0..d {
            g[t] = psi[rest | scatter[t]];
        }
        for i in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for (j, x) in g.iter().enumerate() {
                acc += u[(i, j)] * x;
            }
            out[rest | scatter[i]] = acc;
        }
    }
    out
}

fn permute(perm: &[usize], psi: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = psi[i];
    }
    out
}

impl Program {
    pub fn new(
        ops: Vec<Op>,
        slots: Vec<ParameterizedUnitary>,
        input: &StateVector,
        oracle: Option<&OracleUnitary>,
    ) -> Result<Self> {
        let layout = input.layout();
        let scatter = slots
            .iter()
            .map(|s| {
                let regs: Vec<&str> = s.registers.iter().map(|r| r.as_str()).collect();
                layout.scatter_table(&regs)
            })
            .collect::<Result<Vec<_>>>()?;
        for (s, (sc, _)) in slots.iter().zip(&scatter) {
            if sc.len() != s.dim {
                return Err(crate::error::Error::DimensionMismatch { expected: sc.len(), got: s.dim });
            }
        }
        let perm = match oracle {
            Some(o) if o.layout() == layout => o.permutation().to_vec(),
            Some(_) => return Err(crate::error::Error::InvalidLayout("oracle layout differs from the input".into())),
            None => (0..layout.dim()).collect(),
        };
        let mut inverse = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        Ok(Program { ops, slots, scatter, perm, inverse })
    }

    pub fn param_count(&self) -> usize {
        self.slots.iter().map(|s| s.params.len()).sum()
    }

    pub fn flat_params(&self) -> Vec<f64> {
        self.slots.iter().flat_map(|s| s.params.iter().copied()).collect()
    }

    pub fn set_flat(&mut self, flat: &[f64]) {
        let mut off = 0;
        for s in &mut self.slots {
            let n = s.params.len();
            s.params.copy_from_slice(&flat[off..off + n]);
            off += n;
        }
    }

    pub fn run(&self, input: &[C64]) -> Vec<C64> {
        let mats: Vec<_> = self.slots.iter().map(|s| s.matrix()).collect();
        let mut psi = input.to_vec();
        for op in &self.ops {
            psi = match op {
                Op::Slot(k) => apply(&mats[*k], &self.scatter[*k].0, self.scatter[*k].1, &psi),
                Op::Oracle => permute(&self.perm, &psi),
            };
        }
        psi
    }

    /// Objective value and its gradient with respect to the flat parameters.
    pub fn value_and_gradient(&self, input: &[C64], objective: &BoundObjective) -> (f64, Vec<f64>) {
        let specs: Vec<_> = self.slots.iter().map(|s| spectral(s.dim, &s.params)).collect();
        let mut states = vec![input.to_vec()];
        for op in &self.ops {
            let psi = states.last().expect("nonempty");
            let next = match op {
                Op::Slot(k) => apply(&specs[*k].unitary, &self.scatter[*k].0, self.scatter[*k].1, psi),
                Op::Oracle => permute(&self.perm, psi),
            };
            states.push(next);
        }
        let out = states.last().expect("nonempty");
        let value = objective.value(out);
        let mut chi = objective.costate(out);
        let mut grads: Vec<Vec<f64>> = self.slots.iter().map(|s| vec![0.0; s.params.len()]).collect();
        for (t, op) in self.ops.iter().enumerate().rev() {
            match op {
                Op::Slot(k) => {
                    let (sc, mask) = (&self.scatter[*k].0, self.scatter[*k].1);
                    let phi = &states[t];
                    let d = sc.len();
                    let mut c = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
                    for rest in (0..phi.len()).filter(|r| r & mask == 0) {
                        for i in 0..d {
                            let x = chi[rest | sc[i]].conj();
                            if x.norm_sqr() == 0.0 {
                                continue;
                            }
                            for j in 0..d {
                                c[(i, j)] += x * phi[rest | sc[j]];
                            }
                        }
                    }
                    for (g, dg) in grads[*k].iter_mut().zip(gradient_from_overlap(&specs[*k], &c)) {
                        *g += 2.0 * dg;
                    }
                    chi = apply(&specs[*k].unitary.adjoint(), sc, mask, &chi);
                }
                Op::Oracle => chi = permute(&self.inverse, &chi),
            }
        }
        (value, grads.into_iter().flatten().collect())
    }

    pub fn value(&self, input: &[C64], objective: &BoundObjective) -> f64 {
        objective.value(&self.run(input))
    }
}
