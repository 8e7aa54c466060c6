use nalgebra::DMatrix;
use rand::Rng;

use super::{
    gates::unitary_deviation, DensityOperator, MeasurementTarget, RegisterLayout, Subspace, C64, NORM_TOL, UNITARY_TOL,
};
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Pure state over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<C64>,
}

/// Result of a sampled measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: BitString,
    pub state: StateVector,
    pub probability: f64,
}

impl StateVector {
    pub fn new(layout: RegisterLayout, amplitudes: Vec<C64>) -> Result<Self> {
        layout.check_dense()?;
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch { expected: layout.dim(), got: amplitudes.len() });
        }
        Ok(StateVector { layout, amplitudes })
    }

    /// Sharp basis state with one value per register.
    pub fn basis(layout: RegisterLayout, values: &[BitString]) -> Result<Self> {
        layout.check_dense()?;
        let idx = layout.index_of(values)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); layout.dim()];
        amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(StateVector { layout, amplitudes })
    }

    /// Tensor product of one ket per register, given in layout order.
    pub fn product(layout: RegisterLayout, kets: &[Vec<C64>]) -> Result<Self> {
        layout.check_dense()?;
        if kets.len() != layout.registers().len() {
            return Err(Error::DimensionMismatch { expected: layout.registers().len(), got: kets.len() });
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for (reg, ket) in layout.registers().iter().zip(kets) {
            let d = 1usize << reg.qubits;
            if ket.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: ket.len() });
            }
            let mut next = Vec::with_capacity(amps.len() * d);
            for a in &amps {
                for k in ket {
                    next.push(a * k);
                }
            }
            amps = next;
        }
        Ok(StateVector { layout, amplitudes: amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, values: &[BitString]) -> Result<C64> {
        Ok(self.amplitudes[self.layout.index_of(values)?])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn scaled(&self, factor: C64) -> StateVector {
        StateVector { layout: self.layout.clone(), amplitudes: self.amplitudes.iter().map(|a| a * factor).collect() }
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n < NORM_TOL {
            return Err(Error::ImpossibleOutcome(n * n));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_layout(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²` for normalized arguments.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    fn check_same_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::InvalidLayout("states live on different layouts".into()));
        }
        Ok(())
    }

    /// Applies `u` to the concatenation of `targets`, identity elsewhere.
    pub fn apply_unitary(&self, u: &DMatrix<C64>, targets: &[&str]) -> Result<StateVector> {
        let dev = unitary_deviation(u);
        let (scatter, mask) = self.layout.scatter_table(targets)?;
        if u.nrows() != scatter.len() || !u.is_square() {
            return Err(Error::DimensionMismatch { expected: scatter.len(), got: u.nrows() });
        }
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(self.apply_matrix_unchecked(u, &scatter, mask))
    }

    /// Applies an arbitrary square matrix without the unitarity check.
    pub(crate) fn apply_matrix_unchecked(&self, u: &DMatrix<C64>, scatter: &[usize], mask: usize) -> StateVector {
        let d = scatter.len();
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        let mut gathered = vec![C64::new(0.0, 0.0); d];
        for rest in 0..self.dim() {
            if rest & mask != 0 {
                continue;
            }
            for (t, g) in gathered.iter_mut().enumerate() {
                *g = self.amplitudes[rest | scatter[t]];
            }
            if gathered.iter().all(|g| g.norm_sqr() == 0.0) {
                continue;
            }
            for i in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for (j, g) in gathered.iter().enumerate() {
                    acc += u[(i, j)] * g;
                }
                out[rest | scatter[i]] = acc;
            }
        }
        StateVector { layout: self.layout.clone(), amplitudes: out }
    }

    /// Sends the amplitude at index `i` to index `perm[i]`.
    pub fn apply_permutation(&self, perm: &[usize]) -> Result<StateVector> {
        if perm.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: perm.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.amplitudes[i];
        }
        Ok(StateVector { layout: self.layout.clone(), amplitudes: out })
    }

    /// Unnormalized projection onto `subspace`.
    pub fn project_raw(&self, subspace: &Subspace) -> Result<StateVector> {
        let reg = subspace.register();
        let mut out = self.amplitudes.clone();
        for (i, a) in out.iter_mut().enumerate() {
            if !subspace.contains(&self.layout.extract(i, reg)?) {
                *a = C64::new(0.0, 0.0);
            }
        }
        Ok(StateVector { layout: self.layout.clone(), amplitudes: out })
    }

    /// Renormalized projection onto `subspace` and its probability.
    pub fn project(&self, subspace: &Subspace) -> Result<(StateVector, f64)> {
        let raw = self.project_raw(subspace)?;
        let p = raw.norm_sqr();
        if p < NORM_TOL {
            return Err(Error::ImpossibleOutcome(p));
        }
        Ok((raw.scaled(C64::new(1.0 / p.sqrt(), 0.0)), p))
    }

    fn outcome_of(&self, index: usize, target: &MeasurementTarget) -> Result<BitString> {
        match target {
            MeasurementTarget::Registers(names) => {
                let mut it = names.iter();
                let first = it.next().ok_or_else(|| Error::InvalidLayout("empty measurement".into()))?;
                let mut acc = self.layout.extract(index, first)?;
                for n in it {
                    acc = acc.concat(&self.layout.extract(index, n)?);
                }
                Ok(acc)
            }
            MeasurementTarget::Parity(obs) => {
                let x = self.layout.extract(index, &obs.register)?;
                Ok(BitString::new(obs.eigenvalue(&x) as u64, 1))
            }
        }
    }

    /// Born distribution of `target`, outcomes in increasing order, zero
    /// probabilities omitted.
    pub fn probabilities(&self, target: &MeasurementTarget) -> Result<Vec<(BitString, f64)>> {
        let mut dist: std::collections::BTreeMap<BitString, f64> = Default::default();
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                *dist.entry(self.outcome_of(i, target)?).or_insert(0.0) += p;
            }
        }
        Ok(dist.into_iter().collect())
    }

    /// Projects on a fixed outcome of `target`.
    pub fn collapse(&self, target: &MeasurementTarget, outcome: &BitString) -> Result<(StateVector, f64)> {
        let mut out = self.amplitudes.clone();
        for (i, a) in out.iter_mut().enumerate() {
            if self.outcome_of(i, target)? != *outcome {
                *a = C64::new(0.0, 0.0);
            }
        }
        let raw = StateVector { layout: self.layout.clone(), amplitudes: out };
        let p = raw.norm_sqr();
        if p < NORM_TOL {
            return Err(Error::ImpossibleOutcome(p));
        }
        Ok((raw.scaled(C64::new(1.0 / p.sqrt(), 0.0)), p))
    }

    /// Samples an outcome of `target` and returns the renormalized post-state.
    pub fn measure<R: Rng + ?Sized>(&self, target: &MeasurementTarget, rng: &mut R) -> Result<Measurement> {
        let dist = self.probabilities(target)?;
        let total: f64 = dist.iter().map(|d| d.1).sum();
        let mut x = rng.random::<f64>() * total;
        let mut chosen = dist.last().map(|d| d.0).ok_or(Error::ImpossibleOutcome(0.0))?;
        for (o, p) in &dist {
            if x < *p {
                chosen = *o;
                break;
            }
            x -= p;
        }
        let (state, probability) = self.collapse(target, &chosen)?;
        Ok(Measurement { outcome: chosen, state, probability })
    }

    /// Reduced density operator of the registers in `keep`.
    pub fn reduced_density(&self, keep: &[&str]) -> Result<DensityOperator> {
        let sub = self.layout.sub_layout(keep)?;
        let names: Vec<&str> = sub.registers().iter().map(|r| r.name.as_str()).collect();
        let (scatter, mask) = self.layout.scatter_table(&names)?;
        let d = scatter.len();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for rest in 0..self.dim() {
            if rest & mask != 0 {
                continue;
            }
            for i in 0..d {
                let ai = self.amplitudes[rest | scatter[i]];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    m[(i, j)] += ai * self.amplitudes[rest | scatter[j]].conj();
                }
            }
        }
        DensityOperator::from_matrix_unchecked(sub, m)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{hadamard, identity, ParityObservable};
    use super::*;
    use crate::bits::bits;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn layout() -> RegisterLayout {
        RegisterLayout::new(&[("B", 2), ("A", 2), ("V", 1)]).unwrap()
    }

    fn uniform_b() -> StateVector {
        let l = layout();
        StateVector::product(l, &[vec![c(0.5); 4], vec![c(1.0), c(0.0), c(0.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap()
    }

    #[test]
    fn identity_and_hadamard_involution() {
        let s = uniform_b();
        assert_eq!(s.apply_unitary(&identity(4), &["A"]).unwrap(), s);
        let h = hadamard(2);
        let back = s.apply_unitary(&h, &["A"]).unwrap().apply_unitary(&h, &["A"]).unwrap();
        assert!(back.distance(&s).unwrap() < 1e-14);
    }

    #[test]
    fn apply_rejects_bad_input() {
        let s = uniform_b();
        assert!(matches!(s.apply_unitary(&identity(2), &["A"]), Err(Error::DimensionMismatch { .. })));
        let mut m = identity(4);
        m[(0, 1)] = c(0.5);
        assert!(matches!(s.apply_unitary(&m, &["A"]), Err(Error::NotUnitary(_))));
        assert!(matches!(s.apply_unitary(&identity(4), &["Q"]), Err(Error::UnknownRegister(_))));
    }

    #[test]
    fn sharp_measurement_is_certain() {
        let s = StateVector::basis(layout(), &[bits("01"), bits("00"), bits("1")]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = s.measure(&MeasurementTarget::register("B"), &mut rng).unwrap();
        assert_eq!(m.outcome, bits("01"));
        assert_eq!(m.probability, 1.0);
    }

    #[test]
    fn xor_parity_splits_uniform_register() {
        // enumerate the four B kets: 00,11 have parity 0; 01,10 parity 1
        let s = uniform_b();
        let obs = ParityObservable::new("B", bits("11")).unwrap();
        let dist = s.probabilities(&MeasurementTarget::Parity(obs.clone())).unwrap();
        assert_eq!(dist.len(), 2);
        for (_, p) in &dist {
            assert!((p - 0.5).abs() < 1e-15);
        }
        let (post, p) = s.collapse(&MeasurementTarget::Parity(obs), &bits("0")).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let support: Vec<_> =
            post.probabilities(&MeasurementTarget::register("B")).unwrap().into_iter().map(|(o, _)| o).collect();
        assert_eq!(support, vec![bits("00"), bits("11")]);
    }

    #[test]
    fn projection_onto_pair_and_full_set() {
        let s = uniform_b();
        let (p, prob) = s.project(&Subspace::basis("B", &[bits("01"), bits("00")])).unwrap();
        assert!((prob - 0.5).abs() < 1e-15);
        let amp = p.amplitude(&[bits("00"), bits("00"), bits("1")]).unwrap();
        assert!((amp.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let all: Vec<_> = BitString::all(2).collect();
        let (q, prob) = s.project(&Subspace::basis("B", &all)).unwrap();
        assert_eq!(prob, 1.0);
        assert!(q.distance(&s).unwrap() < 1e-15);
    }

    #[test]
    fn empty_projection_is_impossible() {
        let s = StateVector::basis(layout(), &[bits("01"), bits("00"), bits("1")]).unwrap();
        assert!(matches!(s.project(&Subspace::basis("B", &[bits("11")])), Err(Error::ImpossibleOutcome(_))));
    }
}
