use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::matrix::{self, c64};
use crate::qcore::{quadratic_form, tensor_product, ObservableKind, ObservableSpec, QuantumState};
use crate::randomness::{apply_circuit, CircuitDescription};

const NEG_CLAMP: f64 = 1e-10;
const SUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeSpace {
    /// Computational basis of dimension `d`.
    Basis { d: usize },
    /// Pairs `(b, r)` with `b < d_a1`, stored at index `2b + s` where `s = 0`
    /// means `r = +1` and `s = 1` means `r = −1`.
    Joint { d_a1: usize },
}

impl OutcomeSpace {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match *self {
            Self::Basis { d } => d,
            Self::Joint { d_a1 } => 2 * d_a1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbabilityTable {
    probs: Vec<f64>,
    space: OutcomeSpace,
}

impl ProbabilityTable {
    /// Clamps round-off negatives and renormalizes a total that is off by at most `1e-9`.
    pub fn new(mut probs: Vec<f64>, space: OutcomeSpace) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: probs.len() });
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -NEG_CLAMP {
                return Err(Error::InvalidState(format!("invalid probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Normalization(total));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Self { probs, space })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn space(&self) -> OutcomeSpace {
        self.space
    }

    /// For a joint table, `(Pr(+, b), Pr(−, b))`.
    pub fn joint(&self, b: usize) -> Option<(f64, f64)> {
        match self.space {
            OutcomeSpace::Joint { .. } => Some((self.probs[2 * b], self.probs[2 * b + 1])),
            OutcomeSpace::Basis { .. } => None,
        }
    }

    /// Distribution of `b` alone (the identity for basis tables).
    pub fn marginal(&self) -> Vec<f64> {
        match self.space {
            OutcomeSpace::Basis { .. } => self.probs.clone(),
            OutcomeSpace::Joint { .. } => self.probs.chunks(2).map(|c| c[0] + c[1]).collect(),
        }
    }
}

/// Measurement record of one unitary: outcomes and, in the PT protocol, signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeBatch {
    pub b_values: Vec<u32>,
    pub r_signs: Option<Vec<i8>>,
    pub unitary_index: usize,
}

impl OutcomeBatch {
    pub fn unsigned(b_values: Vec<u32>) -> Self {
        Self { b_values, r_signs: None, unitary_index: 0 }
    }

    pub fn signed(b_values: Vec<u32>, r_signs: Vec<i8>) -> Result<Self> {
        if b_values.len() != r_signs.len() || r_signs.iter().any(|&r| r != 1 && r != -1) {
            return Err(Error::InvalidConfig("signs must be ±1, one per outcome".into()));
        }
        Ok(Self { b_values, r_signs: Some(r_signs), unitary_index: 0 })
    }

    pub fn len(&self) -> usize {
        self.b_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_values.is_empty()
    }
}

/// Computational-basis distribution of a state that has already been rotated.
pub fn probabilities_of(state: &QuantumState) -> Result<ProbabilityTable> {
    ProbabilityTable::new(state.diagonal(), OutcomeSpace::Basis { d: state.dim() })
}

/// `Pr(b|U) = ⟨b|UρU†|b⟩`.
pub fn born_probabilities(state: &QuantumState, circuit: &CircuitDescription) -> Result<ProbabilityTable> {
    probabilities_of(&apply_circuit(state, circuit)?)
}

/// Inverse-CDF sampling of `n_samples` i.i.d. outcomes.
pub fn sample_outcomes<R: Rng + ?Sized>(table: &ProbabilityTable, n_samples: usize, rng: &mut R) -> OutcomeBatch {
    let mut cdf = Vec::with_capacity(table.probs.len());
    let mut acc = 0.0;
    for &p in &table.probs {
        acc += p;
        cdf.push(acc);
    }
    let last_nonzero = table.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let draw = |rng: &mut R| -> usize {
        let u = rng.random::<f64>() * acc;
        cdf.partition_point(|&c| c <= u).min(last_nonzero)
    };
    match table.space {
        OutcomeSpace::Basis { .. } => {
            let b_values = (0..n_samples).map(|_| draw(rng) as u32).collect();
            OutcomeBatch::unsigned(b_values)
        }
        OutcomeSpace::Joint { .. } => {
            let mut b_values = Vec::with_capacity(n_samples);
            let mut r_signs = Vec::with_capacity(n_samples);
            for _ in 0..n_samples {
                let x = draw(rng);
                b_values.push((x / 2) as u32);
                r_signs.push(if x % 2 == 0 { 1 } else { -1 });
            }
            OutcomeBatch { b_values, r_signs: Some(r_signs), unitary_index: 0 }
        }
    }
}

fn check_register(o: &ObservableSpec, circuit: &CircuitDescription) -> Result<()> {
    if o.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), found: o.n_qubits() });
    }
    Ok(())
}

/// `⟨b|UOU†|b⟩ = v†Ov` with `v = U†|b⟩`.
pub fn quasi_probability(o: &ObservableSpec, circuit: &CircuitDescription, b: usize) -> Result<f64> {
    Ok(quasi_probabilities(o, circuit, &[b])?[0])
}

/// Quasi-probabilities for a list of (typically distinct) outcomes.
///
/// Each outcome costs one adjoint-circuit application; projectors are
/// handled by rotating their single vector instead.
pub fn quasi_probabilities(o: &ObservableSpec, circuit: &CircuitDescription, outcomes: &[usize]) -> Result<Vec<f64>> {
    check_register(o, circuit)?;
    let n = o.n_qubits();
    let d = o.dim();
    if let Some(&bad) = outcomes.iter().find(|&&b| b >= d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad });
    }
    let targets: Vec<usize> = (0..n).collect();
    match o.kind() {
        ObservableKind::Identity => Ok(vec![1.0; outcomes.len()]),
        ObservableKind::RankOneProjector(psi) => {
            let mut w = psi.clone();
            circuit.apply_to_vector(&mut w, n, &targets);
            Ok(outcomes.iter().map(|&b| w[b].norm_sqr()).collect())
        }
        ObservableKind::ZeroExtended { base, n_a } if outcomes.len() > base.dim() => {
            // ⟨b|U(O ⊗ P₀)U†|b⟩ = x†Ox with x_j = conj⟨b|U|j,0⟩, so rotating the
            // embedded system basis once serves every outcome.
            let d_sys = base.dim();
            let mut cols = Vec::with_capacity(d_sys);
            for j in 0..d_sys {
                let mut w = vec![c64::new(0.0, 0.0); d];
                w[j << n_a] = matrix::ONE;
                circuit.apply_to_vector(&mut w, n, &targets);
                cols.push(w);
            }
            let mut x = vec![c64::new(0.0, 0.0); d_sys];
            Ok(outcomes
                .iter()
                .map(|&b| {
                    x.iter_mut().zip(&cols).for_each(|(xj, c)| *xj = c[b].conj());
                    base.quadratic_raw(&x).re
                })
                .collect())
        }
        _ => {
            let adj = circuit.adjoint();
            let mut v = vec![c64::new(0.0, 0.0); d];
            outcomes
                .iter()
                .map(|&b| {
                    v.iter_mut().for_each(|x| *x = c64::new(0.0, 0.0));
                    v[b] = matrix::ONE;
                    adj.apply_to_vector(&mut v, n, &targets);
                    quadratic_form(o, &v)
                })
                .collect()
        }
    }
}

/// `(ρ ⊗ |0…0⟩⟨0…0|, O ⊗ |0…0⟩⟨0…0|)` with `n_a` ancilla qubits appended.
pub fn extend_with_ancillas(
    state: &QuantumState,
    o: &ObservableSpec,
    n_a: usize,
) -> Result<(QuantumState, ObservableSpec)> {
    if o.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), found: o.n_qubits() });
    }
    if n_a == 0 {
        return Ok((state.clone(), o.clone()));
    }
    let anc = QuantumState::basis(n_a, 0)?;
    Ok((tensor_product(state, &anc)?, o.extend_with_zero_projector(n_a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_table_always_hits_its_support() {
        let t = ProbabilityTable::new(vec![1.0, 0.0, 0.0, 0.0], OutcomeSpace::Basis { d: 4 }).unwrap();
        let b = sample_outcomes(&t, 1000, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(b.b_values.iter().all(|&x| x == 0));
    }

    #[test]
    fn zero_weight_tail_is_never_sampled() {
        let t = ProbabilityTable::new(vec![0.0, 0.5, 0.5, 0.0], OutcomeSpace::Basis { d: 4 }).unwrap();
        let b = sample_outcomes(&t, 10_000, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(b.b_values.iter().all(|&x| x == 1 || x == 2));
    }

    #[test]
    fn clamps_tiny_negatives() {
        let t = ProbabilityTable::new(vec![-1e-12, 1.0 + 1e-12], OutcomeSpace::Basis { d: 2 }).unwrap();
        assert_eq!(t.probs()[0], 0.0);
        assert!(ProbabilityTable::new(vec![-1e-3, 1.001], OutcomeSpace::Basis { d: 2 }).is_err());
    }

    #[test]
    fn zero_extended_quasi_probabilities_match_dense() {
        use crate::randomness::{sample_circuit, EnsembleKind, UnitaryEnsembleConfig};
        let o = ObservableSpec::pauli(2, &[(1.0, "XY"), (0.5, "ZI"), (0.25, "II")]).unwrap();
        let ext = o.extend_with_zero_projector(2).unwrap();
        let dense = ObservableSpec::dense(4, ext.to_dense().unwrap()).unwrap();
        assert!((ext.trace() - dense.trace()).abs() < 1e-12);
        assert!((ext.frobenius_sq() - dense.frobenius_sq()).abs() < 1e-12);
        let cfg = UnitaryEnsembleConfig::new(EnsembleKind::Brickwork { depth: None }, 4).unwrap();
        let c = sample_circuit(&cfg, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let all: Vec<usize> = (0..16).collect();
        let expect = quasi_probabilities(&dense, &c, &all).unwrap();
        // Sixteen outcomes take the batched route, three the per-outcome one.
        let batched = quasi_probabilities(&ext, &c, &all).unwrap();
        let single = quasi_probabilities(&ext, &c, &[3, 7, 12]).unwrap();
        for (a, b) in batched.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in single.iter().zip([3, 7, 12]) {
            assert!((a - expect[b]).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_circuit_quasi_probability_is_diagonal() {
        let o = ObservableSpec::pauli(2, &[(1.0, "ZI"), (0.5, "XX")]).unwrap();
        let c = CircuitDescription::identity(2);
        let q = quasi_probabilities(&o, &c, &[0, 1, 2, 3]).unwrap();
        assert_eq!(q, vec![1.0, 1.0, -1.0, -1.0]);
    }
}
