use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qcore::gates::{apply_multi_qubit, apply_two_qubit};
use crate::qcore::matrix::{c64, identity, CMat};
use crate::qcore::{check_dense_cap, Mixture, QuantumState, Representation};

/// Largest register on which a single dense Haar unitary is sampled.
pub const MAX_GLOBAL_HAAR_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    GlobalHaar,
    /// `None` means the default depth of `2n` layers.
    Brickwork {
        depth: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitaryEnsembleConfig {
    pub kind: EnsembleKind,
    pub n_qubits: usize,
}

impl UnitaryEnsembleConfig {
    pub fn new(kind: EnsembleKind, n_qubits: usize) -> Result<Self> {
        let c = Self { kind, n_qubits };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidConfig("ensemble needs at least one qubit".into()));
        }
        match self.kind {
            EnsembleKind::GlobalHaar if self.n_qubits > MAX_GLOBAL_HAAR_QUBITS => {
                Err(Error::CapExceeded { what: "global Haar qubits", n: self.n_qubits, max: MAX_GLOBAL_HAAR_QUBITS })
            }
            EnsembleKind::Brickwork { depth: Some(0) } => {
                Err(Error::InvalidConfig("brickwork depth must be ≥ 1".into()))
            }
            EnsembleKind::Brickwork { .. } if self.n_qubits < 2 => {
                Err(Error::InvalidConfig("brickwork circuits need at least two qubits".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn depth(&self) -> usize {
        match self.kind {
            EnsembleKind::GlobalHaar => 1,
            EnsembleKind::Brickwork { depth } => depth.unwrap_or(2 * self.n_qubits),
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Gate {
    /// 4×4 column-major gate on local qubits `(first, first + 1)`.
    TwoQubit { first: usize, matrix: [c64; 16] },
    /// Dense unitary on the whole local register.
    Global(CMat),
}

impl Gate {
    fn adjoint(&self) -> Gate {
        match self {
            Gate::TwoQubit { first, matrix } => {
                let mut m = [c64::new(0.0, 0.0); 16];
                for r in 0..4 {
                    for c in 0..4 {
                        m[r + 4 * c] = matrix[c + 4 * r].conj();
                    }
                }
                Gate::TwoQubit { first: *first, matrix: m }
            }
            Gate::Global(u) => Gate::Global(u.adjoint().to_owned()),
        }
    }
}

/// Ordered layers of gates on `n_qubits` local qubits.
#[derive(Clone, Debug)]
pub struct CircuitDescription {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

impl CircuitDescription {
    pub fn new(n_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        for g in layers.iter().flatten() {
            match g {
                Gate::TwoQubit { first, .. } if first + 1 >= n_qubits => {
                    return Err(Error::InvalidConfig(format!("gate on qubit {} exceeds register", first + 1)));
                }
                Gate::Global(u) if u.nrows() != 1 << n_qubits => {
                    return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: u.nrows() });
                }
                _ => {}
            }
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, layers: vec![] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Reversed layers with every gate replaced by its adjoint.
    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            layers: self.layers.iter().rev().map(|l| l.iter().map(Gate::adjoint).collect()).collect(),
        }
    }

    fn is_global_on_all(&self, targets: &[usize], n_total: usize) -> bool {
        targets.len() == n_total && targets.iter().enumerate().all(|(i, &q)| i == q)
    }

    /// Applies the circuit to an `n_total`-qubit statevector; local qubit `k`
    /// acts on register qubit `targets[k]`.
    pub fn apply_to_vector(&self, amps: &mut [c64], n_total: usize, targets: &[usize]) {
        debug_assert_eq!(targets.len(), self.n_qubits);
        for layer in &self.layers {
            for g in layer {
                match g {
                    Gate::TwoQubit { first, matrix } => {
                        apply_two_qubit(amps, n_total, targets[*first], targets[first + 1], matrix)
                    }
                    Gate::Global(u) => apply_multi_qubit(amps, n_total, targets, u),
                }
            }
        }
    }

    /// Applies the circuit to every column of `cols`.
    pub fn apply_to_columns(&self, cols: &mut CMat, n_total: usize, targets: &[usize]) {
        let dense_fast = self.is_global_on_all(targets, n_total);
        for layer in &self.layers {
            for g in layer {
                match g {
                    Gate::Global(u) if dense_fast => *cols = u * &*cols,
                    _ => {
                        for j in 0..cols.ncols() {
                            let col = cols.col_as_slice_mut(j);
                            match g {
                                Gate::TwoQubit { first, matrix } => {
                                    apply_two_qubit(col, n_total, targets[*first], targets[first + 1], matrix)
                                }
                                Gate::Global(u) => apply_multi_qubit(col, n_total, targets, u),
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix,
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    assert!(dim >= 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = Mat::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64::new(re * s, im * s)
    });
    let qr = g.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { c64::new(1.0, 0.0) };
        for x in q.col_as_slice_mut(j) {
            *x *= phase;
        }
    }
    q
}

fn haar_gate<R: Rng + ?Sized>(rng: &mut R) -> [c64; 16] {
    let u = haar_unitary(4, rng);
    let mut m = [c64::new(0.0, 0.0); 16];
    for c in 0..4 {
        for r in 0..4 {
            m[r + 4 * c] = u[(r, c)];
        }
    }
    m
}

/// Brickwork: odd layers (1st, 3rd, …) act on `(0,1),(2,3),…`, even layers on
/// `(1,2),(3,4),…`; every gate is independently Haar on `U(4)`.
pub fn sample_circuit<R: Rng + ?Sized>(config: &UnitaryEnsembleConfig, rng: &mut R) -> Result<CircuitDescription> {
    config.validate()?;
    let n = config.n_qubits;
    let layers = match config.kind {
        EnsembleKind::GlobalHaar => vec![vec![Gate::Global(haar_unitary(1 << n, rng))]],
        EnsembleKind::Brickwork { .. } => (0..config.depth())
            .map(|layer| {
                let start = layer % 2;
                (start..n.saturating_sub(1))
                    .step_by(2)
                    .map(|first| Gate::TwoQubit { first, matrix: haar_gate(rng) })
                    .collect()
            })
            .collect(),
    };
    Ok(CircuitDescription { n_qubits: n, layers })
}

/// `UρU†` for a circuit spanning the whole register.
pub fn apply_circuit(state: &QuantumState, circuit: &CircuitDescription) -> Result<QuantumState> {
    if circuit.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), found: circuit.n_qubits() });
    }
    let targets: Vec<usize> = (0..circuit.n_qubits()).collect();
    apply_circuit_on(state, circuit, &targets)
}

/// Applies a circuit whose local qubit `k` acts on register qubit `targets[k]`.
pub fn apply_circuit_on(state: &QuantumState, circuit: &CircuitDescription, targets: &[usize]) -> Result<QuantumState> {
    let n = state.n_qubits();
    if targets.len() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), found: targets.len() });
    }
    let mut seen = vec![false; n];
    for &q in targets {
        if q >= n || seen[q] {
            return Err(Error::InvalidConfig(format!("circuit target qubit {q} out of range or repeated")));
        }
        seen[q] = true;
    }
    let repr = match state.repr() {
        Representation::Pure(v) => {
            let mut w = v.clone();
            circuit.apply_to_vector(&mut w, n, targets);
            Representation::Pure(w)
        }
        Representation::Density(rho) => {
            let mut m = rho.clone();
            circuit.apply_to_columns(&mut m, n, targets);
            let mut m = m.adjoint().to_owned();
            circuit.apply_to_columns(&mut m, n, targets);
            crate::qcore::matrix::symmetrize(&mut m);
            Representation::Density(m)
        }
        Representation::Mixture(mix) => {
            let mut v = mix.vectors.clone();
            circuit.apply_to_columns(&mut v, n, targets);
            Representation::Mixture(Mixture { weights: mix.weights.clone(), vectors: v, white: mix.white })
        }
    };
    Ok(QuantumState::from_repr_unchecked(n, repr))
}

/// Dense matrix of the whole circuit.
pub fn circuit_to_matrix(circuit: &CircuitDescription) -> Result<CMat> {
    let n = circuit.n_qubits();
    check_dense_cap(n)?;
    let mut m = identity(1 << n);
    let targets: Vec<usize> = (0..n).collect();
    circuit.apply_to_columns(&mut m, n, &targets);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn brickwork_layout_for_four_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sample_circuit(
            &UnitaryEnsembleConfig::new(EnsembleKind::Brickwork { depth: Some(2) }, 4).unwrap(),
            &mut rng,
        )
        .unwrap();
        let firsts: Vec<Vec<usize>> = c
            .layers()
            .iter()
            .map(|l| l.iter().map(|g| if let Gate::TwoQubit { first, .. } = g { *first } else { usize::MAX }).collect())
            .collect();
        assert_eq!(firsts, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn default_depth_is_twice_qubits() {
        let c = UnitaryEnsembleConfig::new(EnsembleKind::Brickwork { depth: None }, 5).unwrap();
        assert_eq!(c.depth(), 10);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_unitary(2, &mut rng);
        let uu = u.adjoint() * &u;
        assert!(max_abs_diff(&uu, &identity(2)) < 1e-12);
    }

    #[test]
    fn global_haar_cap() {
        assert!(matches!(UnitaryEnsembleConfig::new(EnsembleKind::GlobalHaar, 13), Err(Error::CapExceeded { .. })));
    }
}
