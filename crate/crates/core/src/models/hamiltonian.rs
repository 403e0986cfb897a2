use faer::Mat;

use crate::error::{Error, Result};
use crate::qcore::matrix::{c64, eigh_real};
use crate::qcore::QuantumState;

/// Largest chain for which a dense Hamiltonian is built.
pub const MAX_HAMILTONIAN_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    /// `H = −J Σ X_i X_{i+1} − h Σ Z_i`.
    Tfim { j: f64, h: f64 },
    /// `H = −J Σ (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1})`.
    Heisenberg { j: f64 },
}

/// Open-boundary nearest-neighbour chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub model: Model,
    pub n_qubits: usize,
}

impl HamiltonianSpec {
    pub fn tfim(n_qubits: usize, j: f64, h: f64) -> Self {
        Self { model: Model::Tfim { j, h }, n_qubits }
    }

    pub fn heisenberg(n_qubits: usize, j: f64) -> Self {
        Self { model: Model::Heisenberg { j }, n_qubits }
    }
}

/// Dense real symmetric matrix of the chain (both models are real in the Z basis).
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Mat<f64>> {
    let n = spec.n_qubits;
    if n == 0 || n > MAX_HAMILTONIAN_QUBITS {
        return Err(Error::CapExceeded { what: "Hamiltonian qubits", n, max: MAX_HAMILTONIAN_QUBITS });
    }
    let d = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let z = |b: usize, q: usize| if b & bit(q) == 0 { 1.0 } else { -1.0 };
    let mut m = Mat::<f64>::zeros(d, d);
    for b in 0..d {
        match spec.model {
            Model::Tfim { j, h } => {
                m[(b, b)] -= h * (0..n).map(|q| z(b, q)).sum::<f64>();
                for q in 0..n - 1 {
                    let f = b ^ bit(q) ^ bit(q + 1);
                    m[(f, b)] -= j;
                }
            }
            Model::Heisenberg { j } => {
                for q in 0..n - 1 {
                    let zz = z(b, q) * z(b, q + 1);
                    m[(b, b)] -= j * zz;
                    let f = b ^ bit(q) ^ bit(q + 1);
                    // XX contributes 1 and YY contributes −Z_q Z_{q+1} on the flipped pair.
                    m[(f, b)] -= j * (1.0 - zz);
                }
            }
        }
    }
    Ok(m)
}

/// Eigendecomposition of a real symmetric Hamiltonian, energies ascending.
#[derive(Clone, Debug)]
pub struct SpectralHamiltonian {
    pub n_qubits: usize,
    pub energies: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl SpectralHamiltonian {
    pub fn new(h: &Mat<f64>) -> Result<Self> {
        let d = h.nrows();
        if !d.is_power_of_two() || h.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d.next_power_of_two(), found: d });
        }
        let (energies, vectors) = eigh_real(h)?;
        Ok(Self { n_qubits: d.trailing_zeros() as usize, energies, vectors })
    }

    /// Tolerance below which two energies count as degenerate.
    fn degeneracy_tol(&self) -> f64 {
        1e-9 * self.energies[0].abs().max(1.0)
    }

    /// Lowest-energy state; a degenerate ground space is resolved by projecting
    /// the lowest-index basis vector with nonzero overlap onto it, and the
    /// largest-magnitude amplitude is made positive.
    pub fn ground_state(&self) -> Result<QuantumState> {
        let d = self.energies.len();
        let e0 = self.energies[0];
        let g = self.energies.iter().take_while(|&&e| e - e0 <= self.degeneracy_tol()).count();
        let mut v = vec![0.0; d];
        if g == 1 {
            v.copy_from_slice(self.vectors.col_as_slice(0));
        } else {
            let m = (0..d)
                .find(|&m| (0..g).map(|c| self.vectors[(m, c)].powi(2)).sum::<f64>() > 1e-12)
                .expect("ground space is nonzero");
            for c in 0..g {
                let overlap = self.vectors[(m, c)];
                for (vi, ui) in v.iter_mut().zip(self.vectors.col_as_slice(c)) {
                    *vi += overlap * ui;
                }
            }
        }
        let (imax, _) =
            v.iter().enumerate().fold((0, 0.0f64), |acc, (i, x)| if x.abs() > acc.1.abs() { (i, *x) } else { acc });
        let sign = if v[imax] < 0.0 { -1.0 } else { 1.0 };
        let amps = v.iter().map(|x| c64::new(sign * x, 0.0)).collect();
        QuantumState::pure_normalized(self.n_qubits, amps)
    }

    /// Normalized Boltzmann weights `e^{−β(E_i − E_0)}/Z`.
    pub fn boltzmann_weights(&self, beta: f64) -> Vec<f64> {
        let e0 = self.energies[0];
        let w: Vec<f64> = self.energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    /// `e^{−βH}/Z` held as a mixture over the eigenbasis.
    pub fn gibbs_state(&self, beta: f64) -> Result<QuantumState> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidConfig(format!("inverse temperature must be finite and ≥ 0, got {beta}")));
        }
        let d = self.energies.len();
        let vectors = Mat::from_fn(d, d, |i, j| c64::new(self.vectors[(i, j)], 0.0));
        let mut weights = self.boltzmann_weights(beta);
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        QuantumState::mixture(self.n_qubits, weights, vectors, 0.0)
    }

    /// `Tr(Hρ)` of the Gibbs state.
    pub fn gibbs_energy(&self, beta: f64) -> f64 {
        self.boltzmann_weights(beta).iter().zip(&self.energies).map(|(w, e)| w * e).sum()
    }
}

pub fn ground_state(h: &Mat<f64>) -> Result<QuantumState> {
    SpectralHamiltonian::new(h)?.ground_state()
}

pub fn gibbs_state(h: &Mat<f64>, beta: f64) -> Result<QuantumState> {
    SpectralHamiltonian::new(h)?.gibbs_state(beta)
}
