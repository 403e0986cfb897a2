use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qcore::matrix::{self, c64, CMat, ZERO};
use crate::qcore::{ObservableSpec, PauliString, PauliTerm, QuantumState, Representation};

/// `(1 − p)ρ + p I/d` for a statevector or a mixture.
pub fn depolarize(state: &QuantumState, p: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("depolarizing strength {p} outside [0, 1]")));
    }
    match state.repr() {
        Representation::Pure(v) => {
            let col = Mat::from_fn(v.len(), 1, |i, _| v[i]);
            QuantumState::mixture(state.n_qubits(), vec![1.0 - p], col, p)
        }
        Representation::Mixture(m) => {
            let w = m.weights.iter().map(|w| (1.0 - p) * w).collect();
            state.with_mixture_weights(w, (1.0 - p) * m.white + p)
        }
        Representation::Density(_) => Err(Error::InvalidState("depolarize expects a statevector or mixture".into())),
    }
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> QuantumState {
    ghz_state(2).expect("two qubits fit")
}

pub fn ghz_state(n: usize) -> Result<QuantumState> {
    if n == 0 {
        return Err(Error::InvalidConfig("GHZ state needs at least one qubit".into()));
    }
    let d = 1usize << n;
    let mut v = vec![ZERO; d];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[0] = c64::new(h, 0.0);
    v[d - 1] = c64::new(h, 0.0);
    QuantumState::pure(n, v)
}

fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<c64> {
    (0..d).map(|_| c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuantumState> {
    crate::qcore::check_pure_cap(n)?;
    QuantumState::pure_normalized(n, gaussian_vector(1 << n, rng))
}

/// Tensor product of independent Haar-random single-qubit states.
pub fn product_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuantumState> {
    let mut v = vec![c64::new(1.0, 0.0)];
    for _ in 0..n {
        let mut q = gaussian_vector(2, rng);
        let norm = matrix::norm_sqr(&q).sqrt();
        q.iter_mut().for_each(|x| *x /= norm);
        v = matrix::kron_vec(&v, &q);
    }
    QuantumState::pure_normalized(n, v)
}

/// `GG†/Tr(GG†)` for a `d × rank` complex Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let g = Mat::from_fn(d, rank.max(1), |_, _| c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let mut rho = &g * g.adjoint();
    let tr = matrix::trace(&rho).re;
    rho = matrix::scale(&rho, 1.0 / tr);
    matrix::symmetrize(&mut rho);
    rho
}

/// Random full-rank mixed state on `n` qubits.
pub fn random_mixed<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuantumState> {
    crate::qcore::check_dense_cap(n)?;
    let d = 1usize << n;
    QuantumState::density(n, random_density_matrix(d, d, rng))
}

/// `Σ_i w_i ρ_A^i ⊗ ρ_B^i` with random single-qubit mixed factors.
pub fn random_separable_two_qubit<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> Result<QuantumState> {
    let w: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let mut rho: CMat = Mat::zeros(4, 4);
    for wi in w {
        let a = random_density_matrix(2, 2, rng);
        let b = random_density_matrix(2, 2, rng);
        rho += matrix::scale(&matrix::kron(&a, &b), wi / total);
    }
    matrix::symmetrize(&mut rho);
    QuantumState::density(2, rho)
}

/// Uniformly random non-identity Pauli string with unit coefficient.
pub fn random_pauli_observable<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ObservableSpec> {
    loop {
        let s: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
        let p = PauliString::parse(&s)?;
        if !p.is_identity() {
            return ObservableSpec::pauli_sum(n, vec![PauliTerm { coeff: 1.0, string: p }]);
        }
    }
}

/// `λ₁|ψ⟩⟨ψ| + λ₂|φ⟩⟨φ| + (1 − λ₁ − λ₂) I/d` with random orthonormal `ψ, φ`;
/// the top two eigenvalues differ by exactly `λ₁ − λ₂`.
pub fn gapped_state<R: Rng + ?Sized>(n: usize, lambda1: f64, lambda2: f64, rng: &mut R) -> Result<QuantumState> {
    crate::qcore::check_pure_cap(n)?;
    let d = 1usize << n;
    let white = 1.0 - lambda1 - lambda2;
    if lambda2 < 0.0 || lambda1 < lambda2 || white < 0.0 {
        return Err(Error::InvalidConfig("need λ₁ ≥ λ₂ ≥ 0 and λ₁ + λ₂ ≤ 1".into()));
    }
    let psi = gaussian_vector(d, rng);
    let mut phi = gaussian_vector(d, rng);
    let psi_n = matrix::norm_sqr(&psi).sqrt();
    let psi: Vec<c64> = psi.iter().map(|x| x / psi_n).collect();
    let ov = matrix::inner(&psi, &phi);
    phi.iter_mut().zip(&psi).for_each(|(f, p)| *f -= p * ov);
    let phi_n = matrix::norm_sqr(&phi).sqrt();
    let vectors = Mat::from_fn(d, 2, |i, j| if j == 0 { psi[i] } else { phi[i] / phi_n });
    QuantumState::mixture(n, vec![lambda1, lambda2], vectors, white)
}

/// The dominant eigenvector of a mixture built by [`gapped_state`].
pub fn principal_vector(state: &QuantumState) -> Option<Vec<c64>> {
    match state.repr() {
        Representation::Pure(v) => Some(v.clone()),
        Representation::Mixture(m) => {
            let (k, _) = m.weights.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
            Some(m.vectors.col_as_slice(k).to_vec())
        }
        Representation::Density(_) => None,
    }
}
