//! Haar averages of exact conditional expectations, checked by Monte Carlo.

use collisim::models::random_density_matrix;
use collisim::oracle::{
    conditional_expectation_gamma, conditional_expectation_lambda, conditional_expectation_m, delta_permutation_sum,
    dense_born_probabilities, dense_quasi_probabilities, gamma_operator, permutation_sum_xi, permutation_sum_zeta,
    permutation_sum_zeta_pt,
};
use collisim::qcore::matrix::{c64, kron_vec, quadratic, trace, CMat};
use collisim::qcore::{partial_trace_matrix, BipartitionSpec, ObservableSpec, QuantumState};
use collisim::randomness::{
    haar_unitary, sample_circuit, CircuitDescription, EnsembleKind, Gate, UnitaryEnsembleConfig,
};
use collisim::sampler::{ptme_joint_probabilities, ptme_joint_probabilities_bell};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Running {
    n: f64,
    sum: f64,
    sum_sq: f64,
}

impl Running {
    fn new() -> Self {
        Self { n: 0.0, sum: 0.0, sum_sq: 0.0 }
    }
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum_sq += x * x;
    }
    fn mean(&self) -> f64 {
        self.sum / self.n
    }
    fn se(&self) -> f64 {
        let m = self.mean();
        ((self.sum_sq / self.n - m * m).max(0.0) / (self.n - 1.0)).sqrt()
    }
    fn assert_near(&self, target: f64, what: &str) {
        let z = (self.mean() - target).abs() / self.se().max(1e-15);
        assert!(z < 5.0, "{what}: mean {} vs {target} ({z:.2} SE)", self.mean());
    }
}

#[test]
fn haar_average_of_collision_expectations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 4;
    let rho = random_density_matrix(d, 2, &mut rng);
    let o = ObservableSpec::pauli(2, &[(1.0, "XZ"), (0.4, "YY")]).unwrap().to_dense().unwrap();
    let mut m = [Running::new(), Running::new(), Running::new()];
    let mut g = [Running::new(), Running::new()];
    for _ in 0..6000 {
        let u = haar_unitary(d, &mut rng);
        let probs = dense_born_probabilities(&rho, &u);
        let quasi = dense_quasi_probabilities(&o, &u);
        for (i, acc) in m.iter_mut().enumerate() {
            acc.push(conditional_expectation_m(&probs, i + 2, d));
        }
        for (i, acc) in g.iter_mut().enumerate() {
            acc.push(conditional_expectation_gamma(&probs, &quasi, i + 1, d));
        }
    }
    for (i, acc) in m.iter().enumerate() {
        acc.assert_near(permutation_sum_zeta(&rho, i + 2).unwrap(), "M");
    }
    for (i, acc) in g.iter().enumerate() {
        acc.assert_near(permutation_sum_xi(&rho, &o, i + 1).unwrap(), "Γ");
    }
}

fn dense_circuit(u: CMat, n: usize) -> CircuitDescription {
    CircuitDescription::new(n, vec![vec![Gate::Global(u)]]).unwrap()
}

/// Two-copy Weingarten integral: the signed estimator is only asymptotically
/// unbiased, with an `O(1/d_A)` offset that this closed form captures.
#[test]
fn haar_average_of_signed_expectations() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let part = BipartitionSpec::contiguous(2, 1).unwrap();
    let rho = random_density_matrix(8, 2, &mut rng);
    let state = QuantumState::density(3, rho.clone()).unwrap();
    let mut acc = Running::new();
    for _ in 0..6000 {
        let c = dense_circuit(haar_unitary(part.d_a(), &mut rng), 2);
        let table = ptme_joint_probabilities(&state, &c, &part).unwrap();
        acc.push(conditional_expectation_lambda(table.probs(), 2, part.d_a(), part.d_a1()));
    }
    let purity = |m: &CMat| trace(&(m * m)).re;
    let p2 = purity(&rho);
    let pa = purity(&partial_trace_matrix(&rho, 3, &[0, 1]));
    let pb = purity(&partial_trace_matrix(&rho, 3, &[2]));
    let da = part.d_a() as f64;
    let wg_id = 1.0 / (da * da - 1.0);
    let wg_swap = -1.0 / (da * (da * da - 1.0));
    let exact = da * da / 2.0 * ((1.0 + p2) * wg_id + (pa + pb) * wg_swap);
    acc.assert_near(exact, "Λ₂");
    // The leading term is ζ^PT₂ itself.
    let zeta = permutation_sum_zeta_pt(&rho, &part, 2).unwrap();
    assert!((da * da / 2.0 * (1.0 + p2) * wg_id - zeta).abs() < 0.1);
}

#[test]
fn bell_measurement_table_matches_swap_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let part = BipartitionSpec::new(5, vec![0, 1, 3], vec![2, 4], vec![1, 3]).unwrap();
    let state = QuantumState::density(5, random_density_matrix(32, 3, &mut rng)).unwrap();
    let cfg = UnitaryEnsembleConfig::new(EnsembleKind::Brickwork { depth: None }, 3).unwrap();
    let c = sample_circuit(&cfg, &mut rng).unwrap();
    let a = ptme_joint_probabilities(&state, &c, &part).unwrap();
    let b = ptme_joint_probabilities_bell(&state, &c, &part).unwrap();
    for (x, y) in a.probs().iter().zip(b.probs()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn haar_average_of_two_copy_estimator() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let d = 2;
    let rho = random_density_matrix(d, 2, &mut rng);
    let o = random_density_matrix(d * d, d * d, &mut rng);
    let target = delta_permutation_sum(&rho, &o).unwrap();
    let kappa4 = (d * (d + 1) * (d + 2) * (d + 3)) as f64 / 24.0;
    let mut acc = Running::new();
    for _ in 0..20_000 {
        let u = haar_unitary(d, &mut rng);
        let probs = dense_born_probabilities(&rho, &u);
        let v: f64 = (0..d)
            .map(|b| {
                let w: Vec<c64> = (0..d).map(|j| u[(b, j)].conj()).collect();
                probs[b].powi(2) * quadratic(&o, &kron_vec(&w, &w)).re
            })
            .sum();
        acc.push(24.0 * kappa4 / d as f64 * v);
    }
    acc.assert_near(target, "Δ");
}

#[test]
fn haar_average_of_operator_estimator() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let d = 2;
    let rho = random_density_matrix(d, 2, &mut rng);
    let exact = gamma_operator(&rho, 2).unwrap();
    let kappa3 = (d * (d + 1) * (d + 2)) as f64 / 6.0;
    let mut acc: Vec<Running> = (0..4).map(|_| Running::new()).collect();
    for _ in 0..20_000 {
        let u = haar_unitary(d, &mut rng);
        let probs = dense_born_probabilities(&rho, &u);
        let mut m = [c64::new(0.0, 0.0); 4];
        for b in 0..d {
            let w: Vec<c64> = (0..d).map(|j| u[(b, j)].conj()).collect();
            for i in 0..d {
                for j in 0..d {
                    m[i * d + j] += w[i] * w[j].conj() * probs[b].powi(2) * (kappa3 / d as f64);
                }
            }
        }
        acc[0].push(m[0].re);
        acc[1].push(m[1].re);
        acc[2].push(m[1].im);
        acc[3].push(m[3].re);
    }
    acc[0].assert_near(exact[(0, 0)].re, "Υ00");
    acc[1].assert_near(exact[(0, 1)].re, "Υ01 re");
    acc[2].assert_near(exact[(0, 1)].im, "Υ01 im");
    acc[3].assert_near(exact[(1, 1)].re, "Υ11");
}
