//! Closed forms and inversions against permutation sums evaluated by brute force.

use collisim::estimators::ObservableMode;
use collisim::inversion::{
    assemble_gamma, moments_from_zeta, observable_powers_from_xi, powers_from_gamma, pt_moments_from_zeta, xi_from,
    zeta_from_moments, MomentSet,
};
use collisim::models::random_density_matrix;
use collisim::oracle::{
    delta_permutation_sum, exp_delta_rhs, gamma_operator, permutation_sum_xi, permutation_sum_zeta,
    permutation_sum_zeta_pt, zeta_pt_explicit,
};
use collisim::qcore::matrix::{identity, matpow, max_abs_diff, scale, trace, CMat};
use collisim::qcore::{
    exact_observable_powers_from_zero, exact_pt_moments, exact_spectral_moments, BipartitionSpec, ObservableSpec,
    QuantumState,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn moments_of(rho: &CMat, t: usize) -> MomentSet {
    let all: Vec<f64> = (1..=t).map(|k| trace(&matpow(rho, k)).re).collect();
    MomentSet::from_all(&all).unwrap()
}

#[test]
fn zeta_closed_form_matches_permutation_sum() {
    let mut r = rng(1);
    for d in [2usize, 4, 8] {
        for rank in [1, 2, d] {
            let rho = random_density_matrix(d, rank, &mut r);
            let p = moments_of(&rho, 6);
            for k in 1..=6 {
                let exact = permutation_sum_zeta(&rho, k).unwrap();
                assert!((zeta_from_moments(&p, k).unwrap() - exact).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn inversion_recovers_moments_from_exact_zetas() {
    let mut r = rng(2);
    for d in 2..=8usize {
        let rho = random_density_matrix(d, d, &mut r);
        let zeta: Vec<f64> = (2..=5).map(|k| permutation_sum_zeta(&rho, k).unwrap()).collect();
        let back = moments_from_zeta(&zeta).unwrap();
        let p = moments_of(&rho, 5);
        for k in 1..=5 {
            assert!((back.get(k).unwrap() - p.get(k).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn third_order_zeta_weights() {
    // ζ₃ = 1/6 + p₂/2 + p₃/3 for every state.
    let mut r = rng(3);
    for d in [2usize, 3, 5, 8] {
        let rho = random_density_matrix(d, 2.min(d), &mut r);
        let p = moments_of(&rho, 3);
        let expect = 1.0 / 6.0 + p.get(2).unwrap() / 2.0 + p.get(3).unwrap() / 3.0;
        assert!((permutation_sum_zeta(&rho, 3).unwrap() - expect).abs() < 1e-13);
    }
}

#[test]
fn xi_closed_form_and_inversion() {
    let mut r = rng(4);
    for d in [2usize, 4, 8] {
        let rho = random_density_matrix(d, d, &mut r);
        let o = random_density_matrix(d, d, &mut r) - scale(&identity(d), 0.1);
        let p = moments_of(&rho, 5);
        let o_pows: Vec<f64> = (0..=5).map(|l| trace(&(&o * matpow(&rho, l))).re).collect();
        let mut xi = Vec::new();
        for k in 1..=5 {
            let exact = permutation_sum_xi(&rho, &o, k).unwrap();
            assert!((xi_from(&p, &o_pows, k).unwrap() - exact).abs() < 1e-12);
            xi.push(exact);
        }
        let back = observable_powers_from_xi(&xi, &p, o_pows[0], d, ObservableMode::Full).unwrap();
        for k in 1..=5 {
            assert!((back[k - 1] - o_pows[k]).abs() < 1e-9);
        }
        // The traceless route applied to O₀ lands on the same answer.
        let o0 = &o - scale(&identity(d), o_pows[0] / d as f64);
        let xi0: Vec<f64> = (1..=5).map(|k| permutation_sum_xi(&rho, &o0, k).unwrap()).collect();
        let back0 = observable_powers_from_xi(&xi0, &p, o_pows[0], d, ObservableMode::Traceless).unwrap();
        for k in 1..=5 {
            assert!((back0[k - 1] - o_pows[k]).abs() < 1e-9);
        }
    }
}

#[test]
fn gamma_operator_expansion_and_inversion() {
    let mut r = rng(5);
    let rho = random_density_matrix(4, 3, &mut r);
    let p = moments_of(&rho, 4);
    let pw: Vec<CMat> = (0..=4).map(|l| matpow(&rho, l)).collect();
    let mut gammas = Vec::new();
    for k in 1..=4 {
        let exact = gamma_operator(&rho, k).unwrap();
        assert!(max_abs_diff(&assemble_gamma(k, &p, &pw).unwrap(), &exact) < 1e-12);
        gammas.push(exact);
    }
    let back = powers_from_gamma(&gammas, &p).unwrap();
    for k in 1..=4 {
        assert!(max_abs_diff(&back[k - 1], &pw[k]) < 1e-9);
    }
    // Low orders in closed form.
    let one = identity(4);
    let rho1 = scale(&gammas[0], 2.0) - &one;
    assert!(max_abs_diff(&rho1, &rho) < 1e-12);
    let p2 = p.get(2).unwrap();
    let rho2 = scale(&gammas[1], 3.0) - scale(&gammas[0], 2.0) + scale(&one, (1.0 - p2) / 2.0);
    assert!(max_abs_diff(&rho2, &pw[2]) < 1e-12);
}

#[test]
fn partial_transpose_sums_agree() {
    let mut r = rng(6);
    let parts = [
        BipartitionSpec::contiguous(1, 1).unwrap(),
        BipartitionSpec::contiguous(2, 1).unwrap(),
        BipartitionSpec::new(3, vec![0, 2], vec![1], vec![2]).unwrap(),
        BipartitionSpec::contiguous(2, 2).unwrap(),
    ];
    for part in &parts {
        let d = 1 << part.n_qubits();
        let rho = random_density_matrix(d, 2, &mut r);
        for k in 1..=3 {
            let a = permutation_sum_zeta_pt(&rho, part, k).unwrap();
            let b = zeta_pt_explicit(&rho, part, k).unwrap();
            assert!((a - b).abs() < 1e-12, "k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn pt_inversion_recovers_negativity_moments() {
    let mut r = rng(7);
    let part = BipartitionSpec::contiguous(2, 1).unwrap();
    let rho = random_density_matrix(8, 2, &mut r);
    let state = QuantumState::density(3, rho.clone()).unwrap();
    let zeta: Vec<f64> = (2..=5).map(|k| permutation_sum_zeta_pt(&rho, &part, k).unwrap()).collect();
    let back = pt_moments_from_zeta(&zeta).unwrap();
    let exact = exact_pt_moments(&state, &part, 5).unwrap();
    for k in 1..=5 {
        assert!((back.get(k).unwrap() - exact[k - 1]).abs() < 1e-9);
    }
}

#[test]
fn eleven_term_delta_expression() {
    let mut r = rng(8);
    for (d, n) in [(2usize, 1usize), (4, 2)] {
        let rho = random_density_matrix(d, d, &mut r);
        let o = random_density_matrix(d * d, d * d, &mut r);
        let a = delta_permutation_sum(&rho, &o).unwrap();
        let b = exp_delta_rhs(&rho, &o).unwrap();
        assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
    }
}

#[test]
fn exact_helpers_agree_with_dense_powers() {
    let mut r = rng(9);
    let rho = random_density_matrix(8, 3, &mut r);
    let state = QuantumState::density(3, rho.clone()).unwrap();
    let p = exact_spectral_moments(&state, 4).unwrap();
    let o = ObservableSpec::pauli(3, &[(1.0, "XZY"), (0.5, "IIZ")]).unwrap();
    let od = o.to_dense().unwrap();
    let op = exact_observable_powers_from_zero(&state, &o, 4).unwrap();
    for k in 1..=4 {
        assert!((p[k - 1] - trace(&matpow(&rho, k)).re).abs() < 1e-12);
        assert!((op[k] - trace(&(&od * matpow(&rho, k))).re).abs() < 1e-12);
    }
}
