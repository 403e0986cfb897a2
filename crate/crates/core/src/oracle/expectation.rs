//! Exact conditional expectations of the estimators given a fixed unitary.

use crate::qcore::matrix::{c64, CMat};

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `diag(UρU†)` by dense conjugation.
pub fn dense_born_probabilities(rho: &CMat, u: &CMat) -> Vec<f64> {
    let ur = u * rho;
    let d = rho.nrows();
    (0..d).map(|b| (0..d).map(|j| ur[(b, j)] * u[(b, j)].conj()).sum::<c64>().re).collect()
}

/// `diag(UOU†)` by dense conjugation.
pub fn dense_quasi_probabilities(o: &CMat, u: &CMat) -> Vec<f64> {
    dense_born_probabilities(o, u)
}

/// `E[M̂_k | U] = (κ_k/d) Σ_b Pr(b|U)^k`.
pub fn conditional_expectation_m(probs: &[f64], k: usize, d: usize) -> f64 {
    binom(k + d - 1, k) / d as f64 * probs.iter().map(|p| p.powi(k as i32)).sum::<f64>()
}

/// `E[Γ̂_k | U] = (κ_{k+1}/d) Σ_b Pr(b|U)^k ⟨b|UOU†|b⟩`.
pub fn conditional_expectation_gamma(probs: &[f64], quasi: &[f64], k: usize, d: usize) -> f64 {
    binom(k + d, k + 1) / d as f64 * probs.iter().zip(quasi).map(|(p, q)| p.powi(k as i32) * q).sum::<f64>()
}

/// `E[Λ̂_k | U] = d_A^k / (k! d_{A1}) Σ_b (Pr(+, b) − Pr(−, b))^k` from a joint
/// table laid out as `[Pr(+, 0), Pr(−, 0), Pr(+, 1), …]`.
pub fn conditional_expectation_lambda(joint: &[f64], k: usize, d_a: usize, d_a1: usize) -> f64 {
    let s: f64 = joint.chunks(2).map(|c| (c[0] - c[1]).powi(k as i32)).sum();
    (d_a as f64).powi(k as i32) / (factorial(k) * d_a1 as f64) * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_expectation() {
        let d = 4;
        let probs = vec![0.25; d];
        let k = 3;
        let expect = binom(k + d - 1, k) * (d as f64).powi(-(k as i32));
        assert!((conditional_expectation_m(&probs, k, d) - expect).abs() < 1e-15);
    }
}
