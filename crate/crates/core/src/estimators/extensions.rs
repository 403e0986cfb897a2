use faer::Mat;

use super::combinatorics::{binom, kappa_over_d};
use super::histogram::CollisionHistogram;
use crate::error::{Error, Result};
use crate::qcore::matrix::{self, c64, CMat, ZERO};
use crate::qcore::{check_dense_cap, ObservableSpec};
use crate::randomness::CircuitDescription;

/// Operator on two copies of the register, `H ⊗ H`.
#[derive(Clone, Debug)]
pub enum TwoBodyObservable {
    /// `d² × d²`, first copy most significant.
    Dense(CMat),
    Swap,
    Identity,
    Product(ObservableSpec, ObservableSpec),
}

impl TwoBodyObservable {
    /// `(w ⊗ w)† O (w ⊗ w)`.
    pub fn product_state_value(&self, w: &[c64]) -> Result<f64> {
        Ok(match self {
            Self::Identity | Self::Swap => matrix::norm_sqr(w).powi(2),
            Self::Product(a, b) => crate::qcore::quadratic_form(a, w)? * crate::qcore::quadratic_form(b, w)?,
            Self::Dense(m) => {
                let ww = matrix::kron_vec(w, w);
                if m.nrows() != ww.len() {
                    return Err(Error::DimensionMismatch { expected: ww.len(), found: m.nrows() });
                }
                matrix::quadratic(m, &ww).re
            }
        })
    }

    /// Dense `d² × d²` form.
    pub fn to_dense(&self, d: usize) -> Result<CMat> {
        let dd = d * d;
        Ok(match self {
            Self::Dense(m) => m.clone(),
            Self::Identity => matrix::identity(dd),
            Self::Swap => Mat::from_fn(dd, dd, |i, j| {
                let (a, b) = (j / d, j % d);
                if i == b * d + a {
                    matrix::ONE
                } else {
                    ZERO
                }
            }),
            Self::Product(a, b) => matrix::kron(&a.to_dense()?, &b.to_dense()?),
        })
    }
}

fn rotated_basis_vector(circuit: &CircuitDescription, b: usize) -> Vec<c64> {
    let n = circuit.n_qubits();
    let mut v = matrix::basis_vector(1 << n, b);
    let targets: Vec<usize> = (0..n).collect();
    circuit.adjoint().apply_to_vector(&mut v, n, &targets);
    v
}

/// `Δ̂ = (24 κ₄/d) C(N_M, 2)⁻¹ Σ_j C(θ_j, 2) (w_j ⊗ w_j)† O (w_j ⊗ w_j)`, `w_j = U†|j⟩`.
pub fn delta_hat(
    hist: &CollisionHistogram,
    circuit: &CircuitDescription,
    o: &TwoBodyObservable,
    d: usize,
) -> Result<f64> {
    if hist.total() < 2 {
        return Err(Error::OrderOutOfRange { k: 2, min: 2, max: hist.total() as usize });
    }
    if 1usize << circuit.n_qubits() != d {
        return Err(Error::DimensionMismatch { expected: d, found: 1 << circuit.n_qubits() });
    }
    let mut s = 0.0;
    for e in hist.entries().iter().filter(|e| e.theta >= 2) {
        let w = rotated_basis_vector(circuit, e.outcome as usize);
        s += binom(e.theta, 2) * o.product_state_value(&w)?;
    }
    Ok(24.0 * kappa_over_d(4, d) * s / binom(hist.total(), 2))
}

/// `Υ̂_k = (κ_{k+1}/d) C(N_M, k)⁻¹ Σ_j C(θ_j, k) U†|j⟩⟨j|U`.
pub fn upsilon_hat(hist: &CollisionHistogram, k: u32, circuit: &CircuitDescription, d: usize) -> Result<CMat> {
    check_dense_cap(circuit.n_qubits())?;
    if k < 1 || k as u64 > hist.total() {
        return Err(Error::OrderOutOfRange { k: k as usize, min: 1, max: hist.total() as usize });
    }
    if 1usize << circuit.n_qubits() != d {
        return Err(Error::DimensionMismatch { expected: d, found: 1 << circuit.n_qubits() });
    }
    let mut out: CMat = Mat::zeros(d, d);
    for e in hist.entries().iter().filter(|e| e.theta >= k as u64) {
        let w = rotated_basis_vector(circuit, e.outcome as usize);
        let c = binom(e.theta, k);
        for j in 0..d {
            let wj = w[j].conj() * c;
            let col = out.col_as_slice_mut(j);
            for i in 0..d {
                col[i] += w[i] * wj;
            }
        }
    }
    Ok(matrix::scale(&out, kappa_over_d(k + 1, d) / binom(hist.total(), k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{build_histogram, m_hat};
    use crate::sampler::OutcomeBatch;

    #[test]
    fn no_collisions_give_zero_delta() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 1, 2, 3])).unwrap();
        let v = delta_hat(&h, &CircuitDescription::identity(2), &TwoBodyObservable::Identity, 4).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn identity_delta_is_rescaled_m_hat() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 1, 1, 3, 1, 0])).unwrap();
        let d = 4;
        let v = delta_hat(&h, &CircuitDescription::identity(2), &TwoBodyObservable::Identity, d).unwrap();
        let m2 = m_hat(&h, 2, d).unwrap();
        let ratio = 24.0 * kappa_over_d(4, d) / kappa_over_d(2, d);
        assert!((v - ratio * m2).abs() < 1e-12);
    }

    #[test]
    fn single_outcome_upsilon_trace() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![2])).unwrap();
        let u = upsilon_hat(&h, 1, &CircuitDescription::identity(2), 4).unwrap();
        assert!((matrix::trace(&u).re - kappa_over_d(2, 4)).abs() < 1e-14);
        assert!((u[(2, 2)].re - kappa_over_d(2, 4)).abs() < 1e-14);
    }
}
