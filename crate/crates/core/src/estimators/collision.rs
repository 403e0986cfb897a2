use super::combinatorics::{binom, factorial, kappa_over_d, signed_elementary};
use super::histogram::CollisionHistogram;
use crate::error::{Error, Result};
use crate::qcore::ObservableSpec;
use crate::randomness::CircuitDescription;
use crate::sampler::quasi_probabilities;

/// Whether `Γ̂` is fed `O` itself or its traceless part `O₀ = O − Tr(O) I/d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ObservableMode {
    #[default]
    Traceless,
    Full,
}

fn check_order(k: u32, min: u32, n: u64) -> Result<()> {
    if k < min || k as u64 > n {
        return Err(Error::OrderOutOfRange { k: k as usize, min: min as usize, max: n as usize });
    }
    Ok(())
}

/// `Σ_j C(θ_j, k)`, the number of `k`-wise collisions.
pub fn collision_count(hist: &CollisionHistogram, k: u32) -> f64 {
    hist.entries().iter().filter(|e| e.theta >= k as u64).map(|e| binom(e.theta, k)).sum()
}

/// `M̂_k = (κ_k/d) C(N_M, k)⁻¹ Σ_j C(θ_j, k)`.
pub fn m_hat(hist: &CollisionHistogram, k: u32, d: usize) -> Result<f64> {
    check_order(k, 1, hist.total())?;
    Ok(kappa_over_d(k, d) * collision_count(hist, k) / binom(hist.total(), k))
}

/// `Γ̂_k` from per-entry quasi-probabilities, already adjusted for the mode.
pub fn gamma_hat_from_quasi(hist: &CollisionHistogram, k: u32, quasi: &[f64], d: usize) -> Result<f64> {
    check_order(k, 1, hist.total())?;
    if quasi.len() != hist.distinct() {
        return Err(Error::DimensionMismatch { expected: hist.distinct(), found: quasi.len() });
    }
    let s: f64 =
        hist.entries().iter().zip(quasi).filter(|(e, _)| e.theta >= k as u64).map(|(e, q)| binom(e.theta, k) * q).sum();
    Ok(kappa_over_d(k + 1, d) * s / binom(hist.total(), k))
}

/// `⟨j|UOU†|j⟩` for every histogram entry, shifted by `−Tr(O)/d` in traceless mode.
pub fn histogram_quasi_probabilities(
    hist: &CollisionHistogram,
    o: &ObservableSpec,
    circuit: &CircuitDescription,
    mode: ObservableMode,
) -> Result<Vec<f64>> {
    let outcomes: Vec<usize> = hist.entries().iter().map(|e| e.outcome as usize).collect();
    let mut q = quasi_probabilities(o, circuit, &outcomes)?;
    if mode == ObservableMode::Traceless {
        let shift = o.trace() / o.dim() as f64;
        q.iter_mut().for_each(|x| *x -= shift);
    }
    Ok(q)
}

/// `Γ̂_k = (κ_{k+1}/d) C(N_M, k)⁻¹ Σ_j C(θ_j, k) ⟨j|UOU†|j⟩`.
pub fn gamma_hat(
    hist: &CollisionHistogram,
    k: u32,
    o: &ObservableSpec,
    circuit: &CircuitDescription,
    d: usize,
    mode: ObservableMode,
) -> Result<f64> {
    let q = histogram_quasi_probabilities(hist, o, circuit, mode)?;
    gamma_hat_from_quasi(hist, k, &q, d)
}

/// `Λ̂_k = d_A^k / (k! d_{A1}) · C(N_M, k)⁻¹ Σ_j E_k(a_j, b_j)`.
pub fn lambda_hat(hist: &CollisionHistogram, k: u32, d_a: usize, d_a1: usize) -> Result<f64> {
    if !hist.is_signed() {
        return Err(Error::MissingSigns);
    }
    check_order(k, 1, hist.total())?;
    let s: f64 =
        hist.entries().iter().filter(|e| e.theta >= k as u64).map(|e| signed_elementary(e.plus, e.minus, k)).sum();
    let pref = (d_a as f64).powi(k as i32) / (factorial(k) * d_a1 as f64);
    Ok(pref * s / binom(hist.total(), k))
}

/// Per-unitary estimator values.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorSet {
    /// `M̂_k` for `k = 2..=t`.
    pub m_hat: Vec<f64>,
    /// `Γ̂_k` for `k = 1..=t`, one vector per observable.
    pub gamma_hat: Vec<Vec<f64>>,
    /// `Λ̂_k` for `k = 2..=t` (empty without signs).
    pub lambda_hat: Vec<f64>,
    pub d: usize,
    pub n_m: u64,
    pub max_order: u32,
    pub unitary_index: usize,
}

/// Every collision estimator up to order `t` from one histogram.
///
/// `quasi` holds one quasi-probability vector per observable, aligned with the
/// histogram entries. `pt_dims = Some((d_A, d_A1))` adds the signed estimators.
pub fn estimate_all(
    hist: &CollisionHistogram,
    t: u32,
    d: usize,
    quasi: &[Vec<f64>],
    pt_dims: Option<(usize, usize)>,
) -> Result<EstimatorSet> {
    let m = (2..=t).map(|k| m_hat(hist, k, d)).collect::<Result<Vec<_>>>()?;
    let g = quasi
        .iter()
        .map(|q| (1..=t).map(|k| gamma_hat_from_quasi(hist, k, q, d)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let l = match pt_dims {
        Some((d_a, d_a1)) => (2..=t).map(|k| lambda_hat(hist, k, d_a, d_a1)).collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    Ok(EstimatorSet { m_hat: m, gamma_hat: g, lambda_hat: l, d, n_m: hist.total(), max_order: t, unitary_index: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::build_histogram;
    use crate::sampler::OutcomeBatch;

    #[test]
    fn m_hat_small_examples() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 0, 1, 0])).unwrap();
        assert!((m_hat(&h, 2, 2).unwrap() - 0.75).abs() < 1e-15);
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 0, 0])).unwrap();
        assert!((m_hat(&h, 3, 2).unwrap() - 2.0).abs() < 1e-15);
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 1, 2])).unwrap();
        assert_eq!(m_hat(&h, 2, 4).unwrap(), 0.0);
    }

    #[test]
    fn order_above_sample_count_is_rejected() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 0])).unwrap();
        assert!(matches!(m_hat(&h, 3, 2), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn gamma_hat_with_z() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 0, 1])).unwrap();
        let z = ObservableSpec::pauli(1, &[(1.0, "Z")]).unwrap();
        let g = gamma_hat(&h, 2, &z, &CircuitDescription::identity(1), 2, ObservableMode::Full).unwrap();
        assert!((g - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_hat_signed_pair() {
        let h = build_histogram(&OutcomeBatch::signed(vec![0, 0], vec![1, -1]).unwrap()).unwrap();
        assert!((lambda_hat(&h, 2, 4, 2).unwrap() + 4.0).abs() < 1e-15);
        let u = build_histogram(&OutcomeBatch::unsigned(vec![0, 0])).unwrap();
        assert!(matches!(lambda_hat(&u, 2, 4, 2), Err(Error::MissingSigns)));
    }
}
