use crate::error::{Error, Result};
use crate::qcore::{exact_observable_powers, exact_spectral_moments, ObservableSpec, QuantumState};

/// Smallest admissible `|p_t|`: `max(10 σ̂, 1e-6)`.
pub fn default_floor(sigma_pt: Option<f64>) -> f64 {
    sigma_pt.map_or(1e-6, |s| (10.0 * s).max(1e-6))
}

/// `Tr(Oρ^t) / Tr(ρ^t)`, the principal-component estimate.
pub fn pce_estimate(o_t: f64, p_t: f64, floor: f64) -> Result<f64> {
    if !(p_t.abs() >= floor) {
        return Err(Error::BelowFloor { value: p_t, floor });
    }
    Ok(o_t / p_t)
}

/// Exact virtually cooled fidelity `⟨gs|ρ^t|gs⟩ / Tr(ρ^t)`.
pub fn qvc_fidelity_exact(rho: &QuantumState, ground: &QuantumState, t: usize) -> Result<f64> {
    let psi = ground.as_pure().ok_or_else(|| Error::InvalidState("ground state must be a statevector".into()))?;
    if t == 0 {
        return Err(Error::OrderOutOfRange { k: 0, min: 1, max: usize::MAX });
    }
    let proj = ObservableSpec::projector(ground.n_qubits(), psi.to_vec())?;
    let o = exact_observable_powers(rho, &proj, t)?;
    let p = exact_spectral_moments(rho, t)?;
    pce_estimate(o[t - 1], p[t - 1], 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_guard() {
        assert!(matches!(pce_estimate(0.1, 1e-9, 1e-6), Err(Error::BelowFloor { .. })));
        assert_eq!(pce_estimate(0.2, 0.4, 1e-6).unwrap(), 0.5);
        assert_eq!(default_floor(Some(1e-3)), 1e-2);
        assert_eq!(default_floor(None), 1e-6);
    }

    #[test]
    fn pure_state_fidelity_is_one() {
        let s = QuantumState::basis(2, 1).unwrap();
        for t in 1..4 {
            assert!((qvc_fidelity_exact(&s, &s, t).unwrap() - 1.0).abs() < 1e-14);
        }
    }
}
