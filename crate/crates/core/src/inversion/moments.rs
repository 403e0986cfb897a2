use super::cycles::{class_sum, enumerate_cycle_types, MAX_ORDER};
use crate::error::{Error, Result};

/// `p_1, …, p_t` of a state or of its partial transpose, with `p_1 = 1`.
///
/// Estimated sets are not clamped to the physical range.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSet {
    values: Vec<f64>,
    pub estimated: bool,
    pub std_errors: Option<Vec<f64>>,
}

/// Partial-transpose moments obey the same polynomial relations.
pub type PtMomentSet = MomentSet;

impl MomentSet {
    /// From `[p_2, …, p_t]`.
    pub fn from_higher(higher: &[f64]) -> Self {
        let mut values = Vec::with_capacity(higher.len() + 1);
        values.push(1.0);
        values.extend_from_slice(higher);
        Self { values, estimated: false, std_errors: None }
    }

    /// From `[p_1, …, p_t]`; `p_1` must be 1 within `1e-10` and is then set to 1.
    pub fn from_all(all: &[f64]) -> Result<Self> {
        match all.first() {
            Some(p1) if (p1 - 1.0).abs() <= 1e-10 => Ok(Self::from_higher(&all[1..])),
            Some(p1) => Err(Error::Normalization(*p1)),
            None => Err(Error::MissingInputs("empty moment list".into())),
        }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `p_t` for `t ≥ 1`.
    pub fn get(&self, t: usize) -> Option<f64> {
        t.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `d^{1−t} ≤ p_t ≤ 1` and nonincreasing in `t` (ordinary moments only).
    pub fn is_physical(&self, d: usize) -> bool {
        let tol = 1e-12;
        let mut prev = f64::INFINITY;
        for (i, &p) in self.values.iter().enumerate() {
            let t = (i + 1) as i32;
            let lo = (d as f64).powi(1 - t);
            if !(p >= lo - tol && p <= 1.0 + tol && p <= prev + tol) {
                return false;
            }
            prev = p;
        }
        true
    }

    fn require(&self, k: usize) -> Result<()> {
        if self.order() < k {
            return Err(Error::MissingInputs(format!("need moments up to order {k}, have {}", self.order())));
        }
        Ok(())
    }
}

/// `ζ_k = (1/k!) Σ_λ |C_λ| ∏ p_i^{m_i}`.
pub fn zeta_from_moments(p: &MomentSet, k: usize) -> Result<f64> {
    p.require(k)?;
    let kf: f64 = (1..=k).map(|i| i as f64).product();
    Ok(class_sum(k, p.values())? / kf)
}

/// Sequentially solves `p_k = k ζ_k − (1/(k−1)!) Σ_{λ ≠ (k)} |C_λ| ∏ p_i^{m_i}`
/// from `[ζ_2, …, ζ_t]`.
pub fn moments_from_zeta(zeta: &[f64]) -> Result<MomentSet> {
    let t = zeta.len() + 1;
    if t > MAX_ORDER {
        return Err(Error::OrderOutOfRange { k: t, min: 1, max: MAX_ORDER });
    }
    let mut p = vec![1.0; t];
    for k in 2..=t {
        let rest: f64 = enumerate_cycle_types(k)?
            .iter()
            .filter(|c| c.cycle_count() >= 2)
            .map(|c| c.perm_count as f64 * c.monomial(&p))
            .sum();
        let km1: f64 = (1..k).map(|i| i as f64).product();
        p[k - 1] = k as f64 * zeta[k - 2] - rest / km1;
    }
    let mut out = MomentSet::from_all(&p)?;
    out.estimated = true;
    Ok(out)
}

/// Partial-transpose moments from `[ζ^PT_2, …, ζ^PT_t]`.
pub fn pt_moments_from_zeta(zeta_pt: &[f64]) -> Result<PtMomentSet> {
    moments_from_zeta(zeta_pt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_of_half_purity() {
        let p = MomentSet::from_higher(&[0.5]);
        assert!((zeta_from_moments(&p, 2).unwrap() - 0.75).abs() < 1e-15);
        assert!((moments_from_zeta(&[0.75]).unwrap().get(2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pure_state_zetas_are_one() {
        let p = MomentSet::from_higher(&[1.0; 5]);
        for k in 1..=6 {
            assert!((zeta_from_moments(&p, k).unwrap() - 1.0).abs() < 1e-14);
        }
        let back = moments_from_zeta(&[1.0; 5]).unwrap();
        assert!(back.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn zeta_three_coefficients_come_from_cycle_counts() {
        // Probe each monomial separately.
        let base = zeta_from_moments(&MomentSet::from_higher(&[0.0, 0.0]), 3).unwrap();
        let c2 = zeta_from_moments(&MomentSet::from_higher(&[1.0, 0.0]), 3).unwrap() - base;
        let c3 = zeta_from_moments(&MomentSet::from_higher(&[0.0, 1.0]), 3).unwrap() - base;
        assert!((base - 1.0 / 6.0).abs() < 1e-15);
        assert!((c2 - 0.5).abs() < 1e-15);
        assert!((c3 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn physical_range_check() {
        assert!(MomentSet::from_higher(&[0.5, 0.25]).is_physical(2));
        assert!(!MomentSet::from_higher(&[1.2]).is_physical(2));
    }
}
