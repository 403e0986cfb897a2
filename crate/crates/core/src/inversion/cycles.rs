use crate::error::{Error, Result};

/// Largest order handled by the moment polynomials.
pub const MAX_ORDER: usize = 8;

/// A conjugacy class of `S_k`: `multiplicities[i]` cycles of length `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleType {
    pub multiplicities: Vec<usize>,
    /// `k! / ∏ (i^{m_i} m_i!)`.
    pub perm_count: u64,
}

impl CycleType {
    pub fn order(&self) -> usize {
        self.multiplicities.iter().enumerate().map(|(i, m)| (i + 1) * m).sum()
    }

    pub fn cycle_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `∏ p_i^{m_i}` with `p[i]` holding `p_{i+1}`.
    pub fn monomial(&self, p: &[f64]) -> f64 {
        self.multiplicities.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| p[i].powi(m as i32)).product()
    }
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn partitions(k: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(k)).rev() {
        prefix.push(part);
        partitions(k - part, part, prefix, out);
        prefix.pop();
    }
}

/// Every cycle type of `S_k` with its class size, largest parts first.
pub fn enumerate_cycle_types(k: usize) -> Result<Vec<CycleType>> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::OrderOutOfRange { k, min: 1, max: MAX_ORDER });
    }
    let mut parts = Vec::new();
    partitions(k, k, &mut Vec::new(), &mut parts);
    Ok(parts
        .into_iter()
        .map(|lambda| {
            let mut m = vec![0usize; k];
            for l in lambda {
                m[l - 1] += 1;
            }
            let denom: u64 =
                m.iter().enumerate().map(|(i, &mi)| ((i + 1) as u64).pow(mi as u32) * factorial_u64(mi)).product();
            CycleType { perm_count: factorial_u64(k) / denom, multiplicities: m }
        })
        .collect())
}

/// `Σ_{λ ⊢ m} |C_λ| ∏ p_i^{m_i}` (equal to `m! ζ_m`), with the empty partition giving 1.
pub(crate) fn class_sum(m: usize, p: &[f64]) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    Ok(enumerate_cycle_types(m)?.iter().map(|c| c.perm_count as f64 * c.monomial(p)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let c = enumerate_cycle_types(3).unwrap();
        let got: Vec<(Vec<usize>, u64)> = c.into_iter().map(|c| (c.multiplicities, c.perm_count)).collect();
        assert_eq!(got, vec![(vec![0, 0, 1], 2), (vec![1, 1, 0], 3), (vec![3, 0, 0], 1)]);
    }

    #[test]
    fn s4_class_sizes() {
        let mut counts: Vec<u64> = enumerate_cycle_types(4).unwrap().into_iter().map(|c| c.perm_count).collect();
        counts.sort_unstable();
        assert_eq!(counts, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for k in 1..=MAX_ORDER {
            let total: u64 = enumerate_cycle_types(k).unwrap().iter().map(|c| c.perm_count).sum();
            assert_eq!(total, factorial_u64(k));
        }
        assert!(enumerate_cycle_types(9).is_err());
        assert!(enumerate_cycle_types(0).is_err());
    }
}
