use faer::Mat;

use crate::error::{Error, Result};
use crate::inversion::PtMomentSet;
use crate::qcore::matrix::eigvalsh_real;

/// `D_k = −k e_k` for `k = 1..=k_max`, where `e_k` are the elementary
/// symmetric polynomials of the partial-transpose spectrum obtained from the
/// power sums by `k e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i`.
pub fn newton_witnesses(p_pt: &PtMomentSet, k_max: usize) -> Result<Vec<f64>> {
    if p_pt.order() < k_max {
        return Err(Error::MissingInputs(format!("need PT moments up to order {k_max}")));
    }
    let mut e = vec![1.0];
    for k in 1..=k_max {
        let s: f64 = (1..=k)
            .map(|i| {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                sign * e[k - i] * p_pt.get(i).expect("checked order")
            })
            .sum();
        e.push(s / k as f64);
    }
    Ok((1..=k_max).map(|k| -(k as f64) * e[k]).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelMinor {
    /// `B_k` is `(k+1) × (k+1)` with entries `p_{i+j+1}`.
    pub k: usize,
    pub det: f64,
    pub min_eig: f64,
}

impl HankelMinor {
    pub fn detects(&self) -> bool {
        self.det < 0.0 || self.min_eig < 0.0
    }
}

/// `B_0, …, B_m`; needs PT moments up to order `2m + 1`.
pub fn hankel_criteria(p_pt: &PtMomentSet, m: usize) -> Result<Vec<HankelMinor>> {
    if p_pt.order() < 2 * m + 1 {
        return Err(Error::MissingInputs(format!("need PT moments up to order {}", 2 * m + 1)));
    }
    (0..=m)
        .map(|k| {
            let b = Mat::from_fn(k + 1, k + 1, |i, j| p_pt.get(i + j + 1).expect("checked order"));
            let eig = eigvalsh_real(&b)?;
            Ok(HankelMinor { k, det: eig.iter().product(), min_eig: eig.iter().copied().fold(f64::INFINITY, f64::min) })
        })
        .collect()
}

/// `(p_2^PT)² − p_3^PT`; positive values violate the PPT bound.
pub fn p3ppt_value(p_pt: &PtMomentSet) -> Result<f64> {
    match (p_pt.get(2), p_pt.get(3)) {
        (Some(p2), Some(p3)) => Ok(p2 * p2 - p3),
        _ => Err(Error::MissingInputs("need PT moments up to order 3".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub d_values: Vec<f64>,
    pub d_detected: Vec<bool>,
    pub hankel: Vec<HankelMinor>,
    pub p3ppt_value: Option<f64>,
    pub p3ppt_detected: bool,
}

/// Raw-sign detection: `D_k > 0`, a negative Hankel determinant or eigenvalue,
/// or a positive p3-PPT value.
pub fn witness_report(p_pt: &PtMomentSet, k_max: usize, hankel_m: Option<usize>) -> Result<WitnessReport> {
    let d_values = newton_witnesses(p_pt, k_max)?;
    let hankel = match hankel_m {
        Some(m) => hankel_criteria(p_pt, m)?,
        None => vec![],
    };
    let p3 = p3ppt_value(p_pt).ok();
    Ok(WitnessReport {
        d_detected: d_values.iter().map(|&d| d > 0.0).collect(),
        d_values,
        hankel,
        p3ppt_detected: p3.is_some_and(|v| v > 0.0),
        p3ppt_value: p3,
    })
}

/// Significance-gated detection: `value > z · σ̂`.
pub fn gated_detection(values: &[f64], sigmas: &[f64], z: f64) -> Vec<bool> {
    values.iter().zip(sigmas).map(|(v, s)| *v > z * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inversion::MomentSet;

    #[test]
    fn first_witness_never_detects() {
        let p = MomentSet::from_higher(&[0.3]);
        assert_eq!(newton_witnesses(&p, 1).unwrap(), vec![-1.0]);
    }

    #[test]
    fn flat_spectrum_hankel_is_degenerate() {
        let d = 4.0f64;
        let p = MomentSet::from_higher(&(2..=5).map(|t| d.powi(1 - t)).collect::<Vec<_>>());
        for h in hankel_criteria(&p, 2).unwrap() {
            assert!(h.det >= -1e-12);
        }
    }

    #[test]
    fn missing_orders_are_errors() {
        let p = MomentSet::from_higher(&[0.5]);
        assert!(newton_witnesses(&p, 3).is_err());
        assert!(hankel_criteria(&p, 1).is_err());
    }
}
