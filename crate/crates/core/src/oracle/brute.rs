//! Estimators evaluated literally as sums over index subsets.

use faer::Mat;

use crate::error::{Error, Result};
use crate::qcore::matrix::{c64, CMat, ZERO};

const MAX_SAMPLES: usize = 25;

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Calls `f` on every strictly increasing index tuple of length `k` below `n`.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check(n: usize, k: usize) -> Result<()> {
    if n > MAX_SAMPLES {
        return Err(Error::CapExceeded { what: "brute-force sample count", n, max: MAX_SAMPLES });
    }
    if k == 0 || k > n {
        return Err(Error::OrderOutOfRange { k, min: 1, max: n });
    }
    Ok(())
}

fn all_equal(b: &[u32], idx: &[usize]) -> bool {
    idx.iter().all(|&i| b[i] == b[idx[0]])
}

/// Collision estimator by explicit subset enumeration.
pub fn brute_m_hat(b: &[u32], k: usize, d: usize) -> Result<f64> {
    check(b.len(), k)?;
    let mut count = 0usize;
    for_each_subset(b.len(), k, |idx| count += usize::from(all_equal(b, idx)));
    Ok(binom(k + d - 1, k) / d as f64 * count as f64 / binom(b.len(), k))
}

/// `quasi[b]` is `⟨b|UOU†|b⟩` (already shifted if the traceless part is meant).
pub fn brute_gamma_hat(b: &[u32], k: usize, d: usize, quasi: &[f64]) -> Result<f64> {
    check(b.len(), k)?;
    let mut s = 0.0;
    for_each_subset(b.len(), k, |idx| {
        if all_equal(b, idx) {
            s += quasi[b[idx[0]] as usize];
        }
    });
    Ok(binom(k + d, k + 1) / d as f64 * s / binom(b.len(), k))
}

/// Signed estimator: each colliding tuple contributes the product of its signs.
pub fn brute_lambda_hat(b: &[u32], r: &[i8], k: usize, d_a: usize, d_a1: usize) -> Result<f64> {
    check(b.len(), k)?;
    let mut s = 0i64;
    for_each_subset(b.len(), k, |idx| {
        if all_equal(b, idx) {
            s += idx.iter().map(|&i| r[i] as i64).product::<i64>();
        }
    });
    Ok((d_a as f64).powi(k as i32) / (factorial(k) * d_a1 as f64) * s as f64 / binom(b.len(), k))
}

/// Row `b` of `U`, conjugated: the vector `U†|b⟩`.
fn pulled_back(u: &CMat, b: usize) -> Vec<c64> {
    (0..u.ncols()).map(|j| u[(b, j)].conj()).collect()
}

/// `Δ̂` with a dense `d² × d²` operator and a dense unitary.
pub fn brute_delta_hat(b: &[u32], u: &CMat, o: &CMat) -> Result<f64> {
    check(b.len(), 2)?;
    let d = u.nrows();
    let mut s = 0.0;
    for_each_subset(b.len(), 2, |idx| {
        if all_equal(b, idx) {
            let w = pulled_back(u, b[idx[0]] as usize);
            let mut acc = ZERO;
            for i in 0..d * d {
                let wi = w[i / d] * w[i % d];
                for j in 0..d * d {
                    acc += wi.conj() * o[(i, j)] * w[j / d] * w[j % d];
                }
            }
            s += acc.re;
        }
    });
    Ok(24.0 * binom(d + 3, 4) / d as f64 * s / binom(b.len(), 2))
}

/// `Υ̂_k` with a dense unitary.
pub fn brute_upsilon_hat(b: &[u32], k: usize, u: &CMat) -> Result<CMat> {
    check(b.len(), k)?;
    let d = u.nrows();
    let mut out: CMat = Mat::zeros(d, d);
    for_each_subset(b.len(), k, |idx| {
        if all_equal(b, idx) {
            let w = pulled_back(u, b[idx[0]] as usize);
            for j in 0..d {
                for i in 0..d {
                    out[(i, j)] += w[i] * w[j].conj();
                }
            }
        }
    });
    let f = binom(k + d, k + 1) / d as f64 / binom(b.len(), k);
    Ok(Mat::from_fn(d, d, |i, j| out[(i, j)] * f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_size() {
        let mut c = 0;
        for_each_subset(6, 3, |_| c += 1);
        assert_eq!(c, 20);
    }

    #[test]
    fn spec_examples() {
        assert!((brute_m_hat(&[0, 0, 1, 0], 2, 2).unwrap() - 0.75).abs() < 1e-15);
        assert!((brute_m_hat(&[0, 0, 0], 3, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!((brute_lambda_hat(&[0, 0], &[1, -1], 2, 4, 2).unwrap() + 4.0).abs() < 1e-15);
        assert_eq!(brute_m_hat(&[0, 1, 2], 2, 4).unwrap(), 0.0);
    }
}
