//! Exact binomials with floating-point fallbacks for huge arguments.

/// `C(n, k)` if it fits in 128 bits.
pub fn binom_u128(n: u64, k: u32) -> Option<u128> {
    let k = k as u64;
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binom_f64(n: u64, k: u32) -> f64 {
    if k as u64 > n {
        return 0.0;
    }
    (0..k as u64).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(n, k)` as a float, exact whenever the integer value fits.
pub fn binom(n: u64, k: u32) -> f64 {
    binom_u128(n, k).map(|x| x as f64).unwrap_or_else(|| binom_f64(n, k))
}

/// `κ_k / d` with `κ_k = C(k + d − 1, k)`, the symmetric-subspace dimension.
pub fn kappa_over_d(k: u32, d: usize) -> f64 {
    binom(k as u64 + d as u64 - 1, k) / d as f64
}

pub fn factorial(k: u32) -> f64 {
    (1..=k as u64).fold(1.0, |acc, i| acc * i as f64)
}

/// `Σ_l C(a, k−l) C(b, l) (−1)^l`: the `k`-th elementary symmetric sum of a
/// multiset holding `a` copies of `+1` and `b` copies of `−1`.
pub fn signed_elementary(a: u64, b: u64, k: u32) -> f64 {
    let exact = (|| {
        let mut acc: i128 = 0;
        for l in 0..=k {
            let term = binom_u128(a, k - l)?.checked_mul(binom_u128(b, l)?)?;
            let term = i128::try_from(term).ok()?;
            acc = if l % 2 == 0 { acc.checked_add(term)? } else { acc.checked_sub(term)? };
        }
        Some(acc)
    })();
    match exact {
        Some(v) => v as f64,
        None => (0..=k)
            .map(|l| {
                let s = if l % 2 == 0 { 1.0 } else { -1.0 };
                s * binom_f64(a, k - l) * binom_f64(b, l)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binom_u128(5, 2), Some(10));
        assert_eq!(binom_u128(3, 4), Some(0));
        assert_eq!(binom_u128(0, 0), Some(1));
    }

    #[test]
    fn huge_binomial_falls_back() {
        assert!(binom_u128(100_000_000, 8).is_none());
        let rel = binom(100_000_000, 8) / 2.480_158_7e59 - 1.0;
        assert!(rel.abs() < 1e-6);
    }

    #[test]
    fn kappa_two_is_symmetric_dimension() {
        assert_eq!(kappa_over_d(2, 2) * 2.0, 3.0);
        assert_eq!(kappa_over_d(3, 2) * 2.0, 4.0);
    }

    #[test]
    fn signed_sums() {
        assert_eq!(signed_elementary(2, 0, 2), 1.0);
        assert_eq!(signed_elementary(1, 1, 2), -1.0);
        // (1 + x)^2 (1 − x)^1 = 1 + x − x² − x³
        assert_eq!(signed_elementary(2, 1, 3), -1.0);
    }
}
