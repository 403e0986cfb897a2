//! Small dense helpers on top of `faer` matrices and plain amplitude slices.

use faer::{Mat, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Dense complex matrix, column-major.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };

pub fn identity(d: usize) -> CMat {
    Mat::from_fn(d, d, |i, j| if i == j { ONE } else { ZERO })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = (a.nrows(), a.ncols());
    let (rb, cb) = (b.nrows(), b.ncols());
    Mat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

pub fn kron_vec(a: &[c64], b: &[c64]) -> Vec<c64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `|v⟩⟨w|`.
pub fn outer(v: &[c64], w: &[c64]) -> CMat {
    Mat::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn trace(a: &CMat) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `⟨v|w⟩`, antilinear in the first argument.
pub fn inner(v: &[c64], w: &[c64]) -> c64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(v: &[c64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub fn matvec(a: &CMat, v: &[c64]) -> Vec<c64> {
    assert_eq!(a.ncols(), v.len());
    let mut out = vec![ZERO; a.nrows()];
    for (j, &vj) in v.iter().enumerate() {
        if vj == ZERO {
            continue;
        }
        for (o, &aij) in out.iter_mut().zip(a.col_as_slice(j)) {
            *o += aij * vj;
        }
    }
    out
}

/// `v† A v`.
pub fn quadratic(a: &CMat, v: &[c64]) -> c64 {
    inner(v, &matvec(a, v))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_residue(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j.min(a.nrows() - 1) {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

/// Replaces `a` by `(a + a†)/2`.
pub fn symmetrize(a: &mut CMat) {
    let d = a.nrows();
    for j in 0..d {
        for i in 0..j {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(j, j)] = c64::new(a[(j, j)].re, 0.0);
    }
}

pub fn scale(a: &CMat, s: f64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// eigenvectors as columns.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = a.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
    let s = evd.S();
    let vals = (0..a.nrows()).map(|i| s[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    let vals = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Eigen)?;
    Ok(vals)
}

/// Eigendecomposition of a real symmetric matrix.
pub fn eigh_real(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = a.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
    let s = evd.S();
    let vals = (0..a.nrows()).map(|i| s[i]).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn eigvalsh_real(a: &Mat<f64>) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Eigen)
}

/// Integer power by repeated multiplication.
pub fn matpow(a: &CMat, k: usize) -> CMat {
    let mut out = identity(a.nrows());
    for _ in 0..k {
        out = &out * a;
    }
    out
}

pub fn basis_vector(d: usize, b: usize) -> Vec<c64> {
    let mut v = vec![ZERO; d];
    v[b] = ONE;
    v
}

pub fn is_power_of_two_dim(d: usize) -> Option<usize> {
    if d.is_power_of_two() {
        Some(d.trailing_zeros() as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&identity(2), &identity(3));
        assert!(max_abs_diff(&k, &identity(6)) < 1e-15);
    }

    #[test]
    fn eigh_recovers_pauli_x_spectrum() {
        let x = Mat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
        let (vals, _) = eigh(&x).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetrize_removes_antihermitian_part() {
        let mut a = Mat::from_fn(3, 3, |i, j| c64::new(i as f64, j as f64));
        symmetrize(&mut a);
        assert_eq!(hermitian_residue(&a), 0.0);
    }
}
