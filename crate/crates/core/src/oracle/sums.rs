//! Permutation sums evaluated by brute force over `S_k`.

use faer::Mat;

use super::perm::{all_permutations, cycles, inverse};
use crate::error::{Error, Result};
use crate::qcore::matrix::{c64, identity, CMat, ZERO};
use crate::qcore::{partial_trace_matrix, BipartitionSpec};

const MAX_K: usize = 6;
const MAX_D: usize = 16;

fn check_caps(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::OrderOutOfRange { k, min: 1, max: MAX_K });
    }
    if d > MAX_D {
        return Err(Error::CapExceeded { what: "oracle dimension", n: d, max: MAX_D });
    }
    Ok(())
}

fn trace(a: &CMat) -> c64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

/// `[I, A, A², …, A^m]` by repeated multiplication.
fn powers(a: &CMat, m: usize) -> Vec<CMat> {
    let mut out = vec![identity(a.nrows())];
    for i in 0..m {
        out.push(&out[i] * a);
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `(1/k!) Σ_{π∈S_k} Tr(ρ^{⊗k} R_π)` as products of cycle traces.
pub fn permutation_sum_zeta(rho: &CMat, k: usize) -> Result<f64> {
    check_caps(k, rho.nrows())?;
    let pw = powers(rho, k);
    let tr: Vec<c64> = pw.iter().map(trace).collect();
    let s: c64 = all_permutations(k).iter().map(|p| cycles(p).iter().map(|c| tr[c.len()]).product::<c64>()).sum();
    Ok(s.re / factorial(k))
}

/// `(1/(k+1)!) Σ_{π∈S_{k+1}} Tr[(ρ^{⊗k} ⊗ O) R_π]`; the last slot carries `O`.
pub fn permutation_sum_xi(rho: &CMat, o: &CMat, k: usize) -> Result<f64> {
    check_caps(k + 1, rho.nrows())?;
    let pw = powers(rho, k);
    let tr: Vec<c64> = pw.iter().map(trace).collect();
    let tro: Vec<c64> = pw.iter().map(|m| trace(&(o * m))).collect();
    let s: c64 = all_permutations(k + 1)
        .iter()
        .map(|p| cycles(p).iter().map(|c| if c.contains(&k) { tro[c.len() - 1] } else { tr[c.len()] }).product::<c64>())
        .sum();
    Ok(s.re / factorial(k + 1))
}

/// Partial transpose by explicit index bookkeeping on `B`'s bits.
pub fn partial_transpose_oracle(rho: &CMat, part: &BipartitionSpec) -> CMat {
    let n = part.n_qubits();
    let mut mask = 0usize;
    for &q in part.qubits_b() {
        mask |= 1 << (n - 1 - q);
    }
    let d = rho.nrows();
    let mut out = Mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (bi, bj) = (i & mask, j & mask);
            out[((i & !mask) | bj, (j & !mask) | bi)] = rho[(i, j)];
        }
    }
    out
}

/// `(1/k!) Σ_π ∏_cycles Tr((ρ^{⊤_B})^{len})`.
pub fn permutation_sum_zeta_pt(rho: &CMat, part: &BipartitionSpec, k: usize) -> Result<f64> {
    permutation_sum_zeta(&partial_transpose_oracle(rho, part), k)
}

/// `(1/k!) Σ_π Tr{ρ^{⊗k} [(R_π)_A ⊗ (R_π^⊤)_B]}` by summing over every index
/// tuple; `B` indices follow `π⁻¹` while `A` indices follow `π`.
pub fn zeta_pt_explicit(rho: &CMat, part: &BipartitionSpec, k: usize) -> Result<f64> {
    let d = rho.nrows();
    if k == 0 || k > 3 || part.n_qubits() > 6 {
        return Err(Error::CapExceeded { what: "explicit PT oracle size", n: part.n_qubits().max(k), max: 6 });
    }
    let n = part.n_qubits();
    let mut mask_b = 0usize;
    for &q in part.qubits_b() {
        mask_b |= 1 << (n - 1 - q);
    }
    let split = |i: usize| (i & !mask_b, i & mask_b);
    let join = |a: usize, b: usize| a | b;
    let total = d.pow(k as u32);
    let mut s = ZERO;
    for p in all_permutations(k) {
        let pinv = inverse(&p);
        for flat in 0..total {
            let idx: Vec<usize> = (0..k).map(|j| (flat / d.pow(j as u32)) % d).collect();
            let parts: Vec<(usize, usize)> = idx.iter().map(|&i| split(i)).collect();
            let mut term = c64::new(1.0, 0.0);
            for j in 0..k {
                let row = idx[j];
                let col = join(parts[p[j]].0, parts[pinv[j]].1);
                term *= rho[(row, col)];
                if term == ZERO {
                    break;
                }
            }
            s += term;
        }
    }
    Ok(s.re / factorial(k))
}

/// `γ_k(ρ) = (1/(k+1)!) Σ_{π∈S_{k+1}} Tr_{1..k}[(ρ^{⊗k} ⊗ I) R_π]`: the cycle
/// through the open slot leaves `ρ^{len−1}`, every other cycle a trace.
pub fn gamma_operator(rho: &CMat, k: usize) -> Result<CMat> {
    check_caps(k + 1, rho.nrows())?;
    let pw = powers(rho, k);
    let tr: Vec<c64> = pw.iter().map(trace).collect();
    let d = rho.nrows();
    let mut out: CMat = Mat::zeros(d, d);
    for p in all_permutations(k + 1) {
        let mut scalar = c64::new(1.0, 0.0);
        let mut open = 0;
        for c in cycles(&p) {
            if c.contains(&k) {
                open = c.len() - 1;
            } else {
                scalar *= tr[c.len()];
            }
        }
        let m = &pw[open];
        for j in 0..d {
            for i in 0..d {
                out[(i, j)] += m[(i, j)] * scalar;
            }
        }
    }
    let f = factorial(k + 1);
    Ok(Mat::from_fn(d, d, |i, j| out[(i, j)] / f))
}

/// `Σ_{π∈S_4} Tr[(ρ ⊗ ρ ⊗ O) R_π]` with `O` on slots 3 and 4, by full index enumeration.
pub fn delta_permutation_sum(rho: &CMat, o: &CMat) -> Result<f64> {
    let d = rho.nrows();
    if d > 8 || o.nrows() != d * d {
        return Err(Error::CapExceeded { what: "Δ oracle dimension", n: d, max: 8 });
    }
    let mut s = ZERO;
    for p in all_permutations(4) {
        for flat in 0..d.pow(4) {
            let i = [flat / (d * d * d), (flat / (d * d)) % d, (flat / d) % d, flat % d];
            let j = [i[p[0]], i[p[1]], i[p[2]], i[p[3]]];
            s += rho[(i[0], j[0])] * rho[(i[1], j[1])] * o[(i[2] * d + i[3], j[2] * d + j[3])];
        }
    }
    Ok(s.re)
}

/// The eleven-term closed form of `Σ_{π∈S_4} Tr[(ρ ⊗ ρ ⊗ O) R_π]`.
pub fn exp_delta_rhs(rho: &CMat, o: &CMat) -> Result<f64> {
    let d = rho.nrows();
    let dd = d * d;
    if o.nrows() != dd {
        return Err(Error::DimensionMismatch { expected: dd, found: o.nrows() });
    }
    let n = d.trailing_zeros() as usize;
    if 1 << n != d {
        return Err(Error::InvalidObservable("two-body oracle needs a qubit register".into()));
    }
    let swap = Mat::from_fn(dd, dd, |i, j| if i == (j % d) * d + j / d { c64::new(1.0, 0.0) } else { ZERO });
    let so = &swap * o;
    let rr = crate::qcore::matrix::kron(rho, rho);
    let rho2 = rho * rho;
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    let o1 = partial_trace_matrix(o, 2 * n, &first);
    let o2 = partial_trace_matrix(o, 2 * n, &second);
    let so1 = partial_trace_matrix(&so, 2 * n, &first);
    let so2 = partial_trace_matrix(&so, 2 * n, &second);
    let t = |a: &CMat, b: &CMat| trace(&(a * b)).re;
    let p2 = t(rho, rho);
    let v = 2.0 * t(o, &rr)
        + 2.0 * t(&so, &rr)
        + (1.0 + p2) * (trace(o).re + trace(&so).re)
        + 2.0 * (t(&o1, rho) + t(&o2, rho) + t(&so1, rho) + t(&so2, rho))
        + 2.0 * (t(&o1, &rho2) + t(&o2, &rho2) + t(&so1, &rho2) + t(&so2, &rho2));
    Ok(v)
}
