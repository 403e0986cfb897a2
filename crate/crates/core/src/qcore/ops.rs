use faer::Mat;

use super::gates::bit_position;
use super::matrix::{self, c64, CMat, ZERO};
use super::observable::{quadratic_form, ObservableSpec};
use super::partition::BipartitionSpec;
use super::state::{check_dense_cap, check_pure_cap, Mixture, QuantumState, Representation};
use crate::error::{Error, Result};

/// `a ⊗ b`; pure inputs stay pure, a noiseless mixture times a pure state stays
/// a mixture, and everything else becomes a density operator.
pub fn tensor_product(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    let n = a.n_qubits() + b.n_qubits();
    check_pure_cap(n)?;
    match (a.repr(), b.repr()) {
        (Representation::Pure(x), Representation::Pure(y)) => {
            Ok(QuantumState::from_repr_unchecked(n, Representation::Pure(matrix::kron_vec(x, y))))
        }
        (Representation::Mixture(m), Representation::Pure(y)) if m.white == 0.0 => {
            let col = Mat::from_fn(y.len(), 1, |i, _| y[i]);
            let vectors = matrix::kron(&m.vectors, &col);
            Ok(QuantumState::from_repr_unchecked(
                n,
                Representation::Mixture(Mixture { weights: m.weights.clone(), vectors, white: 0.0 }),
            ))
        }
        _ => {
            check_dense_cap(n)?;
            let rho = matrix::kron(&a.to_density()?, &b.to_density()?);
            Ok(QuantumState::from_repr_unchecked(n, Representation::Density(rho)))
        }
    }
}

/// Scatters the bits of `x` onto the given qubit positions (first qubit most significant).
#[inline]
fn scatter(x: usize, n: usize, qubits: &[usize]) -> usize {
    let m = qubits.len();
    let mut out = 0;
    for (k, &q) in qubits.iter().enumerate() {
        if (x >> (m - 1 - k)) & 1 == 1 {
            out |= 1 << bit_position(n, q);
        }
    }
    out
}

/// Reduced operator on `keep` (in the listed order) of an `n`-qubit operator.
pub fn partial_trace_matrix(op: &CMat, n: usize, keep: &[usize]) -> CMat {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let keep_off: Vec<usize> = (0..dk).map(|x| scatter(x, n, keep)).collect();
    let tr_off: Vec<usize> = (0..dt).map(|x| scatter(x, n, &traced)).collect();
    Mat::from_fn(dk, dk, |i, j| tr_off.iter().map(|&t| op[(keep_off[i] | t, keep_off[j] | t)]).sum())
}

pub fn partial_trace(state: &QuantumState, keep: &[usize]) -> Result<CMat> {
    let n = state.n_qubits();
    if keep.iter().any(|&q| q >= n) {
        return Err(Error::InvalidPartition("kept qubit out of range".into()));
    }
    Ok(partial_trace_matrix(&state.to_density()?, n, keep))
}

/// Transposes the `B` indices of an operator on the partition's register.
pub fn partial_transpose_matrix(rho: &CMat, part: &BipartitionSpec) -> CMat {
    let n = part.n_qubits();
    let mask_b: usize = part.qubits_b().iter().map(|&q| 1usize << bit_position(n, q)).sum();
    let d = rho.nrows();
    Mat::from_fn(d, d, |i, j| {
        let ii = (i & !mask_b) | (j & mask_b);
        let jj = (j & !mask_b) | (i & mask_b);
        rho[(ii, jj)]
    })
}

pub fn partial_transpose(state: &QuantumState, part: &BipartitionSpec) -> Result<CMat> {
    if part.n_qubits() != state.n_qubits() {
        return Err(Error::InvalidPartition(format!(
            "partition over {} qubits, state has {}",
            part.n_qubits(),
            state.n_qubits()
        )));
    }
    Ok(partial_transpose_matrix(&state.to_density()?, part))
}

fn power_sums(spectrum: impl Iterator<Item = (f64, usize)> + Clone, t_max: usize) -> Vec<f64> {
    (1..=t_max).map(|t| spectrum.clone().map(|(l, m)| m as f64 * l.powi(t as i32)).sum()).collect()
}

/// `[Tr ρ, Tr ρ², …, Tr ρ^t_max]`.
pub fn exact_spectral_moments(state: &QuantumState, t_max: usize) -> Result<Vec<f64>> {
    if t_max == 0 {
        return Err(Error::OrderOutOfRange { k: 0, min: 1, max: usize::MAX });
    }
    let s = state.spectral_form()?;
    let iter = s.values.iter().map(|&v| (v, 1)).chain(std::iter::once((s.rest_value, s.rest_count)));
    Ok(power_sums(iter, t_max))
}

/// `[Tr((ρ^{⊤_B})^t)]` for `t = 1..=t_max`; no clamping, the spectrum may be negative.
pub fn exact_pt_moments(state: &QuantumState, part: &BipartitionSpec, t_max: usize) -> Result<Vec<f64>> {
    let pt = partial_transpose(state, part)?;
    let vals = matrix::eigvalsh(&pt)?;
    Ok(power_sums(vals.into_iter().map(|v| (v, 1)), t_max))
}

/// `[Tr(O), Tr(Oρ), …, Tr(Oρ^t_max)]`, starting at power zero.
pub fn exact_observable_powers_from_zero(state: &QuantumState, o: &ObservableSpec, t_max: usize) -> Result<Vec<f64>> {
    if o.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), found: o.n_qubits() });
    }
    let s = state.spectral_form()?;
    let mut diag = Vec::with_capacity(s.values.len());
    for k in 0..s.values.len() {
        diag.push(quadratic_form(o, s.vectors.col_as_slice(k))?);
    }
    let rest_trace = o.trace() - diag.iter().sum::<f64>();
    let mut out = vec![o.trace()];
    for t in 1..=t_max {
        let mut acc: f64 = s.values.iter().zip(&diag).map(|(l, q)| l.powi(t as i32) * q).sum();
        if s.rest_count > 0 {
            acc += s.rest_value.powi(t as i32) * rest_trace;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `[Tr(Oρ), …, Tr(Oρ^t_max)]`.
pub fn exact_observable_powers(state: &QuantumState, o: &ObservableSpec, t_max: usize) -> Result<Vec<f64>> {
    let mut v = exact_observable_powers_from_zero(state, o, t_max)?;
    v.remove(0);
    Ok(v)
}

/// `Tr(A B)` for square matrices, without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> c64 {
    let d = a.nrows();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
