use crate::error::{Error, Result};
use crate::qcore::gates::bit_position;
use crate::qcore::matrix::c64;
use crate::qcore::{BipartitionSpec, QuantumState, Representation};
use crate::randomness::{apply_circuit_on, CircuitDescription, Gate};

use super::table::{OutcomeSpace, ProbabilityTable};

fn mask_of(n: usize, qubits: &[usize]) -> Vec<usize> {
    qubits.iter().map(|&q| 1usize << bit_position(n, q)).collect()
}

fn gather(i: usize, masks: &[usize]) -> usize {
    masks.iter().fold(0, |acc, &m| (acc << 1) | usize::from(i & m != 0))
}

fn check_partition(state: &QuantumState, part: &BipartitionSpec) -> Result<()> {
    if part.n_qubits() != state.n_qubits() {
        return Err(Error::InvalidPartition(format!(
            "partition over {} qubits, state has {}",
            part.n_qubits(),
            state.n_qubits()
        )));
    }
    Ok(())
}

/// `Pr(r = ±1, b) = Tr[ρ (|b⟩⟨b|_{A1} ⊗ (I ± 𝕊)/2)]` for a state already rotated
/// on `A`, with `𝕊` swapping each `A2[k]` with `B[k]`.
pub fn ptme_table_of_rotated(state: &QuantumState, part: &BipartitionSpec) -> Result<ProbabilityTable> {
    check_partition(state, part)?;
    let n = state.n_qubits();
    let d = state.dim();
    let a1 = mask_of(n, part.qubits_a1());
    let a2 = mask_of(n, part.qubits_a2());
    let bm = mask_of(n, part.qubits_b());
    let swap = |i: usize| -> usize {
        let mut j = i;
        for (&ma, &mb) in a2.iter().zip(&bm) {
            let (x, y) = (i & ma != 0, i & mb != 0);
            if x != y {
                j ^= ma | mb;
            }
        }
        j
    };
    let d_a1 = part.d_a1();
    let mut diag = vec![0.0; d_a1];
    let mut swap_part = vec![0.0; d_a1];
    // ⟨i|ρ|swap(i)⟩ summed over each A1 block.
    let mut add = |i: usize, rho_ii: f64, rho_is: c64| {
        let b = gather(i, &a1);
        diag[b] += rho_ii;
        swap_part[b] += rho_is.re;
    };
    match state.repr() {
        Representation::Pure(v) => {
            for i in 0..d {
                add(i, v[i].norm_sqr(), v[i] * v[swap(i)].conj());
            }
        }
        Representation::Density(r) => {
            for i in 0..d {
                add(i, r[(i, i)].re, r[(i, swap(i))]);
            }
        }
        Representation::Mixture(m) => {
            let flat = m.white / d as f64;
            for i in 0..d {
                let s = swap(i);
                let mut rho_ii = flat;
                let mut rho_is = if s == i { c64::new(flat, 0.0) } else { c64::new(0.0, 0.0) };
                for (k, &w) in m.weights.iter().enumerate() {
                    let col = m.vectors.col_as_slice(k);
                    rho_ii += w * col[i].norm_sqr();
                    rho_is += col[i] * col[s].conj() * w;
                }
                add(i, rho_ii, rho_is);
            }
        }
    }
    let mut probs = Vec::with_capacity(2 * d_a1);
    for b in 0..d_a1 {
        probs.push(0.5 * (diag[b] + swap_part[b]));
        probs.push(0.5 * (diag[b] - swap_part[b]));
    }
    ProbabilityTable::new(probs, OutcomeSpace::Joint { d_a1 })
}

/// Joint table after applying `circuit_on_a` to the `A` qubits.
pub fn ptme_joint_probabilities(
    state: &QuantumState,
    circuit_on_a: &CircuitDescription,
    part: &BipartitionSpec,
) -> Result<ProbabilityTable> {
    check_partition(state, part)?;
    let rotated = apply_circuit_on(state, circuit_on_a, part.qubits_a())?;
    ptme_table_of_rotated(&rotated, part)
}

/// The same table obtained from per-pair Bell measurements: `r = −1` exactly
/// when an odd number of `(A2[k], B[k])` pairs land in the singlet.
pub fn ptme_joint_probabilities_bell(
    state: &QuantumState,
    circuit_on_a: &CircuitDescription,
    part: &BipartitionSpec,
) -> Result<ProbabilityTable> {
    check_partition(state, part)?;
    let rotated = apply_circuit_on(state, circuit_on_a, part.qubits_a())?;
    let n = state.n_qubits();
    let m = part.qubits_b().len();
    // Rows ⟨Φ+|, ⟨Φ−|, ⟨Ψ+|, ⟨Ψ−| in the local basis |a2 b⟩.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rows = [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h], [0.0, h, h, 0.0], [0.0, h, -h, 0.0]];
    let mut bell = [c64::new(0.0, 0.0); 16];
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            bell[r + 4 * c] = c64::new(x, 0.0);
        }
    }
    let mut targets = Vec::with_capacity(2 * m);
    for (&a, &b) in part.qubits_a2().iter().zip(part.qubits_b()) {
        targets.push(a);
        targets.push(b);
    }
    let layer = (0..m).map(|k| Gate::TwoQubit { first: 2 * k, matrix: bell }).collect();
    let change = CircuitDescription::new(2 * m, vec![layer])?;
    let in_bell = apply_circuit_on(&rotated, &change, &targets)?;
    let diag = in_bell.diagonal();
    let a1 = mask_of(n, part.qubits_a1());
    let pairs: Vec<(usize, usize)> =
        mask_of(n, part.qubits_a2()).into_iter().zip(mask_of(n, part.qubits_b())).collect();
    let mut probs = vec![0.0; 2 * part.d_a1()];
    for (i, p) in diag.into_iter().enumerate() {
        let singlets = pairs.iter().filter(|(ma, mb)| i & ma != 0 && i & mb != 0).count();
        probs[2 * gather(i, &a1) + singlets % 2] += p;
    }
    ProbabilityTable::new(probs, OutcomeSpace::Joint { d_a1: part.d_a1() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ZERO;

    #[test]
    fn singlet_on_the_pair_gives_negative_sign() {
        // A = {0, 1}, A2 = {1}, B = {2}; |b0 = 1⟩_{A1} ⊗ |Ψ−⟩.
        let part = BipartitionSpec::contiguous(2, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![ZERO; 8];
        v[0b101] = c64::new(h, 0.0);
        v[0b110] = c64::new(-h, 0.0);
        let s = QuantumState::pure(3, v).unwrap();
        let t = ptme_table_of_rotated(&s, &part).unwrap();
        let (plus, minus) = t.joint(1).unwrap();
        assert!(plus.abs() < 1e-15 && (minus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_state_gives_positive_sign() {
        let part = BipartitionSpec::contiguous(2, 1).unwrap();
        let s = QuantumState::basis(3, 0b000).unwrap();
        let t = ptme_joint_probabilities_bell(&s, &CircuitDescription::identity(2), &part).unwrap();
        assert!((t.joint(0).unwrap().0 - 1.0).abs() < 1e-15);
    }
}
