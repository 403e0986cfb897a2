//! In-place gate application on statevectors.
//!
//! Qubit 0 is the most significant bit of a basis index, so qubit `q` of an
//! `n`-qubit register lives at bit position `n - 1 - q`.

use super::matrix::{c64, CMat, ZERO};

#[inline]
pub fn bit_position(n: usize, q: usize) -> usize {
    n - 1 - q
}

#[inline]
fn insert_zero_bit(x: usize, pos: usize) -> usize {
    let low = x & ((1usize << pos) - 1);
    ((x >> pos) << (pos + 1)) | low
}

/// Spreads the bits of `x` around zeros at the given ascending bit positions.
#[inline]
fn insert_zero_bits(mut x: usize, sorted_positions: &[usize]) -> usize {
    for &p in sorted_positions {
        x = insert_zero_bit(x, p);
    }
    x
}

/// Applies a 4×4 gate stored column-major to qubits `(qa, qb)`; `qa` is the
/// more significant qubit of the gate's local basis.
pub fn apply_two_qubit(amps: &mut [c64], n: usize, qa: usize, qb: usize, gate: &[c64; 16]) {
    debug_assert_eq!(amps.len(), 1 << n);
    debug_assert!(qa != qb && qa < n && qb < n);
    let pa = bit_position(n, qa);
    let pb = bit_position(n, qb);
    let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
    let ma = 1usize << pa;
    let mb = 1usize << pb;
    let quarter = amps.len() >> 2;
    for i in 0..quarter {
        let base = insert_zero_bit(insert_zero_bit(i, lo), hi);
        let idx = [base, base | mb, base | ma, base | ma | mb];
        let x = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            amps[idx[r]] = gate[r] * x[0] + gate[r + 4] * x[1] + gate[r + 8] * x[2] + gate[r + 12] * x[3];
        }
    }
}

/// Applies a dense `2^m × 2^m` gate to the listed qubits; `qubits[0]` is the
/// most significant qubit of the gate's local basis.
pub fn apply_multi_qubit(amps: &mut [c64], n: usize, qubits: &[usize], gate: &CMat) {
    let m = qubits.len();
    let dl = 1usize << m;
    debug_assert_eq!(gate.nrows(), dl);
    debug_assert_eq!(amps.len(), 1 << n);
    if m == n && qubits.iter().enumerate().all(|(i, &q)| i == q) {
        let out = super::matrix::matvec(gate, amps);
        amps.copy_from_slice(&out);
        return;
    }
    let offsets: Vec<usize> = (0..dl)
        .map(|l| (0..m).filter(|k| (l >> (m - 1 - k)) & 1 == 1).map(|k| 1usize << bit_position(n, qubits[k])).sum())
        .collect();
    let mut positions: Vec<usize> = qubits.iter().map(|&q| bit_position(n, q)).collect();
    positions.sort_unstable();
    let mut buf = vec![ZERO; dl];
    for i in 0..(amps.len() >> m) {
        let base = insert_zero_bits(i, &positions);
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (c, &x) in buf.iter().enumerate() {
                acc += gate[(r, c)] * x;
            }
            amps[base | o] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{identity, kron, max_abs_diff, ONE};
    use faer::Mat;

    fn cnot() -> [c64; 16] {
        let mut g = [ZERO; 16];
        // |00>->|00>, |01>->|01>, |10>->|11>, |11>->|10>
        g[0] = ONE;
        g[1 + 4] = ONE;
        g[3 + 8] = ONE;
        g[2 + 12] = ONE;
        g
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let mut v = vec![ZERO; 8];
        v[0b100] = ONE;
        apply_two_qubit(&mut v, 3, 0, 2, &cnot());
        assert_eq!(v[0b101], ONE);
        let mut w = vec![ZERO; 8];
        w[0b100] = ONE;
        apply_two_qubit(&mut w, 3, 2, 0, &cnot());
        assert_eq!(w[0b100], ONE);
    }

    #[test]
    fn multi_qubit_matches_kron_embedding() {
        let g = Mat::from_fn(4, 4, |i, j| c64::new((i * 4 + j) as f64, (i as f64) - (j as f64)));
        let full = kron(&identity(2), &kron(&g, &identity(2)));
        let v: Vec<c64> = (0..16).map(|i| c64::new(i as f64, 1.0 / (1.0 + i as f64))).collect();
        let mut w = v.clone();
        apply_multi_qubit(&mut w, 4, &[1, 2], &g);
        let expect = crate::qcore::matrix::matvec(&full, &v);
        let a = Mat::from_fn(16, 1, |i, _| w[i]);
        let b = Mat::from_fn(16, 1, |i, _| expect[i]);
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }
}
