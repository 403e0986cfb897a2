use crate::error::{Error, Result};

/// Split of the register into `A = A1 ∪ A2` and `B`, with `A2[i]` paired to `B[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitionSpec {
    n_qubits: usize,
    qubits_a: Vec<usize>,
    qubits_b: Vec<usize>,
    qubits_a1: Vec<usize>,
    qubits_a2: Vec<usize>,
}

impl BipartitionSpec {
    /// `A1` is `A` minus `A2`, in the order given for `A`.
    pub fn new(n_qubits: usize, qubits_a: Vec<usize>, qubits_b: Vec<usize>, qubits_a2: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for &q in qubits_a.iter().chain(&qubits_b) {
            if q >= n_qubits || seen[q] {
                return Err(Error::InvalidPartition(format!("qubit {q} out of range or repeated")));
            }
            seen[q] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("A and B must cover every qubit".into()));
        }
        if qubits_a.len() < qubits_b.len() {
            return Err(Error::InvalidPartition("|A| must be at least |B|".into()));
        }
        if qubits_a2.len() != qubits_b.len() {
            return Err(Error::InvalidPartition("|A2| must equal |B|".into()));
        }
        let mut a2_seen = vec![false; n_qubits];
        for &q in &qubits_a2 {
            if !qubits_a.contains(&q) || a2_seen[q] {
                return Err(Error::InvalidPartition(format!("A2 qubit {q} not a distinct member of A")));
            }
            a2_seen[q] = true;
        }
        let qubits_a1 = qubits_a.iter().copied().filter(|q| !a2_seen[*q]).collect();
        Ok(Self { n_qubits, qubits_a, qubits_b, qubits_a1, qubits_a2 })
    }

    /// `A = 0..n_a`, `B = n_a..n_a+n_b`, and `A2` the last `n_b` qubits of `A`.
    pub fn contiguous(n_a: usize, n_b: usize) -> Result<Self> {
        if n_b > n_a {
            return Err(Error::InvalidPartition("|A| must be at least |B|".into()));
        }
        let n = n_a + n_b;
        Self::new(n, (0..n_a).collect(), (n_a..n).collect(), (n_a - n_b..n_a).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn qubits_a(&self) -> &[usize] {
        &self.qubits_a
    }
    pub fn qubits_b(&self) -> &[usize] {
        &self.qubits_b
    }
    pub fn qubits_a1(&self) -> &[usize] {
        &self.qubits_a1
    }
    pub fn qubits_a2(&self) -> &[usize] {
        &self.qubits_a2
    }
    pub fn d_a(&self) -> usize {
        1 << self.qubits_a.len()
    }
    pub fn d_b(&self) -> usize {
        1 << self.qubits_b.len()
    }
    pub fn d_a1(&self) -> usize {
        1 << self.qubits_a1.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unbalanced_a2() {
        assert!(BipartitionSpec::new(3, vec![0, 1], vec![2], vec![]).is_err());
        assert!(BipartitionSpec::new(3, vec![0], vec![1, 2], vec![0]).is_err());
    }

    #[test]
    fn contiguous_layout() {
        let p = BipartitionSpec::contiguous(3, 1).unwrap();
        assert_eq!(p.qubits_a1(), &[0, 1]);
        assert_eq!(p.qubits_a2(), &[2]);
        assert_eq!(p.qubits_b(), &[3]);
        assert_eq!((p.d_a(), p.d_a1(), p.d_b()), (8, 4, 2));
    }
}
