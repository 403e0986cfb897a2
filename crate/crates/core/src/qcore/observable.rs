use std::collections::BTreeMap;

use faer::Mat;

use super::gates::bit_position;
use super::matrix::{self, c64, CMat, ONE, ZERO};
use super::state::check_pure_cap;
use crate::error::{Error, Result};

const HERM_TOL: f64 = 1e-10;
/// Imaginary parts above this in a quadratic form mean the operator is not Hermitian.
pub const IMAG_RESIDUE_TOL: f64 = 1e-6;

/// A tensor product of single-qubit Paulis, stored as bit masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: usize,
    z_mask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_pure_cap(n)?;
        let (mut x, mut z, mut n_y) = (0usize, 0usize, 0u32);
        for (q, ch) in s.chars().enumerate() {
            let bit = 1usize << bit_position(n, q);
            match ch.to_ascii_uppercase() {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                    n_y += 1;
                }
                other => return Err(Error::InvalidObservable(format!("unknown Pauli letter {other:?}"))),
            }
        }
        Ok(Self { n_qubits: n, x_mask: x, z_mask: z, n_y })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, x_mask: 0, z_mask: 0, n_y: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn letter(&self, q: usize) -> char {
        let bit = 1usize << bit_position(self.n_qubits, q);
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Appends `suffix` as extra, less significant qubits.
    pub fn extend(&self, suffix: &PauliString) -> Self {
        let m = suffix.n_qubits;
        Self {
            n_qubits: self.n_qubits + m,
            x_mask: (self.x_mask << m) | suffix.x_mask,
            z_mask: (self.z_mask << m) | suffix.z_mask,
            n_y: self.n_y + suffix.n_y,
        }
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩`.
    #[inline]
    fn phase(&self, b: usize) -> c64 {
        let sign = if (b & self.z_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        match self.n_y % 4 {
            0 => c64::new(sign, 0.0),
            1 => c64::new(0.0, sign),
            2 => c64::new(-sign, 0.0),
            _ => c64::new(0.0, -sign),
        }
    }

    /// `v† P v` in `O(d)`.
    pub fn expectation(&self, v: &[c64]) -> c64 {
        let mut acc = ZERO;
        for (b, &vb) in v.iter().enumerate() {
            acc += v[b ^ self.x_mask].conj() * self.phase(b) * vb;
        }
        acc
    }

    pub fn to_dense(&self) -> CMat {
        let d = 1usize << self.n_qubits;
        let mut m = Mat::zeros(d, d);
        for b in 0..d {
            m[(b ^ self.x_mask, b)] = self.phase(b);
        }
        m
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for q in 0..self.n_qubits {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

#[derive(Clone, Debug)]
pub enum ObservableKind {
    Dense(CMat),
    PauliSum(Vec<PauliTerm>),
    RankOneProjector(Vec<c64>),
    Identity,
    /// `O ⊗ |0…0⟩⟨0…0|` on `n_a` trailing ancillas, kept in factored form.
    ZeroExtended {
        base: Box<ObservableSpec>,
        n_a: usize,
    },
}

/// Hermitian observable with cached scalars used by the estimators.
#[derive(Clone, Debug)]
pub struct ObservableSpec {
    n_qubits: usize,
    kind: ObservableKind,
    trace: f64,
    frobenius_sq: f64,
    op_norm_bound: f64,
}

impl ObservableSpec {
    pub fn dense(n_qubits: usize, m: CMat) -> Result<Self> {
        super::state::check_dense_cap(n_qubits)?;
        let d = 1usize << n_qubits;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
        }
        let res = matrix::hermitian_residue(&m);
        if res > HERM_TOL {
            return Err(Error::NonHermitian(res));
        }
        let trace = matrix::trace(&m).re;
        let mut fro = 0.0;
        for j in 0..d {
            for i in 0..d {
                fro += m[(i, j)].norm_sqr();
            }
        }
        let frobenius_sq = (fro - trace * trace / d as f64).max(0.0);
        Ok(Self { n_qubits, kind: ObservableKind::Dense(m), trace, frobenius_sq, op_norm_bound: fro.sqrt() })
    }

    /// Merges repeated strings and drops zero coefficients.
    pub fn pauli_sum(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        check_pure_cap(n_qubits)?;
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for t in terms {
            if t.string.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch { expected: n_qubits, found: t.string.n_qubits() });
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidObservable("non-finite Pauli coefficient".into()));
            }
            *merged.entry(t.string).or_insert(0.0) += t.coeff;
        }
        let terms: Vec<PauliTerm> =
            merged.into_iter().filter(|(_, c)| *c != 0.0).map(|(string, coeff)| PauliTerm { coeff, string }).collect();
        let d = (1usize << n_qubits) as f64;
        let trace = terms.iter().filter(|t| t.string.is_identity()).map(|t| t.coeff * d).sum();
        let frobenius_sq = terms.iter().filter(|t| !t.string.is_identity()).map(|t| t.coeff * t.coeff * d).sum();
        let op_norm_bound = terms.iter().map(|t| t.coeff.abs()).sum();
        Ok(Self { n_qubits, kind: ObservableKind::PauliSum(terms), trace, frobenius_sq, op_norm_bound })
    }

    pub fn pauli(n_qubits: usize, spec: &[(f64, &str)]) -> Result<Self> {
        let terms = spec
            .iter()
            .map(|(c, s)| Ok(PauliTerm { coeff: *c, string: PauliString::parse(s)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::pauli_sum(n_qubits, terms)
    }

    pub fn projector(n_qubits: usize, psi: Vec<c64>) -> Result<Self> {
        check_pure_cap(n_qubits)?;
        let d = 1usize << n_qubits;
        if psi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: psi.len() });
        }
        let norm = matrix::norm_sqr(&psi).sqrt();
        if (norm - 1.0).abs() > HERM_TOL {
            return Err(Error::Normalization(norm));
        }
        Ok(Self {
            n_qubits,
            kind: ObservableKind::RankOneProjector(psi),
            trace: 1.0,
            frobenius_sq: 1.0 - 1.0 / d as f64,
            op_norm_bound: 1.0,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            kind: ObservableKind::Identity,
            trace: (1usize << n_qubits) as f64,
            frobenius_sq: 0.0,
            op_norm_bound: 1.0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn kind(&self) -> &ObservableKind {
        &self.kind
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `Tr(O₀²)` of the traceless part.
    pub fn frobenius_sq(&self) -> f64 {
        self.frobenius_sq
    }

    /// The `max{Tr(O₀²), 1}` resource parameter.
    pub fn resource_bound(&self) -> f64 {
        self.frobenius_sq.max(1.0)
    }

    pub fn op_norm_bound(&self) -> f64 {
        self.op_norm_bound
    }

    pub fn to_dense(&self) -> Result<CMat> {
        super::state::check_dense_cap(self.n_qubits)?;
        let d = self.dim();
        Ok(match &self.kind {
            ObservableKind::Dense(m) => m.clone(),
            ObservableKind::PauliSum(terms) => {
                let mut m = Mat::zeros(d, d);
                for t in terms {
                    m += matrix::scale(&t.string.to_dense(), t.coeff);
                }
                m
            }
            ObservableKind::RankOneProjector(psi) => matrix::outer(psi, psi),
            ObservableKind::Identity => matrix::identity(d),
            ObservableKind::ZeroExtended { base, n_a } => {
                let da = 1usize << n_a;
                let p0 = Mat::from_fn(da, da, |i, j| if i == 0 && j == 0 { ONE } else { ZERO });
                matrix::kron(&base.to_dense()?, &p0)
            }
        })
    }

    /// `O ⊗ |0…0⟩⟨0…0|` on `n_a` extra trailing qubits.
    pub fn extend_with_zero_projector(&self, n_a: usize) -> Result<Self> {
        if n_a == 0 {
            return Ok(self.clone());
        }
        let n = self.n_qubits + n_a;
        check_pure_cap(n)?;
        match &self.kind {
            ObservableKind::RankOneProjector(psi) => {
                let e0 = matrix::basis_vector(1 << n_a, 0);
                Self::projector(n, matrix::kron_vec(psi, &e0))
            }
            ObservableKind::ZeroExtended { base, n_a: inner } => base.extend_with_zero_projector(inner + n_a),
            _ => {
                let d_ext = (1usize << n) as f64;
                let d = self.dim() as f64;
                let tr2 = self.trace * self.trace;
                Ok(Self {
                    n_qubits: n,
                    kind: ObservableKind::ZeroExtended { base: Box::new(self.clone()), n_a },
                    trace: self.trace,
                    frobenius_sq: (self.frobenius_sq + tr2 / d - tr2 / d_ext).max(0.0),
                    op_norm_bound: self.op_norm_bound,
                })
            }
        }
    }

    /// `v† O v` without the imaginary-residue check.
    pub fn quadratic_raw(&self, v: &[c64]) -> c64 {
        match &self.kind {
            ObservableKind::Dense(m) => matrix::quadratic(m, v),
            ObservableKind::PauliSum(terms) => terms.iter().map(|t| t.string.expectation(v) * t.coeff).sum(),
            ObservableKind::RankOneProjector(psi) => c64::new(matrix::inner(psi, v).norm_sqr(), 0.0),
            ObservableKind::Identity => c64::new(matrix::norm_sqr(v), 0.0),
            ObservableKind::ZeroExtended { base, n_a } => {
                let sys: Vec<c64> = (0..base.dim()).map(|j| v[j << n_a]).collect();
                base.quadratic_raw(&sys)
            }
        }
    }
}

/// `v† O v` for a vector of matching dimension.
pub fn quadratic_form(o: &ObservableSpec, v: &[c64]) -> Result<f64> {
    if v.len() != o.dim() {
        return Err(Error::DimensionMismatch { expected: o.dim(), found: v.len() });
    }
    let z = o.quadratic_raw(v);
    let scale = o.op_norm_bound().max(1.0) * matrix::norm_sqr(v).max(1.0);
    if z.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(Error::NonHermitian(z.im.abs()));
    }
    Ok(z.re)
}
