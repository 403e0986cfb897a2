use faer::Mat;

use super::matrix::{self, c64, CMat, ZERO};
use crate::error::{Error, Result};

/// Largest register held as a statevector.
pub const MAX_PURE_QUBITS: usize = 22;
/// Largest register held as a dense density operator.
pub const MAX_DENSE_QUBITS: usize = 12;

const STATE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as exact zeros.
pub const CLAMP_TOL: f64 = 1e-8;

/// `Σ wᵢ |vᵢ⟩⟨vᵢ| + white · I/d` with orthonormal `vᵢ`.
///
/// This is an eigendecomposition held in factored form, so Gibbs states and
/// depolarized pure states never need a `d × d` matrix.
#[derive(Clone, Debug)]
pub struct Mixture {
    pub weights: Vec<f64>,
    /// Columns are the vectors `vᵢ`.
    pub vectors: CMat,
    pub white: f64,
}

#[derive(Clone, Debug)]
pub enum Representation {
    Pure(Vec<c64>),
    Density(CMat),
    Mixture(Mixture),
}

#[derive(Clone, Debug)]
pub struct QuantumState {
    n_qubits: usize,
    repr: Representation,
}

pub(crate) fn check_pure_cap(n: usize) -> Result<()> {
    if n > MAX_PURE_QUBITS {
        return Err(Error::CapExceeded { what: "statevector qubits", n, max: MAX_PURE_QUBITS });
    }
    Ok(())
}

pub(crate) fn check_dense_cap(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::CapExceeded { what: "density-operator qubits", n, max: MAX_DENSE_QUBITS });
    }
    Ok(())
}

impl QuantumState {
    pub fn pure(n_qubits: usize, amps: Vec<c64>) -> Result<Self> {
        check_pure_cap(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: amps.len() });
        }
        let norm = matrix::norm_sqr(&amps).sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Normalization(norm));
        }
        Ok(Self { n_qubits, repr: Representation::Pure(amps) })
    }

    /// Normalizes `amps` before wrapping it.
    pub fn pure_normalized(n_qubits: usize, mut amps: Vec<c64>) -> Result<Self> {
        let norm = matrix::norm_sqr(&amps).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Normalization(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::pure(n_qubits, amps)
    }

    pub fn basis(n_qubits: usize, b: usize) -> Result<Self> {
        check_pure_cap(n_qubits)?;
        Self::pure(n_qubits, matrix::basis_vector(1 << n_qubits, b))
    }

    /// Validates Hermiticity and trace; positivity is checked by an
    /// eigendecomposition when `d ≤ 1024`.
    pub fn density(n_qubits: usize, rho: CMat) -> Result<Self> {
        check_dense_cap(n_qubits)?;
        let d = 1usize << n_qubits;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rho.nrows() });
        }
        let res = matrix::hermitian_residue(&rho);
        if res > STATE_TOL {
            return Err(Error::NonHermitian(res));
        }
        let tr = matrix::trace(&rho).re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::Normalization(tr));
        }
        if d <= 1024 {
            let min = matrix::eigvalsh(&rho)?.into_iter().fold(f64::INFINITY, f64::min);
            if min < -STATE_TOL {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { n_qubits, repr: Representation::Density(rho) })
    }

    pub fn mixture(n_qubits: usize, weights: Vec<f64>, vectors: CMat, white: f64) -> Result<Self> {
        check_pure_cap(n_qubits)?;
        let d = 1usize << n_qubits;
        if vectors.nrows() != d {
            return Err(Error::DimensionMismatch { expected: d, found: vectors.nrows() });
        }
        if vectors.ncols() != weights.len() {
            return Err(Error::DimensionMismatch { expected: weights.len(), found: vectors.ncols() });
        }
        if weights.iter().any(|&w| !(w >= 0.0)) || !(white >= 0.0) {
            return Err(Error::InvalidState("mixture weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum::<f64>() + white;
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::Normalization(total));
        }
        let gram = vectors.adjoint() * &vectors;
        let dev = matrix::max_abs_diff(&gram, &matrix::identity(weights.len()));
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!("mixture vectors not orthonormal ({dev:e})")));
        }
        Ok(Self { n_qubits, repr: Representation::Mixture(Mixture { weights, vectors, white }) })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        Self::mixture(n_qubits, vec![], Mat::zeros(1 << n_qubits, 0), 1.0)
    }

    /// Wraps an already-validated representation; used after unitary evolution.
    pub(crate) fn from_repr_unchecked(n_qubits: usize, repr: Representation) -> Self {
        Self { n_qubits, repr }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn repr(&self) -> &Representation {
        &self.repr
    }

    pub fn is_pure_vector(&self) -> bool {
        matches!(self.repr, Representation::Pure(_))
    }

    pub fn as_pure(&self) -> Option<&[c64]> {
        match &self.repr {
            Representation::Pure(v) => Some(v),
            _ => None,
        }
    }

    /// Same eigenvectors with new weights, for families such as Gibbs states
    /// at several temperatures.
    pub fn with_mixture_weights(&self, weights: Vec<f64>, white: f64) -> Result<Self> {
        match &self.repr {
            Representation::Mixture(m) => Self::mixture(self.n_qubits, weights, m.vectors.clone(), white),
            _ => Err(Error::InvalidState("state is not held as a mixture".into())),
        }
    }

    pub fn to_density(&self) -> Result<CMat> {
        check_dense_cap(self.n_qubits)?;
        let d = self.dim();
        Ok(match &self.repr {
            Representation::Pure(v) => matrix::outer(v, v),
            Representation::Density(r) => r.clone(),
            Representation::Mixture(m) => {
                let mut rho = Mat::from_fn(d, d, |i, j| if i == j { c64::new(m.white / d as f64, 0.0) } else { ZERO });
                for (k, &w) in m.weights.iter().enumerate() {
                    let v = m.vectors.col_as_slice(k);
                    for j in 0..d {
                        let vj = v[j].conj() * w;
                        if vj == ZERO {
                            continue;
                        }
                        let col = rho.col_as_slice_mut(j);
                        for i in 0..d {
                            col[i] += v[i] * vj;
                        }
                    }
                }
                rho
            }
        })
    }

    /// Eigenpairs `(λᵢ, vᵢ)` plus the multiplicity and value of an implicit
    /// flat remainder (nonzero only for mixtures with white noise).
    pub(crate) fn spectral_form(&self) -> Result<Spectral> {
        let d = self.dim();
        Ok(match &self.repr {
            Representation::Pure(v) => Spectral {
                values: vec![1.0],
                vectors: Mat::from_fn(d, 1, |i, _| v[i]),
                rest_value: 0.0,
                rest_count: d - 1,
            },
            Representation::Density(r) => {
                let (vals, vecs) = matrix::eigh(r)?;
                Spectral {
                    values: vals.into_iter().map(clamp_eigenvalue).collect(),
                    vectors: vecs,
                    rest_value: 0.0,
                    rest_count: 0,
                }
            }
            Representation::Mixture(m) => {
                let flat = m.white / d as f64;
                Spectral {
                    values: m.weights.iter().map(|w| w + flat).collect(),
                    vectors: m.vectors.clone(),
                    rest_value: flat,
                    rest_count: d - m.weights.len(),
                }
            }
        })
    }

    /// All eigenvalues, ascending, with tiny negatives clamped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let s = self.spectral_form()?;
        let mut vals = s.values;
        vals.extend(std::iter::repeat(s.rest_value).take(s.rest_count));
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// `⟨b|ρ|b⟩` for every basis state.
    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        match &self.repr {
            Representation::Pure(v) => v.iter().map(|a| a.norm_sqr()).collect(),
            Representation::Density(r) => (0..d).map(|i| r[(i, i)].re).collect(),
            Representation::Mixture(m) => {
                let mut p = vec![m.white / d as f64; d];
                for (k, &w) in m.weights.iter().enumerate() {
                    for (pi, a) in p.iter_mut().zip(m.vectors.col_as_slice(k)) {
                        *pi += w * a.norm_sqr();
                    }
                }
                p
            }
        }
    }
}

pub(crate) struct Spectral {
    pub values: Vec<f64>,
    pub vectors: CMat,
    pub rest_value: f64,
    pub rest_count: usize,
}

pub(crate) fn clamp_eigenvalue(x: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ONE;

    #[test]
    fn rejects_unnormalized_vector() {
        assert!(QuantumState::pure(1, vec![ONE, ONE]).is_err());
    }

    #[test]
    fn mixture_density_has_unit_trace() {
        let s = QuantumState::mixture(2, vec![0.5], Mat::from_fn(4, 1, |i, _| if i == 3 { ONE } else { ZERO }), 0.5)
            .unwrap();
        let rho = s.to_density().unwrap();
        assert!((matrix::trace(&rho).re - 1.0).abs() < 1e-14);
        assert!((rho[(3, 3)].re - 0.625).abs() < 1e-14);
    }

    #[test]
    fn dense_cap_enforced() {
        let s = QuantumState::basis(13, 0).unwrap();
        assert!(matches!(s.to_density(), Err(Error::CapExceeded { .. })));
    }
}
