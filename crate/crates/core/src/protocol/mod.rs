//! End-to-end single-trial pipelines.
//!
//! Data collection never looks at the observables, so any number of them can
//! be estimated afterwards from the same records.

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{
    build_histogram, estimate_all, histogram_quasi_probabilities, CollisionHistogram, EstimatorSet, ObservableMode,
};
use crate::inversion::{moments_from_zeta, observable_powers_from_xi, pt_moments_from_zeta, MomentSet, PtMomentSet};
use crate::qcore::{BipartitionSpec, ObservableSpec, QuantumState};
use crate::randomness::{
    apply_circuit, apply_circuit_on, sample_circuit, CircuitDescription, EnsembleKind, SeedSpec, StreamPurpose,
    UnitaryEnsembleConfig,
};
use crate::sampler::{probabilities_of, ptme_table_of_rotated, sample_outcomes, ProbabilityTable};

/// One random unitary and the histogram of its `N_M` outcomes.
#[derive(Clone, Debug)]
pub struct UnitaryRecord {
    pub circuit: CircuitDescription,
    pub histogram: CollisionHistogram,
}

fn check_budget(n_u: usize, n_m: usize, t: u32) -> Result<()> {
    if n_u == 0 || n_m == 0 {
        return Err(Error::InvalidConfig("N_U and N_M must be positive".into()));
    }
    if (t as usize) > n_m {
        return Err(Error::OrderOutOfRange { k: t as usize, min: 1, max: n_m });
    }
    Ok(())
}

/// Histogram of `n_m` samples from a table.
pub fn sample_histogram<R: Rng + ?Sized>(
    table: &ProbabilityTable,
    n_m: usize,
    rng: &mut R,
) -> Result<CollisionHistogram> {
    build_histogram(&sample_outcomes(table, n_m, rng))
}

/// One `(trial, unitary)` unit of the measurement stage: draw the unitary,
/// rotate the state, sample `n_m` outcomes.
pub fn cbne_unit(
    state: &QuantumState,
    ensemble: &UnitaryEnsembleConfig,
    n_m: usize,
    seed: &SeedSpec,
    trial: u64,
    unitary: u64,
) -> Result<UnitaryRecord> {
    let circuit = sample_circuit(ensemble, &mut seed.rng(StreamPurpose::Circuit, trial, unitary))?;
    let table = probabilities_of(&apply_circuit(state, &circuit)?)?;
    let histogram = sample_histogram(&table, n_m, &mut seed.rng(StreamPurpose::Outcomes, trial, unitary))?;
    Ok(UnitaryRecord { circuit, histogram })
}

/// Measurement stage: `n_u` random unitaries on the whole register, `n_m` shots each.
pub fn collect_cbne(
    state: &QuantumState,
    ensemble: EnsembleKind,
    n_u: usize,
    n_m: usize,
    seed: &SeedSpec,
    trial: u64,
) -> Result<Vec<UnitaryRecord>> {
    check_budget(n_u, n_m, 1)?;
    let cfg = UnitaryEnsembleConfig::new(ensemble, state.n_qubits())?;
    (0..n_u as u64).map(|s| cbne_unit(state, &cfg, n_m, seed, trial, s)).collect()
}

/// Averaged estimators and everything recovered from them.
#[derive(Clone, Debug)]
pub struct CbneEstimate {
    /// `ζ̂_k` for `k = 2..=t`.
    pub zeta: Vec<f64>,
    pub moments: MomentSet,
    /// `ξ̂_k` for `k = 1..=t`, per observable.
    pub xi: Vec<Vec<f64>>,
    /// Estimated `Tr(Oρ^k)` for `k = 1..=t`, per observable.
    pub observable_powers: Vec<Vec<f64>>,
    pub per_unitary: Vec<EstimatorSet>,
}

fn mean_columns(rows: impl Iterator<Item = Vec<f64>>, len: usize) -> Vec<f64> {
    let mut acc = vec![0.0; len];
    let mut n = 0usize;
    for r in rows {
        acc.iter_mut().zip(&r).for_each(|(a, x)| *a += x);
        n += 1;
    }
    acc.into_iter().map(|a| a / n as f64).collect()
}

fn check_order(t: u32) -> Result<()> {
    if t < 2 {
        return Err(Error::OrderOutOfRange { k: t as usize, min: 2, max: crate::inversion::MAX_ORDER });
    }
    Ok(())
}

/// Estimators of one unit. The circuit is only needed here, for the
/// quasi-probabilities, and can be dropped afterwards.
pub fn estimate_cbne_unit(
    record: &UnitaryRecord,
    observables: &[ObservableSpec],
    t: u32,
    d: usize,
    mode: ObservableMode,
) -> Result<EstimatorSet> {
    let quasi = observables
        .iter()
        .map(|o| histogram_quasi_probabilities(&record.histogram, o, &record.circuit, mode))
        .collect::<Result<Vec<_>>>()?;
    estimate_all(&record.histogram, t, d, &quasi, None)
}

/// Averages per-unit estimators over unitaries and inverts.
pub fn combine_cbne(
    per_unitary: Vec<EstimatorSet>,
    observables: &[ObservableSpec],
    t: u32,
    d: usize,
    mode: ObservableMode,
) -> Result<CbneEstimate> {
    if per_unitary.is_empty() {
        return Err(Error::MissingInputs("no unitary records".into()));
    }
    check_order(t)?;
    let tl = t as usize;
    let zeta = mean_columns(per_unitary.iter().map(|e| e.m_hat.clone()), tl - 1);
    let moments = moments_from_zeta(&zeta)?;
    let mut xi = Vec::with_capacity(observables.len());
    let mut powers = Vec::with_capacity(observables.len());
    for (i, o) in observables.iter().enumerate() {
        let x = mean_columns(per_unitary.iter().map(|e| e.gamma_hat[i].clone()), tl);
        powers.push(observable_powers_from_xi(&x, &moments, o.trace(), d, mode)?);
        xi.push(x);
    }
    Ok(CbneEstimate { zeta, moments, xi, observable_powers: powers, per_unitary })
}

/// Postprocessing stage: estimators per unitary, averaging over unitaries, inversion.
pub fn estimate_cbne(
    records: &[UnitaryRecord],
    observables: &[ObservableSpec],
    t: u32,
    d: usize,
    mode: ObservableMode,
) -> Result<CbneEstimate> {
    check_order(t)?;
    let per_unitary = records
        .iter()
        .enumerate()
        .map(|(s, r)| {
            let mut set = estimate_cbne_unit(r, observables, t, d, mode)?;
            set.unitary_index = s;
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    combine_cbne(per_unitary, observables, t, d, mode)
}

/// Collection followed by estimation for one trial.
#[allow(clippy::too_many_arguments)]
pub fn run_cbne_trial(
    state: &QuantumState,
    observables: &[ObservableSpec],
    ensemble: EnsembleKind,
    t: u32,
    n_u: usize,
    n_m: usize,
    mode: ObservableMode,
    seed: &SeedSpec,
    trial: u64,
) -> Result<CbneEstimate> {
    check_budget(n_u, n_m, t)?;
    let records = collect_cbne(state, ensemble, n_u, n_m, seed, trial)?;
    estimate_cbne(&records, observables, t, state.dim(), mode)
}

/// One `(trial, unitary)` unit of the partial-transpose protocol. The
/// unitary acts on `A`; `A1` is read out in the computational basis and the
/// `(A2, B)` pairs fix the parity sign.
pub fn ptme_unit(
    state: &QuantumState,
    part: &BipartitionSpec,
    ensemble: &UnitaryEnsembleConfig,
    n_m: usize,
    seed: &SeedSpec,
    trial: u64,
    unitary: u64,
) -> Result<UnitaryRecord> {
    let circuit = sample_circuit(ensemble, &mut seed.rng(StreamPurpose::Circuit, trial, unitary))?;
    let rotated = apply_circuit_on(state, &circuit, part.qubits_a())?;
    let table = ptme_table_of_rotated(&rotated, part)?;
    let histogram = sample_histogram(&table, n_m, &mut seed.rng(StreamPurpose::Outcomes, trial, unitary))?;
    Ok(UnitaryRecord { circuit, histogram })
}

pub fn collect_ptme(
    state: &QuantumState,
    part: &BipartitionSpec,
    ensemble: EnsembleKind,
    n_u: usize,
    n_m: usize,
    seed: &SeedSpec,
    trial: u64,
) -> Result<Vec<UnitaryRecord>> {
    check_budget(n_u, n_m, 1)?;
    let cfg = UnitaryEnsembleConfig::new(ensemble, part.qubits_a().len())?;
    (0..n_u as u64).map(|s| ptme_unit(state, part, &cfg, n_m, seed, trial, s)).collect()
}

#[derive(Clone, Debug)]
pub struct PtmeEstimate {
    /// `ζ̂^PT_k` for `k = 2..=t`.
    pub zeta_pt: Vec<f64>,
    pub pt_moments: PtMomentSet,
    pub per_unitary: Vec<EstimatorSet>,
}

pub fn estimate_ptme_unit(record: &UnitaryRecord, t: u32, part: &BipartitionSpec) -> Result<EstimatorSet> {
    estimate_all(&record.histogram, t, part.d_a1(), &[], Some((part.d_a(), part.d_a1())))
}

pub fn combine_ptme(per_unitary: Vec<EstimatorSet>, t: u32) -> Result<PtmeEstimate> {
    if per_unitary.is_empty() {
        return Err(Error::MissingInputs("no unitary records".into()));
    }
    check_order(t)?;
    let zeta_pt = mean_columns(per_unitary.iter().map(|e| e.lambda_hat.clone()), t as usize - 1);
    let pt_moments = pt_moments_from_zeta(&zeta_pt)?;
    Ok(PtmeEstimate { zeta_pt, pt_moments, per_unitary })
}

pub fn estimate_ptme(records: &[UnitaryRecord], t: u32, part: &BipartitionSpec) -> Result<PtmeEstimate> {
    check_order(t)?;
    let per_unitary = records
        .iter()
        .enumerate()
        .map(|(s, r)| {
            let mut set = estimate_ptme_unit(r, t, part)?;
            set.unitary_index = s;
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    combine_ptme(per_unitary, t)
}

#[allow(clippy::too_many_arguments)]
pub fn run_ptme_trial(
    state: &QuantumState,
    part: &BipartitionSpec,
    ensemble: EnsembleKind,
    t: u32,
    n_u: usize,
    n_m: usize,
    seed: &SeedSpec,
    trial: u64,
) -> Result<PtmeEstimate> {
    check_budget(n_u, n_m, t)?;
    let records = collect_ptme(state, part, ensemble, n_u, n_m, seed, trial)?;
    estimate_ptme(&records, t, part)
}
