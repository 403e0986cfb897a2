//! Builds the experiment from a config and runs its trials.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use collisim::analysis::{pce_estimate, qvc_fidelity_exact, witness_report, WitnessReport};
use collisim::estimators::{EstimatorSet, ObservableMode};
use collisim::inversion::MomentSet;
use collisim::models::{
    bell_state, build_hamiltonian, depolarize, gapped_state, ghz_state, principal_vector, random_mixed,
    random_pauli_observable, random_pure, HamiltonianSpec, SpectralHamiltonian,
};
use collisim::protocol::{
    cbne_unit, combine_cbne, combine_ptme, estimate_cbne_unit, estimate_ptme_unit, ptme_unit, CbneEstimate,
    PtmeEstimate,
};
use collisim::qcore::{
    exact_observable_powers, exact_pt_moments, exact_spectral_moments, quadratic_form, tensor_product, BipartitionSpec,
    ObservableSpec, QuantumState,
};
use collisim::randomness::{EnsembleKind, SeedSpec, StreamPurpose, UnitaryEnsembleConfig};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{
    Count, EnsembleName, ExperimentConfig, Mode, ModelName, ObservableKindName, PartitionConfig, Task,
};
use crate::error::CliError;
use crate::report::Row;

/// Everything a cell needs, with ancillas already attached.
pub struct Prepared {
    pub task: Task,
    pub n: usize,
    pub n_a: usize,
    pub n_u: usize,
    pub n_m: usize,
    pub t: u32,
    pub seed: u64,
    pub state: QuantumState,
    pub names: Vec<String>,
    pub observables: Vec<ObservableSpec>,
    pub part: Option<BipartitionSpec>,
    pub ensemble: UnitaryEnsembleConfig,
    pub mode: ObservableMode,
    pub floor: f64,
    pub hankel_m: Option<usize>,
    pub exact: BTreeMap<(String, u32), f64>,
}

pub enum TrialResult {
    Cbne(CbneEstimate),
    Ptme(PtmeEstimate),
}

fn setup<T>(r: collisim::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_setup)
}

fn soft<T>(r: collisim::Result<T>) -> Option<T> {
    r.ok()
}

fn base_state(
    cfg: &ExperimentConfig,
    seed: &SeedSpec,
    h: Option<&SpectralHamiltonian>,
) -> Result<QuantumState, CliError> {
    let st = &cfg.state;
    let n = st.n;
    let mut rng = seed.rng(StreamPurpose::State, 0, 0);
    let s = match st.model {
        ModelName::Tfim | ModelName::Heisenberg => {
            let h = h.expect("Hamiltonian models build one");
            match st.beta {
                Some(b) => setup(h.gibbs_state(b))?,
                None => setup(h.ground_state())?,
            }
        }
        ModelName::Ghz => setup(ghz_state(n))?,
        ModelName::Bell => {
            if n != 2 {
                return Err(CliError::Config("the Bell state has n = 2".into()));
            }
            bell_state()
        }
        ModelName::Basis => setup(QuantumState::basis(n, st.index))?,
        ModelName::RandomPure => setup(random_pure(n, &mut rng))?,
        ModelName::RandomMixed => setup(random_mixed(n, &mut rng))?,
        ModelName::Gapped => setup(gapped_state(n, st.lambda1.unwrap_or(0.6), st.lambda2.unwrap_or(0.3), &mut rng))?,
        ModelName::MaximallyMixed => setup(QuantumState::maximally_mixed(n))?,
    };
    if st.depolarize > 0.0 {
        return setup(depolarize(&s, st.depolarize));
    }
    Ok(s)
}

type SpectrumKey = (ModelName, usize, u64, u64);

/// Diagonalizations are kept for the life of the process; sweeps over
/// anything but the Hamiltonian reuse them.
static SPECTRA: Mutex<Vec<(SpectrumKey, Arc<SpectralHamiltonian>)>> = Mutex::new(Vec::new());

fn hamiltonian(cfg: &ExperimentConfig) -> Result<Option<Arc<SpectralHamiltonian>>, CliError> {
    let st = &cfg.state;
    let spec = match st.model {
        ModelName::Tfim => HamiltonianSpec::tfim(st.n, st.j, st.h),
        ModelName::Heisenberg => HamiltonianSpec::heisenberg(st.n, st.j),
        _ => return Ok(None),
    };
    let h_field = if st.model == ModelName::Tfim { st.h } else { 0.0 };
    let key = (st.model, st.n, st.j.to_bits(), h_field.to_bits());
    if let Some((_, s)) = SPECTRA.lock().expect("cache lock").iter().find(|(k, _)| *k == key) {
        return Ok(Some(s.clone()));
    }
    let m = setup(build_hamiltonian(&spec))?;
    let s = Arc::new(setup(SpectralHamiltonian::new(&m))?);
    SPECTRA.lock().expect("cache lock").push((key, s.clone()));
    Ok(Some(s))
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// `(system partition, partition with ancillas added to A)`.
fn partitions(p: &PartitionConfig, n: usize, n_a: usize) -> Result<(BipartitionSpec, BipartitionSpec), CliError> {
    let default_a2 = |a: &[usize]| {
        let a = sorted(a);
        a[a.len().saturating_sub(p.b.len())..].to_vec()
    };
    let a2 = p.a2.clone().unwrap_or_else(|| default_a2(&p.a));
    let sys = setup(BipartitionSpec::new(n, p.a.clone(), p.b.clone(), a2.clone()))?;
    let mut a_ext = p.a.clone();
    a_ext.extend(n..n + n_a);
    let a2_ext = p.a2.clone().unwrap_or_else(|| default_a2(&a_ext));
    let ext = setup(BipartitionSpec::new(n + n_a, a_ext, p.b.clone(), a2_ext))?;
    Ok((sys, ext))
}

fn ceil_log2(x: f64) -> usize {
    if x <= 1.0 {
        0
    } else {
        x.log2().ceil() as usize
    }
}

pub fn prepare(cfg: &ExperimentConfig, task: Task) -> Result<Prepared, CliError> {
    cfg.validate(task)?;
    let seed = SeedSpec::new(cfg.seed);
    let n = cfg.state.n;
    let h = hamiltonian(cfg)?;
    let base = base_state(cfg, &seed, h.as_deref())?;
    let ground = match (&h, task) {
        (Some(h), _)
            if task == Task::Qvc || cfg.observables.iter().any(|o| o.kind == ObservableKindName::GroundProjector) =>
        {
            Some(setup(h.ground_state())?)
        }
        _ => None,
    };
    let ground_projector = || -> Result<ObservableSpec, CliError> {
        let g = ground.as_ref().expect("ground state built when needed");
        setup(ObservableSpec::projector(n, g.as_pure().expect("ground states are pure").to_vec()))
    };

    let (names, observables) = if task == Task::Qvc {
        (vec!["ground".to_string()], vec![ground_projector()?])
    } else if task.is_partial_transpose() {
        (vec![], vec![])
    } else {
        let mut names = Vec::new();
        let mut obs = Vec::new();
        for (i, o) in cfg.observables.iter().enumerate() {
            let spec = match o.kind {
                ObservableKindName::Pauli => {
                    let terms: Vec<(f64, &str)> = o.pauli.iter().map(|(c, s)| (*c, s.as_str())).collect();
                    setup(ObservableSpec::pauli(n, &terms))?
                }
                ObservableKindName::RandomPauli => {
                    setup(random_pauli_observable(n, &mut seed.rng(StreamPurpose::Observable, 0, i as u64)))?
                }
                ObservableKindName::GroundProjector => ground_projector()?,
                ObservableKindName::Identity => ObservableSpec::identity(n),
            };
            names.push(o.name.clone());
            obs.push(spec);
        }
        (names, obs)
    };

    let bound = observables.iter().map(|o| o.resource_bound()).fold(1.0, f64::max);
    let eps2 = cfg.budget.epsilon * cfg.budget.epsilon;
    let n_a = match cfg.state.n_a {
        Count::Fixed(k) => k,
        Count::Auto(_) => ceil_log2(cfg.budget.c1 * bound / ((1u64 << n) as f64 * eps2)),
    };
    let d_ext = 2f64.powi((n + n_a) as i32);
    let n_u = match cfg.n_u {
        Count::Fixed(k) => k,
        Count::Auto(_) => ((cfg.budget.c1 * bound / (d_ext * eps2)).ceil() as usize).max(1),
    };

    let t = cfg.t;
    let tl = t as usize;
    let mut exact = BTreeMap::new();
    let mut put = |q: &str, k: usize, v: f64| {
        exact.insert((q.to_string(), k as u32), v);
    };
    let mut part = None;
    if task.is_partial_transpose() {
        let (sys, ext) = partitions(cfg.partition.as_ref().expect("validated"), n, n_a)?;
        if let Some(pt) = soft(exact_pt_moments(&base, &sys, tl)) {
            for k in 2..=tl {
                put("p_pt", k, pt[k - 1]);
            }
            if task == Task::Witness {
                let set = MomentSet::from_all(&pt).expect("first moment present");
                if let Some(r) = soft(witness_report(&set, tl, hankel_order(cfg.analysis.hankel_m, t))) {
                    witness_rows(&r, |q, k, v| put(q, k, v));
                }
            }
        }
        part = Some(ext);
    } else {
        if let Some(p) = soft(exact_spectral_moments(&base, tl)) {
            for k in 2..=tl {
                put("p", k, p[k - 1]);
            }
        }
        match task {
            Task::Observable => {
                for (name, o) in names.iter().zip(&observables) {
                    if let Some(v) = soft(exact_observable_powers(&base, o, tl)) {
                        for k in 1..=tl {
                            put(&format!("obs:{name}"), k, v[k - 1]);
                        }
                    }
                }
            }
            Task::Pce => {
                if let Some(psi) = principal_vector(&base) {
                    for (name, o) in names.iter().zip(&observables) {
                        if let Some(v) = soft(quadratic_form(o, &psi)) {
                            put(&format!("pce:{name}"), tl, v);
                        }
                    }
                }
            }
            Task::Qvc => {
                let g = ground.as_ref().expect("qvc builds the ground state");
                for k in 2..=tl {
                    if let Some(f) = soft(qvc_fidelity_exact(&base, g, k)) {
                        put("fidelity", k, f);
                    }
                }
            }
            _ => {}
        }
    }

    let (state, observables) = if n_a > 0 {
        let anc = setup(QuantumState::basis(n_a, 0))?;
        let s = setup(tensor_product(&base, &anc))?;
        let o = observables.iter().map(|o| setup(o.extend_with_zero_projector(n_a))).collect::<Result<Vec<_>, _>>()?;
        (s, o)
    } else {
        (base, observables)
    };

    let kind = match cfg.ensemble.kind {
        EnsembleName::Brickwork => EnsembleKind::Brickwork { depth: cfg.ensemble.depth },
        EnsembleName::GlobalHaar => EnsembleKind::GlobalHaar,
    };
    let target_qubits = part.as_ref().map_or(n + n_a, |p| p.qubits_a().len());
    let ensemble = setup(UnitaryEnsembleConfig::new(kind, target_qubits))?;

    Ok(Prepared {
        task,
        n,
        n_a,
        n_u,
        n_m: cfg.n_m,
        t,
        seed: cfg.seed,
        state,
        names,
        observables,
        part,
        ensemble,
        mode: match cfg.mode {
            Mode::Traceless => ObservableMode::Traceless,
            Mode::Full => ObservableMode::Full,
        },
        floor: cfg.analysis.floor.unwrap_or(collisim::analysis::default_floor(None)),
        hankel_m: hankel_order(cfg.analysis.hankel_m, t),
        exact,
    })
}

fn hankel_order(m: usize, t: u32) -> Option<usize> {
    (m >= 1 && 2 * m < t as usize).then_some(m)
}

fn witness_rows(r: &WitnessReport, mut emit: impl FnMut(&str, usize, f64)) {
    for (i, d) in r.d_values.iter().enumerate().skip(1) {
        emit("D", i + 1, *d);
    }
    if let Some(v) = r.p3ppt_value {
        emit("p3ppt", 3, v);
    }
    for h in r.hankel.iter().filter(|h| h.k >= 1) {
        emit("hankel_min_eig", h.k, h.min_eig);
    }
}

/// Runs every `(trial, unitary)` unit on the pool, then combines per trial.
/// Both stages collect in index order, so the result does not depend on the
/// number of threads.
pub fn execute(p: &Prepared, trials: usize, pool: &ThreadPool) -> Result<Vec<TrialResult>, CliError> {
    let seed = SeedSpec::new(p.seed);
    let d = p.state.dim();
    let units: Vec<(u64, u64)> = (0..trials as u64).flat_map(|tr| (0..p.n_u as u64).map(move |s| (tr, s))).collect();
    let sets: Vec<EstimatorSet> = pool.install(|| {
        units
            .par_iter()
            .map(|&(tr, s)| -> collisim::Result<EstimatorSet> {
                let mut set = match &p.part {
                    Some(part) => {
                        let rec = ptme_unit(&p.state, part, &p.ensemble, p.n_m, &seed, tr, s)?;
                        estimate_ptme_unit(&rec, p.t, part)?
                    }
                    None => {
                        let rec = cbne_unit(&p.state, &p.ensemble, p.n_m, &seed, tr, s)?;
                        estimate_cbne_unit(&rec, &p.observables, p.t, d, p.mode)?
                    }
                };
                set.unitary_index = s as usize;
                Ok(set)
            })
            .collect::<collisim::Result<Vec<_>>>()
    })?;
    let chunks: Vec<Vec<EstimatorSet>> = sets.chunks(p.n_u).map(|c| c.to_vec()).collect();
    let out = pool.install(|| {
        chunks
            .into_par_iter()
            .map(|c| match p.part {
                Some(_) => combine_ptme(c, p.t).map(TrialResult::Ptme),
                None => combine_cbne(c, &p.observables, p.t, d, p.mode).map(TrialResult::Cbne),
            })
            .collect::<collisim::Result<Vec<_>>>()
    })?;
    Ok(out)
}

/// One CSV row per trial per quantity.
pub fn rows(p: &Prepared, label: &str, results: &[TrialResult]) -> Vec<Row> {
    let tl = p.t as usize;
    let mut out = Vec::new();
    for (trial, r) in results.iter().enumerate() {
        let mut emit = |q: &str, k: usize, v: f64| {
            out.push(Row {
                task: label.to_string(),
                quantity: q.to_string(),
                order: k as u32,
                trial,
                estimate: v,
                exact_value: p.exact.get(&(q.to_string(), k as u32)).copied(),
                n: p.n,
                n_u: p.n_u,
                n_m: p.n_m,
                seed: p.seed,
            })
        };
        match r {
            TrialResult::Cbne(e) => {
                for k in 2..=tl {
                    emit("p", k, e.moments.get(k).unwrap_or(f64::NAN));
                }
                let p_t = e.moments.get(tl).unwrap_or(f64::NAN);
                for (name, o) in p.names.iter().zip(&e.observable_powers) {
                    match p.task {
                        Task::Observable => {
                            for k in 1..=tl {
                                emit(&format!("obs:{name}"), k, o[k - 1]);
                            }
                        }
                        Task::Pce => {
                            emit(&format!("pce:{name}"), tl, pce_estimate(o[tl - 1], p_t, p.floor).unwrap_or(f64::NAN))
                        }
                        Task::Qvc => {
                            for k in 2..=tl {
                                let pk = e.moments.get(k).unwrap_or(f64::NAN);
                                emit("fidelity", k, pce_estimate(o[k - 1], pk, p.floor).unwrap_or(f64::NAN));
                            }
                        }
                        _ => {}
                    }
                }
            }
            TrialResult::Ptme(e) => {
                for k in 2..=tl {
                    emit("p_pt", k, e.pt_moments.get(k).unwrap_or(f64::NAN));
                }
                if p.task == Task::Witness {
                    match witness_report(&e.pt_moments, tl, p.hankel_m) {
                        Ok(w) => witness_rows(&w, &mut emit),
                        Err(_) => {
                            for k in 2..=tl {
                                emit("D", k, f64::NAN);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
