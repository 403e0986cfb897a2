//! Config-driven experiment runner for the `collisim` estimators.
//!
//! [`run_experiment`] is what the `collisim` binary calls; it is exposed so
//! that experiments can also be driven from tests and scripts.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;

use std::time::Instant;

use rayon::ThreadPool;

use config::{Count, MinNmSearch, SweepParam};
pub use config::{ExperimentConfig, Format, Task};
pub use error::CliError;
use report::{mean_std, summarize, CellSummary, MinNmResult, Report, Row, Runtime, Summary};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/configuration.md")]
    mod configuration {}
}

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "COLLISIM_THREADS";

pub fn thread_pool(threads: usize) -> Result<ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} worker threads: {e}")))
}

/// `--threads`, then the environment, then the number of available cores.
pub fn default_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn run_cell(
    cfg: &ExperimentConfig,
    task: Task,
    label: &str,
    pool: &ThreadPool,
) -> Result<(Vec<Row>, CellSummary), CliError> {
    let prep = runner::prepare(cfg, task)?;
    let results = runner::execute(&prep, cfg.trials, pool)?;
    let rows = runner::rows(&prep, label, &results);
    let cell = CellSummary {
        label: label.to_string(),
        n: prep.n,
        n_a: prep.n_a,
        n_u: prep.n_u,
        n_m: prep.n_m,
        t: prep.t,
        groups: summarize(&rows, cfg.analysis.z_gate),
    };
    Ok((rows, cell))
}

fn as_count(param: SweepParam, v: f64) -> Result<usize, CliError> {
    if v < 0.0 || v.fract() != 0.0 {
        return Err(CliError::Config(format!("sweep value {v} for {} is not a count", param.name())));
    }
    Ok(v as usize)
}

fn apply(cfg: &mut ExperimentConfig, param: SweepParam, v: f64) -> Result<(), CliError> {
    match param {
        SweepParam::N => cfg.state.n = as_count(param, v)?,
        SweepParam::NM => cfg.n_m = as_count(param, v)?,
        SweepParam::NU => cfg.n_u = Count::Fixed(as_count(param, v)?),
        SweepParam::NA => cfg.state.n_a = Count::Fixed(as_count(param, v)?),
        SweepParam::Beta => cfg.state.beta = Some(v),
        SweepParam::P => cfg.state.depolarize = v,
        SweepParam::T => cfg.t = as_count(param, v)? as u32,
        SweepParam::Depth => cfg.ensemble.depth = Some(as_count(param, v)?),
    }
    Ok(())
}

fn value_label(param: SweepParam, v: f64) -> String {
    match param {
        SweepParam::Beta | SweepParam::P => format!("{v}"),
        _ => format!("{}", v as usize),
    }
}

#[allow(clippy::too_many_arguments)]
fn search_min_n_m(
    cfg: &ExperimentConfig,
    base: Task,
    label: &str,
    value: f64,
    search: &MinNmSearch,
    pool: &ThreadPool,
    rows: &mut Vec<Row>,
    cells: &mut Vec<CellSummary>,
) -> Result<MinNmResult, CliError> {
    let mut candidates = search.candidates.clone();
    candidates.sort_unstable();
    let mut result = MinNmResult { cell: label.to_string(), value, n_m: None, n_u: 0, n_tot: None, error: f64::NAN };
    for c in candidates {
        let mut cell_cfg = cfg.clone();
        cell_cfg.n_m = c;
        let cell_label = format!("{},n_m={c}]", label.trim_end_matches(']'));
        let (r, s) = run_cell(&cell_cfg, base, &cell_label, pool)?;
        let vals: Vec<f64> =
            r.iter().filter(|x| x.quantity == search.quantity && x.order == search.order).map(|x| x.estimate).collect();
        if vals.is_empty() {
            return Err(CliError::Config(format!(
                "sweep.min_n_m refers to {}:{}, which task {} does not produce",
                search.quantity,
                search.order,
                base.name()
            )));
        }
        let (_, err) = mean_std(&vals);
        result.n_u = s.n_u;
        result.error = err;
        rows.extend(r);
        cells.push(s);
        if err <= search.target_error {
            result.n_m = Some(c);
            result.n_tot = Some(c * result.n_u);
            break;
        }
    }
    Ok(result)
}

/// Runs a task, or a grid of cells for `sweep`.
pub fn run_experiment(cfg: &ExperimentConfig, task: Task, pool: &ThreadPool) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    let mut min_n_m = Vec::new();
    if task == Task::Sweep {
        cfg.validate(task)?;
        let sweep = cfg.sweep.as_ref().expect("validated");
        for &v in &sweep.values {
            let mut cell_cfg = cfg.clone();
            apply(&mut cell_cfg, sweep.parameter, v)?;
            let label =
                format!("sweep:{}[{}={}]", sweep.task.name(), sweep.parameter.name(), value_label(sweep.parameter, v));
            match &sweep.min_n_m {
                Some(search) => {
                    min_n_m.push(search_min_n_m(&cell_cfg, sweep.task, &label, v, search, pool, &mut rows, &mut cells)?)
                }
                None => {
                    let (r, s) = run_cell(&cell_cfg, sweep.task, &label, pool)?;
                    rows.extend(r);
                    cells.push(s);
                }
            }
        }
    } else {
        let (r, s) = run_cell(cfg, task, task.name(), pool)?;
        rows = r;
        cells.push(s);
    }
    let summary = Summary {
        library_version: collisim::VERSION,
        config_hash: cfg.hash(),
        task: task.name().to_string(),
        seed: cfg.seed,
        cells,
        min_n_m,
        runtime: Some(Runtime { threads: pool.current_num_threads(), elapsed_seconds: start.elapsed().as_secs_f64() }),
    };
    Ok(Report { rows, summary })
}
