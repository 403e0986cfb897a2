//! Experiment configuration, read from a TOML file.
//!
//! The schema is described in the configuration chapter of the guide.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Task {
    Moments,
    Observable,
    Pce,
    Qvc,
    PtMoments,
    Witness,
    Sweep,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Moments => "moments",
            Task::Observable => "observable",
            Task::Pce => "pce",
            Task::Qvc => "qvc",
            Task::PtMoments => "pt_moments",
            Task::Witness => "witness",
            Task::Sweep => "sweep",
        }
    }

    pub fn is_partial_transpose(self) -> bool {
        matches!(self, Task::PtMoments | Task::Witness)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

/// A count that is either given or derived from the sample-complexity rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Fixed(usize),
    Auto(AutoTag),
}

impl Default for Count {
    fn default() -> Self {
        Count::Fixed(0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Traceless,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Tfim,
    Heisenberg,
    Ghz,
    Bell,
    Basis,
    RandomPure,
    RandomMixed,
    Gapped,
    MaximallyMixed,
}

impl ModelName {
    pub fn has_hamiltonian(self) -> bool {
        matches!(self, ModelName::Tfim | ModelName::Heisenberg)
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub model: ModelName,
    pub n: usize,
    #[serde(default = "one")]
    pub j: f64,
    #[serde(default = "one")]
    pub h: f64,
    /// Gibbs state at this inverse temperature; ground state when absent.
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub depolarize: f64,
    /// Ancilla qubits prepared in `|0⟩`.
    #[serde(default)]
    pub n_a: Count,
    /// Computational basis index for `basis`.
    #[serde(default)]
    pub index: usize,
    #[serde(default)]
    pub lambda1: Option<f64>,
    #[serde(default)]
    pub lambda2: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleName {
    #[default]
    Brickwork,
    GlobalHaar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    #[serde(default)]
    pub kind: EnsembleName,
    /// Brickwork layers; `2n` when absent.
    #[serde(default)]
    pub depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKindName {
    #[default]
    Pauli,
    RandomPauli,
    GroundProjector,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableConfig {
    pub name: String,
    #[serde(default)]
    pub kind: ObservableKindName,
    /// `[[coefficient, "XZ…"], …]`.
    #[serde(default)]
    pub pauli: Vec<(f64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionConfig {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Defaults to the last `|B|` qubits of `A`, ancillas included.
    #[serde(default)]
    pub a2: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "one")]
    pub c1: f64,
}

fn default_epsilon() -> f64 {
    0.1
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self { epsilon: default_epsilon(), c1: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Smallest admissible `|p̂_t|` for ratio estimates.
    #[serde(default)]
    pub floor: Option<f64>,
    /// Detect only when a witness exceeds `z` standard deviations.
    #[serde(default)]
    pub z_gate: Option<f64>,
    #[serde(default = "default_hankel")]
    pub hankel_m: usize,
}

fn default_hankel() -> usize {
    1
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { floor: None, z_gate: None, hankel_m: default_hankel() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    N,
    NM,
    NU,
    NA,
    Beta,
    P,
    T,
    Depth,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::NM => "n_m",
            SweepParam::NU => "n_u",
            SweepParam::NA => "n_a",
            SweepParam::Beta => "beta",
            SweepParam::P => "p",
            SweepParam::T => "t",
            SweepParam::Depth => "depth",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinNmSearch {
    pub target_error: f64,
    pub candidates: Vec<usize>,
    #[serde(default = "default_quantity")]
    pub quantity: String,
    pub order: u32,
}

fn default_quantity() -> String {
    "p".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub task: Task,
    pub parameter: SweepParam,
    pub values: Vec<f64>,
    #[serde(default)]
    pub min_n_m: Option<MinNmSearch>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn default_trials() -> usize {
    100
}

fn default_t() -> u32 {
    3
}

fn default_n_u() -> Count {
    Count::Fixed(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub task: Option<Task>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_t")]
    pub t: u32,
    #[serde(default = "default_n_u")]
    pub n_u: Count,
    pub n_m: usize,
    #[serde(default)]
    pub mode: Mode,
    pub state: StateConfig,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub observables: Vec<ObservableConfig>,
    #[serde(default)]
    pub partition: Option<PartitionConfig>,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    ///
    /// The `[output]` section is left out since it does not affect results.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut c = self.clone();
        c.output = OutputConfig::default();
        let json = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks that do not need any state to be built.
    pub fn validate(&self, task: Task) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.n_m == 0 {
            return bad("n_m must be positive".into());
        }
        if self.n_u == Count::Fixed(0) {
            return bad("n_u must be positive".into());
        }
        if task != Task::Sweep && self.t < 2 {
            return bad("t must be at least 2".into());
        }
        if self.t as usize > self.n_m {
            return bad(format!("t = {} exceeds n_m = {}", self.t, self.n_m));
        }
        if !(0.0..=1.0).contains(&self.state.depolarize) {
            return bad(format!("depolarize = {} outside [0, 1]", self.state.depolarize));
        }
        if self.budget.epsilon <= 0.0 || self.budget.c1 <= 0.0 {
            return bad("budget.epsilon and budget.c1 must be positive".into());
        }
        let mut names: Vec<&str> = self.observables.iter().map(|o| o.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("observable names must be unique".into());
        }
        for o in &self.observables {
            if o.kind == ObservableKindName::Pauli && o.pauli.is_empty() {
                return bad(format!("observable {} has no Pauli terms", o.name));
            }
            if o.kind == ObservableKindName::GroundProjector && !self.state.model.has_hamiltonian() {
                return bad(format!("observable {} needs a Hamiltonian model", o.name));
            }
        }
        match task {
            Task::Observable | Task::Pce if self.observables.is_empty() => {
                bad(format!("task {} needs at least one observable", task.name()))
            }
            Task::Qvc if !self.state.model.has_hamiltonian() => bad("qvc needs a Hamiltonian model".into()),
            Task::PtMoments | Task::Witness if self.partition.is_none() => {
                bad(format!("task {} needs a [partition] section", task.name()))
            }
            Task::Witness if self.t < 3 => bad("witness needs t ≥ 3".into()),
            Task::Sweep => match &self.sweep {
                None => bad("task sweep needs a [sweep] section".into()),
                Some(s) if s.task == Task::Sweep => bad("sweeps cannot be nested".into()),
                Some(s) if s.values.is_empty() => bad("sweep.values is empty".into()),
                Some(s) => {
                    if let Some(m) = &s.min_n_m {
                        if m.candidates.is_empty() || m.target_error <= 0.0 {
                            return bad("sweep.min_n_m needs candidates and a positive target".into());
                        }
                    }
                    Ok(())
                }
            },
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        n_m = 1000
        [state]
        model = "tfim"
        n = 4
    "#;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.trials, 100);
        assert_eq!(c.t, 3);
        assert_eq!(c.n_u, Count::Fixed(1));
        assert_eq!(c.state.n_a, Count::Fixed(0));
        assert_eq!(c.ensemble.kind, EnsembleName::Brickwork);
        c.validate(Task::Moments).unwrap();
    }

    #[test]
    fn auto_counts_parse() {
        let text = MINIMAL.replace("n_m = 1000", "n_m = 1000\nn_u = \"auto\"");
        let c = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(c.n_u, Count::Auto(AutoTag::Auto));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("n_m = 1000", "n_m = 1000\nbogus = 1");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn observables_parse_mixed_arrays() {
        let text = format!("{MINIMAL}\n[[observables]]\nname = \"x\"\npauli = [[1.0, \"XXXX\"], [0.5, \"ZIII\"]]\n");
        let c = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(c.observables[0].pauli[1], (0.5, "ZIII".to_string()));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn task_requirements() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert!(c.validate(Task::Pce).is_err());
        assert!(c.validate(Task::PtMoments).is_err());
        assert!(c.validate(Task::Sweep).is_err());
        assert!(c.validate(Task::Qvc).is_ok());
    }
}
