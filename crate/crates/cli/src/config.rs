//! Experiment configuration: one TOML-serializable record that pins down a
//! whole run — the task matrix, prompt settings, the translator backend,
//! and probe sampling. A run is reproducible from this record plus the
//! cassette file it names.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use goalbench_core::alfred::AlfredTaskKind;
use goalbench_core::blocksworld::{BwFamily, Direction, PredicateOrder};
use goalbench_gateway::{CassetteMode, EndpointConfig, PromptLayout, DEFAULT_GOAL_CUE};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config `{path}` is not valid TOML: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// One stacking-task line of the matrix, as written in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingEntry {
    /// Family name (`explicit_stacks`, `k_stacks`, ...).
    pub family: String,
    /// Listing direction; only `explicit_stacks_ii` takes one, and leaving
    /// it out generates both directions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    /// Block counts; empty means the family's default sizes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<u32>,
    /// Instances per size; defaults to the family's published count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_size: Option<u32>,
}

/// One household-task line of the matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdEntry {
    /// Task name (`move_synonym`, `clean_kitchen`, ...).
    pub task: String,
    /// Instance count; defaults to the task's published count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
}

/// Which translator answers the prompts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Built-in stub that replies with the canonical ground-truth goal.
    Oracle,
    /// Oracle that damages each goal with probability `corrupt_rate`.
    Corrupt,
    /// Stub that replies with prose and no goal expression at all.
    Prose,
    /// A live completion endpoint behind the cassette.
    Http,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Oracle => "oracle",
            BackendKind::Corrupt => "corrupt",
            BackendKind::Prose => "prose",
            BackendKind::Http => "http",
        }
    }

    pub fn from_name(name: &str) -> Option<BackendKind> {
        match name {
            "oracle" => Some(BackendKind::Oracle),
            "corrupt" => Some(BackendKind::Corrupt),
            "prose" => Some(BackendKind::Prose),
            "http" => Some(BackendKind::Http),
            _ => None,
        }
    }
}

/// Backend selection plus everything the gateway needs to reach (or replay)
/// the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GatewaySection {
    pub backend: BackendKind,
    /// Damage probability for the corrupt stub.
    pub corrupt_rate: f64,
    /// Request/response store for the http backend.
    pub cassette: PathBuf,
    pub mode: CassetteMode,
    pub endpoint: EndpointConfig,
}

impl Default for GatewaySection {
    fn default() -> GatewaySection {
        GatewaySection {
            backend: BackendKind::Oracle,
            corrupt_rate: 0.3,
            cassette: PathBuf::from("cassette.jsonl"),
            mode: CassetteMode::Record,
            endpoint: EndpointConfig::default(),
        }
    }
}

/// Follow-up probe sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeSection {
    pub enabled: bool,
    /// Fraction of each task/outcome cell that gets probed.
    pub sampling_rate: f64,
    /// Minimum instances probed per cell, when the cell is big enough.
    pub floor: usize,
    /// JSON file of manual grades (`probe id -> 0|1`) for the open-ended
    /// probes no mechanical rule can score.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotations: Option<PathBuf>,
}

impl Default for ProbeSection {
    fn default() -> ProbeSection {
        ProbeSection {
            enabled: true,
            sampling_rate: 0.07,
            floor: 5,
            annotations: None,
        }
    }
}

/// The full description of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Master seed; everything random derives from it.
    pub seed: u64,
    /// Directory all artifacts are written to and read from.
    pub output_dir: PathBuf,
    /// Worked examples per prompt.
    pub shots: u32,
    /// Block count of stacking example problems; `None` mirrors each
    /// instance's own size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example_size: Option<u32>,
    /// Literal order in example goals.
    pub example_predicate_order: PredicateOrder,
    /// Domain placement override; `None` keeps each benchmark's default
    /// (stacking repeats the domain per example, household states it once).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<PromptLayout>,
    /// The line that asks for the translation.
    pub goal_cue: String,
    /// Stacking matrix entries. With `alfred` also empty, the full default
    /// matrix of both benchmarks is generated.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blocksworld: Vec<StackingEntry>,
    /// Household matrix entries.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alfred: Vec<HouseholdEntry>,
    pub gateway: GatewaySection,
    pub probe: ProbeSection,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            seed: 0,
            output_dir: PathBuf::from("out"),
            shots: 1,
            example_size: None,
            example_predicate_order: PredicateOrder::OntableFirst,
            layout: None,
            goal_cue: DEFAULT_GOAL_CUE.to_string(),
            blocksworld: Vec::new(),
            alfred: Vec::new(),
            gateway: GatewaySection::default(),
            probe: ProbeSection::default(),
        }
    }
}

/// A stacking entry with every name resolved and every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedStacking {
    pub family: BwFamily,
    pub direction: Option<Direction>,
    pub sizes: Vec<u32>,
    pub per_size: u32,
}

/// A household entry, resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedHousehold {
    pub kind: AlfredTaskKind,
    pub count: u32,
}

/// The generation plan an `ExperimentConfig` denotes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TaskMatrix {
    pub stacking: Vec<ResolvedStacking>,
    pub household: Vec<ResolvedHousehold>,
}

impl TaskMatrix {
    /// Every task name the matrix will generate, in report order.
    pub fn task_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .stacking
            .iter()
            .map(|e| e.family.name().to_string())
            .collect();
        names.extend(self.household.iter().map(|e| e.kind.name().to_string()));
        names
    }
}

/// The full published matrix, as explicit entries: every stacking family at
/// its default sizes and count, every household task at its default count.
pub fn default_matrix() -> (Vec<StackingEntry>, Vec<HouseholdEntry>) {
    let stacking = BwFamily::ALL
        .into_iter()
        .map(|family| StackingEntry {
            family: family.name().to_string(),
            direction: None,
            sizes: family.default_sizes().to_vec(),
            per_size: Some(family.default_per_size()),
        })
        .collect();
    let household = AlfredTaskKind::ALL
        .into_iter()
        .map(|kind| HouseholdEntry {
            task: kind.name().to_string(),
            count: Some(kind.default_count()),
        })
        .collect();
    (stacking, household)
}

impl ExperimentConfig {
    /// Read and parse a TOML config file.
    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Toml {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }

    /// Resolve the task matrix, falling back to the full default matrix when
    /// no entries are configured at all.
    pub fn matrix(&self) -> Result<TaskMatrix, ConfigError> {
        let (blocksworld, alfred) = if self.blocksworld.is_empty() && self.alfred.is_empty() {
            default_matrix()
        } else {
            (self.blocksworld.clone(), self.alfred.clone())
        };

        let mut matrix = TaskMatrix::default();
        for entry in &blocksworld {
            let family = BwFamily::from_name(&entry.family)
                .ok_or_else(|| invalid(format!("unknown stacking family `{}`", entry.family)))?;
            if entry.direction.is_some() && family != BwFamily::ExplicitStacksII {
                return Err(invalid(format!(
                    "`direction` applies only to explicit_stacks_ii, not `{}`",
                    entry.family
                )));
            }
            let sizes = if entry.sizes.is_empty() {
                family.default_sizes().to_vec()
            } else {
                entry.sizes.clone()
            };
            for &size in &sizes {
                if !(2..=12).contains(&size) {
                    return Err(invalid(format!(
                        "block count {size} for `{}` is outside 2..=12",
                        entry.family
                    )));
                }
            }
            if sizes.iter().collect::<std::collections::BTreeSet<_>>().len() != sizes.len() {
                return Err(invalid(format!(
                    "`{}` lists a block count twice; instance ids would collide",
                    entry.family
                )));
            }
            matrix.stacking.push(ResolvedStacking {
                family,
                direction: entry.direction,
                sizes,
                per_size: entry.per_size.unwrap_or_else(|| family.default_per_size()),
            });
        }
        for entry in &alfred {
            let kind = AlfredTaskKind::from_name(&entry.task)
                .ok_or_else(|| invalid(format!("unknown household task `{}`", entry.task)))?;
            matrix.household.push(ResolvedHousehold {
                kind,
                count: entry.count.unwrap_or_else(|| kind.default_count()),
            });
        }

        let mut seen_stacking = std::collections::BTreeSet::new();
        for entry in &matrix.stacking {
            if !seen_stacking.insert((entry.family.name(), entry.direction.map(Direction::name))) {
                return Err(invalid(format!(
                    "stacking family `{}` appears twice; instance ids would collide",
                    entry.family.name()
                )));
            }
        }
        let mut seen_household = std::collections::BTreeSet::new();
        for entry in &matrix.household {
            if !seen_household.insert(entry.kind.name()) {
                return Err(invalid(format!(
                    "household task `{}` appears twice; instance ids would collide",
                    entry.kind.name()
                )));
            }
        }
        Ok(matrix)
    }

    /// Reject configs no stage could act on sensibly. Resolving the matrix
    /// is part of this, so a validated config never fails name lookups
    /// later.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.matrix()?;
        if !(0.0..=1.0).contains(&self.gateway.corrupt_rate) {
            return Err(invalid(format!(
                "corrupt_rate {} is outside 0..=1",
                self.gateway.corrupt_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.probe.sampling_rate) {
            return Err(invalid(format!(
                "probe sampling_rate {} is outside 0..=1",
                self.probe.sampling_rate
            )));
        }
        if let Some(size) = self.example_size {
            if !(2..=12).contains(&size) {
                return Err(invalid(format!("example_size {size} is outside 2..=12")));
            }
        }
        if self.gateway.backend == BackendKind::Http {
            if self.gateway.endpoint.model.is_empty() {
                return Err(invalid(
                    "http backend needs `gateway.endpoint.model` (it is part of the request hash)",
                ));
            }
            if self.gateway.mode != CassetteMode::Replay && self.gateway.endpoint.url.is_empty() {
                return Err(invalid(
                    "http backend needs `gateway.endpoint.url` outside replay mode",
                ));
            }
        }
        Ok(())
    }
}

/// Parse a prompt-layout name from a flag value.
pub fn parse_layout(name: &str) -> Option<PromptLayout> {
    match name {
        "domain_per_example" => Some(PromptLayout::DomainPerExample),
        "domain_once" => Some(PromptLayout::DomainOnce),
        _ => None,
    }
}

/// Parse a cassette-mode name from a flag value.
pub fn parse_cassette_mode(name: &str) -> Option<CassetteMode> {
    match name {
        "record" => Some(CassetteMode::Record),
        "replay" => Some(CassetteMode::Replay),
        "passthrough" => Some(CassetteMode::Passthrough),
        _ => None,
    }
}
