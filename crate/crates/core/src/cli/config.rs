use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::acquisition::{AcquisitionKind, LocalSearchConfig};
use crate::benchmarks::MeritConvention;
use crate::combinatorics::DictionaryStrategy;
use crate::engine::BoConfig;
use crate::surrogate::FitConfig;

/// Version of `schema/experiment-config.v1.json` this struct mirrors.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bodi,
    Random,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Bodi => "bodi",
            Self::Random => "random",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub m_values: Vec<usize>,
    pub dictionary_kinds: Vec<DictionaryStrategy>,
}

/// A run configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default = "default_dictionary")]
    pub dictionary: DictionaryStrategy,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_n_init")]
    pub n_init: usize,
    pub budget: usize,
    #[serde(default = "default_acquisition")]
    pub acquisition: AcquisitionKind,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub local_search: LocalSearchConfig,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub merit_convention: MeritConvention,
    #[serde(default)]
    pub exclude_top: bool,
    /// Fill the CSV `elapsed_s` column; off by default so reruns are
    /// byte-identical.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_methods() -> Vec<Method> {
    vec![Method::Bodi]
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_dictionary() -> DictionaryStrategy {
    DictionaryStrategy::DiverseRandom
}
fn default_m() -> usize {
    BoConfig::default().m
}
fn default_n_init() -> usize {
    BoConfig::default().n_init
}
fn default_acquisition() -> AcquisitionKind {
    AcquisitionKind::ExpectedImprovement
}
fn default_delta() -> f64 {
    BoConfig::default().delta
}

/// One (method, dictionary, m, seed) cell of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub method: Method,
    pub bo: BoConfig,
}

impl Job {
    pub fn stem(&self, problem: &str) -> String {
        let safe: String =
            problem.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        match self.method {
            Method::Bodi => format!("bodi_{safe}_{}_m{}_seed{}", self.bo.dictionary.as_str(), self.bo.m, self.bo.seed),
            Method::Random => format!("random_{safe}_seed{}", self.bo.seed),
        }
    }
}

impl ExperimentConfig {
    /// Checks everything that would make a run fail a precondition; the
    /// error message starts with the offending field.
    pub fn validate(&self) -> Result<(), String> {
        if self.seeds.is_empty() {
            return Err("seeds: at least one seed is required".into());
        }
        if self.methods.is_empty() {
            return Err("methods: at least one method is required".into());
        }
        if self.budget == 0 {
            return Err("budget: must be at least 1".into());
        }
        if self.sweep.m_values.contains(&0) {
            return Err("sweep.m_values: entries must be at least 1".into());
        }
        for job in self.jobs() {
            if job.method == Method::Bodi {
                job.bo.validate().map_err(|e| format!("{}", e).replace("invalid parameter: ", ""))?;
            }
        }
        Ok(())
    }

    fn bo_for(&self, dictionary: DictionaryStrategy, m: usize, seed: u64) -> BoConfig {
        BoConfig {
            dictionary,
            m,
            n_init: self.n_init,
            budget: self.budget,
            acquisition: self.acquisition,
            local_search: self.local_search.clone(),
            fit: self.fit.clone(),
            seed,
            delta: self.delta,
        }
    }

    /// Expands methods × dictionary kinds × m values × seeds in a fixed order.
    pub fn jobs(&self) -> Vec<Job> {
        let kinds = if self.sweep.dictionary_kinds.is_empty() { vec![self.dictionary] } else { self.sweep.dictionary_kinds.clone() };
        let ms = if self.sweep.m_values.is_empty() { vec![self.m] } else { self.sweep.m_values.clone() };
        let mut jobs = Vec::new();
        for &method in &self.methods {
            match method {
                Method::Bodi => {
                    for &k in &kinds {
                        for &m in &ms {
                            for &s in &self.seeds {
                                jobs.push(Job { method, bo: self.bo_for(k, m, s) });
                            }
                        }
                    }
                }
                Method::Random => {
                    for &s in &self.seeds {
                        jobs.push(Job { method, bo: self.bo_for(self.dictionary, self.m, s) });
                    }
                }
            }
        }
        jobs
    }
}

/// Parses a config, reporting the JSON path of the first offending field.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("{path}: {}", e.inner())
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}
