use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::NgramConfig;
use crate::detector::DetectorConfig;
use crate::keyvalue;
use crate::metrics::AttributionMode;
use crate::tabulator::Aggregation;
use crate::topicmodel::{chain_seed, LdaConfig};
use crate::{Error, Result};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub output: PathBuf,
    pub ngram: NgramConfig,
    pub lda: LdaConfig,
    /// Set when `lda.alpha` was given; otherwise `50 / K`.
    pub alpha_override: Option<f64>,
    pub detector: DetectorConfig,
    pub max_depth: usize,
    pub alternatives: usize,
    pub horizon_years: i32,
    pub aggregation: Aggregation,
    pub permutations: usize,
    pub significance: f64,
    pub band_samples: usize,
    pub attribution: AttributionMode,
    pub stopwords: Option<PathBuf>,
    pub stem_exceptions: Option<PathBuf>,
    pub class_overrides: Option<PathBuf>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub verbosity: u8,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            output: PathBuf::from("out"),
            ngram: NgramConfig::default(),
            lda: LdaConfig::default(),
            alpha_override: None,
            detector: DetectorConfig::default(),
            max_depth: crate::citegraph::DEFAULT_MAX_DEPTH,
            alternatives: 5,
            horizon_years: 20,
            aggregation: Aggregation::TopicMean,
            permutations: 10_000,
            significance: 0.01,
            band_samples: 100,
            attribution: AttributionMode::Proportional,
            stopwords: None,
            stem_exceptions: None,
            class_overrides: None,
            seed: 0,
            threads: None,
            verbosity: 0,
        }
    }
}

/// Keys accepted by [`PipelineConfig::set`].
pub const KEYS: &[&str] = &[
    "corpus",
    "output",
    "seed",
    "threads",
    "verbosity",
    "ngram.max_len",
    "ngram.min_count",
    "ngram.min_docs",
    "lda.topics",
    "lda.alpha",
    "lda.beta",
    "lda.burn_in",
    "lda.samples",
    "lda.lag",
    "lda.chains",
    "detector.p_catch",
    "detector.p_found",
    "graph.max_depth",
    "graph.alternatives",
    "tabulate.horizon",
    "tabulate.aggregation",
    "metrics.permutations",
    "metrics.significance",
    "metrics.band_samples",
    "metrics.attribution",
    "text.stopwords",
    "text.stem_exceptions",
    "metrics.class_overrides",
];

fn value<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("{key}: {e}"))
}

impl PipelineConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "corpus" => self.corpus = Some(PathBuf::from(v)),
            "output" => self.output = PathBuf::from(v),
            "seed" => self.seed = value(key, v)?,
            "threads" => self.threads = Some(value(key, v)?),
            "verbosity" => self.verbosity = value(key, v)?,
            "ngram.max_len" => self.ngram.max_len = value(key, v)?,
            "ngram.min_count" => self.ngram.min_count = value(key, v)?,
            "ngram.min_docs" => self.ngram.min_docs = value(key, v)?,
            "lda.topics" => self.lda.num_topics = value(key, v)?,
            "lda.alpha" => self.alpha_override = Some(value(key, v)?),
            "lda.beta" => self.lda.beta = value(key, v)?,
            "lda.burn_in" => self.lda.burn_in_sweeps = value(key, v)?,
            "lda.samples" => self.lda.retained_samples = value(key, v)?,
            "lda.lag" => self.lda.sample_lag_sweeps = value(key, v)?,
            "lda.chains" => self.lda.chains = value(key, v)?,
            "detector.p_catch" => self.detector.p_th_catch = value(key, v)?,
            "detector.p_found" => self.detector.p_th_found = value(key, v)?,
            "graph.max_depth" => self.max_depth = value(key, v)?,
            "graph.alternatives" => self.alternatives = value(key, v)?,
            "tabulate.horizon" => self.horizon_years = value(key, v)?,
            "tabulate.aggregation" => {
                self.aggregation = match v {
                    "topic_mean" => Aggregation::TopicMean,
                    "pooled" => Aggregation::Pooled,
                    _ => return Err(format!("{key}: expected topic_mean or pooled, got `{v}`")),
                }
            }
            "metrics.permutations" => self.permutations = value(key, v)?,
            "metrics.significance" => self.significance = value(key, v)?,
            "metrics.band_samples" => self.band_samples = value(key, v)?,
            "metrics.attribution" => {
                self.attribution = match v {
                    "proportional" => AttributionMode::Proportional,
                    "full" => AttributionMode::Full,
                    _ => return Err(format!("{key}: expected proportional or full, got `{v}`")),
                }
            }
            "text.stopwords" => self.stopwords = Some(PathBuf::from(v)),
            "text.stem_exceptions" => self.stem_exceptions = Some(PathBuf::from(v)),
            "metrics.class_overrides" => self.class_overrides = Some(PathBuf::from(v)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Parses a config file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, text: &str) -> Result<()> {
        for e in keyvalue::parse(text)? {
            self.set(&e.key, &e.value)
                .map_err(|m| Error::Config(format!("line {}: {m}", e.line)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// The LDA settings with the stage seed and `alpha` resolved.
    pub fn lda_config(&self) -> LdaConfig {
        let mut c = self.lda;
        c.alpha = self
            .alpha_override
            .unwrap_or(50.0 / c.num_topics.max(1) as f64);
        c.seed = stage_seed(self.seed, Stage::Train);
        c
    }

    pub fn validate(&self) -> Result<()> {
        self.ngram.validate()?;
        self.lda_config().validate()?;
        self.detector.validate()?;
        if self.max_depth == 0 {
            return Err(Error::Config("graph.max_depth must be positive".into()));
        }
        if self.horizon_years < 0 {
            return Err(Error::Config("tabulate.horizon must be non-negative".into()));
        }
        if self.permutations == 0 {
            return Err(Error::Config("metrics.permutations must be positive".into()));
        }
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return Err(Error::Config("metrics.significance must be in (0, 1)".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(())
    }
}

/// Stages that consume randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Train,
    Metrics,
}

/// Train uses the config seed unchanged; every other stage gets its own
/// splitmix-derived stream.
pub fn stage_seed(seed: u64, stage: Stage) -> u64 {
    match stage {
        Stage::Train => seed,
        Stage::Metrics => chain_seed(seed, 1 << 32),
    }
}
