//! Stage-file orchestration: each subcommand reads the previous stage's
//! artifact from the output directory and writes its own.

mod config;
mod report;
mod stages;

pub use config::{stage_seed, PipelineConfig, Stage, KEYS};
pub use report::{run_report, REPORT_DIR, REPORT_FILES};
pub use stages::{
    run_detect, run_graph, run_ingest, run_metrics, run_tabulate, run_train, Fit, GraphArtifact,
    IndirectPoint, IngestArtifact, MetricsArtifact, ProfilesArtifact, TopicPoint,
    ARTIFACT_VERSION, GRAPH_FILE, INGEST_FILE, METRICS_FILE, MODEL_FILE, PROFILES_FILE,
    TABLES_FILE,
};

use crate::Result;

/// Runs every analysis stage in order, ending with the report.
pub fn run_all(cfg: &PipelineConfig) -> Result<std::path::PathBuf> {
    run_ingest(cfg)?;
    run_train(cfg)?;
    run_detect(cfg)?;
    run_tabulate(cfg)?;
    run_graph(cfg)?;
    run_metrics(cfg)?;
    run_report(cfg)
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
