use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oblit::pipeline::{self, PipelineConfig};
use oblit::synthgen::{generate, GeneratorSpec, Mode};
use oblit::{Error, Result};

#[derive(Parser)]
#[command(name = "oblit", version, about = "Hidden-citation analysis pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus file (JSON lines).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Directory for stage artifacts and the report.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to OBLIT_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    /// Number of topics K.
    #[arg(long)]
    topics: Option<usize>,
    /// Document-topic smoothing; defaults to 50 / K.
    #[arg(long)]
    alpha: Option<f64>,
    /// Topic-term smoothing.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "burn-in")]
    burn_in: Option<usize>,
    /// Pooled samples after burn-in.
    #[arg(long)]
    samples: Option<usize>,
    /// Sweeps between pooled samples.
    #[arg(long)]
    lag: Option<usize>,
    /// Independent chains for the convergence diagnostic.
    #[arg(long)]
    chains: Option<usize>,
    /// Override any config key, e.g. `--set lda.topics=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, short, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the corpus and extract occurrence tuples.
    Ingest(Common),
    /// Fit the topic model.
    Train(Common),
    /// Find catchphrases and foundational papers.
    Detect(Common),
    /// Classify followers per topic and year.
    Tabulate(Common),
    /// Citation-path analysis of hidden citations.
    Graph(Common),
    /// Cross-topic statistics.
    Metrics(Common),
    /// Write every table into <output>/report.
    Report(Common),
    /// Run all stages in order.
    Run(Common),
    /// Generate a synthetic corpus with ground truth.
    Synth {
        /// Generator spec of `key = value` lines; defaults when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, short, default_value = "synth")]
        output: PathBuf,
    },
}

fn config(c: &Common) -> Result<PipelineConfig> {
    let mut cfg = match &c.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if cfg.threads.is_none() {
        if let Ok(v) = std::env::var("OBLIT_THREADS") {
            cfg.set("threads", &v)
                .map_err(|m| Error::Config(format!("OBLIT_THREADS: {m}")))?;
        }
    }
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set {kv}: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())
            .map_err(|m| Error::Config(format!("--set: {m}")))?;
    }
    if let Some(p) = &c.corpus {
        cfg.corpus = Some(p.clone());
    }
    if let Some(p) = &c.output {
        cfg.output = p.clone();
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(t) = c.threads {
        cfg.threads = Some(t);
    }
    if let Some(k) = c.topics {
        cfg.lda.num_topics = k;
    }
    if let Some(a) = c.alpha {
        cfg.alpha_override = Some(a);
    }
    if let Some(b) = c.beta {
        cfg.lda.beta = b;
    }
    if let Some(n) = c.burn_in {
        cfg.lda.burn_in_sweeps = n;
    }
    if let Some(n) = c.samples {
        cfg.lda.retained_samples = n;
    }
    if let Some(n) = c.lag {
        cfg.lda.sample_lag_sweeps = n;
    }
    if let Some(n) = c.chains {
        cfg.lda.chains = n;
    }
    cfg.verbosity = cfg.verbosity.max(c.verbose);
    cfg.validate()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("threads: {e}")))?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(c) => pipeline::run_ingest(&config(&c)?).map(drop),
        Command::Train(c) => pipeline::run_train(&config(&c)?).map(drop),
        Command::Detect(c) => pipeline::run_detect(&config(&c)?).map(drop),
        Command::Tabulate(c) => pipeline::run_tabulate(&config(&c)?).map(drop),
        Command::Graph(c) => pipeline::run_graph(&config(&c)?).map(drop),
        Command::Metrics(c) => pipeline::run_metrics(&config(&c)?).map(drop),
        Command::Report(c) => pipeline::run_report(&config(&c)?).map(drop),
        Command::Run(c) => pipeline::run_all(&config(&c)?).map(drop),
        Command::Synth {
            spec,
            seed,
            mode,
            output,
        } => {
            let mut s = match spec {
                Some(p) => GeneratorSpec::load(&p)?,
                None => GeneratorSpec::default(),
            };
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(m) = mode {
                s.mode = m;
            }
            generate(&s)?.write_to(&output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
