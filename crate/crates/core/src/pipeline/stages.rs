use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{stage_seed, PipelineConfig, Stage};
use crate::artifact;
use crate::citegraph::{
    indirect_adjusted_p, path_histogram, top_alternatives, Alternative, CitationGraph,
    PathHistogram,
};
use crate::corpus::{
    build_mention_index, extract_occurrences, read_corpus, Corpus, CitationContext, NgramConfig,
    OccurrenceSet, TextNormalizer,
};
use crate::detector::{detect_topics, write_profiles_csv, DetectorConfig, TopicProfile};
use crate::metrics::{
    attribute_hidden_to_papers, author_count_stats, catchphrase_origin, classify_catchphrases,
    loglinear_fit, loglog_fit, rank_deltas, spearman, AuthorStats, CatchphraseClass,
    ClassOverrides, OriginStats, PermutationConfig, RankDelta, RegressionFit, Spearman,
};
use crate::tabulator::{tabulate, temporal_decay, FollowerTable, LagPoint};
use crate::topicmodel::{train, TopicModel};
use crate::{Error, Result};

pub const ARTIFACT_VERSION: u32 = 1;

pub const INGEST_FILE: &str = "ingest.json";
pub const MODEL_FILE: &str = "model.json";
pub const PROFILES_FILE: &str = "profiles.json";
pub const TABLES_FILE: &str = "tables.json";
pub const GRAPH_FILE: &str = "graph.json";
pub const METRICS_FILE: &str = "metrics.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestArtifact {
    pub corpus: PathBuf,
    /// SHA-256 of the corpus file, hex.
    pub digest: String,
    pub papers: usize,
    pub contexts: usize,
    pub ngram: NgramConfig,
    pub occurrences: OccurrenceSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilesArtifact {
    pub detector: DetectorConfig,
    pub profiles: Vec<TopicProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndirectPoint {
    pub topic_id: usize,
    pub lag: i32,
    pub p_direct: f64,
    pub p_adjusted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphArtifact {
    pub max_depth: usize,
    pub histograms: Vec<PathHistogram>,
    pub alternatives: Vec<(usize, Vec<Alternative>)>,
    pub indirect: Vec<IndirectPoint>,
}

/// Per-topic totals feeding the cross-topic regressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicPoint {
    pub topic_id: usize,
    pub citations: usize,
    pub hidden: usize,
    pub mentions: usize,
    pub p_cite_given_mention: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub name: String,
    /// Points entering the fit.
    pub points: usize,
    pub fit: Option<RegressionFit>,
    /// Why the fit is absent.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsArtifact {
    pub decay: Vec<LagPoint>,
    pub topics: Vec<TopicPoint>,
    pub fits: Vec<Fit>,
    pub spearman: Option<Spearman>,
    pub rank_deltas: Vec<RankDelta>,
    pub origin: OriginStats,
    pub classes: BTreeMap<usize, CatchphraseClass>,
    pub author_counts: BTreeMap<CatchphraseClass, AuthorStats>,
}

fn path(cfg: &PipelineConfig, file: &str) -> PathBuf {
    cfg.output.join(file)
}

fn normalizer(cfg: &PipelineConfig) -> Result<TextNormalizer> {
    let mut n = TextNormalizer::default();
    if let Some(p) = &cfg.stopwords {
        n = n.with_stopword_file(p)?;
    }
    if let Some(p) = &cfg.stem_exceptions {
        n = n.with_exception_file(p)?;
    }
    Ok(n)
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_bytes(p: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    File::open(p)
        .and_then(|f| BufReader::new(f).read_to_end(&mut buf))
        .map_err(|e| Error::io(p, e))?;
    Ok(buf)
}

fn load_corpus(bytes: &[u8]) -> Result<(Corpus, Vec<CitationContext>)> {
    read_corpus(bytes)?.into_corpus()
}

fn ensure_output(cfg: &PipelineConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.output).map_err(|e| Error::io(&cfg.output, e))
}

fn log(cfg: &PipelineConfig, msg: impl FnOnce() -> String) {
    if cfg.verbosity > 0 {
        eprintln!("{}", msg());
    }
}

/// Parses the corpus and extracts occurrence tuples.
pub fn run_ingest(cfg: &PipelineConfig) -> Result<IngestArtifact> {
    cfg.validate()?;
    let src = cfg
        .corpus
        .as_ref()
        .ok_or_else(|| Error::Config("corpus: no corpus path given".into()))?;
    let bytes = read_bytes(src)?;
    let (corpus, contexts) = load_corpus(&bytes).map_err(|e| match e {
        Error::Malformed { .. } | Error::DuplicatePaper(_) | Error::UnknownPaper(_) => {
            Error::Config(format!("{}: {e}", src.display()))
        }
        e => e,
    })?;
    let occurrences = extract_occurrences(&contexts, &corpus, &normalizer(cfg)?, &cfg.ngram)?;
    log(cfg, || {
        format!(
            "ingest: {} papers, {} contexts, {} tuples, {} n-grams",
            corpus.len(),
            contexts.len(),
            occurrences.len(),
            occurrences.vocabulary.len()
        )
    });
    let art = IngestArtifact {
        corpus: src.clone(),
        digest: digest(&bytes),
        papers: corpus.len(),
        contexts: contexts.len(),
        ngram: cfg.ngram,
        occurrences,
    };
    ensure_output(cfg)?;
    artifact::write(&path(cfg, INGEST_FILE), "oblit-ingest", ARTIFACT_VERSION, &art)?;
    Ok(art)
}

fn read_ingest(cfg: &PipelineConfig) -> Result<IngestArtifact> {
    artifact::read(&path(cfg, INGEST_FILE), "oblit-ingest", ARTIFACT_VERSION, "ingest")
}

/// Reloads the corpus recorded by ingest and checks it has not changed.
fn corpus_from_ingest(cfg: &PipelineConfig) -> Result<(Corpus, Vec<CitationContext>)> {
    let ing = read_ingest(cfg)?;
    let bytes = read_bytes(&ing.corpus)?;
    if digest(&bytes) != ing.digest {
        return Err(Error::Stale {
            artifact: path(cfg, INGEST_FILE).display().to_string(),
            reason: format!("{} changed since ingest; rerun `ingest`", ing.corpus.display()),
        });
    }
    load_corpus(&bytes)
}

pub fn run_train(cfg: &PipelineConfig) -> Result<TopicModel> {
    cfg.validate()?;
    let ing = read_ingest(cfg)?;
    let out = train(&ing.occurrences, &cfg.lda_config())?;
    if let Some(d) = out.max_tv_distance {
        log(cfg, || format!("train: max chain topic distance {d:.4}"));
    }
    out.model.save(&path(cfg, MODEL_FILE))?;
    Ok(out.model)
}

pub fn run_detect(cfg: &PipelineConfig) -> Result<ProfilesArtifact> {
    cfg.validate()?;
    let model = TopicModel::load(&path(cfg, MODEL_FILE))?;
    let (corpus, _) = corpus_from_ingest(cfg)?;
    let profiles = detect_topics(&model, &corpus, &cfg.detector)?;
    log(cfg, || format!("detect: {} topics", profiles.len()));
    let art = ProfilesArtifact {
        detector: cfg.detector,
        profiles,
    };
    artifact::write(&path(cfg, PROFILES_FILE), "oblit-profiles", ARTIFACT_VERSION, &art)?;
    write_csv(&cfg.output, "profiles.csv", |w| write_profiles_csv(w, &art.profiles))?;
    Ok(art)
}

pub(crate) fn read_profiles(cfg: &PipelineConfig) -> Result<Vec<TopicProfile>> {
    let a: ProfilesArtifact =
        artifact::read(&path(cfg, PROFILES_FILE), "oblit-profiles", ARTIFACT_VERSION, "detect")?;
    Ok(a.profiles)
}

pub fn run_tabulate(cfg: &PipelineConfig) -> Result<Vec<FollowerTable>> {
    cfg.validate()?;
    let profiles = read_profiles(cfg)?;
    let (corpus, _) = corpus_from_ingest(cfg)?;
    let norm = normalizer(cfg)?;
    let index = build_mention_index(
        &corpus,
        profiles.iter().flat_map(|p| p.catchphrase_ngrams()),
        &norm,
    );
    let tables = tabulate(&profiles, &corpus, &index)?;
    artifact::write(&path(cfg, TABLES_FILE), "oblit-tables", ARTIFACT_VERSION, &tables)?;
    Ok(tables)
}

pub(crate) fn read_tables(cfg: &PipelineConfig) -> Result<Vec<FollowerTable>> {
    artifact::read(&path(cfg, TABLES_FILE), "oblit-tables", ARTIFACT_VERSION, "tabulate")
}

fn paired<'a>(
    profiles: &'a [TopicProfile],
    tables: &'a [FollowerTable],
) -> Result<Vec<(&'a TopicProfile, &'a FollowerTable)>> {
    let by: BTreeMap<usize, &FollowerTable> = tables.iter().map(|t| (t.topic_id, t)).collect();
    profiles
        .iter()
        .map(|p| {
            by.get(&p.topic_id).map(|t| (p, *t)).ok_or_else(|| Error::Stale {
                artifact: TABLES_FILE.to_string(),
                reason: format!("no table for topic {}; rerun `tabulate`", p.topic_id),
            })
        })
        .collect()
}

pub fn run_graph(cfg: &PipelineConfig) -> Result<GraphArtifact> {
    cfg.validate()?;
    let profiles = read_profiles(cfg)?;
    let tables = read_tables(cfg)?;
    let (corpus, _) = corpus_from_ingest(cfg)?;
    let graph = CitationGraph::build(&corpus);
    let mut art = GraphArtifact {
        max_depth: cfg.max_depth,
        histograms: Vec::new(),
        alternatives: Vec::new(),
        indirect: Vec::new(),
    };
    for (p, t) in paired(&profiles, &tables)? {
        art.histograms.push(path_histogram(&graph, t, p, cfg.max_depth));
        art.alternatives.push((
            p.topic_id,
            top_alternatives(&graph, t, p, cfg.alternatives, cfg.max_depth),
        ));
        for lag in 0..=cfg.horizon_years {
            let c = t.counts_at_lag(lag);
            if c.mentions() == 0 {
                continue;
            }
            art.indirect.push(IndirectPoint {
                topic_id: p.topic_id,
                lag,
                p_direct: c.n_both as f64 / c.mentions() as f64,
                p_adjusted: indirect_adjusted_p(t, &graph, p, lag)?,
            });
        }
    }
    artifact::write(&path(cfg, GRAPH_FILE), "oblit-graph", ARTIFACT_VERSION, &art)?;
    Ok(art)
}

fn fit_or_note(
    name: &str,
    xs: &[f64],
    ys: &[f64],
    f: fn(&[f64], &[f64]) -> Result<RegressionFit>,
) -> Fit {
    let (fit, note) = match f(xs, ys) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Fit {
        name: name.to_string(),
        points: xs.len(),
        fit,
        note,
    }
}

pub fn run_metrics(cfg: &PipelineConfig) -> Result<MetricsArtifact> {
    cfg.validate()?;
    let profiles = read_profiles(cfg)?;
    let tables = read_tables(cfg)?;
    let (corpus, _) = corpus_from_ingest(cfg)?;
    let norm = normalizer(cfg)?;
    let pairs = paired(&profiles, &tables)?;

    let decay = if tables.is_empty() {
        Vec::new()
    } else {
        match temporal_decay(&tables, cfg.horizon_years, cfg.aggregation) {
            Ok(d) => d,
            Err(Error::Insufficient(_)) => Vec::new(),
            Err(e) => return Err(e),
        }
    };

    let topics: Vec<TopicPoint> = pairs
        .iter()
        .map(|(_, t)| {
            let c = t.totals();
            TopicPoint {
                topic_id: t.topic_id,
                citations: c.citations(),
                hidden: c.hidden(),
                mentions: c.mentions(),
                p_cite_given_mention: (c.mentions() > 0)
                    .then(|| c.n_both as f64 / c.mentions() as f64),
            }
        })
        .collect();
    // Log scales need positive counts.
    let scaling: Vec<&TopicPoint> = topics
        .iter()
        .filter(|t| t.citations > 0 && t.hidden > 0)
        .collect();
    let cs: Vec<f64> = scaling.iter().map(|t| t.citations as f64).collect();
    let hs: Vec<f64> = scaling.iter().map(|t| t.hidden as f64).collect();
    let mentioned: Vec<&TopicPoint> = topics.iter().filter(|t| t.mentions > 0).collect();
    let ms: Vec<f64> = mentioned.iter().map(|t| t.mentions as f64).collect();
    let ps: Vec<f64> = mentioned
        .iter()
        .map(|t| t.p_cite_given_mention.unwrap_or(0.0))
        .collect();
    let fits = vec![
        fit_or_note("log10_hidden_vs_log10_citations", &cs, &hs, loglog_fit),
        fit_or_note("p_cite_given_mention_vs_log10_mentions", &ms, &ps, loglinear_fit),
    ];
    let all_c: Vec<f64> = topics.iter().map(|t| t.citations as f64).collect();
    let all_h: Vec<f64> = topics.iter().map(|t| t.hidden as f64).collect();
    let perm = PermutationConfig {
        permutations: cfg.permutations,
        seed: stage_seed(cfg.seed, Stage::Metrics),
        significance: cfg.significance,
    };
    let spearman = match spearman(&all_c, &all_h, &perm) {
        Ok(s) => Some(s),
        Err(Error::Insufficient(_)) => None,
        Err(e) => return Err(e),
    };

    let h = attribute_hidden_to_papers(&profiles, &tables, cfg.attribution)?;
    let graph = CitationGraph::build(&corpus);
    let mut found: Vec<String> = profiles
        .iter()
        .flat_map(|p| p.foundational_papers.iter().map(|f| f.paper_id.clone()))
        .collect();
    found.sort();
    found.dedup();
    let c: BTreeMap<String, f64> = found
        .iter()
        .map(|id| {
            let n = graph.index(id).map_or(0, |i| graph.in_degree(i));
            (id.clone(), n as f64)
        })
        .collect();
    let rank_deltas = rank_deltas(&found, &c, &h);

    let origin = catchphrase_origin(&profiles, &corpus, &norm)?;
    let overrides = cfg
        .class_overrides
        .as_ref()
        .map(|p| ClassOverrides::load(p, &norm))
        .transpose()?;
    let classes = classify_catchphrases(&profiles, &corpus, &norm, overrides.as_ref())?;
    let author_counts = author_count_stats(&profiles, &corpus, &classes)?;

    let art = MetricsArtifact {
        decay,
        topics,
        fits,
        spearman,
        rank_deltas,
        origin,
        classes,
        author_counts,
    };
    artifact::write(&path(cfg, METRICS_FILE), "oblit-metrics", ARTIFACT_VERSION, &art)?;
    Ok(art)
}

fn create(p: &Path) -> Result<BufWriter<File>> {
    File::create(p)
        .map(BufWriter::new)
        .map_err(|e| Error::io(p, e))
}

fn finish(p: &Path, r: std::io::Result<()>, mut w: BufWriter<File>) -> Result<()> {
    r.and_then(|_| w.flush()).map_err(|e| Error::io(p, e))
}

pub(crate) fn write_csv<F>(dir: &Path, name: &str, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let p = dir.join(name);
    let mut w = create(&p)?;
    let r = f(&mut w);
    finish(&p, r, w)
}

pub(crate) fn read_graph(cfg: &PipelineConfig) -> Result<GraphArtifact> {
    artifact::read(&path(cfg, GRAPH_FILE), "oblit-graph", ARTIFACT_VERSION, "graph")
}

pub(crate) fn read_metrics(cfg: &PipelineConfig) -> Result<MetricsArtifact> {
    artifact::read(&path(cfg, METRICS_FILE), "oblit-metrics", ARTIFACT_VERSION, "metrics")
}
