//! Synthetic corpora with planted topics, catchphrases, foundational papers
//! and follower behavior.

mod generate;
mod spec;
mod truth;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub use generate::{generate, self_check, Synthetic};
pub use spec::{GeneratorSpec, Mode, Scaling, Span};
pub use truth::{GroundTruth, TopicTruth, YearPlan};

use crate::corpus::write_corpus;
use crate::{Error, Result};

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const TRUTH_FILE: &str = "ground_truth.jsonl";

impl Synthetic {
    /// Writes `corpus.jsonl` and `ground_truth.jsonl` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let corpus = dir.join(CORPUS_FILE);
        let f = File::create(&corpus).map_err(|e| Error::io(&corpus, e))?;
        let mut w = BufWriter::new(f);
        write_corpus(&mut w, &self.papers, &self.contexts)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&corpus, e))?;
        let truth = dir.join(TRUTH_FILE);
        let f = File::create(&truth).map_err(|e| Error::io(&truth, e))?;
        let mut w = BufWriter::new(f);
        self.truth
            .write(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&truth, e))
    }
}
