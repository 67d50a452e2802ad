//! Corpus ingestion, text normalization, occurrence extraction and the
//! full-text mention index.

mod mention;
mod ngram;
mod porter;
mod record;
mod text;

pub use mention::{build_mention_index, MentionIndex, PhraseMatcher};
pub use ngram::{
    enumerate_ngrams, extract_occurrences, Ngram, NgramConfig, OccurrenceSet, OccurrenceTuple,
};
pub use porter::stem;
pub use record::{
    ingest, read_corpus, write_corpus, CitationContext, Corpus, CorpusData, PaperRecord, MAX_YEAR,
    MIN_YEAR,
};
pub use text::{default_normalizer, tokenize_and_stem, TextNormalizer};
