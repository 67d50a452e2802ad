use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::record::{CitationContext, Corpus};
use super::text::TextNormalizer;
use crate::{Error, Result};

/// A phrase of stems; the canonical form is the space-joined stem list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ngram(String);

impl Ngram {
    pub fn from_stems<S: AsRef<str>>(stems: &[S]) -> Self {
        let parts: Vec<&str> = stems.iter().map(AsRef::as_ref).collect();
        Ngram(parts.join(" "))
    }

    /// Parses an already-canonical form (space-separated stems).
    pub fn from_canonical(s: &str) -> Self {
        Ngram(s.split_whitespace().collect::<Vec<_>>().join(" "))
    }

    /// Normalizes raw text into an n-gram with the given normalizer.
    pub fn from_text(normalizer: &TextNormalizer, text: &str) -> Self {
        Ngram::from_stems(&normalizer.tokenize_and_stem(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn stems(&self) -> impl Iterator<Item = &str> {
        self.0.split(' ').filter(|s| !s.is_empty())
    }

    pub fn len(&self) -> usize {
        self.stems().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Ngram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NgramConfig {
    pub max_len: usize,
    /// Minimum number of occurrences over all contexts.
    pub min_count: usize,
    /// Minimum number of distinct cited papers.
    pub min_docs: usize,
}

impl Default for NgramConfig {
    fn default() -> Self {
        Self {
            max_len: 6,
            min_count: 5,
            min_docs: 2,
        }
    }
}

impl NgramConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len == 0 {
            return Err(Error::Config("ngram.max_len must be at least 1".into()));
        }
        Ok(())
    }
}

/// One `(n-gram, cited paper)` occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceTuple<'a> {
    pub ngram: &'a Ngram,
    pub cited_id: &'a str,
}

/// Interned occurrence tuples: the training input of the topic model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OccurrenceSet {
    /// Sorted vocabulary.
    pub vocabulary: Vec<Ngram>,
    /// Cited papers in order of first appearance.
    pub documents: Vec<String>,
    /// `(vocabulary index, document index)` per occurrence.
    pub tuples: Vec<(u32, u32)>,
}

impl OccurrenceSet {
    /// Interns raw `(ngram, doc)` pairs, keeping their order.
    pub fn from_pairs<I, N, D>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (N, D)>,
        N: Into<Ngram>,
        D: Into<String>,
    {
        let raw: Vec<(Ngram, String)> = pairs
            .into_iter()
            .map(|(n, d)| (n.into(), d.into()))
            .collect();
        let mut vocabulary: Vec<Ngram> = raw.iter().map(|(n, _)| n.clone()).collect();
        vocabulary.sort();
        vocabulary.dedup();
        let word_ix: HashMap<&Ngram, u32> = vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        let mut documents = Vec::new();
        let mut doc_ix: HashMap<String, u32> = HashMap::new();
        let mut tuples = Vec::with_capacity(raw.len());
        for (n, d) in &raw {
            let di = *doc_ix.entry(d.clone()).or_insert_with(|| {
                documents.push(d.clone());
                (documents.len() - 1) as u32
            });
            tuples.push((word_ix[n], di));
        }
        Self {
            vocabulary,
            documents,
            tuples,
        }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = OccurrenceTuple<'_>> {
        self.tuples.iter().map(|&(w, d)| OccurrenceTuple {
            ngram: &self.vocabulary[w as usize],
            cited_id: &self.documents[d as usize],
        })
    }
}

impl From<&str> for Ngram {
    fn from(s: &str) -> Self {
        Ngram::from_canonical(s)
    }
}

impl From<String> for Ngram {
    fn from(s: String) -> Self {
        Ngram::from_canonical(&s)
    }
}

/// Every n-gram of length `1..=max_len` inside each segment, ordered by start
/// position then length.
pub fn enumerate_ngrams(segments: &[Vec<String>], max_len: usize) -> Vec<Ngram> {
    let mut out = Vec::new();
    for seg in segments {
        for start in 0..seg.len() {
            for len in 1..=max_len.min(seg.len() - start) {
                out.push(Ngram::from_stems(&seg[start..start + len]));
            }
        }
    }
    out
}

/// Extracts occurrence tuples from citation contexts.
///
/// Contexts citing books or reviews are skipped entirely, both for counting
/// and for output. An n-gram is kept when it occurs at least `min_count` times
/// with at least `min_docs` distinct cited papers.
pub fn extract_occurrences(
    contexts: &[CitationContext],
    corpus: &Corpus,
    normalizer: &TextNormalizer,
    config: &NgramConfig,
) -> Result<OccurrenceSet> {
    config.validate()?;
    let mut per_context: Vec<(&str, Vec<Ngram>)> = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        let cited = corpus.require(&ctx.cited_id)?;
        if cited.is_book_or_review {
            continue;
        }
        let grams = enumerate_ngrams(&normalizer.segments(&ctx.text), config.max_len);
        per_context.push((ctx.cited_id.as_str(), grams));
    }

    let mut stats: HashMap<&Ngram, (usize, HashSet<&str>)> = HashMap::new();
    for (doc, grams) in &per_context {
        for g in grams {
            let e = stats.entry(g).or_default();
            e.0 += 1;
            e.1.insert(doc);
        }
    }
    let kept: BTreeMap<&Ngram, ()> = stats
        .into_iter()
        .filter(|(_, (count, docs))| *count >= config.min_count && docs.len() >= config.min_docs)
        .map(|(g, _)| (g, ()))
        .collect();

    let pairs = per_context.iter().flat_map(|(doc, grams)| {
        grams
            .iter()
            .filter(|g| kept.contains_key(g))
            .map(move |g| (g.clone(), doc.to_string()))
    });
    Ok(OccurrenceSet::from_pairs(pairs))
}
