use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ngram::Ngram;
use super::record::Corpus;
use super::text::TextNormalizer;
use crate::{Error, Result};

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<String, u32>,
    pattern: Option<u32>,
}

/// Multi-pattern matcher over stem sequences: a trie of the patterns walked
/// from every start position of a token stream.
#[derive(Debug, Clone)]
pub struct PhraseMatcher {
    nodes: Vec<Node>,
    patterns: Vec<Ngram>,
    depth: usize,
}

impl PhraseMatcher {
    pub fn new<'a, I: IntoIterator<Item = &'a Ngram>>(patterns: I) -> Self {
        let mut m = PhraseMatcher {
            nodes: vec![Node::default()],
            patterns: Vec::new(),
            depth: 0,
        };
        let mut uniq: Vec<&Ngram> = patterns.into_iter().filter(|p| !p.is_empty()).collect();
        uniq.sort();
        uniq.dedup();
        for p in uniq {
            let pid = m.patterns.len() as u32;
            m.patterns.push(p.clone());
            let mut node = 0usize;
            let mut len = 0;
            for stem in p.stems() {
                len += 1;
                let next = match m.nodes[node].children.get(stem) {
                    Some(&n) => n as usize,
                    None => {
                        m.nodes.push(Node::default());
                        let n = m.nodes.len() - 1;
                        m.nodes[node].children.insert(stem.to_string(), n as u32);
                        n
                    }
                };
                node = next;
            }
            m.nodes[node].pattern = Some(pid);
            m.depth = m.depth.max(len);
        }
        m
    }

    pub fn patterns(&self) -> &[Ngram] {
        &self.patterns
    }

    /// Indices (into [`Self::patterns`]) of every pattern occurring in `tokens`,
    /// sorted and deduplicated.
    pub fn find_all<S: AsRef<str>>(&self, tokens: &[S]) -> BTreeSet<usize> {
        let mut found = BTreeSet::new();
        for start in 0..tokens.len() {
            let mut node = 0usize;
            for tok in tokens[start..].iter().take(self.depth) {
                match self.nodes[node].children.get(tok.as_ref()) {
                    Some(&n) => node = n as usize,
                    None => break,
                }
                if let Some(p) = self.nodes[node].pattern {
                    found.insert(p as usize);
                }
            }
        }
        found
    }

    pub fn contains_any<S: AsRef<str>>(&self, tokens: &[S]) -> bool {
        !self.find_all(tokens).is_empty()
    }
}

/// For each vocabulary n-gram, the papers whose full text contains it.
/// Every vocabulary entry is present, possibly with an empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionIndex {
    entries: BTreeMap<Ngram, BTreeSet<String>>,
}

impl MentionIndex {
    pub fn papers(&self, ngram: &Ngram) -> Option<&BTreeSet<String>> {
        self.entries.get(ngram)
    }

    pub fn covers(&self, ngram: &Ngram) -> bool {
        self.entries.contains_key(ngram)
    }

    pub fn entries(&self) -> &BTreeMap<Ngram, BTreeSet<String>> {
        &self.entries
    }

    /// Papers mentioning any of `ngrams`; errors if one is not indexed.
    pub fn mentioning_any<'a, I: IntoIterator<Item = &'a Ngram>>(
        &self,
        ngrams: I,
    ) -> Result<BTreeSet<&str>> {
        let mut out = BTreeSet::new();
        for g in ngrams {
            let set = self
                .entries
                .get(g)
                .ok_or_else(|| Error::IndexMismatch(g.to_string()))?;
            out.extend(set.iter().map(String::as_str));
        }
        Ok(out)
    }
}

/// Scans every paper's full text once with a multi-pattern matcher.
pub fn build_mention_index<'a, I>(
    corpus: &Corpus,
    vocabulary: I,
    normalizer: &TextNormalizer,
) -> MentionIndex
where
    I: IntoIterator<Item = &'a Ngram>,
{
    let matcher = PhraseMatcher::new(vocabulary);
    let hits: Vec<(usize, BTreeSet<usize>)> = corpus
        .papers()
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let text = p.full_text.as_deref()?;
            let tokens = normalizer.tokenize_and_stem(text);
            Some((i, matcher.find_all(&tokens)))
        })
        .collect();
    let mut entries: BTreeMap<Ngram, BTreeSet<String>> = matcher
        .patterns()
        .iter()
        .map(|p| (p.clone(), BTreeSet::new()))
        .collect();
    for (i, found) in hits {
        let id = &corpus.papers()[i].paper_id;
        for pid in found {
            entries
                .get_mut(&matcher.patterns()[pid])
                .expect("pattern indexed")
                .insert(id.clone());
        }
    }
    MentionIndex { entries }
}
