use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::LazyLock;

use super::porter;
use crate::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

static DEFAULT: LazyLock<TextNormalizer> = LazyLock::new(TextNormalizer::default);

/// Lowercases, splits, drops stopwords and stems.
///
/// Hyphens, slashes and every other non-alphanumeric character separate
/// words. Clause punctuation (`.,;:!?` and brackets) additionally separates
/// *segments*; n-grams for training never span a segment boundary.
#[derive(Debug, Clone)]
pub struct TextNormalizer {
    stopwords: HashSet<String>,
    exceptions: HashMap<String, String>,
}

impl Default for TextNormalizer {
    fn default() -> Self {
        Self {
            stopwords: parse_list(DEFAULT_STOPWORDS).into_iter().collect(),
            exceptions: HashMap::new(),
        }
    }
}

fn parse_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

fn is_clause_break(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | ';' | ':' | '!' | '?' | '(' | ')' | '[' | ']' | '{' | '}' | '"'
    )
}

impl TextNormalizer {
    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stopwords = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .collect();
        self
    }

    /// Reads a stopword file (one word per line, `#` comments).
    pub fn with_stopword_file(self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(self.with_stopwords(parse_list(&text)))
    }

    /// Reads a stemmer exception file: each line is `word stem`.
    pub fn with_exception_file(mut self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(w), Some(s), None) => {
                    self.exceptions.insert(w.to_lowercase(), s.to_lowercase());
                }
                _ => return Err(Error::malformed(i + 1, "exception", "expected `word stem`")),
            }
        }
        Ok(self)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    fn stem_word(&self, word: &str) -> String {
        match self.exceptions.get(word) {
            Some(s) => s.clone(),
            None => porter::stem(word),
        }
    }

    /// Stemmed token stream of `text`, ignoring segment boundaries.
    pub fn tokenize_and_stem(&self, text: &str) -> Vec<String> {
        self.segments(text).into_iter().flatten().collect()
    }

    /// Stemmed tokens grouped into clause segments. Empty segments are dropped.
    pub fn segments(&self, text: &str) -> Vec<Vec<String>> {
        let lower = text.to_lowercase();
        let mut out = Vec::new();
        let mut current = Vec::new();
        let mut word = String::new();
        for c in lower.chars() {
            if c.is_alphanumeric() {
                word.push(c);
                continue;
            }
            if !word.is_empty() {
                self.push_word(&mut current, &word);
                word.clear();
            }
            if is_clause_break(c) && !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        }
        if !word.is_empty() {
            self.push_word(&mut current, &word);
        }
        if !current.is_empty() {
            out.push(current);
        }
        out
    }

    fn push_word(&self, seg: &mut Vec<String>, word: &str) {
        if !self.is_stopword(word) {
            seg.push(self.stem_word(word));
        }
    }
}

/// [`TextNormalizer::tokenize_and_stem`] with the shipped stopword list.
pub fn tokenize_and_stem(text: &str) -> Vec<String> {
    DEFAULT.tokenize_and_stem(text)
}

pub fn default_normalizer() -> &'static TextNormalizer {
    &DEFAULT
}
