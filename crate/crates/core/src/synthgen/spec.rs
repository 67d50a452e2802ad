use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{keyvalue, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Planted counts are realized by rounding; no sampling error.
    #[default]
    Exact,
    /// Binary splits are drawn from binomials around the planted rates.
    Sampled,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(format!("unknown mode `{other}` (exact|sampled)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: usize,
    pub max: usize,
}

impl Span {
    pub const fn new(min: usize, max: usize) -> Self {
        Span { min, max }
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
        match s.split_once("..") {
            Some((a, b)) => Ok(Span::new(parse(a)?, parse(b)?)),
            None => {
                let v = parse(s)?;
                Ok(Span::new(v, v))
            }
        }
    }
}

/// Power-law planting of hidden versus explicit citation totals per topic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub exponent: f64,
    /// Standard deviation of the log10 noise on `h`.
    pub noise_sd: f64,
    pub c_min: usize,
    pub c_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub num_topics: usize,
    pub catchphrases_per_topic: usize,
    pub catchphrase_words: Span,
    pub foundational: Span,
    /// Citation weights of a topic's foundational papers; empty means
    /// `1, 1/2, 1/3, ...`.
    pub foundational_weights: Vec<f64>,
    pub first_year: i32,
    /// Topic `t` starts at `first_year + t % year_spread`.
    pub year_spread: i32,
    /// Followers are generated at lags `0..=horizon_years`.
    pub horizon_years: i32,
    pub mentions_per_year: usize,
    pub cite_only_per_year: usize,
    /// p(cite | mention), linear from lag 0 to the horizon.
    pub p_cite_start: f64,
    pub p_cite_end: f64,
    /// Fraction of hidden citations routed through one intermediary.
    pub indirect_start: f64,
    pub indirect_end: f64,
    /// Probability a hidden citation also cites the topic's review.
    pub alternative_prob: f64,
    pub leak_contexts_per_catchphrase: usize,
    pub noise_words_per_context: usize,
    pub background_vocab: usize,
    pub background_papers: usize,
    pub background_citations: Span,
    pub background_citing_papers: usize,
    pub filler_words: usize,
    pub title_catchphrase_fraction: f64,
    pub eponym_fraction: f64,
    pub eponym_authors: Span,
    pub other_authors: Span,
    pub scaling: Option<Scaling>,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            num_topics: 20,
            catchphrases_per_topic: 2,
            catchphrase_words: Span::new(2, 3),
            foundational: Span::new(1, 3),
            foundational_weights: Vec::new(),
            first_year: 1990,
            year_spread: 8,
            horizon_years: 20,
            mentions_per_year: 10,
            cite_only_per_year: 4,
            p_cite_start: 0.8,
            p_cite_end: 0.64,
            indirect_start: 0.6,
            indirect_end: 0.6,
            alternative_prob: 0.5,
            leak_contexts_per_catchphrase: 1,
            noise_words_per_context: 2,
            background_vocab: 300,
            background_papers: 60,
            background_citations: Span::new(5, 250),
            background_citing_papers: 300,
            filler_words: 12,
            title_catchphrase_fraction: 0.25,
            eponym_fraction: 0.3,
            eponym_authors: Span::new(1, 4),
            other_authors: Span::new(3, 8),
            scaling: None,
            mode: Mode::Exact,
            seed: 7,
        }
    }
}

fn scaling_entry(sc: &mut Option<Scaling>) -> &mut Scaling {
    sc.get_or_insert(Scaling {
        exponent: 0.763,
        noise_sd: 0.1,
        c_min: 20,
        c_max: 400,
    })
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Config(format!("{name} = {v} is not a probability")));
    }
    Ok(())
}

fn check_span(name: &str, s: Span, min: usize) -> Result<()> {
    if s.min < min || s.min > s.max {
        return Err(Error::Config(format!(
            "{name} = {}..{} must satisfy {min} <= min <= max",
            s.min, s.max
        )));
    }
    Ok(())
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_topics == 0 {
            return Err(Error::Config("num_topics must be at least 1".into()));
        }
        if self.catchphrases_per_topic == 0 {
            return Err(Error::Config("catchphrases_per_topic must be at least 1".into()));
        }
        check_span("catchphrase_words", self.catchphrase_words, 1)?;
        check_span("foundational", self.foundational, 1)?;
        check_span("eponym_authors", self.eponym_authors, 1)?;
        check_span("other_authors", self.other_authors, 1)?;
        check_span("background_citations", self.background_citations, 1)?;
        for (n, v) in [
            ("p_cite_start", self.p_cite_start),
            ("p_cite_end", self.p_cite_end),
            ("indirect_start", self.indirect_start),
            ("indirect_end", self.indirect_end),
            ("alternative_prob", self.alternative_prob),
            ("title_catchphrase_fraction", self.title_catchphrase_fraction),
            ("eponym_fraction", self.eponym_fraction),
        ] {
            check_prob(n, v)?;
        }
        if !self.foundational_weights.is_empty() {
            if self.foundational.min != self.foundational.max
                || self.foundational_weights.len() != self.foundational.min
            {
                return Err(Error::Config(
                    "foundational_weights needs a fixed foundational count of the same length"
                        .into(),
                ));
            }
            if self.foundational_weights.iter().any(|w| !(*w > 0.0)) {
                return Err(Error::Config("foundational_weights must be positive".into()));
            }
        }
        if self.year_spread < 1 || self.horizon_years < 0 {
            return Err(Error::Config("year_spread >= 1 and horizon_years >= 0".into()));
        }
        let last = self.first_year + self.year_spread + self.horizon_years + 3;
        if self.first_year - 10 < crate::corpus::MIN_YEAR || last > crate::corpus::MAX_YEAR {
            return Err(Error::Config("generated years fall outside [1800, 2100]".into()));
        }
        if self.background_vocab < 2 * self.noise_words_per_context.max(1) {
            return Err(Error::Config("background_vocab too small".into()));
        }
        if self.background_citations.max > self.background_citing_papers {
            return Err(Error::Config(
                "background citation counts exceed the citing-paper pool".into(),
            ));
        }
        if self.leak_contexts_per_catchphrase > 0 && self.background_papers == 0 {
            return Err(Error::Config("leak contexts need background papers".into()));
        }
        if let Some(s) = &self.scaling {
            if s.c_min < 2 || s.c_min > s.c_max || !(s.noise_sd >= 0.0) {
                return Err(Error::Config("scaling needs 2 <= c_min <= c_max, noise_sd >= 0".into()));
            }
        }
        Ok(())
    }

    /// Reads `key = value` lines over the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = GeneratorSpec::default();
        let mut scaling: Option<Scaling> = None;
        for e in keyvalue::parse(text)? {
            match e.key.as_str() {
                "num_topics" => s.num_topics = e.parse()?,
                "catchphrases_per_topic" => s.catchphrases_per_topic = e.parse()?,
                "catchphrase_words" => s.catchphrase_words = e.parse()?,
                "foundational" => s.foundational = e.parse()?,
                "foundational_weights" => s.foundational_weights = e.list()?,
                "first_year" => s.first_year = e.parse()?,
                "year_spread" => s.year_spread = e.parse()?,
                "horizon_years" => s.horizon_years = e.parse()?,
                "mentions_per_year" => s.mentions_per_year = e.parse()?,
                "cite_only_per_year" => s.cite_only_per_year = e.parse()?,
                "p_cite_start" => s.p_cite_start = e.parse()?,
                "p_cite_end" => s.p_cite_end = e.parse()?,
                "indirect_start" => s.indirect_start = e.parse()?,
                "indirect_end" => s.indirect_end = e.parse()?,
                "alternative_prob" => s.alternative_prob = e.parse()?,
                "leak_contexts_per_catchphrase" => s.leak_contexts_per_catchphrase = e.parse()?,
                "noise_words_per_context" => s.noise_words_per_context = e.parse()?,
                "background_vocab" => s.background_vocab = e.parse()?,
                "background_papers" => s.background_papers = e.parse()?,
                "background_citations" => s.background_citations = e.parse()?,
                "background_citing_papers" => s.background_citing_papers = e.parse()?,
                "filler_words" => s.filler_words = e.parse()?,
                "title_catchphrase_fraction" => s.title_catchphrase_fraction = e.parse()?,
                "eponym_fraction" => s.eponym_fraction = e.parse()?,
                "eponym_authors" => s.eponym_authors = e.parse()?,
                "other_authors" => s.other_authors = e.parse()?,
                "scaling.exponent" => scaling_entry(&mut scaling).exponent = e.parse()?,
                "scaling.noise_sd" => scaling_entry(&mut scaling).noise_sd = e.parse()?,
                "scaling.c_min" => scaling_entry(&mut scaling).c_min = e.parse()?,
                "scaling.c_max" => scaling_entry(&mut scaling).c_max = e.parse()?,
                "mode" => s.mode = e.parse()?,
                "seed" => s.seed = e.parse()?,
                _ => return Err(e.unknown()),
            }
        }
        s.scaling = scaling;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
