use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Ngram, PhraseMatcher, TextNormalizer};
use crate::detector::TopicProfile;
use crate::stats;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginStats {
    /// Foundational papers with a title or abstract.
    pub considered: usize,
    /// Of those, papers whose title and abstract contain none of the catchphrases.
    pub absent: usize,
    /// Foundational papers lacking both title and abstract.
    pub excluded: usize,
}

impl OriginStats {
    pub fn fraction_absent(&self) -> Option<f64> {
        (self.considered > 0).then(|| self.absent as f64 / self.considered as f64)
    }
}

/// For each distinct foundational paper, whether any catchphrase of the topics
/// it founds appears in its title or abstract (each scanned separately).
pub fn catchphrase_origin(
    profiles: &[TopicProfile],
    corpus: &Corpus,
    normalizer: &TextNormalizer,
) -> Result<OriginStats> {
    let mut phrases: BTreeMap<&str, BTreeSet<&Ngram>> = BTreeMap::new();
    for p in profiles {
        for f in &p.foundational_papers {
            phrases
                .entry(f.paper_id.as_str())
                .or_default()
                .extend(p.catchphrase_ngrams());
        }
    }
    let mut stats = OriginStats {
        considered: 0,
        absent: 0,
        excluded: 0,
    };
    for (id, grams) in phrases {
        let paper = corpus.require(id)?;
        if paper.title.trim().is_empty() && paper.abstract_text.trim().is_empty() {
            stats.excluded += 1;
            continue;
        }
        stats.considered += 1;
        let matcher = PhraseMatcher::new(grams);
        let found = [&paper.title, &paper.abstract_text]
            .iter()
            .any(|t| matcher.contains_any(&normalizer.tokenize_and_stem(t)));
        if !found {
            stats.absent += 1;
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CatchphraseClass {
    Eponym,
    Experiment,
    Other,
}

impl fmt::Display for CatchphraseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatchphraseClass::Eponym => "eponym",
            CatchphraseClass::Experiment => "experiment",
            CatchphraseClass::Other => "other",
        })
    }
}

impl FromStr for CatchphraseClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "eponym" => Ok(CatchphraseClass::Eponym),
            "experiment" => Ok(CatchphraseClass::Experiment),
            "other" => Ok(CatchphraseClass::Other),
            other => Err(format!("unknown class `{other}`")),
        }
    }
}

/// Manual labels keyed by normalized catchphrase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassOverrides {
    labels: BTreeMap<Ngram, CatchphraseClass>,
}

impl ClassOverrides {
    /// Lines of `catchphrase = class`; blank lines and `#` comments skipped.
    pub fn parse(text: &str, normalizer: &TextNormalizer) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (phrase, class) = line
                .rsplit_once('=')
                .ok_or_else(|| Error::malformed(i + 1, "override", "expected `phrase = class`"))?;
            let class: CatchphraseClass = class
                .parse()
                .map_err(|e: String| Error::malformed(i + 1, "class", e))?;
            let gram = Ngram::from_text(normalizer, phrase);
            if gram.is_empty() {
                return Err(Error::malformed(i + 1, "phrase", "empty after normalization"));
            }
            labels.insert(gram, class);
        }
        Ok(Self { labels })
    }

    pub fn load(path: &Path, normalizer: &TextNormalizer) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, normalizer)
    }

    fn lookup(&self, profile: &TopicProfile) -> Option<CatchphraseClass> {
        profile
            .catchphrase_ngrams()
            .find_map(|g| self.labels.get(g).copied())
    }
}

/// Eponym when a catchphrase contains the stemmed surname of a foundational
/// author; experiment only by override; otherwise other.
pub fn classify_catchphrases(
    profiles: &[TopicProfile],
    corpus: &Corpus,
    normalizer: &TextNormalizer,
    overrides: Option<&ClassOverrides>,
) -> Result<BTreeMap<usize, CatchphraseClass>> {
    let mut out = BTreeMap::new();
    for p in profiles {
        if let Some(c) = overrides.and_then(|o| o.lookup(p)) {
            out.insert(p.topic_id, c);
            continue;
        }
        let mut surnames = Vec::new();
        for f in &p.foundational_papers {
            for a in &corpus.require(&f.paper_id)?.authors {
                let g = Ngram::from_text(normalizer, a);
                if !g.is_empty() {
                    surnames.push(g);
                }
            }
        }
        let matcher = PhraseMatcher::new(&surnames);
        let eponym = p.catchphrase_ngrams().any(|g| {
            let stems: Vec<&str> = g.stems().collect();
            matcher.contains_any(&stems)
        });
        out.insert(
            p.topic_id,
            if eponym {
                CatchphraseClass::Eponym
            } else {
                CatchphraseClass::Other
            },
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuthorStats {
    pub papers: usize,
    pub mean: f64,
    /// `1.96 * SE`; `None` for a single paper.
    pub halfwidth: Option<f64>,
}

/// Mean author count of the distinct foundational papers in each class.
/// Classes without papers are absent from the result.
pub fn author_count_stats(
    profiles: &[TopicProfile],
    corpus: &Corpus,
    classes: &BTreeMap<usize, CatchphraseClass>,
) -> Result<BTreeMap<CatchphraseClass, AuthorStats>> {
    let mut members: BTreeMap<CatchphraseClass, BTreeSet<&str>> = BTreeMap::new();
    for p in profiles {
        let Some(&class) = classes.get(&p.topic_id) else {
            continue;
        };
        members
            .entry(class)
            .or_default()
            .extend(p.foundational_papers.iter().map(|f| f.paper_id.as_str()));
    }
    let mut out = BTreeMap::new();
    for (class, ids) in members {
        let counts: Vec<f64> = ids
            .iter()
            .map(|id| corpus.require(id).map(|p| p.authors.len() as f64))
            .collect::<Result<_>>()?;
        if counts.is_empty() {
            continue;
        }
        let (mean, halfwidth) = stats::mean_with_halfwidth(&counts);
        out.insert(
            class,
            AuthorStats {
                papers: counts.len(),
                mean,
                halfwidth,
            },
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;
    use crate::detector::{Catchphrase, FoundationalPaper};
    use crate::stats::Estimate;

    fn e() -> Estimate {
        Estimate {
            estimate: 1.0,
            halfwidth: 0.0,
        }
    }

    fn profile(topic: usize, catch: &str, found: &[&str]) -> TopicProfile {
        let n = TextNormalizer::default();
        TopicProfile {
            topic_id: topic,
            catchphrases: vec![Catchphrase {
                ngram: Ngram::from_text(&n, catch),
                p: e(),
            }],
            foundational_papers: found
                .iter()
                .map(|id| FoundationalPaper {
                    paper_id: id.to_string(),
                    p: e(),
                })
                .collect(),
            first_foundational_year: 1986,
        }
    }

    fn paper(id: &str, title: &str, authors: &[&str]) -> PaperRecord {
        let mut p = PaperRecord::new(id, 1986);
        p.title = title.into();
        p.authors = authors.iter().map(|s| s.to_string()).collect();
        p
    }

    #[test]
    fn kpz_is_eponym() {
        let c = Corpus::new(vec![paper(
            "kpz",
            "Dynamic scaling of growing interfaces",
            &["Kardar", "Parisi", "Zhang"],
        )])
        .unwrap();
        let n = TextNormalizer::default();
        let classes = classify_catchphrases(
            &[profile(0, "Kardar-Parisi-Zhang equation", &["kpz"])],
            &c,
            &n,
            None,
        )
        .unwrap();
        assert_eq!(classes[&0], CatchphraseClass::Eponym);
    }

    #[test]
    fn no_surname_is_other_and_override_wins() {
        let c = Corpus::new(vec![paper("sk", "Atmospheric neutrinos", &["Fukuda"])]).unwrap();
        let n = TextNormalizer::default();
        let profiles = [profile(3, "super-kamiokande", &["sk"])];
        let classes = classify_catchphrases(&profiles, &c, &n, None).unwrap();
        assert_eq!(classes[&3], CatchphraseClass::Other);
        let o = ClassOverrides::parse("# labels\nSuper-Kamiokande = experiment\n", &n).unwrap();
        let classes = classify_catchphrases(&profiles, &c, &n, Some(&o)).unwrap();
        assert_eq!(classes[&3], CatchphraseClass::Experiment);
    }

    #[test]
    fn malformed_override_names_line() {
        let n = TextNormalizer::default();
        let err = ClassOverrides::parse("kpz = eponym\nno separator\n", &n).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 2, .. }));
        assert!(ClassOverrides::parse("kpz = famous\n", &n).is_err());
    }

    #[test]
    fn origin_counts_title_hits() {
        let mut bare = PaperRecord::new("bare", 1990);
        bare.authors = vec![];
        let c = Corpus::new(vec![
            paper("a", "Quantum discord as a measure", &[]),
            paper("b", "Correlations in mixed states", &[]),
            bare,
        ])
        .unwrap();
        let n = TextNormalizer::default();
        let s = catchphrase_origin(
            &[profile(0, "quantum discord", &["a", "b", "bare"])],
            &c,
            &n,
        )
        .unwrap();
        assert_eq!((s.considered, s.absent, s.excluded), (2, 1, 1));
        assert_eq!(s.fraction_absent(), Some(0.5));
    }

    #[test]
    fn author_means() {
        let c = Corpus::new(vec![
            paper("a", "t", &["x", "y"]),
            paper("b", "t", &["x", "y", "z"]),
            paper("s", "t", &["x"]),
        ])
        .unwrap();
        let profiles = [profile(0, "p", &["a", "b"]), profile(1, "q", &["s"])];
        let classes = BTreeMap::from([(0, CatchphraseClass::Eponym), (1, CatchphraseClass::Other)]);
        let s = author_count_stats(&profiles, &c, &classes).unwrap();
        assert_eq!(s[&CatchphraseClass::Eponym].mean, 2.5);
        assert_eq!(s[&CatchphraseClass::Other].halfwidth, None);
        assert!(!s.contains_key(&CatchphraseClass::Experiment));
    }
}
