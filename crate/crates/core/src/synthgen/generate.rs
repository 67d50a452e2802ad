use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};

use super::spec::{GeneratorSpec, Mode, Span};
use super::truth::{GroundTruth, TopicTruth, YearPlan};
use crate::corpus::{default_normalizer, stem, CitationContext, Ngram, PaperRecord};
use crate::stats::apportion;
use crate::{Error, Result};

/// A generated corpus with its planted ground truth.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub papers: Vec<PaperRecord>,
    pub contexts: Vec<CitationContext>,
    pub truth: GroundTruth,
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// Pseudo-words that are their own stem and never repeat.
struct Words {
    used: HashSet<String>,
}

impl Words {
    fn fresh(&mut self, rng: &mut ChaCha8Rng) -> String {
        let norm = default_normalizer();
        loop {
            let syllables = rng.random_range(2..=3);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push(CONSONANTS[rng.random_range(0..CONSONANTS.len())] as char);
                w.push(VOWELS[rng.random_range(0..VOWELS.len())] as char);
            }
            w.push(CONSONANTS[rng.random_range(0..CONSONANTS.len())] as char);
            if stem(&w) == w && !norm.is_stopword(&w) && self.used.insert(w.clone()) {
                return w;
            }
        }
    }
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_ascii_uppercase().to_string() + c.as_str(),
        None => String::new(),
    }
}

fn draw(rng: &mut ChaCha8Rng, span: Span) -> usize {
    rng.random_range(span.min..=span.max)
}

fn split(rng: &mut ChaCha8Rng, mode: Mode, n: usize, p: f64) -> usize {
    match mode {
        Mode::Exact => (p * n as f64).round() as usize,
        Mode::Sampled => Binomial::new(n as u64, p)
            .expect("probability validated")
            .sample(rng) as usize,
    }
}

fn lerp(a: f64, b: f64, lag: i32, horizon: i32) -> f64 {
    if horizon == 0 {
        a
    } else {
        a + (b - a) * lag as f64 / horizon as f64
    }
}

struct Topic {
    truth: TopicTruth,
    titles: Vec<String>,
    authors: Vec<Vec<String>>,
    years: Vec<i32>,
}

struct Builder<'a> {
    spec: &'a GeneratorSpec,
    rng: ChaCha8Rng,
    bg_words: Vec<String>,
    papers: Vec<PaperRecord>,
    by_id: BTreeMap<String, usize>,
    contexts: Vec<CitationContext>,
}

impl Builder<'_> {
    fn bg_word(&mut self) -> &str {
        let i = self.rng.random_range(0..self.bg_words.len());
        &self.bg_words[i]
    }

    fn filler(&mut self, n: usize) -> String {
        (0..n)
            .map(|_| self.bg_word().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Each noise word stands in its own clause.
    fn noise(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.bg_word().to_string()).collect()
    }

    fn catch_context(&mut self, phrase: &str) -> String {
        let mut parts = vec![phrase.to_string()];
        parts.extend(self.noise(self.spec.noise_words_per_context));
        parts.join(", ")
    }

    fn noise_context(&mut self) -> String {
        self.noise(self.spec.noise_words_per_context + 1).join(", ")
    }

    fn full_text(&mut self, phrase: &str) -> String {
        let n = self.spec.filler_words;
        let a = self.filler(n / 2);
        let b = self.filler(n - n / 2);
        format!("{a}. {phrase} {b}.")
    }

    fn push(&mut self, p: PaperRecord) {
        self.by_id.insert(p.paper_id.clone(), self.papers.len());
        self.papers.push(p);
    }

    fn cite(&mut self, citing: &str, cited: &str, text: String) {
        let ix = self.by_id[citing];
        let refs = &mut self.papers[ix].references;
        if !refs.iter().any(|r| r == cited) {
            refs.push(cited.to_string());
        }
        self.contexts.push(CitationContext {
            citing_id: citing.to_string(),
            cited_id: cited.to_string(),
            text,
        });
    }
}

/// Generates a corpus realizing `spec`, then re-classifies it by brute force
/// and fails if the result disagrees with the plan.
pub fn generate(spec: &GeneratorSpec) -> Result<Synthetic> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut words = Words {
        used: HashSet::new(),
    };
    let bg_words: Vec<String> = (0..spec.background_vocab)
        .map(|_| words.fresh(&mut rng))
        .collect();

    let eponym_topics = (spec.eponym_fraction * spec.num_topics as f64).round() as usize;
    let mut topics = Vec::with_capacity(spec.num_topics);
    for t in 0..spec.num_topics {
        let n_found = draw(&mut rng, spec.foundational);
        let first_year = spec.first_year + t as i32 % spec.year_spread.max(1);
        let eponym = match spec.mode {
            Mode::Exact => t < eponym_topics,
            Mode::Sampled => rng.random_bool(spec.eponym_fraction),
        };
        let mut authors = Vec::with_capacity(n_found);
        let mut years = Vec::with_capacity(n_found);
        for i in 0..n_found {
            let span = if eponym {
                spec.eponym_authors
            } else {
                spec.other_authors
            };
            let n = draw(&mut rng, span);
            authors.push(
                (0..n)
                    .map(|_| capitalize(&words.fresh(&mut rng)))
                    .collect::<Vec<_>>(),
            );
            years.push(first_year + if i == 0 { 0 } else { rng.random_range(0..=2) });
        }
        let mut phrases = Vec::with_capacity(spec.catchphrases_per_topic);
        for c in 0..spec.catchphrases_per_topic {
            let len = draw(&mut rng, spec.catchphrase_words);
            let mut ws = Vec::with_capacity(len);
            if eponym && c == 0 {
                ws.push(authors[0][0].to_ascii_lowercase());
            }
            while ws.len() < len {
                ws.push(words.fresh(&mut rng));
            }
            phrases.push(ws.join(" "));
        }
        let weights: Vec<f64> = if spec.foundational_weights.is_empty() {
            (0..n_found).map(|i| 1.0 / (i + 1) as f64).collect()
        } else {
            (0..n_found)
                .map(|i| spec.foundational_weights[i.min(spec.foundational_weights.len() - 1)])
                .collect()
        };
        let sum: f64 = weights.iter().sum();
        let norm = default_normalizer();
        topics.push(Topic {
            truth: TopicTruth {
                topic: t,
                catchphrases: phrases.iter().map(|p| Ngram::from_text(norm, p)).collect(),
                catchphrase_text: phrases,
                foundational: (0..n_found).map(|i| format!("t{t:02}-f{i}")).collect(),
                weights: weights.iter().map(|w| w / sum).collect(),
                first_year,
                eponym,
                review: format!("t{t:02}-review"),
                years: Vec::new(),
            },
            titles: Vec::new(),
            authors,
            years,
        });
    }

    // Which foundational papers carry a catchphrase in the title.
    let slots: Vec<(usize, usize)> = topics
        .iter()
        .enumerate()
        .flat_map(|(t, tp)| (0..tp.truth.foundational.len()).map(move |i| (t, i)))
        .collect();
    let titled: BTreeSet<(usize, usize)> = match spec.mode {
        Mode::Exact => {
            let k = (spec.title_catchphrase_fraction * slots.len() as f64).round() as usize;
            let mut s = slots.clone();
            s.shuffle(&mut rng);
            s.into_iter().take(k).collect()
        }
        Mode::Sampled => slots
            .iter()
            .copied()
            .filter(|_| rng.random_bool(spec.title_catchphrase_fraction))
            .collect(),
    };

    // Per-year plans.
    let lags = spec.horizon_years;
    let mut scaling_points = Vec::new();
    for tp in topics.iter_mut() {
        let mut plan = Vec::with_capacity(lags as usize + 1);
        let per_year: Option<(Vec<usize>, Vec<usize>, Vec<usize>)> = match &spec.scaling {
            None => None,
            Some(s) => {
                let (lo, hi) = ((s.c_min as f64).ln(), (s.c_max as f64).ln());
                let c = rng.random_range(lo..=hi).exp().round().max(1.0) as usize;
                let noise = Normal::new(0.0, s.noise_sd)
                    .expect("sd validated")
                    .sample(&mut rng);
                let h = ((c as f64).powf(s.exponent) * 10f64.powf(noise))
                    .round()
                    .max(1.0) as usize;
                scaling_points.push((c, h));
                let both = (c as f64 / 2.0).round() as usize;
                let even = vec![1.0; lags as usize + 1];
                Some((
                    apportion(both, &even),
                    apportion(c - both, &even),
                    apportion(h, &even),
                ))
            }
        };
        for lag in 0..=lags {
            let p_cite = lerp(spec.p_cite_start, spec.p_cite_end, lag, lags);
            let p_indirect = lerp(spec.indirect_start, spec.indirect_end, lag, lags);
            let (n_both, n_cite_only, n_mention_only) = match &per_year {
                Some((b, c, m)) => (b[lag as usize], c[lag as usize], m[lag as usize]),
                None => {
                    let m = spec.mentions_per_year;
                    let both = split(&mut rng, spec.mode, m, p_cite);
                    (both, spec.cite_only_per_year, m - both)
                }
            };
            let n_indirect = split(&mut rng, spec.mode, n_mention_only, p_indirect);
            plan.push(YearPlan {
                lag,
                year: tp.truth.first_year + lag,
                n_both,
                n_cite_only,
                n_mention_only,
                n_indirect,
                p_cite,
                p_indirect,
            });
        }
        tp.truth.years = plan;
        let citing = tp.truth.explicit();
        let f = tp.truth.foundational.len();
        if citing < f {
            return Err(Error::Config(format!(
                "topic {}: {f} foundational papers but only {citing} citing followers",
                tp.truth.topic
            )));
        }
        let indirect: usize = tp.truth.years.iter().map(|y| y.n_indirect).sum();
        if indirect > 0 && citing == 0 {
            return Err(Error::Config(format!(
                "topic {}: indirect citations need at least one citing follower",
                tp.truth.topic
            )));
        }
    }
    if spec.background_papers == 0 {
        return Err(Error::Config(
            "background_papers must be positive".into(),
        ));
    }
    if spec.background_citations.max > spec.background_citing_papers {
        return Err(Error::Config(format!(
            "background_citations max {} exceeds background_citing_papers {}",
            spec.background_citations.max, spec.background_citing_papers
        )));
    }

    let mut b = Builder {
        spec,
        rng,
        bg_words,
        papers: Vec::new(),
        by_id: BTreeMap::new(),
        contexts: Vec::new(),
    };

    // Foundational papers and reviews.
    let mut title_papers = BTreeSet::new();
    for (t, tp) in topics.iter_mut().enumerate() {
        for i in 0..tp.truth.foundational.len() {
            let title = if titled.contains(&(t, i)) {
                title_papers.insert(tp.truth.foundational[i].clone());
                let w = b.bg_word().to_string();
                format!("On the {} of {w}", tp.truth.catchphrase_text[0])
            } else {
                b.filler(3)
            };
            tp.titles.push(title);
        }
        for i in 0..tp.truth.foundational.len() {
            let mut p = PaperRecord::new(tp.truth.foundational[i].clone(), tp.years[i]);
            p.title = tp.titles[i].clone();
            p.abstract_text = b.filler(spec.filler_words);
            p.authors = tp.authors[i].clone();
            p.venue = "Synthetic Letters".into();
            p.discipline = "physics".into();
            b.push(p);
        }
        let mut r = PaperRecord::new(tp.truth.review.clone(), tp.truth.first_year + 1);
        r.title = b.filler(3);
        r.is_book_or_review = true;
        b.push(r);
    }

    // Background cited papers and their citers.
    let mut background = Vec::with_capacity(spec.background_papers);
    let late = spec.first_year + spec.year_spread + spec.horizon_years;
    for i in 0..spec.background_citing_papers {
        let year = b.rng.random_range(spec.first_year..=late);
        let mut p = PaperRecord::new(format!("bg-c{i:04}"), year);
        p.title = b.filler(3);
        p.full_text = Some(b.filler(spec.filler_words));
        b.push(p);
    }
    for i in 0..spec.background_papers {
        let id = format!("bg-p{i:03}");
        let mut p = PaperRecord::new(id.clone(), spec.first_year - 5 + (i % 5) as i32);
        p.title = b.filler(3);
        b.push(p);
        let (lo, hi) = (
            (spec.background_citations.min as f64).ln(),
            (spec.background_citations.max as f64).ln(),
        );
        let n = b.rng.random_range(lo..=hi).exp().round() as usize;
        let n = n.clamp(spec.background_citations.min, spec.background_citations.max);
        let citers = index::sample(&mut b.rng, spec.background_citing_papers, n).into_vec();
        for c in citers {
            let text = b.noise_context();
            b.cite(&format!("bg-c{c:04}"), &id, text);
        }
        background.push((id, n));
    }

    // Followers.
    for tp in &topics {
        let t = tp.truth.topic;
        let n_phr = tp.truth.catchphrase_text.len();
        let citing_total = tp.truth.explicit();
        let mut targets: Vec<usize> = apportion(citing_total, &tp.truth.weights)
            .into_iter()
            .enumerate()
            .flat_map(|(i, n)| std::iter::repeat_n(i, n))
            .collect();
        targets.shuffle(&mut b.rng);
        let mut citing_ids: Vec<String> = Vec::with_capacity(citing_total);
        let mut k = 0;
        for y in &tp.truth.years {
            for (kind, n) in [("b", y.n_both), ("c", y.n_cite_only)] {
                for i in 0..n {
                    let id = format!("t{t:02}-y{:02}-{kind}{i:03}", y.lag);
                    let phrase = tp.truth.catchphrase_text[k % n_phr].clone();
                    let mut p = PaperRecord::new(id.clone(), y.year);
                    p.title = b.filler(3);
                    if kind == "b" {
                        p.full_text = Some(b.full_text(&phrase));
                    }
                    b.push(p);
                    let f = tp.truth.foundational[targets[k]].clone();
                    let text = b.catch_context(&phrase);
                    b.cite(&id, &f, text);
                    let bg = b.rng.random_range(0..spec.background_papers);
                    let text = b.noise_context();
                    b.cite(&id, &format!("bg-p{bg:03}"), text);
                    citing_ids.push(id);
                    k += 1;
                }
            }
        }
        // Intermediaries are the earliest citing followers.
        for y in &tp.truth.years {
            for i in 0..y.n_mention_only {
                let id = format!("t{t:02}-y{:02}-m{i:03}", y.lag);
                let phrase = tp.truth.catchphrase_text[i % n_phr].clone();
                let mut p = PaperRecord::new(id.clone(), y.year);
                p.title = b.filler(3);
                p.full_text = Some(b.full_text(&phrase));
                b.push(p);
                if i < y.n_indirect {
                    let via = citing_ids[i % citing_ids.len()].clone();
                    let text = b.noise_context();
                    b.cite(&id, &via, text);
                }
                if b.rng.random_bool(spec.alternative_prob) {
                    let text = b.noise_context();
                    b.cite(&id, &tp.truth.review, text);
                }
                let bg = b.rng.random_range(0..spec.background_papers);
                let text = b.noise_context();
                b.cite(&id, &format!("bg-p{bg:03}"), text);
            }
        }
        // Leaked catchphrase contexts towards background papers.
        for (c, phrase) in tp.truth.catchphrase_text.iter().enumerate() {
            for j in 0..spec.leak_contexts_per_catchphrase {
                let citer = &citing_ids[(c * spec.leak_contexts_per_catchphrase + j) % citing_ids.len()];
                let bg = b.rng.random_range(0..spec.background_papers);
                let text = b.catch_context(phrase);
                b.cite(&citer.clone(), &format!("bg-p{bg:03}"), text);
            }
        }
    }

    let mut hidden_attribution = BTreeMap::new();
    for tp in &topics {
        let h = tp.truth.hidden() as f64;
        for (f, w) in tp.truth.foundational.iter().zip(&tp.truth.weights) {
            *hidden_attribution.entry(f.clone()).or_insert(0.0) += h * w;
        }
    }
    let truth = GroundTruth {
        mode: spec.mode,
        seed: spec.seed,
        topics: topics.into_iter().map(|t| t.truth).collect(),
        hidden_attribution,
        background_papers: background,
        title_catchphrase_papers: title_papers,
        scaling_exponent: spec.scaling.as_ref().map(|s| s.exponent),
    };
    let out = Synthetic {
        papers: b.papers,
        contexts: b.contexts,
        truth,
    };
    self_check(&out)?;
    Ok(out)
}

/// Brute-force re-classification of every paper against every topic.
pub fn self_check(s: &Synthetic) -> Result<()> {
    let norm = default_normalizer();
    let tokens: Vec<Vec<String>> = s
        .papers
        .iter()
        .map(|p| {
            p.full_text
                .as_deref()
                .map(|t| norm.tokenize_and_stem(t))
                .unwrap_or_default()
        })
        .collect();
    let refs: BTreeMap<&str, &[String]> = s
        .papers
        .iter()
        .map(|p| (p.paper_id.as_str(), p.references.as_slice()))
        .collect();
    let fail = |msg: String| Err(Error::Config(format!("generated corpus disagrees with plan: {msg}")));
    for t in &s.truth.topics {
        let found: BTreeSet<&str> = t.foundational.iter().map(String::as_str).collect();
        let phrases: Vec<Vec<&str>> = t.catchphrases.iter().map(|c| c.stems().collect()).collect();
        let mut years: BTreeMap<i32, [usize; 4]> = BTreeMap::new();
        for (p, toks) in s.papers.iter().zip(&tokens) {
            if found.contains(p.paper_id.as_str()) {
                continue;
            }
            let cites = p.references.iter().any(|r| found.contains(r.as_str()));
            let mentions = phrases.iter().any(|ph| {
                toks.windows(ph.len())
                    .any(|w| w.iter().zip(ph).all(|(a, b)| a == b))
            });
            let e = years.entry(p.year).or_default();
            match (cites, mentions) {
                (true, true) => e[0] += 1,
                (true, false) => e[1] += 1,
                (false, true) => {
                    e[2] += 1;
                    let indirect = p.references.iter().any(|r| {
                        refs.get(r.as_str())
                            .is_some_and(|rr| rr.iter().any(|x| found.contains(x.as_str())))
                    });
                    if indirect {
                        e[3] += 1;
                    }
                }
                (false, false) => {}
            }
        }
        for y in &t.years {
            let got = years.remove(&y.year).unwrap_or_default();
            let want = [y.n_both, y.n_cite_only, y.n_mention_only, y.n_indirect];
            if got != want {
                return fail(format!(
                    "topic {} year {}: found {got:?}, planned {want:?}",
                    t.topic, y.year
                ));
            }
        }
        if let Some((year, got)) = years.into_iter().find(|(_, c)| c.iter().any(|&n| n > 0)) {
            return fail(format!("topic {} year {year}: unplanned followers {got:?}", t.topic));
        }
    }
    Ok(())
}
