//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use oblit::corpus::{
    default_normalizer, CitationContext, Corpus, Ngram, OccurrenceSet, PaperRecord,
};
use oblit::detector::{Catchphrase, FoundationalPaper, TopicProfile};
use oblit::stats::Estimate;
use oblit::synthgen::GroundTruth;
use oblit::topicmodel::TopicModel;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Words that survive normalization unchanged.
pub const WORDS: &[&str] = &[
    "quantum", "discord", "spin", "glass", "boson", "lattice", "gauge", "field", "graph",
    "kernel", "vortex", "plasma", "photon", "neutron", "crystal", "magnet", "string", "brane",
    "soliton", "quark",
];

fn est(p: f64) -> Estimate {
    Estimate {
        estimate: p,
        halfwidth: 0.0,
    }
}

/// Profile with the given catchphrases and foundational papers; years come
/// from the corpus.
pub fn profile(topic: usize, catch: &[Ngram], found: &[String], corpus: &Corpus) -> TopicProfile {
    let first = found
        .iter()
        .map(|f| corpus.get(f).expect("foundational paper in corpus").year)
        .min()
        .expect("at least one foundational paper");
    TopicProfile {
        topic_id: topic,
        catchphrases: catch
            .iter()
            .map(|g| Catchphrase {
                ngram: g.clone(),
                p: est(1.0),
            })
            .collect(),
        foundational_papers: found
            .iter()
            .map(|f| FoundationalPaper {
                paper_id: f.clone(),
                p: est(1.0 / found.len() as f64),
            })
            .collect(),
        first_foundational_year: first,
    }
}

/// Profiles built straight from the planted truth.
pub fn truth_profiles(truth: &GroundTruth, corpus: &Corpus) -> Vec<TopicProfile> {
    truth
        .topics
        .iter()
        .map(|t| {
            let mut p = profile(t.topic, &t.catchphrases, &t.foundational, corpus);
            for (f, w) in p.foundational_papers.iter_mut().zip(&t.weights) {
                f.p = est(*w);
            }
            p
        })
        .collect()
}

/// Naive per-paper classification: `(paper, year, cites, mentions)` for
/// every follower of the profile.
pub fn brute_classify(corpus: &Corpus, p: &TopicProfile) -> BTreeSet<(String, i32, bool, bool)> {
    let found: HashSet<&str> = p
        .foundational_papers
        .iter()
        .map(|f| f.paper_id.as_str())
        .collect();
    let phrases: Vec<Vec<String>> = p
        .catchphrases
        .iter()
        .map(|c| c.ngram.stems().map(str::to_string).collect())
        .collect();
    let mut out = BTreeSet::new();
    for paper in corpus.papers() {
        if found.contains(paper.paper_id.as_str()) {
            continue;
        }
        let cites = paper.references.iter().any(|r| found.contains(r.as_str()));
        let toks = paper
            .full_text
            .as_deref()
            .map(|t| default_normalizer().tokenize_and_stem(t))
            .unwrap_or_default();
        let mut mentions = false;
        for ph in &phrases {
            for start in 0..toks.len() {
                if start + ph.len() <= toks.len() && toks[start..start + ph.len()] == ph[..] {
                    mentions = true;
                }
            }
        }
        if cites || mentions {
            out.insert((paper.paper_id.clone(), paper.year, cites, mentions));
        }
    }
    out
}

/// A random corpus of at most `max_papers` papers with references, full
/// texts drawn from [`WORDS`], and two random topic profiles.
pub struct Fixture {
    pub corpus: Corpus,
    pub contexts: Vec<CitationContext>,
    pub profiles: Vec<TopicProfile>,
}

pub fn random_fixture(r: &mut ChaCha8Rng, max_papers: usize) -> Fixture {
    let n = r.random_range(8..=max_papers);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:03}")).collect();
    let mut papers = Vec::with_capacity(n);
    for id in &ids {
        let mut p = PaperRecord::new(id.clone(), r.random_range(1990..=2010));
        let k = r.random_range(0..=4.min(n - 1));
        let mut refs: Vec<String> = ids
            .choose_multiple(r, k + 1)
            .filter(|x| *x != id)
            .take(k)
            .cloned()
            .collect();
        refs.sort();
        p.references = refs;
        if r.random_bool(0.7) {
            let len = r.random_range(0..12);
            let words: Vec<&str> = (0..len).map(|_| *WORDS.choose(r).unwrap()).collect();
            p.full_text = Some(words.join(" "));
        }
        papers.push(p);
    }
    let mut contexts = Vec::new();
    for p in &papers {
        for c in &p.references {
            let words: Vec<&str> = (0..r.random_range(1..6))
                .map(|_| *WORDS.choose(r).unwrap())
                .collect();
            contexts.push(CitationContext {
                citing_id: p.paper_id.clone(),
                cited_id: c.clone(),
                text: words.join(" "),
            });
        }
    }
    let corpus = Corpus::new(papers).unwrap();
    let mut profiles = Vec::new();
    for t in 0..2 {
        let nf = r.random_range(1..=3);
        let found: Vec<String> = ids.choose_multiple(r, nf).cloned().collect();
        let nc = r.random_range(1..=2);
        let catch: Vec<Ngram> = (0..nc)
            .map(|_| {
                let len = r.random_range(1..=2);
                let ws: Vec<&str> = (0..len).map(|_| *WORDS.choose(r).unwrap()).collect();
                Ngram::from_stems(&ws)
            })
            .collect();
        profiles.push(profile(t, &catch, &found, &corpus));
    }
    Fixture {
        corpus,
        contexts,
        profiles,
    }
}

/// Shortest path length from `s` to any target by enumerating every simple
/// path of at most `max_depth` edges.
pub fn exhaustive_shortest(
    adj: &[Vec<usize>],
    s: usize,
    targets: &HashSet<usize>,
    max_depth: usize,
) -> Option<usize> {
    fn go(
        adj: &[Vec<usize>],
        v: usize,
        depth: usize,
        max_depth: usize,
        targets: &HashSet<usize>,
        on_path: &mut Vec<bool>,
        best: &mut Option<usize>,
    ) {
        if depth > 0 && targets.contains(&v) {
            *best = Some(best.map_or(depth, |b| b.min(depth)));
        }
        if depth == max_depth {
            return;
        }
        for &u in &adj[v] {
            if !on_path[u] {
                on_path[u] = true;
                go(adj, u, depth + 1, max_depth, targets, on_path, best);
                on_path[u] = false;
            }
        }
    }
    let mut on_path = vec![false; adj.len()];
    on_path[s] = true;
    let mut best = None;
    go(adj, s, 0, max_depth, targets, &mut on_path, &mut best);
    best
}

/// Two word clusters over disjoint documents; at most `max_tuples` tuples.
/// Each cluster holds every word-document pair once plus random extras, so
/// the clusters are connected blocks.
pub fn two_cluster_pairs(r: &mut ChaCha8Rng, max_tuples: usize) -> Vec<(String, String)> {
    let extra = max_tuples.saturating_sub(8) / 2;
    let mut pairs = Vec::new();
    for (words, docs) in [(["a", "b"], ["d1", "d2"]), (["c", "e"], ["d3", "d4"])] {
        for w in words {
            for d in docs {
                pairs.push((w.to_string(), d.to_string()));
            }
        }
        for _ in 0..r.random_range(0..=extra) {
            let w = words[r.random_range(0..2)];
            let d = docs[r.random_range(0..2)];
            pairs.push((w.to_string(), d.to_string()));
        }
    }
    pairs.shuffle(r);
    pairs
}

/// Exact collapsed posterior `P(z | w)` by enumerating all `K^N`
/// assignments. Label symmetry is broken by relabelling every assignment in
/// order of first appearance along the tuple list, so topic 0 is always the
/// topic of the first tuple.
pub fn exact_topic_given_word(
    data: &OccurrenceSet,
    k: usize,
    alpha: f64,
    beta: f64,
) -> Vec<Vec<f64>> {
    use statrs::function::gamma::ln_gamma;
    let n = data.len();
    let v = data.vocabulary.len();
    let d = data.documents.len();
    assert!(k.pow(n as u32) <= 1 << 20, "enumeration too large");
    let mut logp = Vec::new();
    let mut fractions = Vec::new();
    let mut z = vec![0usize; n];
    loop {
        // canonical labels
        let mut map = vec![usize::MAX; k];
        let mut next = 0;
        let zc: Vec<usize> = z
            .iter()
            .map(|&t| {
                if map[t] == usize::MAX {
                    map[t] = next;
                    next += 1;
                }
                map[t]
            })
            .collect();
        let mut ndk = vec![0usize; d * k];
        let mut nkw = vec![0usize; k * v];
        let mut nk = vec![0usize; k];
        let mut nd = vec![0usize; d];
        for (i, &(w, doc)) in data.tuples.iter().enumerate() {
            ndk[doc as usize * k + zc[i]] += 1;
            nkw[zc[i] * v + w as usize] += 1;
            nk[zc[i]] += 1;
            nd[doc as usize] += 1;
        }
        let mut lp = 0.0;
        for di in 0..d {
            for t in 0..k {
                lp += ln_gamma(ndk[di * k + t] as f64 + alpha);
            }
            lp -= ln_gamma(nd[di] as f64 + k as f64 * alpha);
        }
        for t in 0..k {
            for w in 0..v {
                lp += ln_gamma(nkw[t * v + w] as f64 + beta);
            }
            lp -= ln_gamma(nk[t] as f64 + v as f64 * beta);
        }
        logp.push(lp);
        let nw: Vec<usize> = (0..v).map(|w| (0..k).map(|t| nkw[t * v + w]).sum()).collect();
        fractions.push(
            (0..v)
                .map(|w| {
                    (0..k)
                        .map(|t| nkw[t * v + w] as f64 / nw[w] as f64)
                        .collect::<Vec<f64>>()
                })
                .collect::<Vec<_>>(),
        );
        let mut i = 0;
        loop {
            if i == n {
                let max = logp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let ws: Vec<f64> = logp.iter().map(|l| (l - max).exp()).collect();
                let total: f64 = ws.iter().sum();
                let mut out = vec![vec![0.0; k]; v];
                for (wt, fr) in ws.iter().zip(&fractions) {
                    for w in 0..v {
                        for t in 0..k {
                            out[w][t] += wt / total * fr[w][t];
                        }
                    }
                }
                return out;
            }
            z[i] += 1;
            if z[i] < k {
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
}

/// Partition of word indices: words joined when `same(a, b)` holds.
pub fn partition(v: usize, same: impl Fn(usize, usize) -> bool) -> BTreeSet<BTreeSet<usize>> {
    let mut label: Vec<usize> = (0..v).collect();
    for a in 0..v {
        for b in a + 1..v {
            if same(a, b) {
                let (from, to) = (label[b], label[a]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (w, l) in label.into_iter().enumerate() {
        groups.entry(l).or_default().insert(w);
    }
    groups.into_values().collect()
}

/// Argmax topic per word from the pooled estimates.
pub fn argmax_topics(model: &TopicModel) -> Vec<usize> {
    (0..model.vocabulary().len())
        .map(|w| {
            (0..model.num_topics())
                .map(|z| (z, model.topic_given_word_ix(w, z).estimate))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .unwrap()
                .0
        })
        .collect()
}

/// Follower tables for a synthetic corpus classified with the planted
/// profiles.
pub fn truth_tables(
    s: &oblit::synthgen::Synthetic,
) -> (Corpus, Vec<TopicProfile>, Vec<oblit::tabulator::FollowerTable>) {
    let corpus = Corpus::new(s.papers.clone()).unwrap();
    let profiles = truth_profiles(&s.truth, &corpus);
    let index = oblit::corpus::build_mention_index(
        &corpus,
        profiles.iter().flat_map(|p| p.catchphrase_ngrams()),
        default_normalizer(),
    );
    let tables = oblit::tabulator::tabulate(&profiles, &corpus, &index).unwrap();
    (corpus, profiles, tables)
}
