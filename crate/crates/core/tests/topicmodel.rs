mod common;

use common::*;
use oblit::corpus::{Ngram, OccurrenceSet};
use oblit::topicmodel::{chain_distance, gibbs_train, train, LdaConfig, Sampler, TopicModel};
use proptest::prelude::*;

fn cfg(k: usize, seed: u64) -> LdaConfig {
    LdaConfig {
        burn_in_sweeps: 100,
        retained_samples: 20,
        sample_lag_sweeps: 5,
        seed,
        ..LdaConfig::with_topics(k)
    }
}

#[test]
fn single_tuple_single_topic() {
    let data = OccurrenceSet::from_pairs([("w", "d")]);
    let m = gibbs_train(&data, &cfg(1, 3)).unwrap();
    let e = m.p_topic_given_ngram(&Ngram::from("w"), 0).unwrap();
    assert_eq!((e.estimate, e.halfwidth), (1.0, 0.0));
}

#[test]
fn disjoint_subcorpora_separate() {
    let mut pairs = Vec::new();
    for i in 0..50 {
        pairs.push((["a", "b"][i % 2], ["d1", "d2"][(i / 2) % 2]));
        pairs.push((["c", "e"][i % 2], ["d3", "d4"][(i / 2) % 2]));
    }
    let data = OccurrenceSet::from_pairs(pairs);
    for seed in 0..5 {
        let c = LdaConfig {
            alpha: 0.1,
            ..cfg(2, seed)
        };
        let m = gibbs_train(&data, &c).unwrap();
        let arg = argmax_topics(&m);
        for w in 0..4 {
            let best = m.topic_given_word_ix(w, arg[w]).estimate;
            assert!(best >= 0.95, "seed {seed} word {w}: {best}");
        }
        // vocabulary is sorted: a, b, c, e
        assert_eq!(arg[0], arg[1]);
        assert_eq!(arg[2], arg[3]);
        assert_ne!(arg[0], arg[2]);
    }
}

#[test]
fn symmetric_corpus_is_balanced() {
    // Every word with every document: relabelling topics is an automorphism
    // and the pooled chain visits both labellings.
    let mut pairs = Vec::new();
    for w in ["a", "b"] {
        for d in ["d1", "d2"] {
            pairs.push((w, d));
        }
    }
    let data = OccurrenceSet::from_pairs(pairs);
    let c = LdaConfig {
        burn_in_sweeps: 100,
        retained_samples: 2000,
        sample_lag_sweeps: 3,
        seed: 11,
        ..LdaConfig::with_topics(2)
    };
    let m = gibbs_train(&data, &c).unwrap();
    for w in ["a", "b"] {
        let p = m.p_topic_given_ngram(&Ngram::from(w), 0).unwrap().estimate;
        assert!((p - 0.5).abs() <= 0.1, "{w}: {p}");
    }
}

#[test]
fn same_seed_same_model() {
    let data = OccurrenceSet::from_pairs(two_cluster_pairs(&mut rng(4), 12));
    let a = gibbs_train(&data, &cfg(2, 9)).unwrap();
    let b = gibbs_train(&data, &cfg(2, 9)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn save_load_round_trip() {
    let data = OccurrenceSet::from_pairs(two_cluster_pairs(&mut rng(5), 12));
    let m = gibbs_train(&data, &cfg(3, 1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("model.json");
    m.save(&p).unwrap();
    assert_eq!(TopicModel::load(&p).unwrap(), m);
}

#[test]
fn chains_agree_on_separated_data() {
    let mut pairs = Vec::new();
    for i in 0..40 {
        pairs.push((["a", "b"][i % 2], ["d1", "d2"][(i / 2) % 2]));
        pairs.push((["c", "e"][i % 2], ["d3", "d4"][(i / 2) % 2]));
    }
    let data = OccurrenceSet::from_pairs(pairs);
    let c = LdaConfig {
        chains: 3,
        alpha: 0.1,
        ..cfg(2, 2)
    };
    let out = train(&data, &c).unwrap();
    let d = out.max_tv_distance.unwrap();
    assert!(d < 0.05, "{d}");
    assert_eq!(chain_distance(&out.model, &out.model), 0.0);
}

#[test]
fn rejects_more_topics_than_tuples() {
    let data = OccurrenceSet::from_pairs([("w", "d"), ("v", "d")]);
    assert!(train(&data, &cfg(3, 0)).is_err());
    assert!(train(&OccurrenceSet::default(), &cfg(1, 0)).is_err());
}

fn data_strategy() -> impl Strategy<Value = (OccurrenceSet, usize, u64)> {
    (
        prop::collection::vec((0u8..8, 0u8..6), 1..80),
        1usize..5,
        any::<u64>(),
    )
        .prop_filter_map("at least K tuples", |(raw, k, seed)| {
            (raw.len() >= k).then(|| {
                let pairs: Vec<(String, String)> = raw
                    .into_iter()
                    .map(|(w, d)| (format!("w{w}"), format!("d{d}")))
                    .collect();
                (OccurrenceSet::from_pairs(pairs), k, seed)
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampler_counts_conserved((data, k, seed) in data_strategy()) {
        let c = cfg(k, seed);
        let mut s = Sampler::new(&data, &c, seed).unwrap();
        for _ in 0..3 {
            s.sweep();
            prop_assert!(s.state().check(&data).is_ok());
        }
        let st = s.state();
        for d in 0..data.documents.len() {
            let n: u32 = (0..k).map(|z| st.n_doc_topic(d, z)).sum();
            let want = data.tuples.iter().filter(|t| t.1 as usize == d).count() as u32;
            prop_assert_eq!(n, want);
        }
        for w in 0..data.vocabulary.len() {
            let n: u32 = (0..k).map(|z| st.n_word_topic(w, z)).sum();
            let want = data.tuples.iter().filter(|t| t.0 as usize == w).count() as u32;
            prop_assert_eq!(n, want);
        }
    }

    #[test]
    fn estimates_normalize((data, k, seed) in data_strategy()) {
        let c = LdaConfig { burn_in_sweeps: 5, retained_samples: 3, sample_lag_sweeps: 1, ..cfg(k, seed) };
        let m = gibbs_train(&data, &c).unwrap();
        let total: f64 = (0..k).map(|z| m.topic_count(z)).sum();
        prop_assert!((total - data.len() as f64).abs() < 1e-9);
        for w in 0..m.vocabulary().len() {
            let s: f64 = (0..k).map(|z| m.topic_given_word_ix(w, z).estimate).sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
        }
        for z in 0..k {
            if m.topic_count(z) > 0.0 {
                let s: f64 = (0..m.documents().len()).map(|d| m.doc_given_topic_ix(d, z).estimate).sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
        }
        let back = TopicModel::from_json(&m.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}
