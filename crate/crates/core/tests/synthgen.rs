mod common;

use std::collections::BTreeSet;

use common::*;
use oblit::corpus::ingest;
use oblit::synthgen::{
    generate, self_check, GeneratorSpec, Mode, Scaling, Span, CORPUS_FILE, TRUTH_FILE,
};
use proptest::prelude::*;

fn tiny() -> GeneratorSpec {
    GeneratorSpec {
        num_topics: 1,
        catchphrases_per_topic: 1,
        foundational: Span::new(1, 1),
        horizon_years: 0,
        cite_only_per_year: 0,
        background_papers: 5,
        background_citing_papers: 10,
        background_citations: Span::new(1, 5),
        ..GeneratorSpec::default()
    }
}

#[test]
fn degenerate_spec_has_only_explicit_followers() {
    let spec = GeneratorSpec {
        mentions_per_year: 10,
        p_cite_start: 1.0,
        p_cite_end: 1.0,
        ..tiny()
    };
    let s = generate(&spec).unwrap();
    let t = &s.truth.topics[0];
    assert_eq!(t.foundational.len(), 1);
    assert_eq!(t.catchphrases.len(), 1);
    let (_, _, tables) = truth_tables(&s);
    let c = tables[0].totals();
    assert_eq!(c.n_both, 10);
    assert_eq!(c.n_cite_only, 0);
    assert_eq!(c.n_mention_only, 0);
    assert_eq!(c.hidden(), 0);
}

#[test]
fn exact_mode_realizes_half_of_two_hundred() {
    let spec = GeneratorSpec {
        mentions_per_year: 200,
        p_cite_start: 0.5,
        p_cite_end: 0.5,
        ..tiny()
    };
    let s = generate(&spec).unwrap();
    let (_, _, tables) = truth_tables(&s);
    let c = tables[0].totals();
    assert_eq!((c.n_both, c.n_mention_only), (100, 100));
    assert_eq!(s.truth.topics[0].years[0].n_both, 100);
}

#[test]
fn tabulation_reproduces_planted_year_plans() {
    for mode in [Mode::Exact, Mode::Sampled] {
        let spec = GeneratorSpec {
            mode,
            num_topics: 6,
            ..GeneratorSpec::default()
        };
        let s = generate(&spec).unwrap();
        let (_, _, tables) = truth_tables(&s);
        for (t, table) in s.truth.topics.iter().zip(&tables) {
            for y in &t.years {
                let c = table.counts_at_lag(y.lag);
                assert_eq!(
                    (c.n_both, c.n_cite_only, c.n_mention_only),
                    (y.n_both, y.n_cite_only, y.n_mention_only),
                    "{mode} topic {} lag {}",
                    t.topic,
                    y.lag
                );
            }
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let spec = GeneratorSpec {
        mode: Mode::Sampled,
        ..GeneratorSpec::default()
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    generate(&spec).unwrap().write_to(a.path()).unwrap();
    generate(&spec).unwrap().write_to(b.path()).unwrap();
    for f in [CORPUS_FILE, TRUTH_FILE] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs");
    }
    let other = GeneratorSpec { seed: 8, ..spec };
    let c = tempfile::tempdir().unwrap();
    generate(&other).unwrap().write_to(c.path()).unwrap();
    assert_ne!(
        std::fs::read(a.path().join(CORPUS_FILE)).unwrap(),
        std::fs::read(c.path().join(CORPUS_FILE)).unwrap()
    );
}

#[test]
fn written_corpus_reingests() {
    let s = generate(&GeneratorSpec::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    s.write_to(dir.path()).unwrap();
    let data = ingest(&dir.path().join(CORPUS_FILE)).unwrap();
    let (corpus, contexts) = data.into_corpus().unwrap();
    assert_eq!(corpus.len(), s.papers.len());
    assert_eq!(contexts.len(), s.contexts.len());

    let text = std::fs::read_to_string(dir.path().join(TRUTH_FILE)).unwrap();
    let mut kinds = BTreeSet::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        kinds.insert(v["kind"].as_str().unwrap().to_string());
    }
    for k in ["meta", "topic", "year", "attribution", "background", "title"] {
        assert!(kinds.contains(k), "missing {k} records");
    }
}

#[test]
fn infeasible_specs_are_rejected() {
    let bad = [
        GeneratorSpec {
            num_topics: 0,
            ..GeneratorSpec::default()
        },
        GeneratorSpec {
            p_cite_start: 1.5,
            ..GeneratorSpec::default()
        },
        GeneratorSpec {
            foundational: Span::new(3, 1),
            ..GeneratorSpec::default()
        },
        GeneratorSpec {
            foundational_weights: vec![0.5, 0.5],
            ..GeneratorSpec::default()
        },
        GeneratorSpec {
            background_citations: Span::new(5, 500),
            ..GeneratorSpec::default()
        },
        GeneratorSpec {
            mentions_per_year: 1,
            cite_only_per_year: 0,
            p_cite_start: 0.0,
            p_cite_end: 0.0,
            horizon_years: 0,
            foundational: Span::new(3, 3),
            ..GeneratorSpec::default()
        },
    ];
    for spec in bad {
        assert!(generate(&spec).is_err(), "{spec:?}");
    }
}

#[test]
fn spec_parses_key_value_text() {
    let spec = GeneratorSpec::parse(
        "# comment\nnum_topics = 4\nfoundational = 2..2\nfoundational_weights = 0.7, 0.3\n\
         mode = sampled\nscaling.exponent = 0.5\nseed = 11\n",
    )
    .unwrap();
    assert_eq!(spec.num_topics, 4);
    assert_eq!(spec.foundational, Span::new(2, 2));
    assert_eq!(spec.foundational_weights, vec![0.7, 0.3]);
    assert_eq!(spec.mode, Mode::Sampled);
    assert_eq!(spec.seed, 11);
    let sc: Scaling = spec.scaling.unwrap();
    assert_eq!(sc.exponent, 0.5);
    assert_eq!(sc.c_min, 20);

    let err = GeneratorSpec::parse("num_topics = 2\nbogus = 1\n").unwrap_err();
    assert!(err.to_string().contains("bogus"), "{err}");
    assert!(GeneratorSpec::parse("mode = fuzzy\n").is_err());
}

#[test]
fn scaling_mode_plants_power_law_totals() {
    let spec = GeneratorSpec {
        num_topics: 30,
        scaling: Some(Scaling {
            exponent: 0.763,
            noise_sd: 0.0,
            c_min: 20,
            c_max: 400,
        }),
        ..GeneratorSpec::default()
    };
    let s = generate(&spec).unwrap();
    assert_eq!(s.truth.scaling_exponent, Some(0.763));
    for t in &s.truth.topics {
        let c = t.explicit() as f64;
        let h = t.hidden() as f64;
        assert!((h - c.powf(0.763)).abs() <= 0.5 + 1e-9, "c {c} h {h}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_corpora_pass_self_check(
        seed in any::<u64>(),
        topics in 1usize..5,
        sampled in any::<bool>(),
        p0 in 0.0f64..=1.0,
        p1 in 0.0f64..=1.0,
    ) {
        let spec = GeneratorSpec {
            num_topics: topics,
            mode: if sampled { Mode::Sampled } else { Mode::Exact },
            p_cite_start: p0.max(0.5),
            p_cite_end: p1.max(0.5),
            horizon_years: 5,
            seed,
            ..GeneratorSpec::default()
        };
        let s = generate(&spec).unwrap();
        prop_assert!(self_check(&s).is_ok());
        let ids: BTreeSet<&str> = s.papers.iter().map(|p| p.paper_id.as_str()).collect();
        prop_assert_eq!(ids.len(), s.papers.len());
        for p in &s.papers {
            for r in &p.references {
                prop_assert!(ids.contains(r.as_str()));
            }
        }
        for c in &s.contexts {
            prop_assert!(ids.contains(c.citing_id.as_str()) && ids.contains(c.cited_id.as_str()));
        }
    }
}
