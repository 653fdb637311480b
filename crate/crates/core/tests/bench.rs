use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use bazi_core::bench::*;
use bazi_core::chart::Gender;
use bazi_core::llm::*;
use proptest::prelude::*;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/sample.json");

fn fixture() -> Dataset {
    load_dataset(FIXTURE).unwrap().0
}

fn mock(kind: ProviderKind) -> Client {
    Client::new(ProviderConfig::mock(kind)).unwrap()
}

fn run(
    ds: &Dataset,
    setting: EvalSetting,
    client: &Client,
    shuffle: Option<&ShufflePlan>,
) -> CellRun {
    let cfg = EvalConfig::new(setting, "mock-model");
    let providers = Providers {
        reasoning: client,
        knowledge: Some(client),
        cache: None,
    };
    evaluate(&ds.persons, &cfg, providers, shuffle).unwrap()
}

#[test]
fn fixture_counts_are_exact() {
    let (_, report) = load_dataset(FIXTURE).unwrap();
    assert!(report.is_valid(), "{:?}", report.errors);
    assert!(report.warnings.is_empty());
    let s = &report.stats;
    assert_eq!(
        (s.persons, s.countries, s.questions, s.male, s.female),
        (2, 2, 5, 1, 1)
    );
    assert_eq!(s.avg_questions_per_person, 2.5);
    assert!(s.per_dimension.values().all(|&n| n == 1));
    assert_eq!(s.per_dimension.len(), 5);
}

#[test]
fn schema_errors_carry_record_paths() {
    let text = std::fs::read_to_string(FIXTURE).unwrap().replacen(
        "\"gold_index\": 1",
        "\"gold_index\": \"B\"",
        1,
    );
    match parse_dataset(&text) {
        Err(BenchError::Parse { path, .. }) => {
            assert_eq!(path, "persons[0].questions[0].gold_index")
        }
        other => panic!("{other:?}"),
    }
    let text = std::fs::read_to_string(FIXTURE)
        .unwrap()
        .replacen("\"career\"", "\"fame\"", 1);
    assert!(
        matches!(parse_dataset(&text), Err(BenchError::Parse { path, .. }) if path.ends_with("dimension"))
    );
}

#[test]
fn semantic_errors_are_itemized() {
    let mut ds = fixture();
    ds.persons[1].questions.clear();
    ds.persons[0].questions[0].gold_index = 4;
    ds.persons[0].person_id = "sample-002".into();
    let r = validate(&ds);
    let paths: Vec<_> = r.errors.iter().map(|e| e.path.as_str()).collect();
    assert_eq!(
        paths,
        [
            "persons[0].questions[0].gold_index",
            "persons[1].person_id",
            "persons[1].questions"
        ]
    );
    assert!(matches!(
        evaluate(
            &ds.persons,
            &EvalConfig::new(EvalSetting::VanillaBaZi, "m"),
            Providers {
                reasoning: &mock(ProviderKind::MockGold),
                knowledge: None,
                cache: None
            },
            None
        ),
        Err(BenchError::InvalidDataset(_))
    ));
}

#[test]
fn proper_names_in_questions_warn() {
    let mut ds = fixture();
    ds.persons[1].questions[0].text = "Did Sample Subject One ever fall ill?".into();
    let r = validate(&ds);
    assert!(r.is_valid());
    assert_eq!(r.warnings.len(), 1);
    assert!(r.warnings[0].message.contains("persons[0]"));
}

#[test]
fn synthetic_dataset_has_published_shape() {
    let ds = synthetic_dataset(1);
    let r = validate(&ds);
    assert!(r.is_valid() && r.warnings.is_empty());
    let s = r.stats;
    assert_eq!(
        (s.persons, s.countries, s.questions, s.male, s.female),
        (50, 29, 488, 37, 13)
    );
    assert_eq!((s.avg_questions_per_person * 100.0).round() / 100.0, 9.76);
    assert_eq!(synthetic_dataset(1), ds);
    assert_ne!(synthetic_dataset(2), ds);
}

#[test]
fn two_records_swap() {
    let ds = fixture();
    let plan = make_shuffle(&ds.persons, 99).unwrap();
    assert_eq!(plan.permutation["sample-001"], "sample-002");
    assert_eq!(plan.permutation["sample-002"], "sample-001");
    let swapped = plan.apply(&ds.persons).unwrap();
    assert_eq!(swapped[0].birth, ds.persons[1].birth);
    assert_eq!(swapped[0].place, ds.persons[1].place);
    assert_eq!(swapped[0].gender, Gender::Female);
    assert_eq!(swapped[0].questions, ds.persons[0].questions);
}

#[test]
fn date_only_scope_keeps_time_and_place() {
    let ds = fixture();
    let mut plan = make_shuffle(&ds.persons, 3).unwrap();
    plan.scope = ShuffleScope::DateOnly;
    let swapped = plan.apply(&ds.persons).unwrap();
    assert_eq!(swapped[0].birth.iso_local, "1985-03-02T23:15");
    assert_eq!(swapped[0].birth.utc_offset_minutes, 480);
    assert_eq!(swapped[0].place, ds.persons[0].place);
}

#[test]
fn derangement_needs_two() {
    let ds = fixture();
    assert_eq!(
        make_shuffle(&ds.persons[..1], 0),
        Err(BenchError::NoDerangement(1))
    );
    assert_eq!(make_shuffle(&[], 0), Err(BenchError::NoDerangement(0)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shuffles_are_seeded_derangements(n in 2usize..60, seed in any::<u64>()) {
        let persons: Vec<_> = synthetic_dataset(0).persons.into_iter().cycle().take(n).enumerate()
            .map(|(i, mut p)| { p.person_id = format!("p{i}"); p }).collect();
        let plan = make_shuffle(&persons, seed).unwrap();
        prop_assert_eq!(plan.fixed_points(), 0);
        prop_assert!(plan.is_bijective());
        prop_assert_eq!(plan.permutation.len(), n);
        prop_assert_eq!(make_shuffle(&persons, seed).unwrap(), plan);
    }
}

#[test]
fn gold_mock_scores_100_in_every_setting_shuffled_or_not() {
    let ds = fixture();
    let gold = mock(ProviderKind::MockGold);
    let plan = make_shuffle(&ds.persons, 5).unwrap();
    for setting in EvalSetting::ALL {
        for shuffle in [None, Some(&plan)] {
            let r = run(&ds, setting, &gold, shuffle);
            assert_eq!(r.cell.accuracy, 100.0, "{setting} {shuffle:?}");
            assert_eq!(r.cell.n_questions, 5);
            assert_eq!(r.cell.shuffled, shuffle.is_some());
        }
    }
}

#[test]
fn chart_echo_outputs_change_for_every_deranged_subject() {
    let ds = synthetic_dataset(11);
    let echo = mock(ProviderKind::MockChartEcho);
    let plan = make_shuffle(&ds.persons, 11).unwrap();
    for setting in EvalSetting::ALL {
        let plain = run(&ds, setting, &echo, None);
        let shuffled = run(&ds, setting, &echo, Some(&plan));
        assert_eq!(plain.results.len(), shuffled.results.len());
        for (a, b) in plain.results.iter().zip(&shuffled.results) {
            assert_eq!(
                (&a.person_id, &a.question_id),
                (&b.person_id, &b.question_id)
            );
            assert_ne!(
                a.response_hash, b.response_hash,
                "{} {}",
                a.person_id, a.question_id
            );
        }
    }
}

#[test]
fn fixed_mock_scores_share_of_gold_a() {
    let ds = synthetic_dataset(4);
    let r = run(
        &ds,
        EvalSetting::VanillaBaZi,
        &mock(ProviderKind::MockFixed { letter: 'A' }),
        None,
    );
    let gold_a = ds
        .persons
        .iter()
        .flat_map(|p| &p.questions)
        .filter(|q| q.gold_index == 0)
        .count();
    assert_eq!(r.cell.correct, gold_a);
    assert_eq!(r.cell.extraction_failures, 0);
    assert_eq!(
        r.cell
            .per_dimension
            .values()
            .map(|d| d.n_questions)
            .sum::<usize>(),
        488
    );
}

#[test]
fn scoring_ignores_record_and_question_order() {
    let ds = synthetic_dataset(8);
    let mut reordered = ds.clone();
    reordered.persons.reverse();
    for p in &mut reordered.persons {
        p.questions.reverse();
    }
    let c = mock(ProviderKind::MockUniform { seed: 3 });
    let a = run(&ds, EvalSetting::BaZiRuleKnowledge, &c, None);
    let b = run(&reordered, EvalSetting::BaZiRuleKnowledge, &c, None);
    assert_eq!(a, b);
}

struct Flaky {
    calls: Arc<AtomicUsize>,
}

impl Backend for Flaky {
    fn send(&self, r: &ChatRequest) -> Result<Reply, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        if r.request_hash().starts_with('0') {
            Err(BackendError::Transient("simulated outage".into()))
        } else {
            Ok(Reply::text("Answer: A"))
        }
    }
}

#[test]
fn transport_errors_are_recorded_and_flag_the_run() {
    let ds = synthetic_dataset(21);
    let cfg = ProviderConfig {
        retry: RetryPolicy {
            attempts: 2,
            backoff_ms: vec![0],
        },
        ..ProviderConfig::mock(ProviderKind::MockGold)
    };
    let calls = Arc::new(AtomicUsize::new(0));
    let client = Client::with_backend(
        cfg,
        Box::new(Flaky {
            calls: calls.clone(),
        }),
    );
    let r = run(&ds, EvalSetting::VanillaBaZi, &client, None);
    let failed = r
        .results
        .iter()
        .filter(|q| q.outcome == Outcome::TransportError)
        .count();
    assert!(failed > 0);
    assert_eq!(r.cell.transport_errors, failed);
    assert_eq!(calls.load(Ordering::SeqCst), 488 + failed);
    assert_eq!(r.cell.invalid, failed as f64 > 0.05 * 488.0);
    assert!(r
        .results
        .iter()
        .filter(|q| q.outcome == Outcome::TransportError)
        .all(|q| q.error.as_deref().unwrap().contains("2 attempt")));
}

struct Counter {
    calls: Arc<AtomicUsize>,
}

impl Backend for Counter {
    fn send(&self, _: &ChatRequest) -> Result<Reply, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(Reply::text("notes"))
    }
}

#[test]
fn full_model_needs_and_uses_a_knowledge_stage() {
    let ds = fixture();
    let gold = mock(ProviderKind::MockGold);
    let cfg = EvalConfig::new(EvalSetting::FullModel, "reasoner");
    let missing = evaluate(
        &ds.persons,
        &cfg,
        Providers {
            reasoning: &gold,
            knowledge: None,
            cache: None,
        },
        None,
    );
    assert_eq!(missing, Err(BenchError::MissingKnowledgeProvider));

    let calls = Arc::new(AtomicUsize::new(0));
    let knowledge = Client::with_backend(
        ProviderConfig::mock(ProviderKind::MockGold),
        Box::new(Counter {
            calls: calls.clone(),
        }),
    );
    let r = evaluate(
        &ds.persons,
        &cfg,
        Providers {
            reasoning: &gold,
            knowledge: Some(&knowledge),
            cache: None,
        },
        None,
    )
    .unwrap();
    // one stage-one call per (person, resolved reference year); sample-001's
    // explicit 1996 equals its default, birth year + 30
    assert_eq!(calls.load(Ordering::SeqCst), 2);
    assert_eq!(r.cell.accuracy, 100.0);
    assert_eq!(r.cell.knowledge_model_id.as_deref(), Some("reasoner"));
}

#[test]
fn stage_two_prompt_carries_notes_and_no_gold() {
    let ds = fixture();
    let cfg = EvalConfig::new(EvalSetting::FullModel, "m");
    let s = prepare_subject(&ds.persons[0], &cfg).unwrap();
    let q = &ds.persons[0].questions[0];
    let p = question_prompt(&s, q, &cfg, Some("stage one notes")).unwrap();
    assert!(p
        .rendered_text
        .contains("## Knowledge Notes\nstage one notes"));
    let mut other_gold = q.clone();
    other_gold.gold_index = 3;
    assert_eq!(
        question_prompt(&s, &other_gold, &cfg, Some("stage one notes")).unwrap(),
        p
    );
    let k = knowledge_prompt(&s, &cfg, None).unwrap();
    assert!(k.ends_with(&format!("{KNOWLEDGE_INSTRUCTION}\n")));
    assert!(!k.contains("## Question"));
}

#[test]
fn cached_runs_match_uncached_runs() {
    let ds = fixture();
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let c = mock(ProviderKind::MockUniform { seed: 9 });
    let cfg = EvalConfig::new(EvalSetting::FullModel, "mock-model");
    let p = Providers {
        reasoning: &c,
        knowledge: Some(&c),
        cache: Some(&cache),
    };
    let first = evaluate(&ds.persons, &cfg, p, None).unwrap();
    let second = evaluate(&ds.persons, &cfg, p, None).unwrap();
    assert_eq!(first, second);
    assert_eq!(first, run(&ds, EvalSetting::FullModel, &c, None));
    assert_eq!(cache.stats(), CacheStats { hits: 7, misses: 7 });
}

#[test]
fn relative_change_examples() {
    assert_eq!(relative_change(51.2, 39.3), Ok(30.3));
    assert_eq!(relative_change(42.5, 39.3), Ok(8.1));
    for x in [0.1, 25.0, 39.3, 100.0] {
        assert_eq!(relative_change(x, x), Ok(0.0));
    }
    assert_eq!(
        relative_change(10.0, 0.0),
        Err(BenchError::UndefinedBaseline(0.0))
    );
}

fn three_by_three() -> EvalReport {
    let ds = fixture();
    let mut report = None::<EvalReport>;
    for model in ["alpha", "beta", "gamma"] {
        let c = mock(ProviderKind::MockUniform {
            seed: model.len() as u64,
        });
        for setting in EvalSetting::ALL {
            let cfg = EvalConfig::new(setting, model);
            let r = run_eval(
                &ds.persons,
                &cfg,
                Providers {
                    reasoning: &c,
                    knowledge: Some(&c),
                    cache: None,
                },
                None,
            )
            .unwrap();
            match &mut report {
                None => report = Some(r),
                Some(acc) => acc.cells.extend(r.cells),
            }
        }
    }
    let mut report = report.unwrap();
    report.cells[0].accuracy = 40.0;
    report
        .set_baseline("alpha:vanilla".parse().unwrap())
        .unwrap();
    report
}

#[test]
fn markdown_has_nine_rows_with_arrows() {
    let md = three_by_three().to_markdown();
    let first_table: Vec<_> = md.lines().take_while(|l| l.starts_with('|')).collect();
    assert_eq!(first_table.len(), 2 + 9);
    assert_eq!(first_table[2], "| Vanilla BaZi | alpha | 40.0 |");
    assert!(first_table[3..]
        .iter()
        .all(|row| row.contains("(↑") || row.contains("(↓") || row.contains("(0.0%)")));
}

#[test]
fn arrows_follow_sign() {
    let mut r = three_by_three();
    r.cells[0].accuracy = 39.3;
    r.cells[1].accuracy = 51.2;
    r.cells[2].accuracy = 30.0;
    r.set_baseline("alpha:vanilla".parse().unwrap()).unwrap();
    let md = r.to_markdown();
    assert!(md.contains("| alpha | 51.2 (↑30.3%) |"), "{md}");
    assert!(md.contains("| alpha | 30.0 (↓23.7%) |"), "{md}");
}

#[test]
fn json_and_csv_are_lossless() {
    let r = three_by_three();
    assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r);
    let (cells, baseline) = EvalReport::cells_from_csv(&r.to_csv()).unwrap();
    assert_eq!(cells, r.cells);
    assert_eq!(baseline, r.baseline);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let ds = synthetic_dataset(5);
    let render = || {
        let c = mock(ProviderKind::MockUniform { seed: 7 });
        let cfg = EvalConfig::new(EvalSetting::FullModel, "m");
        let plan = make_shuffle(&ds.persons, 2).unwrap();
        let r = run_eval(
            &ds.persons,
            &cfg,
            Providers {
                reasoning: &c,
                knowledge: Some(&c),
                cache: None,
            },
            Some(&plan),
        )
        .unwrap();
        (r.to_json(), r.to_csv(), r.to_markdown())
    };
    assert_eq!(render(), render());
}

#[test]
fn cell_keys_parse() {
    let k: CellKey = "org:model-x:full:shuffled".parse().unwrap();
    assert_eq!(
        (k.model_id.as_str(), k.setting, k.shuffled),
        ("org:model-x", EvalSetting::FullModel, true)
    );
    assert!("nosetting".parse::<CellKey>().is_err());
}

#[test]
fn leak_free_prompts_for_the_fixture() {
    let ds = fixture();
    let names: HashSet<_> = ds.persons.iter().filter_map(|p| p.name.clone()).collect();
    for setting in EvalSetting::ALL {
        let cfg = EvalConfig::new(setting, "m");
        for p in &ds.persons {
            let s = prepare_subject(p, &cfg).unwrap();
            for q in &p.questions {
                let text = question_prompt(&s, q, &cfg, None).unwrap().rendered_text;
                assert!(names.iter().all(|n| !text.contains(n.as_str())));
                assert!(!text.contains("gold"));
            }
        }
    }
}
