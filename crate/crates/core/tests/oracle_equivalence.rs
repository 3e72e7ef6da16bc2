use admit_core::oracle::{check_corpus, GenConfig};

fn assert_clean(cfg: GenConfig, count: usize) {
    let report = check_corpus(&cfg, count).unwrap();
    eprintln!("{report:?}");
    assert!(
        report.passed(),
        "{} mismatches; first: {:#?}",
        report.mismatches,
        report.first
    );
    assert!(
        report.skipped * 10 <= count,
        "too many skipped: {}",
        report.skipped
    );
}

#[test]
fn small_sparse_games() {
    assert_clean(GenConfig::default(), 300);
}

#[test]
fn six_vertices_three_memory_states() {
    let cfg = GenConfig {
        seed: 10_000,
        vertex_count: 6,
        leaf_count: 2,
        max_out_degree: 3,
        mealy_states: 3,
        ..GenConfig::default()
    };
    assert_clean(cfg, 300);
}

#[test]
fn negative_payoffs_and_few_leaves() {
    let cfg = GenConfig {
        seed: 20_000,
        vertex_count: 6,
        leaf_count: 1,
        payoff_range: 2,
        max_out_degree: 2,
        mealy_states: 3,
        ..GenConfig::default()
    };
    assert_clean(cfg, 300);
}
