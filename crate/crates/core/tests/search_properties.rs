use rotbent::bentlab::sign_corner_pair;
use rotbent::rotsym::RotSymSpec;
use rotbent::search::{
    search_degree2, search_homogeneous, search_short_cycle_sums, verify_suite, Coverage, Limits,
    SearchConfig, Suite,
};

fn f0_spec(n: usize) -> RotSymSpec {
    RotSymSpec::parse(n, &format!("x0x{}", n / 2)).unwrap()
}

#[test]
fn full_suite_n6_passes_exhaustively() {
    let report = verify_suite(&SearchConfig::new(6, Suite::All)).unwrap();
    assert!(report.passed, "{report:#?}");
    assert_eq!(report.violation_count(), 0);
    assert_eq!(report.schema, 1);
    assert!(report
        .entries
        .iter()
        .filter(|e| e.check != "jset-nonlinearity-bound")
        .all(|e| e.coverage == Coverage::Exhaustive));
    assert!(report.entry("sign-corner-antisymmetry").unwrap().instances > 0);
    assert!(report.bent_specs.contains(&"x0x3".to_string()));
}

#[test]
fn even_n_suite_n8_passes() {
    let report = verify_suite(&SearchConfig::new(8, Suite::EvenN)).unwrap();
    assert!(report.passed, "{report:#?}");
    assert!(report.entry("corner-routes-agree").is_none());
}

#[test]
fn sampled_suite_n10_passes() {
    let report = verify_suite(&SearchConfig::new(10, Suite::All).sampled(10_000, 1)).unwrap();
    assert!(report.passed, "{report:#?}");
    assert_eq!(report.samples, Some(10_000));
}

#[test]
fn reports_are_deterministic() {
    let config = SearchConfig::new(10, Suite::TwicePrime).sampled(2_000, 42);
    let a = verify_suite(&config).unwrap().without_timing();
    let b = verify_suite(&config).unwrap().without_timing();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let other = verify_suite(&SearchConfig { seed: 43, ..config })
        .unwrap()
        .without_timing();
    assert_eq!(other.seed, 43);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(verify_suite(&SearchConfig::new(7, Suite::All)).is_err());
    assert!(verify_suite(&SearchConfig::new(8, Suite::TwicePrime)).is_err());
    assert!(verify_suite(&SearchConfig::new(18, Suite::EvenN)).is_err());
}

#[test]
fn only_f0_among_homogeneous_single_terms_n6() {
    let single = Limits {
        max_terms: Some(1),
        ..Limits::default()
    };
    let bent: Vec<_> = (2..=6)
        .flat_map(|d| search_homogeneous(6, d, &single).unwrap().bent)
        .collect();
    assert_eq!(bent, [f0_spec(6)]);
}

#[test]
fn odd_degree_sums_are_never_bent_n6() {
    assert!(search_homogeneous(6, 3, &Limits::default())
        .unwrap()
        .bent
        .is_empty());
}

#[test]
fn found_bent_specs_pass_sign_corner_condition() {
    for n in [6, 10] {
        let mut found = search_degree2(n, &Limits::default()).unwrap().bent;
        found.extend(search_short_cycle_sums(n, &Limits::default()).unwrap().bent);
        assert!(!found.is_empty());
        for spec in found {
            let f = spec.build();
            assert!(f.is_bent());
            assert!(spec.contains_f0());
            let (a, b) = sign_corner_pair(&f);
            assert_eq!(a, -b, "{spec}");
        }
    }
}

#[test]
fn budget_guard_applies_without_sampling() {
    let tight = Limits {
        budget: 4,
        ..Limits::default()
    };
    assert!(search_degree2(10, &tight).is_err());
    let sampled = Limits {
        budget: 4,
        samples: Some(8),
        ..Limits::default()
    };
    let result = search_degree2(10, &sampled).unwrap();
    assert_eq!(result.coverage, Coverage::Sampled);
    assert_eq!(result.instances, 8);
}
