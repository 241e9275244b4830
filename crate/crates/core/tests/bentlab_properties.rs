use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rotbent::bentlab::{
    corner_probe, gap_criterion_nonbent, jset_bound, m_corner_folded, m_entry, nonhom_structure,
    paired_form, sign_corner_pair, Verdict,
};
use rotbent::boolfn::{AnfForm, BooleanFunction};
use rotbent::rotsym::{CycleKind, RotSymSpec};
use rotbent::search::{enumerate_terms, Limits, TablePool};

fn random_table(n: usize, rng: &mut SplitMix64) -> BooleanFunction {
    BooleanFunction::from_fn(n, |_| rng.gen()).unwrap()
}

/// Every rotation symmetric function on `n` variables.
fn all_rs(n: usize) -> Vec<BooleanFunction> {
    let pool = TablePool::orbit_indicators(n).unwrap();
    let limits = Limits {
        budget: u64::MAX,
        ..Limits::default()
    };
    pool.scan(&limits, true, |_, f| Some(f.clone()))
        .unwrap()
        .hits
}

#[test]
fn m_entry_depends_on_xor_only() {
    let mut rng = SplitMix64::seed_from_u64(3);
    for n in 2..=6 {
        let f = random_table(n, &mut rng);
        let len = 1 << n;
        for i in 0..len {
            for j in 0..len {
                assert_eq!(m_entry(&f, i, j), m_entry(&f, 0, i ^ j));
            }
        }
    }
}

#[test]
fn bent_iff_hadamard_row_vanishes() {
    let mut rng = SplitMix64::seed_from_u64(4);
    let bent = [
        RotSymSpec::parse(6, "x0x3").unwrap().build(),
        RotSymSpec::parse(8, "x0x4").unwrap().build(),
    ];
    for f in bent
        .iter()
        .cloned()
        .chain((0..20).map(|_| random_table(6, &mut rng)))
    {
        let vanish = (1..f.len()).all(|j| m_entry(&f, 0, j) == 0);
        assert_eq!(vanish, f.is_bent());
        if f.is_bent() {
            assert_eq!(m_entry(&f, 0, 0), f.len() as i64);
        }
    }
}

#[test]
fn corner_routes_agree_on_all_rs_n6() {
    let all = all_rs(6);
    assert_eq!(all.len(), 1 << 14);
    for f in &all {
        let probe = corner_probe(f);
        assert!(probe.reduced.is_some());
        assert!(probe.consistent(), "{} {probe:?}", f.to_hex());
    }
}

#[test]
fn sign_corners_oppose_for_bent_rs_n6() {
    let bent: Vec<_> = all_rs(6).into_iter().filter(|f| f.is_bent()).collect();
    assert!(!bent.is_empty());
    for f in &bent {
        let (a, b) = sign_corner_pair(f);
        assert_eq!(a, -b, "{}", f.to_hex());
    }
}

#[test]
fn full_cycle_terms_never_bent() {
    for n in [6, 10] {
        for d in 1..=n {
            for t in enumerate_terms(n, d).unwrap() {
                if t.classify().kind == CycleKind::Full {
                    assert!(!t.build().is_bent(), "{t}");
                }
            }
        }
    }
}

#[test]
fn p_monomial_terms_have_paired_form() {
    for p in [3, 5] {
        let n = 2 * p;
        for d in 1..=n {
            for t in enumerate_terms(n, d).unwrap() {
                let form = paired_form(&t, p);
                assert_eq!(form.is_some(), t.monomial_count() == p, "{t}");
                if let Some(form) = form {
                    assert_eq!(2 * form.pairs(), t.degree());
                }
            }
        }
    }
}

#[test]
fn gap_criterion_implies_nonbent() {
    for n in [6, 8] {
        for d in 3..=n {
            let terms = enumerate_terms(n, d).unwrap();
            let pool = TablePool::from_terms(n, &terms);
            let scan = pool
                .scan(&Limits::default(), false, |pick, f| {
                    let spec = RotSymSpec::new(
                        n,
                        false,
                        pick.indices().into_iter().map(|i| terms[i].clone()),
                    )
                    .unwrap();
                    (gap_criterion_nonbent(&spec).unwrap() && f.is_bent()).then_some(spec)
                })
                .unwrap();
            assert!(scan.hits.is_empty(), "n={n} d={d}: {:?}", scan.hits);
        }
    }
}

#[test]
fn nonhomogeneous_examples() {
    let v = |s: &str| nonhom_structure(&RotSymSpec::parse(6, s).unwrap()).unwrap();
    assert_eq!(v("x0x2x4 + x0x1"), Verdict::RequiresF0);
    assert_eq!(v("x0x2x4 + x0x3 + x0x1"), Verdict::RequiresF0);
}

/// Distance to the nearest affine function by enumeration.
fn affine_distance(f: &BooleanFunction) -> u64 {
    let one = BooleanFunction::one(f.n()).unwrap();
    (0..f.len())
        .flat_map(|w| {
            let l = BooleanFunction::linear(f.n(), w).unwrap();
            let d = f.hamming_distance(&l).unwrap();
            [d, f.hamming_distance(&l.xor(&one).unwrap()).unwrap()]
        })
        .min()
        .unwrap()
}

#[test]
fn jset_bound_holds() {
    let mut rng = SplitMix64::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(2..=7);
        let size = rng.gen_range(1..=n);
        let mut vars: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let k = rng.gen_range(i..n);
            vars.swap(i, k);
        }
        let j: BTreeSet<usize> = vars[..size].iter().copied().collect();
        let monomials: Vec<Vec<usize>> = (0..1usize << n)
            .filter(|_| rng.gen())
            .map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|m| m.len() < 2 || !m.iter().all(|v| j.contains(v)))
            .collect();
        let f = BooleanFunction::from_anf(&AnfForm::new(n, monomials).unwrap()).unwrap();
        let bound = jset_bound(&f, &j).unwrap().expect("no monomial inside J");
        assert_eq!(bound, (1u64 << (n - 1)) - (1u64 << (size - 1)));
        assert!(affine_distance(&f) <= bound, "n={n} J={j:?} {}", f.to_hex());
    }
}

#[test]
fn jset_bound_refuses_monomials_inside_j() {
    let f = RotSymSpec::parse(4, "x0x1").unwrap().build();
    assert_eq!(jset_bound(&f, &BTreeSet::from([0, 1, 2, 3])).unwrap(), None);
    assert_eq!(jset_bound(&f, &BTreeSet::new()).unwrap(), None);
    assert!(jset_bound(&f, &BTreeSet::from([9])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn folded_corner_matches_direct(n in 2usize..=10, seed in any::<u64>()) {
        let f = random_table(n, &mut SplitMix64::seed_from_u64(seed));
        prop_assert_eq!(m_corner_folded(&f), m_entry(&f, 0, f.len() - 1));
    }
}
