//! Invariants of Lagrangian extensions, the product on them, and the
//! cyclic-orbifold constructions.

use anomalia::form::MetricGroup;
use anomalia::group::GroupElt;
use anomalia::lagrangian::{
    boxplus, enumerate_lagrangians, find_extension_isomorphism, plus_minus_extension,
    standard_extension, trivialize, twisted_double_cyclic, LagrangianExtension,
};
use anomalia::orbifold::{
    graded_spectrum_check, is_non_anomalous, orbifold_metric_group, orbifold_report,
    twisted_sector_spectrum, CentralCharge,
};
use anomalia::qmodz::QmodZ;
use num_integer::Integer;
use proptest::prelude::*;

/// Every element of stored degree `d` (a unit) has `n^2 q(x) = d^2 j mod n`.
fn assert_lifts_integral(e: &LagrangianExtension) {
    let n = e.n() as i64;
    let j = e.anomaly_index() as i64;
    let g = e.group();
    for x in g.elements() {
        let d = e.degree(&x).unwrap() as i64;
        if d.gcd(&n) != 1 {
            continue;
        }
        let s = e.scaled_value(&x).unwrap();
        assert_eq!(
            s.rem_euclid(n),
            (d * d * j).rem_euclid(n),
            "{e:?} lift {x:?}"
        );
    }
}

fn with_index(n: u64, j: i64) -> LagrangianExtension {
    twisted_double_cyclic(n, j).unwrap()
}

#[test]
fn integrality_and_lift_independence() {
    for n in 1..=10u64 {
        let st = standard_extension(n).unwrap();
        assert_lifts_integral(&st);
        for j in 0..n as i64 {
            let e = with_index(n, j);
            assert_lifts_integral(&e);
            assert_lifts_integral(&boxplus(&e, &st).unwrap());
        }
        if n % 3 == 0 {
            for s in [-1, 1] {
                assert_lifts_integral(&plus_minus_extension(n / 3, s).unwrap());
            }
        }
    }
}

#[test]
fn product_is_a_homomorphism() {
    for n in 1..=8u64 {
        let all: Vec<_> = (0..n as i64).map(|j| with_index(n, j)).collect();
        for (j1, e1) in all.iter().enumerate() {
            for (j2, e2) in all.iter().enumerate() {
                let p = boxplus(e1, e2).unwrap();
                assert_eq!(p.anomaly_index(), ((j1 + j2) as u64) % n, "n={n} {j1}+{j2}");
                let expected = &all[(j1 + j2) % n as usize];
                assert!(find_extension_isomorphism(&p, expected).unwrap().is_some());
            }
        }
    }
}

#[test]
fn standard_extension_is_the_unit() {
    for n in 1..=9u64 {
        let st = standard_extension(n).unwrap();
        for j in 0..n as i64 {
            let e = with_index(n, j);
            let p = boxplus(&e, &st).unwrap();
            assert!(find_extension_isomorphism(&p, &e).unwrap().is_some());
        }
    }
}

#[test]
fn plus_minus_subgroup_is_z3() {
    for m in 1..=3u64 {
        let st = standard_extension(3 * m).unwrap();
        let family = [
            st.clone(),
            plus_minus_extension(m, 1).unwrap(),
            plus_minus_extension(m, -1).unwrap(),
        ];
        // index of A_s is s m, so the family maps onto {0, m, 2m}
        let idx: Vec<u64> = family.iter().map(|e| e.anomaly_index()).collect();
        assert_eq!(idx, [0, m, 2 * m]);
        for (i, a) in family.iter().enumerate() {
            for (k, b) in family.iter().enumerate() {
                let p = boxplus(a, b).unwrap();
                let target = &family[(i + k) % 3];
                assert!(
                    find_extension_isomorphism(&p, target).unwrap().is_some(),
                    "m={m} {i}+{k}"
                );
            }
        }
    }
}

#[test]
fn trivialize_matches_index_on_constructed_extensions() {
    for n in 1..=12u64 {
        for j in 0..n as i64 {
            let e = with_index(n, j);
            let iso = trivialize(&e).unwrap();
            assert_eq!(iso.is_some(), j == 0, "n={n} j={j}");
            if let Some(iso) = iso {
                iso.verify().unwrap();
                assert_eq!(
                    iso.apply(e.iota()).unwrap(),
                    *standard_extension(n).unwrap().iota()
                );
            }
        }
    }
}

#[test]
fn lagrangian_counts_match_brute_force() {
    // oracle: filter every subgroup of order n by isotropy
    for n in [2u64, 3, 4, 5, 6] {
        for j in 0..n as i64 {
            let m: MetricGroup = with_index(n, j).metric().clone();
            let g = m.group();
            let found = enumerate_lagrangians(&m).unwrap();
            let brute = g
                .all_subgroups_of_order(n)
                .unwrap()
                .into_iter()
                .filter(|h| h.elements().all(|a| m.q(&a).unwrap().is_zero()))
                .count();
            assert_eq!(found.len(), brute, "n={n} j={j}");
            assert!(!found.is_empty());
        }
    }
}

fn charge(k: u64) -> CentralCharge {
    CentralCharge::from_k(k).unwrap()
}

#[test]
fn spectrum_case_analysis() {
    for n in 1..=30u64 {
        let ni = n as i64;
        let untwisted: Vec<QmodZ> = (0..ni).map(|i| QmodZ::new(i, ni)).collect();
        for k in 1..=12u64 {
            let c = charge(k);
            let mut s = twisted_sector_spectrum(c, n).unwrap();
            assert_eq!(s.len(), n as usize);
            s.sort_unstable();
            if n % 3 != 0 || k % 3 == 0 {
                assert_eq!(s, untwisted, "n={n} k={k}");
            } else {
                assert!(s.contains(&QmodZ::new(-(k as i64), 3 * ni)), "n={n} k={k}");
                assert!(!s.contains(&QmodZ::ZERO));
            }
        }
    }
}

#[test]
fn orbifold_verdicts_agree() {
    for n in 1..=18u64 {
        for k in 1..=9u64 {
            let c = charge(k);
            let e = orbifold_metric_group(c, n).unwrap();
            let idx = e.anomaly_index();
            assert_eq!(is_non_anomalous(c, n), idx == 0, "n={n} k={k}");
            assert_eq!(trivialize(&e).unwrap().is_some(), idx == 0, "n={n} k={k}");
            assert_eq!((3 * idx) % n, 0, "order-3 law n={n} k={k}");
            assert_eq!(e.metric().gauss_signature().unwrap(), 0);
        }
    }
}

#[test]
fn reports_are_internally_consistent() {
    for n in 1..=12u64 {
        for k in 1..=6u64 {
            let c = charge(k);
            let r = orbifold_report(c, n).unwrap();
            assert!(
                graded_spectrum_check(&r.rep_category, c, n).unwrap(),
                "n={n} k={k}"
            );
            assert_eq!(r.dual_lagrangian.is_some(), !r.anomalous);
            if let Some(l) = &r.dual_lagrangian {
                // complementary to iota
                assert_eq!(l.order(), n);
                assert!(l
                    .elements()
                    .all(|a| r.rep_category.metric().q(&a).unwrap().is_zero()));
                let iota: &GroupElt = r.rep_category.iota();
                let shared = l.elements().filter(|a| {
                    let g = r.rep_category.group();
                    (0..n as i64).any(|t| g.scale(iota, t) == *a)
                });
                assert_eq!(shared.count(), 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelling_the_quotient_scales_the_index(n in 2u64..=12, j in 0i64..12, u in 1u64..12) {
        prop_assume!(u.gcd(&n) == 1);
        let e = with_index(n, j);
        let lift = e.group().scale(e.lift(), u as i64);
        let f = e.with_lift(lift).unwrap();
        let ni = n as i64;
        prop_assert_eq!(f.anomaly_index() as i64, (u as i64 * u as i64 * j).rem_euclid(ni));
        prop_assert_eq!(f.natural_anomaly_index(), e.natural_anomaly_index());
    }

    #[test]
    fn double_of_double_sums(n in 1u64..=9, a in 0i64..9, b in 0i64..9, c in 0i64..9) {
        let x = with_index(n, a);
        let y = with_index(n, b);
        let z = with_index(n, c);
        let left = boxplus(&boxplus(&x, &y).unwrap(), &z).unwrap();
        let right = boxplus(&x, &boxplus(&y, &z).unwrap()).unwrap();
        prop_assert!(find_extension_isomorphism(&left, &right).unwrap().is_some());
        prop_assert_eq!(left.anomaly_index(), (a + b + c).rem_euclid(n as i64) as u64);
    }
}
