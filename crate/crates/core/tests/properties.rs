//! Structural invariants of groups, quadratic forms and modular data, checked
//! exhaustively on small cases and by sampling on larger ones.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use anomalia::form::{MetricGroup, QuadraticForm};
use anomalia::group::{quotient, FinAbGroup, GroupElt, Subgroup};
use anomalia::lagrangian::invariant_factor_lists;
use anomalia::modular::ModularData;
use anomalia::qmodz::QmodZ;
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn all_subgroups(g: &FinAbGroup) -> Vec<Subgroup> {
    let n = g.order();
    (1..=n)
        .filter(|m| n.is_multiple_of(*m))
        .flat_map(|m| g.all_subgroups_of_order(m).unwrap())
        .collect()
}

fn order_multiset(g: &FinAbGroup) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for a in g.elements() {
        *m.entry(g.order_of(&a)).or_default() += 1;
    }
    m
}

/// Groups of order `<= bound`, one per isomorphism type with at most `rank` factors.
fn groups_up_to(bound: u64, rank: usize) -> Vec<FinAbGroup> {
    (1..=bound)
        .flat_map(|n| invariant_factor_lists(n, rank))
        .map(|f| FinAbGroup::from_factors(f).unwrap())
        .collect()
}

#[test]
fn lagrange_and_quotient_orders() {
    for g in groups_up_to(200, 3) {
        for h in all_subgroups(&g) {
            assert_eq!(g.order() % h.order(), 0, "{g:?} {h:?}");
            let (q, proj) = quotient(&g, &h).unwrap();
            assert_eq!(g.order(), h.order() * q.order(), "{g:?} {h:?}");
            // kernel of the projection is exactly h
            let kernel = g
                .elements()
                .filter(|a| proj.apply(a).unwrap() == q.zero())
                .count() as u64;
            assert_eq!(kernel, h.order());
        }
    }
}

#[test]
fn elementary_abelian_subgroup_counts() {
    // number of subgroups of Z_p^r is a sum of Gaussian binomials
    for (p, r, expected) in [(2u64, 3usize, 16usize), (2, 4, 67), (3, 3, 28)] {
        let g = FinAbGroup::from_factors(vec![p; r]).unwrap();
        assert_eq!(all_subgroups(&g).len(), expected, "Z{p}^{r}");
    }
}

#[test]
fn dual_pairing_is_nondegenerate() {
    for g in groups_up_to(200, 3) {
        for chi in g.elements().skip(1) {
            assert!(
                g.elements()
                    .any(|x| !g.dual_character(&chi, &x).unwrap().is_zero()),
                "{g:?} {chi:?}"
            );
        }
    }
}

fn factor_lists() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(1u64..=12, 1..=3)
        .prop_filter("order at most 400", |f| f.iter().product::<u64>() <= 400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(factors in factor_lists()) {
        let g = FinAbGroup::from_factors(factors).unwrap();
        let (c, proj) = g.canonicalize().unwrap();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.factors().to_vec(), g.invariant_factors());
        let (c2, _) = c.canonicalize().unwrap();
        prop_assert_eq!(&c2, &c);
        prop_assert_eq!(order_multiset(&g), order_multiset(&c));
        for a in g.elements() {
            for b in [g.generator(0), g.element_at(g.order() as usize / 2)] {
                let lhs = proj.apply(&g.add(&a, &b)).unwrap();
                let rhs = c.add(&proj.apply(&a).unwrap(), &proj.apply(&b).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}

/// A valid (not necessarily nondegenerate) form on `Z_{d_1} + ... + Z_{d_r}`
/// from raw numerators: `q_i = a_i / 2d_i` (`a_i` even when `d_i` is odd) and
/// `dq(e_i, e_j) = c_ij / gcd(d_i, d_j)`.
fn build_form(factors: &[u64], diag: &[i64], cross: &[i64]) -> QuadraticForm {
    let g = FinAbGroup::from_factors(factors.to_vec()).unwrap();
    let r = factors.len();
    let q: Vec<QmodZ> = (0..r)
        .map(|i| {
            let d = factors[i] as i64;
            let a = if d % 2 == 1 { 2 * diag[i] } else { diag[i] };
            QmodZ::new(a, 2 * d)
        })
        .collect();
    let mut pairing = vec![vec![QmodZ::ZERO; r]; r];
    let mut k = 0;
    for i in 0..r {
        for j in (i + 1)..r {
            let v = QmodZ::new(cross[k], factors[i].gcd(&factors[j]) as i64);
            pairing[i][j] = v;
            pairing[j][i] = v;
            k += 1;
        }
    }
    QuadraticForm::new(g, q, pairing).unwrap()
}

fn forms(max_order: u64) -> impl Strategy<Value = QuadraticForm> {
    (
        proptest::collection::vec(2u64..=16, 1..=3),
        proptest::collection::vec(0i64..64, 3),
        proptest::collection::vec(0i64..64, 3),
    )
        .prop_filter("bounded order", move |(f, _, _)| {
            f.iter().product::<u64>() <= max_order
        })
        .prop_map(|(f, d, c)| build_form(&f, &d, &c))
}

fn metrics(max_order: u64) -> impl Strategy<Value = MetricGroup> {
    forms(max_order).prop_filter_map("nondegenerate", |f| MetricGroup::new(f).ok())
}

fn naive_q(f: &QuadraticForm, a: &GroupElt) -> QmodZ {
    // sum a_i^2 q_i + sum_{i<j} a_i a_j b_ij
    let c = a.coords();
    let mut v = QmodZ::ZERO;
    for i in 0..c.len() {
        v += f.diag()[i].scale((c[i] * c[i]) as i64);
        for j in (i + 1)..c.len() {
            v += f.pairing()[i][j].scale((c[i] * c[j]) as i64);
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_law(f in forms(500)) {
        let g = f.group();
        let e = g.exponent();
        for a in g.elements() {
            let qa = f.eval(&a).unwrap();
            prop_assert_eq!(qa, naive_q(&f, &a));
            prop_assert_eq!(f.eval(&g.neg(&a)).unwrap(), qa);
            for n in 0..=e as i64 {
                prop_assert_eq!(f.eval(&g.scale(&a, n)).unwrap(), qa.scale(n * n));
            }
        }
    }

    #[test]
    fn bilinear_form_is_symmetric_and_biadditive(f in forms(200)) {
        let g = f.group();
        let gens = g.generators();
        for a in g.elements() {
            for b in g.elements() {
                let ab = f.bilinear(&a, &b).unwrap();
                prop_assert_eq!(ab, f.bilinear(&b, &a).unwrap());
                prop_assert_eq!(
                    ab,
                    f.eval(&g.add(&a, &b)).unwrap() - f.eval(&a).unwrap() - f.eval(&b).unwrap()
                );
                for x in &gens {
                    prop_assert_eq!(
                        f.bilinear(&g.add(&a, x), &b).unwrap(),
                        ab + f.bilinear(x, &b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonal_complements(m in metrics(200)) {
        let f = m.form();
        let g = m.group();
        for h in all_subgroups(g) {
            let perp = f.orthogonal_complement(&h).unwrap();
            prop_assert_eq!(h.order() * perp.order(), g.order());
            let back = f.orthogonal_complement(&perp).unwrap();
            prop_assert_eq!(back.order(), h.order());
            prop_assert!(h.elements().all(|a| back.contains(&a)));
        }
    }

    #[test]
    fn signature_is_additive(a in metrics(60), b in metrics(60)) {
        let s = a.direct_sum(&b).gauss_signature().unwrap();
        prop_assert_eq!(s, (a.gauss_signature().unwrap() + b.gauss_signature().unwrap()) % 8);
    }
}

/// Brute-force isometry test: images of the basis generators, chosen one at a
/// time with matching order, `q` and pairings, then checked for bijectivity.
fn brute_force_isometric(a: &MetricGroup, b: &MetricGroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let ga = a.group();
    let gb = b.group();
    let gens = ga.generators();
    let cands: Vec<GroupElt> = gb.elements().collect();
    fn go(
        i: usize,
        chosen: &mut Vec<GroupElt>,
        gens: &[GroupElt],
        cands: &[GroupElt],
        a: &MetricGroup,
        b: &MetricGroup,
    ) -> bool {
        let (ga, gb) = (a.group(), b.group());
        if i == gens.len() {
            let span = gb.subgroup_generated(chosen).unwrap();
            return span.order() == gb.order();
        }
        for y in cands {
            // a homomorphism needs d_i y = 0
            if !gb
                .scale(y, ga.factors()[i] as i64)
                .coords()
                .iter()
                .all(|&c| c == 0)
            {
                continue;
            }
            if b.q(y).unwrap() != a.q(&gens[i]).unwrap() {
                continue;
            }
            if (0..i).any(|j| {
                b.bilinear(&chosen[j], y).unwrap() != a.bilinear(&gens[j], &gens[i]).unwrap()
            }) {
                continue;
            }
            chosen.push(y.clone());
            if go(i + 1, chosen, gens, cands, a, b) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(0, &mut Vec::new(), &gens, &cands, a, b)
}

fn small_metric_on(factors: Vec<u64>) -> impl Strategy<Value = MetricGroup> {
    let r = factors.len();
    (
        proptest::collection::vec(0i64..32, r),
        proptest::collection::vec(0i64..32, 3),
    )
        .prop_filter_map("nondegenerate", move |(d, c)| {
            MetricGroup::new(build_form(&factors, &d, &c)).ok()
        })
}

fn metric_pairs() -> impl Strategy<Value = (MetricGroup, MetricGroup)> {
    prop_oneof![
        Just(vec![3u64, 3]),
        Just(vec![9]),
        Just(vec![2, 4]),
        Just(vec![8]),
        Just(vec![3, 9]),
        Just(vec![3, 3, 3]),
        Just(vec![2, 2, 4]),
        Just(vec![5, 5]),
    ]
    .prop_flat_map(|f| (small_metric_on(f.clone()), small_metric_on(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn isometry_search_agrees_with_brute_force((a, b) in metric_pairs()) {
        let found = a.find_isomorphism(&b).unwrap();
        prop_assert_eq!(found.is_some(), brute_force_isometric(&a, &b));
        prop_assert!(a.find_isomorphism(&a).unwrap().is_some());
        if let Some(iso) = found {
            iso.verify().unwrap();
            let inv = iso.inverse().unwrap();
            inv.verify().unwrap();
            prop_assert!(b.find_isomorphism(&a).unwrap().is_some());
            // images preserve q pointwise, hence the twist spectrum
            for x in a.group().elements() {
                prop_assert_eq!(b.q(&iso.apply(&x).unwrap()).unwrap(), a.q(&x).unwrap());
            }
            prop_assert_eq!(a.twist_spectrum().unwrap(), b.twist_spectrum().unwrap());
            prop_assert_eq!(a.gauss_signature().unwrap(), b.gauss_signature().unwrap());
        }
    }
}

fn s_squared(md: &ModularData) -> Vec<Vec<Complex64>> {
    let n = md.size();
    let s = md.s();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| s.get(i, k) * s.get(k, j)).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modular_data_relations(m in metrics(400)) {
        let md = ModularData::new(&m).unwrap();
        let r = md.check().unwrap();
        prop_assert!(r.unitarity < 1e-9 && r.s_squared < 1e-9 && r.st_cubed < 1e-9);
        prop_assert!(md.check_group_fusion().unwrap() < 1e-6);
        // S^2 is the charge conjugation a -> -a, so S^4 = 1
        let s2 = s_squared(&md);
        let g = md.group();
        let n = md.size();
        for i in 0..n {
            let neg = g.index_of(&g.neg(&md.labels()[i]));
            for j in 0..n {
                let want = if j == neg { 1.0 } else { 0.0 };
                prop_assert!((s2[i][j] - want).norm() < 1e-9);
            }
        }
        for i in 0..n {
            let row = (0..n).map(|k| s2[i][k] * s2[k][i]).sum::<Complex64>();
            prop_assert!((row - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn verlinde_tensor_is_group_law(m in metrics(100)) {
        let md = ModularData::new(&m).unwrap();
        let fusion = md.verlinde_fusion().unwrap();
        let g = md.group();
        for (a, x) in md.labels().iter().enumerate() {
            for (b, y) in md.labels().iter().enumerate() {
                let c = g.index_of(&g.add(x, y));
                for (k, &v) in fusion[a][b].iter().enumerate() {
                    prop_assert_eq!(v, u64::from(k == c));
                }
            }
        }
    }
}
