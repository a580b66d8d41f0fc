//! Quadratic forms `q: A -> Q/Z`, metric groups and their isometries.
//!
//! A form is stored by its values on the presentation generators together
//! with the pairing matrix `b(e_i, e_j)`, so
//! `q(sum n_i e_i) = sum n_i^2 q(e_i) + sum_{i<j} n_i n_j b(e_i, e_j)`.
//! The diagonal of the stored pairing is always `2 q(e_i)`, which makes the
//! matrix the Gram matrix of the bilinear form `dq(a, b) = q(a+b) - q(a) - q(b)`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElt, Subgroup};
use crate::qmodz::QmodZ;

/// Tolerance when rounding the phase of a Gauss sum to an eighth root of unity.
pub const SIGNATURE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    group: FinAbGroup,
    diag: Vec<QmodZ>,
    pairing: Vec<Vec<QmodZ>>,
}

impl QuadraticForm {
    /// Form with `q(e_i) = diag[i]` and `dq(e_i, e_j) = pairing[i][j]` for
    /// `i != j`; the diagonal of `pairing` is ignored.
    ///
    /// Values are checked to be compatible with the cyclic orders: a value
    /// `q(e_i)` on `Z_d` must be killed by both `d^2` and `2d`, and
    /// `b(e_i, e_j)` by both `d_i` and `d_j`.
    pub fn new(group: FinAbGroup, diag: Vec<QmodZ>, pairing: Vec<Vec<QmodZ>>) -> Result<Self> {
        let r = group.rank();
        if diag.len() != r {
            return Err(Error::invalid(format!(
                "{} diagonal values for a group with {r} factors",
                diag.len()
            )));
        }
        if pairing.len() != r || pairing.iter().any(|row| row.len() != r) {
            return Err(Error::invalid("pairing matrix has the wrong shape"));
        }
        let d = group.factors();
        for i in 0..r {
            let di = d[i] as i64;
            if !diag[i].scale(di * di).is_zero() || !diag[i].scale(2 * di).is_zero() {
                return Err(Error::invalid(format!(
                    "q(e_{i}) = {} is not well defined on Z{di}",
                    diag[i]
                )));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if pairing[i][j] != pairing[j][i] {
                    return Err(Error::invalid("pairing matrix is not symmetric"));
                }
                if !pairing[i][j].scale(di).is_zero() {
                    return Err(Error::invalid(format!(
                        "b(e_{i}, e_{j}) = {} is not killed by {di}",
                        pairing[i][j]
                    )));
                }
            }
        }
        let mut pairing = pairing;
        for (i, q) in diag.iter().enumerate() {
            pairing[i][i] = q.scale(2);
        }
        Ok(QuadraticForm {
            group,
            diag,
            pairing,
        })
    }

    /// Orthogonal sum of cyclic forms `q(e_i) = diag[i]`.
    pub fn diagonal(group: FinAbGroup, diag: Vec<QmodZ>) -> Result<Self> {
        let r = group.rank();
        Self::new(group, diag, vec![vec![QmodZ::ZERO; r]; r])
    }

    pub fn zero(group: FinAbGroup) -> Self {
        let r = group.rank();
        Self::diagonal(group, vec![QmodZ::ZERO; r]).expect("zero form")
    }

    /// Recover a form from its values, checking on every element that `f` is
    /// the quadratic function determined by its generator data.
    pub fn from_fn(group: FinAbGroup, f: impl Fn(&GroupElt) -> QmodZ) -> Result<Self> {
        group.ensure_enumerable()?;
        let gens = group.generators();
        let diag: Vec<QmodZ> = gens.iter().map(&f).collect();
        let r = gens.len();
        let mut pairing = vec![vec![QmodZ::ZERO; r]; r];
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    pairing[i][j] = f(&group.add(&gens[i], &gens[j])) - diag[i] - diag[j];
                }
            }
        }
        let form = Self::new(group, diag, pairing).map_err(|e| {
            Error::InternalConsistency(format!("function is not a quadratic form: {e}"))
        })?;
        for a in form.group.elements() {
            if form.eval_unchecked(&a) != f(&a) {
                return Err(Error::InternalConsistency(format!(
                    "function is not a quadratic form: mismatch at {a:?}"
                )));
            }
        }
        Ok(form)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn diag(&self) -> &[QmodZ] {
        &self.diag
    }

    /// Gram matrix of `dq` on the generators.
    pub fn pairing(&self) -> &[Vec<QmodZ>] {
        &self.pairing
    }

    pub fn eval(&self, a: &GroupElt) -> Result<QmodZ> {
        self.group.check(a)?;
        Ok(self.eval_unchecked(a))
    }

    pub(crate) fn eval_unchecked(&self, a: &GroupElt) -> QmodZ {
        let c = a.coords();
        let mut acc = QmodZ::ZERO;
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            let ci = c[i] as i64;
            acc += self.diag[i].scale(ci * ci);
            for j in (i + 1)..c.len() {
                if c[j] != 0 {
                    acc += self.pairing[i][j].scale(ci * c[j] as i64);
                }
            }
        }
        acc
    }

    /// `dq(a, b) = q(a + b) - q(a) - q(b)`.
    pub fn bilinear(&self, a: &GroupElt, b: &GroupElt) -> Result<QmodZ> {
        self.group.check(a)?;
        self.group.check(b)?;
        Ok(self.bilinear_unchecked(a, b))
    }

    pub(crate) fn bilinear_unchecked(&self, a: &GroupElt, b: &GroupElt) -> QmodZ {
        self.eval_unchecked(&self.group.add(a, b)) - self.eval_unchecked(a) - self.eval_unchecked(b)
    }

    /// `{a : dq(a, -) = 0}`.
    pub fn radical(&self) -> Result<Subgroup> {
        let gens = self.group.generators();
        self.group.ensure_enumerable()?;
        let rad: Vec<GroupElt> = self
            .group
            .elements()
            .filter(|a| gens.iter().all(|e| self.bilinear_unchecked(a, e).is_zero()))
            .collect();
        Subgroup::from_elements(&self.group, &rad)
    }

    pub fn is_nondegenerate(&self) -> Result<bool> {
        Ok(self.radical()?.is_trivial())
    }

    /// Every element value, in index order.
    pub fn values(&self) -> Result<Vec<QmodZ>> {
        self.group.ensure_enumerable()?;
        Ok(self
            .group
            .elements()
            .map(|a| self.eval_unchecked(&a))
            .collect())
    }

    /// `H^perp = {a : dq(a, h) = 0 for all h in H}`.
    pub fn orthogonal_complement(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.parent() != &self.group {
            return Err(Error::invalid("subgroup of a different group"));
        }
        self.group.ensure_enumerable()?;
        let perp: Vec<GroupElt> = self
            .group
            .elements()
            .filter(|a| {
                h.generators()
                    .iter()
                    .all(|g| self.bilinear_unchecked(a, g).is_zero())
            })
            .collect();
        Ok(Subgroup::from_elements(&self.group, &perp)?.with_canonical_generators())
    }

    /// The form on `H`, presented on `H`'s invariant-factor basis
    /// (`h.presentation()`).
    pub fn restrict(&self, h: &Subgroup) -> Result<QuadraticForm> {
        if h.parent() != &self.group {
            return Err(Error::invalid("subgroup of a different group"));
        }
        let (group, basis) = h.presentation();
        let diag = basis.iter().map(|b| self.eval_unchecked(b)).collect();
        let pairing = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| self.bilinear_unchecked(a, b))
                    .collect()
            })
            .collect();
        QuadraticForm::new(group, diag, pairing)
    }

    /// `q` vanishes on all of `H`.
    pub fn is_isotropic(&self, h: &Subgroup) -> bool {
        h.elements().all(|a| self.eval_unchecked(&a).is_zero())
    }

    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let group = self.group.direct_sum(&other.group);
        let r1 = self.group.rank();
        let r = group.rank();
        let mut diag = self.diag.clone();
        diag.extend_from_slice(&other.diag);
        let mut pairing = vec![vec![QmodZ::ZERO; r]; r];
        for i in 0..r {
            for j in 0..r {
                pairing[i][j] = match (i < r1, j < r1) {
                    (true, true) => self.pairing[i][j],
                    (false, false) => other.pairing[i - r1][j - r1],
                    _ => QmodZ::ZERO,
                };
            }
        }
        QuadraticForm {
            group,
            diag,
            pairing,
        }
    }
}

/// A quadratic form whose bilinear form is nondegenerate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricGroup {
    form: QuadraticForm,
}

impl MetricGroup {
    pub fn new(form: QuadraticForm) -> Result<Self> {
        let rad = form.radical()?;
        if !rad.is_trivial() {
            return Err(Error::Degenerate(format!(
                "radical of order {} generated by {:?}",
                rad.order(),
                rad.with_canonical_generators().generators()
            )));
        }
        Ok(MetricGroup { form })
    }

    /// `(Z_n, a x^2 / den)`.
    pub fn cyclic(n: u64, num: i64, den: i64) -> Result<Self> {
        let form = QuadraticForm::diagonal(FinAbGroup::cyclic(n), vec![QmodZ::new(num, den)])?;
        Self::new(form)
    }

    pub fn trivial() -> Self {
        MetricGroup {
            form: QuadraticForm::zero(FinAbGroup::trivial()),
        }
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.form.group
    }

    pub fn order(&self) -> u64 {
        self.form.group.order()
    }

    pub fn q(&self, a: &GroupElt) -> Result<QmodZ> {
        self.form.eval(a)
    }

    pub fn bilinear(&self, a: &GroupElt, b: &GroupElt) -> Result<QmodZ> {
        self.form.bilinear(a, b)
    }

    pub fn direct_sum(&self, other: &MetricGroup) -> MetricGroup {
        MetricGroup {
            form: self.form.direct_sum(&other.form),
        }
    }

    /// Sorted multiset of values of `q`.
    pub fn twist_spectrum(&self) -> Result<Vec<QmodZ>> {
        let mut v = self.form.values()?;
        v.sort_unstable();
        Ok(v)
    }

    /// `sum_a exp(2 pi i q(a))`, accumulated exactly as a multiset of phases.
    pub fn gauss_sum(&self) -> Result<Complex64> {
        let mut counts: BTreeMap<QmodZ, u64> = BTreeMap::new();
        for v in self.form.values()? {
            *counts.entry(v).or_default() += 1;
        }
        Ok(counts
            .into_iter()
            .map(|(q, k)| Complex64::from_polar(k as f64, std::f64::consts::TAU * q.to_f64()))
            .sum())
    }

    /// `sigma mod 8` with `sum_a exp(2 pi i q(a)) = sqrt|A| exp(2 pi i sigma / 8)`.
    pub fn gauss_signature(&self) -> Result<u8> {
        let g = self.gauss_sum()?;
        let root = (self.order() as f64).sqrt();
        if g.norm() < SIGNATURE_TOLERANCE {
            return Err(Error::DegenerateSum);
        }
        if (g.norm() - root).abs() > SIGNATURE_TOLERANCE * root {
            return Err(Error::Degenerate(format!(
                "|Gauss sum| = {} differs from sqrt|A| = {root}",
                g.norm()
            )));
        }
        let eighths = g.arg() / std::f64::consts::TAU * 8.0;
        let sigma = eighths.round();
        if (eighths - sigma).abs() > SIGNATURE_TOLERANCE {
            return Err(Error::InternalConsistency(format!(
                "Gauss sum phase {eighths}/8 is not an eighth root of unity"
            )));
        }
        Ok((sigma as i64).rem_euclid(8) as u8)
    }

    /// Multiset of `(element order, q-value)` pairs: a cheap isometry invariant.
    pub fn order_value_profile(&self) -> Result<BTreeMap<(u64, QmodZ), u64>> {
        self.group().ensure_enumerable()?;
        let mut out = BTreeMap::new();
        for a in self.group().elements() {
            let key = (self.group().order_of(&a), self.form.eval_unchecked(&a));
            *out.entry(key).or_default() += 1;
        }
        Ok(out)
    }

    /// An isometry `self -> other`, if one exists.
    ///
    /// Compares invariant factors, the `(order, q)` profile and the Gauss
    /// signature first, then backtracks over images of an invariant-factor
    /// basis of `self`, keeping element order, `q` and all pairings with
    /// earlier images. The first isometry in lexicographic candidate order is
    /// returned.
    pub fn find_isomorphism(&self, other: &MetricGroup) -> Result<Option<MetricIso>> {
        if self.group().invariant_factors() != other.group().invariant_factors() {
            return Ok(None);
        }
        if self.order_value_profile()? != other.order_value_profile()? {
            return Ok(None);
        }
        if self.gauss_signature()? != other.gauss_signature()? {
            return Ok(None);
        }
        let (_, canon) = self.group().canonicalize()?;
        let basis: Vec<GroupElt> = canon.lifts().to_vec();
        let found = search_isometry(self.form(), &basis, other, &[])?;
        Ok(found.map(|basis_images| {
            let images = self
                .group()
                .generators()
                .iter()
                .map(|e| {
                    let c = canon.apply(e).expect("generator in domain");
                    let terms: Vec<(i64, &GroupElt)> = c
                        .coords()
                        .iter()
                        .zip(&basis_images)
                        .map(|(&k, y)| (k as i64, y))
                        .collect();
                    other.group().combine(&terms)
                })
                .collect();
            MetricIso {
                source: self.clone(),
                target: other.clone(),
                images,
            }
        }))
    }
}

/// Backtracking search for images `y_k` of independent elements `basis`
/// (whose span is all of the source) preserving order, `q` and pairings.
/// `pinned` fixes the images of a prefix of `basis`.
pub(crate) fn search_isometry(
    source: &QuadraticForm,
    basis: &[GroupElt],
    target: &MetricGroup,
    pinned: &[GroupElt],
) -> Result<Option<Vec<GroupElt>>> {
    let tg = target.group();
    tg.ensure_enumerable()?;
    if source.group().order() != tg.order() {
        return Ok(None);
    }
    let sg = source.group();
    let orders: Vec<u64> = basis.iter().map(|b| sg.order_of(b)).collect();
    let qs: Vec<QmodZ> = basis.iter().map(|b| source.eval_unchecked(b)).collect();
    let mut buckets: HashMap<(u64, QmodZ), Vec<usize>> = HashMap::new();
    for (i, y) in tg.elements().enumerate() {
        buckets
            .entry((tg.order_of(&y), target.form.eval_unchecked(&y)))
            .or_default()
            .push(i);
    }
    let candidates: Vec<Vec<usize>> = (0..basis.len())
        .map(|k| {
            if k < pinned.len() {
                vec![tg.index_of(&pinned[k])]
            } else {
                buckets
                    .get(&(orders[k], qs[k]))
                    .cloned()
                    .unwrap_or_default()
            }
        })
        .collect();
    let pair_src: Vec<Vec<QmodZ>> = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| source.bilinear_unchecked(a, b))
                .collect()
        })
        .collect();

    struct Search<'a> {
        tg: &'a FinAbGroup,
        form: &'a QuadraticForm,
        orders: &'a [u64],
        qs: &'a [QmodZ],
        candidates: &'a [Vec<usize>],
        pair_src: &'a [Vec<QmodZ>],
        chosen: Vec<GroupElt>,
    }

    impl Search<'_> {
        fn run(&mut self, k: usize, span: &[bool], span_list: &[usize]) -> bool {
            if k == self.candidates.len() {
                return true;
            }
            for &ci in &self.candidates[k] {
                let y = self.tg.element_at(ci);
                if self.tg.order_of(&y) != self.orders[k]
                    || self.form.eval_unchecked(&y) != self.qs[k]
                {
                    continue;
                }
                let pairs_ok = self
                    .chosen
                    .iter()
                    .enumerate()
                    .all(|(l, yl)| self.form.bilinear_unchecked(&y, yl) == self.pair_src[k][l]);
                if !pairs_ok {
                    continue;
                }
                // independence: <y> meets the span only in 0
                let mut cur = ci;
                let mut ok = true;
                for _ in 1..self.orders[k] {
                    if span[cur] {
                        ok = false;
                        break;
                    }
                    cur = self.tg.add_idx(cur, ci);
                }
                if !ok {
                    continue;
                }
                let mut span2 = span.to_vec();
                let mut list2 = Vec::with_capacity(span_list.len() * self.orders[k] as usize);
                let mut shift = 0usize;
                for _ in 0..self.orders[k] {
                    for &s in span_list {
                        let x = self.tg.add_idx(s, shift);
                        span2[x] = true;
                        list2.push(x);
                    }
                    shift = self.tg.add_idx(shift, ci);
                }
                self.chosen.push(y);
                if self.run(k + 1, &span2, &list2) {
                    return true;
                }
                self.chosen.pop();
            }
            false
        }
    }

    let mut span = vec![false; tg.order() as usize];
    span[0] = true;
    let mut search = Search {
        tg,
        form: target.form(),
        orders: &orders,
        qs: &qs,
        candidates: &candidates,
        pair_src: &pair_src,
        chosen: Vec::new(),
    };
    if search.run(0, &span, &[0]) {
        Ok(Some(search.chosen))
    } else {
        Ok(None)
    }
}

/// An isometry given by the images of the source presentation generators.
#[derive(Clone, Debug)]
pub struct MetricIso {
    source: MetricGroup,
    target: MetricGroup,
    images: Vec<GroupElt>,
}

impl MetricIso {
    /// Checked constructor: the images must define a bijective homomorphism
    /// that preserves `q`.
    pub fn new(source: MetricGroup, target: MetricGroup, images: Vec<GroupElt>) -> Result<Self> {
        let iso = MetricIso {
            source,
            target,
            images,
        };
        iso.verify()?;
        Ok(iso)
    }

    pub fn identity(m: &MetricGroup) -> Self {
        MetricIso {
            source: m.clone(),
            target: m.clone(),
            images: m.group().generators(),
        }
    }

    pub fn source(&self) -> &MetricGroup {
        &self.source
    }

    pub fn target(&self) -> &MetricGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElt] {
        &self.images
    }

    pub fn apply(&self, a: &GroupElt) -> Result<GroupElt> {
        self.source.group().check(a)?;
        let terms: Vec<(i64, &GroupElt)> = a
            .coords()
            .iter()
            .zip(&self.images)
            .map(|(&k, y)| (k as i64, y))
            .collect();
        Ok(self.target.group().combine(&terms))
    }

    /// Exhaustive check of well-definedness, bijectivity and `q_t . tau = q_s`.
    pub fn verify(&self) -> Result<()> {
        let sg = self.source.group();
        let tg = self.target.group();
        if self.images.len() != sg.rank() {
            return Err(Error::invalid("wrong number of generator images"));
        }
        for (y, &d) in self.images.iter().zip(sg.factors()) {
            tg.check(y)?;
            if d % tg.order_of(y) != 0 {
                return Err(Error::invalid(format!(
                    "image {y:?} has order not dividing {d}"
                )));
            }
        }
        if sg.order() != tg.order() {
            return Err(Error::invalid("groups of different order"));
        }
        sg.ensure_enumerable()?;
        let mut hit = vec![false; tg.order() as usize];
        for a in sg.elements() {
            let b = self.apply(&a)?;
            let i = tg.index_of(&b);
            if hit[i] {
                return Err(Error::invalid("map is not injective"));
            }
            hit[i] = true;
            if self.source.form().eval_unchecked(&a) != self.target.form().eval_unchecked(&b) {
                return Err(Error::invalid(format!("q not preserved at {a:?}")));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<MetricIso> {
        let sg = self.source.group();
        let tg = self.target.group();
        sg.ensure_enumerable()?;
        let mut pre: Vec<Option<GroupElt>> = vec![None; tg.order() as usize];
        for a in sg.elements() {
            let b = self.apply(&a)?;
            pre[tg.index_of(&b)] = Some(a);
        }
        let images = tg
            .generators()
            .iter()
            .map(|e| {
                pre[tg.index_of(e)]
                    .clone()
                    .ok_or_else(|| Error::invalid("map is not surjective"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricIso {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        })
    }

    pub fn compose(&self, next: &MetricIso) -> Result<MetricIso> {
        if next.source != self.target {
            return Err(Error::invalid("isometries do not compose"));
        }
        let images = self
            .images
            .iter()
            .map(|y| next.apply(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricIso {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        })
    }
}

/// `gcd`-compatible denominators a diagonal value on `Z_d` may carry.
pub fn admissible_denominator(d: u64) -> u64 {
    (d * d).gcd(&(2 * d))
}
