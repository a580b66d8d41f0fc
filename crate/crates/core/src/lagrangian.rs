//! Lagrangian subgroups and Lagrangian extensions of the dual of `Z_n`.
//!
//! A [`LagrangianExtension`] is a metric group `(A, q)` of order `n^2`, the
//! image `v = iota(chi_1)` of the generating character (so `iota(chi_m) = m v`)
//! and an element `x` whose class generates `A / <v>`; the stored
//! identification `A / <v> -> Z_n` sends the class of `x` to 1.
//!
//! Besides the stored identification every extension carries a natural one,
//! `a -> n dq(a, v)`, which is what the product `⊞` pulls back over.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::form::{MetricGroup, MetricIso, QuadraticForm};
use crate::group::{self, FinAbGroup, GroupElt, Projection, Subgroup};
use crate::qmodz::QmodZ;

#[derive(Clone, PartialEq, Eq)]
pub struct LagrangianExtension {
    n: u64,
    metric: MetricGroup,
    iota: GroupElt,
    lift: GroupElt,
}

impl fmt::Debug for LagrangianExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LagrangianExtension")
            .field("n", &self.n)
            .field("group", self.metric.group())
            .field("iota", &self.iota)
            .field("lift", &self.lift)
            .finish()
    }
}

impl LagrangianExtension {
    /// Checks `|A| = n^2`, that `v` has order `n` with `q(v) = 0` (so `<v>`
    /// is Lagrangian), and that `lift` generates `A / <v>`.
    pub fn new(n: u64, metric: MetricGroup, iota: GroupElt, lift: GroupElt) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cycle length must be positive"));
        }
        let g = metric.group();
        g.check(&iota)?;
        g.check(&lift)?;
        if g.order() != n * n {
            return Err(Error::invalid(format!(
                "group of order {} is not an extension of Z{n} (order n^2 = {})",
                g.order(),
                n * n
            )));
        }
        if g.order_of(&iota) != n {
            return Err(Error::invalid(format!(
                "iota image {iota:?} has order {}, expected {n}",
                g.order_of(&iota)
            )));
        }
        if !metric.form().eval_unchecked(&iota).is_zero() {
            return Err(Error::invalid("iota image is not isotropic"));
        }
        let e = LagrangianExtension {
            n,
            metric,
            iota,
            lift,
        };
        let u = e.natural_degree(&e.lift);
        if u.gcd(&n) != 1 {
            return Err(Error::invalid(
                "quotient generator lift does not generate A / iota",
            ));
        }
        Ok(e)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn metric(&self) -> &MetricGroup {
        &self.metric
    }

    pub fn group(&self) -> &FinAbGroup {
        self.metric.group()
    }

    /// `iota(chi_1)`.
    pub fn iota(&self) -> &GroupElt {
        &self.iota
    }

    /// The stored lift of the quotient generator 1.
    pub fn lift(&self) -> &GroupElt {
        &self.lift
    }

    pub fn lagrangian(&self) -> Result<Subgroup> {
        self.group()
            .subgroup_generated(std::slice::from_ref(&self.iota))
    }

    /// `n dq(a, v)` as a residue mod `n`; an isomorphism `A / <v> -> Z_n`.
    pub fn natural_degree(&self, a: &GroupElt) -> u64 {
        let b = self.metric.form().bilinear_unchecked(a, &self.iota);
        let k = b
            .integral_multiple(self.n as i64)
            .expect("pairing with a Lagrangian generator");
        k.rem_euclid(self.n as i64) as u64
    }

    /// Lift of natural degree 1: `u^{-1} x` for the stored lift `x` of natural degree `u`.
    pub fn natural_lift(&self) -> GroupElt {
        let n = self.n as i64;
        let u = self.natural_degree(&self.lift) as i64;
        let inv = mod_inverse(u, n).expect("stored lift has unit degree");
        self.group().scale(&self.lift, inv)
    }

    /// For every element index, the unique `(l, c)` in `[0, n)^2` with
    /// `a = l x + c v`. Fails if `x` does not generate `A / <v>`.
    pub fn coordinates_wrt(&self, x: &GroupElt) -> Result<Vec<(u64, u64)>> {
        let g = self.group();
        g.check(x)?;
        g.ensure_enumerable()?;
        let n = self.n as usize;
        let mut table = vec![None; g.order() as usize];
        let xi = g.index_of(x);
        let vi = g.index_of(&self.iota);
        let mut row = 0usize;
        for l in 0..n {
            let mut cur = row;
            for c in 0..n {
                if table[cur].is_some() {
                    return Err(Error::invalid(format!(
                        "{x:?} does not generate the quotient by iota"
                    )));
                }
                table[cur] = Some((l as u64, c as u64));
                cur = g.add_idx(cur, vi);
            }
            row = g.add_idx(row, xi);
        }
        Ok(table
            .into_iter()
            .map(|t| t.expect("bijective coordinates"))
            .collect())
    }

    /// Stored coordinates `(degree, c)` of every element, by index.
    pub fn coordinates(&self) -> Vec<(u64, u64)> {
        self.coordinates_wrt(&self.lift).expect("validated lift")
    }

    /// Image of `a` under the stored identification `A / <v> -> Z_n`.
    pub fn degree(&self, a: &GroupElt) -> Result<u64> {
        self.group().check(a)?;
        let u = self.natural_degree(&self.lift) as i64;
        let inv = mod_inverse(u, self.n as i64).expect("unit degree");
        Ok((self.natural_degree(a) as i64 * inv).rem_euclid(self.n as i64) as u64)
    }

    /// Elements of stored degree `d`, in index order.
    pub fn degree_part(&self, d: u64) -> Result<Vec<GroupElt>> {
        let d = d % self.n;
        let g = self.group();
        Ok(self
            .coordinates()
            .iter()
            .enumerate()
            .filter(|(_, &(l, _))| l == d)
            .map(|(i, _)| g.element_at(i))
            .collect())
    }

    /// `n^2 q(x)` as an integer, for `x` of any degree. Integral because
    /// `n x` lies in the isotropic subgroup.
    pub fn scaled_value(&self, x: &GroupElt) -> Result<i64> {
        let q = self.metric.q(x)?;
        let nn = (self.n * self.n) as i64;
        q.integral_multiple(nn).ok_or_else(|| {
            Error::InternalConsistency(format!("n^2 q({x:?}) = {nn} * {q} is not an integer"))
        })
    }

    /// `n^2 q(x) mod n` for the stored lift `x`.
    pub fn anomaly_index(&self) -> u64 {
        self.scaled_value(&self.lift)
            .expect("integral for a validated extension")
            .rem_euclid(self.n as i64) as u64
    }

    /// The index relative to the natural identification.
    pub fn natural_anomaly_index(&self) -> u64 {
        self.scaled_value(&self.natural_lift())
            .expect("integral for a validated extension")
            .rem_euclid(self.n as i64) as u64
    }

    /// A lift of natural degree 1 with `q = 0`, if any (first in `x + c v` order).
    pub fn isotropic_lift(&self) -> Option<GroupElt> {
        let g = self.group();
        let mut x = self.natural_lift();
        for _ in 0..self.n {
            if self.metric.form().eval_unchecked(&x).is_zero() {
                return Some(x);
            }
            x = g.add(&x, &self.iota);
        }
        None
    }

    /// A Lagrangian complementary to `iota`: generated by an isotropic lift.
    pub fn complementary_lagrangian(&self) -> Result<Option<Subgroup>> {
        match self.isotropic_lift() {
            None => Ok(None),
            Some(x) => Ok(Some(self.group().subgroup_generated(&[x])?)),
        }
    }

    /// Same underlying extension with a different quotient identification:
    /// the new stored lift is `u x` for a unit `u`.
    pub fn with_lift(&self, lift: GroupElt) -> Result<Self> {
        Self::new(self.n, self.metric.clone(), self.iota.clone(), lift)
    }
}

pub(crate) fn mod_inverse(u: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let e = u.rem_euclid(n).extended_gcd(&n);
    (e.gcd == 1).then(|| e.x.rem_euclid(n))
}

/// `(A, q)` restricted to `C` and pushed down to `C / D`, where `D` must be
/// isotropic and orthogonal to `C`.
fn descend(
    form: &QuadraticForm,
    c: &Subgroup,
    d: &Subgroup,
) -> Result<(QuadraticForm, Projection)> {
    for x in d.generators() {
        if !form.eval_unchecked(x).is_zero() {
            return Err(Error::InternalConsistency(format!(
                "{x:?} is not isotropic"
            )));
        }
        for y in c.generators() {
            if !form.bilinear_unchecked(x, y).is_zero() {
                return Err(Error::InternalConsistency(format!(
                    "{x:?} is not orthogonal to {y:?}"
                )));
            }
        }
    }
    let (target, proj) = group::subquotient(form.group(), c, d)?;
    let q = QuadraticForm::from_fn(target, |b| {
        form.eval_unchecked(&proj.lift(b).expect("target element"))
    })?;
    Ok((q, proj))
}

fn internal(e: Error) -> Error {
    match e {
        Error::ResourceLimit { .. } | Error::InternalConsistency(_) => e,
        other => Error::InternalConsistency(other.to_string()),
    }
}

/// Lagrangian subgroups: `|L|^2 = |A|`, `q|_L = 0`, `L^perp = L`. Sorted by
/// element list; empty when `|A|` is not a perfect square.
pub fn enumerate_lagrangians(m: &MetricGroup) -> Result<Vec<Subgroup>> {
    let g = m.group();
    g.ensure_enumerable()?;
    let order = g.order();
    let r = (order as f64).sqrt().round() as u64;
    if r * r != order {
        return Ok(Vec::new());
    }
    let form = m.form();
    let candidates = group::subgroups_of_order_with(g, r, |h, cand| {
        let y = g.element_at(cand);
        form.eval_unchecked(&y).is_zero()
            && h.generators()
                .iter()
                .all(|x| form.bilinear_unchecked(x, &y).is_zero())
    });
    let mut out = Vec::new();
    for l in candidates {
        if form.is_isotropic(&l) && form.orthogonal_complement(&l)? == l {
            out.push(l.with_canonical_generators());
        }
    }
    Ok(out)
}

/// `(Z_n x Z_n^, q_st(a, chi) = chi(a))` with `iota(chi_1) = (1, 0)` in the
/// first factor and lift `(0, chi_1)`.
pub fn standard_extension(n: u64) -> Result<LagrangianExtension> {
    if n == 0 {
        return Err(Error::invalid("cycle length must be positive"));
    }
    let g = FinAbGroup::from_factors(vec![n, n])?;
    let b = QmodZ::new(1, n as i64);
    let form = QuadraticForm::new(
        g.clone(),
        vec![QmodZ::ZERO; 2],
        vec![vec![QmodZ::ZERO, b], vec![b, QmodZ::ZERO]],
    )?;
    let metric = MetricGroup::new(form)?;
    let iota = g.reduce(&[1, 0]);
    let lift = g.reduce(&[0, 1]);
    LagrangianExtension::new(n, metric, iota, lift)
}

/// Twisted double of `Z_n` with class `j`: generated by `x, y` with
/// `n y = 0`, `n x = 2j y` and `q(a x + b y) = ab/n + j a^2/n^2`.
/// `iota(chi_1) = y`, lift `x`, anomaly index `j`.
///
/// In coordinates `(a, b)` with `0 <= a < n` the law is
/// `(a, b) + (a', b') = (a + a' mod n, b + b' + 2j carry(a, a'))`.
pub fn twisted_double_cyclic(n: u64, j: i64) -> Result<LagrangianExtension> {
    if n == 0 {
        return Err(Error::invalid("cycle length must be positive"));
    }
    let ni = n as i64;
    let j = j.rem_euclid(ni);
    // Z_{n^2} x Z_n modulo the relation (n, -2j)
    let big = FinAbGroup::from_factors(vec![n * n, n])?;
    let b = QmodZ::new(1, ni);
    let form = QuadraticForm::new(
        big.clone(),
        vec![QmodZ::new(j, ni * ni), QmodZ::ZERO],
        vec![vec![QmodZ::ZERO, b], vec![b, QmodZ::ZERO]],
    )
    .map_err(internal)?;
    let rel = big.reduce(&[ni, -2 * j]);
    let d = big.subgroup_generated(&[rel])?;
    let c = Subgroup::whole(&big)?;
    let (q, proj) = descend(&form, &c, &d).map_err(internal)?;
    let metric = MetricGroup::new(q).map_err(internal)?;
    let iota = proj.apply(&big.reduce(&[0, 1]))?;
    let lift = proj.apply(&big.reduce(&[1, 0]))?;
    let e = LagrangianExtension::new(n, metric, iota, lift).map_err(internal)?;
    if e.anomaly_index() as i64 != j {
        return Err(Error::InternalConsistency(format!(
            "twisted double has index {} instead of {j}",
            e.anomaly_index()
        )));
    }
    Ok(e)
}

/// The form `s x^2/(9m) - s y^2/m` on `Z_{9m} + Z_m`, literally.
/// Nondegenerate for odd `m` only.
pub fn plus_minus_literal_form(m: u64, s: i64) -> Result<QuadraticForm> {
    if m == 0 || s.abs() != 1 {
        return Err(Error::invalid("need m >= 1 and sign +-1"));
    }
    let mi = m as i64;
    QuadraticForm::diagonal(
        FinAbGroup::from_factors(vec![9 * m, m])?,
        vec![QmodZ::new(s, 9 * mi), QmodZ::new(-s, mi)],
    )
}

/// Extension of `Z_{3m}` on `Z_{9m} + Z_m` with `iota(chi_1) = (9m - 3, 1)`,
/// lift `(1, 0)` and `q(1, 0) = s/(9m)`, so the index is `s m mod 3m`.
///
/// The form is `s a^2/(9m) + (3g - s) b^2/m + g ab/m` for the smallest
/// `g >= 0` giving a nondegenerate form. `g = 0` is the orthogonal sum
/// `s x^2/(9m) - s y^2/m`, which works for odd `m`; for even `m` that sum is
/// degenerate and a cross term is needed.
pub fn plus_minus_extension(m: u64, s: i64) -> Result<LagrangianExtension> {
    if m == 0 || s.abs() != 1 {
        return Err(Error::invalid("need m >= 1 and sign +-1"));
    }
    let mi = m as i64;
    let g = FinAbGroup::from_factors(vec![9 * m, m])?;
    for cross in 0..mi {
        let gamma = QmodZ::new(cross, mi);
        let form = QuadraticForm::new(
            g.clone(),
            vec![QmodZ::new(s, 9 * mi), QmodZ::new(3 * cross - s, mi)],
            vec![vec![QmodZ::ZERO, gamma], vec![gamma, QmodZ::ZERO]],
        )
        .map_err(internal)?;
        let metric = match MetricGroup::new(form) {
            Ok(m) => m,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(internal(e)),
        };
        let iota = g.reduce(&[9 * mi - 3, 1]);
        let lift = g.reduce(&[1, 0]);
        return LagrangianExtension::new(3 * m, metric, iota, lift).map_err(internal);
    }
    Err(Error::InternalConsistency(format!(
        "no nondegenerate form of the plus-minus family for m = {m}, s = {s}"
    )))
}

/// `E1 ⊞ E2`: inside `A1 + A2` take `C = {(a1, a2) : deg(a1) = deg(a2)}` for
/// the natural degrees, divide by the antidiagonal `<(v1, -v2)>`, and set
/// `iota = [(v1, 0)]` with lift `[(x1, x2)]` for natural-degree-1 lifts `x_i`.
///
/// The natural identification is used because it is intrinsic to `(A, q, iota)`;
/// pulling back over arbitrary stored identifications does not in general
/// give a well-defined form on the quotient.
pub fn boxplus(e1: &LagrangianExtension, e2: &LagrangianExtension) -> Result<LagrangianExtension> {
    if e1.n != e2.n {
        return Err(Error::invalid(format!(
            "cannot multiply extensions of Z{} and Z{}",
            e1.n, e2.n
        )));
    }
    let n = e1.n;
    let form = e1.metric.form().direct_sum(e2.metric.form());
    let g = form.group().clone();
    let g1 = e1.group();
    let g2 = e2.group();
    let v1 = g.pair(&e1.iota, &g2.zero());
    let v2 = g.pair(&g1.zero(), &e2.iota);
    let x = g.pair(&e1.natural_lift(), &e2.natural_lift());
    let c = g.subgroup_generated(&[v1.clone(), v2.clone(), x.clone()])?;
    let anti = g.pair(&e1.iota, &g2.neg(&e2.iota));
    let d = g.subgroup_generated(&[anti])?;
    let (q, proj) = descend(&form, &c, &d).map_err(internal)?;
    let metric = MetricGroup::new(q).map_err(internal)?;
    let iota = proj.apply(&v1)?;
    let lift = proj.apply(&x)?;
    LagrangianExtension::new(n, metric, iota, lift).map_err(internal)
}

/// An isometry `A1 -> A2` carrying `iota1(chi_1)` to `iota2(chi_1)`.
///
/// With `x1` of natural degree 1 and `n x1 = s v1`, any `y` in `A2` with
/// `q(y) = q(x1)`, natural degree 1 and `n y = s v2` extends uniquely by
/// `l x1 + c v1 -> l y + c v2`; the first such `y` in index order is used.
pub fn find_extension_isomorphism(
    e1: &LagrangianExtension,
    e2: &LagrangianExtension,
) -> Result<Option<MetricIso>> {
    if e1.n != e2.n {
        return Ok(None);
    }
    let n = e1.n;
    let g1 = e1.group();
    let g2 = e2.group();
    g2.ensure_enumerable()?;
    let x1 = e1.natural_lift();
    let coords = e1.coordinates_wrt(&x1)?;
    let nx1 = g1.scale(&x1, n as i64);
    let s = coords[g1.index_of(&nx1)].1;
    let target_q = e1.metric.form().eval_unchecked(&x1);
    let target_n = g2.scale(&e2.iota, s as i64);
    let y = g2.elements().find(|y| {
        e2.metric.form().eval_unchecked(y) == target_q
            && e2.natural_degree(y) == 1 % n
            && g2.scale(y, n as i64) == target_n
    });
    let Some(y) = y else {
        return Ok(None);
    };
    let images = g1
        .generators()
        .iter()
        .map(|e| {
            let (l, c) = coords[g1.index_of(e)];
            g2.combine(&[(l as i64, &y), (c as i64, &e2.iota)])
        })
        .collect();
    let iso = MetricIso::new(e1.metric.clone(), e2.metric.clone(), images).map_err(internal)?;
    Ok(Some(iso))
}

/// The constructive trivialization: given a lift `x` of natural degree 1 with
/// `q(x) = 0`, put `chi = dq(v, x)` (the character with `chi(1) = 1/n`) and
/// map `m v + l x -> (m, l chi)` in the standard extension. `None` when no
/// such lift exists, which happens exactly for nonzero anomaly index.
pub fn trivialize(e: &LagrangianExtension) -> Result<Option<MetricIso>> {
    let Some(x) = e.isotropic_lift() else {
        return Ok(None);
    };
    let n = e.n;
    let st = standard_extension(n)?;
    let sg = st.group();
    let g = e.group();
    let coords = e.coordinates_wrt(&x)?;
    let chi = e.metric.form().bilinear_unchecked(&e.iota, &x);
    let u = chi.integral_multiple(n as i64).expect("character of Z_n") as u64;
    let images = g
        .generators()
        .iter()
        .map(|a| {
            let (l, m) = coords[g.index_of(a)];
            sg.reduce(&[m as i64, (l * u) as i64])
        })
        .collect();
    let iso = MetricIso::new(e.metric.clone(), st.metric.clone(), images).map_err(internal)?;
    Ok(Some(iso))
}

/// All invariant-factor lists `d_1 | ... | d_r` (each `> 1`) with product
/// `order` and `r <= max_rank`.
pub fn invariant_factor_lists(order: u64, max_rank: usize) -> Vec<Vec<u64>> {
    fn go(rest: u64, min: u64, slots: usize, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        // acc is ascending under divisibility: the next factor is a multiple of the last
        let mut d = min;
        while d <= rest {
            if rest.is_multiple_of(d) && d.is_multiple_of(min.max(1)) && d > 1 {
                // remaining factors must be multiples of d
                let r = rest / d;
                if r == 1 || r.is_multiple_of(d) {
                    acc.push(d);
                    go(r, d, slots - 1, acc, out);
                    acc.pop();
                }
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    go(order, 1, max_rank, &mut Vec::new(), &mut out);
    out
}

/// Every nondegenerate quadratic form on every invariant-factor group of the
/// given order with at most `max_rank` factors, one per presentation datum.
pub fn all_metric_groups(order: u64, max_rank: usize) -> Result<Vec<MetricGroup>> {
    let mut out = Vec::new();
    for factors in invariant_factor_lists(order, max_rank) {
        let g = FinAbGroup::from_factors(factors.clone())?;
        g.ensure_enumerable()?;
        let r = factors.len();
        let diag_choices: Vec<Vec<QmodZ>> = factors
            .iter()
            .map(|&d| {
                let den = (d * d).gcd(&(2 * d)) as i64;
                (0..den).map(|k| QmodZ::new(k, den)).collect()
            })
            .collect();
        let mut pair_slots = Vec::new();
        for i in 0..r {
            for j in (i + 1)..r {
                let den = factors[i].gcd(&factors[j]) as i64;
                pair_slots.push((
                    i,
                    j,
                    (0..den).map(|k| QmodZ::new(k, den)).collect::<Vec<_>>(),
                ));
            }
        }
        let mut choices: Vec<usize> = diag_choices.iter().map(Vec::len).collect();
        choices.extend(pair_slots.iter().map(|s| s.2.len()));
        let mut idx = vec![0usize; choices.len()];
        'forms: loop {
            let diag: Vec<QmodZ> = (0..r).map(|i| diag_choices[i][idx[i]]).collect();
            let mut pairing = vec![vec![QmodZ::ZERO; r]; r];
            for (k, (i, j, vals)) in pair_slots.iter().enumerate() {
                let v = vals[idx[r + k]];
                pairing[*i][*j] = v;
                pairing[*j][*i] = v;
            }
            let form = QuadraticForm::new(g.clone(), diag, pairing)?;
            match MetricGroup::new(form) {
                Ok(m) => out.push(m),
                Err(Error::Degenerate(_)) => {}
                Err(e) => return Err(e),
            }
            let mut p = 0;
            loop {
                if p == idx.len() {
                    break 'forms;
                }
                idx[p] += 1;
                if idx[p] < choices[p] {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
    Ok(out)
}

/// Every Lagrangian extension of `Z_n` on the metric groups of
/// [`all_metric_groups`]: each cyclic Lagrangian, each generator `v` of it as
/// `iota(chi_1)`, and each quotient identification (one lift per unit).
pub fn all_lagrangian_extensions(n: u64, max_rank: usize) -> Result<Vec<LagrangianExtension>> {
    let mut out = Vec::new();
    for m in all_metric_groups(n * n, max_rank)? {
        let g = m.group().clone();
        for l in enumerate_lagrangians(&m)? {
            let gens: Vec<GroupElt> = l.elements().filter(|v| g.order_of(v) == n).collect();
            for v in gens {
                let base = match first_lift(&m, &v, n) {
                    Some(x) => x,
                    None => continue,
                };
                let e0 = LagrangianExtension::new(n, m.clone(), v.clone(), base)?;
                let x1 = e0.natural_lift();
                for u in 1..n.max(2) {
                    if u.gcd(&n) != 1 {
                        continue;
                    }
                    let lift = g.scale(&x1, u as i64);
                    out.push(e0.with_lift(lift)?);
                    if n == 1 {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn first_lift(m: &MetricGroup, v: &GroupElt, n: u64) -> Option<GroupElt> {
    m.group().elements().find(|a| {
        m.form()
            .bilinear_unchecked(a, v)
            .integral_multiple(n as i64)
            .is_some_and(|k| (k.rem_euclid(n as i64) as u64).gcd(&n) == 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0() -> MetricGroup {
        standard_extension(3).unwrap().metric().clone()
    }

    #[test]
    fn lagrangian_examples() {
        let ls = enumerate_lagrangians(&q0()).unwrap();
        assert_eq!(ls.len(), 2);
        let g = q0().group().clone();
        let a = g
            .subgroup_generated(&[g.element(&[1, 0]).unwrap()])
            .unwrap();
        let b = g
            .subgroup_generated(&[g.element(&[0, 1]).unwrap()])
            .unwrap();
        assert!(ls.contains(&a) && ls.contains(&b));

        let q1 = MetricGroup::cyclic(9, 4, 9).unwrap();
        let ls = enumerate_lagrangians(&q1).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(
            ls[0].elements().map(|e| e.coords()[0]).collect::<Vec<_>>(),
            vec![0, 3, 6]
        );
        assert!(
            enumerate_lagrangians(&MetricGroup::cyclic(2, 1, 4).unwrap())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn standard_extension_examples() {
        let e = standard_extension(3).unwrap();
        assert_eq!(e.anomaly_index(), 0);
        let e1 = standard_extension(1).unwrap();
        assert_eq!(e1.group().order(), 1);
        let e2 = standard_extension(2).unwrap();
        let spec: Vec<String> = e2
            .metric()
            .twist_spectrum()
            .unwrap()
            .iter()
            .map(|q| q.to_string())
            .collect();
        assert_eq!(spec, ["0", "0", "0", "1/2"]);
    }

    #[test]
    fn twisted_double_table() {
        let cases = [(0, None), (1, Some((4, 9))), (2, Some((8, 9)))];
        for (j, cyc) in cases {
            let e = twisted_double_cyclic(3, j).unwrap();
            assert_eq!(e.anomaly_index(), j as u64);
            let target = match cyc {
                None => q0(),
                Some((a, d)) => MetricGroup::cyclic(9, a, d).unwrap(),
            };
            let iso = e.metric().find_isomorphism(&target).unwrap();
            assert!(iso.is_some(), "j = {j}");
        }
    }

    #[test]
    fn anomaly_index_examples() {
        // (Z9, 8x^2/9), iota(chi_1) = 3, lift 1
        let m = MetricGroup::cyclic(9, 8, 9).unwrap();
        let g = m.group().clone();
        let e = LagrangianExtension::new(3, m, g.element(&[3]).unwrap(), g.element(&[1]).unwrap())
            .unwrap();
        assert_eq!(e.anomaly_index(), 2);
        // A_- for m = 3
        let e = plus_minus_extension(3, -1).unwrap();
        assert_eq!(e.metric().q(e.lift()).unwrap(), QmodZ::new(-1, 27));
        assert_eq!(e.anomaly_index(), 6);
    }

    #[test]
    fn literal_plus_minus_form_is_degenerate_for_even_m() {
        for m in [1, 3, 5] {
            assert!(plus_minus_literal_form(m, 1)
                .unwrap()
                .is_nondegenerate()
                .unwrap());
        }
        assert!(!plus_minus_literal_form(2, 1)
            .unwrap()
            .is_nondegenerate()
            .unwrap());
        for m in 1..=4 {
            for s in [1, -1] {
                let e = plus_minus_extension(m, s).unwrap();
                assert_eq!(
                    e.anomaly_index() as i64,
                    (s * m as i64).rem_euclid(3 * m as i64)
                );
            }
        }
    }

    #[test]
    fn boxplus_example_relations() {
        for m in 1..=3 {
            let p = plus_minus_extension(m, 1).unwrap();
            let q = plus_minus_extension(m, -1).unwrap();
            let z = standard_extension(3 * m).unwrap();
            assert!(find_extension_isomorphism(&boxplus(&p, &q).unwrap(), &z)
                .unwrap()
                .is_some());
            assert!(find_extension_isomorphism(&boxplus(&p, &p).unwrap(), &q)
                .unwrap()
                .is_some());
            assert!(find_extension_isomorphism(&boxplus(&q, &q).unwrap(), &p)
                .unwrap()
                .is_some());
            assert!(find_extension_isomorphism(&p, &q).unwrap().is_none());
        }
    }

    #[test]
    fn standard_is_unit() {
        let e = twisted_double_cyclic(4, 3).unwrap();
        let prod = boxplus(&e, &standard_extension(4).unwrap()).unwrap();
        let iso = find_extension_isomorphism(&prod, &e).unwrap().unwrap();
        iso.verify().unwrap();
        assert_eq!(iso.apply(prod.iota()).unwrap(), *e.iota());
        assert!(boxplus(&e, &standard_extension(3).unwrap()).is_err());
    }

    #[test]
    fn trivialize_examples() {
        let e = standard_extension(5).unwrap();
        let iso = trivialize(&e).unwrap().unwrap();
        for a in e.group().generators() {
            assert_eq!(iso.apply(&a).unwrap(), a);
        }
        assert!(trivialize(&twisted_double_cyclic(3, 1).unwrap())
            .unwrap()
            .is_none());
        let t = trivialize(&twisted_double_cyclic(6, 0).unwrap())
            .unwrap()
            .unwrap();
        t.verify().unwrap();
    }

    #[test]
    fn invariant_factor_lists_examples() {
        assert_eq!(
            invariant_factor_lists(16, 3),
            vec![vec![2, 2, 4], vec![2, 8], vec![4, 4], vec![16]]
        );
        assert_eq!(
            invariant_factor_lists(36, 3),
            vec![vec![2, 18], vec![3, 12], vec![6, 6], vec![36]]
        );
        assert_eq!(invariant_factor_lists(1, 3), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn exhaustive_small_extensions() {
        for n in 1..=3 {
            let all = all_lagrangian_extensions(n, 3).unwrap();
            assert!(!all.is_empty());
            for e in all {
                assert_eq!(trivialize(&e).unwrap().is_some(), e.anomaly_index() == 0);
            }
        }
    }
}
