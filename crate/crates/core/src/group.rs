//! Finite abelian groups presented as products of cyclic factors.
//!
//! A [`FinAbGroup`] keeps the factorization it was built with; elements are
//! coordinate tuples against that factorization. Presentations such as
//! `Z_27 (+) Z_3` are therefore kept verbatim, and [`FinAbGroup::canonicalize`]
//! produces the invariant-factor form together with an explicit isomorphism.
//!
//! Everything that walks the element set goes through
//! [`FinAbGroup::ensure_enumerable`], which enforces a process-wide bound on
//! the group order (see [`set_max_order`] and [`with_max_order`]).

use std::cell::Cell;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::qmodz::QmodZ;

pub const DEFAULT_MAX_ORDER: u64 = 20_000;

static MAX_ORDER: AtomicU64 = AtomicU64::new(DEFAULT_MAX_ORDER);

thread_local! {
    static SCOPED_MAX_ORDER: Cell<Option<u64>> = const { Cell::new(None) };
}

/// Current bound on the order of groups whose elements get enumerated: the
/// innermost [`with_max_order`] scope on this thread, else the process-wide value.
pub fn max_order() -> u64 {
    SCOPED_MAX_ORDER
        .with(Cell::get)
        .unwrap_or_else(|| MAX_ORDER.load(Ordering::Relaxed))
}

pub fn set_max_order(bound: u64) {
    MAX_ORDER.store(bound.max(1), Ordering::Relaxed);
}

/// Run `f` with the bound overridden on the current thread only.
pub fn with_max_order<T>(bound: u64, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<u64>);
    impl Drop for Restore {
        fn drop(&mut self) {
            SCOPED_MAX_ORDER.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(SCOPED_MAX_ORDER.with(|c| c.replace(Some(bound.max(1)))));
    f()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElt(Vec<u64>);

impl GroupElt {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    /// Unchecked constructor; coordinates must already be reduced.
    #[cfg(test)]
    pub(crate) fn from_reduced(coords: Vec<u64>) -> Self {
        GroupElt(coords)
    }
}

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FinAbGroup {
    /// Product of cyclic groups of the given orders. An empty list gives the
    /// trivial group; any order `<= 0` is rejected.
    pub fn new(orders: &[i64]) -> Result<Self> {
        let mut factors = Vec::with_capacity(orders.len());
        for &d in orders {
            if d <= 0 {
                return Err(Error::invalid(format!("cyclic factor of order {d}")));
            }
            factors.push(d as u64);
        }
        Ok(FinAbGroup { factors })
    }

    pub fn from_factors(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::invalid("cyclic factor of order 0"));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        FinAbGroup { factors: vec![n] }
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    pub fn ensure_enumerable(&self) -> Result<()> {
        let order = self.order();
        let bound = max_order();
        if order > bound {
            Err(Error::ResourceLimit { order, bound })
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> GroupElt {
        GroupElt(vec![0; self.factors.len()])
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElt {
        let mut c = vec![0; self.factors.len()];
        c[i] = 1 % self.factors[i];
        GroupElt(c)
    }

    pub fn generators(&self) -> Vec<GroupElt> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Validated element; every coordinate must lie in `0..d_i`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElt> {
        if coords.len() != self.factors.len() {
            return Err(Error::invalid(format!(
                "element {coords:?} has {} coordinates, group {self:?} has {} factors",
                coords.len(),
                self.factors.len()
            )));
        }
        let mut out = Vec::with_capacity(coords.len());
        for (&c, &d) in coords.iter().zip(&self.factors) {
            if c < 0 || c as u64 >= d {
                return Err(Error::invalid(format!(
                    "coordinate {c} out of range for Z{d}"
                )));
            }
            out.push(c as u64);
        }
        Ok(GroupElt(out))
    }

    /// Element with coordinates reduced modulo the factor orders.
    pub fn reduce(&self, coords: &[i64]) -> GroupElt {
        assert_eq!(coords.len(), self.factors.len());
        GroupElt(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        )
    }

    pub fn contains(&self, a: &GroupElt) -> bool {
        a.0.len() == self.factors.len() && a.0.iter().zip(&self.factors).all(|(c, d)| c < d)
    }

    pub(crate) fn check(&self, a: &GroupElt) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "element {a:?} does not belong to {self:?}"
            )))
        }
    }

    pub fn add(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        GroupElt(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElt) -> GroupElt {
        GroupElt(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        self.add(a, &self.neg(b))
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, a: &GroupElt, k: i64) -> GroupElt {
        GroupElt(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| (x as i128 * k as i128).rem_euclid(d as i128) as u64)
                .collect(),
        )
    }

    /// Linear combination `sum k_i * a_i`.
    pub fn combine(&self, terms: &[(i64, &GroupElt)]) -> GroupElt {
        terms.iter().fold(self.zero(), |acc, (k, a)| {
            self.add(&acc, &self.scale(a, *k))
        })
    }

    pub fn order_of(&self, a: &GroupElt) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// Mixed-radix index; the first coordinate is most significant, so index
    /// order agrees with lexicographic order of coordinates.
    pub fn index_of(&self, a: &GroupElt) -> usize {
        a.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElt {
        let mut c = vec![0; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            let d = self.factors[i] as usize;
            c[i] = (idx % d) as u64;
            idx /= d;
        }
        GroupElt(c)
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        let (mut a, mut b) = (a, b);
        for &d in self.factors.iter().rev() {
            let d = d as usize;
            let s = (a % d + b % d) % d;
            out += s * place;
            place *= d;
            a /= d;
            b /= d;
        }
        out
    }

    /// All elements in index order. Callers enforce the enumeration bound.
    pub fn elements(&self) -> impl Iterator<Item = GroupElt> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        FinAbGroup { factors }
    }

    pub fn inject_left(&self, other: &FinAbGroup, a: &GroupElt) -> GroupElt {
        let mut c = a.0.clone();
        c.extend(std::iter::repeat_n(0, other.rank()));
        GroupElt(c)
    }

    pub fn pair(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        let mut c = a.0.clone();
        c.extend_from_slice(&b.0);
        GroupElt(c)
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` (all `> 1`), computed from the
    /// prime-power decomposition of the presentation without enumeration.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in &self.factors {
            for (p, pk) in prime_powers(d) {
                by_prime.entry(p).or_default().push(pk);
            }
        }
        let r = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut inv = vec![1u64; r];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, pk) in powers.iter().enumerate() {
                inv[r - 1 - i] *= pk;
            }
        }
        inv
    }

    pub fn is_canonical(&self) -> bool {
        self.factors == self.invariant_factors()
    }

    /// Invariant-factor form plus an isomorphism from `self` onto it.
    pub fn canonicalize(&self) -> Result<(FinAbGroup, Projection)> {
        quotient(self, &Subgroup::trivial(self))
    }

    /// Value of the character indexed by `chi` at `x`: `sum chi_i x_i / d_i`.
    pub fn dual_character(&self, chi: &GroupElt, x: &GroupElt) -> Result<QmodZ> {
        self.check(chi)?;
        self.check(x)?;
        Ok(chi
            .0
            .iter()
            .zip(&x.0)
            .zip(&self.factors)
            .map(|((&c, &y), &d)| QmodZ::new(((c * y) % d) as i64, d as i64))
            .sum())
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[GroupElt]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        self.ensure_enumerable()?;
        let mut members = vec![0usize];
        let mut inside = vec![false; self.order() as usize];
        inside[0] = true;
        for g in gens {
            extend_by(self, &mut members, &mut inside, self.index_of(g));
        }
        members.sort_unstable();
        Ok(Subgroup {
            parent: self.clone(),
            members,
            generators: gens.to_vec(),
        })
    }

    /// Every subgroup of order `m`, sorted by element list.
    pub fn all_subgroups_of_order(&self, m: u64) -> Result<Vec<Subgroup>> {
        self.ensure_enumerable()?;
        Ok(subgroups_of_order_with(self, m, |_, _| true))
    }
}

fn prime_powers(mut d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            let mut pk = 1;
            while d.is_multiple_of(p) {
                d /= p;
                pk *= p;
            }
            out.push((p, pk));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, d));
    }
    out
}

/// `H <- H + <g>` in place, by adjoining cosets `H + k g`.
fn extend_by(g: &FinAbGroup, members: &mut Vec<usize>, inside: &mut [bool], gen: usize) {
    if inside[gen] {
        return;
    }
    let base = members.clone();
    let mut shift = gen;
    while !inside[shift] {
        for &h in &base {
            let x = g.add_idx(h, shift);
            inside[x] = true;
            members.push(x);
        }
        shift = g.add_idx(shift, gen);
    }
}

/// Breadth-first enumeration of the subgroups whose order divides `m`,
/// extending one generator at a time. `admissible(H, g)` may veto adjoining
/// `g` to `H` (used to restrict to isotropic subgroups). Returns the
/// subgroups of order exactly `m`.
pub(crate) fn subgroups_of_order_with(
    g: &FinAbGroup,
    m: u64,
    admissible: impl Fn(&Subgroup, usize) -> bool,
) -> Vec<Subgroup> {
    let order = g.order();
    if m == 0 || !order.is_multiple_of(m) {
        return Vec::new();
    }
    let n = order as usize;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let trivial = Subgroup::trivial(g);
    seen.insert(trivial.members.clone());
    let mut queue = vec![trivial];
    let mut found = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let h = queue[head].clone();
        head += 1;
        if h.order() == m {
            found.push(h);
            continue;
        }
        let mut inside = vec![false; n];
        for &x in &h.members {
            inside[x] = true;
        }
        let hord = h.order();
        for cand in 0..n {
            if inside[cand] {
                continue;
            }
            // order of cand modulo H
            let mut k = 1u64;
            let mut cur = cand;
            while !inside[cur] {
                cur = g.add_idx(cur, cand);
                k += 1;
            }
            if !m.is_multiple_of(hord * k) || !admissible(&h, cand) {
                continue;
            }
            let mut members = h.members.clone();
            let mut inside2 = inside.clone();
            extend_by(g, &mut members, &mut inside2, cand);
            members.sort_unstable();
            if seen.insert(members.clone()) {
                let mut generators = h.generators.clone();
                generators.push(g.element_at(cand));
                queue.push(Subgroup {
                    parent: g.clone(),
                    members,
                    generators,
                });
            }
        }
    }
    found.sort_by(|a, b| a.members.cmp(&b.members));
    found
}

#[derive(Clone)]
pub struct Subgroup {
    parent: FinAbGroup,
    members: Vec<usize>,
    generators: Vec<GroupElt>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}> (order {})", self.generators, self.order())
    }
}

impl Subgroup {
    pub fn trivial(parent: &FinAbGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: vec![0],
            generators: vec![],
        }
    }

    pub fn whole(parent: &FinAbGroup) -> Result<Self> {
        parent.subgroup_generated(&parent.generators())
    }

    /// Build from an explicit element list, checking closure.
    pub fn from_elements(parent: &FinAbGroup, elements: &[GroupElt]) -> Result<Self> {
        parent.ensure_enumerable()?;
        let mut inside = vec![false; parent.order() as usize];
        for e in elements {
            parent.check(e)?;
            inside[parent.index_of(e)] = true;
        }
        if !inside[0] {
            return Err(Error::invalid("subset does not contain the identity"));
        }
        let members: Vec<usize> = (0..inside.len()).filter(|&i| inside[i]).collect();
        for &a in &members {
            for &b in &members {
                if !inside[parent.add_idx(a, b)] {
                    return Err(Error::invalid("subset is not closed under addition"));
                }
            }
        }
        let generators = members.iter().map(|&i| parent.element_at(i)).collect();
        let mut h = Subgroup {
            parent: parent.clone(),
            members,
            generators,
        };
        h.generators = h.presentation().1;
        Ok(h)
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElt] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, a: &GroupElt) -> bool {
        self.parent.contains(a) && self.members.binary_search(&self.parent.index_of(a)).is_ok()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElt> + '_ {
        self.members.iter().map(|&i| self.parent.element_at(i))
    }

    /// Intrinsic invariant-factor presentation: the abstract group and, in the
    /// same order, elements of the parent generating the corresponding factors.
    pub fn presentation(&self) -> (FinAbGroup, Vec<GroupElt>) {
        let dec = decompose(&self.parent, &self.members, &|i| i).expect("subgroup decomposition");
        let factors: Vec<u64> = dec.orders.iter().rev().copied().collect();
        let basis = dec
            .basis
            .iter()
            .rev()
            .map(|&i| self.parent.element_at(i))
            .collect();
        (FinAbGroup { factors }, basis)
    }

    /// Replace the generator list by a minimal invariant-factor basis.
    pub fn with_canonical_generators(mut self) -> Self {
        self.generators = self.presentation().1;
        self
    }
}

/// A homomorphism given by a table, as produced by [`quotient`]: maps each
/// element of its domain (a subgroup of `source`) to an element of `target`.
#[derive(Clone, Debug)]
pub struct Projection {
    source: FinAbGroup,
    target: FinAbGroup,
    /// For every source index: coset representative, or `usize::MAX` outside the domain.
    coset_rep: Vec<usize>,
    /// Target coordinates indexed by source index of a coset representative.
    rep_image: Vec<Option<GroupElt>>,
    /// Source elements mapping to the standard generators of `target`.
    lifts: Vec<GroupElt>,
}

impl Projection {
    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn apply(&self, a: &GroupElt) -> Result<GroupElt> {
        self.source.check(a)?;
        let rep = self.coset_rep[self.source.index_of(a)];
        if rep == usize::MAX {
            return Err(Error::invalid(format!("{a:?} is outside the domain")));
        }
        Ok(self.rep_image[rep].clone().expect("representative image"))
    }

    /// Preimages of the target's standard generators.
    pub fn lifts(&self) -> &[GroupElt] {
        &self.lifts
    }

    /// A preimage of `b`.
    pub fn lift(&self, b: &GroupElt) -> Result<GroupElt> {
        self.target.check(b)?;
        let terms: Vec<(i64, &GroupElt)> = b
            .coords()
            .iter()
            .zip(&self.lifts)
            .map(|(&c, l)| (c as i64, l))
            .collect();
        Ok(self.source.combine(&terms))
    }
}

/// `G / H` in invariant-factor form with its projection.
pub fn quotient(g: &FinAbGroup, h: &Subgroup) -> Result<(FinAbGroup, Projection)> {
    if h.parent() != g {
        return Err(Error::invalid("subgroup belongs to a different group"));
    }
    let whole = Subgroup {
        parent: g.clone(),
        members: (0..g.order() as usize).collect(),
        generators: g.generators(),
    };
    subquotient(g, &whole, h)
}

/// `C / D` for subgroups `D <= C <= G`, in invariant-factor form, with the
/// projection defined on `C`.
pub fn subquotient(g: &FinAbGroup, c: &Subgroup, d: &Subgroup) -> Result<(FinAbGroup, Projection)> {
    g.ensure_enumerable()?;
    if c.parent() != g || d.parent() != g {
        return Err(Error::invalid("subgroup belongs to a different group"));
    }
    let n = g.order() as usize;
    let mut in_d = vec![false; n];
    for &x in &d.members {
        in_d[x] = true;
    }
    for &a in &d.members {
        if c.members.binary_search(&a).is_err() {
            return Err(Error::invalid(
                "denominator is not contained in the numerator",
            ));
        }
    }
    for &a in &d.members {
        for &b in &d.members {
            if !in_d[g.add_idx(a, b)] {
                return Err(Error::invalid("quotient by a subset that is not closed"));
            }
        }
    }
    let mut coset_rep = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for &x in &c.members {
        if coset_rep[x] != usize::MAX {
            continue;
        }
        reps.push(x);
        for &h in &d.members {
            coset_rep[g.add_idx(x, h)] = x;
        }
    }
    let norm = |i: usize| coset_rep[i];
    let dec = decompose(g, &reps, &norm)?;
    let r = dec.orders.len();
    // decomposition orders are descending; the target lists them ascending
    let factors: Vec<u64> = dec.orders.iter().rev().copied().collect();
    let target = FinAbGroup { factors };
    let mut rep_image = vec![None; n];
    for (&rep, coords) in &dec.coords {
        let rev: Vec<u64> = (0..r).map(|i| coords[r - 1 - i]).collect();
        rep_image[rep] = Some(GroupElt(rev));
    }
    let lifts = dec.basis.iter().rev().map(|&i| g.element_at(i)).collect();
    Ok((
        target.clone(),
        Projection {
            source: g.clone(),
            target,
            coset_rep,
            rep_image,
            lifts,
        },
    ))
}

struct Decomposition {
    basis: Vec<usize>,
    orders: Vec<u64>,
    coords: BTreeMap<usize, Vec<u64>>,
}

/// Invariant basis of the abstract group whose elements are `reps` (indices
/// of `g`, closed under `norm(g.add)`), by greedy extraction: at each step take
/// an element of maximal order modulo the span so far, then correct it by an
/// element of the span so its order equals its order in the quotient.
fn decompose(
    g: &FinAbGroup,
    reps: &[usize],
    norm: &dyn Fn(usize) -> usize,
) -> Result<Decomposition> {
    let n = g.order() as usize;
    let add = |a: usize, b: usize| norm(g.add_idx(a, b));
    let zero = norm(0);
    let mut span_coords: Vec<Option<Vec<u64>>> = vec![None; n];
    span_coords[zero] = Some(vec![]);
    let mut span = vec![zero];
    let mut basis: Vec<usize> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();

    while span.len() < reps.len() {
        let mut best: Option<(u64, usize)> = None;
        for &y in reps {
            if span_coords[y].is_some() {
                continue;
            }
            let mut k = 1u64;
            let mut cur = y;
            while span_coords[cur].is_none() {
                cur = add(cur, y);
                k += 1;
            }
            if best.is_none_or(|(bk, _)| k > bk) {
                best = Some((k, y));
            }
        }
        let (d, y0) = best.expect("element outside span");
        // d * y0 lies in the span; read off its coordinates
        let mut dy = zero;
        for _ in 0..d {
            dy = add(dy, y0);
        }
        let t = span_coords[dy].clone().expect("multiple in span");
        let mut y = y0;
        for (j, &tj) in t.iter().enumerate() {
            if tj % d != 0 {
                return Err(Error::InternalConsistency(format!(
                    "greedy basis correction: coefficient {tj} not divisible by {d}"
                )));
            }
            let steps = (orders[j] - (tj / d) % orders[j]) % orders[j];
            for _ in 0..steps {
                y = add(y, basis[j]);
            }
        }
        let old: Vec<Vec<u64>> = span
            .iter()
            .map(|&s| span_coords[s].clone().unwrap())
            .collect();
        let mut new_span = Vec::with_capacity(span.len() * d as usize);
        let mut shift = zero;
        for k in 0..d {
            for (&s, c0) in span.iter().zip(&old) {
                let x = add(s, shift);
                let mut c = c0.clone();
                c.push(k);
                if k > 0 && span_coords[x].is_some() {
                    return Err(Error::InternalConsistency(
                        "greedy basis element is not independent".into(),
                    ));
                }
                span_coords[x] = Some(c);
                new_span.push(x);
            }
            shift = add(shift, y);
        }
        if shift != zero {
            return Err(Error::InternalConsistency(
                "corrected basis element has the wrong order".into(),
            ));
        }
        span = new_span;
        basis.push(y);
        orders.push(d);
    }
    let coords = span
        .iter()
        .map(|&x| (x, span_coords[x].clone().unwrap()))
        .collect();
    Ok(Decomposition {
        basis,
        orders,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(ds: &[i64]) -> FinAbGroup {
        FinAbGroup::new(ds).unwrap()
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(grp(&[3, 3]).order(), 9);
        assert_eq!(grp(&[9]).factors(), &[9]);
        let t = grp(&[1]);
        assert_eq!(t.order(), 1);
        assert_eq!(t.elements().count(), 1);
        assert_eq!(t.invariant_factors(), Vec::<u64>::new());
        assert_eq!(grp(&[]).order(), 1);
        assert!(matches!(
            FinAbGroup::new(&[3, 0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            FinAbGroup::new(&[-2]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn invariant_factors_of_presentations() {
        assert_eq!(grp(&[27, 3]).invariant_factors(), vec![3, 27]);
        assert_eq!(grp(&[2, 3]).invariant_factors(), vec![6]);
        assert_eq!(grp(&[4, 6, 9]).invariant_factors(), vec![6, 36]);
        assert_eq!(grp(&[1, 5, 1]).invariant_factors(), vec![5]);
    }

    #[test]
    fn subgroup_generated_examples() {
        let z9 = grp(&[9]);
        let h = z9.subgroup_generated(&[z9.element(&[3]).unwrap()]).unwrap();
        let els: Vec<_> = h.elements().map(|e| e.coords()[0]).collect();
        assert_eq!(els, vec![0, 3, 6]);

        let z33 = grp(&[3, 3]);
        let h = z33
            .subgroup_generated(&[z33.element(&[1, 0]).unwrap()])
            .unwrap();
        let els: Vec<_> = h.elements().map(|e| e.into_coords()).collect();
        assert_eq!(els, vec![vec![0, 0], vec![1, 0], vec![2, 0]]);

        let h = z9.subgroup_generated(&[z9.element(&[2]).unwrap()]).unwrap();
        assert_eq!(h.order(), 9);

        assert!(z9.element(&[9]).is_err());
        assert!(z9
            .subgroup_generated(&[GroupElt::from_reduced(vec![10])])
            .is_err());
    }

    #[test]
    fn subgroups_of_order_examples() {
        let z33 = grp(&[3, 3]);
        assert_eq!(z33.all_subgroups_of_order(3).unwrap().len(), 4);
        let z9 = grp(&[9]);
        let subs = z9.all_subgroups_of_order(3).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 3);
        assert!(subs[0].contains(&z9.element(&[6]).unwrap()));
        let z2 = grp(&[2]);
        let subs = z2.all_subgroups_of_order(1).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_trivial());
        assert!(z9.all_subgroups_of_order(2).unwrap().is_empty());
    }

    #[test]
    fn subgroup_count_matches_brute_force() {
        // brute force: distinct closures of all generator pairs
        for ds in [&[4, 2][..], &[3, 3], &[2, 2, 2], &[6, 2], &[9, 3]] {
            let g = grp(ds);
            let elts: Vec<_> = g.elements().collect();
            let mut brute: HashSet<Vec<usize>> = HashSet::new();
            for a in &elts {
                for b in &elts {
                    for c in &elts {
                        let h = g
                            .subgroup_generated(&[a.clone(), b.clone(), c.clone()])
                            .unwrap();
                        brute.insert(h.members.clone());
                    }
                }
            }
            for m in 1..=g.order() {
                let expected = brute.iter().filter(|h| h.len() as u64 == m).count();
                assert_eq!(
                    g.all_subgroups_of_order(m).unwrap().len(),
                    expected,
                    "{ds:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn resource_limit() {
        let big = grp(&[200, 200]);
        assert!(matches!(
            big.all_subgroups_of_order(2),
            Err(Error::ResourceLimit { order: 40_000, .. })
        ));
        let small = grp(&[10, 10]);
        with_max_order(50, || {
            assert_eq!(max_order(), 50);
            assert!(matches!(
                small.ensure_enumerable(),
                Err(Error::ResourceLimit {
                    order: 100,
                    bound: 50
                })
            ));
        });
        assert!(small.ensure_enumerable().is_ok());
    }

    #[test]
    fn quotient_examples() {
        let z9 = grp(&[9]);
        let h = z9.subgroup_generated(&[z9.element(&[3]).unwrap()]).unwrap();
        let (q, p) = quotient(&z9, &h).unwrap();
        assert_eq!(q.factors(), &[3]);
        assert_eq!(p.apply(&z9.element(&[3]).unwrap()).unwrap(), q.zero());

        let g = grp(&[9, 1]);
        let h = g
            .subgroup_generated(&[g.element(&[6, 0]).unwrap()])
            .unwrap();
        let (q, _) = quotient(&g, &h).unwrap();
        assert_eq!(q.factors(), &[3]);

        let whole = Subgroup::whole(&z9).unwrap();
        let (q, _) = quotient(&z9, &whole).unwrap();
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn quotient_projection_is_homomorphism_with_kernel() {
        let g = grp(&[27, 3]);
        let h = g
            .subgroup_generated(&[g.element(&[24, 1]).unwrap()])
            .unwrap();
        let (q, p) = quotient(&g, &h).unwrap();
        assert_eq!(q.factors(), &[9]);
        let elts: Vec<_> = g.elements().collect();
        for a in &elts {
            let pa = p.apply(a).unwrap();
            assert_eq!(pa == q.zero(), h.contains(a));
            for b in elts.iter().step_by(5) {
                assert_eq!(
                    p.apply(&g.add(a, b)).unwrap(),
                    q.add(&pa, &p.apply(b).unwrap())
                );
            }
        }
        for (i, l) in p.lifts().iter().enumerate() {
            assert_eq!(p.apply(l).unwrap(), q.generator(i));
        }
    }

    #[test]
    fn canonicalize_preserves_order_statistics() {
        for ds in [&[4, 6][..], &[27, 3], &[2, 3, 5], &[12, 18], &[1, 8, 1]] {
            let g = grp(ds);
            let (c, iso) = g.canonicalize().unwrap();
            assert_eq!(c.factors(), g.invariant_factors().as_slice());
            let mut a: Vec<u64> = g.elements().map(|e| g.order_of(&e)).collect();
            let mut b: Vec<u64> = c.elements().map(|e| c.order_of(&e)).collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
            let images: HashSet<GroupElt> = g.elements().map(|e| iso.apply(&e).unwrap()).collect();
            assert_eq!(images.len() as u64, g.order());
            let (c2, _) = c.canonicalize().unwrap();
            assert_eq!(c2, c);
        }
    }

    #[test]
    fn dual_character_examples() {
        let z3 = grp(&[3]);
        let one = z3.element(&[1]).unwrap();
        assert_eq!(z3.dual_character(&one, &one).unwrap(), QmodZ::new(1, 3));
        assert_eq!(z3.dual_character(&z3.zero(), &one).unwrap(), QmodZ::ZERO);
        let z9 = grp(&[9]);
        let three = z9.element(&[3]).unwrap();
        assert_eq!(z9.dual_character(&three, &three).unwrap(), QmodZ::ZERO);
        assert_eq!(z9.dual_character(&three, &one).unwrap(), QmodZ::new(1, 3));
        let pair = grp(&[3, 3]).element(&[1, 1]).unwrap();
        assert!(z9.dual_character(&three, &pair).is_err());
    }

    #[test]
    fn presentation_of_subgroup() {
        let g = grp(&[6, 6]);
        let h = g
            .subgroup_generated(&[g.element(&[2, 0]).unwrap(), g.element(&[3, 3]).unwrap()])
            .unwrap();
        let (p, basis) = h.presentation();
        assert_eq!(p.order(), h.order());
        assert_eq!(p.factors(), p.invariant_factors().as_slice());
        let regen = g.subgroup_generated(&basis).unwrap();
        assert_eq!(regen, h);
        for (b, d) in basis.iter().zip(p.factors()) {
            assert_eq!(g.order_of(b), *d);
        }
    }
}
