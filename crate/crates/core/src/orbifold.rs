//! Cyclic permutation orbifolds of a holomorphic theory with central charge
//! `c = 8k`: twisted-sector weights, the anomaly verdict and index, and the
//! Lagrangian extension describing the orbifold representation category.

use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::form::{MetricGroup, QuadraticForm};
use crate::group::{FinAbGroup, GroupElt, Subgroup};
use crate::lagrangian::{plus_minus_extension, standard_extension, LagrangianExtension};
use crate::qmodz::QmodZ;

/// A positive multiple of 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CentralCharge(u64);

impl CentralCharge {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 || !c.is_multiple_of(8) {
            return Err(Error::invalid(format!(
                "central charge {c} is not a positive multiple of 8"
            )));
        }
        Ok(CentralCharge(c))
    }

    pub fn from_k(k: u64) -> Result<Self> {
        Self::new(8 * k)
    }

    pub fn c(self) -> u64 {
        self.0
    }

    /// `c / 8`.
    pub fn k(self) -> u64 {
        self.0 / 8
    }
}

impl FromStr for CentralCharge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let c: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("not a central charge: {s:?}")))?;
        Self::new(c)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("cycle length must be positive"));
    }
    Ok(())
}

/// `h_i = i/n + (n^2 - 1) c / (24 n) mod 1` for `i = 0..n`.
pub fn twisted_sector_spectrum(c: CentralCharge, n: u64) -> Result<Vec<QmodZ>> {
    check_n(n)?;
    let n = n as i64;
    let shift = QmodZ::new((n * n - 1) * c.c() as i64, 24 * n);
    Ok((0..n).map(|i| QmodZ::new(i, n) + shift).collect())
}

/// `3 does not divide n, or 24 divides c`.
pub fn is_non_anomalous(c: CentralCharge, n: u64) -> bool {
    !n.is_multiple_of(3) || c.c().is_multiple_of(24)
}

/// The order-3 cyclic subgroup of `S_3` is anomalous unless `k = 0 mod 3`.
pub fn s3_order3_anomalous(c: CentralCharge) -> bool {
    !c.k().is_multiple_of(3)
}

/// The representation category of the `Z_n` orbifold as a Lagrangian
/// extension of `Z_n`, graded by the twisted sector.
///
/// Non-anomalous cases give the standard extension. For `n = 3m` and
/// `k = 1 mod 3` the form is the minus member of the plus-minus family
/// (`q(1, 0) = -1/(9m)`), for `k = 2 mod 3` the plus member; in both cases
/// `iota(chi_1) = (9m - 3, 1)`, the lift `(1, 0)` has degree 1 and the index
/// is `-k m mod 3m`.
pub fn orbifold_metric_group(c: CentralCharge, n: u64) -> Result<LagrangianExtension> {
    check_n(n)?;
    if is_non_anomalous(c, n) {
        return standard_extension(n);
    }
    let m = n / 3;
    let s = if c.k() % 3 == 1 { -1 } else { 1 };
    plus_minus_extension(m, s)
}

#[derive(Clone, Debug)]
pub struct OrbifoldReport {
    pub n: u64,
    pub c: CentralCharge,
    pub spectrum: Vec<QmodZ>,
    pub anomalous: bool,
    pub anomaly_index: u64,
    pub rep_category: LagrangianExtension,
    pub dual_lagrangian: Option<Subgroup>,
}

impl OrbifoldReport {
    pub fn k(&self) -> u64 {
        self.c.k()
    }
}

/// Builds the report and checks its internal invariants: anomalous iff the
/// index is nonzero iff `0` is missing from the spectrum, and the spectrum is
/// the multiset of `q` on the degree-1 part.
pub fn orbifold_report(c: CentralCharge, n: u64) -> Result<OrbifoldReport> {
    let spectrum = twisted_sector_spectrum(c, n)?;
    let anomalous = !is_non_anomalous(c, n);
    let rep_category = orbifold_metric_group(c, n)?;
    let anomaly_index = rep_category.anomaly_index();
    let has_zero = spectrum.iter().any(|h| h.is_zero());
    if anomalous != (anomaly_index != 0) || anomalous == has_zero {
        return Err(Error::InternalConsistency(format!(
            "c = {}, n = {n}: anomalous = {anomalous}, index = {anomaly_index}, 0 in spectrum = {has_zero}",
            c.c()
        )));
    }
    let mut sorted = spectrum.clone();
    sorted.sort_unstable();
    let mut degree1 = degree_values(&rep_category, 1)?;
    degree1.sort_unstable();
    if sorted != degree1 {
        return Err(Error::InternalConsistency(format!(
            "c = {}, n = {n}: twisted-sector weights {sorted:?} differ from degree-1 twists {degree1:?}",
            c.c()
        )));
    }
    let mut report = OrbifoldReport {
        n,
        c,
        spectrum,
        anomalous,
        anomaly_index,
        rep_category,
        dual_lagrangian: None,
    };
    report.dual_lagrangian = twisted_orbifold_partner(&report)?;
    Ok(report)
}

fn degree_values(e: &LagrangianExtension, d: u64) -> Result<Vec<QmodZ>> {
    e.degree_part(d)?.iter().map(|a| e.metric().q(a)).collect()
}

/// Expected twists of the degree-`d` part: with `g = gcd(d, n)`, `l = n/g`,
/// the values `j/l + (n^2 - g^2) c / (24 n)` for `j < l`, each `g` times.
pub fn expected_graded_spectrum(c: CentralCharge, n: u64, d: u64) -> Result<Vec<QmodZ>> {
    check_n(n)?;
    let g = (d % n).gcd(&n) as i64;
    let ni = n as i64;
    let l = ni / g;
    let shift = QmodZ::new((ni * ni - g * g) * c.c() as i64, 24 * ni);
    let mut out: Vec<QmodZ> = (0..l)
        .flat_map(|j| std::iter::repeat_n(QmodZ::new(j, l) + shift, g as usize))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// A degree whose sorted twists differ from the expected multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMismatch {
    pub degree: u64,
    pub expected: Vec<QmodZ>,
    pub found: Vec<QmodZ>,
}

/// First degree whose twists disagree with [`expected_graded_spectrum`].
pub fn graded_spectrum_mismatch(
    e: &LagrangianExtension,
    c: CentralCharge,
    n: u64,
) -> Result<Option<GradedMismatch>> {
    if e.n() != n {
        return Err(Error::invalid("extension of a different cycle length"));
    }
    for d in 0..n {
        let expected = expected_graded_spectrum(c, n, d)?;
        let mut found = degree_values(e, d)?;
        found.sort_unstable();
        if expected != found {
            return Ok(Some(GradedMismatch {
                degree: d,
                expected,
                found,
            }));
        }
    }
    Ok(None)
}

/// Per-degree comparison of `q` on the graded parts with the per-cycle weight
/// formula (a derived consistency check).
pub fn graded_spectrum_check(e: &LagrangianExtension, c: CentralCharge, n: u64) -> Result<bool> {
    Ok(graded_spectrum_mismatch(e, c, n)?.is_none())
}

/// The complementary Lagrangian `{0} x Z_n^` of the standard extension, i.e.
/// the subgroup generated by an isotropic degree-1 lift; `None` if anomalous.
pub fn twisted_orbifold_partner(report: &OrbifoldReport) -> Result<Option<Subgroup>> {
    if report.anomalous {
        return Ok(None);
    }
    report.rep_category.complementary_lagrangian()
}

/// The three twisted doubles of `Z_3`, built from their listed forms:
/// `(Z3 x Z3, xy/3)`, `(Z9, 4x^2/9)`, `(Z9, 8x^2/9)`.
pub fn z3_table() -> Result<Vec<(u64, MetricGroup)>> {
    let g = FinAbGroup::new(&[3, 3])?;
    let third = QmodZ::new(1, 3);
    let row0 = MetricGroup::new(QuadraticForm::new(
        g,
        vec![QmodZ::ZERO; 2],
        vec![vec![QmodZ::ZERO, third], vec![third, QmodZ::ZERO]],
    )?)?;
    Ok(vec![
        (0, row0),
        (1, MetricGroup::cyclic(9, 4, 9)?),
        (2, MetricGroup::cyclic(9, 8, 9)?),
    ])
}

/// One lattice point of the figure: coordinates `a = l x + m v` with the
/// stored lift `x` and `v = iota(chi_1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigurePoint {
    pub l: u64,
    pub m: u64,
    pub element: GroupElt,
    pub q: QmodZ,
}

/// Grid data for the torus picture of the representation category.
#[derive(Clone, Debug)]
pub struct FigureData {
    pub n: u64,
    pub c: CentralCharge,
    /// `k mod 3`: zero for straight grading lines.
    pub shear: u64,
    /// `n x = offset * v`: how the degree-`n` line closes up on the Lagrangian.
    pub offset: u64,
    pub invariant_factors: Vec<u64>,
    pub points: Vec<FigurePoint>,
}

pub fn figure_data(c: CentralCharge, n: u64) -> Result<FigureData> {
    check_n(n)?;
    if !n.is_multiple_of(3) {
        return Err(Error::invalid(format!("figure needs 3 | n, got n = {n}")));
    }
    let e = orbifold_metric_group(c, n)?;
    let g = e.group();
    let coords = e.coordinates();
    let nx = g.scale(e.lift(), n as i64);
    let offset = coords[g.index_of(&nx)].1;
    let mut points: Vec<FigurePoint> = coords
        .iter()
        .enumerate()
        .map(|(i, &(l, m))| {
            let element = g.element_at(i);
            let q = e.metric().form().eval_unchecked(&element);
            FigurePoint { l, m, element, q }
        })
        .collect();
    points.sort_by_key(|p| (p.l, p.m));
    Ok(FigureData {
        n,
        c,
        shear: c.k() % 3,
        offset,
        invariant_factors: g.invariant_factors(),
        points,
    })
}
