//! Modular data of the pointed modular category attached to a metric group.
//!
//! Conventions: `T_a = exp(2 pi i q(a))` with the central-charge factor
//! dropped, and `S_ab = |A|^{-1/2} exp(-2 pi i dq(a, b))`. With this sign,
//! `(ST)^3 = exp(2 pi i sigma / 8) S^2`. Floating point stays inside this
//! module; every input is exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::form::{MetricGroup, QuadraticForm};
use crate::group::{FinAbGroup, GroupElt};
use crate::qmodz::QmodZ;

/// Tolerance for the matrix identities.
pub const MATRIX_TOLERANCE: f64 = 1e-9;
/// Tolerance when rounding Verlinde coefficients to integers.
pub const FUSION_TOLERANCE: f64 = 1e-6;
/// Largest label set for which dense modular data is built.
pub const MAX_LABELS: u64 = 1024;
/// Largest label set for which the full `N_ab^c` tensor is materialized.
pub const MAX_FUSION_TENSOR_LABELS: u64 = 100;

fn phase(q: QmodZ) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * q.to_f64())
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n.max(1))
    }

    fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            let row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                let b = &other.data[k * n..(k + 1) * n];
                for (r, &bv) in row.iter_mut().zip(b) {
                    *r += a * bv;
                }
            }
        }
        out
    }

    fn adjoint(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Max entrywise distance.
    fn distance(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct ModularData {
    group: FinAbGroup,
    labels: Vec<GroupElt>,
    twists: Vec<QmodZ>,
    s: Matrix,
    t: Vec<Complex64>,
    sigma: u8,
}

/// Worst residuals of the modular relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModularResiduals {
    pub unitarity: f64,
    pub s_squared: f64,
    pub st_cubed: f64,
}

impl ModularData {
    pub fn new(m: &MetricGroup) -> Result<Self> {
        let g = m.group().clone();
        if g.order() > MAX_LABELS {
            return Err(Error::ResourceLimit {
                order: g.order(),
                bound: MAX_LABELS,
            });
        }
        let twists = m.form().values()?;
        let n = g.order() as usize;
        let norm = 1.0 / (n as f64).sqrt();
        let mut s = Matrix::zeros(n);
        for a in 0..n {
            for b in 0..n {
                let dq = twists[g.add_idx(a, b)] - twists[a] - twists[b];
                s.data[a * n + b] = phase(-dq) * norm;
            }
        }
        let t = twists.iter().map(|&q| phase(q)).collect();
        Ok(ModularData {
            labels: g.elements().collect(),
            group: g,
            twists,
            s,
            t,
            sigma: m.gauss_signature()?,
        })
    }

    /// As [`ModularData::new`], rejecting degenerate forms as invalid input.
    pub fn from_form(form: &QuadraticForm) -> Result<Self> {
        let m = MetricGroup::new(form.clone()).map_err(|e| match e {
            Error::Degenerate(msg) => Error::InvalidInput(format!("degenerate form: {msg}")),
            other => other,
        })?;
        Self::new(&m)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn labels(&self) -> &[GroupElt] {
        &self.labels
    }

    pub fn twists(&self) -> &[QmodZ] {
        &self.twists
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn t(&self) -> &[Complex64] {
        &self.t
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Residuals of `S S^* = 1`, `S^2 = (a -> -a)` and
    /// `(ST)^3 = exp(2 pi i sigma/8) S^2`.
    pub fn residuals(&self) -> ModularResiduals {
        let n = self.size();
        let g = &self.group;
        let mut id = Matrix::zeros(n);
        let mut conj = Matrix::zeros(n);
        for a in 0..n {
            id.data[a * n + a] = Complex64::new(1.0, 0.0);
            let neg = g.index_of(&g.neg(&self.labels[a]));
            conj.data[a * n + neg] = Complex64::new(1.0, 0.0);
        }
        let unitarity = self.s.mul(&self.s.adjoint()).distance(&id);
        let s2 = self.s.mul(&self.s);
        let s_squared = s2.distance(&conj);
        let mut st = self.s.clone();
        for row in st.data.chunks_mut(n.max(1)) {
            for (x, t) in row.iter_mut().zip(&self.t) {
                *x *= t;
            }
        }
        let st3 = st.mul(&st).mul(&st);
        let ph = phase(QmodZ::new(self.sigma as i64, 8));
        let mut rhs = s2;
        for x in rhs.data.iter_mut() {
            *x *= ph;
        }
        ModularResiduals {
            unitarity,
            s_squared,
            st_cubed: st3.distance(&rhs),
        }
    }

    /// Fails with a modularity error when a relation misses [`MATRIX_TOLERANCE`].
    pub fn check(&self) -> Result<ModularResiduals> {
        let r = self.residuals();
        let named = [
            ("S is not unitary", r.unitarity),
            ("S^2 is not charge conjugation", r.s_squared),
            ("(ST)^3 differs from exp(2 pi i sigma/8) S^2", r.st_cubed),
        ];
        for (what, v) in named {
            if v.is_nan() || v > MATRIX_TOLERANCE {
                return Err(Error::ModularityFailure(format!("{what}: residual {v:e}")));
            }
        }
        Ok(r)
    }

    fn fusion_vector(&self, a: usize, b: usize) -> Vec<Complex64> {
        (0..self.size())
            .map(|x| self.s.get(a, x) * self.s.get(b, x) / self.s.get(0, x))
            .collect()
    }

    /// `N_ab^c = sum_x S_ax S_bx conj(S_cx) / S_0x`, rounded, for every triple.
    /// Indexed `[a][b][c]` by label position.
    pub fn verlinde_fusion(&self) -> Result<Vec<Vec<Vec<u64>>>> {
        let n = self.size();
        if n as u64 > MAX_FUSION_TENSOR_LABELS {
            return Err(Error::ResourceLimit {
                order: n as u64,
                bound: MAX_FUSION_TENSOR_LABELS,
            });
        }
        let mut out = vec![vec![vec![0u64; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let f = self.fusion_vector(a, b);
                for c in 0..n {
                    let v: Complex64 = f
                        .iter()
                        .enumerate()
                        .map(|(x, fx)| fx * self.s.get(c, x).conj())
                        .sum();
                    let r = v.re.round();
                    if (v - Complex64::new(r, 0.0)).norm() > FUSION_TOLERANCE || r < 0.0 {
                        return Err(Error::ModularityFailure(format!(
                            "N_{a},{b}^{c} = {v} is not a non-negative integer"
                        )));
                    }
                    out[a][b][c] = r as u64;
                }
            }
        }
        Ok(out)
    }

    /// Confirms that Verlinde fusion is the group law, `N_ab^c = [c = a + b]`,
    /// in `O(|A|^3)`. Writing `f_x = S_ax S_bx / S_0x`, the coefficient is
    /// `N_ab^c = <f, S_c>`, so by Cauchy-Schwarz
    /// `|N_ab^c - [c = a + b]| <= |f - S_{a+b}| |S_c| + |(S S^*)_{a+b,c} - [c = a + b]|`,
    /// and both factors are bounded by the unitarity residual.
    ///
    /// Returns the largest bound on a coefficient deviation.
    pub fn check_group_fusion(&self) -> Result<f64> {
        let r = self.check()?;
        let n = self.size();
        let row_norm = (1.0 + r.unitarity).sqrt();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let f = self.fusion_vector(a, b);
                let c = self.group.add_idx(a, b);
                let err: f64 = f
                    .iter()
                    .enumerate()
                    .map(|(x, fx)| (fx - self.s.get(c, x)).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let dev = err * row_norm + r.unitarity;
                if dev.is_nan() || dev > FUSION_TOLERANCE {
                    return Err(Error::ModularityFailure(format!(
                        "fusion of labels {a} and {b} deviates from the group law by {dev:e}"
                    )));
                }
                worst = worst.max(dev);
            }
        }
        Ok(worst)
    }
}

/// Sorted multiset `{q(a) : a in A}`.
pub fn twist_spectrum(m: &MetricGroup) -> Result<Vec<QmodZ>> {
    m.twist_spectrum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0() -> MetricGroup {
        let g = FinAbGroup::new(&[3, 3]).unwrap();
        let f = QuadraticForm::new(
            g,
            vec![QmodZ::ZERO; 2],
            vec![
                vec![QmodZ::ZERO, QmodZ::new(1, 3)],
                vec![QmodZ::new(1, 3), QmodZ::ZERO],
            ],
        )
        .unwrap();
        MetricGroup::new(f).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn t_matrix_examples() {
        let md = ModularData::new(&MetricGroup::cyclic(2, 1, 4).unwrap()).unwrap();
        assert!(close(md.t()[0], Complex64::new(1.0, 0.0)));
        assert!(close(md.t()[1], Complex64::new(0.0, 1.0)));

        let md = ModularData::new(&q0()).unwrap();
        let w = phase(QmodZ::new(1, 3));
        // xy = 0 on five of the nine elements, 1 and 2 on two each
        for (target, count) in [(Complex64::new(1.0, 0.0), 5), (w, 2), (w * w, 2)] {
            assert_eq!(md.t().iter().filter(|&&t| close(t, target)).count(), count);
        }

        let md = ModularData::new(&MetricGroup::trivial()).unwrap();
        assert_eq!(md.size(), 1);
        assert!(close(md.s().get(0, 0), Complex64::new(1.0, 0.0)));
        assert!(close(md.t()[0], Complex64::new(1.0, 0.0)));
        md.check().unwrap();
    }

    #[test]
    fn relations_hold() {
        for m in [
            q0(),
            MetricGroup::cyclic(9, 4, 9).unwrap(),
            MetricGroup::cyclic(2, 1, 4).unwrap(),
            MetricGroup::cyclic(8, 3, 16).unwrap(),
            MetricGroup::cyclic(5, 2, 5).unwrap(),
        ] {
            let md = ModularData::new(&m).unwrap();
            md.check().unwrap();
            md.check_group_fusion().unwrap();
        }
    }

    #[test]
    fn fusion_examples() {
        let md = ModularData::new(&MetricGroup::cyclic(9, 4, 9).unwrap()).unwrap();
        let n = md.verlinde_fusion().unwrap();
        for c in 0..9 {
            assert_eq!(n[1][1][c], u64::from(c == 2));
        }
        for a in 0..9 {
            assert_eq!(n[a][0][a], 1);
        }

        let md = ModularData::new(&q0()).unwrap();
        let g = md.group().clone();
        let n = md.verlinde_fusion().unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(n[a][b][c], u64::from(g.add_idx(a, b) == c));
                }
            }
        }
    }

    #[test]
    fn degenerate_is_invalid_input() {
        let f = QuadraticForm::zero(FinAbGroup::cyclic(3));
        assert!(matches!(
            ModularData::from_form(&f),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn twist_spectrum_examples() {
        let spec = |m: &MetricGroup| -> Vec<String> {
            twist_spectrum(m)
                .unwrap()
                .iter()
                .map(|q| q.to_string())
                .collect()
        };
        assert_eq!(
            spec(&MetricGroup::cyclic(9, 8, 9).unwrap()),
            ["0", "0", "0", "2/9", "2/9", "5/9", "5/9", "8/9", "8/9"]
        );
        assert_eq!(
            spec(&MetricGroup::cyclic(9, 4, 9).unwrap()),
            ["0", "0", "0", "1/9", "1/9", "4/9", "4/9", "7/9", "7/9"]
        );
        assert_eq!(spec(&MetricGroup::trivial()), ["0"]);
    }
}
