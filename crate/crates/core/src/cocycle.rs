//! Normalized 3-cocycles `G^3 -> Q/Z` on small finite abelian groups, the
//! standard representatives on `Z_n`, and the alternation map `psi*`.

use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElt};
use crate::qmodz::QmodZ;

/// Largest group on which cocycle tables (`|G|^3` entries, validated with
/// `|G|^4` checks) are built.
pub const MAX_COCYCLE_ORDER: u64 = 64;

/// `(a + b - ((a + b) mod n)) / n` for `a, b` in `[0, n)`.
pub fn carry(a: u64, b: u64, n: u64) -> u64 {
    (a + b) / n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle3 {
    group: FinAbGroup,
    table: Vec<QmodZ>,
}

impl Cocycle3 {
    /// Table indexed lexicographically by element indices:
    /// `table[(a * |G| + b) * |G| + c] = omega(a, b, c)`.
    pub fn new(group: FinAbGroup, table: Vec<QmodZ>) -> Result<Self> {
        if group.order() > MAX_COCYCLE_ORDER {
            return Err(Error::ResourceLimit {
                order: group.order(),
                bound: MAX_COCYCLE_ORDER,
            });
        }
        let n = group.order() as usize;
        if table.len() != n * n * n {
            return Err(Error::invalid(format!(
                "cocycle table has {} entries, expected {}",
                table.len(),
                n * n * n
            )));
        }
        let c = Cocycle3 { group, table };
        if let Some((a, b, cc, d)) = c.coboundary_failure() {
            return Err(Error::invalid(format!(
                "table is not a 3-cocycle: delta omega({a}, {b}, {cc}, {d}) != 0"
            )));
        }
        Ok(c)
    }

    pub fn from_fn(
        group: FinAbGroup,
        f: impl Fn(&GroupElt, &GroupElt, &GroupElt) -> QmodZ,
    ) -> Result<Self> {
        if group.order() > MAX_COCYCLE_ORDER {
            return Err(Error::ResourceLimit {
                order: group.order(),
                bound: MAX_COCYCLE_ORDER,
            });
        }
        let elts: Vec<GroupElt> = group.elements().collect();
        let mut table = Vec::with_capacity(elts.len().pow(3));
        for a in &elts {
            for b in &elts {
                for c in &elts {
                    table.push(f(a, b, c));
                }
            }
        }
        Self::new(group, table)
    }

    pub fn zero(group: FinAbGroup) -> Result<Self> {
        let n = group.order() as usize;
        Self::new(group, vec![QmodZ::ZERO; n * n * n])
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Flat lexicographic table.
    pub fn table(&self) -> &[QmodZ] {
        &self.table
    }

    fn at(&self, a: usize, b: usize, c: usize) -> QmodZ {
        let n = self.group.order() as usize;
        self.table[(a * n + b) * n + c]
    }

    pub fn eval(&self, a: &GroupElt, b: &GroupElt, c: &GroupElt) -> Result<QmodZ> {
        let g = &self.group;
        for x in [a, b, c] {
            g.check(x)?;
        }
        Ok(self.at(g.index_of(a), g.index_of(b), g.index_of(c)))
    }

    /// First quadruple of indices where
    /// `w(b,c,d) - w(a+b,c,d) + w(a,b+c,d) - w(a,b,c+d) + w(a,b,c)` is nonzero.
    fn coboundary_failure(&self) -> Option<(usize, usize, usize, usize)> {
        let g = &self.group;
        let n = g.order() as usize;
        for a in 0..n {
            for b in 0..n {
                let ab = g.add_idx(a, b);
                for c in 0..n {
                    let bc = g.add_idx(b, c);
                    let base = self.at(a, b, c);
                    for d in 0..n {
                        let cd = g.add_idx(c, d);
                        let v = self.at(b, c, d) - self.at(ab, c, d) + self.at(a, bc, d)
                            - self.at(a, b, cd)
                            + base;
                        if !v.is_zero() {
                            return Some((a, b, c, d));
                        }
                    }
                }
            }
        }
        None
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Cocycle3) -> Result<Cocycle3> {
        if self.group != other.group {
            return Err(Error::invalid("cocycles on different groups"));
        }
        Ok(Cocycle3 {
            group: self.group.clone(),
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// `psi*(omega)(x, y, z) = sum over permutations s of sign(s) omega(s(x), s(y), s(z))`.
    pub fn psi_star(&self, x: &GroupElt, y: &GroupElt, z: &GroupElt) -> Result<QmodZ> {
        let g = &self.group;
        for e in [x, y, z] {
            g.check(e)?;
        }
        Ok(self.psi_idx(g.index_of(x), g.index_of(y), g.index_of(z)))
    }

    fn psi_idx(&self, x: usize, y: usize, z: usize) -> QmodZ {
        self.at(x, y, z) + self.at(y, z, x) + self.at(z, x, y)
            - self.at(y, x, z)
            - self.at(x, z, y)
            - self.at(z, y, x)
    }

    /// `psi*(omega)` vanishes on every triple.
    pub fn is_abelian_class(&self) -> bool {
        let n = self.group.order() as usize;
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.psi_idx(x, y, z).is_zero())))
    }
}

/// `omega_j(a, b, c) = j a carry(b, c) / n` on `Z_n`.
pub fn standard_cocycle(n: u64, j: i64) -> Result<Cocycle3> {
    if n == 0 {
        return Err(Error::invalid("cycle length must be positive"));
    }
    let g = FinAbGroup::cyclic(n);
    Cocycle3::from_fn(g, |a, b, c| {
        let (a, b, c) = (a.coords()[0], b.coords()[0], c.coords()[0]);
        QmodZ::new(j * (a * carry(b, c, n)) as i64, n as i64)
    })
}
