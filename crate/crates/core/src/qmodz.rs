//! Exact residues in Q/Z.
//!
//! Every quadratic form value, bilinear pairing and conformal weight mod 1 in
//! this crate is a [`QmodZ`]. The representation is canonical: a reduced
//! fraction `num/den` with `0 <= num < den`, so structural equality is value
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// The class of `num/den` modulo 1. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "QmodZ with zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        QmodZ {
            num: num as i64,
            den: i64::try_from(den).expect("QmodZ denominator overflow"),
        }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `k * self` for any integer `k`.
    pub fn scale(self, k: i64) -> Self {
        Self::from_i128(self.num as i128 * k as i128, self.den as i128)
    }

    /// `self * k` as a rational number, when it is an integer.
    ///
    /// Used for quantities such as `n^2 q(x)` which are integral for
    /// structural reasons; the representative in `[0, den)` is scaled.
    pub fn integral_multiple(self, k: i64) -> Option<i64> {
        let prod = self.num as i128 * k as i128;
        if prod % self.den as i128 == 0 {
            Some((prod / self.den as i128) as i64)
        } else {
            None
        }
    }

    /// Order of the residue in Q/Z (the reduced denominator).
    pub fn order(self) -> i64 {
        self.den
    }

    /// Value in `[0, 1)` as a float, for phases only.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        QmodZ::ZERO
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        let l = (self.den as i128).lcm(&(rhs.den as i128));
        let a = self.num as i128 * (l / self.den as i128);
        let b = rhs.num as i128 * (l / rhs.den as i128);
        QmodZ::from_i128(a + b, l)
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, rhs: QmodZ) {
        *self = *self + rhs;
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::from_i128(-(self.num as i128), self.den as i128)
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: QmodZ) -> QmodZ {
        self + (-rhs)
    }
}

impl SubAssign for QmodZ {
    fn sub_assign(&mut self, rhs: QmodZ) {
        *self = *self - rhs;
    }
}

impl Mul<i64> for QmodZ {
    type Output = QmodZ;
    fn mul(self, k: i64) -> QmodZ {
        self.scale(k)
    }
}

impl Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::ZERO, |acc, x| acc + x)
    }
}

impl PartialOrd for QmodZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by the representative in `[0, 1)`.
impl Ord for QmodZ {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.num as i128 * other.den as i128;
        let r = other.num as i128 * self.den as i128;
        l.cmp(&r)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    /// Accepts `"a/b"` or a bare integer `"a"`; the value is reduced mod 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidInput(format!("not a rational residue: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(QmodZ::new(n, d))
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(QmodZ::new(n, 1))
            }
        }
    }
}

impl serde::Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for QmodZ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
