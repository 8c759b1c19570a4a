//! 2x2 matrices over Z and Q.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Row-major integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

/// Row-major rational matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl IMat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IMat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        IMat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn identity() -> Self {
        IMat2::new(1, 0, 0, 1)
    }

    pub fn diag(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        IMat2::new(x, 0, 0, y)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Adjugate: `self * adj = det * I`.
    pub fn adj(&self) -> IMat2 {
        IMat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn transpose(&self) -> IMat2 {
        IMat2 { a: self.a.clone(), b: self.c.clone(), c: self.b.clone(), d: self.d.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> IMat2 {
        IMat2 { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn to_q(&self) -> QMat2 {
        QMat2 {
            a: Rat::from_integer(self.a.clone()),
            b: Rat::from_integer(self.b.clone()),
            c: Rat::from_integer(self.c.clone()),
            d: Rat::from_integer(self.d.clone()),
        }
    }

    /// Inverse in GL2(Z); `None` unless `|det| = 1`.
    pub fn inverse_unimodular(&self) -> Option<IMat2> {
        let det = self.det();
        if det.is_one() {
            Some(self.adj())
        } else if (-&det).is_one() {
            Some(self.adj().scale(&BigInt::from(-1)))
        } else {
            None
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul for &IMat2 {
    type Output = IMat2;
    fn mul(self, o: &IMat2) -> IMat2 {
        IMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl fmt::Display for IMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl QMat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        QMat2 { a, b, c, d }
    }

    pub fn from_ratios(m: [[(i64, i64); 2]; 2]) -> Self {
        QMat2::new(
            rat(m[0][0].0, m[0][0].1),
            rat(m[0][1].0, m[0][1].1),
            rat(m[1][0].0, m[1][0].1),
            rat(m[1][1].0, m[1][1].1),
        )
    }

    pub fn identity() -> Self {
        IMat2::identity().to_q()
    }

    pub fn zero() -> Self {
        QMat2::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn diag(x: Rat, y: Rat) -> Self {
        QMat2::new(x, Rat::zero(), Rat::zero(), y)
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Result<QMat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(QMat2 {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        })
    }

    pub fn transpose(&self) -> QMat2 {
        QMat2 { a: self.a.clone(), b: self.c.clone(), c: self.b.clone(), d: self.d.clone() }
    }

    pub fn scale(&self, k: &Rat) -> QMat2 {
        QMat2 { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    pub fn add(&self, o: &QMat2) -> QMat2 {
        QMat2 { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c, d: &self.d + &o.d }
    }

    pub fn neg(&self) -> QMat2 {
        QMat2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn entries(&self) -> [&Rat; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Least common denominator of the entries.
    pub fn denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integer())
    }

    /// The integer matrix `k * self` where `k` is the common denominator.
    pub fn clear_denominators(&self) -> (BigInt, IMat2) {
        let k = self.denominator();
        let kr = Rat::from_integer(k.clone());
        let s = self.scale(&kr);
        let m = IMat2::new(s.a.to_integer(), s.b.to_integer(), s.c.to_integer(), s.d.to_integer());
        (k, m)
    }

    pub fn to_integral(&self) -> Option<IMat2> {
        if !self.is_integral() {
            return None;
        }
        Some(IMat2::new(self.a.to_integer(), self.b.to_integer(), self.c.to_integer(), self.d.to_integer()))
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Rat; 2]) -> [Rat; 2] {
        [&v[0] * &self.a + &v[1] * &self.c, &v[0] * &self.b + &v[1] * &self.d]
    }
}

impl Mul for &QMat2 {
    type Output = QMat2;
    fn mul(self, o: &QMat2) -> QMat2 {
        QMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl fmt::Display for QMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl From<&IMat2> for QMat2 {
    fn from(m: &IMat2) -> Self {
        m.to_q()
    }
}
