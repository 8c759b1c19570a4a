//! Hermite and Smith normal forms of nonsingular 2x2 integer matrices.
//!
//! Convention: the Hermite form is the lower-triangular basis
//! `[[a, 0], [c, d]]` of the row module, with `a, d > 0` and `0 <= c < a`.
//! Two matrices have the same Hermite form iff they are related by a
//! left multiplication in GL2(Z).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::arith::ext_gcd;
use super::mat2::IMat2;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnfForm {
    a: BigInt,
    c: BigInt,
    d: BigInt,
}

impl HnfForm {
    /// Builds the form from its three entries, checking the invariants.
    pub fn from_entries(a: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if !a.is_positive() || !d.is_positive() || c.is_negative() || c >= a {
            return Err(Error::Invalid(format!("({a}, {c}, {d}) is not a reduced Hermite form")));
        }
        Ok(HnfForm { a, c, d })
    }

    pub(crate) fn from_entries_unchecked(a: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!(a.is_positive() && d.is_positive() && !c.is_negative() && c < a);
        HnfForm { a, c, d }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn matrix(&self) -> IMat2 {
        IMat2::new(self.a.clone(), 0, self.c.clone(), self.d.clone())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d
    }
}

/// Hermite form of the row module of `m` and the transform `u` with
/// `u * m = H`.
pub fn hnf(m: &IMat2) -> Result<(HnfForm, IMat2)> {
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    // Clear the (0,1) entry with a unimodular combination of the rows.
    let (g, x, y) = ext_gcd(&m.b, &m.d);
    let mut u = IMat2::new(&m.d / &g, -(&m.b / &g), x, y);
    let mut h = &u * m;
    debug_assert!(h.b.is_zero());
    if h.a.is_negative() {
        negate_row(&mut u, 0);
        negate_row(&mut h, 0);
    }
    if h.d.is_negative() {
        negate_row(&mut u, 1);
        negate_row(&mut h, 1);
    }
    let k = h.c.div_floor(&h.a);
    if !k.is_zero() {
        // row1 -= k * row0
        h.c -= &k * &h.a;
        u.c -= &k * &u.a;
        u.d -= &k * &u.b;
    }
    Ok((HnfForm::from_entries_unchecked(h.a, h.c, h.d), u))
}

fn negate_row(m: &mut IMat2, row: usize) {
    if row == 0 {
        m.a = -&m.a;
        m.b = -&m.b;
    } else {
        m.c = -&m.c;
        m.d = -&m.d;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfForm {
    pub d1: BigInt,
    pub d2: BigInt,
    pub left: IMat2,
    pub right: IMat2,
}

impl SnfForm {
    pub fn diagonal(&self) -> IMat2 {
        IMat2::diag(self.d1.clone(), self.d2.clone())
    }
}

/// Smith form: `left * m * right = diag(d1, d2)`, `d1 | d2`, both positive,
/// `left` and `right` in GL2(Z).
pub fn snf(m: &IMat2) -> Result<SnfForm> {
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    let mut w = m.clone();
    let mut left = IMat2::identity();
    let mut right = IMat2::identity();
    loop {
        // Plain elimination when the pivot already divides the entry; the
        // gcd step is only taken when it strictly lowers |pivot|, otherwise
        // it can cycle.
        if !w.c.is_zero() {
            let u = if !w.a.is_zero() && (&w.c % &w.a).is_zero() {
                IMat2::new(1, 0, -(&w.c / &w.a), 1)
            } else {
                let (g, s, t) = ext_gcd(&w.a, &w.c);
                IMat2::new(s, t, -(&w.c / &g), &w.a / &g)
            };
            w = &u * &w;
            left = &u * &left;
        }
        if !w.b.is_zero() {
            let v = if (&w.b % &w.a).is_zero() {
                IMat2::new(1, -(&w.b / &w.a), 0, 1)
            } else {
                let (g, s, t) = ext_gcd(&w.a, &w.b);
                IMat2::new(s, -(&w.b / &g), t, &w.a / &g)
            };
            w = &w * &v;
            right = &right * &v;
            continue;
        }
        if !w.c.is_zero() {
            continue;
        }
        if !(&w.d % &w.a).is_zero() {
            // row0 += row1 brings d into the first row; the next gcd step
            // strictly lowers the pivot.
            let u = IMat2::new(1, 1, 0, 1);
            w = &u * &w;
            left = &u * &left;
            continue;
        }
        break;
    }
    if w.a.is_negative() {
        negate_row(&mut w, 0);
        negate_row(&mut left, 0);
    }
    if w.d.is_negative() {
        negate_row(&mut w, 1);
        negate_row(&mut left, 1);
    }
    Ok(SnfForm { d1: w.a, d2: w.d, left, right })
}

/// Elementary divisors `(d1, d2)` only.
pub fn elementary_divisors(m: &IMat2) -> Result<(BigInt, BigInt)> {
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    let d1 = m.content();
    let d2 = m.det().abs() / &d1;
    Ok((d1, d2))
}
