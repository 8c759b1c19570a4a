//! Working precision, inverse temperatures and values with error bounds.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rat;

pub const DEFAULT_DIGITS: usize = 50;

const GUARD_BITS: usize = 64;
const RM: RoundingMode = RoundingMode::ToEven;

/// Arbitrary-precision evaluation context.
pub struct Ctx {
    digits: usize,
    prec: usize,
    consts: RefCell<Consts>,
}

impl Ctx {
    pub fn new(digits: usize) -> Result<Self> {
        if digits == 0 || digits > 10_000 {
            return Err(Error::Invalid(format!("precision {digits} out of range 1..=10000")));
        }
        let prec = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        let consts = Consts::new().map_err(|e| Error::Invalid(format!("constant cache: {e:?}")))?;
        Ok(Ctx { digits, prec, consts: RefCell::new(consts) })
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_u64(0, self.prec)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_u64(1, self.prec)
    }

    pub fn u64(&self, n: u64) -> BigFloat {
        BigFloat::from_u64(n, self.prec)
    }

    pub fn int(&self, n: &BigInt) -> BigFloat {
        match n.to_i64() {
            Some(k) => BigFloat::from_i64(k, self.prec),
            None => self.parse(&n.to_string()),
        }
    }

    pub fn rat(&self, r: &Rat) -> BigFloat {
        self.div(&self.int(r.numer()), &self.int(r.denom()))
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        self.parse(&format!("{x:e}"))
    }

    fn parse(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut self.consts.borrow_mut())
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, RM, &mut self.consts.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.consts.borrow_mut())
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn le(&self, a: &BigFloat, b: &BigFloat) -> bool {
        matches!(a.cmp(b), Some(c) if c <= 0)
    }

    pub fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if self.le(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// `x^y` for `x > 0`.
    pub fn pow(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        self.exp(&self.mul(y, &self.ln(x)))
    }

    /// `n^{-β}` for a positive rational `n`; exact before rounding when `β`
    /// is an integer.
    pub fn pow_neg(&self, n: &Rat, beta: &Beta) -> BigFloat {
        match beta.as_integer() {
            Some(k) if k.unsigned_abs() <= 4096 => {
                let k = k as i32;
                let r = if k >= 0 { n.recip().pow(k) } else { n.pow(-k) };
                self.rat(&r)
            }
            _ => self.pow(&self.rat(&n.recip()), &beta.value(self)),
        }
    }

    /// Bound on accumulated rounding error after `ops` operations on
    /// quantities of size at most `magnitude`.
    pub fn slack(&self, magnitude: &BigFloat, ops: u64) -> BigFloat {
        let eps = self.div(&self.one(), &self.pow2((self.prec - 16) as u32));
        self.mul(&self.mul(&self.abs(magnitude), &self.u64(ops.max(1) * 4)), &eps)
    }

    fn pow2(&self, k: u32) -> BigFloat {
        self.int(&(BigInt::one() << k))
    }

    /// Decimal rendering rounded to the context's digits.
    pub fn fmt(&self, x: &BigFloat) -> String {
        format_digits(&x.format(Radix::Dec, RM, &mut self.consts.borrow_mut()).unwrap_or_else(|_| "nan".into()), self.digits)
    }

    pub fn to_f64(&self, x: &BigFloat) -> f64 {
        self.fmt(x).parse().unwrap_or(f64::NAN)
    }
}

/// Rounds a `d.ddd...e±x` string to `digits` significant digits.
fn format_digits(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None if s.bytes().all(|b| b == b'0' || b == b'.' || b == b'-') => return "0".into(),
        None => return s.to_string(),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    if ds.iter().all(|&d| d == 0) {
        return "0".into();
    }
    let mut exp = exp;
    if ds.len() > digits {
        let up = ds[digits] >= 5;
        ds.truncate(digits);
        if up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if ds.len() > 1 {
        out.push('.');
        out.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
    }
    out.push_str(&format!("e{exp}"));
    out
}

/// Inverse temperature, kept as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beta {
    text: String,
    exact: Rat,
}

impl Beta {
    /// Accepts integers, decimals (`2.5`) and fractions (`5/2`).
    pub fn parse(s: &str) -> Result<Beta> {
        let t = s.trim();
        let bad = || Error::Invalid(format!("cannot parse beta {s:?}"));
        let exact = if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rat::new(n, d)
        } else {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
            if ip.is_empty() && fp.is_empty() || !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{ip}{fp}").trim_start_matches('0').parse().unwrap_or_else(|_| BigInt::zero());
            let r = Rat::new(digits, BigInt::from(10).pow(fp.len() as u32));
            if neg {
                -r
            } else {
                r
            }
        };
        Ok(Beta { text: render_rat(&exact), exact })
    }

    pub fn from_rat(r: Rat) -> Beta {
        Beta { text: render_rat(&r), exact: r }
    }

    pub fn exact(&self) -> &Rat {
        &self.exact
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.exact.is_integer().then(|| self.exact.to_integer().to_i64()).flatten()
    }

    pub fn value(&self, ctx: &Ctx) -> BigFloat {
        ctx.rat(&self.exact)
    }

    /// `k β`, used for the `det^{k it}` variant of the dynamics.
    pub fn scaled(&self, k: u32) -> Beta {
        Beta::from_rat(&self.exact * Rat::from_integer(k.into()))
    }

    pub fn gt(&self, x: i64) -> bool {
        self.exact > Rat::from_integer(x.into())
    }
}

fn render_rat(r: &Rat) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    // Terminating decimals print as decimals.
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % 2u32).is_zero() {
        d /= 2u32;
        twos += 1;
    }
    while (&d % 5u32).is_zero() {
        d /= 5u32;
        fives += 1;
    }
    if !d.is_one() {
        return r.to_string();
    }
    let places = twos.max(fives);
    let scaled = (r * Rat::from_integer(BigInt::from(10).pow(places))).to_integer();
    let neg = scaled.is_negative();
    let digits = format!("{:0>width$}", scaled.abs(), width = places as usize + 1);
    let (ip, fp) = digits.split_at(digits.len() - places as usize);
    format!("{}{ip}.{fp}", if neg { "-" } else { "" })
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// `value ± bound`.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: BigFloat,
    pub bound: BigFloat,
}

impl Certified {
    pub fn new(value: BigFloat, bound: BigFloat) -> Self {
        Certified { value, bound }
    }

    pub fn exact(ctx: &Ctx, value: BigFloat) -> Self {
        Certified { value, bound: ctx.zero() }
    }

    pub fn lower(&self, ctx: &Ctx) -> BigFloat {
        ctx.sub(&self.value, &self.bound)
    }

    pub fn upper(&self, ctx: &Ctx) -> BigFloat {
        ctx.add(&self.value, &self.bound)
    }

    /// `|self - x| ≤ bound + extra`.
    pub fn agrees(&self, ctx: &Ctx, x: &BigFloat, extra: &BigFloat) -> bool {
        ctx.le(&ctx.abs(&ctx.sub(&self.value, x)), &ctx.add(&self.bound, extra))
    }

    pub fn render(&self, ctx: &Ctx) -> CertifiedOut {
        CertifiedOut { value: ctx.fmt(&self.value), bound: ctx.fmt(&self.bound) }
    }
}

/// Decimal strings of a certified value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedOut {
    pub value: String,
    pub bound: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn beta_parsing() {
        assert_eq!(Beta::parse("3").unwrap().as_integer(), Some(3));
        assert_eq!(Beta::parse("2.5").unwrap().exact(), &rat(5, 2));
        assert_eq!(Beta::parse("5/2").unwrap().to_string(), "2.5");
        assert_eq!(Beta::parse("1/3").unwrap().to_string(), "1/3");
        assert_eq!(Beta::parse("-0.25").unwrap().to_string(), "-0.25");
        assert!(Beta::parse("x").is_err());
        assert!(Beta::parse("1/0").is_err());
    }

    #[test]
    fn rounding_strings() {
        assert_eq!(format_digits("6.66666e-1", 3), "6.67e-1");
        assert_eq!(format_digits("9.996e+2", 3), "1e3");
        assert_eq!(format_digits("2.5e+0", 50), "2.5e0");
        assert_eq!(format_digits("0.0e+0", 5), "0");
        assert_eq!(format_digits("0.0", 5), "0");
    }

    #[test]
    fn powers() {
        let ctx = Ctx::new(40).unwrap();
        let a = ctx.pow_neg(&rat(2, 1), &Beta::parse("3").unwrap());
        assert_eq!(ctx.fmt(&a), "1.25e-1");
        let b = ctx.pow_neg(&rat(4, 1), &Beta::parse("2.5").unwrap());
        assert_eq!(ctx.fmt(&b), "3.125e-2");
        assert!((ctx.to_f64(&ctx.pow_neg(&rat(3, 1), &Beta::parse("1.5").unwrap())) - 3f64.powf(-1.5)).abs() < 1e-15);
    }
}
