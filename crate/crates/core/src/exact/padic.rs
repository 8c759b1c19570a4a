//! Truncated p-adic Smith factorization of integer matrices.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::arith::{is_prime, valuation};
use super::mat2::IMat2;
use super::modmat::ModMat;
use super::normal_form::snf;
use crate::error::{Error, Result};

/// `M ≡ left * diag(p^a, p^b) * right (mod p^k)` with `left`, `right`
/// invertible mod `p^k` and `a <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicSnf {
    pub p: u64,
    pub depth: u32,
    pub left: ModMat,
    pub right: ModMat,
    pub exponents: (u32, u32),
}

impl PadicSnf {
    pub fn diagonal(&self) -> ModMat {
        let q = self.p.pow(self.depth);
        let (a, b) = self.exponents;
        ModMat::new(q, [self.p.pow(a) as i128, 0, 0, self.p.pow(b) as i128])
    }

    pub fn recompose(&self) -> ModMat {
        self.left.mul(&self.diagonal()).mul(&self.right)
    }
}

pub fn padic_snf(m: &IMat2, p: u64, depth: u32) -> Result<PadicSnf> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let modulus = p
        .checked_pow(depth)
        .ok_or_else(|| Error::Invalid(format!("{p}^{depth} does not fit in 64 bits")))?;
    let det = m.det();
    if det.is_zero() {
        return Err(Error::NotRegular { valuation: u64::MAX, depth });
    }
    let v = valuation(&det, p);
    if v >= depth as u64 {
        return Err(Error::NotRegular { valuation: v, depth });
    }
    let s = snf(m)?;
    let a = valuation(&s.d1, p) as u32;
    let b = valuation(&s.d2, p) as u32;
    // d_i = p^e_i * u_i with u_i prime to p, so diag(d1, d2) = diag(p^a, p^b) diag(u1, u2).
    let u1 = &s.d1 / BigInt::from(p).pow(a);
    let u2 = &s.d2 / BigInt::from(p).pow(b);
    let left_inv = s.left.inverse_unimodular().expect("snf transform is unimodular");
    let right_inv = s.right.inverse_unimodular().expect("snf transform is unimodular");
    let units = IMat2::diag(u1, u2);
    let left = ModMat::from_imat(modulus, &left_inv);
    let right = ModMat::from_imat(modulus, &(&units * &right_inv));
    debug_assert!(left.is_invertible() && right.is_invertible());
    let out = PadicSnf { p, depth, left, right, exponents: (a, b) };
    debug_assert_eq!(out.recompose(), ModMat::from_imat(modulus, m));
    Ok(out)
}

/// p-adic valuation of the determinant, as a small integer.
pub fn det_valuation(m: &IMat2, p: u64) -> Option<u32> {
    let det = m.det();
    if det.is_zero() {
        return None;
    }
    valuation(&det, p).to_u32()
}
