//! 2x2 matrices over Z/m and enumeration of SL2(Z/m).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::arith::{inv_mod, prime_divisors};
use super::mat2::IMat2;
use crate::error::{Error, Result};

/// Default cap on the size of an `sl2_mod` enumeration.
pub const DEFAULT_SL2_CAP: u128 = 1_000_000;

/// Row-major `[[a, b], [c, d]]` with entries reduced into `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModMat {
    modulus: u64,
    e: [u64; 4],
}

impl ModMat {
    pub fn new(modulus: u64, entries: [i128; 4]) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let m = modulus as i128;
        ModMat { modulus, e: entries.map(|x| x.rem_euclid(m) as u64) }
    }

    pub fn from_imat(modulus: u64, x: &IMat2) -> Self {
        let m = BigInt::from(modulus);
        let red = |v: &BigInt| -> u64 { v.mod_floor(&m).try_into().expect("reduced entry fits") };
        ModMat { modulus, e: [red(&x.a), red(&x.b), red(&x.c), red(&x.d)] }
    }

    pub fn identity(modulus: u64) -> Self {
        ModMat::new(modulus, [1, 0, 0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    fn mulmod(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.modulus as u128) as u64
    }

    fn addmod(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.modulus as u128) as u64
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        let m = self.modulus as u128;
        ((self.mulmod(a, d) as u128 + m - self.mulmod(b, c) as u128) % m) as u64
    }

    pub fn mul(&self, o: &ModMat) -> ModMat {
        assert_eq!(self.modulus, o.modulus, "moduli differ");
        let [a, b, c, d] = self.e;
        let [p, q, r, s] = o.e;
        ModMat {
            modulus: self.modulus,
            e: [
                self.addmod(self.mulmod(a, p), self.mulmod(b, r)),
                self.addmod(self.mulmod(a, q), self.mulmod(b, s)),
                self.addmod(self.mulmod(c, p), self.mulmod(d, r)),
                self.addmod(self.mulmod(c, q), self.mulmod(d, s)),
            ],
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.det().gcd(&self.modulus) == 1
    }

    pub fn inverse(&self) -> Result<ModMat> {
        let m = self.modulus as i128;
        let di = inv_mod(self.det() as i128, m).ok_or(Error::NotInvertibleMod(self.modulus))?;
        let [a, b, c, d] = self.e.map(|x| x as i128);
        Ok(ModMat::new(self.modulus, [d * di, -b * di, -c * di, a * di]))
    }

    /// Reduction to a divisor of the modulus.
    pub fn reduce(&self, n: u64) -> ModMat {
        assert!(self.modulus.is_multiple_of(n), "{n} does not divide {}", self.modulus);
        ModMat::new(n, self.e.map(|x| x as i128))
    }

    /// Representative lift with entries in `[0, m)`.
    pub fn lift(&self) -> IMat2 {
        let [a, b, c, d] = self.e;
        IMat2::new(a, b, c, d)
    }
}

impl fmt::Display for ModMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a}, {b}], [{c}, {d}]] mod {}", self.modulus)
    }
}

/// `|SL2(Z/m)| = m^3 prod_{p | m} (1 - p^-2)`.
pub fn sl2_order(m: u64) -> u128 {
    let mut n = (m as u128).pow(3);
    for p in prime_divisors(m) {
        let p = p as u128;
        n = n / (p * p) * (p * p - 1);
    }
    n
}

/// All elements of SL2(Z/m), lexicographic in `(a, b, c, d)`.
pub fn sl2_mod(m: u64, cap: u128) -> Result<Vec<ModMat>> {
    if m == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    let size = sl2_order(m);
    if size > cap {
        return Err(Error::CapExceeded { what: "SL2(Z/m)", size, cap });
    }
    let one = 1 % m;
    let mut out = Vec::with_capacity(size as usize);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let x = ModMat { modulus: m, e: [a, b, c, d] };
                    if x.det() == one {
                        out.push(x);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(sl2_mod(1, DEFAULT_SL2_CAP).unwrap().len(), 1);
        assert_eq!(sl2_mod(2, DEFAULT_SL2_CAP).unwrap().len(), 6);
        assert_eq!(sl2_mod(3, DEFAULT_SL2_CAP).unwrap().len(), 24);
    }

    #[test]
    fn brute_force_mod_2_and_3() {
        for m in [2u64, 3] {
            let mut count = 0;
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        for d in 0..m {
                            if (a * d + m * m - b * c) % m == 1 {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(count as usize, sl2_mod(m, DEFAULT_SL2_CAP).unwrap().len());
        }
    }

    #[test]
    fn enumeration_matches_product_formula() {
        for m in 1..=12u64 {
            let elems = sl2_mod(m, DEFAULT_SL2_CAP).unwrap();
            assert_eq!(elems.len() as u128, sl2_order(m), "m = {m}");
            let mut sorted = elems.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), elems.len());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(sl2_mod(200, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn inverse_mod_m() {
        let x = ModMat::new(8, [3, 1, 2, 1]);
        assert!(x.is_invertible());
        assert_eq!(x.mul(&x.inverse().unwrap()), ModMat::identity(8));
        assert!(ModMat::new(8, [2, 0, 0, 1]).inverse().is_err());
    }
}
