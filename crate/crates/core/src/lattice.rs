//! Lattices in Q^2 commensurable with Z^2.
//!
//! A lattice is stored as `(q, H)` where `H` is the Hermite form of the
//! integral lattice `q L` and `q` is minimal. Equality and hashing are
//! structural, which makes lattices usable as basis labels.
//!
//! Points of Q^2 are pairs; a matrix `g` acts on them as on column vectors,
//! `act(g, L) = { g x : x in L }`. With this orientation the lattice
//! attached to the coset `Γ s` is `s^-1 Z^2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::exact::arith::{ext_gcd, factorize_big, is_prime};
use crate::exact::{elementary_divisors, hnf, HnfForm, IMat2, ModMat, QMat2, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    q: BigInt,
    hnf: HnfForm,
}

/// Incremental Hermite reduction of a row module in Z^2.
#[derive(Default)]
struct RowReducer {
    a: BigInt,
    c: BigInt,
    d: BigInt,
}

impl RowReducer {
    fn push(&mut self, x: &BigInt, y: &BigInt) {
        if y.is_zero() && self.d.is_zero() {
            self.a = self.a.gcd(x);
            return;
        }
        let (g, s, t) = ext_gcd(&self.d, y);
        let new_c = &s * &self.c + &t * x;
        let leftover = (y * &self.c - &self.d * x) / &g;
        self.a = self.a.gcd(&leftover);
        self.c = new_c;
        self.d = g;
    }

    fn finish(mut self) -> Result<HnfForm> {
        if self.a.is_zero() || self.d.is_zero() {
            return Err(Error::Singular);
        }
        self.c = self.c.mod_floor(&self.a);
        HnfForm::from_entries(self.a, self.c, self.d)
    }
}

impl Lattice {
    /// The lattice `(1/q) rowspace(h)`, normalized so that `q` is minimal.
    pub fn from_parts(q: BigInt, h: HnfForm) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Invalid("denominator must be positive".into()));
        }
        let g = q.gcd(h.a()).gcd(h.c()).gcd(h.d());
        let h = HnfForm::from_entries(h.a() / &g, h.c() / &g, h.d() / &g)?;
        Ok(Lattice { q: q / g, hnf: h })
    }

    /// Lattice spanned by the rows of `b`.
    pub fn from_basis(b: &QMat2) -> Result<Self> {
        if b.det().is_zero() {
            return Err(Error::Singular);
        }
        let (k, m) = b.clear_denominators();
        let (h, _) = hnf(&m)?;
        Lattice::from_parts(k, h)
    }

    /// Lattice generated by finitely many points (rank 2 required).
    pub fn from_generators(points: &[[Rat; 2]]) -> Result<Self> {
        let q = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut red = RowReducer::default();
        for p in points {
            let x = (&p[0] * Rat::from_integer(q.clone())).to_integer();
            let y = (&p[1] * Rat::from_integer(q.clone())).to_integer();
            red.push(&x, &y);
        }
        Lattice::from_parts(q, red.finish()?)
    }

    pub fn z2() -> Self {
        Lattice { q: BigInt::one(), hnf: HnfForm::from_entries(BigInt::one(), BigInt::zero(), BigInt::one()).unwrap() }
    }

    /// `r Z^2` for a nonzero rational `r`.
    pub fn scalar(r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Singular);
        }
        Lattice::from_basis(&QMat2::diag(r.clone(), r.clone()))
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn hnf(&self) -> &HnfForm {
        &self.hnf
    }

    /// Basis rows as a rational matrix.
    pub fn basis(&self) -> QMat2 {
        self.hnf.matrix().to_q().scale(&Rat::new(BigInt::one(), self.q.clone()))
    }

    pub fn basis_points(&self) -> [[Rat; 2]; 2] {
        let b = self.basis();
        [[b.a, b.b], [b.c, b.d]]
    }

    /// Covolume `|det basis|`.
    pub fn covolume(&self) -> Rat {
        Rat::new(self.hnf.det(), &self.q * &self.q)
    }

    pub fn contains_point(&self, x: &[Rat; 2]) -> bool {
        let q = Rat::from_integer(self.q.clone());
        let x0 = &x[0] * &q;
        let x1 = &x[1] * &q;
        let y1 = &x1 / Rat::from_integer(self.hnf.d().clone());
        if !y1.is_integer() {
            return false;
        }
        let y0 = (x0 - &y1 * Rat::from_integer(self.hnf.c().clone())) / Rat::from_integer(self.hnf.a().clone());
        y0.is_integer()
    }

    /// Canonical representative of `x + L`: coordinates in the Hermite
    /// basis reduced into `[0, 1)`.
    pub fn reduce_point(&self, x: &[Rat; 2]) -> [Rat; 2] {
        let q = Rat::from_integer(self.q.clone());
        let a = Rat::from_integer(self.hnf.a().clone()) / &q;
        let c = Rat::from_integer(self.hnf.c().clone()) / &q;
        let d = Rat::from_integer(self.hnf.d().clone()) / &q;
        let k1 = (&x[1] / &d).floor();
        let x0 = &x[0] - &k1 * &c;
        let x1 = &x[1] - &k1 * &d;
        let k0 = (&x0 / &a).floor();
        [x0 - k0 * a, x1]
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> bool {
        other.basis_points().iter().all(|p| self.contains_point(p))
    }

    pub fn contains_z2(&self) -> bool {
        // q L ⊇ q Z^2 iff q e1, q e2 lie in the row module of H.
        self.contains(&Lattice::z2())
    }

    /// `[L : Z^2]` for a superlattice of Z^2.
    pub fn index(&self) -> Result<BigInt> {
        if !self.contains_z2() {
            return Err(Error::NotSuperlattice);
        }
        Ok((&self.q * &self.q) / self.hnf.det())
    }

    /// Index as a machine integer, panicking on overflow. Only for
    /// superlattices of Z^2.
    pub fn index_u64(&self) -> u64 {
        self.index().expect("superlattice of Z^2").to_u64().expect("index fits in u64")
    }

    /// `{ g x : x in L }` for `g` acting on column vectors.
    pub fn act(&self, g: &QMat2) -> Result<Lattice> {
        self.right_mul(&g.transpose())
    }

    /// `{ x g : x in L }` for `g` acting on row vectors.
    pub fn right_mul(&self, g: &QMat2) -> Result<Lattice> {
        if g.det().is_zero() {
            return Err(Error::Singular);
        }
        Lattice::from_basis(&(&self.basis() * g))
    }

    pub fn scale(&self, r: &Rat) -> Result<Lattice> {
        self.right_mul(&QMat2::diag(r.clone(), r.clone()))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let [p0, p1] = self.basis_points();
        let [p2, p3] = other.basis_points();
        Lattice::from_generators(&[p0, p1, p2, p3]).expect("sum of full-rank lattices has full rank")
    }

    /// `{ y : y . x in Z for all x in L }`.
    pub fn dual(&self) -> Lattice {
        let b = self.basis();
        Lattice::from_basis(&b.inverse().expect("nonsingular basis").transpose()).expect("nonsingular")
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// The matrix `s ∈ M2(Z)` with `L = s^-1 Z^2`, for `L ⊇ Z^2`. Its
    /// left coset `Γ s` is canonical: the returned matrix is in Hermite form.
    pub fn coset_matrix(&self) -> Result<IMat2> {
        if !self.contains_z2() {
            return Err(Error::NotSuperlattice);
        }
        // L = B^T Z^2 with B the row basis, so s = (B^T)^-1.
        let s = self.basis().transpose().inverse()?;
        let s = s.to_integral().expect("superlattice gives integral inverse");
        let (h, _) = hnf(&s)?;
        Ok(h.matrix())
    }

    /// Elementary divisors `(d1, d2)` of `L / Z^2`, `L / Z^2 ≅ Z/d1 ⊕ Z/d2`.
    pub fn class(&self) -> Result<(BigInt, BigInt)> {
        elementary_divisors(&self.coset_matrix()?)
    }

    /// Exponent of `L / Z^2`.
    pub fn exponent(&self) -> Result<BigInt> {
        Ok(self.class()?.1)
    }

    /// All `L' ⊇ self` with `[L' : self] = n`, in lattice order.
    pub fn superlattices_of(&self, n: u64) -> Vec<Lattice> {
        let g = self.basis().transpose();
        let mut out: Vec<Lattice> = superlattices(n)
            .into_iter()
            .map(|m| m.act(&g).expect("nonsingular basis"))
            .collect();
        out.sort();
        out
    }

    /// All `L'' ⊆ self` with `[self : L''] = n`, in lattice order.
    pub fn sublattices_of(&self, n: u64) -> Vec<Lattice> {
        let g = self.basis().transpose();
        let mut out: Vec<Lattice> = sublattices_of_z2(n)
            .into_iter()
            .map(|m| m.act(&g).expect("nonsingular basis"))
            .collect();
        out.sort();
        out
    }

    /// `[L : Z^2]`-graded depth `j` with `[L : Z^2] = p^j`, if `L` is a p-lattice.
    pub fn p_depth(&self, p: u64) -> Option<u32> {
        let n = self.index().ok()?;
        let mut n = n;
        let mut j = 0;
        let pb = BigInt::from(p);
        while (&n % &pb).is_zero() {
            n /= &pb;
            j += 1;
        }
        n.is_one().then_some(j)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/{})[{}, {}, {}]", self.q, self.hnf.a(), self.hnf.c(), self.hnf.d())
    }
}

pub(crate) fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Lattice", 2)?;
        st.serialize_field("q", &big_to_json(&self.q))?;
        st.serialize_field(
            "hnf",
            &[big_to_json(self.hnf.a()), big_to_json(self.hnf.c()), big_to_json(self.hnf.d())],
        )?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            q: serde_json::Value,
            hnf: [serde_json::Value; 3],
        }
        fn parse<E: de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
            match v {
                serde_json::Value::Number(n) => n.to_string().parse().map_err(E::custom),
                serde_json::Value::String(s) => s.parse().map_err(E::custom),
                _ => Err(E::custom("expected integer")),
            }
        }
        let raw = Raw::deserialize(d)?;
        let [a, c, dd] = &raw.hnf;
        let h = HnfForm::from_entries(parse(a)?, parse(c)?, parse(dd)?).map_err(de::Error::custom)?;
        let l = Lattice::from_parts(parse(&raw.q)?, h).map_err(de::Error::custom)?;
        if l.q != parse::<D::Error>(&raw.q)? {
            return Err(de::Error::custom("lattice denominator is not minimal"));
        }
        Ok(l)
    }
}

/// `[L : L0]` generalized to commensurable pairs: `|L/(L∩L0)| / |L0/(L∩L0)|`.
pub fn rel_index(l: &Lattice, l0: &Lattice) -> Rat {
    l0.covolume() / l.covolume()
}

/// Sublattices of Z^2 of index `n`, as Hermite row modules.
fn sublattices_of_z2(n: u64) -> Vec<Lattice> {
    let mut out = Vec::new();
    for a in crate::exact::arith::divisors(n) {
        let d = n / a;
        for c in 0..a {
            let h = HnfForm::from_entries(BigInt::from(a), BigInt::from(c), BigInt::from(d)).unwrap();
            out.push(Lattice { q: BigInt::one(), hnf: h });
        }
    }
    out
}

/// All lattices `L ⊇ Z^2` with `[L : Z^2] = n`, each once, in lattice order.
///
/// `n L` runs over the index-`n` sublattices of Z^2.
pub fn superlattices(n: u64) -> Vec<Lattice> {
    assert!(n >= 1, "index must be positive");
    let q = BigInt::from(n);
    let mut out: Vec<Lattice> = sublattices_of_z2(n)
        .into_iter()
        .map(|m| Lattice::from_parts(q.clone(), m.hnf).unwrap())
        .collect();
    out.sort();
    out
}

/// `L_p`: preimage in `L` of the p-Sylow subgroup of `L / Z^2`.
pub fn localize(l: &Lattice, p: u64) -> Result<Lattice> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = l.index()?;
    let e = crate::exact::arith::valuation(&n, p);
    let bound = Lattice::scalar(&Rat::new(BigInt::one(), BigInt::from(p).pow(e as u32)))?;
    Ok(l.intersect(&bound))
}

/// Prime-by-prime decomposition of a superlattice of Z^2.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct PrimeParts {
    parts: BTreeMap<u64, Lattice>,
}

impl PrimeParts {
    pub fn get(&self, p: u64) -> Option<&Lattice> {
        self.parts.get(&p)
    }

    /// The p-part, `Z^2` when `p` is outside the support.
    pub fn part(&self, p: u64) -> Lattice {
        self.parts.get(&p).cloned().unwrap_or_else(Lattice::z2)
    }

    pub fn support(&self) -> Vec<u64> {
        self.parts.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Lattice)> {
        self.parts.iter()
    }

    /// Sum of all parts, which recovers the original lattice.
    pub fn reconstruct(&self) -> Lattice {
        self.parts.values().fold(Lattice::z2(), |acc, l| acc.sum(l))
    }

    /// Sum of the parts at primes other than `p`.
    pub fn off_part(&self, p: u64) -> Lattice {
        self.parts
            .iter()
            .filter(|(&q, _)| q != p)
            .fold(Lattice::z2(), |acc, (_, l)| acc.sum(l))
    }
}

pub fn tensor_parts(l: &Lattice) -> Result<PrimeParts> {
    let n = l.index()?;
    let mut parts = BTreeMap::new();
    if n.is_one() {
        return Ok(PrimeParts { parts });
    }
    for (p, _) in factorize_big(&n) {
        let p = p.to_u64().ok_or_else(|| Error::Invalid("prime factor too large".into()))?;
        parts.insert(p, localize(l, p)?);
    }
    Ok(PrimeParts { parts })
}

/// `w L` for `w ∈ GL2(Ẑ)` known modulo `N`. The action on `L / Z^2` only
/// sees `w` modulo the exponent of `L / Z^2`, which must divide `N`.
pub fn act_integral(w: &ModMat, l: &Lattice) -> Result<Lattice> {
    if !w.is_invertible() {
        return Err(Error::NotInvertibleMod(w.modulus()));
    }
    let exp = l.exponent()?;
    if !(BigInt::from(w.modulus()) % &exp).is_zero() {
        return Err(Error::Incompatible { modulus: w.modulus(), exponent: exp.to_string() });
    }
    let moved = l.act(&w.lift().to_q())?;
    Ok(moved.sum(&Lattice::z2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn lat(m: [[(i64, i64); 2]; 2]) -> Lattice {
        Lattice::from_basis(&QMat2::from_ratios(m)).unwrap()
    }

    #[test]
    fn basic_constructors() {
        assert_eq!(Lattice::from_basis(&QMat2::identity()).unwrap(), Lattice::z2());
        let l = lat([[(1, 1), (0, 1)], [(0, 1), (1, 5)]]);
        assert_eq!(l.index().unwrap(), BigInt::from(5));
        let l = lat([[(1, 2), (0, 1)], [(0, 1), (1, 3)]]);
        assert_eq!(l.q(), &BigInt::from(6));
        assert_eq!(l.index().unwrap(), BigInt::from(6));
        assert!(Lattice::from_basis(&QMat2::zero()).is_err());
    }

    #[test]
    fn relative_index_examples() {
        let z2 = Lattice::z2();
        let half = Lattice::scalar(&rat(1, 3)).unwrap();
        assert_eq!(rel_index(&z2, &z2), rat(1, 1));
        assert_eq!(rel_index(&half, &z2), rat(9, 1));
        assert_eq!(rel_index(&z2, &half), rat(1, 9));
        let l = lat([[(1, 1), (0, 1)], [(0, 1), (1, 3)]]);
        assert_eq!(rel_index(&l, &z2), rat(3, 1));
    }

    #[test]
    fn sum_and_intersection() {
        let a = lat([[(1, 2), (0, 1)], [(0, 1), (1, 1)]]);
        let b = lat([[(1, 1), (0, 1)], [(0, 1), (1, 2)]]);
        assert_eq!(a.sum(&b), Lattice::scalar(&rat(1, 2)).unwrap());
        assert_eq!(a.intersect(&b), Lattice::z2());
        assert_eq!(a.intersect(&a), a);
        assert_eq!(Lattice::z2().sum(&a), a);
    }

    #[test]
    fn small_superlattice_counts() {
        assert_eq!(superlattices(1), vec![Lattice::z2()]);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(superlattices(p).len() as u64, p + 1);
        }
        assert_eq!(superlattices(4).len(), 7);
    }

    #[test]
    fn coset_matrix_round_trip() {
        for l in superlattices(12) {
            let s = l.coset_matrix().unwrap();
            let back = Lattice::z2().act(&s.to_q().inverse().unwrap()).unwrap();
            assert_eq!(back, l);
            assert_eq!(s.det(), BigInt::from(12));
        }
    }

    #[test]
    fn localization_of_index_six() {
        let l = lat([[(1, 2), (0, 1)], [(0, 1), (1, 3)]]);
        let l2 = localize(&l, 2).unwrap();
        let l3 = localize(&l, 3).unwrap();
        assert_eq!(l2.index().unwrap(), BigInt::from(2));
        assert_eq!(l3.index().unwrap(), BigInt::from(3));
        assert_eq!(l2.sum(&l3), l);
        assert_eq!(localize(&Lattice::z2(), 5).unwrap(), Lattice::z2());
        let p_lat = &superlattices(9)[3];
        assert_eq!(&localize(p_lat, 3).unwrap(), p_lat);
    }

    #[test]
    fn tensor_parts_support() {
        assert!(tensor_parts(&Lattice::z2()).unwrap().support().is_empty());
        let l = &superlattices(7)[0];
        let parts = tensor_parts(l).unwrap();
        assert_eq!(parts.support(), vec![7]);
        assert_eq!(parts.get(7), Some(l));
    }

    #[test]
    fn action_examples() {
        let z2 = Lattice::z2();
        let l = &superlattices(6)[2];
        assert_eq!(&l.act(&QMat2::identity()).unwrap(), l);
        let gamma = IMat2::from_i64([[2, 1], [5, 3]]).to_q();
        assert_eq!(z2.act(&gamma).unwrap(), z2);
        let s = QMat2::diag(rat(1, 1), rat(5, 1));
        let ls = z2.act(&s.inverse().unwrap()).unwrap();
        assert_eq!(ls, lat([[(1, 1), (0, 1)], [(0, 1), (1, 5)]]));
    }

    #[test]
    fn integral_action_swaps_axes() {
        let w = ModMat::new(4, [0, 1, 1, 0]);
        let lx = lat([[(1, 2), (0, 1)], [(0, 1), (1, 1)]]);
        let ly = lat([[(1, 1), (0, 1)], [(0, 1), (1, 2)]]);
        let ldiag = Lattice::from_generators(&[[rat(1, 2), rat(1, 2)], [rat(1, 1), rat(0, 1)], [rat(0, 1), rat(1, 1)]]).unwrap();
        let mut all = superlattices(2);
        all.sort();
        let mut expected = vec![lx.clone(), ly.clone(), ldiag.clone()];
        expected.sort();
        assert_eq!(all, expected);
        assert_eq!(act_integral(&w, &lx).unwrap(), ly);
        assert_eq!(act_integral(&w, &ly).unwrap(), lx);
        assert_eq!(act_integral(&w, &ldiag).unwrap(), ldiag);
        assert_eq!(act_integral(&ModMat::identity(4), &lx).unwrap(), lx);
        assert_eq!(act_integral(&w, &Lattice::z2()).unwrap(), Lattice::z2());
    }

    #[test]
    fn integral_action_needs_compatible_modulus() {
        let w = ModMat::new(2, [0, 1, 1, 0]);
        let cyclic = superlattices(4)
            .into_iter()
            .find(|l| l.exponent().unwrap() == BigInt::from(4))
            .unwrap();
        assert!(matches!(act_integral(&w, &cyclic), Err(Error::Incompatible { .. })));
    }

    #[test]
    fn json_shape() {
        let l = lat([[(1, 2), (0, 1)], [(0, 1), (1, 3)]]);
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(v, serde_json::json!({"q": 6, "hnf": [3, 0, 2]}));
        let back: Lattice = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
    }
}
