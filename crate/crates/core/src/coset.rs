//! Double cosets of `SL2(Z)` in `M2(Z)+` and the semidirect pair
//! `(M2(Q) ⋊ GL2+(Q), M2(Z) ⋊ SL2(Z))`.
//!
//! Semidirect elements are pairs `(m, g)` with product
//! `(m, g)(n, h) = (m + n g^-1, g h)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeTuple, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::dedekind_psi;
use crate::exact::{elementary_divisors, hnf, sl2_mod, IMat2, ModMat, QMat2, Rat, DEFAULT_SL2_CAP};
use crate::lattice::{big_to_json, Lattice};

/// `Γ diag(d1, d2) Γ` with `d1 | d2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleCoset {
    d1: BigInt,
    d2: BigInt,
}

impl DoubleCoset {
    pub fn new(d1: impl Into<BigInt>, d2: impl Into<BigInt>) -> Result<Self> {
        let (d1, d2) = (d1.into(), d2.into());
        if !d1.is_positive() || !d2.is_positive() || !(&d2 % &d1).is_zero() {
            return Err(Error::Invalid(format!("({d1},{d2}) is not an elementary divisor pair")));
        }
        Ok(DoubleCoset { d1, d2 })
    }

    pub fn identity() -> Self {
        DoubleCoset { d1: BigInt::one(), d2: BigInt::one() }
    }

    /// `u_p = [diag(p, p)]`.
    pub fn u(p: u64) -> Self {
        DoubleCoset { d1: p.into(), d2: p.into() }
    }

    /// `v_p = [diag(1, p)]`.
    pub fn v(p: u64) -> Self {
        DoubleCoset { d1: BigInt::one(), d2: p.into() }
    }

    pub fn d1(&self) -> &BigInt {
        &self.d1
    }

    pub fn d2(&self) -> &BigInt {
        &self.d2
    }

    pub fn det(&self) -> BigInt {
        &self.d1 * &self.d2
    }

    pub fn is_identity(&self) -> bool {
        self.d1.is_one() && self.d2.is_one()
    }

    pub fn is_scalar(&self) -> bool {
        self.d1 == self.d2
    }

    pub fn representative(&self) -> IMat2 {
        IMat2::diag(self.d1.clone(), self.d2.clone())
    }

    /// Whether the determinant is a power of `p` (including `p^0`).
    pub fn is_power_of(&self, p: u64) -> bool {
        let mut n = self.det();
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
        }
        n.is_one()
    }

    /// `R_Γ = ψ(d2/d1)`, the number of right cosets, in closed form.
    pub fn coset_count(&self) -> BigInt {
        dedekind_psi(&(&self.d2 / &self.d1))
    }
}

impl fmt::Display for DoubleCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

impl Serialize for DoubleCoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&big_to_json(&self.d1))?;
        t.serialize_element(&big_to_json(&self.d2))?;
        t.end()
    }
}

pub fn classify(s: &IMat2) -> Result<DoubleCoset> {
    let det = s.det();
    if !det.is_positive() {
        return Err(Error::NonPositiveDeterminant(det.to_string()));
    }
    let (d1, d2) = elementary_divisors(s)?;
    Ok(DoubleCoset { d1, d2 })
}

/// Hermite representatives of `Γ \ Γ diag(d1, d2) Γ`, ordered by `(a, c)`.
pub fn right_cosets(dc: &DoubleCoset) -> Vec<IMat2> {
    let n = dc.det();
    let n64 = n.to_u64().expect("determinant fits in u64");
    let mut out = Vec::new();
    for a in crate::exact::arith::divisors(n64) {
        let a = BigInt::from(a);
        if !(&a % &dc.d1).is_zero() {
            continue;
        }
        let d = &n / &a;
        if !(&d % &dc.d1).is_zero() {
            continue;
        }
        let mut c = BigInt::zero();
        while c < a {
            if a.gcd(&c).gcd(&d) == dc.d1 {
                out.push(IMat2::new(a.clone(), 0, c.clone(), d.clone()));
            }
            c += &dc.d1;
        }
    }
    out
}

/// Canonical representative of the right coset `Γ h` for rational `h`
/// with positive determinant.
pub fn coset_label(h: &QMat2) -> Result<QMat2> {
    let (k, m) = h.clear_denominators();
    let (form, _) = hnf(&m)?;
    Ok(form.matrix().to_q().scale(&Rat::new(BigInt::one(), k)))
}

/// `g = r g'` with `g'` integral and primitive, `r > 0`.
pub fn primitive_part(g: &QMat2) -> Result<(Rat, IMat2)> {
    if g.det().is_zero() {
        return Err(Error::Singular);
    }
    let (k, m) = g.clear_denominators();
    let c = m.content();
    let prim = IMat2::new(&m.a / &c, &m.b / &c, &m.c / &c, &m.d / &c);
    Ok((Rat::new(c, k), prim))
}

/// `R_Γ(g)` for rational `g` of positive determinant, counted from
/// [`right_cosets`].
pub fn r_gamma(g: &QMat2) -> Result<BigInt> {
    let (_, prim) = primitive_part(g)?;
    Ok(BigInt::from(right_cosets(&classify(&prim)?).len()))
}

/// `(m, g) ∈ M2(Q) ⋊ GL2+(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemidirectElement {
    pub m: QMat2,
    pub g: QMat2,
}

impl SemidirectElement {
    pub fn new(m: QMat2, g: QMat2) -> Result<Self> {
        let det = g.det();
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant(det.to_string()));
        }
        Ok(SemidirectElement { m, g })
    }

    pub fn identity() -> Self {
        SemidirectElement { m: QMat2::zero(), g: QMat2::identity() }
    }

    pub fn mul(&self, o: &SemidirectElement) -> SemidirectElement {
        let ginv = self.g.inverse().expect("positive determinant");
        SemidirectElement { m: self.m.add(&(&o.m * &ginv)), g: &self.g * &o.g }
    }

    pub fn inverse(&self) -> SemidirectElement {
        let ginv = self.g.inverse().expect("positive determinant");
        SemidirectElement { m: (&self.m * &self.g).neg(), g: ginv }
    }
}

/// Image of `Γ_g = g Γ g^-1 ∩ Γ` in `SL2(Z/m)`.
#[derive(Clone, Debug)]
pub struct GammaGQuotient {
    g: IMat2,
    modulus: u64,
    members: Vec<ModMat>,
}

impl GammaGQuotient {
    pub fn new(g: &IMat2, modulus: u64) -> Result<Self> {
        let det = g.det();
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant(det.to_string()));
        }
        if !(BigInt::from(modulus) % &det).is_zero() {
            return Err(Error::Incompatible { modulus, exponent: det.to_string() });
        }
        let members = sl2_mod(modulus, DEFAULT_SL2_CAP)?
            .into_iter()
            .filter(|x| gamma_g_contains(g, &x.lift()))
            .collect();
        Ok(GammaGQuotient { g: g.clone(), modulus, members })
    }

    pub fn g(&self) -> &IMat2 {
        &self.g
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn members(&self) -> &[ModMat] {
        &self.members
    }
}

/// `γ ∈ g Γ g^-1`, tested as `adj(g) γ g ≡ 0 (mod det g)`.
pub fn gamma_g_contains(g: &IMat2, gamma: &IMat2) -> bool {
    let det = g.det();
    let t = &(&g.adj() * gamma) * g;
    t.entries().iter().all(|x| (*x % &det).is_zero())
}

fn reduce_mod_one(x: &Rat) -> Rat {
    x - x.floor()
}

/// Rows of `v` reduced modulo the row lattice `lam`.
fn reduce_rows(v: &QMat2, lam: &Lattice) -> QMat2 {
    let [a, b] = lam.reduce_point(&[v.a.clone(), v.b.clone()]);
    let [c, d] = lam.reduce_point(&[v.c.clone(), v.d.clone()]);
    QMat2::new(a, b, c, d)
}

/// Orbit of `v + M2(Z)` under `m ↦ m γ^-1` for `γ` in `members`, sorted
/// lexicographically on the reduced entries.
pub fn gamma_orbit(v: &QMat2, members: &[ModMat]) -> Result<Vec<QMat2>> {
    orbit_modulo(v, members, &Lattice::z2())
}

fn orbit_modulo(v: &QMat2, members: &[ModMat], lam: &Lattice) -> Result<Vec<QMat2>> {
    let den = v.denominator();
    if let Some(x) = members.first() {
        if !(BigInt::from(x.modulus()) % &den).is_zero() {
            return Err(Error::Incompatible { modulus: x.modulus(), exponent: den.to_string() });
        }
    }
    let set: BTreeSet<QMat2> = members
        .iter()
        .map(|x| {
            let inv = x.inverse().expect("members are invertible").lift().to_q();
            reduce_rows(&(v * &inv), lam)
        })
        .collect();
    Ok(set.into_iter().collect())
}

/// Full `SL2(Z)`-orbit of `v + M2(Z)`, computed in `SL2(Z/d)` for `d` the
/// denominator of `v`.
pub fn sl2_orbit(v: &QMat2, mod_cap: u64) -> Result<Vec<QMat2>> {
    let d = v.denominator().to_u64().filter(|&d| d <= mod_cap).ok_or(Error::CapExceeded {
        what: "orbit modulus",
        size: v.denominator().to_u128().unwrap_or(u128::MAX),
        cap: mod_cap as u128,
    })?;
    let members = sl2_mod(d, DEFAULT_SL2_CAP)?;
    gamma_orbit(&reduce_entries(v), &members)
}

fn reduce_entries(v: &QMat2) -> QMat2 {
    QMat2::new(reduce_mod_one(&v.a), reduce_mod_one(&v.b), reduce_mod_one(&v.c), reduce_mod_one(&v.d))
}

/// The orbit factor `|V0 \ V0 O_{Γ_g}(v) g(V0)|` together with its pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitFactor {
    pub modulus: u64,
    pub orbit_size: u64,
    /// `[Z^2 + Z^2 g^-1 : Z^2]`.
    pub row_index: u64,
}

impl OrbitFactor {
    pub fn value(&self) -> BigInt {
        BigInt::from(self.orbit_size) * BigInt::from(self.row_index).pow(2)
    }
}

pub fn orbit_factor(x: &SemidirectElement, mod_cap: u64) -> Result<OrbitFactor> {
    let (_, prim) = primitive_part(&x.g)?;
    let det = prim.det();
    let modulus = det.lcm(&x.m.denominator());
    let modulus = modulus.to_u64().filter(|&m| m <= mod_cap).ok_or(Error::CapExceeded {
        what: "Γ_g quotient modulus",
        size: modulus.to_u128().unwrap_or(u128::MAX),
        cap: mod_cap as u128,
    })?;
    let lam = Lattice::z2().sum(&Lattice::z2().right_mul(&x.g.inverse()?)?);
    let row_index = lam.index_u64();
    let quotient = GammaGQuotient::new(&prim, modulus)?;
    let orbit = orbit_modulo(&x.m, quotient.members(), &lam)?;
    Ok(OrbitFactor { modulus, orbit_size: orbit.len() as u64, row_index })
}

/// `R_{P0}(x)`: number of right `P0`-cosets in `P0 x P0`.
pub fn semidirect_r(x: &SemidirectElement, mod_cap: u64) -> Result<BigInt> {
    Ok(r_gamma(&x.g)? * orbit_factor(x, mod_cap)?.value())
}

/// `L_{P0}(x) = R_{P0}(x^-1)`.
pub fn semidirect_l(x: &SemidirectElement, mod_cap: u64) -> Result<BigInt> {
    semidirect_r(&x.inverse(), mod_cap)
}

/// `Δ(x) = L(x) / R(x)`.
pub fn semidirect_delta(x: &SemidirectElement, mod_cap: u64) -> Result<Rat> {
    Ok(Rat::new(semidirect_l(x, mod_cap)?, semidirect_r(x, mod_cap)?))
}

/// `|M2(Z) / (M2(Z) ∩ M2(Z) g)|`. `M2` splits into two copies of the row
/// lattice, so this is the square of the planar index.
pub fn module_index(g: &QMat2) -> Result<Rat> {
    let z2 = Lattice::z2();
    let meet = z2.intersect(&z2.right_mul(g)?);
    let planar = z2.covolume().recip() * meet.covolume();
    Ok(&planar * &planar)
}

/// Row of a `pair-verify` report.
#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub m: String,
    pub g: String,
    pub dc: DoubleCoset,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "L")]
    pub l: String,
    pub delta: String,
    pub expected: String,
    pub pass: bool,
}

pub fn pair_row(x: &SemidirectElement, mod_cap: u64) -> Result<PairRow> {
    let (_, prim) = primitive_part(&x.g)?;
    let r = semidirect_r(x, mod_cap)?;
    let l = semidirect_l(x, mod_cap)?;
    let delta = Rat::new(l.clone(), r.clone());
    let det = x.g.det();
    let expected = (&det * &det).recip();
    Ok(PairRow {
        m: x.m.to_string(),
        g: x.g.to_string(),
        dc: classify(&prim)?,
        r: r.to_string(),
        l: l.to_string(),
        delta: delta.to_string(),
        expected: expected.to_string(),
        pass: delta == expected,
    })
}

/// The default semidirect test vectors: translations of denominator at
/// most 4 against a few diagonal and non-diagonal `g`.
pub fn standard_vectors() -> Vec<SemidirectElement> {
    let gs = [
        QMat2::identity(),
        IMat2::diag(1, 2).to_q(),
        IMat2::diag(1, 3).to_q(),
        IMat2::diag(2, 2).to_q(),
        IMat2::from_i64([[1, 1], [0, 2]]).to_q(),
        QMat2::from_ratios([[(1, 2), (0, 1)], [(0, 1), (1, 1)]]),
    ];
    let ms = [
        QMat2::zero(),
        QMat2::from_ratios([[(1, 2), (0, 1)], [(0, 1), (0, 1)]]),
        QMat2::from_ratios([[(0, 1), (1, 3)], [(0, 1), (0, 1)]]),
        QMat2::from_ratios([[(1, 4), (0, 1)], [(1, 2), (3, 4)]]),
    ];
    let mut out = Vec::new();
    for g in &gs {
        for m in &ms {
            out.push(SemidirectElement::new(m.clone(), g.clone()).expect("positive determinant"));
        }
    }
    out
}
