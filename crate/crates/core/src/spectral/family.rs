//! The supported operator families and their action on basis vectors
//! `δ_L`, computed directly from the lattice formulas with no truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coset::{classify, DoubleCoset};
use crate::error::{Error, Result};
use crate::exact::{rat_int, ModMat, QMat2, Rat};
use crate::hecke::HeckeElement;
use crate::lattice::{act_integral, localize, superlattices, Lattice};

/// Finitely supported vector in `ℓ²(Γ\S)`.
pub type SparseVec = BTreeMap<Lattice, Rat>;

pub fn delta(l: &Lattice) -> SparseVec {
    SparseVec::from([(l.clone(), Rat::one())])
}

/// A point `w ∈ GL2(Ẑ)` known modulo `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdelicPoint {
    w: ModMat,
}

impl AdelicPoint {
    pub fn new(w: ModMat) -> Result<Self> {
        if !w.is_invertible() {
            return Err(Error::NotInvertibleMod(w.modulus()));
        }
        Ok(AdelicPoint { w })
    }

    pub fn identity(modulus: u64) -> Self {
        AdelicPoint { w: ModMat::identity(modulus) }
    }

    pub fn modulus(&self) -> u64 {
        self.w.modulus()
    }

    pub fn matrix(&self) -> &ModMat {
        &self.w
    }

    pub fn inverse(&self) -> AdelicPoint {
        AdelicPoint { w: self.w.inverse().expect("invertible") }
    }

    /// `w L`.
    pub fn act(&self, l: &Lattice) -> Result<Lattice> {
        act_integral(&self.w, l)
    }

    fn check(&self, l: &Lattice) -> Result<()> {
        let exp = l.exponent()?;
        if (BigInt::from(self.modulus()) % &exp).is_zero() {
            Ok(())
        } else {
            Err(Error::Incompatible { modulus: self.modulus(), exponent: exp.to_string() })
        }
    }
}

impl fmt::Display for AdelicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.w)
    }
}

/// Operators with an explicit lattice formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `δ_L ↦ Σ_{L' ⊇ L, [L':L] = p} δ_{L'}`.
    V(u64),
    /// `δ_L ↦ Σ_{Z^2 ⊆ L'' ⊆ L, [L:L''] = p} δ_{L''}`.
    VStar(u64),
    /// `δ_L ↦ δ_{L/p}`.
    U(u64),
    /// `δ_L ↦ δ_{pL}` when `Z^2 ⊆ pL`, else 0.
    UStar(u64),
    /// `π(f)` for `f ∈ H(S, Γ)`.
    Hecke(HeckeElement),
    /// Projection onto `span{δ_L : L0 ⊆ L}`.
    PiL(Lattice),
    /// `e_{L0} = π_{L0} - ⋁_{L' ⊇ L0, [L':L0] = p} π_{L'}` for a p-lattice `L0`.
    E { lattice: Lattice, p: u64 },
}

impl Generator {
    pub fn star(&self) -> Result<Generator> {
        Ok(match self {
            Generator::V(p) => Generator::VStar(*p),
            Generator::VStar(p) => Generator::V(*p),
            Generator::U(p) => Generator::UStar(*p),
            Generator::UStar(p) => Generator::U(*p),
            Generator::PiL(_) | Generator::E { .. } => self.clone(),
            Generator::Hecke(f) => {
                if f.terms().all(|(dc, _)| dc.is_identity()) {
                    self.clone()
                } else {
                    return Err(Error::Unsupported("adjoint of a general Hecke element; use V/VStar letters".into()));
                }
            }
        })
    }

    /// Determinant class for the dynamics, `None` when not homogeneous.
    pub fn det_class(&self) -> Option<Rat> {
        match self {
            Generator::V(p) => Some(rat_int(*p)),
            Generator::VStar(p) => Some(rat_int(*p).recip()),
            Generator::U(p) => Some(rat_int(p * p)),
            Generator::UStar(p) => Some(rat_int(p * p).recip()),
            Generator::Hecke(f) => f.homogeneous_det().map(Rat::from_integer),
            Generator::PiL(_) | Generator::E { .. } => Some(Rat::one()),
        }
    }

    /// Bound on the ℓ¹ norm of every column.
    pub fn column_bound(&self) -> Rat {
        match self {
            Generator::V(p) | Generator::VStar(p) => rat_int(p + 1),
            Generator::U(_) | Generator::UStar(_) | Generator::PiL(_) | Generator::E { .. } => Rat::one(),
            Generator::Hecke(f) => f.terms().map(|(dc, c)| c.abs() * Rat::from_integer(dc.coset_count())).sum(),
        }
    }

    /// Whether the operator commutes with every `U_w`, so that its diagonal
    /// is constant on `GL2(Ẑ)`-orbits of lattices.
    pub fn is_invariant(&self) -> bool {
        match self {
            Generator::PiL(l) | Generator::E { lattice: l, .. } => is_scalar_lattice(l),
            _ => true,
        }
    }

    /// Factor by which the index can grow under one application.
    pub fn index_step(&self) -> u64 {
        match self {
            Generator::V(p) => *p,
            Generator::U(p) => p * p,
            Generator::Hecke(f) => f
                .terms()
                .map(|(dc, _)| num_traits::ToPrimitive::to_u64(&dc.det()).unwrap_or(u64::MAX))
                .max()
                .unwrap_or(1),
            _ => 1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::V(p) => write!(f, "v_{p}"),
            Generator::VStar(p) => write!(f, "v_{p}*"),
            Generator::U(p) => write!(f, "u_{p}"),
            Generator::UStar(p) => write!(f, "u_{p}*"),
            Generator::Hecke(h) => write!(f, "pi({h})"),
            Generator::PiL(l) => write!(f, "pi_L{l}"),
            Generator::E { lattice, .. } => write!(f, "e_L{lattice}"),
        }
    }
}

fn is_scalar_lattice(l: &Lattice) -> bool {
    l.hnf().c().is_zero() && l.hnf().a() == l.hnf().d()
}

thread_local! {
    static CLASS_CACHE: std::cell::RefCell<BTreeMap<DoubleCoset, Vec<Lattice>>> = Default::default();
}

/// Superlattices `M ⊇ Z^2` whose quotient `M / Z^2` has class `dc`.
pub fn lattices_of_class(dc: &DoubleCoset) -> Vec<Lattice> {
    if let Some(v) = CLASS_CACHE.with(|c| c.borrow().get(dc).cloned()) {
        return v;
    }
    let n = num_traits::ToPrimitive::to_u64(&dc.det()).expect("determinant fits in u64");
    let out: Vec<Lattice> = superlattices(n)
        .into_iter()
        .filter(|m| {
            let (d1, d2) = m.class().expect("superlattice");
            &d1 == dc.d1() && &d2 == dc.d2()
        })
        .collect();
    CLASS_CACHE.with(|c| c.borrow_mut().insert(dc.clone(), out.clone()));
    out
}

fn e_formula(l0: &Lattice, p: u64, l: &Lattice) -> bool {
    l.contains(l0) && l0.superlattices_of(p).iter().all(|l1| !l.contains(l1))
}

fn add_into(out: &mut SparseVec, l: Lattice, c: &Rat) {
    let e = out.entry(l.clone()).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&l);
    }
}

/// `π(gen) δ_L`.
pub fn apply(gen: &Generator, l: &Lattice) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    match gen {
        Generator::V(p) => {
            for m in l.superlattices_of(*p) {
                add_into(&mut out, m, &Rat::one());
            }
        }
        Generator::VStar(p) => {
            for m in l.sublattices_of(*p) {
                if m.contains_z2() {
                    add_into(&mut out, m, &Rat::one());
                }
            }
        }
        Generator::U(p) => {
            out.insert(l.scale(&Rat::new(BigInt::one(), BigInt::from(*p)))?, Rat::one());
        }
        Generator::UStar(p) => {
            let m = l.scale(&rat_int(*p))?;
            if m.contains_z2() {
                out.insert(m, Rat::one());
            }
        }
        Generator::Hecke(f) => {
            // L = s^-1 Z^2; the column holds L' = s^-1 M for M ⊇ Z^2 of class t.
            let s = l.coset_matrix()?;
            let sinv = s.to_q().inverse()?;
            for (dc, c) in f.terms() {
                for m in lattices_of_class(dc) {
                    add_into(&mut out, m.act(&sinv)?, c);
                }
            }
        }
        Generator::PiL(l0) => {
            if l.contains(l0) {
                out.insert(l.clone(), Rat::one());
            }
        }
        Generator::E { lattice, p } => {
            if e_formula(lattice, *p, l) {
                out.insert(l.clone(), Rat::one());
            }
        }
    }
    Ok(out)
}

/// `π_w(gen) δ_L`, evaluated from the twisted formula `f(sL', sw)`.
///
/// The twisted projections only see `w` modulo the exponent of `L0 / Z^2`;
/// the Hecke families do not depend on `w`.
pub fn apply_w(gen: &Generator, w: &AdelicPoint, l: &Lattice) -> Result<SparseVec> {
    match gen {
        Generator::PiL(l0) => {
            w.check(l0)?;
            // w L0 ⊆ L, tested on the generators of L0 moved by a lift of w.
            let lift = w.matrix().lift().to_q();
            let inside = l0.basis_points().iter().all(|y| l.contains_point(&apply_col(&lift, y)));
            Ok(if inside { delta(l) } else { SparseVec::new() })
        }
        Generator::E { lattice, p } => {
            w.check(lattice)?;
            // s w s0^-1 ∈ GL2(Z_p) for L = s^-1 Z^2, L0 = s0^-1 Z^2.
            let s = l.coset_matrix()?.to_q();
            let s0inv = lattice.coset_matrix()?.to_q().inverse()?;
            let lift = w.matrix().lift().to_q();
            let g = &(&s * &lift) * &s0inv;
            Ok(if in_gl2_zp(&g, *p) { delta(l) } else { SparseVec::new() })
        }
        _ => apply(gen, l),
    }
}

fn apply_col(g: &QMat2, y: &[Rat; 2]) -> [Rat; 2] {
    [&g.a * &y[0] + &g.b * &y[1], &g.c * &y[0] + &g.d * &y[1]]
}

fn p_integral(x: &Rat, p: u64) -> bool {
    (x.denom() % BigInt::from(p)) != BigInt::zero()
}

fn in_gl2_zp(g: &QMat2, p: u64) -> bool {
    if !g.entries().iter().all(|x| p_integral(x, p)) {
        return false;
    }
    let det = g.det();
    !det.is_zero() && p_integral(&det, p) && (det.numer() % BigInt::from(p)) != BigInt::zero()
}

/// `π(g1 g2 ... gn) x`, the rightmost letter applied first.
pub fn apply_word(word: &[Generator], x: &SparseVec, w: Option<&AdelicPoint>) -> Result<SparseVec> {
    let mut cur = x.clone();
    for gen in word.iter().rev() {
        let mut next = SparseVec::new();
        for (l, c) in &cur {
            let col = match w {
                Some(w) => apply_w(gen, w, l)?,
                None => apply(gen, l)?,
            };
            for (m, d) in col {
                add_into(&mut next, m, &(c * d));
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `(π(word) δ_L)(L)`.
pub fn diagonal_entry(word: &[Generator], l: &Lattice, w: Option<&AdelicPoint>) -> Result<Rat> {
    Ok(apply_word(word, &delta(l), w)?.remove(l).unwrap_or_else(Rat::zero))
}

/// `e_{L0}` restricted to the p-part: `[L_p = L0]`, used for cross-checks.
pub fn e_by_localization(l0: &Lattice, p: u64, l: &Lattice) -> Result<bool> {
    Ok(&localize(l, p)? == l0)
}

/// Class of the quotient `L' / L` for `L ⊆ L'`, via `s L'` with `L = s^-1 Z^2`.
pub fn relative_class(l: &Lattice, l_prime: &Lattice) -> Result<DoubleCoset> {
    let s = l.coset_matrix()?;
    let m = l_prime.act(&s.to_q())?;
    let t = m.coset_matrix()?;
    classify(&t)
}
