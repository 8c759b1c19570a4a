//! The Hecke algebra `H(S, Γ)` of `S = M2(Z)+` over `Γ = SL2(Z)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coset::{classify, module_index, right_cosets, DoubleCoset};
use crate::error::{Error, Result};
use crate::exact::{hnf, IMat2, Rat};

/// Finitely supported rational combination of double cosets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeckeElement {
    terms: BTreeMap<DoubleCoset, Rat>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement::default()
    }

    pub fn basis(dc: DoubleCoset) -> Self {
        HeckeElement::term(dc, Rat::one())
    }

    pub fn term(dc: DoubleCoset, c: Rat) -> Self {
        let mut out = HeckeElement::zero();
        out.add_term(dc, c);
        out
    }

    pub fn identity() -> Self {
        HeckeElement::basis(DoubleCoset::identity())
    }

    pub fn u(p: u64) -> Self {
        HeckeElement::basis(DoubleCoset::u(p))
    }

    pub fn v(p: u64) -> Self {
        HeckeElement::basis(DoubleCoset::v(p))
    }

    pub fn add_term(&mut self, dc: DoubleCoset, c: Rat) {
        let e = self.terms.entry(dc.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&dc);
        }
    }

    pub fn coeff(&self, dc: &DoubleCoset) -> Rat {
        self.terms.get(dc).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DoubleCoset, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<DoubleCoset> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (dc, c) in &o.terms {
            out.add_term(dc.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (dc, c) in &self.terms {
            out.add_term(dc.clone(), c * k);
        }
        out
    }

    /// The determinant shared by all classes in the support, if any.
    pub fn homogeneous_det(&self) -> Option<BigInt> {
        let mut dets = self.terms.keys().map(|dc| dc.det());
        let first = dets.next()?;
        dets.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(dc, c)| format!("{c}*{dc}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `[A] * [B] = Σ_C c_C [C]` with `c_C = #{(i, j) : Γ a_i b_j = Γ x_C}`.
pub fn convolve_basis(a: &DoubleCoset, b: &DoubleCoset) -> HeckeElement {
    convolve_representatives(&right_cosets(a), &right_cosets(b))
}

/// Convolution of two basis classes given any complete sets of right-coset
/// representatives for them.
pub fn convolve_representatives(ra: &[IMat2], rb: &[IMat2]) -> HeckeElement {
    let mut counts: BTreeMap<DoubleCoset, BTreeMap<_, u64>> = BTreeMap::new();
    for x in ra {
        for y in rb {
            let prod = x * y;
            let class = classify(&prod).expect("positive determinant");
            let (label, _) = hnf(&prod).expect("nonsingular");
            *counts.entry(class).or_default().entry(label).or_default() += 1;
        }
    }
    let mut out = HeckeElement::zero();
    for (class, by_label) in counts {
        let (target, _) = hnf(&class.representative()).expect("nonsingular");
        let c = by_label.get(&target).copied().unwrap_or(0);
        debug_assert!(by_label.values().all(|&k| k == c), "structure constant depends on representative");
        out.add_term(class, Rat::from_integer(c.into()));
    }
    out
}

pub fn convolve(f1: &HeckeElement, f2: &HeckeElement) -> HeckeElement {
    let mut out = HeckeElement::zero();
    for (a, ca) in &f1.terms {
        for (b, cb) in &f2.terms {
            let k = ca * cb;
            for (c, cc) in convolve_basis(a, b).terms {
                out.add_term(c, cc * &k);
            }
        }
    }
    out
}

/// `f*(x) = f(x^-1)`. Only the identity class has its inverse in `S`.
pub fn involution(f: &HeckeElement) -> Result<HeckeElement> {
    if let Some(dc) = f.terms.keys().find(|dc| !dc.is_identity()) {
        return Err(Error::AdjointLeavesSemigroup(format!("{},{}", dc.d1(), dc.d2())));
    }
    Ok(f.clone())
}

/// Projection onto the classes of `p`-power determinant.
pub fn prime_restrict(f: &HeckeElement, p: u64) -> HeckeElement {
    HeckeElement { terms: f.terms.iter().filter(|(dc, _)| dc.is_power_of(p)).map(|(d, c)| (d.clone(), c.clone())).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingFlavor {
    Plain,
    DetInverse,
    DetSqrtModular,
}

/// Formal combination of semidirect double cosets `[s]_{P0}`, labelled by
/// the class of `s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemidirectHecke {
    pub terms: BTreeMap<DoubleCoset, Rat>,
}

fn flavor_factor(dc: &DoubleCoset, flavor: EmbeddingFlavor) -> Rat {
    match flavor {
        EmbeddingFlavor::Plain => Rat::one(),
        EmbeddingFlavor::DetInverse => Rat::from_integer(dc.det()).recip(),
        EmbeddingFlavor::DetSqrtModular => {
            // [s(V0) : V0] = |V0 / V0 s| for integral s.
            let idx = module_index(&dc.representative().to_q()).expect("nonsingular").to_integer();
            let root = idx.sqrt();
            assert_eq!(&root * &root, idx, "module index is a square");
            Rat::from_integer(root).recip()
        }
    }
}

pub fn embed_semidirect(f: &HeckeElement, flavor: EmbeddingFlavor) -> SemidirectHecke {
    SemidirectHecke {
        terms: f.terms.iter().map(|(dc, c)| (dc.clone(), c * flavor_factor(dc, flavor))).collect(),
    }
}

/// Structure constants `[A] * [B]` for all basis classes with `det ≤ bound`.
#[derive(Clone, Debug, Serialize)]
pub struct ProductRow {
    pub lhs: DoubleCoset,
    pub rhs: DoubleCoset,
    pub products: Vec<ProductTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductTerm {
    pub class: DoubleCoset,
    pub coeff: String,
}

pub fn product_row(a: &DoubleCoset, b: &DoubleCoset) -> ProductRow {
    let prod = convolve_basis(a, b);
    ProductRow {
        lhs: a.clone(),
        rhs: b.clone(),
        products: prod.terms.into_iter().map(|(class, c)| ProductTerm { class, coeff: c.to_string() }).collect(),
    }
}

/// All classes with determinant at most `bound`, ordered by `(det, d1)`.
pub fn classes_up_to(bound: u64) -> Vec<DoubleCoset> {
    let mut out = Vec::new();
    for n in 1..=bound {
        for d1 in 1..=n {
            if d1 * d1 > n {
                break;
            }
            if n % (d1 * d1) == 0 {
                out.push(DoubleCoset::new(d1, n / d1).expect("valid pair"));
            }
        }
    }
    out
}

/// Classes of determinant `p^j`, `j ≤ k`.
pub fn prime_classes(p: u64, k: u32) -> Vec<DoubleCoset> {
    let mut out = Vec::new();
    for j in 0..=k {
        for a in 0..=j / 2 {
            out.push(DoubleCoset::new(p.pow(a), p.pow(j - a)).expect("valid pair"));
        }
    }
    out
}
