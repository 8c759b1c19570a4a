//! Window matrices of the operator families, assembled column by column.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::hecke::{EmbeddingFlavor, HeckeElement, SemidirectHecke};
use crate::lattice::Lattice;

use super::family::{apply, apply_w, AdelicPoint, Generator, SparseVec};
use super::operator::SparseOperator;
use super::window::Window;

/// Places each column on the window; columns with mass outside it are
/// flagged as boundary.
pub fn assemble(window: &Window, column: impl Fn(&Lattice) -> Result<SparseVec>) -> Result<SparseOperator> {
    let mut op = SparseOperator::zero(window.len());
    for (j, l) in window.basis().iter().enumerate() {
        for (m, c) in column(l)? {
            match window.position(&m) {
                Some(i) => op.set(i, j, c),
                None => op.mark_boundary(j),
            }
        }
    }
    Ok(op)
}

pub fn op_generator(gen: &Generator, window: &Window, w: Option<&AdelicPoint>) -> Result<SparseOperator> {
    match w {
        Some(w) => assemble(window, |l| apply_w(gen, w, l)),
        None => assemble(window, |l| apply(gen, l)),
    }
}

pub fn op_v(p: u64, window: &Window) -> Result<SparseOperator> {
    op_generator(&Generator::V(p), window, None)
}

pub fn op_v_star(p: u64, window: &Window) -> Result<SparseOperator> {
    op_generator(&Generator::VStar(p), window, None)
}

pub fn op_u(p: u64, window: &Window) -> Result<SparseOperator> {
    op_generator(&Generator::U(p), window, None)
}

pub fn op_u_star(p: u64, window: &Window) -> Result<SparseOperator> {
    op_generator(&Generator::UStar(p), window, None)
}

/// Diagonal of indices `[L : Z^2]`; `e^{-βH}` is its entrywise `-β` power.
pub fn op_h(window: &Window) -> SparseOperator {
    let mut op = SparseOperator::zero(window.len());
    for i in 0..window.len() {
        op.set(i, i, Rat::from_integer(window.index_big(i)));
    }
    op
}

pub fn op_hecke(f: &HeckeElement, window: &Window, w: Option<&AdelicPoint>) -> Result<SparseOperator> {
    op_generator(&Generator::Hecke(f.clone()), window, w)
}

/// Operator image of a flavored embedding, coefficients carried per class.
pub fn op_semidirect(f: &SemidirectHecke, window: &Window) -> Result<SparseOperator> {
    let mut out = SparseOperator::zero(window.len());
    for (dc, c) in &f.terms {
        out = out.add(&op_hecke(&HeckeElement::term(dc.clone(), c.clone()), window, None)?);
    }
    Ok(out)
}

pub fn op_pi_l(l0: &Lattice, window: &Window) -> Result<SparseOperator> {
    if !l0.contains_z2() {
        return Err(Error::NotSuperlattice);
    }
    op_generator(&Generator::PiL(l0.clone()), window, None)
}

/// `e_{L0}` from its defining formula, checked to be the matrix unit at `L0`.
pub fn op_e_l(l0: &Lattice, p: u64, window: &Window) -> Result<SparseOperator> {
    let i = window.position(l0).filter(|&i| i < window.interior()).ok_or_else(|| Error::OutsideInterior(l0.to_string()))?;
    if l0.p_depth(p).is_none() {
        return Err(Error::Invalid(format!("{l0} is not a {p}-lattice")));
    }
    let op = op_generator(&Generator::E { lattice: l0.clone(), p }, window, None)?;
    if op != SparseOperator::unit(window.len(), i, i) {
        return Err(Error::Invalid(format!("e_L at {l0} is not the matrix unit")));
    }
    Ok(op)
}

/// Permutation matrix of `δ_L ↦ δ_{wL}`.
pub fn op_big_u(w: &AdelicPoint, window: &Window) -> Result<SparseOperator> {
    let mut op = SparseOperator::zero(window.len());
    let mut hit = vec![false; window.len()];
    for (j, l) in window.basis().iter().enumerate() {
        let m = w.act(l)?;
        let i = window.position(&m).ok_or_else(|| Error::Invalid(format!("U_w moves {l} out of the window")))?;
        if hit[i] {
            return Err(Error::Invalid("U_w is not injective on the window".into()));
        }
        hit[i] = true;
        op.set(i, j, Rat::one());
    }
    Ok(op)
}

/// `U A U^T` for a permutation `U`.
pub fn conjugate(u: &SparseOperator, a: &SparseOperator) -> SparseOperator {
    u.mul(a).mul(&u.transpose())
}

pub fn flavor_images(f: &HeckeElement, window: &Window) -> Result<(SparseOperator, SparseOperator)> {
    use crate::hecke::embed_semidirect;
    let plain = op_semidirect(&embed_semidirect(f, EmbeddingFlavor::Plain), window)?;
    let inv = op_semidirect(&embed_semidirect(f, EmbeddingFlavor::DetInverse), window)?;
    Ok((plain, inv))
}

/// No column below `n` has a nonzero entry.
pub fn is_zero_on(op: &SparseOperator, n: usize) -> bool {
    op.restrict_columns(n).values().all(|v| v.is_zero())
}
