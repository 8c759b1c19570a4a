//! Exact verification of the operator identities on finite windows.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat_int, ModMat, Rat};
use crate::hecke::HeckeElement;
use crate::lattice::{superlattices, tensor_parts, Lattice};

use super::family::{apply, AdelicPoint, Generator, SparseVec};
use super::operator::SparseOperator;
use super::ops::{conjugate, flavor_images, op_big_u, op_e_l, op_generator, op_hecke, op_pi_l, op_u, op_u_star, op_v, op_v_star};
use super::window::Window;

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    pub p: u64,
    pub k: u32,
    pub dim: usize,
    pub interior: usize,
    pub interior_mismatches: usize,
    pub boundary_columns: usize,
    pub boundary_residual: usize,
    pub annihilates_shifted: bool,
    pub pass: bool,
}

/// `T = v*v - vv* - p(1 - uu*)` against `e_{Z^2}` on the depth `k-2` interior.
pub fn projection_identity_check(p: u64, k: u32) -> Result<ProjectionReport> {
    if k < 3 {
        return Err(Error::Invalid("projection check needs k >= 3".into()));
    }
    let win = Window::prime(p, k)?;
    let n = win.len();
    let v = op_v(p, &win)?;
    let vs = op_v_star(p, &win)?;
    let u = op_u(p, &win)?;
    let us = op_u_star(p, &win)?;
    let one = SparseOperator::identity(n);
    let pr = rat_int(p);
    let t = vs.mul(&v).sub(&v.mul(&vs)).sub(&one.sub(&u.mul(&us)).scale(&pr));
    let e0 = SparseOperator::unit(n, 0, 0);
    let interior = win.depth_prefix(p, k - 2);

    let mut mismatches = 0;
    for j in 0..interior {
        if t.is_boundary(j) || t.column(j) != e0.column(j) {
            mismatches += 1;
        }
    }
    let diff = t.sub(&e0);
    let boundary_residual = diff.entries().filter(|((_, c), _)| *c >= interior).count();

    let shift = Lattice::scalar(&Rat::new(1.into(), p.into()))?;
    let annihilates_shifted = (0..interior).filter(|&j| win.lattice(j).contains(&shift)).all(|j| t.column(j).is_empty());

    Ok(ProjectionReport {
        p,
        k,
        dim: n,
        interior,
        interior_mismatches: mismatches,
        boundary_columns: t.boundary().len(),
        boundary_residual,
        annihilates_shifted,
        pass: mismatches == 0 && annihilates_shifted,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub columns: usize,
    pub failures: usize,
    pub pass: bool,
}

impl NamedCheck {
    fn new(name: impl Into<String>, columns: usize, failures: usize) -> Self {
        NamedCheck { name: name.into(), columns, failures, pass: failures == 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    pub p: u64,
    pub bound: u64,
    pub checks: Vec<NamedCheck>,
    pub pass: bool,
}

/// Moves a vector of `p`-lattices to the global basis by `M ↦ M + L_off`.
fn lift_local(v: SparseVec, off: &Lattice) -> SparseVec {
    let mut out = SparseVec::new();
    for (m, c) in v {
        *out.entry(m.sum(off)).or_insert_with(Rat::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn block_failures(gen: &Generator, win: &Window, interior: usize) -> Result<usize> {
    let mut failures = 0;
    for l in &win.basis()[..interior] {
        let global = apply(gen, l)?;
        let parts = tensor_parts(l)?;
        let local = lift_local(apply(gen, &parts.part(p_of(gen)))?, &parts.off_part(p_of(gen)));
        if global != local {
            failures += 1;
        }
    }
    Ok(failures)
}

fn p_of(gen: &Generator) -> u64 {
    match gen {
        Generator::V(p) | Generator::VStar(p) | Generator::U(p) | Generator::UStar(p) | Generator::E { p, .. } => *p,
        _ => unreachable!("tensor check uses prime-local generators"),
    }
}

/// Block structure `π(f) = π_p(f) ⊗ 1` on `global(bound)` for `f` in
/// `{u_p, v_p, v_p*, e_L}`, with `v_p` also built through its double coset.
pub fn tensor_factorization_check(p: u64, bound: u64) -> Result<TensorReport> {
    if bound < p * p {
        return Err(Error::Invalid(format!("tensor check needs bound >= {}", p * p)));
    }
    let win = Window::global(bound, p * p)?;
    let mut checks = Vec::new();
    let inner_v = win.interior_with(p);
    let inner_u = win.interior_with(p * p);
    checks.push(NamedCheck::new(format!("v_{p} block"), inner_v, block_failures(&Generator::V(p), &win, inner_v)?));
    checks.push(NamedCheck::new(format!("v_{p}* block"), win.len(), block_failures(&Generator::VStar(p), &win, win.len())?));
    checks.push(NamedCheck::new(format!("u_{p} block"), inner_u, block_failures(&Generator::U(p), &win, inner_u)?));

    let mut e_fail = 0;
    let mut e_cols = 0;
    for l0 in (0..=2).flat_map(|j| superlattices(p.pow(j))) {
        if l0.index_u64() > bound {
            continue;
        }
        e_fail += block_failures(&Generator::E { lattice: l0, p }, &win, win.len())?;
        e_cols += win.len();
    }
    checks.push(NamedCheck::new(format!("e_L block ({p}-lattices)"), e_cols, e_fail));

    let via_class = op_hecke(&HeckeElement::v(p), &win, None)?;
    let direct = op_v(p, &win)?;
    let mismatch = usize::from(!direct.columns_equal(&via_class, inner_v) || via_class.boundary() != direct.boundary());
    checks.push(NamedCheck::new(format!("pi([1,{p}]) = v_{p}"), inner_v, mismatch));
    let via_class = op_hecke(&HeckeElement::u(p), &win, None)?;
    let direct = op_u(p, &win)?;
    checks.push(NamedCheck::new(format!("pi([{p},{p}]) = u_{p}"), inner_u, usize::from(!direct.columns_equal(&via_class, inner_u))));

    let pass = checks.iter().all(|c| c.pass);
    Ok(TensorReport { p, bound, checks, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub p: u64,
    pub q: u64,
    pub bound: u64,
    pub interior: usize,
    pub nonzero_columns: usize,
    pub boundary_in_interior: usize,
    pub pass: bool,
}

/// `[v_p, v_q] = 0` on the columns with `index * p * q ≤ bound`.
pub fn commutator_check(p: u64, q: u64, bound: u64) -> Result<CommutatorReport> {
    let win = Window::global(bound, p * q)?;
    let vp = op_v(p, &win)?;
    let vq = op_v(q, &win)?;
    let c = vp.mul(&vq).sub(&vq.mul(&vp));
    let interior = win.interior();
    let nonzero_columns = (0..interior).filter(|&j| !c.column(j).is_empty()).count();
    let boundary_in_interior = (0..interior).filter(|&j| c.is_boundary(j)).count();
    Ok(CommutatorReport { p, q, bound, interior, nonzero_columns, boundary_in_interior, pass: nonzero_columns == 0 && boundary_in_interior == 0 })
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactReport {
    pub p: u64,
    pub k: u32,
    pub interior: usize,
    pub matrix_units: usize,
    pub failures: usize,
    pub pass: bool,
}

/// Every matrix unit `E_{L,L'}` on the interior of `prime(p, k)` as
/// `(λλ')^-1 (e_L v^n e_0)(e_0 v*^{n'} e_{L'})`.
pub fn compact_generation_check(p: u64, k: u32) -> Result<CompactReport> {
    let win = Window::prime(p, k)?;
    let n = win.len();
    let interior = win.interior();
    let v = op_v(p, &win)?;
    let vs = op_v_star(p, &win)?;
    let e0 = op_e_l(&Lattice::z2(), p, &win)?;

    let mut powers = vec![SparseOperator::identity(n)];
    let mut star_powers = vec![SparseOperator::identity(n)];
    for j in 1..k as usize {
        powers.push(v.mul(&powers[j - 1]));
        star_powers.push(star_powers[j - 1].mul(&vs));
    }

    // w_L = e_L v^n e_0, a multiple λ_L of the partial isometry δ_0 ↦ δ_L.
    let mut up = Vec::with_capacity(interior);
    let mut down = Vec::with_capacity(interior);
    let mut failures = 0;
    for i in 0..interior {
        let l = win.lattice(i);
        let depth = l.p_depth(p).expect("prime window") as usize;
        let e = op_e_l(l, p, &win)?;
        let a = e.mul(&powers[depth]).mul(&e0);
        let b = e0.mul(&star_powers[depth]).mul(&e);
        let lambda = a.get(i, 0);
        if lambda.is_zero() || a.nnz() != 1 || b.nnz() != 1 || b.get(0, i) != lambda {
            failures += 1;
        }
        up.push((a, lambda.clone()));
        down.push(b);
    }
    let mut units = 0;
    for i in 0..interior {
        for j in 0..interior {
            let (a, la) = &up[i];
            let lb = &up[j].1;
            if la.is_zero() || lb.is_zero() {
                continue;
            }
            let prod = a.mul(&down[j]).scale(&(la * lb).recip());
            units += 1;
            if prod.entries().count() != 1 || prod.get(i, j) != Rat::one() {
                failures += 1;
            }
        }
    }
    Ok(CompactReport { p, k, interior, matrix_units: units, failures, pass: failures == 0 && units == interior * interior })
}

#[derive(Clone, Debug, Serialize)]
pub struct PiLReport {
    pub bound: u64,
    pub lattices: usize,
    pub pairs: usize,
    pub failures: usize,
    pub pass: bool,
}

/// `π_L π_{L'} = π_{L+L'}` on `global(bound)` for all pairs in the window.
pub fn pi_l_relation_check(bound: u64) -> Result<PiLReport> {
    let win = Window::global(bound, 1)?;
    let n = win.len();
    let words = n.div_ceil(64);
    // diag(π_L) as a bitset over the window.
    let diag = |l: &Lattice| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        for (i, m) in win.basis().iter().enumerate() {
            if m.contains(l) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits
    };
    let table: Vec<Vec<u64>> = win.basis().iter().map(diag).collect();
    let empty = vec![0u64; words];
    let mut outside: HashMap<Lattice, Vec<u64>> = HashMap::new();
    let mut failures = 0;
    let mut pairs = 0;
    for i in 0..n {
        for j in i..n {
            pairs += 1;
            let s = win.lattice(i).sum(win.lattice(j));
            let rhs = match win.position(&s) {
                Some(t) => &table[t],
                // L'' ⊇ L + L' has index above the bound, so it is never in the window.
                None if s.index_u64() > bound => &empty,
                None => outside.entry(s.clone()).or_insert_with(|| diag(&s)),
            };
            let ok = table[i].iter().zip(&table[j]).zip(rhs).all(|((a, b), c)| a & b == *c);
            if !ok {
                failures += 1;
            }
        }
    }
    let spot = op_pi_l(win.lattice(n / 2), &win)?.mul(&op_pi_l(win.lattice(n / 3), &win)?);
    let spot_sum = op_pi_l(&win.lattice(n / 2).sum(win.lattice(n / 3)), &win)?;
    if spot != spot_sum {
        failures += 1;
    }
    Ok(PiLReport { bound, lattices: n, pairs, failures, pass: failures == 0 })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningRow {
    pub w: String,
    pub element: String,
    pub interior: usize,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningReport {
    pub p: u64,
    pub k: u32,
    pub modulus: u64,
    pub rows: Vec<IntertwiningRow>,
    pub pass: bool,
}

/// Five fixed elements of `GL2(Z/8)`, including a non-trivial determinant.
pub fn sample_points(modulus: u64) -> Vec<AdelicPoint> {
    [[1, 0, 0, 1], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 0], [3, 2, 1, 1]]
        .into_iter()
        .map(|e| AdelicPoint::new(ModMat::new(modulus, e)).expect("odd determinant"))
        .collect()
}

/// `U_w π(f) U_w* = π_w(f)` on the interior of `prime(p, k)`, with `π_w`
/// evaluated from the twisted formulas.
pub fn intertwining_check(p: u64, k: u32, points: &[AdelicPoint]) -> Result<IntertwiningReport> {
    let win = Window::prime(p, k)?;
    let l0 = superlattices(p)[0].clone();
    let l1 = superlattices(p * p).into_iter().find(|l| l.exponent().unwrap() == (p * p).into()).expect("cyclic lattice");
    let elements = vec![
        Generator::V(p),
        Generator::U(p),
        Generator::Hecke(HeckeElement::v(p).add(&HeckeElement::basis(crate::coset::DoubleCoset::new(1, p * p)?))),
        Generator::PiL(l0.clone()),
        Generator::PiL(l1),
        Generator::E { lattice: l0, p },
    ];
    let mut rows = Vec::new();
    for w in points {
        let u = op_big_u(w, &win)?;
        for gen in &elements {
            let interior = win.interior_with(gen.index_step());
            let plain = op_generator(gen, &win, None)?;
            let twisted = op_generator(gen, &win, Some(w))?;
            let conj = conjugate(&u, &plain);
            let failures = (0..interior)
                .filter(|&j| conj.is_boundary(j) || twisted.is_boundary(j) || conj.column(j) != twisted.column(j))
                .count();
            rows.push(IntertwiningRow { w: w.to_string(), element: gen.to_string(), interior, failures, pass: failures == 0 });
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(IntertwiningReport { p, k, modulus: points.first().map_or(0, |w| w.modulus()), rows, pass })
}

/// `π([s]_{P0})` under the plain flavor equals `det(s)` times the image
/// under the `det^-1` flavor, class by class.
pub fn flavor_relation_check(f: &HeckeElement, win: &Window) -> Result<bool> {
    for (dc, c) in f.terms() {
        let term = HeckeElement::term(dc.clone(), c.clone());
        let (plain, inv) = flavor_images(&term, win)?;
        if plain != inv.scale(&Rat::from_integer(dc.det())) {
            return Ok(false);
        }
    }
    Ok(true)
}
