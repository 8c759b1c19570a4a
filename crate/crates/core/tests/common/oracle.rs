//! Brute-force enumerations that do not go through the library formulas.

use std::collections::{BTreeSet, VecDeque};

use hecke_core::coset::{coset_label, SemidirectElement};
use hecke_core::exact::{IMat2, QMat2, Rat};
use hecke_core::lattice::Lattice;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Label of the right coset `P0 (m, h)`: the Hermite representative `H` of
/// `Γ h` together with `m δ^-1 mod M2(Z)` where `δ = H h^-1`.
pub fn right_label(x: &SemidirectElement) -> (QMat2, QMat2) {
    let h = coset_label(&x.g).unwrap();
    let delta = &h * &x.g.inverse().unwrap();
    let m = &x.m * &delta.inverse().unwrap();
    let frac = |r: &Rat| r - r.floor();
    (h, QMat2::new(frac(&m.a), frac(&m.b), frac(&m.c), frac(&m.d)))
}

fn generators() -> Vec<SemidirectElement> {
    let mut gens = Vec::new();
    for k in 0..4 {
        for sign in [1i64, -1] {
            let mut e = [[(0, 1); 2]; 2];
            e[k / 2][k % 2] = (sign, 1);
            gens.push(SemidirectElement::new(QMat2::from_ratios(e), QMat2::identity()).unwrap());
        }
    }
    for g in [[[0, -1], [1, 0]], [[0, 1], [-1, 0]], [[1, 1], [0, 1]], [[1, -1], [0, 1]]] {
        gens.push(SemidirectElement::new(QMat2::zero(), IMat2::from_i64(g).to_q()).unwrap());
    }
    gens
}

fn denominator_ok(label: &(QMat2, QMat2), cap: u64) -> bool {
    let d = label.0.denominator() * label.1.denominator();
    d.to_u64().is_some_and(|d| d <= cap)
}

/// All right cosets `P0 y` inside `P0 x P0`, by closure of `P0 x` under
/// right multiplication by generators of `P0`.
pub fn right_coset_labels(x: &SemidirectElement, denom_cap: u64) -> Option<BTreeSet<(QMat2, QMat2)>> {
    let gens = generators();
    let start = right_label(x);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        for g in &gens {
            let z = y.mul(g);
            let label = right_label(&z);
            if !denominator_ok(&label, denom_cap) || seen.len() > 200_000 {
                return None;
            }
            if seen.insert(label.clone()) {
                // Continue from the canonical representative to keep entries small.
                queue.push_back(SemidirectElement::new(label.1, label.0).unwrap());
            }
        }
    }
    Some(seen)
}

/// `(R, L)` for `P0 x P0` by direct enumeration; `L(x) = R(x^-1)`.
pub fn bfs_coset_oracle(x: &SemidirectElement, denom_cap: u64) -> Option<(BigInt, BigInt)> {
    let r = right_coset_labels(x, denom_cap)?.len();
    let l = right_coset_labels(&x.inverse(), denom_cap)?.len();
    Some((BigInt::from(r), BigInt::from(l)))
}

/// `|M2(Z) / (M2(Z) ∩ M2(Z) g)|` as the number of distinct values of
/// `m g^-1 mod M2(Z)` for `m` over `M2(Z / D)`, `D` the denominator of `g^-1`.
pub fn module_index_by_image(g: &QMat2) -> u64 {
    let gi = g.inverse().unwrap();
    let d = gi.denominator().to_i64().unwrap();
    let frac = |r: Rat| r.clone() - r.floor();
    let mut seen = BTreeSet::new();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let m = IMat2::from_i64([[a, b], [c, e]]).to_q();
                    let p = &m * &gi;
                    seen.insert([frac(p.a), frac(p.b), frac(p.c), frac(p.d)]);
                }
            }
        }
    }
    seen.len() as u64
}

/// `|det|` of right multiplication by an integral `g` on `Z^4 = M2(Z)`.
pub fn right_mult_det(g: &IMat2) -> BigInt {
    // Row-major coordinates (m11, m12, m21, m22); m g acts on each row.
    let [a, b, c, d] = g.entries().map(|x| x.clone());
    let z = BigInt::from(0);
    let m = [
        [a.clone(), b.clone(), z.clone(), z.clone()],
        [c.clone(), d.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), a, b],
        [z.clone(), z, c, d],
    ];
    det4(&m).magnitude().clone().into()
}

fn det4(m: &[[BigInt; 4]; 4]) -> BigInt {
    let mut total = BigInt::from(0);
    for perm in permutations(4) {
        let mut term = BigInt::from(1);
        for (i, &j) in perm.iter().enumerate() {
            term *= &m[i][j];
        }
        if sign(&perm) < 0 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Divisor sum by trial division.
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

/// Subgroups of order `n` in `(Z/n)^2`, built as sets from every pair of generators.
pub fn subgroups_by_brute_force(n: u64) -> BTreeSet<BTreeSet<(u64, u64)>> {
    let mut out = BTreeSet::new();
    let pts: Vec<(u64, u64)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i..] {
            let g: BTreeSet<(u64, u64)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| ((a * x.0 + b * y.0) % n, (a * x.1 + b * y.1) % n)))
                .collect();
            if g.len() as u64 == n {
                out.insert(g);
            }
        }
    }
    out
}

/// `n (L / Z^2)` as a subgroup of `(Z/n)^2`.
pub fn as_subgroup(l: &Lattice, n: u64) -> BTreeSet<(u64, u64)> {
    let gens: Vec<(u64, u64)> = l
        .basis_points()
        .iter()
        .map(|x| {
            let f = |r: &Rat| {
                let s = r * Rat::from_integer(n.into());
                assert!(s.is_integer());
                let v: i64 = s.to_integer().try_into().unwrap();
                v.rem_euclid(n as i64) as u64
            };
            (f(&x[0]), f(&x[1]))
        })
        .collect();
    (0..n)
        .flat_map(|a| {
            let gens = &gens;
            (0..n).map(move |b| ((a * gens[0].0 + b * gens[1].0) % n, (a * gens[0].1 + b * gens[1].1) % n))
        })
        .collect()
}
