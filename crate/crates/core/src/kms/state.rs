//! The Gibbs states `φ_{β,p,w}(a) = Z_p^{-1} Tr(π_w(a) e^{-βH_p})` and the
//! KMS condition for the dynamics scaling determinant class `d` by `d^{it}`.

use std::collections::BTreeMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::is_prime;
use crate::exact::{rat_int, QMat2, Rat};
use crate::lattice::{superlattices, Lattice};
use crate::spectral::{diagonal_entry, AdelicPoint, Generator};

use super::partition::{euler_factor, partition_prime};
use super::precision::{Beta, Certified, CertifiedOut, Ctx};

/// Largest window enumerated lattice by lattice.
pub const ENUMERATION_CAP: usize = 6000;

/// Product of generators, leftmost applied last.
pub type Word = Vec<Generator>;

#[derive(Clone, Debug)]
pub struct StateSpec {
    pub p: u64,
    pub beta: Beta,
    pub depth: u32,
    pub w: Option<AdelicPoint>,
    pub det_power: u32,
}

impl StateSpec {
    pub fn new(p: u64, beta: Beta, depth: u32) -> Self {
        StateSpec { p, beta, depth, w: None, det_power: 1 }
    }

    pub fn with_w(mut self, w: AdelicPoint) -> Self {
        self.w = Some(w);
        self
    }

    /// Inverse temperature seen by `H`: `β` times the determinant power.
    pub fn effective_beta(&self) -> Beta {
        self.beta.scaled(self.det_power)
    }
}

#[derive(Clone, Debug)]
pub struct StateValue {
    pub value: Certified,
    pub method: &'static str,
    pub depth_used: u32,
    pub warning: Option<String>,
}

/// `p^{-a} Z ⊕ p^{-b} Z`, the representative of the orbit type `(a, b)`.
fn type_representative(p: u64, a: u32, b: u32) -> Result<Lattice> {
    let pa = Rat::new(BigInt::one(), BigInt::from(p).pow(a));
    let pb = Rat::new(BigInt::one(), BigInt::from(p).pow(b));
    Lattice::from_basis(&QMat2::diag(pa, pb))
}

/// Number of `p`-lattices with `L / Z^2 ≅ Z/p^a ⊕ Z/p^b`, `a ≤ b`.
fn type_count(p: u64, a: u32, b: u32) -> BigInt {
    if a == b {
        BigInt::one()
    } else {
        BigInt::from(p).pow(b - a - 1) * (p + 1)
    }
}

fn word_bound(word: &[Generator]) -> Rat {
    word.iter().map(Generator::column_bound).product()
}

/// Per-depth trace sums `S_j = Σ_{[L:Z^2] = p^j} <π(word) δ_L, δ_L>`, exact.
///
/// For words commuting with `U_w` the diagonal is constant on orbit types,
/// so one representative per type suffices.
pub fn depth_traces_by_type(word: &[Generator], p: u64, depth: u32) -> Result<Vec<Rat>> {
    let mut out = Vec::with_capacity(depth as usize + 1);
    for j in 0..=depth {
        let mut s = Rat::zero();
        for a in 0..=j / 2 {
            let b = j - a;
            let rep = type_representative(p, a, b)?;
            let d = diagonal_entry(word, &rep, None)?;
            if !d.is_zero() {
                s += d * Rat::from_integer(type_count(p, a, b));
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// The same sums by visiting every lattice, with the twisted formulas when
/// `w` is given.
pub fn depth_traces_by_enumeration(word: &[Generator], p: u64, depth: u32, w: Option<&AdelicPoint>) -> Result<Vec<Rat>> {
    let mut out = Vec::with_capacity(depth as usize + 1);
    for j in 0..=depth {
        let mut s = Rat::zero();
        for l in superlattices(p.pow(j)) {
            s += diagonal_entry(word, &l, w)?;
        }
        out.push(s);
    }
    Ok(out)
}

fn enumeration_depth(p: u64, depth: u32) -> u32 {
    let mut size = 0usize;
    let mut d = 0;
    while d <= depth {
        size += crate::exact::arith::sigma1(p.pow(d)) as usize;
        if size > ENUMERATION_CAP {
            break;
        }
        d += 1;
    }
    d.saturating_sub(1)
}

fn check_word(word: &[Generator], p: u64) -> Result<()> {
    for g in word {
        let ok = match g {
            Generator::V(q) | Generator::VStar(q) | Generator::U(q) | Generator::UStar(q) | Generator::E { p: q, .. } => *q == p,
            Generator::Hecke(f) => f.terms().all(|(dc, _)| dc.is_power_of(p)),
            Generator::PiL(l) => l.p_depth(p).is_some(),
        };
        if !ok {
            return Err(Error::Invalid(format!("{g} does not act on p = {p} lattices")));
        }
    }
    Ok(())
}

/// `φ_{β,p,w}(word)` truncated at `depth` with the tail bounded by the
/// product of column bounds times the tail of the local partition function.
pub fn phi(word: &[Generator], spec: &StateSpec, ctx: &Ctx) -> Result<StateValue> {
    if !is_prime(spec.p) {
        return Err(Error::NotPrime(spec.p));
    }
    check_word(word, spec.p)?;
    let beta = spec.effective_beta();
    if !beta.gt(1) {
        return Err(Error::Divergent(format!("state at beta = {beta}")));
    }
    let invariant = spec.w.is_none() && word.iter().all(Generator::is_invariant);
    let (traces, depth, method) = if invariant {
        (depth_traces_by_type(word, spec.p, spec.depth)?, spec.depth, "orbit_types")
    } else {
        let d = enumeration_depth(spec.p, spec.depth);
        (depth_traces_by_enumeration(word, spec.p, d, spec.w.as_ref())?, d, "enumeration")
    };
    finish(traces, depth, method, word_bound(word), spec, ctx)
}

fn finish(traces: Vec<Rat>, depth: u32, method: &'static str, c: Rat, spec: &StateSpec, ctx: &Ctx) -> Result<StateValue> {
    let p = spec.p;
    let beta = spec.effective_beta();
    let mut sum = ctx.zero();
    for (j, s) in traces.iter().enumerate() {
        if !s.is_zero() {
            let w = ctx.pow_neg(&Rat::from_integer(BigInt::from(p).pow(j as u32)), &beta);
            sum = ctx.add(&sum, &ctx.mul(&ctx.rat(s), &w));
        }
    }
    let z = euler_factor(p, &beta, ctx);
    let value = ctx.div(&sum, &z);
    let local = partition_prime(p, &beta, depth, ctx)?;
    let tail = ctx.div(&ctx.mul(&ctx.rat(&c.abs()), &local.tail), &z);
    let magnitude = ctx.max(&ctx.abs(&value), &ctx.rat(&c.abs()));
    let bound = ctx.add(&tail, &ctx.slack(&magnitude, 8 * (depth as u64 + 4)));
    let warning = (!beta.gt(2)).then(|| format!("global normalization diverges at beta = {beta}; per-prime value only"));
    Ok(StateValue { value: Certified::new(value, bound), method, depth_used: depth, warning })
}

/// `φ` of a linear combination of words.
pub fn phi_combination(terms: &[(Rat, Word)], spec: &StateSpec, ctx: &Ctx) -> Result<Certified> {
    let mut value = ctx.zero();
    let mut bound = ctx.zero();
    for (c, word) in terms {
        let v = phi(word, spec, ctx)?;
        let cf = ctx.rat(c);
        value = ctx.add(&value, &ctx.mul(&cf, &v.value.value));
        bound = ctx.add(&bound, &ctx.mul(&ctx.abs(&cf), &v.value.bound));
    }
    Ok(Certified::new(value, bound))
}

pub fn star_word(word: &[Generator]) -> Result<Word> {
    word.iter().rev().map(Generator::star).collect()
}

/// Determinant class of a homogeneous word.
pub fn det_class(word: &[Generator]) -> Result<Rat> {
    let mut d = Rat::one();
    for g in word {
        d *= g.det_class().ok_or(Error::NotHomogeneous)?;
    }
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub a: String,
    pub b: String,
    pub det_a: String,
    pub phi_ab: CertifiedOut,
    pub phi_ba: CertifiedOut,
    pub residual: String,
    pub tail_bound: String,
    pub tolerance: String,
    pub pass: bool,
}

pub struct Residual {
    pub residual: BigFloat,
    pub bound: BigFloat,
    pub row: ResidualRow,
}

fn word_name(word: &[Generator]) -> String {
    if word.is_empty() {
        "1".into()
    } else {
        word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// `|φ(ab) - d(a)^{-β} φ(ba)|` for homogeneous `a`, `b`.
pub fn kms_residual(a: &[Generator], b: &[Generator], spec: &StateSpec, tolerance: f64, ctx: &Ctx) -> Result<Residual> {
    let da = det_class(a)?;
    det_class(b)?;
    let beta = spec.effective_beta();
    let ab: Word = a.iter().chain(b).cloned().collect();
    let ba: Word = b.iter().chain(a).cloned().collect();
    let lhs = phi(&ab, spec, ctx)?;
    let rhs = phi(&ba, spec, ctx)?;
    let scale = ctx.pow_neg(&da, &beta);
    let scaled = ctx.mul(&scale, &rhs.value.value);
    let residual = ctx.abs(&ctx.sub(&lhs.value.value, &scaled));
    let bound = ctx.add(&lhs.value.bound, &ctx.mul(&scale, &rhs.value.bound));
    let tol = ctx.from_f64(tolerance);
    let row = ResidualRow {
        a: word_name(a),
        b: word_name(b),
        det_a: da.to_string(),
        phi_ab: lhs.value.render(ctx),
        phi_ba: rhs.value.render(ctx),
        residual: ctx.fmt(&residual),
        tail_bound: ctx.fmt(&bound),
        tolerance: format!("{tolerance:e}"),
        pass: ctx.le(&residual, &tol),
    };
    Ok(Residual { residual, bound, row })
}

/// `{v_p, v_p*, u_p, u_p*, e_{Z^2}}`.
pub fn generator_family(p: u64) -> Vec<Generator> {
    vec![
        Generator::V(p),
        Generator::VStar(p),
        Generator::U(p),
        Generator::UStar(p),
        Generator::E { lattice: Lattice::z2(), p },
    ]
}

pub fn residual_table(spec: &StateSpec, tolerance: f64, ctx: &Ctx) -> Result<Vec<ResidualRow>> {
    let fam = generator_family(spec.p);
    let mut rows = vec![kms_residual(&[], &[], spec, tolerance, ctx)?.row];
    for a in &fam {
        for b in &fam {
            rows.push(kms_residual(std::slice::from_ref(a), std::slice::from_ref(b), spec, tolerance, ctx)?.row);
        }
    }
    Ok(rows)
}

/// Random `T = Σ c_i w_i` over words of length ≤ 3 in the generator family,
/// expanded so that `T* T` is a combination of words.
pub fn random_positive_element(p: u64, rng: &mut ChaCha8Rng) -> Result<Vec<(Rat, Word)>> {
    let fam = generator_family(p);
    let n_terms = rng.gen_range(1..=3);
    let mut t: Vec<(Rat, Word)> = Vec::new();
    for _ in 0..n_terms {
        let len = rng.gen_range(0..=3);
        let word: Word = (0..len).map(|_| fam[rng.gen_range(0..fam.len())].clone()).collect();
        let c = Rat::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)));
        t.push((c, word));
    }
    let mut out: BTreeMap<String, (Rat, Word)> = BTreeMap::new();
    for (ci, wi) in &t {
        let si = star_word(wi)?;
        for (cj, wj) in &t {
            let word: Word = si.iter().chain(wj).cloned().collect();
            let e = out.entry(format!("{word:?}")).or_insert_with(|| (Rat::zero(), word));
            e.0 += ci * cj;
        }
    }
    Ok(out.into_values().filter(|(c, _)| !c.is_zero()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityRow {
    pub sample: usize,
    pub terms: usize,
    pub value: CertifiedOut,
    pub pass: bool,
}

/// `φ(T*T) ≥ -bound` for `count` seeded random `T`.
pub fn positivity_check(spec: &StateSpec, count: usize, seed: u64, ctx: &Ctx) -> Result<Vec<PositivityRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    for sample in 0..count {
        let terms = random_positive_element(spec.p, &mut rng)?;
        let v = phi_combination(&terms, spec, ctx)?;
        let pass = ctx.le(&ctx.zero(), &v.upper(ctx));
        rows.push(PositivityRow { sample, terms: terms.len(), value: v.render(ctx), pass });
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceRow {
    pub w: String,
    pub element: String,
    pub phi_unit: CertifiedOut,
    pub phi_w: CertifiedOut,
    pub pass: bool,
}

/// `φ_{β,w}(f) = φ_β(f)` within the combined bounds for `f` in
/// `{u_p, v_p* v_p, e_{Z^2}}`.
pub fn w_independence_check(spec: &StateSpec, points: &[AdelicPoint], ctx: &Ctx) -> Result<Vec<IndependenceRow>> {
    let p = spec.p;
    let words: Vec<Word> = vec![
        vec![Generator::U(p)],
        vec![Generator::VStar(p), Generator::V(p)],
        vec![Generator::E { lattice: Lattice::z2(), p }],
    ];
    let mut rows = Vec::new();
    for w in points {
        let tw = spec.clone().with_w(*w);
        for word in &words {
            let a = phi(word, spec, ctx)?;
            let b = phi(word, &tw, ctx)?;
            let pass = a.value.agrees(ctx, &b.value.value, &b.value.bound);
            rows.push(IndependenceRow {
                w: w.to_string(),
                element: word_name(word),
                phi_unit: a.value.render(ctx),
                phi_w: b.value.render(ctx),
                pass,
            });
        }
    }
    Ok(rows)
}

/// `(1 - p^{-β})(1 - p^{1-β})`, the state of the rank-one projection `e_{Z^2}`.
pub fn e0_expected(p: u64, beta: &Beta, ctx: &Ctx) -> BigFloat {
    ctx.div(&ctx.one(), &euler_factor(p, beta, ctx))
}

/// `p + 1`, the value distinguishing the regular states.
pub fn v_star_v_expected(p: u64) -> Rat {
    rat_int(p + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_match_enumeration() {
        for p in [2u64, 3] {
            for word in [
                vec![Generator::VStar(p), Generator::V(p)],
                vec![Generator::V(p), Generator::VStar(p)],
                vec![Generator::U(p), Generator::UStar(p)],
                vec![Generator::E { lattice: Lattice::z2(), p }],
            ] {
                let d = if p == 2 { 5 } else { 3 };
                assert_eq!(depth_traces_by_type(&word, p, d).unwrap(), depth_traces_by_enumeration(&word, p, d, None).unwrap());
            }
        }
    }

    #[test]
    fn identity_state_is_one() {
        let ctx = Ctx::new(30).unwrap();
        let spec = StateSpec::new(2, Beta::parse("3").unwrap(), 30);
        let v = phi(&[], &spec, &ctx).unwrap();
        assert!(v.value.agrees(&ctx, &ctx.one(), &ctx.zero()));
    }
}
