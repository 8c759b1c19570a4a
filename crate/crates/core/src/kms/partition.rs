//! Partition functions `Tr(e^{-βH})` globally and at one prime.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::is_prime;
use crate::exact::{rat_int, Rat};
use crate::lattice::superlattices;

use super::precision::{Beta, Certified, CertifiedOut, Ctx};

/// Terms used for `ζ` when the caller does not choose.
pub const DEFAULT_ZETA_TERMS: u64 = 20_000;

/// `ζ(s)` for `s > 1` as `Σ_{n≤N} n^{-s}` plus the midpoint of the integral
/// bracket `[(N+1)^{1-s}, N^{1-s}] / (s-1)` for the tail.
pub fn zeta(s: &Beta, terms: u64, ctx: &Ctx) -> Result<Certified> {
    if !s.gt(1) {
        return Err(Error::Divergent(format!("zeta({s})")));
    }
    if terms == 0 {
        return Err(Error::Invalid("zeta needs at least one term".into()));
    }
    let mut sum = ctx.zero();
    for n in 1..=terms {
        sum = ctx.add(&sum, &ctx.pow_neg(&rat_int(n), s));
    }
    let sm1 = ctx.rat(&(s.exact() - rat_int(1u32)));
    let one_minus = Beta::from_rat(s.exact() - rat_int(1u32));
    let hi = ctx.div(&ctx.pow_neg(&rat_int(terms), &one_minus), &sm1);
    let lo = ctx.div(&ctx.pow_neg(&rat_int(terms + 1), &one_minus), &sm1);
    let two = ctx.u64(2);
    let mid = ctx.div(&ctx.add(&hi, &lo), &two);
    let half = ctx.div(&ctx.sub(&hi, &lo), &two);
    let value = ctx.add(&sum, &mid);
    let bound = ctx.add(&half, &ctx.slack(&value, terms + 8));
    Ok(Certified::new(value, bound))
}

/// `(1 - p^{-β})^{-1} (1 - p^{1-β})^{-1}`.
pub fn euler_factor(p: u64, beta: &Beta, ctx: &Ctx) -> BigFloat {
    let pr = rat_int(p);
    let a = ctx.sub(&ctx.one(), &ctx.pow_neg(&pr, beta));
    let b = ctx.sub(&ctx.one(), &ctx.pow_neg(&pr, &Beta::from_rat(beta.exact() - rat_int(1u32))));
    ctx.div(&ctx.one(), &ctx.mul(&a, &b))
}

/// `σ1(p^j)`, read off the lattice enumeration for small `j`.
pub fn sigma1_prime_power(p: u64, j: u32) -> BigInt {
    if j <= 4 {
        if let Some(n) = p.checked_pow(j) {
            if n <= 100_000 {
                return BigInt::from(superlattices(n).len());
            }
        }
    }
    let pb = BigInt::from(p);
    (pb.pow(j + 1) - 1u32) / (pb - 1u32)
}

/// Divisor sums `σ1(n)` for `n ≤ bound`, by sieving.
pub fn sigma1_table(bound: u64) -> Vec<u64> {
    let mut s = vec![0u64; bound as usize + 1];
    for d in 1..=bound {
        let mut m = d;
        while m <= bound {
            s[m as usize] += d;
            m += d;
        }
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub beta: Beta,
    pub truncation: u64,
    pub partial_sum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_partial_sum: Option<String>,
    pub closed_form: CertifiedOut,
    pub tail_lower: String,
    pub tail_bound: String,
    pub difference: String,
    pub within_bound: bool,
    pub certified: bool,
}

/// Local partition function data with the high-precision values kept.
pub struct PrimePartition {
    pub partial: BigFloat,
    pub exact_partial: Option<Rat>,
    pub closed: BigFloat,
    pub tail: BigFloat,
    pub report: PartitionReport,
}

/// `Σ_{j≤k} σ1(p^j) p^{-βj}` against the Euler factor.
pub fn partition_prime(p: u64, beta: &Beta, depth: u32, ctx: &Ctx) -> Result<PrimePartition> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !beta.gt(1) {
        return Err(Error::Divergent(format!("local partition function at beta = {beta}")));
    }
    let pr = rat_int(p);
    let mut partial = ctx.zero();
    let mut exact = beta.as_integer().map(|_| Rat::zero());
    for j in 0..=depth {
        let pj = Rat::from_integer(BigInt::from(p).pow(j));
        let s = sigma1_prime_power(p, j);
        partial = ctx.add(&partial, &ctx.mul(&ctx.int(&s), &ctx.pow_neg(&pj, beta)));
        if let (Some(e), Some(b)) = (exact.as_mut(), beta.as_integer()) {
            *e += Rat::from_integer(s) * pj.recip().pow(b as i32);
        }
    }
    let closed = euler_factor(p, beta, ctx);
    // Σ_{j>k} σ1(p^j) p^{-βj} ≤ p/(p-1) Σ_{j>k} p^{(1-β)j}.
    let r = ctx.pow_neg(&pr, &Beta::from_rat(beta.exact() - rat_int(1u32)));
    let first = ctx.pow_neg(&pr, &Beta::from_rat((beta.exact() - rat_int(1u32)) * rat_int(depth + 1)));
    let geo = ctx.div(&first, &ctx.sub(&ctx.one(), &r));
    let tail = ctx.add(&ctx.mul(&ctx.div(&ctx.u64(p), &ctx.u64(p - 1)), &geo), &ctx.slack(&closed, 4 * depth as u64 + 16));
    // σ1(p^j) ≥ p^j gives the matching lower bound.
    let tail_lower = geo.clone();
    let diff = ctx.abs(&ctx.sub(&partial, &closed));
    let report = PartitionReport {
        kind: "prime",
        p: Some(p),
        beta: beta.clone(),
        truncation: depth as u64,
        partial_sum: ctx.fmt(&partial),
        exact_partial_sum: exact.as_ref().map(|e| e.to_string()),
        closed_form: Certified::exact(ctx, closed.clone()).render(ctx),
        tail_lower: ctx.fmt(&tail_lower),
        tail_bound: ctx.fmt(&tail),
        difference: ctx.fmt(&diff),
        within_bound: ctx.le(&diff, &tail),
        certified: true,
    };
    Ok(PrimePartition { partial, exact_partial: exact, closed, tail, report })
}

pub struct GlobalPartition {
    pub partial: BigFloat,
    pub closed: Certified,
    pub tail_lower: BigFloat,
    pub tail_upper: BigFloat,
    pub report: PartitionReport,
}

/// `Σ_{n≤B} σ1(n) n^{-β}` against `ζ(β)ζ(β-1)`.
///
/// The tail `Σ_{n>B} σ1(n) n^{-β}` lies between `(B+1)^{2-β}/(β-2)` (from
/// `σ1(n) ≥ n`) and `B^{1-s}((1 + ln B)/(s-1) + 1/(s-1)^2)` with `s = β-1`
/// (from `σ1(n) ≤ n(1 + ln n)`).
pub fn partition_global(beta: &Beta, bound: u64, zeta_terms: u64, ctx: &Ctx) -> Result<GlobalPartition> {
    if !beta.gt(1) {
        return Err(Error::Divergent(format!("partition function at beta = {beta}")));
    }
    if !beta.gt(2) {
        return Err(Error::Uncertified(format!("zeta(beta - 1) diverges at beta = {beta}")));
    }
    if bound < 3 {
        return Err(Error::Invalid("bound must be at least 3".into()));
    }
    let sig = sigma1_table(bound);
    let mut partial = ctx.zero();
    for n in 1..=bound {
        partial = ctx.add(&partial, &ctx.mul(&ctx.u64(sig[n as usize]), &ctx.pow_neg(&rat_int(n), beta)));
    }
    let bm1 = Beta::from_rat(beta.exact() - rat_int(1u32));
    let z1 = zeta(beta, zeta_terms, ctx)?;
    let z2 = zeta(&bm1, zeta_terms, ctx)?;
    let value = ctx.mul(&z1.value, &z2.value);
    let zb = ctx.add(
        &ctx.add(&ctx.mul(&ctx.abs(&z1.value), &z2.bound), &ctx.mul(&ctx.abs(&z2.value), &z1.bound)),
        &ctx.add(&ctx.mul(&z1.bound, &z2.bound), &ctx.slack(&value, 4)),
    );
    let closed = Certified::new(value, zb);

    let s = ctx.rat(&(beta.exact() - rat_int(1u32)));
    let sm1 = ctx.sub(&s, &ctx.one());
    let b = ctx.u64(bound);
    let b_pow = ctx.pow_neg(&rat_int(bound), &Beta::from_rat(beta.exact() - rat_int(2u32)));
    let upper = ctx.mul(
        &b_pow,
        &ctx.add(&ctx.div(&ctx.add(&ctx.one(), &ctx.ln(&b)), &sm1), &ctx.div(&ctx.one(), &ctx.mul(&sm1, &sm1))),
    );
    let lower = ctx.div(&ctx.pow_neg(&rat_int(bound + 1), &Beta::from_rat(beta.exact() - rat_int(2u32))), &sm1);
    let tail_upper = ctx.add(&ctx.add(&upper, &closed.bound), &ctx.slack(&partial, bound + 8));
    let diff = ctx.abs(&ctx.sub(&partial, &closed.value));
    let report = PartitionReport {
        kind: "global",
        p: None,
        beta: beta.clone(),
        truncation: bound,
        partial_sum: ctx.fmt(&partial),
        exact_partial_sum: None,
        closed_form: closed.render(ctx),
        tail_lower: ctx.fmt(&lower),
        tail_bound: ctx.fmt(&tail_upper),
        difference: ctx.fmt(&diff),
        within_bound: ctx.le(&diff, &tail_upper),
        certified: true,
    };
    Ok(GlobalPartition { partial, closed, tail_lower: lower, tail_upper, report })
}

/// `Σ_{n ≤ p^k, n a power of p} σ1(n) n^{-β}` from the global series, exactly.
pub fn global_prime_power_partial(p: u64, beta: i64, depth: u32) -> Rat {
    let top = p.pow(depth);
    let sig = sigma1_table(top);
    let mut out = Rat::zero();
    let mut n = 1u64;
    loop {
        out += Rat::from_integer(sig[n as usize].into()) * rat_int(n).recip().pow(beta as i32);
        if n == top {
            break;
        }
        n *= p;
    }
    out
}
