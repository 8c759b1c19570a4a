//! Cylinder values and orbit masses of the measures behind the states.

use astro_float::BigFloat;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::{is_prime, primes_up_to};
use crate::exact::{rat_int, IMat2, Rat};

use super::partition::{partition_global, zeta};
use super::precision::{Beta, Certified, CertifiedOut, Ctx};

#[derive(Clone, Debug, Serialize)]
pub struct CylinderValue {
    pub primes: Vec<u64>,
    pub beta: Beta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: String,
}

/// `Π_{p ∈ F} (1 - p^{-β})(1 - p^{1-β})`, exact for integer `β`.
pub fn measure_cylinder(primes: &[u64], beta: &Beta, ctx: &Ctx) -> Result<(BigFloat, CylinderValue)> {
    if !beta.gt(1) {
        return Err(Error::Divergent(format!("measure at beta = {beta}")));
    }
    let mut ps = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut value = ctx.one();
    let mut exact = beta.as_integer().map(|_| Rat::one());
    for &p in &ps {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        value = ctx.mul(&value, &local_factor(p, beta, ctx));
        if let (Some(e), Some(b)) = (exact.as_mut(), beta.as_integer()) {
            let pr = rat_int(p);
            *e *= (Rat::one() - pr.recip().pow(b as i32)) * (Rat::one() - pr.recip().pow(b as i32 - 1));
        }
    }
    let out = CylinderValue { primes: ps, beta: beta.clone(), exact: exact.map(|e| e.to_string()), value: ctx.fmt(&value) };
    Ok((value, out))
}

fn local_factor(p: u64, beta: &Beta, ctx: &Ctx) -> BigFloat {
    let pr = rat_int(p);
    let a = ctx.sub(&ctx.one(), &ctx.pow_neg(&pr, beta));
    let b = ctx.sub(&ctx.one(), &ctx.pow_neg(&pr, &Beta::from_rat(beta.exact() - rat_int(1u32))));
    ctx.mul(&a, &b)
}

/// `ζ(β)ζ(β-1)` with its bound, for `β > 2`.
pub fn zeta_product(beta: &Beta, terms: u64, ctx: &Ctx) -> Result<Certified> {
    if !beta.gt(2) {
        return Err(Error::Uncertified(format!("zeta(beta - 1) at beta = {beta}")));
    }
    let z1 = zeta(beta, terms, ctx)?;
    let z2 = zeta(&Beta::from_rat(beta.exact() - rat_int(1u32)), terms, ctx)?;
    let value = ctx.mul(&z1.value, &z2.value);
    let bound = ctx.add(
        &ctx.add(&ctx.mul(&z1.value, &z2.bound), &ctx.mul(&z2.value, &z1.bound)),
        &ctx.add(&ctx.mul(&z1.bound, &z2.bound), &ctx.slack(&value, 4)),
    );
    Ok(Certified::new(value, bound))
}

/// `Z^{-1} det(s)^{-β}` with `Z = ζ(β)ζ(β-1)`.
pub fn mu_orbit_mass(s: &IMat2, beta: &Beta, terms: u64, ctx: &Ctx) -> Result<Certified> {
    let det = s.det();
    if !det.is_positive() {
        return Err(Error::NonPositiveDeterminant(det.to_string()));
    }
    let z = zeta_product(beta, terms, ctx)?;
    let w = ctx.pow_neg(&Rat::from_integer(det), beta);
    let value = ctx.div(&w, &z.value);
    // |w/Z - w/Ẑ| ≤ w e / (Ẑ (Ẑ - e)).
    let zl = z.lower(ctx);
    let bound = ctx.add(&ctx.div(&ctx.mul(&w, &z.bound), &ctx.mul(&z.value, &zl)), &ctx.slack(&value, 8));
    Ok(Certified::new(value, bound))
}

#[derive(Clone, Debug, Serialize)]
pub struct MassReport {
    pub beta: Beta,
    pub bound: u64,
    pub lower: String,
    pub upper: String,
    pub window: (String, String),
    pub pass: bool,
}

/// `Σ_{[L:Z^2] ≤ B} μ(Γ s_L)` enclosed in `[partial / Z_up, partial / Z_low]`.
pub fn orbit_mass_total(beta: &Beta, bound: u64, terms: u64, tolerance: f64, ctx: &Ctx) -> Result<(BigFloat, BigFloat, MassReport)> {
    let g = partition_global(beta, bound, terms, ctx)?;
    let z_up = g.closed.upper(ctx);
    // Z ≥ partial + certified lower tail as well.
    let z_low = ctx.max(&g.closed.lower(ctx), &ctx.add(&g.partial, &g.tail_lower));
    let lower = ctx.sub(&ctx.div(&g.partial, &z_up), &ctx.slack(&ctx.one(), bound));
    let upper = ctx.add(&ctx.div(&g.partial, &z_low), &ctx.slack(&ctx.one(), bound));
    let lo_target = ctx.sub(&ctx.one(), &ctx.from_f64(tolerance));
    let pass = ctx.le(&lo_target, &lower) && ctx.le(&upper, &ctx.one());
    let report = MassReport {
        beta: beta.clone(),
        bound,
        lower: ctx.fmt(&lower),
        upper: ctx.fmt(&upper),
        window: (ctx.fmt(&lo_target), "1".into()),
        pass,
    };
    Ok((lower, upper, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerRow {
    pub prime_bound: u64,
    pub cylinder: String,
    pub identity_mass: CertifiedOut,
    pub difference: String,
    pub bound: String,
    pub pass: bool,
}

/// `Π_{p ≤ P}(1 - p^{-β})(1 - p^{1-β})` against `μ(Γ) = Z^{-1}`: the gap is
/// at most `Σ_{p>P}(p^{-β} + p^{1-β}) ≤ 2 P^{2-β}/(β-2)`.
pub fn euler_consistency(prime_bound: u64, beta: &Beta, terms: u64, ctx: &Ctx) -> Result<EulerRow> {
    let (cyl, _) = measure_cylinder(&primes_up_to(prime_bound), beta, ctx)?;
    let mass = mu_orbit_mass(&IMat2::identity(), beta, terms, ctx)?;
    let diff = ctx.abs(&ctx.sub(&cyl, &mass.value));
    let bm2 = Beta::from_rat(beta.exact() - rat_int(2u32));
    let tail = ctx.div(&ctx.mul(&ctx.u64(2), &ctx.pow_neg(&rat_int(prime_bound), &bm2)), &ctx.rat(bm2.exact()));
    let bound = ctx.add(&tail, &mass.bound);
    Ok(EulerRow {
        prime_bound,
        cylinder: ctx.fmt(&cyl),
        identity_mass: mass.render(ctx),
        difference: ctx.fmt(&diff),
        bound: ctx.fmt(&bound),
        pass: ctx.le(&diff, &bound),
    })
}

/// `μ(Γ s)` for `det s = p^j` times the number of classes of that index,
/// summed over `j ≤ k`, divided by `μ(Γ)`, is the local partial sum.
pub fn prime_power_masses(p: u64, beta: &Beta, depth: u32, terms: u64, ctx: &Ctx) -> Result<(BigFloat, BigFloat)> {
    let z = zeta_product(beta, terms, ctx)?;
    let unit = ctx.div(&ctx.one(), &z.value);
    let mut sum = ctx.zero();
    for j in 0..=depth {
        let det = Rat::from_integer(num_bigint::BigInt::from(p).pow(j));
        let m = ctx.div(&ctx.pow_neg(&det, beta), &z.value);
        let count = super::partition::sigma1_prime_power(p, j);
        sum = ctx.add(&sum, &ctx.mul(&ctx.int(&count), &m));
    }
    let local = super::partition::partition_prime(p, beta, depth, ctx)?;
    Ok((ctx.div(&sum, &unit), local.partial))
}
