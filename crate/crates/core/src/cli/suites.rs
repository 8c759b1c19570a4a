//! The five verification suites behind `verify` and `report`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coset::{pair_row, r_gamma, right_cosets, standard_vectors, DoubleCoset};
use crate::error::{Error, Result};
use crate::exact::{rat, IMat2};
use crate::hecke::{classes_up_to, convolve, convolve_basis, prime_classes, HeckeElement};
use crate::kms::measure::{measure_cylinder, orbit_mass_total};
use crate::kms::partition::{partition_prime, sigma1_prime_power, DEFAULT_ZETA_TERMS};
use crate::kms::state::{e0_expected, phi, positivity_check, residual_table, w_independence_check, StateSpec};
use crate::kms::{Beta, Ctx};
use crate::lattice::Lattice;
use crate::spectral::checks::{
    commutator_check, compact_generation_check, intertwining_check, pi_l_relation_check, projection_identity_check,
    sample_points, tensor_factorization_check,
};
use crate::spectral::Generator;

use super::config::{RunConfig, Suite, MAX_DEPTH, MAX_WINDOW_BOUND, MAX_WINDOW_DIM};
use super::report::Row;

pub const A_MODULAR: &str = "modular function is given by";
pub const A_COSETS: &str = "$R_\\Gamma\\diag{1}{p}=p+1$";
pub const A_DIAGONAL: &str = "every double coset of $\\Gamma$ in $\\glq$ has a diagonal representative";
pub const A_PRODUCT: &str = "endowed with the product";
pub const A_TENSOR_ALG: &str = "The algebra $\\hecke{S}{\\Gamma}$ is the tensor product of its subalgebras $\\hecke{S_p}{\\Gamma}$";
pub const A_PROJECTION: &str = "is the orthogonal projection onto";
pub const A_COMPACT: &str = "contains the algebra of compact operators";
pub const A_PI_L: &str = "$\\pi_L\\pi_{L'}=\\pi_{L+L'}$";
pub const A_BLOCKS: &str = "$\\pi(f)=\\pi_p(f)\\otimes1$";
pub const A_COMMUTE: &str = "mutually commute for different primes";
pub const A_INTERTWINE: &str = "Thus $U_w\\pi(f)U^*_w=\\pi_w(f)$";
pub const A_EULER: &str = "$(1-p^{-\\beta})^{-1}(1-p^{-\\beta+1})^{-1}$";
pub const A_ZETA: &str = "where $\\zeta$ is the Riemann";
pub const A_CHARACTERIZED: &str = "characterized by the equality";
pub const A_KMS: &str = "defines a $\\sigma$-KMS$_\\beta$-state";
pub const A_CYLINDER: &str = "Thus $\\mu(Y_F)=\\prod_{p\\in F}(1-p^{-\\beta})(1-p^{-\\beta+1})$";
pub const A_ORBIT_MASS: &str = "$\\mu_{\\beta,w}(\\slr sw)=\\zeta(\\beta)^{-1}\\zeta(\\beta-1)^{-1}\\det(s)^{-\\beta}$";
pub const A_LATTICES: &str = "with the set of lattices in $\\mathbb R^2$ containing $\\mathbb Z^2$";

/// Tolerances of the numeric rows.
pub const TOL_STATE: f64 = 1e-6;
pub const TOL_RESIDUAL: f64 = 1e-8;
pub const TOL_MASS: f64 = 1e-3;
/// Depth cap of the sampled state checks (positivity, w-independence),
/// which evaluate by lattice enumeration.
pub const SAMPLED_DEPTH: u32 = 5;

/// Default prime-window depth of the projection identity.
pub fn projection_depth(p: u64) -> u32 {
    if p == 2 {
        4
    } else {
        3
    }
}

/// Converts a library error into a skipped row (caps, certified ranges,
/// argument limits) or a failure.
pub fn guard(suite: &str, check: &str, anchor: &'static str, r: Result<Vec<Row>>) -> Vec<Row> {
    match r {
        Ok(rows) => rows,
        Err(e @ (Error::CapExceeded { .. } | Error::Uncertified(_) | Error::Divergent(_) | Error::Invalid(_))) => {
            vec![Row::skipped(suite, check, anchor, e.to_string())]
        }
        Err(e) => vec![Row::new(suite, check, anchor, false).detail(e.to_string())],
    }
}

fn prime_window_dim(p: u64, k: u32) -> u64 {
    (0..=k).map(|j| sigma1_prime_power(p, j)).sum::<BigInt>().try_into().unwrap_or(u64::MAX)
}

fn check_prime_window(p: u64, k: u32) -> Result<()> {
    let size = prime_window_dim(p, k);
    if size > MAX_WINDOW_DIM {
        return Err(Error::CapExceeded { what: "prime window", size: size as u128, cap: MAX_WINDOW_DIM as u128 });
    }
    Ok(())
}

fn check_global_window(bound: u64) -> Result<()> {
    if bound > MAX_WINDOW_BOUND {
        return Err(Error::CapExceeded { what: "global window bound", size: bound as u128, cap: MAX_WINDOW_BOUND as u128 });
    }
    Ok(())
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::CapExceeded { what: "depth", size: depth as u128, cap: MAX_DEPTH as u128 });
    }
    Ok(())
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<Row> {
    match suite {
        Suite::Pair => pair_suite(cfg),
        Suite::Hecke => hecke_suite(cfg),
        Suite::Projection => projection_suite(cfg),
        Suite::Tensor => tensor_suite(cfg),
        Suite::Kms => kms_suite(cfg),
    }
}

pub fn pair_suite(cfg: &RunConfig) -> Vec<Row> {
    const S: &str = "pair";
    let mut rows = Vec::new();
    for x in standard_vectors() {
        let check = format!("delta({}, {})", x.m, x.g);
        rows.extend(guard(S, &check, A_MODULAR, {
            pair_row(&x, cfg.modcap).map(|r| {
                vec![Row::new(S, &check, A_MODULAR, r.pass)
                    .value(r.delta)
                    .bound(r.expected)
                    .detail(format!("class {} R={} L={}", r.dc, r.r, r.l))]
            })
        }));
    }
    for &p in &cfg.primes {
        let check = format!("R(diag(1,{p}))");
        rows.extend(guard(S, &check, A_COSETS, {
            r_gamma(&IMat2::diag(1, p as i64).to_q()).map(|r| {
                let reps = right_cosets(&DoubleCoset::v(p)).len();
                let pass = r == BigInt::from(p + 1) && reps as u64 == p + 1;
                vec![Row::new(S, &check, A_COSETS, pass).value(r.to_string()).bound((p + 1).to_string())]
            })
        }));
    }
    rows
}

fn random_element(rng: &mut ChaCha8Rng, classes: &[DoubleCoset]) -> HeckeElement {
    let mut f = HeckeElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let dc = classes.choose(rng).expect("non-empty").clone();
        f.add_term(dc, rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
    }
    f
}

/// `Σ c_x R(x)`, the degree character.
fn degree(f: &HeckeElement) -> crate::exact::Rat {
    f.terms().map(|(dc, c)| c * crate::exact::Rat::from_integer(dc.coset_count())).sum()
}

pub fn hecke_suite(cfg: &RunConfig) -> Vec<Row> {
    const S: &str = "hecke";
    const TRIPLES: usize = 50;
    let classes = classes_up_to(16);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut assoc_fail, mut degree_fail) = (0, 0);
    for _ in 0..TRIPLES {
        let f = random_element(&mut rng, &classes);
        let g = random_element(&mut rng, &classes);
        let h = random_element(&mut rng, &classes);
        let fg = convolve(&f, &g);
        if convolve(&fg, &h) != convolve(&f, &convolve(&g, &h)) {
            assoc_fail += 1;
        }
        if degree(&fg) != degree(&f) * degree(&g) {
            degree_fail += 1;
        }
    }
    let mut rows = vec![
        Row::new(S, "associativity (det <= 16)", A_PRODUCT, assoc_fail == 0)
            .value(assoc_fail.to_string())
            .detail(format!("{TRIPLES} random triples, failures in value")),
        Row::new(S, "degree is multiplicative", A_PRODUCT, degree_fail == 0)
            .value(degree_fail.to_string())
            .detail(format!("{TRIPLES} random pairs, failures in value")),
    ];
    let k = cfg.k.unwrap_or(4);
    for &p in &cfg.primes {
        let check = format!("H(S_{p}) commutative (det <= {p}^{k})");
        let Some(top) = p.checked_pow(k).filter(|&t| t <= 1 << 12) else {
            rows.push(Row::skipped(S, check, A_TENSOR_ALG, format!("{p}^{k} exceeds 4096")));
            continue;
        };
        let pc = prime_classes(p, k);
        let mut failures = 0;
        for a in &pc {
            for b in &pc {
                if a < b && convolve_basis(a, b) != convolve_basis(b, a) {
                    failures += 1;
                }
            }
        }
        rows.push(
            Row::new(S, check, A_TENSOR_ALG, failures == 0)
                .value(failures.to_string())
                .detail(format!("{} classes up to {top}", pc.len())),
        );
    }
    // Coprime classes multiply to a single class.
    let mut coprime_fail = 0;
    let mut pairs = 0;
    for a in classes_up_to(12) {
        for b in classes_up_to(12) {
            if num_integer::Integer::gcd(&a.det(), &b.det()) == BigInt::from(1) {
                pairs += 1;
                let prod = convolve_basis(&a, &b);
                if prod.support().len() != 1 {
                    coprime_fail += 1;
                }
            }
        }
    }
    rows.push(
        Row::new(S, "coprime classes multiply to one class", A_DIAGONAL, coprime_fail == 0)
            .value(coprime_fail.to_string())
            .detail(format!("{pairs} pairs with det <= 12")),
    );
    rows
}

pub fn projection_suite(cfg: &RunConfig) -> Vec<Row> {
    const S: &str = "projection";
    let mut rows = Vec::new();
    for &p in &cfg.primes {
        let k = cfg.k.unwrap_or_else(|| projection_depth(p));
        let check = format!("v*v - vv* - p(1 - uu*) = e(Z^2), p={p} k={k}");
        rows.extend(guard(S, &check, A_PROJECTION, {
            check_prime_window(p, k).and_then(|_| projection_identity_check(p, k)).map(|r| {
                vec![Row::new(S, &check, A_PROJECTION, r.pass)
                    .value(r.interior_mismatches.to_string())
                    .detail(format!("dim {} interior {} boundary columns {}", r.dim, r.interior, r.boundary_columns))]
            })
        }));
        let kc = cfg.k.unwrap_or(3);
        let check = format!("matrix units reachable, p={p} k={kc}");
        rows.extend(guard(S, &check, A_COMPACT, {
            check_prime_window(p, kc).and_then(|_| compact_generation_check(p, kc)).map(|r| {
                vec![Row::new(S, &check, A_COMPACT, r.pass)
                    .value(r.failures.to_string())
                    .detail(format!("{} units on interior {}", r.matrix_units, r.interior))]
            })
        }));
    }
    let bound = cfg.bound.unwrap_or(24);
    let check = format!("pi_L pi_L' = pi_(L+L'), index <= {bound}");
    rows.extend(guard(S, &check, A_PI_L, {
        check_global_window(bound).and_then(|_| pi_l_relation_check(bound)).map(|r| {
            vec![Row::new(S, &check, A_PI_L, r.pass)
                .value(r.failures.to_string())
                .detail(format!("{} lattices, {} pairs", r.lattices, r.pairs))]
        })
    }));
    rows
}

pub fn tensor_suite(cfg: &RunConfig) -> Vec<Row> {
    const S: &str = "tensor";
    let mut rows = Vec::new();
    let bound = cfg.bound.unwrap_or(12);
    for &p in &cfg.primes {
        let check = format!("blocks p={p} B={bound}");
        rows.extend(guard(S, &check, A_BLOCKS, {
            check_global_window(bound).and_then(|_| tensor_factorization_check(p, bound)).map(|r| {
                r.checks
                    .iter()
                    .map(|c| {
                        Row::new(S, format!("{} p={p} B={bound}", c.name), A_BLOCKS, c.pass)
                            .value(c.failures.to_string())
                            .detail(format!("{} columns", c.columns))
                    })
                    .collect()
            })
        }));
    }
    let cbound = cfg.bound.unwrap_or(36);
    for (i, &p) in cfg.primes.iter().enumerate() {
        for &q in &cfg.primes[i + 1..] {
            let check = format!("[v_{p}, v_{q}] = 0, B={cbound}");
            rows.extend(guard(S, &check, A_COMMUTE, {
                check_global_window(cbound).and_then(|_| commutator_check(p, q, cbound)).map(|r| {
                    vec![Row::new(S, &check, A_COMMUTE, r.pass)
                        .value(r.nonzero_columns.to_string())
                        .detail(format!("interior {}", r.interior))]
                })
            }));
        }
    }
    for &p in &cfg.primes {
        let k = cfg.k.unwrap_or(3);
        let check = format!("intertwining p={p} k={k}");
        rows.extend(guard(S, &check, A_INTERTWINE, {
            check_prime_window(p, k)
                .and_then(|_| {
                    let modulus = p.checked_pow(k).ok_or_else(|| Error::Invalid(format!("{p}^{k} overflows")))?;
                    intertwining_check(p, k, &sample_points(modulus))
                })
                .map(|r| {
                    r.rows
                        .iter()
                        .map(|t| {
                            Row::new(S, format!("U_w pi({}) U_w* = pi_w, w={}", t.element, t.w), A_INTERTWINE, t.pass)
                                .value(t.failures.to_string())
                                .detail(format!("interior {}", t.interior))
                        })
                        .collect()
                })
        }));
    }
    rows
}

fn spec_for(cfg: &RunConfig, p: u64, beta: &Beta) -> StateSpec {
    let mut spec = StateSpec::new(p, beta.clone(), cfg.depth);
    spec.det_power = cfg.det_power;
    spec
}

pub fn kms_suite(cfg: &RunConfig) -> Vec<Row> {
    const S: &str = "kms";
    let ctx = match Ctx::new(cfg.precision) {
        Ok(c) => c,
        Err(e) => return vec![Row::new(S, "precision", A_KMS, false).detail(e.to_string())],
    };
    let mut rows = Vec::new();
    for beta in &cfg.beta {
        for &p in &cfg.primes {
            let spec = spec_for(cfg, p, beta);
            let eff = spec.effective_beta();
            let tag = format!("p={p} beta={beta}");

            let check = format!("local partition function {tag} depth={}", cfg.depth);
            rows.extend(guard(S, &check, A_EULER, {
                check_depth(cfg.depth).and_then(|_| partition_prime(p, &eff, cfg.depth, &ctx)).map(|r| {
                    vec![Row::new(S, &check, A_EULER, r.report.within_bound)
                        .value(r.report.difference)
                        .bound(r.report.tail_bound)]
                })
            }));

            let check = format!("phi(v*v) = p+1, {tag}");
            rows.extend(guard(S, &check, A_CHARACTERIZED, {
                check_depth(cfg.depth).and_then(|_| phi(&[Generator::VStar(p), Generator::V(p)], &spec, &ctx)).map(|v| {
                    let target = ctx.u64(p + 1);
                    let diff = ctx.abs(&ctx.sub(&v.value.value, &target));
                    let pass = ctx.le(&diff, &ctx.from_f64(TOL_STATE));
                    vec![Row::new(S, &check, A_CHARACTERIZED, pass)
                        .value(ctx.fmt(&v.value.value))
                        .bound(format!("{TOL_STATE:e}"))
                        .detail(format!("|phi - {}| = {}", p + 1, ctx.fmt(&diff)))]
                })
            }));

            let check = format!("phi(e_Z2) = Euler factor inverse, {tag}");
            rows.extend(guard(S, &check, A_EULER, {
                check_depth(cfg.depth)
                    .and_then(|_| phi(&[Generator::E { lattice: Lattice::z2(), p }], &spec, &ctx))
                    .map(|v| {
                        let expected = e0_expected(p, &eff, &ctx);
                        let pass = v.value.agrees(&ctx, &expected, &ctx.zero());
                        vec![Row::new(S, &check, A_EULER, pass)
                            .value(ctx.fmt(&v.value.value))
                            .bound(ctx.fmt(&v.value.bound))
                            .detail(format!("expected {}", ctx.fmt(&expected)))]
                    })
            }));

            let check = format!("KMS residuals {tag}");
            rows.extend(guard(S, &check, A_KMS, {
                check_depth(cfg.depth).and_then(|_| residual_table(&spec, TOL_RESIDUAL, &ctx)).map(|table| {
                    table
                        .into_iter()
                        .map(|r| {
                            Row::new(S, format!("KMS residual a=[{}] b=[{}] {tag}", r.a, r.b), A_KMS, r.pass)
                                .value(r.residual)
                                .bound(r.tolerance)
                        })
                        .collect()
                })
            }));

            let pdepth = cfg.depth.min(SAMPLED_DEPTH);
            let check = format!("phi(T*T) >= 0, 20 samples, {tag} depth={pdepth}");
            rows.extend(guard(S, &check, A_KMS, {
                let mut small = spec.clone();
                small.depth = pdepth;
                positivity_check(&small, 20, cfg.seed, &ctx).map(|ps| {
                    let failures = ps.iter().filter(|r| !r.pass).count();
                    vec![Row::new(S, &check, A_KMS, failures == 0).value(failures.to_string())]
                })
            }));

            let wdepth = cfg.depth.min(SAMPLED_DEPTH);
            let check = format!("phi_w = phi on fixed elements, {tag} depth={wdepth}");
            rows.extend(guard(S, &check, A_KMS, {
                let mut small = spec.clone();
                small.depth = wdepth;
                let modulus = if p == 2 { 8 } else { p * p };
                w_independence_check(&small, &sample_points(modulus), &ctx).map(|ws| {
                    let failures = ws.iter().filter(|r| !r.pass).count();
                    vec![Row::new(S, &check, A_KMS, failures == 0)
                        .value(failures.to_string())
                        .detail(format!("{} values, w mod {modulus}", ws.len()))]
                })
            }));
        }

        let check = format!("mu(Y_F) is a product over F, beta={beta}");
        rows.extend(guard(S, &check, A_CYLINDER, {
            measure_cylinder(&cfg.primes, beta, &ctx).and_then(|(all, c)| {
                let mut prod = ctx.one();
                for &p in &cfg.primes {
                    prod = ctx.mul(&prod, &measure_cylinder(&[p], beta, &ctx)?.0);
                }
                let diff = ctx.abs(&ctx.sub(&all, &prod));
                let pass = ctx.le(&diff, &ctx.slack(&all, 4 * cfg.primes.len() as u64 + 4));
                Ok(vec![Row::new(S, &check, A_CYLINDER, pass).value(c.exact.unwrap_or(c.value))])
            })
        }));

        let bound = cfg.bound.unwrap_or(10_000);
        let check = format!("orbit masses sum to 1, beta={beta} B={bound}");
        rows.extend(guard(S, &check, A_ORBIT_MASS, {
            if bound > super::config::MAX_PARTITION_BOUND {
                Err(Error::CapExceeded { what: "partition bound", size: bound as u128, cap: super::config::MAX_PARTITION_BOUND as u128 })
            } else {
                orbit_mass_total(beta, bound, DEFAULT_ZETA_TERMS, TOL_MASS, &ctx).map(|(_, _, r)| {
                    vec![Row::new(S, &check, A_ORBIT_MASS, r.pass)
                        .value(format!("[{}, {}]", r.lower, r.upper))
                        .bound(format!("[{}, {}]", r.window.0, r.window.1))]
                })
            }
        }));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_dimension() {
        assert_eq!(prime_window_dim(2, 4), 1 + 3 + 7 + 15 + 31);
    }

    #[test]
    fn guard_maps_caps_to_skips() {
        let rows = guard("s", "c", A_KMS, Err(Error::Divergent("1".into())));
        assert_eq!(rows[0].status, super::super::report::Status::Skipped);
        let rows = guard("s", "c", A_KMS, Err(Error::NotHomogeneous));
        assert_eq!(rows[0].status, super::super::report::Status::Fail);
    }
}
