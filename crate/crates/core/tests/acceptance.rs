//! End-to-end acceptance run. Every criterion is evaluated, one status line
//! is printed per criterion, and the test fails listing the ones that did not
//! hold.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::oracle::{as_subgroup, bfs_coset_oracle, sigma1, subgroups_by_brute_force};
use hecke_core::coset::{r_gamma, right_cosets, semidirect_delta, semidirect_l, semidirect_r, standard_vectors, DoubleCoset};
use hecke_core::exact::{IMat2, Rat};
use hecke_core::hecke::{classes_up_to, convolve, convolve_basis, prime_classes, HeckeElement};
use hecke_core::kms::measure::{measure_cylinder, orbit_mass_total};
use hecke_core::kms::partition::{partition_global, partition_prime, DEFAULT_ZETA_TERMS};
use hecke_core::kms::state::{phi, residual_table, StateSpec};
use hecke_core::kms::{Beta, Ctx};
use hecke_core::lattice::superlattices;
use hecke_core::spectral::checks::{
    commutator_check, compact_generation_check, intertwining_check, pi_l_relation_check, projection_identity_check,
    sample_points, tensor_factorization_check,
};
use hecke_core::spectral::Generator;
use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx() -> Ctx {
    Ctx::new(50).unwrap()
}

fn beta(s: &str) -> Beta {
    Beta::parse(s).unwrap()
}

fn lattice_counts() -> Outcome {
    for n in 1..=60 {
        let got = superlattices(n).len() as u64;
        ensure(got == sigma1(n), || format!("n={n}: {got} lattices, sigma1 = {}", sigma1(n)))?;
    }
    for n in 1..=12 {
        let ours: BTreeSet<_> = superlattices(n).iter().map(|l| as_subgroup(l, n)).collect();
        ensure(ours == subgroups_by_brute_force(n), || format!("n={n}: subgroup enumeration differs"))?;
    }
    Ok("n <= 60 by divisor sums, n <= 12 by subgroups".into())
}

fn coset_counts() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let s = IMat2::diag(1, p).to_q();
        let r = r_gamma(&s).map_err(|e| e.to_string())?;
        ensure(r == BigInt::from(p + 1), || format!("p={p}: R = {r}"))?;
        let listed = right_cosets(&DoubleCoset::v(p)).len() as u64;
        ensure(listed == p + 1, || format!("p={p}: {listed} right cosets"))?;
    }
    Ok("p in {2,3,5,7}".into())
}

fn modular_function() -> Outcome {
    let vectors = standard_vectors();
    ensure(vectors.len() >= 10, || format!("only {} vectors", vectors.len()))?;
    for x in &vectors {
        let denom = x.m.denominator();
        ensure(denom <= BigInt::from(4), || format!("denominator {denom}"))?;
        let det = x.g.det();
        let expected = (&det * &det).recip();
        let delta = semidirect_delta(x, 24).map_err(|e| e.to_string())?;
        ensure(delta == expected, || format!("({}, {}): delta {delta}, expected {expected}", x.m, x.g))?;
        let r = semidirect_r(x, 24).map_err(|e| e.to_string())?;
        let l = semidirect_l(x, 24).map_err(|e| e.to_string())?;
        let oracle = bfs_coset_oracle(x, 1 << 12).ok_or("oracle cap")?;
        ensure((r.clone(), l.clone()) == oracle, || format!("({}, {}): formula ({r}, {l}), oracle {oracle:?}", x.m, x.g))?;
        ensure(Rat::new(oracle.1, oracle.0) == expected, || "oracle ratio".into())?;
    }
    Ok(format!("{} vectors", vectors.len()))
}

fn random_element(rng: &mut ChaCha8Rng, classes: &[DoubleCoset]) -> HeckeElement {
    let mut f = HeckeElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        f.add_term(classes.choose(rng).unwrap().clone(), Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=2).into()));
    }
    f
}

fn hecke_algebra() -> Outcome {
    let classes = classes_up_to(16);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..50 {
        let (f, g, h) = (random_element(&mut rng, &classes), random_element(&mut rng, &classes), random_element(&mut rng, &classes));
        ensure(convolve(&convolve(&f, &g), &h) == convolve(&f, &convolve(&g, &h)), || format!("triple {i}"))?;
    }
    let mut pairs = 0;
    for p in [2u64, 3] {
        let cs = prime_classes(p, 4);
        for a in &cs {
            for b in &cs {
                pairs += 1;
                ensure(convolve_basis(a, b) == convolve_basis(b, a), || format!("{a} {b}"))?;
            }
        }
    }
    Ok(format!("50 triples, {pairs} local pairs"))
}

fn projection_identity() -> Outcome {
    let mut notes = Vec::new();
    for (p, k) in [(2u64, 4u32), (3, 3)] {
        let r = projection_identity_check(p, k).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("{r:?}"))?;
        notes.push(format!("p={p} k={k} interior {}", r.interior));
    }
    Ok(notes.join(", "))
}

fn pi_l_relations() -> Outcome {
    let r = pi_l_relation_check(24).map_err(|e| e.to_string())?;
    ensure(r.pass, || format!("{r:?}"))?;
    Ok(format!("{} pairs", r.pairs))
}

fn tensor_factorization() -> Outcome {
    for p in [2u64, 3] {
        let r = tensor_factorization_check(p, 12).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("{r:?}"))?;
    }
    let c = commutator_check(2, 3, 36).map_err(|e| e.to_string())?;
    ensure(c.pass, || format!("{c:?}"))?;
    Ok(format!("B=12 blocks, commutator on {} columns", c.interior))
}

/// `Σ_{j≤k} σ1(p^j) p^{-βj}` and `(1-p^-β)^-1 (1-p^{1-β})^-1` in plain floats.
fn local_partition_f64(p: u64, beta: f64, k: u32) -> (f64, f64) {
    let pf = p as f64;
    // The divisors of p^j are p^0, ..., p^j.
    let sigma = |j: u32| (0..=j).map(|i| pf.powi(i as i32)).sum::<f64>();
    let partial = (0..=k).map(|j| sigma(j) * pf.powf(-beta * j as f64)).sum();
    let closed = 1.0 / ((1.0 - pf.powf(-beta)) * (1.0 - pf.powf(1.0 - beta)));
    (partial, closed)
}

fn local_partition() -> Outcome {
    let ctx = ctx();
    let mut worst = 0f64;
    for p in [2u64, 3] {
        for (b, bf) in [("2.5", 2.5), ("3", 3.0)] {
            let r = partition_prime(p, &beta(b), 30, &ctx).map_err(|e| e.to_string())?;
            let diff = ctx.to_f64(&ctx.abs(&ctx.sub(&r.partial, &r.closed)));
            ensure(diff < 1e-12, || format!("p={p} beta={b}: {diff:e}"))?;
            let (partial, closed) = local_partition_f64(p, bf, 30);
            ensure((ctx.to_f64(&r.closed) - closed).abs() < 1e-12 * closed, || format!("p={p} beta={b}: closed form"))?;
            ensure((ctx.to_f64(&r.partial) - partial).abs() < 1e-12 * partial, || format!("p={p} beta={b}: partial sum"))?;
            worst = worst.max(diff);
        }
    }
    Ok(format!("max difference {worst:.3e}"))
}

/// `Σ_{n≤B} σ1(n) n^-3` by a divisor-sum sieve, and `ζ(3)ζ(2)` from constants.
fn global_partition_f64(bound: u64) -> (f64, f64) {
    let b = bound as usize;
    let mut sig = vec![0u64; b + 1];
    for d in 1..=b {
        for m in (d..=b).step_by(d) {
            sig[m] += d as u64;
        }
    }
    let partial = (1..=b).map(|n| sig[n] as f64 / (n as f64).powi(3)).sum();
    (partial, 1.202_056_903_159_594_2 * std::f64::consts::PI.powi(2) / 6.0)
}

fn global_partition() -> Outcome {
    let ctx = ctx();
    let bound = 10_000u64;
    let g = partition_global(&beta("3"), bound, DEFAULT_ZETA_TERMS, &ctx).map_err(|e| e.to_string())?;
    let (partial, closed) = global_partition_f64(bound);
    ensure((ctx.to_f64(&g.partial) - partial).abs() < 1e-12, || "partial sum disagrees with the sieve".into())?;
    ensure((ctx.to_f64(&g.closed.value) - closed).abs() < 1e-12, || "closed form disagrees with zeta(3) pi^2/6".into())?;
    let lo = ctx.add(&g.partial, &g.tail_lower);
    let hi = ctx.add(&g.partial, &g.tail_upper);
    let bracketed = ctx.le(&lo, &g.closed.upper(&ctx)) && ctx.le(&g.closed.lower(&ctx), &hi);
    ensure(bracketed, || "certified tail bracket misses the closed form".into())?;
    let diff = closed - partial;
    ensure(diff.abs() < 1e-4, || format!("|partial - zeta(3)zeta(2)| = {diff:.4e} exceeds 1e-4 (tail bracket holds)"))?;
    Ok(format!("difference {diff:.4e}"))
}

fn kms_value() -> Outcome {
    let ctx = ctx();
    let mut notes = Vec::new();
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 40);
        let v = phi(&[Generator::VStar(p), Generator::V(p)], &spec, &ctx).map_err(|e| e.to_string())?;
        let x = ctx.to_f64(&v.value.value);
        ensure((x - (p + 1) as f64).abs() < 1e-6, || format!("p={p}: {x}"))?;
        notes.push(format!("p={p}: {x:.9}"));
    }
    Ok(notes.join(", "))
}

fn kms_condition() -> Outcome {
    let ctx = ctx();
    let mut rows = 0;
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 40);
        for r in residual_table(&spec, 1e-8, &ctx).map_err(|e| e.to_string())? {
            ensure(r.pass, || format!("{r:?}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} pairs"))
}

fn measure_values() -> Outcome {
    let ctx = ctx();
    let b = beta("3");
    let local = |p: u64| -> Rat {
        let q = Rat::from_integer(p.into());
        (Rat::one() - (&q * &q * &q).recip()) * (Rat::one() - (&q * &q).recip())
    };
    for set in [vec![2u64], vec![3], vec![2, 3], vec![2, 3, 5, 7]] {
        let (_, c) = measure_cylinder(&set, &b, &ctx).map_err(|e| e.to_string())?;
        let expected: Rat = set.iter().map(|&p| local(p)).product();
        ensure(c.exact.as_deref() == Some(expected.to_string().as_str()), || format!("{set:?}: {:?}", c.exact))?;
    }
    let (lo, hi, report) = orbit_mass_total(&b, 10_000, DEFAULT_ZETA_TERMS, 1e-3, &ctx).map_err(|e| e.to_string())?;
    ensure(report.pass, || format!("{report:?}"))?;
    // Orbit masses are (σ1(n) n^-β) / Z summed over lattices of index n.
    let (partial, closed) = global_partition_f64(10_000);
    let total = partial / closed;
    ensure(ctx.to_f64(&lo) - 1e-12 <= total && total <= ctx.to_f64(&hi) + 1e-12, || format!("float total {total}"))?;
    Ok(format!("orbit masses in [{:.6}, {:.6}]", ctx.to_f64(&lo), ctx.to_f64(&hi)))
}

fn intertwining() -> Outcome {
    let points = sample_points(8);
    let r = intertwining_check(2, 3, &points).map_err(|e| e.to_string())?;
    ensure(r.pass, || format!("{:?}", r.rows.iter().filter(|x| !x.pass).collect::<Vec<_>>()))?;
    let ws: BTreeSet<&str> = r.rows.iter().map(|x| x.w.as_str()).collect();
    ensure(ws.len() == 5, || format!("{} values of w", ws.len()))?;
    Ok(format!("{} rows over 5 values of w", r.rows.len()))
}

fn compact_generation() -> Outcome {
    let mut notes = Vec::new();
    for p in [2u64, 3] {
        let r = compact_generation_check(p, 3).map_err(|e| e.to_string())?;
        ensure(r.pass && r.matrix_units == r.interior * r.interior, || format!("{r:?}"))?;
        notes.push(format!("p={p}: {} units", r.matrix_units));
    }
    Ok(notes.join(", "))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 14] = [
        ("lattice counts", 1, lattice_counts),
        ("coset counts", 1, coset_counts),
        ("modular function", 30, modular_function),
        ("hecke algebra", 60, hecke_algebra),
        ("projection identity", 10, projection_identity),
        ("pi_L relations", 10, pi_l_relations),
        ("tensor factorization", 60, tensor_factorization),
        ("local partition function", 1, local_partition),
        ("global partition function", 10, global_partition),
        ("kms state value", 10, kms_value),
        ("kms condition", 30, kms_condition),
        ("measure values", 10, measure_values),
        ("symmetry intertwining", 30, intertwining),
        ("compact generation", 30, compact_generation),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > Duration::from_secs(*budget) => Err(format!("{note}; took {elapsed:.2?}, budget {budget} s")),
            other => other,
        };
        match &outcome {
            Ok(note) => println!("criterion {:>2} PASS {name} ({elapsed:.2?}): {note}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name} ({elapsed:.2?}): {why}", i + 1);
                failed.push(format!("{} {name}", i + 1));
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
