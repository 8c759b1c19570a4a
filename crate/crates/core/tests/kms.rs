use hecke_core::exact::{rat, IMat2};
use hecke_core::kms::measure::{euler_consistency, measure_cylinder, mu_orbit_mass, orbit_mass_total, prime_power_masses};
use hecke_core::kms::partition::{global_prime_power_partial, partition_global, partition_prime, zeta, DEFAULT_ZETA_TERMS};
use hecke_core::kms::state::{
    depth_traces_by_enumeration, depth_traces_by_type, e0_expected, kms_residual, phi, positivity_check, residual_table,
    w_independence_check, StateSpec,
};
use hecke_core::kms::{Beta, Ctx};
use hecke_core::lattice::Lattice;
use hecke_core::spectral::checks::sample_points;
use hecke_core::spectral::Generator;
use hecke_core::Error;

fn ctx() -> Ctx {
    Ctx::new(50).unwrap()
}

fn beta(s: &str) -> Beta {
    Beta::parse(s).unwrap()
}

#[test]
fn local_partition_functions() {
    let ctx = ctx();
    for p in [2u64, 3] {
        for b in ["2.5", "3"] {
            let r = partition_prime(p, &beta(b), 30, &ctx).unwrap();
            let diff = ctx.to_f64(&ctx.abs(&ctx.sub(&r.partial, &r.closed)));
            assert!(diff < 1e-12, "p={p} beta={b} diff={diff}");
            assert!(r.report.within_bound);
        }
    }
    let r = partition_prime(2, &beta("2"), 10, &ctx).unwrap();
    assert_eq!(r.report.closed_form.value, ctx.fmt(&ctx.rat(&rat(8, 3))));
    assert!(matches!(partition_prime(3, &beta("0.5"), 10, &ctx), Err(Error::Divergent(_))));
}

#[test]
fn local_partial_sums_are_global_prime_power_sums() {
    let ctx = ctx();
    for (p, k) in [(2u64, 12u32), (3, 7), (5, 5)] {
        let r = partition_prime(p, &beta("3"), k, &ctx).unwrap();
        assert_eq!(r.exact_partial.unwrap(), global_prime_power_partial(p, 3, k));
    }
}

#[test]
fn global_partition_function() {
    let ctx = ctx();
    let g = partition_global(&beta("4"), 1000, DEFAULT_ZETA_TERMS, &ctx).unwrap();
    let diff = ctx.to_f64(&ctx.abs(&ctx.sub(&g.partial, &g.closed.value)));
    assert!(diff < 1e-5, "{diff}");
    assert!(g.report.within_bound);

    // At beta = 3 the certified bracket contains the closed form.
    let g = partition_global(&beta("3"), 10_000, DEFAULT_ZETA_TERMS, &ctx).unwrap();
    let lo = ctx.add(&g.partial, &g.tail_lower);
    let hi = ctx.add(&g.partial, &g.tail_upper);
    assert!(ctx.le(&lo, &g.closed.upper(&ctx)));
    assert!(ctx.le(&g.closed.lower(&ctx), &hi));
    assert_eq!(partition_global(&beta("3"), 3, 100, &ctx).unwrap().report.partial_sum, ctx.fmt(&ctx.rat(&(rat(1, 1) + rat(3, 8) + rat(4, 27)))));
}

#[test]
fn zeta_values() {
    let ctx = ctx();
    let z = zeta(&beta("3"), 20_000, &ctx).unwrap();
    assert!((ctx.to_f64(&z.value) - 1.2020569031595942).abs() < 1e-12);
    assert!(matches!(zeta(&beta("1"), 10, &ctx), Err(Error::Divergent(_))));
}

#[test]
fn state_of_v_star_v() {
    let ctx = ctx();
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 40);
        let v = phi(&[Generator::VStar(p), Generator::V(p)], &spec, &ctx).unwrap();
        assert!(v.value.agrees(&ctx, &ctx.u64(p + 1), &ctx.from_f64(1e-6)));
        assert!(ctx.to_f64(&v.value.bound) < 1e-6);
    }
}

#[test]
fn state_of_e0_is_inverse_euler_factor() {
    let ctx = ctx();
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 40);
        let v = phi(&[Generator::E { lattice: Lattice::z2(), p }], &spec, &ctx).unwrap();
        assert!(v.value.agrees(&ctx, &e0_expected(p, &beta("3"), &ctx), &ctx.zero()));
    }
}

#[test]
fn kms_condition_on_generator_pairs() {
    let ctx = ctx();
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 40);
        for row in residual_table(&spec, 1e-8, &ctx).unwrap() {
            assert!(row.pass, "{row:?}");
        }
    }
    let spec = StateSpec::new(2, beta("3"), 40);
    let r = kms_residual(&[], &[], &spec, 1e-8, &ctx).unwrap();
    assert_eq!(ctx.fmt(&r.residual), "0");
    let e = Generator::E { lattice: Lattice::z2(), p: 2 };
    let a = phi(&[Generator::U(2), e.clone()], &spec, &ctx).unwrap();
    let b = phi(&[e, Generator::U(2)], &spec, &ctx).unwrap();
    assert_eq!(ctx.fmt(&a.value.value), "0");
    assert_eq!(ctx.fmt(&b.value.value), "0");
}

#[test]
fn non_homogeneous_input_is_rejected() {
    let ctx = ctx();
    let spec = StateSpec::new(2, beta("3"), 10);
    let mixed = hecke_core::hecke::HeckeElement::v(2).add(&hecke_core::hecke::HeckeElement::u(2));
    let r = kms_residual(&[Generator::Hecke(mixed)], &[Generator::V(2)], &spec, 1e-8, &ctx);
    assert!(matches!(r, Err(Error::NotHomogeneous)));
}

#[test]
fn det_power_doubles_beta() {
    let ctx = ctx();
    let mut spec = StateSpec::new(2, beta("1.5"), 40);
    spec.det_power = 2;
    let a = phi(&[Generator::E { lattice: Lattice::z2(), p: 2 }], &spec, &ctx).unwrap();
    let b = phi(&[Generator::E { lattice: Lattice::z2(), p: 2 }], &StateSpec::new(2, beta("3"), 40), &ctx).unwrap();
    assert_eq!(ctx.fmt(&a.value.value), ctx.fmt(&b.value.value));
}

#[test]
fn orbit_types_agree_with_enumeration_for_hecke_words() {
    let f = hecke_core::hecke::HeckeElement::v(2).add(&hecke_core::hecke::HeckeElement::u(2));
    let word = vec![Generator::VStar(2), Generator::Hecke(f), Generator::UStar(2)];
    assert_eq!(depth_traces_by_type(&word, 2, 6).unwrap(), depth_traces_by_enumeration(&word, 2, 6, None).unwrap());
}

#[test]
fn positivity_on_random_polynomials() {
    let ctx = ctx();
    for p in [2u64, 3] {
        let spec = StateSpec::new(p, beta("3"), 20);
        let rows = positivity_check(&spec, 20, 7, &ctx).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }
}

#[test]
fn states_do_not_depend_on_w_for_fixed_elements() {
    let ctx = ctx();
    let spec = StateSpec::new(2, beta("3"), 40);
    let rows = w_independence_check(&spec, &sample_points(8), &ctx).unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.pass), "{rows:?}");
}

#[test]
fn measure_values() {
    let ctx = ctx();
    let b3 = beta("3");
    let (_, empty) = measure_cylinder(&[], &b3, &ctx).unwrap();
    assert_eq!(empty.exact.as_deref(), Some("1"));
    let (two, _) = measure_cylinder(&[2], &b3, &ctx).unwrap();
    let (two_three, c) = measure_cylinder(&[2, 3], &b3, &ctx).unwrap();
    assert_eq!(c.exact.as_deref(), Some(((rat(7, 8) * rat(3, 4)) * (rat(26, 27) * rat(8, 9))).to_string().as_str()));
    let (three, _) = measure_cylinder(&[3], &b3, &ctx).unwrap();
    assert_eq!(ctx.fmt(&ctx.mul(&two, &three)), ctx.fmt(&two_three));

    let (_, _, report) = orbit_mass_total(&b3, 10_000, DEFAULT_ZETA_TERMS, 1e-3, &ctx).unwrap();
    assert!(report.pass, "{report:?}");

    let unit = mu_orbit_mass(&IMat2::identity(), &b3, DEFAULT_ZETA_TERMS, &ctx).unwrap();
    let v = mu_orbit_mass(&IMat2::diag(1, 2), &b3, DEFAULT_ZETA_TERMS, &ctx).unwrap();
    assert!(v.agrees(&ctx, &ctx.div(&unit.value, &ctx.u64(8)), &unit.bound));
    assert!(euler_consistency(50, &b3, DEFAULT_ZETA_TERMS, &ctx).unwrap().pass);
    let (masses, local) = prime_power_masses(3, &b3, 8, 2000, &ctx).unwrap();
    assert!(ctx.to_f64(&ctx.abs(&ctx.sub(&masses, &local))) < 1e-40);
    assert!(matches!(mu_orbit_mass(&IMat2::identity(), &beta("2"), 10, &ctx), Err(Error::Uncertified(_))));
}
