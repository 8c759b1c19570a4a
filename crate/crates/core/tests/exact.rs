use hecke_core::exact::{hnf, padic_snf, sl2_mod, snf, IMat2, ModMat, DEFAULT_SL2_CAP};
use hecke_core::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

fn imat(e: [i64; 4]) -> IMat2 {
    IMat2::from_i64([[e[0], e[1]], [e[2], e[3]]])
}

fn nonsingular() -> impl Strategy<Value = IMat2> {
    prop::array::uniform4(-40i64..=40).prop_map(imat).prop_filter("nonsingular", |m| m.det() != BigInt::from(0))
}

/// Products of elementary row operations and sign flips.
fn unimodular() -> impl Strategy<Value = IMat2> {
    prop::collection::vec((0u8..3, -5i64..=5), 0..6).prop_map(|ops| {
        ops.into_iter().fold(IMat2::identity(), |acc, (kind, k)| {
            let e = match kind {
                0 => imat([1, k, 0, 1]),
                1 => imat([1, 0, k, 1]),
                _ => imat([0, 1, 1, 0]),
            };
            &e * &acc
        })
    })
}

fn valuation(mut n: i128, p: i128) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_is_canonical_and_idempotent(m in nonsingular(), u in unimodular()) {
        let (h, t) = hnf(&m).unwrap();
        prop_assert_eq!(&t * &m, h.matrix());
        prop_assert!(t.is_unimodular());
        let hm = h.matrix();
        prop_assert!(hm.b == BigInt::from(0) && hm.a.is_positive() && hm.d.is_positive());
        prop_assert!(!hm.c.is_negative() && hm.c < hm.a);
        prop_assert_eq!(&hnf(&hm).unwrap().0, &h);
        prop_assert_eq!(hnf(&(&u * &m)).unwrap().0, h);
    }

    #[test]
    fn snf_divides_and_reconstructs(m in nonsingular()) {
        let s = snf(&m).unwrap();
        prop_assert_eq!(&s.d1 * &s.d2, m.det().abs());
        prop_assert_eq!(&s.d1, &m.entries().into_iter().fold(BigInt::from(0), |g, x| g.gcd(x)));
        prop_assert!((&s.d2 % &s.d1) == BigInt::from(0));
        let l = s.left.inverse_unimodular().unwrap();
        let r = s.right.inverse_unimodular().unwrap();
        prop_assert_eq!(&(&l * &s.diagonal()) * &r, m);
    }

    #[test]
    fn padic_snf_recomposes(m in nonsingular(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let det: i128 = m.det().try_into().unwrap();
        let v = valuation(det, p as i128);
        let depth = v + 2;
        let f = padic_snf(&m, p, depth).unwrap();
        prop_assert_eq!(f.recompose(), ModMat::from_imat(p.pow(depth), &m));
        prop_assert_eq!(f.exponents.0 + f.exponents.1, v);
        prop_assert!(f.exponents.0 <= f.exponents.1);
        prop_assert!(f.left.is_invertible() && f.right.is_invertible());
    }
}

#[test]
fn padic_snf_examples() {
    let f = padic_snf(&IMat2::identity(), 5, 2).unwrap();
    assert_eq!(f.exponents, (0, 0));
    assert_eq!(padic_snf(&imat([1, 0, 0, 3]), 3, 3).unwrap().exponents, (0, 1));
    // gcd of entries is 1 and v_2(det) = 2.
    let m = imat([2, 1, 0, 2]);
    let f = padic_snf(&m, 2, 4).unwrap();
    assert_eq!(f.exponents, (0, 2));
    // Exhaustive search over unit pairs mod 16 finds no factorization with exponents (1, 1).
    let units: Vec<ModMat> = (0..16i128.pow(4))
        .map(|x| ModMat::new(16, [x % 16, x / 16 % 16, x / 256 % 16, x / 4096]))
        .filter(|u| u.is_invertible())
        .collect();
    let target = ModMat::from_imat(16, &m);
    let d11 = ModMat::new(16, [2, 0, 0, 2]);
    assert!(units.iter().all(|u| u.mul(&d11).mul(&u.inverse().unwrap()) != target));
    assert!(matches!(padic_snf(&imat([4, 0, 0, 4]), 2, 3), Err(Error::NotRegular { .. })));
    assert!(matches!(padic_snf(&m, 4, 3), Err(Error::NotPrime(4))));
}

#[test]
fn sl2_counts_by_enumeration() {
    for m in 1..=12u64 {
        let elems = sl2_mod(m, DEFAULT_SL2_CAP).unwrap();
        // Brute force over all of (Z/m)^4.
        let m_i = m as i128;
        let brute = (0..m_i.pow(4))
            .filter(|x| {
                let (a, b, c, d) = (x % m_i, x / m_i % m_i, x / m_i.pow(2) % m_i, x / m_i.pow(3));
                (a * d - b * c).rem_euclid(m_i) == 1 % m_i
            })
            .count();
        assert_eq!(elems.len(), brute, "m = {m}");
        assert!(elems.iter().all(|g| g.det() == 1 % m));
        // Cross-check: m^3 prod (1 - p^-2).
        let mut formula = (m * m * m) as f64;
        for p in 2..=m {
            if m % p == 0 && (2..p).all(|q| p % q != 0) {
                formula *= 1.0 - 1.0 / (p * p) as f64;
            }
        }
        assert_eq!(elems.len() as f64, formula.round(), "m = {m}");
    }
    assert!(matches!(sl2_mod(12, 10), Err(Error::CapExceeded { .. })));
}
