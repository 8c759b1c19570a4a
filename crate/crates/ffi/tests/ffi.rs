use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hecke_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let mut len = 0;
    unsafe {
        assert_eq!(hecke_last_error(buf.as_mut_ptr(), buf.len(), &mut len), HeckeStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_owned()
    }
}

fn json_of(f: impl Fn(*mut c_char, usize, *mut usize) -> HeckeStatus) -> String {
    let mut len = 0;
    assert_eq!(f(ptr::null_mut(), 0, &mut len), HeckeStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; len + 1];
    assert_eq!(f(buf.as_mut_ptr(), buf.len(), &mut len), HeckeStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_owned() }
}

fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

#[test]
fn lattices_round_trip() {
    unsafe {
        for n in 1..=20 {
            let mut list = ptr::null_mut();
            assert_eq!(hecke_superlattices(n, &mut list), HeckeStatus::Ok);
            assert_eq!(hecke_lattice_list_len(list) as u64, sigma1(n));
            assert!(hecke_lattice_list_get(list, hecke_lattice_list_len(list)).is_null());
            hecke_lattice_list_free(list);
        }

        // Rows (1/2, 0), (0, 1/3): q = 6 and index 6.
        let num = [1i64, 0, 0, 1];
        let den = [2i64, 1, 1, 3];
        let mut l = ptr::null_mut();
        assert_eq!(hecke_lattice_from_basis(num.as_ptr(), den.as_ptr(), &mut l), HeckeStatus::Ok);
        let mut index = 0;
        assert_eq!(hecke_lattice_index(l, &mut index), HeckeStatus::Ok);
        assert_eq!(index, 6);
        let (mut q, mut hnf) = (0i64, [0i64; 3]);
        assert_eq!(hecke_lattice_hnf(l, &mut q, hnf.as_mut_ptr()), HeckeStatus::Ok);
        assert_eq!(q, 6);
        assert_eq!(hnf[0] * hnf[2], 36 / 6);
        let text = json_of(|b, c, n| hecke_lattice_to_json(l, b, c, n));
        assert!(text.starts_with("{\"q\":6"), "{text}");

        let z2 = hecke_lattice_z2();
        assert_eq!(hecke_lattice_contains(l, z2), 1);
        assert_eq!(hecke_lattice_contains(z2, l), 0);
        let (mut s, mut i) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(hecke_lattice_sum(l, z2, &mut s), HeckeStatus::Ok);
        assert_eq!(hecke_lattice_intersect(l, z2, &mut i), HeckeStatus::Ok);
        assert_eq!(hecke_lattice_equal(s, l), 1);
        assert_eq!(hecke_lattice_equal(i, z2), 1);
        let c = hecke_lattice_clone(l);
        assert_eq!(hecke_lattice_equal(c, l), 1);
        for h in [l, z2, s, i, c] {
            hecke_lattice_free(h);
        }
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let num = [1i64, 2, 2, 4];
        let den = [1i64; 4];
        let mut l = ptr::null_mut();
        assert_eq!(hecke_lattice_from_basis(num.as_ptr(), den.as_ptr(), &mut l), HeckeStatus::Singular);
        assert!(l.is_null());
        assert!(last_error().contains("singular"));

        assert_eq!(hecke_lattice_from_basis(ptr::null(), den.as_ptr(), &mut l), HeckeStatus::NullPointer);
        let zero = [0i64; 4];
        assert_eq!(hecke_lattice_from_basis(num.as_ptr(), zero.as_ptr(), &mut l), HeckeStatus::InvalidArgument);
        assert_eq!(hecke_superlattices(0, &mut ptr::null_mut()), HeckeStatus::InvalidArgument);
        let mut w = ptr::null_mut();
        assert_eq!(hecke_window_prime(4, 2, &mut w), HeckeStatus::NotPrime);
        assert_eq!(hecke_window_prime(2, 20, &mut w), HeckeStatus::CapExceeded);
        assert_eq!(hecke_window_global(5000, 1, &mut w), HeckeStatus::CapExceeded);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(hecke_partition_prime(2, c"0.5".as_ptr(), 10, &mut a, &mut b), HeckeStatus::Divergent);
        assert_eq!(hecke_partition_prime(2, c"x".as_ptr(), 10, &mut a, &mut b), HeckeStatus::InvalidArgument);
        assert_eq!(hecke_kms_v_star_v(2, ptr::null(), 10, &mut a, &mut b), HeckeStatus::NullPointer);

        // A success clears the message.
        assert_eq!(hecke_partition_prime(2, c"3".as_ptr(), 10, &mut a, &mut b), HeckeStatus::Ok);
        assert_eq!(last_error(), "");

        // Null handles are tolerated by the free and query functions.
        hecke_lattice_free(ptr::null_mut());
        hecke_operator_free(ptr::null_mut());
        assert_eq!(hecke_lattice_contains(ptr::null(), ptr::null()), -1);
        assert_eq!(hecke_window_len(ptr::null()), 0);
    }
}

#[test]
fn hecke_products() {
    unsafe {
        let v = hecke_element_new();
        assert_eq!(hecke_element_add_term(v, 1, 2, 1, 1), HeckeStatus::Ok);
        assert_eq!(hecke_element_add_term(v, 2, 3, 1, 1), HeckeStatus::InvalidArgument);
        let mut sq = ptr::null_mut();
        assert_eq!(hecke_element_convolve(v, v, &mut sq), HeckeStatus::Ok);
        // Z^2 < M < L with [L : Z^2] = 4: one M for the six cyclic L, three for (1/2)Z^2.
        let (mut n, mut d) = (0, 0);
        assert_eq!(hecke_element_coeff(sq, 1, 4, &mut n, &mut d), HeckeStatus::Ok);
        assert_eq!((n, d), (1, 1));
        assert_eq!(hecke_element_coeff(sq, 2, 2, &mut n, &mut d), HeckeStatus::Ok);
        assert_eq!((n, d), (3, 1));
        assert_eq!(hecke_element_support_len(sq), 2);
        let text = json_of(|b, c, l| hecke_element_to_json(sq, b, c, l));
        assert_eq!(text, r#"[{"class":["1","4"],"coeff":"1"},{"class":["2","2"],"coeff":"3"}]"#);
        hecke_element_free(sq);
        hecke_element_free(v);
    }
}

#[test]
fn operators_on_windows() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(hecke_window_prime(2, 2, &mut w), HeckeStatus::Ok);
        assert_eq!(hecke_window_len(w), 1 + 3 + 7);
        assert_eq!(hecke_window_interior(w), 1 + 3);
        let z = hecke_window_lattice(w, 0);
        assert_eq!(hecke_lattice_equal(z, hecke_lattice_z2()), 1);
        assert!(hecke_window_lattice(w, 11).is_null());

        let mut v = ptr::null_mut();
        assert_eq!(hecke_operator_generator(w, HeckeGenerator::V, 2, &mut v), HeckeStatus::Ok);
        assert_eq!(hecke_operator_dim(v), 11);
        // Depths 0 and 1 stay inside: 3 + 3 * 3 entries.
        assert_eq!(hecke_operator_nnz(v), 12);
        assert_eq!(hecke_operator_is_boundary(v, 0), 0);
        assert_eq!(hecke_operator_is_boundary(v, 10), 1);
        let (mut n, mut d) = (0, 0);
        assert_eq!(hecke_operator_entry(v, 0, 0, &mut n, &mut d), HeckeStatus::Ok);
        assert_eq!((n, d), (0, 1));
        assert_eq!(hecke_operator_entry(v, 11, 0, &mut n, &mut d), HeckeStatus::InvalidArgument);

        let f = hecke_element_new();
        assert_eq!(hecke_element_add_term(f, 1, 2, 1, 1), HeckeStatus::Ok);
        let mut pf = ptr::null_mut();
        assert_eq!(hecke_operator_hecke(w, f, &mut pf), HeckeStatus::Ok);
        let a = json_of(|b, c, l| hecke_operator_to_json(v, b, c, l));
        assert_eq!(a, json_of(|b, c, l| hecke_operator_to_json(pf, b, c, l)));

        let (mut vs, mut prod) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(hecke_operator_generator(w, HeckeGenerator::VStar, 2, &mut vs), HeckeStatus::Ok);
        assert_eq!(hecke_operator_mul(vs, v, &mut prod), HeckeStatus::Ok);
        // v* v δ_{Z^2} = (p + 1) δ_{Z^2}.
        assert_eq!(hecke_operator_entry(prod, 0, 0, &mut n, &mut d), HeckeStatus::Ok);
        assert_eq!((n, d), (3, 1));

        let mut g = ptr::null_mut();
        assert_eq!(hecke_window_global(6, 1, &mut g), HeckeStatus::Ok);
        let mut vg = ptr::null_mut();
        assert_eq!(hecke_operator_generator(g, HeckeGenerator::V, 3, &mut vg), HeckeStatus::Ok);
        assert_eq!(hecke_operator_mul(v, vg, &mut ptr::null_mut()), HeckeStatus::InvalidArgument);

        for op in [v, pf, vs, prod, vg] {
            hecke_operator_free(op);
        }
        hecke_element_free(f);
        hecke_lattice_free(z);
        hecke_window_free(w);
        hecke_window_free(g);
    }
}

#[test]
fn numerics() {
    unsafe {
        let mut pass = 0;
        assert_eq!(hecke_check_projection(3, 3, &mut pass), HeckeStatus::Ok);
        assert_eq!(pass, 1);
        let (mut partial, mut closed) = (0.0, 0.0);
        assert_eq!(hecke_partition_prime(2, c"3".as_ptr(), 30, &mut partial, &mut closed), HeckeStatus::Ok);
        let oracle = 1.0 / ((1.0 - 0.125) * (1.0 - 0.25));
        assert!((closed - oracle).abs() < 1e-14);
        assert!((partial - closed).abs() < 1e-12);
        assert_eq!(hecke_partition_global(c"4".as_ptr(), 1000, &mut partial, &mut closed), HeckeStatus::Ok);
        let naive: f64 = (1..=1000u64).map(|n| sigma1(n) as f64 / (n as f64).powi(4)).sum();
        assert!((partial - naive).abs() < 1e-12);
        let (mut value, mut bound) = (0.0, 0.0);
        assert_eq!(hecke_kms_v_star_v(2, c"3".as_ptr(), 40, &mut value, &mut bound), HeckeStatus::Ok);
        assert!((value - 3.0).abs() < 1e-6 && bound < 1e-6);
        let version = CStr::from_ptr(hecke_version()).to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_against_the_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/ffi-<hash> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libhecke_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8(run.stdout).unwrap().starts_with("ok "));
}
