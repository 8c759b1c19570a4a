//! C interface to `hecke_core`.
//!
//! Objects are opaque heap handles created by `hecke_*_new`/constructor
//! functions and released with the matching `hecke_*_free`. Every fallible
//! call returns a [`HeckeStatus`]; on failure a message is kept per thread and
//! can be read with [`hecke_last_error`]. Text output goes into caller
//! buffers: the required length (without the terminating NUL) is always
//! written to `len`, and `HECKE_BUFFER_TOO_SMALL` is returned when it does not
//! fit.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hecke_core::coset::DoubleCoset;
use hecke_core::exact::{QMat2, Rat};
use hecke_core::hecke::{convolve, HeckeElement as CoreElement};
use hecke_core::kms::partition::{partition_global, partition_prime, DEFAULT_ZETA_TERMS};
use hecke_core::kms::state::{phi, StateSpec};
use hecke_core::kms::{Beta, Ctx};
use hecke_core::lattice::{superlattices, Lattice};
use hecke_core::spectral::checks::projection_identity_check;
use hecke_core::spectral::{op_hecke, op_u, op_u_star, op_v, op_v_star, SparseOperator, Window};
use hecke_core::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singular = 3,
    CapExceeded = 4,
    NotPrime = 5,
    Incompatible = 6,
    OutsideInterior = 7,
    Divergent = 8,
    Uncertified = 9,
    NotHomogeneous = 10,
    Unsupported = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

/// Which generator [`hecke_operator_generator`] builds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeGenerator {
    V = 0,
    VStar = 1,
    U = 2,
    UStar = 3,
}

pub struct HeckeLattice(Lattice);
pub struct HeckeLatticeList(Vec<Lattice>);
pub struct HeckeElement(CoreElement);
pub struct HeckeWindow(Window);
pub struct HeckeOperator(SparseOperator);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> HeckeStatus {
    match e {
        Error::Singular | Error::NonPositiveDeterminant(_) | Error::NotInvertibleMod(_) => HeckeStatus::Singular,
        Error::CapExceeded { .. } => HeckeStatus::CapExceeded,
        Error::NotPrime(_) => HeckeStatus::NotPrime,
        Error::Incompatible { .. } | Error::NotRegular { .. } | Error::NotSuperlattice => HeckeStatus::Incompatible,
        Error::OutsideInterior(_) => HeckeStatus::OutsideInterior,
        Error::Divergent(_) => HeckeStatus::Divergent,
        Error::Uncertified(_) => HeckeStatus::Uncertified,
        Error::NotHomogeneous => HeckeStatus::NotHomogeneous,
        Error::Unsupported(_) | Error::AdjointLeavesSemigroup(_) => HeckeStatus::Unsupported,
        Error::Invalid(_) => HeckeStatus::InvalidArgument,
    }
}

/// Internal failure carried to the boundary.
struct Fail(HeckeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(HeckeStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HeckeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HeckeStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HeckeStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(HeckeStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(HeckeStatus::NullPointer, format!("{name} is null")))
}

fn boxed<T>(x: T) -> *mut T {
    Box::into_raw(Box::new(x))
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(HeckeStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{name} is not UTF-8")))
}

unsafe fn write_text(text: &str, buf: *mut c_char, cap: usize, len: *mut usize) -> Result<(), Fail> {
    *out(len, "len")? = text.len();
    if buf.is_null() || cap <= text.len() {
        return Err(Fail(HeckeStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

fn rat_of(num: i64, den: i64) -> Result<Rat, Fail> {
    if den == 0 {
        return Err(invalid("zero denominator"));
    }
    Ok(Rat::new(num.into(), den.into()))
}

fn beta_of(s: &str) -> Result<Beta, Fail> {
    Ok(Beta::parse(s)?)
}

fn ctx_of(digits: usize) -> Result<Ctx, Fail> {
    Ok(Ctx::new(digits)?)
}

/// Message of the last failed call on this thread (empty after a success).
#[no_mangle]
pub unsafe extern "C" fn hecke_last_error(buf: *mut c_char, cap: usize, len: *mut usize) -> HeckeStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match catch_unwind(AssertUnwindSafe(|| write_text(&msg, buf, cap, len))) {
        Ok(Ok(())) => HeckeStatus::Ok,
        Ok(Err(Fail(s, _))) => s,
        Err(_) => HeckeStatus::Panic,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hecke_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- lattices ----

/// Lattice spanned by the rows of `[[n0/d0, n1/d1], [n2/d2, n3/d3]]`.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_from_basis(
    num: *const i64,
    den: *const i64,
    result: *mut *mut HeckeLattice,
) -> HeckeStatus {
    guard(|| {
        let result = out(result, "result")?;
        if num.is_null() || den.is_null() {
            return Err(Fail(HeckeStatus::NullPointer, "basis is null".into()));
        }
        let num = std::slice::from_raw_parts(num, 4);
        let den = std::slice::from_raw_parts(den, 4);
        let e: Vec<Rat> = (0..4).map(|i| rat_of(num[i], den[i])).collect::<Result<_, _>>()?;
        let [a, b, c, d]: [Rat; 4] = e.try_into().expect("four entries");
        *result = boxed(HeckeLattice(Lattice::from_basis(&QMat2::new(a, b, c, d))?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_z2() -> *mut HeckeLattice {
    boxed(HeckeLattice(Lattice::z2()))
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_clone(l: *const HeckeLattice) -> *mut HeckeLattice {
    l.as_ref().map_or(ptr::null_mut(), |l| boxed(HeckeLattice(l.0.clone())))
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_free(l: *mut HeckeLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// `[L : Z^2]`; the lattice must contain `Z^2`.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_index(l: *const HeckeLattice, index: *mut u64) -> HeckeStatus {
    guard(|| {
        let l = deref(l, "lattice")?;
        let n = l.0.index()?;
        *out(index, "index")? = n.to_u64().ok_or_else(|| invalid("index does not fit in 64 bits"))?;
        Ok(())
    })
}

/// Denominator `q` and Hermite entries `(a, c, d)` of `q L`.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_hnf(l: *const HeckeLattice, q: *mut i64, hnf: *mut i64) -> HeckeStatus {
    guard(|| {
        let l = deref(l, "lattice")?;
        let fit = |x: &BigInt| x.to_i64().ok_or_else(|| invalid("entry does not fit in 64 bits"));
        *out(q, "q")? = fit(l.0.q())?;
        if hnf.is_null() {
            return Err(Fail(HeckeStatus::NullPointer, "hnf is null".into()));
        }
        let h = l.0.hnf();
        let vals = [fit(h.a())?, fit(h.c())?, fit(h.d())?];
        ptr::copy_nonoverlapping(vals.as_ptr(), hnf, 3);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_sum(
    a: *const HeckeLattice,
    b: *const HeckeLattice,
    result: *mut *mut HeckeLattice,
) -> HeckeStatus {
    guard(|| {
        let s = deref(a, "a")?.0.sum(&deref(b, "b")?.0);
        *out(result, "result")? = boxed(HeckeLattice(s));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_intersect(
    a: *const HeckeLattice,
    b: *const HeckeLattice,
    result: *mut *mut HeckeLattice,
) -> HeckeStatus {
    guard(|| {
        let s = deref(a, "a")?.0.intersect(&deref(b, "b")?.0);
        *out(result, "result")? = boxed(HeckeLattice(s));
        Ok(())
    })
}

/// 1 when `b ⊆ a`, else 0; -1 on a null argument.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_contains(a: *const HeckeLattice, b: *const HeckeLattice) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.0.contains(&b.0)),
        _ => -1,
    }
}

/// 1 when the lattices are equal, else 0; -1 on a null argument.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_equal(a: *const HeckeLattice, b: *const HeckeLattice) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.0 == b.0),
        _ => -1,
    }
}

/// JSON form `{"q":..,"hnf":[a,c,d]}`.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_to_json(
    l: *const HeckeLattice,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> HeckeStatus {
    guard(|| {
        let text = serde_json::to_string(&deref(l, "lattice")?.0).map_err(|e| invalid(e.to_string()))?;
        write_text(&text, buf, cap, len)
    })
}

/// All `L ⊇ Z^2` of index `n`, in canonical order.
#[no_mangle]
pub unsafe extern "C" fn hecke_superlattices(n: u64, result: *mut *mut HeckeLatticeList) -> HeckeStatus {
    guard(|| {
        let result = out(result, "result")?;
        if n == 0 || n > 1_000_000 {
            return Err(invalid(format!("index {n} outside 1..=1000000")));
        }
        *result = boxed(HeckeLatticeList(superlattices(n)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_list_len(list: *const HeckeLatticeList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// New handle for element `i`, or null when out of range.
#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_list_get(list: *const HeckeLatticeList, i: usize) -> *mut HeckeLattice {
    match list.as_ref().and_then(|l| l.0.get(i)) {
        Some(l) => boxed(HeckeLattice(l.clone())),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn hecke_lattice_list_free(list: *mut HeckeLatticeList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

// ---- Hecke algebra ----

#[no_mangle]
pub extern "C" fn hecke_element_new() -> *mut HeckeElement {
    boxed(HeckeElement(CoreElement::zero()))
}

#[no_mangle]
pub unsafe extern "C" fn hecke_element_free(f: *mut HeckeElement) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Adds `num/den` times the class `diag(d1, d2)`, `d1 | d2`.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_add_term(
    f: *mut HeckeElement,
    d1: u64,
    d2: u64,
    num: i64,
    den: i64,
) -> HeckeStatus {
    guard(|| {
        let f = out(f, "element")?;
        let dc = DoubleCoset::new(d1, d2)?;
        f.0.add_term(dc, rat_of(num, den)?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_element_convolve(
    a: *const HeckeElement,
    b: *const HeckeElement,
    result: *mut *mut HeckeElement,
) -> HeckeStatus {
    guard(|| {
        let c = convolve(&deref(a, "a")?.0, &deref(b, "b")?.0);
        *out(result, "result")? = boxed(HeckeElement(c));
        Ok(())
    })
}

/// Coefficient of `diag(d1, d2)` as `num/den` in lowest terms.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_coeff(
    f: *const HeckeElement,
    d1: u64,
    d2: u64,
    num: *mut i64,
    den: *mut i64,
) -> HeckeStatus {
    guard(|| {
        let c = deref(f, "element")?.0.coeff(&DoubleCoset::new(d1, d2)?);
        let fit = |x: &BigInt| x.to_i64().ok_or_else(|| invalid("coefficient does not fit in 64 bits"));
        *out(num, "num")? = fit(c.numer())?;
        *out(den, "den")? = fit(c.denom())?;
        Ok(())
    })
}

/// Number of classes with a nonzero coefficient.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_support_len(f: *const HeckeElement) -> usize {
    f.as_ref().map_or(0, |f| f.0.support().len())
}

/// JSON list `[{"class":[d1,d2],"coeff":"n/d"}, ...]` in class order.
#[no_mangle]
pub unsafe extern "C" fn hecke_element_to_json(
    f: *const HeckeElement,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> HeckeStatus {
    guard(|| {
        let terms: Vec<serde_json::Value> = deref(f, "element")?
            .0
            .terms()
            .map(|(dc, c)| serde_json::json!({ "class": [dc.d1().to_string(), dc.d2().to_string()], "coeff": c.to_string() }))
            .collect();
        write_text(&serde_json::Value::from(terms).to_string(), buf, cap, len)
    })
}

// ---- windows and operators ----

/// All lattices of index `p^j`, `j ≤ depth`.
#[no_mangle]
pub unsafe extern "C" fn hecke_window_prime(p: u64, depth: u32, result: *mut *mut HeckeWindow) -> HeckeStatus {
    guard(|| {
        let result = out(result, "result")?;
        if depth > 40 || p.checked_pow(depth).is_none_or(|n| n > 5000) {
            return Err(Fail(HeckeStatus::CapExceeded, format!("{p}^{depth} exceeds the window cap 5000")));
        }
        *result = boxed(HeckeWindow(Window::prime(p, depth)?));
        Ok(())
    })
}

/// All lattices of index at most `bound`, interior `index * margin ≤ bound`.
#[no_mangle]
pub unsafe extern "C" fn hecke_window_global(bound: u64, margin: u64, result: *mut *mut HeckeWindow) -> HeckeStatus {
    guard(|| {
        let result = out(result, "result")?;
        if bound > 2000 {
            return Err(Fail(HeckeStatus::CapExceeded, format!("bound {bound} exceeds the window cap 2000")));
        }
        *result = boxed(HeckeWindow(Window::global(bound, margin)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_window_free(w: *mut HeckeWindow) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

#[no_mangle]
pub unsafe extern "C" fn hecke_window_len(w: *const HeckeWindow) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn hecke_window_interior(w: *const HeckeWindow) -> usize {
    w.as_ref().map_or(0, |w| w.0.interior())
}

/// New handle for basis lattice `i`, or null when out of range.
#[no_mangle]
pub unsafe extern "C" fn hecke_window_lattice(w: *const HeckeWindow, i: usize) -> *mut HeckeLattice {
    match w.as_ref().filter(|w| i < w.0.len()) {
        Some(w) => boxed(HeckeLattice(w.0.lattice(i).clone())),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn hecke_operator_generator(
    w: *const HeckeWindow,
    gen: HeckeGenerator,
    p: u64,
    result: *mut *mut HeckeOperator,
) -> HeckeStatus {
    guard(|| {
        let w = &deref(w, "window")?.0;
        let op = match gen {
            HeckeGenerator::V => op_v(p, w),
            HeckeGenerator::VStar => op_v_star(p, w),
            HeckeGenerator::U => op_u(p, w),
            HeckeGenerator::UStar => op_u_star(p, w),
        }?;
        *out(result, "result")? = boxed(HeckeOperator(op));
        Ok(())
    })
}

/// `π(f)` on the window.
#[no_mangle]
pub unsafe extern "C" fn hecke_operator_hecke(
    w: *const HeckeWindow,
    f: *const HeckeElement,
    result: *mut *mut HeckeOperator,
) -> HeckeStatus {
    guard(|| {
        let op = op_hecke(&deref(f, "element")?.0, &deref(w, "window")?.0, None)?;
        *out(result, "result")? = boxed(HeckeOperator(op));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_operator_mul(
    a: *const HeckeOperator,
    b: *const HeckeOperator,
    result: *mut *mut HeckeOperator,
) -> HeckeStatus {
    guard(|| {
        let (a, b) = (&deref(a, "a")?.0, &deref(b, "b")?.0);
        if a.dim() != b.dim() {
            return Err(invalid(format!("dimensions {} and {} differ", a.dim(), b.dim())));
        }
        *out(result, "result")? = boxed(HeckeOperator(a.mul(b)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hecke_operator_free(op: *mut HeckeOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

#[no_mangle]
pub unsafe extern "C" fn hecke_operator_dim(op: *const HeckeOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn hecke_operator_nnz(op: *const HeckeOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.nnz())
}

/// 1 when column `col` has image outside the window, else 0; -1 on null.
#[no_mangle]
pub unsafe extern "C" fn hecke_operator_is_boundary(op: *const HeckeOperator, col: usize) -> i32 {
    op.as_ref().map_or(-1, |o| i32::from(o.0.is_boundary(col)))
}

/// Entry `(row, col)` as `num/den`.
#[no_mangle]
pub unsafe extern "C" fn hecke_operator_entry(
    op: *const HeckeOperator,
    row: usize,
    col: usize,
    num: *mut i64,
    den: *mut i64,
) -> HeckeStatus {
    guard(|| {
        let o = &deref(op, "operator")?.0;
        if row >= o.dim() || col >= o.dim() {
            return Err(invalid(format!("({row}, {col}) outside dimension {}", o.dim())));
        }
        let v = o.get(row, col);
        let fit = |x: &BigInt| x.to_i64().ok_or_else(|| invalid("entry does not fit in 64 bits"));
        *out(num, "num")? = fit(v.numer())?;
        *out(den, "den")? = fit(v.denom())?;
        Ok(())
    })
}

/// Triplets `[{"row":..,"col":..,"value":"n/d"}, ...]` in `(row, col)` order.
#[no_mangle]
pub unsafe extern "C" fn hecke_operator_to_json(
    op: *const HeckeOperator,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> HeckeStatus {
    guard(|| {
        let text = serde_json::to_string(&deref(op, "operator")?.0.triplets()).map_err(|e| invalid(e.to_string()))?;
        write_text(&text, buf, cap, len)
    })
}

// ---- checks and numerics ----

/// Exact projection identity on `prime(p, k)`; `pass` is 1 when it holds.
#[no_mangle]
pub unsafe extern "C" fn hecke_check_projection(p: u64, k: u32, pass: *mut i32) -> HeckeStatus {
    guard(|| {
        let pass = out(pass, "pass")?;
        if k > 8 || p.checked_pow(k).is_none_or(|n| n > 5000) {
            return Err(Fail(HeckeStatus::CapExceeded, format!("{p}^{k} exceeds the window cap 5000")));
        }
        *pass = i32::from(projection_identity_check(p, k)?.pass);
        Ok(())
    })
}

/// Local partition function: partial sum to `depth` and the Euler factor.
#[no_mangle]
pub unsafe extern "C" fn hecke_partition_prime(
    p: u64,
    beta: *const c_char,
    depth: u32,
    partial: *mut f64,
    closed: *mut f64,
) -> HeckeStatus {
    guard(|| {
        let beta = beta_of(c_str(beta, "beta")?)?;
        if depth > 400 {
            return Err(Fail(HeckeStatus::CapExceeded, format!("depth {depth} exceeds 400")));
        }
        let ctx = ctx_of(hecke_core::kms::DEFAULT_DIGITS)?;
        let r = partition_prime(p, &beta, depth, &ctx)?;
        *out(partial, "partial")? = ctx.to_f64(&r.partial);
        *out(closed, "closed")? = ctx.to_f64(&r.closed);
        Ok(())
    })
}

/// Global partition function `Σ_{n≤bound} σ1(n) n^-β` and `ζ(β)ζ(β-1)`.
#[no_mangle]
pub unsafe extern "C" fn hecke_partition_global(
    beta: *const c_char,
    bound: u64,
    partial: *mut f64,
    closed: *mut f64,
) -> HeckeStatus {
    guard(|| {
        let beta = beta_of(c_str(beta, "beta")?)?;
        if bound == 0 || bound > 1_000_000 {
            return Err(Fail(HeckeStatus::CapExceeded, format!("bound {bound} outside 1..=1000000")));
        }
        let ctx = ctx_of(hecke_core::kms::DEFAULT_DIGITS)?;
        let g = partition_global(&beta, bound, DEFAULT_ZETA_TERMS, &ctx)?;
        *out(partial, "partial")? = ctx.to_f64(&g.partial);
        *out(closed, "closed")? = ctx.to_f64(&g.closed.value);
        Ok(())
    })
}

/// `φ_{β,p}(v_p* v_p)` truncated at `depth`, with its certified error bound.
#[no_mangle]
pub unsafe extern "C" fn hecke_kms_v_star_v(
    p: u64,
    beta: *const c_char,
    depth: u32,
    value: *mut f64,
    bound: *mut f64,
) -> HeckeStatus {
    guard(|| {
        let beta = beta_of(c_str(beta, "beta")?)?;
        if depth > 400 {
            return Err(Fail(HeckeStatus::CapExceeded, format!("depth {depth} exceeds 400")));
        }
        let ctx = ctx_of(hecke_core::kms::DEFAULT_DIGITS)?;
        let spec = StateSpec::new(p, beta, depth);
        use hecke_core::spectral::Generator;
        let v = phi(&[Generator::VStar(p), Generator::V(p)], &spec, &ctx)?;
        *out(value, "value")? = ctx.to_f64(&v.value.value);
        *out(bound, "bound")? = ctx.to_f64(&v.value.bound);
        Ok(())
    })
}
