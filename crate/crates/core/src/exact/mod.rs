//! Exact arithmetic substrate: rationals, 2x2 integer and rational
//! matrices, normal forms, matrices modulo m and truncated p-adic
//! factorization. Everything here is a pure function of immutable values.

pub mod arith;
pub mod mat2;
pub mod modmat;
pub mod normal_form;
pub mod padic;

pub use mat2::{rat, rat_int, IMat2, QMat2, Rat};
pub use modmat::{sl2_mod, sl2_order, ModMat, DEFAULT_SL2_CAP};
pub use normal_form::{elementary_divisors, hnf, snf, HnfForm, SnfForm};
pub use padic::{padic_snf, PadicSnf};
