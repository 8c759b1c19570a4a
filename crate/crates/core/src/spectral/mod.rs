//! Truncated regular representations on lattice bases.

pub mod checks;
pub mod family;
pub mod operator;
pub mod ops;
pub mod window;

pub use family::{apply, apply_w, apply_word, delta, diagonal_entry, AdelicPoint, Generator, SparseVec};
pub use operator::{SparseOperator, Triplet};
pub use ops::{op_big_u, op_e_l, op_generator, op_h, op_hecke, op_pi_l, op_u, op_u_star, op_v, op_v_star};
pub use window::{Window, WindowMode};
