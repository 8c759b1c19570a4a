//! Finite truncations of `ℓ²(Γ\S)` and `ℓ²(Γ\S_p)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::arith::is_prime;
use crate::lattice::{superlattices, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WindowMode {
    /// All `L ⊇ Z^2` with `[L : Z^2] ≤ bound`.
    Global { bound: u64 },
    /// All `L ⊇ Z^2` with `[L : Z^2] = p^j`, `j ≤ depth`.
    Prime { p: u64, depth: u32 },
}

/// Ordered lattice basis of a truncated Hilbert space. Lattices are sorted
/// by index, then canonically, so every interior is a prefix.
#[derive(Clone, Debug)]
pub struct Window {
    mode: WindowMode,
    basis: Vec<Lattice>,
    indices: Vec<u64>,
    position: HashMap<Lattice, usize>,
    margin: u64,
}

impl Window {
    /// Global window with interior `index * margin ≤ bound`.
    pub fn global(bound: u64, margin: u64) -> Result<Self> {
        if bound == 0 || margin == 0 {
            return Err(Error::Invalid("window bound and margin must be positive".into()));
        }
        let mut basis = Vec::new();
        for n in 1..=bound {
            basis.extend(superlattices(n));
        }
        Ok(Window::from_basis(WindowMode::Global { bound }, basis, margin))
    }

    /// Prime window whose interior leaves out the top level.
    pub fn prime(p: u64, depth: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        p.checked_pow(depth).ok_or_else(|| Error::Invalid(format!("{p}^{depth} overflows")))?;
        let mut basis = Vec::new();
        for j in 0..=depth {
            basis.extend(superlattices(p.pow(j)));
        }
        Ok(Window::from_basis(WindowMode::Prime { p, depth }, basis, p))
    }

    fn from_basis(mode: WindowMode, basis: Vec<Lattice>, margin: u64) -> Self {
        let indices: Vec<u64> = basis.iter().map(|l| l.index_u64()).collect();
        let position = basis.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Window { mode, basis, indices, position, margin }
    }

    pub fn mode(&self) -> WindowMode {
        self.mode
    }

    pub fn basis(&self) -> &[Lattice] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, l: &Lattice) -> Option<usize> {
        self.position.get(l).copied()
    }

    pub fn lattice(&self, i: usize) -> &Lattice {
        &self.basis[i]
    }

    pub fn index_of(&self, i: usize) -> u64 {
        self.indices[i]
    }

    /// Largest index in the window.
    pub fn top(&self) -> u64 {
        match self.mode {
            WindowMode::Global { bound } => bound,
            WindowMode::Prime { p, depth } => p.pow(depth),
        }
    }

    pub fn margin(&self) -> u64 {
        self.margin
    }

    /// Number of leading basis elements with `index * margin ≤ top`.
    pub fn interior_with(&self, margin: u64) -> usize {
        let top = self.top();
        self.indices.partition_point(|&n| n.saturating_mul(margin) <= top)
    }

    /// Interior for the window's own margin.
    pub fn interior(&self) -> usize {
        self.interior_with(self.margin)
    }

    /// Interior of depth at most `j` in a prime window (or index at most `p^j`).
    pub fn depth_prefix(&self, p: u64, j: u32) -> usize {
        let cap = p.pow(j);
        self.indices.partition_point(|&n| n <= cap)
    }

    pub fn index_big(&self, i: usize) -> BigInt {
        BigInt::from(self.indices[i])
    }
}
