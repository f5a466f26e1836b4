//! Exact semi-tensor product (STP) algebra.
//!
//! Logical matrices are stored in δ-form (row count plus one target per
//! column); [`DenseMatrix`] holds general rational matrices and is used for
//! the general STP and as the reference path in tests. Nothing here uses
//! floating point.
//!
//! Boolean values use the vector form `1 ~ δ_2^1`, `0 ~ δ_2^2`, and a state
//! `(x_1, …, x_n)` is the product `x_1 ⋉ x_2 ⋉ … ⋉ x_n` with `x_1` the most
//! significant factor.

mod dense;
mod logical;

pub use dense::DenseMatrix;
pub use logical::{factor_selector, swap_matrix, LogicalMatrix, ZeroExtendedLogicalMatrix};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// `δ_dim^index`, column `index` (1-based) of the identity `I_dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaVector {
    dim: usize,
    pos: usize,
}

impl DeltaVector {
    /// `index` is 1-based, as in `δ_dim^index`.
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if index == 0 || index > dim {
            return Err(Error::dims(format!("δ_{dim}^{index} is out of range")));
        }
        Ok(DeltaVector {
            dim,
            pos: index - 1,
        })
    }

    pub(crate) fn from_pos(dim: usize, pos: usize) -> Self {
        debug_assert!(pos < dim);
        DeltaVector { dim, pos }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-based index.
    pub fn index(&self) -> usize {
        self.pos + 1
    }

    /// 0-based position of the 1.
    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.dim, 1);
        d.set(self.pos, 0, BigRational::one());
        d
    }

    /// `self ⋉ other` for two basis columns, which is their Kronecker product.
    pub fn stp(&self, other: &DeltaVector) -> DeltaVector {
        DeltaVector {
            dim: self.dim * other.dim,
            pos: self.pos * other.dim + other.pos,
        }
    }
}

impl std::fmt::Display for DeltaVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "δ_{}^{}", self.dim, self.index())
    }
}

/// The all-ones column `J_k`; its transpose selects nothing and sums to 1 on
/// every basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OnesVector {
    pub dim: usize,
}

impl OnesVector {
    pub fn new(dim: usize) -> Self {
        OnesVector { dim }
    }

    /// `J_k^T` as the logical matrix `δ_1[1, …, 1]`.
    pub fn row(&self) -> LogicalMatrix {
        LogicalMatrix::ones_row(self.dim)
    }

    pub fn column(&self) -> DenseMatrix {
        self.row().to_dense().transpose()
    }
}

/// Encodes a Boolean tuple as `δ_{2^n}^j` with `j = 1 + Σ (1 - b_i) 2^{n-i}`.
pub fn state_index_encode(bits: &[bool]) -> DeltaVector {
    assert!(!bits.is_empty(), "a state needs at least one variable");
    assert!(bits.len() < usize::BITS as usize, "too many variables");
    let pos = bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(!b));
    DeltaVector {
        dim: 1 << bits.len(),
        pos,
    }
}

/// Inverse of [`state_index_encode`] for a vector of dimension `2^n`.
pub fn state_index_decode(v: DeltaVector) -> Vec<bool> {
    assert!(v.dim.is_power_of_two(), "dimension {} is not a power of two", v.dim);
    let n = v.dim.trailing_zeros() as usize;
    decode_pos(v.pos, n)
}

/// Bits of the 0-based state position `pos` among `2^n` states.
pub fn decode_pos(pos: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (pos >> (n - 1 - i)) & 1 == 0).collect()
}
