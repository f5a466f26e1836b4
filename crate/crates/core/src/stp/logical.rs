use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{DeltaVector, DenseMatrix};
use crate::error::{Error, Result};

/// A `p x q` matrix whose columns are standard basis vectors, stored as the
/// list of 0-based row positions of the single 1 in each column.
///
/// Displayed in δ-notation, `δ_p[i_1, …, i_q]`, with 1-based indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogicalMatrix {
    rows: usize,
    targets: Vec<usize>,
}

impl LogicalMatrix {
    /// Builds from 0-based column targets.
    pub fn new(rows: usize, targets: Vec<usize>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::dims("logical matrix needs at least one row"));
        }
        if let Some(&bad) = targets.iter().find(|&&t| t >= rows) {
            return Err(Error::dims(format!(
                "column target {} out of range for {rows} rows",
                bad + 1
            )));
        }
        Ok(LogicalMatrix { rows, targets })
    }

    /// Builds from 1-based δ indices, `δ_rows[indices…]`.
    pub fn from_delta(rows: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > rows) {
            return Err(Error::dims(format!(
                "δ index {bad} out of range 1..={rows}"
            )));
        }
        Self::new(rows, indices.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        LogicalMatrix {
            rows: n,
            targets: (0..n).collect(),
        }
    }

    /// The row form of the all-ones vector, `J_k^T = δ_1[1, …, 1]`.
    pub fn ones_row(k: usize) -> Self {
        LogicalMatrix {
            rows: 1,
            targets: vec![0; k],
        }
    }

    /// A column `δ_k^i` viewed as a `k x 1` logical matrix.
    pub fn column(v: DeltaVector) -> Self {
        LogicalMatrix {
            rows: v.dim(),
            targets: vec![v.pos()],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.targets.len()
    }

    /// 0-based row position of the 1 in column `j` (0-based).
    pub fn target(&self, j: usize) -> usize {
        self.targets[j]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// 1-based δ indices.
    pub fn delta(&self) -> Vec<usize> {
        self.targets.iter().map(|t| t + 1).collect()
    }

    /// Ordinary product `self · other` for `cols(self) = rows(other)`.
    pub fn compose(&self, other: &LogicalMatrix) -> Result<LogicalMatrix> {
        if self.cols() != other.rows {
            return Err(Error::dims(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        Ok(LogicalMatrix {
            rows: self.rows,
            targets: other.targets.iter().map(|&t| self.targets[t]).collect(),
        })
    }

    /// Applies the matrix to a basis vector of matching dimension.
    pub fn apply(&self, x: DeltaVector) -> Result<DeltaVector> {
        if x.dim() != self.cols() {
            return Err(Error::dims(format!(
                "vector of dimension {} applied to a {}x{} matrix",
                x.dim(),
                self.rows,
                self.cols()
            )));
        }
        Ok(DeltaVector::from_pos(self.rows, self.targets[x.pos()]))
    }

    pub fn kron(&self, other: &LogicalMatrix) -> LogicalMatrix {
        let q = other.cols();
        let mut targets = Vec::with_capacity(self.cols() * q);
        for &a in &self.targets {
            for &b in &other.targets {
                targets.push(a * other.rows + b);
            }
        }
        debug_assert_eq!(targets.len(), self.cols() * q);
        LogicalMatrix {
            rows: self.rows * other.rows,
            targets,
        }
    }

    /// Column-wise Kronecker product; both factors need the same width.
    pub fn khatri_rao(&self, other: &LogicalMatrix) -> Result<LogicalMatrix> {
        if self.cols() != other.cols() {
            return Err(Error::dims(format!(
                "Khatri-Rao needs equal column counts, got {} and {}",
                self.cols(),
                other.cols()
            )));
        }
        Ok(LogicalMatrix {
            rows: self.rows * other.rows,
            targets: self
                .targets
                .iter()
                .zip(&other.targets)
                .map(|(&a, &b)| a * other.rows + b)
                .collect(),
        })
    }

    /// Khatri-Rao product of a nonempty list, left to right.
    pub fn khatri_rao_all<'a, I>(factors: I) -> Result<LogicalMatrix>
    where
        I: IntoIterator<Item = &'a LogicalMatrix>,
    {
        let mut it = factors.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::dims("Khatri-Rao of an empty list"))?
            .clone();
        it.try_fold(first, |acc, f| acc.khatri_rao(f))
    }

    /// Semi-tensor product of two logical matrices, which is again logical.
    pub fn stp(&self, other: &LogicalMatrix) -> LogicalMatrix {
        let n = self.cols();
        let p = other.rows;
        let t = n.lcm(&p);
        let left = self.kron(&Self::identity(t / n));
        let right = other.kron(&Self::identity(t / p));
        left.compose(&right)
            .expect("lcm alignment always yields compatible factors")
    }

    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols() {
            return false;
        }
        let mut seen = vec![false; self.rows];
        for &t in &self.targets {
            if std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    /// Transpose of a permutation matrix, which is its inverse.
    pub fn permutation_transpose(&self) -> Result<LogicalMatrix> {
        if !self.is_permutation() {
            return Err(Error::NotPermutation(format!("{self}")));
        }
        let mut inv = vec![0; self.rows];
        for (j, &t) in self.targets.iter().enumerate() {
            inv[t] = j;
        }
        Ok(LogicalMatrix {
            rows: self.rows,
            targets: inv,
        })
    }

    /// Columns `start .. start + width` as their own matrix.
    pub fn column_block(&self, start: usize, width: usize) -> Result<LogicalMatrix> {
        if start + width > self.cols() {
            return Err(Error::dims(format!(
                "column block {}..{} exceeds {} columns",
                start,
                start + width,
                self.cols()
            )));
        }
        Ok(LogicalMatrix {
            rows: self.rows,
            targets: self.targets[start..start + width].to_vec(),
        })
    }

    /// Horizontal concatenation `[A_1, A_2, …]`.
    pub fn hconcat(blocks: &[LogicalMatrix]) -> Result<LogicalMatrix> {
        let rows = blocks
            .first()
            .ok_or_else(|| Error::dims("concatenation of no blocks"))?
            .rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::dims("blocks have different row counts"));
        }
        Ok(LogicalMatrix {
            rows,
            targets: blocks.iter().flat_map(|b| b.targets.iter().copied()).collect(),
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols());
        for (j, &t) in self.targets.iter().enumerate() {
            d.set(t, j, BigRational::one());
        }
        d
    }
}

impl fmt::Display for LogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}[", self.rows)?;
        for (j, t) in self.targets.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", t + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Logical matrix that may also contain zero columns (forbidden transitions).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZeroExtendedLogicalMatrix {
    rows: usize,
    targets: Vec<Option<usize>>,
}

impl ZeroExtendedLogicalMatrix {
    pub fn new(rows: usize, targets: Vec<Option<usize>>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::dims("logical matrix needs at least one row"));
        }
        if targets.iter().flatten().any(|&t| t >= rows) {
            return Err(Error::dims("column target out of range"));
        }
        Ok(ZeroExtendedLogicalMatrix { rows, targets })
    }

    /// 1-based δ indices where `0` denotes a zero column.
    pub fn from_delta(rows: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i > rows) {
            return Err(Error::dims(format!(
                "δ index {bad} out of range 0..={rows}"
            )));
        }
        Self::new(
            rows,
            indices.iter().map(|&i| i.checked_sub(1)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.targets.len()
    }

    pub fn target(&self, j: usize) -> Option<usize> {
        self.targets[j]
    }

    pub fn targets(&self) -> &[Option<usize>] {
        &self.targets
    }

    /// 1-based δ indices with `0` for zero columns.
    pub fn delta(&self) -> Vec<usize> {
        self.targets.iter().map(|t| t.map_or(0, |t| t + 1)).collect()
    }

    pub fn zero_column(&mut self, j: usize) {
        self.targets[j] = None;
    }

    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.cols())
            .filter(|&j| self.targets[j].is_none())
            .collect()
    }

    /// `left · self`: zero columns stay zero.
    pub fn compose_left(&self, left: &LogicalMatrix) -> Result<Self> {
        if left.cols() != self.rows {
            return Err(Error::dims("cannot compose zero-extended matrix"));
        }
        Ok(ZeroExtendedLogicalMatrix {
            rows: left.rows(),
            targets: self.targets.iter().map(|t| t.map(|t| left.target(t))).collect(),
        })
    }

    /// The underlying logical matrix when there are no zero columns.
    pub fn as_logical(&self) -> Option<LogicalMatrix> {
        let targets = self.targets.iter().copied().collect::<Option<Vec<_>>>()?;
        LogicalMatrix::new(self.rows, targets).ok()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols());
        for (j, t) in self.targets.iter().enumerate() {
            if let Some(t) = t {
                d.set(*t, j, BigRational::one());
            }
        }
        d
    }
}

impl From<LogicalMatrix> for ZeroExtendedLogicalMatrix {
    fn from(m: LogicalMatrix) -> Self {
        ZeroExtendedLogicalMatrix {
            rows: m.rows,
            targets: m.targets.into_iter().map(Some).collect(),
        }
    }
}

impl fmt::Display for ZeroExtendedLogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}[", self.rows)?;
        for (j, t) in self.delta().iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ZeroExtendedLogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The dimensional swap matrix `W_[m,n] = [I_n ⊗ δ_m^1, …, I_n ⊗ δ_m^m]`.
///
/// For columns `X ∈ Δ_m`, `Y ∈ Δ_n`: `W_[m,n] ⋉ X ⋉ Y = Y ⋉ X`.
pub fn swap_matrix(m: usize, n: usize) -> LogicalMatrix {
    let mut targets = Vec::with_capacity(m * n);
    for k in 0..m {
        for j in 0..n {
            targets.push(j * m + k);
        }
    }
    LogicalMatrix {
        rows: m * n,
        targets,
    }
}

/// Structure matrix of `z ↦ z_k` for `z = z_1 ⋉ … ⋉ z_s` (0-based `k`),
/// i.e. `J_{2^k}^T ⊗ I_2 ⊗ J_{2^{s-k-1}}^T`.
pub fn factor_selector(k: usize, s: usize) -> LogicalMatrix {
    assert!(k < s, "factor {k} out of range for {s} factors");
    LogicalMatrix::ones_row(1 << k)
        .kron(&LogicalMatrix::identity(2))
        .kron(&LogicalMatrix::ones_row(1 << (s - k - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: usize, idx: &[usize]) -> LogicalMatrix {
        LogicalMatrix::from_delta(p, idx).unwrap()
    }

    #[test]
    fn swap_small_cases() {
        assert_eq!(swap_matrix(1, 5), LogicalMatrix::identity(5));
        assert_eq!(swap_matrix(2, 2), d(4, &[1, 3, 2, 4]));
        assert!(swap_matrix(3, 4).is_permutation());
    }

    #[test]
    fn khatri_rao_examples() {
        let a = d(2, &[1, 2]);
        let b = d(2, &[1, 1]);
        assert_eq!(a.khatri_rao(&b).unwrap(), d(4, &[1, 3]));
        let one = LogicalMatrix::ones_row(2);
        assert_eq!(a.khatri_rao(&one).unwrap(), a);
        assert!(a.khatri_rao(&d(2, &[1])).is_err());
    }

    #[test]
    fn compose_checks_dimensions() {
        let a = d(2, &[1, 2, 2]);
        let b = d(2, &[2, 1]);
        assert!(a.compose(&b).is_err());
        assert_eq!(LogicalMatrix::identity(2).compose(&b).unwrap(), b);
    }

    #[test]
    fn selectors_match_aggregated_grid_example() {
        let z2 = LogicalMatrix::ones_row(2).kron(&LogicalMatrix::identity(2));
        let z1 = LogicalMatrix::identity(2).kron(&LogicalMatrix::ones_row(2));
        assert_eq!(factor_selector(1, 2), z2);
        assert_eq!(factor_selector(0, 2), z1);
        assert_eq!(z2.khatri_rao(&z1).unwrap(), d(4, &[1, 3, 2, 4]));
        assert_eq!(factor_selector(0, 3), d(2, &[1, 1, 1, 1, 2, 2, 2, 2]));
        assert_eq!(factor_selector(1, 3), d(2, &[1, 1, 2, 2, 1, 1, 2, 2]));
        assert_eq!(factor_selector(2, 3), d(2, &[1, 2, 1, 2, 1, 2, 1, 2]));
    }

    #[test]
    fn zero_extended_composition_keeps_zero_columns() {
        let z = ZeroExtendedLogicalMatrix::from_delta(3, &[1, 0, 3]).unwrap();
        let p = d(3, &[2, 3, 1]);
        assert_eq!(z.compose_left(&p).unwrap().delta(), vec![2, 0, 1]);
        assert_eq!(z.zero_columns(), vec![1]);
        assert!(z.as_logical().is_none());
    }

    #[test]
    fn permutation_transpose_is_inverse() {
        let t = d(4, &[3, 1, 4, 2]);
        let tt = t.permutation_transpose().unwrap();
        assert_eq!(t.compose(&tt).unwrap(), LogicalMatrix::identity(4));
        assert_eq!(tt.to_dense(), t.to_dense().transpose());
        assert!(d(2, &[1, 1]).permutation_transpose().is_err());
    }
}
