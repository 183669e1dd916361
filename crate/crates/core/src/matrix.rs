//! Matrices over `C[Z^d]`: determinants, minors and L1 norm estimates.

use alloc::vec::Vec;

use itertools::Itertools;

use crate::error::MatrixError;
use crate::gaussian::GaussianRational;
use crate::poly::LaurentPoly;

/// Default cap on the number of `(I, J)` index-set pairs tried for one minor size.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

/// A dense `rows × cols` matrix of Laurent polynomials sharing one ambient dimension.
///
/// Stored in the layout it is written in. The associated operator acts on
/// column vectors, so its domain is `L²(Z^d)^cols`: see [`PolyMatrix::domain_dim`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(MatrixError::Empty);
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(MatrixError::Ragged { row: bad });
        }
        let dim = rows[0][0].dim();
        let entries: Vec<LaurentPoly> = rows.into_iter().flatten().collect();
        if let Some(e) = entries.iter().find(|e| e.dim() != dim) {
            return Err(MatrixError::DimensionMismatch { expected: dim, found: e.dim() });
        }
        Ok(Self { rows: r, cols: c, dim, entries })
    }

    /// Embeds every entry into the largest ambient dimension present, then builds the matrix.
    pub fn from_rows_embedded(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, MatrixError> {
        let dim = rows.iter().flatten().map(LaurentPoly::dim).max().unwrap_or(0);
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.embed(dim)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn scalar(p: LaurentPoly) -> Self {
        Self { rows: 1, cols: 1, dim: p.dim(), entries: alloc::vec![p] }
    }

    pub fn identity(k: usize, dim: usize) -> Self {
        Self::diagonal((0..k).map(|_| LaurentPoly::one(dim)).collect()).expect("k ≥ 1")
    }

    pub fn diagonal(diag: Vec<LaurentPoly>) -> Result<Self, MatrixError> {
        let k = diag.len();
        if k == 0 {
            return Err(MatrixError::Empty);
        }
        let dim = diag[0].dim();
        let rows = diag
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                (0..k).map(|j| if i == j { p.clone() } else { LaurentPoly::zero(dim) }).collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank of the operator's domain, `cols`.
    pub fn domain_dim(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn submatrix(&self, row_set: &[usize], col_set: &[usize]) -> Result<Self, MatrixError> {
        for &i in row_set {
            if i >= self.rows {
                return Err(MatrixError::IndexOutOfRange { index: i, bound: self.rows });
            }
        }
        for &j in col_set {
            if j >= self.cols {
                return Err(MatrixError::IndexOutOfRange { index: j, bound: self.cols });
            }
        }
        if row_set.is_empty() || col_set.is_empty() {
            return Err(MatrixError::Empty);
        }
        let entries = row_set
            .iter()
            .flat_map(|&i| col_set.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Ok(Self { rows: row_set.len(), cols: col_set.len(), dim: self.dim, entries })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::SizeMismatch { rows: self.cols, cols: other.rows });
        }
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero(self.dim);
                for l in 0..self.cols {
                    acc = &acc + &(self.get(i, l) * other.get(l, j));
                }
                entries.push(acc);
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, dim: self.dim, entries })
    }

    /// Transpose with the involution applied entrywise: the adjoint `A*`.
    pub fn star_transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).star())
            .collect();
        Self { rows: self.cols, cols: self.rows, dim: self.dim, entries }
    }

    /// `‖A‖₁ = max_{i,j} ‖a_ij‖₁`.
    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(LaurentPoly::l1_norm).fold(0.0, f64::max)
    }

    /// `m·n·‖A‖₁`, an upper bound for the operator norm.
    pub fn op_norm_upper(&self) -> f64 {
        (self.rows * self.cols) as f64 * self.l1_norm()
    }

    pub fn determinant(&self) -> Result<LaurentPoly, MatrixError> {
        self.require_square()?;
        if self.rows <= 3 {
            Ok(self.determinant_cofactor())
        } else {
            self.determinant_bareiss()
        }
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Laplace expansion along the first row. Panics if not square.
    pub fn determinant_cofactor(&self) -> LaurentPoly {
        assert!(self.is_square(), "cofactor expansion needs a square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        self.cofactor_rec(0, &cols)
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> LaurentPoly {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = LaurentPoly::zero(self.dim);
        for (pos, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.cofactor_rec(row + 1, &rest);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Fraction-free Gaussian elimination with exact division in the Laurent ring.
    pub fn determinant_bareiss(&self) -> Result<LaurentPoly, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut m: Vec<Vec<LaurentPoly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut prev = LaurentPoly::one(self.dim);
        let mut negate = false;
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(LaurentPoly::zero(self.dim)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev)?;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -&det } else { det })
    }

    /// Determinant of the submatrix on rows `row_set` and columns `col_set` (0-based).
    pub fn minor(&self, row_set: &[usize], col_set: &[usize]) -> Result<LaurentPoly, MatrixError> {
        if row_set.len() != col_set.len() {
            return Err(MatrixError::SizeMismatch { rows: row_set.len(), cols: col_set.len() });
        }
        self.submatrix(row_set, col_set)?.determinant()
    }

    /// First non-vanishing minor of maximal size, scanning sizes downward and index sets lexicographically.
    pub fn max_nonvanishing_minor(&self, cap: u128) -> Result<MinorCertificate, MatrixError> {
        let (k, mut found) = self.max_minors(cap, true)?;
        debug_assert!(found.iter().all(|c| c.size() == k));
        Ok(found.remove(0))
    }

    /// Every non-vanishing minor of maximal size, in lexicographic `(I, J)` order.
    pub fn all_max_nonvanishing_minors(&self, cap: u128) -> Result<Vec<MinorCertificate>, MatrixError> {
        self.max_minors(cap, false).map(|(_, v)| v)
    }

    fn max_minors(&self, cap: u128, first_only: bool) -> Result<(usize, Vec<MinorCertificate>), MatrixError> {
        if self.is_zero() {
            return Err(MatrixError::ZeroMatrix);
        }
        for size in (1..=self.rows.min(self.cols)).rev() {
            let candidates = binomial(self.rows, size) * binomial(self.cols, size);
            if candidates > cap {
                return Err(MatrixError::SearchCapExceeded { size, candidates, cap });
            }
            let mut found = Vec::new();
            for rs in (0..self.rows).combinations(size) {
                for cs in (0..self.cols).combinations(size) {
                    let det = self.minor(&rs, &cs)?;
                    if det.is_zero() {
                        continue;
                    }
                    let b_l1 = self.submatrix(&rs, &cs)?.l1_norm();
                    found.push(MinorCertificate { row_set: rs.clone(), col_set: cs, det, b_l1 });
                    if first_only {
                        return Ok((size, found));
                    }
                }
            }
            if !found.is_empty() {
                return Ok((size, found));
            }
        }
        unreachable!("a non-zero matrix has a non-zero 1x1 minor")
    }
}

/// A maximal-size submatrix `B` of `A` with `det B ≠ 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct MinorCertificate {
    /// 0-based, ascending.
    pub row_set: Vec<usize>,
    /// 0-based, ascending.
    pub col_set: Vec<usize>,
    pub det: LaurentPoly,
    /// `‖B‖₁`.
    pub b_l1: f64,
}

impl MinorCertificate {
    pub fn size(&self) -> usize {
        self.row_set.len()
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Convenience for tests and examples: a constant entry.
pub fn constant_entry(dim: usize, n: i64) -> LaurentPoly {
    LaurentPoly::constant(dim, GaussianRational::from_integer(n))
}
