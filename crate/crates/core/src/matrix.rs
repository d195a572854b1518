//! Dense matrices over F_p: products, reduced row echelon form, kernels and
//! linear solves.

use std::fmt;

use crate::error::{Error, Result};
use crate::fp::{FpScalar, PrimeField};

/// A dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of [`FpMatrix::rref_kernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelInfo {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<u64>>,
}

impl FpMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major entries; entries are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, entries: &[u64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(FpMatrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&x| field.reduce(x)).collect(),
        })
    }

    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let reduced: Vec<u64> = entries.iter().map(|&x| field.from_i64(x)).collect();
        Self::from_rows(field, rows, cols, &reduced)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(field: PrimeField, n: usize, c: u64) -> Self {
        let mut m = Self::zero(field, n, n);
        let c = field.reduce(c);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn entry(&self, r: usize, c: usize) -> FpScalar {
        self.field.scalar(self.get(r, c))
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(FpMatrix { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(FpMatrix { data, ..*self })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = f.reduce(c);
        FpMatrix {
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            ..*self
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn trace(&self) -> u64 {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// The first nonzero entry in each column is taken as pivot.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = f.mul(self.data[idx], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = f.mul(factor, self.data[r * self.cols + j]);
                    let idx = i * self.cols + j;
                    self.data[idx] = f.sub(self.data[idx], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel `{x : m x = 0}`.
    ///
    /// Basis vectors are indexed by the free columns in increasing order; the
    /// vector for free column `j` has a 1 in position `j` and zeros in every
    /// other free position.
    pub fn rref_kernel(&self) -> KernelInfo {
        let (red, pivots) = self.rref();
        let f = self.field;
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(row, free));
            }
            basis.push(v);
        }
        KernelInfo {
            rank: pivots.len(),
            kernel_basis: basis,
        }
    }

    /// Some `x` with `m x = rhs`, or `None` when the system is inconsistent.
    pub fn solve_linear(&self, rhs: &[u64]) -> Result<Option<Vec<u64>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut aug = Self::zero(f, self.rows, self.cols + 1);
        for (r, &b) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.data[r * (self.cols + 1) + self.cols] = f.reduce(b);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zero(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zero(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = aug.get(r, n + c);
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Trace and determinant of a 2x2 matrix: `x^2 - trace x + det` is its
    /// characteristic polynomial.
    pub fn char_poly_2x2(&self) -> Result<(FpScalar, FpScalar)> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::NotTwoByTwo(self.rows, self.cols));
        }
        let f = self.field;
        let (a, b, c, d) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
        let tr = f.add(a, d);
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        Ok((f.scalar(tr), f.scalar(det)))
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) {}", self.field.modulus(), self.rows, self.cols, self)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained row space in reduced echelon form. Used to
/// accumulate long streams of linear constraints over few unknowns.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: PrimeField,
    width: usize,
    // (pivot column, normalized row)
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    pub fn new(field: PrimeField, width: usize) -> Self {
        RowSpace {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, v: &mut [u64]) {
        let f = self.field;
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Whether `v` already lies in the span.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Add `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.rows.len() == self.width {
            return false;
        }
        let f = self.field;
        let mut w: Vec<u64> = v.iter().map(|&x| f.reduce(x)).collect();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push((pc, w));
        true
    }

    pub fn to_matrix(&self) -> FpMatrix {
        let mut m = FpMatrix::zero(self.field, self.rows.len(), self.width);
        for (i, (_, row)) in self.rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.data[i * self.width + j] = x;
            }
        }
        m
    }

    pub fn basis(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_times_m() {
        let k = f(7);
        let m = FpMatrix::from_rows(k, 2, 2, &[3, 4, 5, 6]).unwrap();
        assert_eq!(FpMatrix::identity(k, 2).mat_mul(&m).unwrap(), m);
    }

    #[test]
    fn unipotent_square_over_f3() {
        let k = f(3);
        let u = FpMatrix::from_rows(k, 2, 2, &[1, 1, 0, 1]).unwrap();
        let want = FpMatrix::from_rows(k, 2, 2, &[1, 2, 0, 1]).unwrap();
        assert_eq!(u.mat_mul(&u).unwrap(), want);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = FpMatrix::identity(f(5), 2);
        let b = FpMatrix::identity(f(7), 2);
        assert!(matches!(a.mat_mul(&b), Err(Error::ModulusMismatch(5, 7))));
        let c = FpMatrix::zero(f(5), 3, 1);
        assert!(matches!(a.mat_mul(&c), Err(Error::DimensionMismatch(_))));
        assert!(matches!(c.char_poly_2x2(), Err(Error::NotTwoByTwo(3, 1))));
    }

    #[test]
    fn kernel_examples() {
        let z = FpMatrix::zero(f(5), 2, 2).rref_kernel();
        assert_eq!((z.rank, z.kernel_basis.len()), (0, 2));
        let i = FpMatrix::identity(f(7), 4).rref_kernel();
        assert_eq!((i.rank, i.kernel_basis.len()), (4, 0));
        let m = FpMatrix::from_rows(f(3), 2, 2, &[1, 1, 2, 2]).unwrap();
        let k = m.rref_kernel();
        assert_eq!((k.rank, k.kernel_basis.len()), (1, 1));
        // enumerate all 9 vectors: exactly 3 lie in the kernel
        let zeros = (0..9u64)
            .filter(|v| m.apply(&[v % 3, v / 3]).unwrap() == vec![0, 0])
            .count();
        assert_eq!(zeros, 3);
        assert_eq!(m.apply(&k.kernel_basis[0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn solve_examples() {
        let k = f(11);
        let id = FpMatrix::identity(k, 3);
        assert_eq!(id.solve_linear(&[4, 5, 6]).unwrap(), Some(vec![4, 5, 6]));
        let m = FpMatrix::from_rows(k, 2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(m.solve_linear(&[1, 3]).unwrap(), None);
        assert!(m.solve_linear(&[1]).is_err());
    }

    #[test]
    fn char_poly_examples() {
        let k = f(5);
        let d = FpMatrix::from_rows(k, 2, 2, &[2, 0, 0, 3]).unwrap();
        let (t, n) = d.char_poly_2x2().unwrap();
        assert_eq!((t.value(), n.value()), (0, 1));
        let u = FpMatrix::from_rows(k, 2, 2, &[1, 1, 0, 1]).unwrap();
        let (t, n) = u.char_poly_2x2().unwrap();
        assert_eq!((t.value(), n.value()), (2, 1));
    }

    #[test]
    fn row_space_tracks_rank() {
        let k = f(5);
        let mut rs = RowSpace::new(k, 3);
        assert!(rs.insert(&[1, 2, 3]));
        assert!(!rs.insert(&[2, 4, 1]));
        assert!(rs.insert(&[0, 1, 1]));
        assert!(rs.contains(&[1, 3, 4]));
        assert!(!rs.contains(&[0, 0, 1]));
        assert_eq!(rs.rank(), 2);
    }
}
