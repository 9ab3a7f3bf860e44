//! Dense matrices over a [`PrimeField`] and Gaussian elimination.

use std::fmt;

use crate::field::PrimeField;
use crate::Error;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} mod {}", self.rows, self.cols, self.field.modulus())?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of already-reduced or raw entries; entries are
    /// reduced modulo `p`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.reduce(v));
            }
        }
        m
    }

    pub fn from_i64_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
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
        u64::from(self.data[r * self.cols + c])
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.modulus());
        self.data[r * self.cols + c] = v as u32;
    }

    /// Adds `v` to the entry at `(r, c)`.
    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: u64) {
        let cur = self.get(r, c);
        self.set(r, c, self.field.add(cur, v));
    }

    pub fn row(&self, r: usize) -> Vec<u64> {
        self.data[r * self.cols..(r + 1) * self.cols]
            .iter()
            .map(|&x| u64::from(x))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.field.mul_add(acc, u64::from(a), b))
            })
            .collect()
    }

    /// Appends the rows of `other` below `self`.
    pub fn vstack(&mut self, other: &ExactMatrix) {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
    }

    /// Row-reduces in place and returns the pivot columns in row order.
    ///
    /// With `reduced`, entries above pivots are cleared too and pivots are
    /// normalized to 1 (reduced row echelon form). Rows of the pivot row that
    /// are zero are skipped, so sparse inputs stay cheap.
    fn echelonize(&mut self, reduced: bool) -> Vec<usize> {
        let field = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        let mut nz: Vec<(usize, u64)> = Vec::with_capacity(cols);
        for c in 0..cols {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if found != prow {
                for j in c..cols {
                    self.data.swap(found * cols + j, prow * cols + j);
                }
            }
            let inv = field.inv(self.get(prow, c));
            nz.clear();
            for j in c..cols {
                let v = self.data[prow * cols + j];
                if v != 0 {
                    let v = field.mul(u64::from(v), inv);
                    self.data[prow * cols + j] = v as u32;
                    nz.push((j, v));
                }
            }
            let start = if reduced { 0 } else { prow + 1 };
            for r in start..self.rows {
                if r == prow {
                    continue;
                }
                let lead = self.data[r * cols + c];
                if lead == 0 {
                    continue;
                }
                let factor = field.neg(u64::from(lead));
                let row = &mut self.data[r * cols..(r + 1) * cols];
                for &(j, v) in &nz {
                    row[j] = field.mul_add(u64::from(row[j]), factor, v) as u32;
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }

    /// Rank over the prime field.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter dimension.
        let mut work = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        work.echelonize(false).len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut work = self.clone();
        let pivots = work.echelonize(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let field = self.field;
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(work.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Echelon basis of the row space, as a matrix with `rank` rows.
    pub fn row_space_basis(&self) -> ExactMatrix {
        let mut work = self.clone();
        let rank = work.echelonize(false).len();
        work.data.truncate(rank * self.cols);
        work.rows = rank;
        work
    }

    /// Whether `v` lies in the column span.
    pub fn in_column_span(&self, v: &[u64]) -> Result<bool, Error> {
        if v.len() != self.rows {
            return Err(Error::InvalidInput(format!(
                "vector of length {} against a matrix with {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.data[r * self.cols + c];
            }
            aug.set(r, self.cols, self.field.reduce(v[r]));
        }
        Ok(aug.rank() == self.rank())
    }
}
