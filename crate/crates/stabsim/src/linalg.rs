//! Dense vectors and matrices over Z_d with exact Gaussian elimination.
//!
//! Entries are kept as raw `u64` residues with the modulus carried once per
//! container. Row reduction, solving, nullspaces and left inverses are the
//! only primitives the canonical-form and inner-product code needs; all of
//! them are standard fraction-free elimination over a prime field.

use crate::field::Fp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpVector {
    data: Vec<u64>,
    d: u64,
}

impl FpVector {
    pub fn zeros(len: usize, d: u64) -> Self {
        FpVector { data: vec![0; len], d }
    }

    pub fn from_vec(data: Vec<u64>, d: u64) -> Self {
        FpVector { data: data.into_iter().map(|v| v % d).collect(), d }
    }

    pub fn from_signed(data: &[i64], d: u64) -> Self {
        FpVector { data: data.iter().map(|&v| v.rem_euclid(d as i64) as u64).collect(), d }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        self.data[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u64) {
        self.data[i] = v % self.d;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, v: u64) {
        self.data[i] = (self.data[i] + v % self.d) % self.d;
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.data.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn dot(&self, other: &FpVector) -> u64 {
        debug_assert_eq!(self.len(), other.len());
        let d = self.d;
        self.data.iter().zip(&other.data).fold(0u64, |acc, (&a, &b)| (acc + a * b) % d)
    }

    pub fn concat(&self, other: &FpVector) -> FpVector {
        debug_assert_eq!(self.d, other.d);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpVector { data, d: self.d }
    }

    /// Remove entry `i`, shifting the tail down.
    pub fn remove(&mut self, i: usize) {
        self.data.remove(i);
    }

    pub fn scaled(&self, c: u64) -> FpVector {
        let d = self.d;
        FpVector { data: self.data.iter().map(|&v| v * (c % d) % d).collect(), d }
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        debug_assert_eq!(self.d, other.d);
        let d = self.d;
        FpVector {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % d).collect(),
            d,
        }
    }
}

/// Row-major dense matrix over Z_d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    d: u64,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, d: u64) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols], d }
    }

    pub fn identity(n: usize, d: u64) -> Self {
        let mut m = FpMatrix::zeros(n, n, d);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]], d: u64) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = FpMatrix::zeros(r, c, d);
        for (i, row) in rows.iter().enumerate() {
            debug_assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set_signed(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v % self.d;
    }

    pub fn set_signed(&mut self, r: usize, c: usize, v: i64) {
        self.set(r, c, v.rem_euclid(self.d as i64) as u64);
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u64) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v % self.d);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FpVector {
        FpVector::from_vec(self.row(r).to_vec(), self.d)
    }

    pub fn col_vector(&self, c: usize) -> FpVector {
        FpVector::from_vec((0..self.rows).map(|r| self.get(r, c)).collect(), self.d)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.cols, self.rows, self.d);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        debug_assert_eq!(self.cols, other.rows);
        let d = self.d;
        let mut out = FpMatrix::zeros(self.rows, other.cols, d);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + a * other.get(k, c) % d);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &FpVector) -> FpVector {
        debug_assert_eq!(self.cols, v.len());
        let d = self.d;
        let mut out = FpVector::zeros(self.rows, d);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = (acc + self.get(r, c) * v.get(c)) % d;
            }
            out.set(r, acc);
        }
        out
    }

    /// `v^T * self` as a vector of length `cols`.
    pub fn vec_mul(&self, v: &FpVector) -> FpVector {
        debug_assert_eq!(self.rows, v.len());
        let d = self.d;
        let mut out = FpVector::zeros(self.cols, d);
        for c in 0..self.cols {
            let mut acc = 0u64;
            for r in 0..self.rows {
                acc = (acc + self.get(r, c) * v.get(r)) % d;
            }
            out.set(c, acc);
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        debug_assert!(self.rows == other.rows && self.cols == other.cols);
        let d = self.d;
        let mut out = FpMatrix::zeros(self.rows, self.cols, d);
        for i in 0..self.data.len() {
            out.data[i] = (self.data[i] + d - other.data[i]) % d;
        }
        out
    }

    /// Copy `block` into `self` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// Delete one column, shifting the rest left.
    pub fn remove_col(&mut self, col: usize) {
        debug_assert!(col < self.cols);
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c != col {
                    data.push(self.get(r, c));
                }
            }
        }
        self.cols -= 1;
        self.data = data;
    }

    /// Delete one row and the same-numbered column (for symmetric minors).
    pub fn remove_row_col(&mut self, i: usize) {
        debug_assert!(i < self.rows && i < self.cols);
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in 0..self.rows {
            if r == i {
                continue;
            }
            for c in 0..self.cols {
                if c != i {
                    data.push(self.get(r, c));
                }
            }
        }
        self.rows -= 1;
        self.cols -= 1;
        self.data = data;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, f: u64) {
        let d = self.d;
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, v * f % d);
        }
    }

    /// row[dst] += f * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, f: u64) {
        let d = self.d;
        for c in 0..self.cols {
            let v = (self.get(dst, c) + f * self.get(src, c)) % d;
            self.set(dst, c, v);
        }
    }

    /// In-place reduced row echelon form over the first `active_cols`
    /// columns (trailing columns ride along as augmentation). Returns the
    /// pivot (row, col) list. Pivoting is leftmost-nonzero, deterministic.
    pub fn rref(&mut self, active_cols: usize) -> Vec<(usize, usize)> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..active_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = Fp::from_u64(self.get(r, c), self.d).inv().value();
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.d - self.get(i, c);
                    self.add_scaled_row(i, r, f);
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref(self.cols).len()
    }

    /// Basis of the right nullspace, returned as a `cols x nullity` matrix.
    pub fn nullspace(&self) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.rref(self.cols);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = FpMatrix::zeros(self.cols, free_cols.len(), self.d);
        for (bi, &fc) in free_cols.iter().enumerate() {
            basis.set(fc, bi, 1);
            for &(pr, pc) in &pivots {
                let v = m.get(pr, fc);
                if v != 0 {
                    basis.set(pc, bi, self.d - v);
                }
            }
        }
        basis
    }

    /// One solution of `self * x = rhs`, if any.
    pub fn solve(&self, rhs: &FpVector) -> Option<FpVector> {
        debug_assert_eq!(self.rows, rhs.len());
        let mut aug = FpMatrix::zeros(self.rows, self.cols + 1, self.d);
        aug.set_block(0, 0, self);
        for r in 0..self.rows {
            aug.set(r, self.cols, rhs.get(r));
        }
        let pivots = aug.rref(self.cols);
        // Inconsistent if some row reduces to (0 .. 0 | nonzero).
        for r in 0..self.rows {
            if aug.get(r, self.cols) != 0 && (0..self.cols).all(|c| aug.get(r, c) == 0) {
                return None;
            }
        }
        let mut x = FpVector::zeros(self.cols, self.d);
        for &(pr, pc) in &pivots {
            x.set(pc, aug.get(pr, self.cols));
        }
        Some(x)
    }

    /// Left inverse `R` with `R * self = I` (requires full column rank).
    pub fn left_inverse(&self) -> FpMatrix {
        let k = self.cols;
        // Solve self^T * X = I_k column by column on one augmented tableau.
        let t = self.transpose();
        let mut aug = FpMatrix::zeros(k, self.rows + k, self.d);
        aug.set_block(0, 0, &t);
        for i in 0..k {
            aug.set(i, self.rows + i, 1);
        }
        let pivots = aug.rref(self.rows);
        assert_eq!(pivots.len(), k, "left_inverse: matrix lacks full column rank");
        let mut x = FpMatrix::zeros(self.rows, k, self.d);
        for &(pr, pc) in &pivots {
            for i in 0..k {
                x.set(pc, i, aug.get(pr, self.rows + i));
            }
        }
        // R = X^T satisfies R * self = (self^T X)^T = I.
        x.transpose()
    }
}
