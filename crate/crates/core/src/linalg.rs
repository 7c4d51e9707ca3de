//! Dense exact linear algebra over `F_p` with byte-packed storage.
//!
//! Everything downstream (kernel bases, structure-constant verification,
//! module spins, MeatAxe nullspaces) reduces to row operations over `F_p`,
//! so this module keeps one representation: row-major `u8` matrices with
//! Barrett-reduced axpy as the single hot loop. Subspaces are kept in
//! reduced row echelon form with first-nonzero pivoting, which makes
//! subspace equality a plain matrix comparison.

use crate::field::{Fp, PrimeField};

/// Barrett reducer for `x mod p` with `x < 2^32`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Barrett {
    p: u32,
    m: u64,
}

impl Barrett {
    pub(crate) fn new(p: u32) -> Self {
        Barrett {
            p,
            m: (1u64 << 32) / p as u64,
        }
    }

    #[inline(always)]
    pub(crate) fn reduce(self, x: u32) -> u8 {
        let q = ((x as u64 * self.m) >> 32) as u32;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r as u8
    }
}

/// `dst += c * src` over `F_p`, element-wise.
#[inline]
pub(crate) fn row_axpy(bar: Barrett, dst: &mut [u8], src: &[u8], c: u8) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    let c = c as u32;
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d = bar.reduce(*d as u32 + c * *s as u32);
    }
}

/// Dense matrix over `F_p`, row-major, entries stored as canonical residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Mat {
    pub fn zeros(field: &PrimeField, rows: usize, cols: usize) -> Self {
        Mat {
            p: field.p(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fp::ONE);
        }
        m
    }

    pub fn from_rows(field: &PrimeField, rows: Vec<Vec<u8>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(&r);
        }
        Mat {
            p: field.p(),
            rows: n,
            cols,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> Fp {
        Fp(self.data[i * self.cols + j] as u32)
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, v: Fp) {
        debug_assert!(v.0 < self.p);
        self.data[i * self.cols + j] = v.0 as u8;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u8] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let bar = Barrett::new(self.p);
        let mut out = self.clone();
        row_axpy(bar, &mut out.data, &other.data, 1);
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let bar = Barrett::new(self.p);
        let mut out = self.clone();
        row_axpy(bar, &mut out.data, &other.data, (self.p - 1) as u8);
        out
    }

    pub fn scale(&self, c: Fp) -> Mat {
        let bar = Barrett::new(self.p);
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = bar.reduce(*v as u32 * c.0);
        }
        out
    }

    /// Matrix product, row-axpy formulation (exact, cache-friendly).
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let bar = Barrett::new(self.p);
        let mut out = Mat {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let c = self.data[i * self.cols + k];
                if c != 0 {
                    row_axpy(bar, dst, other.row(k), c);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let field = PrimeField::new(self.p as u64).unwrap();
        let mut acc = Mat::identity(&field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn matvec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let bar = Barrett::new(self.p);
        let mut out = vec![0u8; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            let row = self.row(i);
            for (a, b) in row.iter().zip(v.iter()) {
                acc += *a as u64 * *b as u64;
            }
            out[i] = bar.reduce((acc % self.p as u64) as u32);
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let field = PrimeField::new(self.p as u64).unwrap();
        let bar = Barrett::new(self.p);
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * self.cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = field.inv(Fp(self.data[r * self.cols + c] as u32)).unwrap();
            if inv != Fp::ONE {
                for j in c..self.cols {
                    let v = self.data[r * self.cols + j] as u32;
                    self.data[r * self.cols + j] = bar.reduce(v * inv.0);
                }
            }
            for i in 0..self.rows {
                if i != r {
                    let f = self.data[i * self.cols + c];
                    if f != 0 {
                        let neg = (self.p - f as u32) as u8;
                        let (head, tail) = self.data.split_at_mut(r.max(i) * self.cols);
                        let (src, dst) = if r < i {
                            (
                                &head[r * self.cols..r * self.cols + self.cols],
                                &mut tail[..self.cols],
                            )
                        } else {
                            (
                                &tail[..self.cols],
                                &mut head[i * self.cols..i * self.cols + self.cols],
                            )
                        };
                        row_axpy(bar, dst, src, neg);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace `{v : Av = 0}`, rows of the result.
    pub fn nullspace(&self) -> Mat {
        let field = PrimeField::new(self.p as u64).unwrap();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Mat::zeros(&field, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Fp::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                if !v.is_zero() {
                    out.set(k, pc, field.neg(v));
                }
            }
        }
        out
    }

    /// Solves `x A = b` for a row vector `x` (i.e. expresses `b` in the row
    /// space of `A`); returns `None` when `b` is not in the row span.
    pub fn solve_row(&self, b: &[u8]) -> Option<Vec<u8>> {
        self.clone().into_solver().solve(b)
    }

    /// Builds a reusable solver for repeated "express `b` in the rows of
    /// `A`" queries; the elimination runs once.
    pub fn into_solver(self) -> RowSolver {
        let field = PrimeField::new(self.p as u64).unwrap();
        let rows = self.rows;
        let cols = self.cols;
        // Augment with an identity tail to track coordinates.
        let mut aug = Mat::zeros(&field, rows, cols + rows);
        for i in 0..rows {
            aug.row_mut(i)[..cols].copy_from_slice(self.row(i));
            aug.set(i, cols + i, Fp::ONE);
        }
        let bar = Barrett::new(self.p);
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| aug.get(i, c).0 != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..aug.cols {
                    let tmp = aug.get(r, j);
                    aug.set(r, j, aug.get(pr, j));
                    aug.set(pr, j, tmp);
                }
            }
            let inv = field.inv(aug.get(r, c)).unwrap();
            for j in 0..aug.cols {
                aug.set(r, j, field.mul(aug.get(r, j), inv));
            }
            for i in 0..rows {
                if i != r && !aug.get(i, c).is_zero() {
                    let f = field.neg(aug.get(i, c));
                    let src: Vec<u8> = aug.row(r).to_vec();
                    row_axpy(bar, aug.row_mut(i), &src, f.0 as u8);
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        RowSolver {
            p: self.p,
            rows,
            cols,
            aug,
            pivots,
        }
    }
}

/// Reusable solver produced by [`Mat::into_solver`].
#[derive(Debug, Clone)]
pub struct RowSolver {
    p: u32,
    rows: usize,
    cols: usize,
    aug: Mat,
    pivots: Vec<(usize, usize)>,
}

impl RowSolver {
    /// Coordinates `x` with `x A = b`, or `None` if `b` is outside the
    /// row span.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.cols);
        let bar = Barrett::new(self.p);
        let mut residual = b.to_vec();
        let mut coords = vec![0u8; self.rows];
        for &(row, col) in &self.pivots {
            let v = residual[col];
            if v != 0 {
                let neg = (self.p - v as u32) as u8;
                let src: Vec<u8> = self.aug.row(row)[..self.cols].to_vec();
                row_axpy(bar, &mut residual, &src, neg);
                let tail: Vec<u8> = self.aug.row(row)[self.cols..].to_vec();
                row_axpy(bar, &mut coords, &tail, v);
            }
        }
        if residual.iter().all(|&v| v == 0) {
            Some(coords)
        } else {
            None
        }
    }
}

/// A subspace of `F_p^n` maintained in canonical reduced row echelon form
/// with first-nonzero pivoting.
///
/// Supports incremental insertion (spins, ideal closures) and membership
/// tests; two `RowSpace`s are equal as subspaces iff their bases compare
/// equal element-wise.
#[derive(Debug, Clone)]
pub struct RowSpace {
    field: PrimeField,
    bar: Barrett,
    ambient: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>, // pivot column of each row, strictly increasing order not required internally
}

impl RowSpace {
    pub fn new(field: &PrimeField, ambient: usize) -> Self {
        RowSpace {
            field: *field,
            bar: Barrett::new(field.p()),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` against the basis in place; the result is the canonical
    /// residual (zero iff `v` is in the span).
    pub fn reduce(&self, v: &mut Vec<u8>) {
        assert_eq!(v.len(), self.ambient);
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[pc];
            if c != 0 {
                let neg = (self.field.p() - c as u32) as u8;
                row_axpy(self.bar, v, row, neg);
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns `true` if the span grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(Fp(w[pc] as u32)).unwrap();
        if inv != Fp::ONE {
            for x in w.iter_mut() {
                *x = self.bar.reduce(*x as u32 * inv.0);
            }
        }
        // Back-substitute to keep the basis fully reduced.
        for (row, _) in self.rows.iter_mut().zip(self.pivots.iter()) {
            let c = row[pc];
            if c != 0 {
                let neg = (self.field.p() - c as u32) as u8;
                row_axpy(self.bar, row, &w, neg);
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    /// Canonical basis, sorted by pivot column.
    pub fn basis(&self) -> Vec<Vec<u8>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// Coordinates of `v` in the (pivot-sorted) basis, if `v` is in the span.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<Fp>> {
        let basis = self.basis();
        let pivots = self.pivot_cols();
        let mut w = v.to_vec();
        let mut coords = vec![Fp::ZERO; basis.len()];
        for (k, (row, &pc)) in basis.iter().zip(pivots.iter()).enumerate() {
            let c = w[pc];
            if c != 0 {
                coords[k] = Fp(c as u32);
                let neg = (self.field.p() - c as u32) as u8;
                row_axpy(self.bar, &mut w, row, neg);
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn same_space(&self, other: &RowSpace) -> bool {
        self.ambient == other.ambient && self.basis() == other.basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let field = f5();
        let mut m = Mat::from_rows(
            &field,
            vec![vec![1, 2, 3], vec![2, 4, 1], vec![0, 0, 1]],
            3,
        );
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_is_kernel() {
        let field = f5();
        let m = Mat::from_rows(&field, vec![vec![1, 2, 3], vec![0, 1, 4]], 3);
        let ns = m.nullspace();
        assert_eq!(ns.nrows(), 1);
        for k in 0..ns.nrows() {
            let v: Vec<u8> = ns.row(k).to_vec();
            assert!(m.matvec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn mul_matches_matvec() {
        let field = f5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = Mat::from_rows(
                &field,
                (0..4)
                    .map(|_| (0..6).map(|_| rng.gen_range(0..5)).collect())
                    .collect(),
                6,
            );
            let b = Mat::from_rows(
                &field,
                (0..6)
                    .map(|_| (0..3).map(|_| rng.gen_range(0..5)).collect())
                    .collect(),
                3,
            );
            let c = a.mul(&b);
            for j in 0..3 {
                let col: Vec<u8> = (0..6).map(|k| b.get(k, j).0 as u8).collect();
                let want = a.matvec(&col);
                let got: Vec<u8> = (0..4).map(|i| c.get(i, j).0 as u8).collect();
                assert_eq!(want, got);
            }
        }
    }

    #[test]
    fn rowspace_canonical_and_membership() {
        let field = f5();
        let mut s = RowSpace::new(&field, 4);
        assert!(s.insert(&[0, 2, 1, 0]));
        assert!(s.insert(&[0, 2, 1, 1]));
        assert!(!s.insert(&[0, 0, 0, 4])); // dependent on the first two
        assert!(s.contains(&[0, 4, 2, 3]));
        assert!(!s.contains(&[1, 0, 0, 0]));
        // Canonical basis is order-independent.
        let mut t = RowSpace::new(&field, 4);
        t.insert(&[0, 0, 0, 3]);
        t.insert(&[0, 1, 3, 2]);
        assert!(s.same_space(&t));
    }

    #[test]
    fn solve_row_expresses_member() {
        let field = f5();
        let a = Mat::from_rows(&field, vec![vec![1, 2, 0], vec![0, 1, 1]], 3);
        let b = vec![2u8, 0, 1]; // 2*r0 + (p-1... ) check: 2*(1,2,0) + 1*(0,1,1) = (2,5,1) = (2,0,1)
        let x = a.solve_row(&b).unwrap();
        assert_eq!(x, vec![2, 1]);
        assert!(a.solve_row(&[0, 0, 3]).is_none());
    }

    #[test]
    fn barrett_exhaustive_small() {
        for p in [5u32, 7, 251] {
            let bar = Barrett::new(p);
            for x in 0..100_000u32 {
                assert_eq!(bar.reduce(x) as u32, x % p);
            }
        }
    }
}
