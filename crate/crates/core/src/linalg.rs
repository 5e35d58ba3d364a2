//! Dense exact linear algebra over F_p.
//!
//! Row reduction pivots on the first nonzero entry of the leftmost remaining
//! column, so every basis this module returns is reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{is_zero, Prime};

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    p: Prime,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of [`FpMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix { rows, cols, data: vec![0; rows * cols], p }
    }

    pub fn identity(p: Prime, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.get();
        }
        m
    }

    /// Build from rows of signed integers, reducing mod p.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> FpMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = FpMatrix::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = p.reduce(v);
            }
        }
        m
    }

    /// Build from row vectors already reduced mod p.
    pub fn from_row_vectors(p: Prime, cols: usize, rows: &[Vec<u32>]) -> FpMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        FpMatrix { rows: rows.len(), cols, data, p }
    }

    /// Build from column vectors already reduced mod p.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
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

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let idx = r * self.cols + c;
        self.data[idx] = self.p.add(self.data[idx], v);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert_eq!(self.p, other.p, "mixed moduli");
        let p = self.p.get() as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &a) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = a as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length differs");
        let p = self.p.get() as u64;
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut acc = 0u64;
                for (&a, &b) in row.iter().zip(v) {
                    acc = (acc + a as u64 * b as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.add(a, b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.sub(a, b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, a: u32) -> FpMatrix {
        let data = self.data.iter().map(|&v| self.p.mul(a, v)).collect();
        FpMatrix { data, ..*self }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: u32, other: &FpMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.p.axpy(&mut self.data, a, &other.data);
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Stack matrices with equal column counts vertically.
    pub fn vstack(p: Prime, cols: usize, blocks: &[FpMatrix]) -> FpMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column counts differ");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        FpMatrix { rows, cols, data, p }
    }

    /// Copy `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    /// Add `a * block` into `self` at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, a: u32, block: &FpMatrix) {
        if a == 0 {
            return;
        }
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if v != 0 {
                    self.add_at(r0 + r, c0 + c, self.p.mul(a, v));
                }
            }
        }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let pu = p.get() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if pr != rank {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, rank * cols + k);
                }
            }
            let inv = p.inv(self.data[rank * cols + c]).expect("pivot is nonzero");
            for k in c..cols {
                let idx = rank * cols + k;
                self.data[idx] = p.mul(self.data[idx], inv);
            }
            let (before, rest) = self.data.split_at_mut(rank * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f != 0 {
                    let nf = pu - f as u64;
                    for k in c..cols {
                        let b = prow[k];
                        if b != 0 {
                            row[k] = ((row[k] as u64 + nf * b as u64) % pu) as u32;
                        }
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut vectors = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.p.neg(matrix.get(r, f));
            }
            vectors.push(v);
        }
        Subspace::span(self.p, self.cols, &vectors)
    }

    /// Span of the columns.
    pub fn column_space(&self) -> Subspace {
        Subspace::span(self.p, self.rows, &self.columns())
    }

    /// A solution of `self * x = b` with all free coordinates zero, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length differs");
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.data[r * (self.cols + 1) + self.cols] = b[r];
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// A subspace of F_p^d stored by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    p: Prime,
}

impl Subspace {
    pub fn span(p: Prime, ambient_dim: usize, vectors: &[Vec<u32>]) -> Subspace {
        let m = FpMatrix::from_row_vectors(p, ambient_dim, vectors);
        let Rref { matrix, rank, pivots } = m.rref();
        let basis = (0..rank).map(|r| matrix.row(r).to_vec()).collect();
        Subspace { ambient_dim, basis, pivots, p }
    }

    pub fn zero(p: Prime, ambient_dim: usize) -> Subspace {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new(), p }
    }

    pub fn full(p: Prime, ambient_dim: usize) -> Subspace {
        let id = FpMatrix::identity(p, ambient_dim);
        Subspace::span(p, ambient_dim, &id.row_vectors())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the echelon basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                self.p.axpy(&mut v, self.p.neg(f), b);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.p, self.ambient_dim, &vs)
    }
}

/// `dim ker(outgoing) - rank(incoming)` for a composable pair with zero composite.
pub fn quotient_dim(incoming: &FpMatrix, outgoing: &FpMatrix) -> Result<usize> {
    check_complex(incoming, outgoing)?;
    let kernel = outgoing.cols() - outgoing.rank();
    Ok(kernel - incoming.rank())
}

fn check_complex(incoming: &FpMatrix, outgoing: &FpMatrix) -> Result<()> {
    if outgoing.cols() != incoming.rows() {
        return Err(Error::DimensionMismatch { expected: outgoing.cols(), found: incoming.rows() });
    }
    if !outgoing.mul(incoming).is_zero() {
        return Err(Error::NotAComplex);
    }
    Ok(())
}

/// Cohomology of `incoming` then `outgoing`: the cycle space, the boundary space,
/// and representatives of a basis of the quotient, each reduced modulo the
/// boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub cycles: Subspace,
    pub boundaries: Subspace,
    pub representatives: Vec<Vec<u32>>,
}

impl Homology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of a cycle in the representative basis.
    pub fn coordinates(&self, z: &[u32]) -> Option<Vec<u32>> {
        let p = self.cycles.p;
        let d = self.cycles.ambient_dim;
        let mut cols = self.representatives.clone();
        cols.extend(self.boundaries.basis().iter().cloned());
        let m = FpMatrix::from_columns(p, d, &cols);
        m.solve(z).map(|x| x[..self.representatives.len()].to_vec())
    }
}

pub fn homology(incoming: &FpMatrix, outgoing: &FpMatrix) -> Result<Homology> {
    check_complex(incoming, outgoing)?;
    let cycles = outgoing.nullspace();
    let boundaries = incoming.column_space();
    let p = outgoing.modulus();
    let mut acc = boundaries.clone();
    let mut representatives = Vec::new();
    for z in cycles.basis() {
        let r = acc.reduce(z);
        if !is_zero(&r) {
            let r = boundaries.reduce(z);
            representatives.push(r.clone());
            acc = Subspace::span(p, cycles.ambient_dim(), &[acc.basis().to_vec(), vec![r]].concat());
        }
    }
    Ok(Homology { cycles, boundaries, representatives })
}
