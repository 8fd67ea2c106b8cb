//! Exact linear algebra over GF(p).
//!
//! Everything here works on dense row-major matrices of residues. Subspaces are
//! kept in reduced row echelon form, so two subspaces are equal exactly when
//! their stored bases are equal.

use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        for &x in &data {
            field.check(x as u64)?;
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

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
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, data)
    }

    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, j));
                }
            }
        }
        out
    }

    /// Columns in reverse order.
    pub fn mirror_columns(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols..(i + 1) * self.cols].reverse();
        }
        m
    }

    /// Restriction of every row to the column range `start..end`.
    pub fn restrict_columns(&self, start: usize, end: usize) -> Self {
        let cols = end - start;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[start..end]);
        }
        Self::from_raw(self.field, self.rows, cols, data)
    }

    pub fn rank(&self) -> usize {
        echelonize(self, Direction::Forward).rank
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let ech = echelonize(&aug, Direction::Forward);
        if n > 0 && (ech.pivots.len() < n || ech.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(ech.matrix.restrict_columns(n, 2 * n))
    }
}

/// Pivot order of an echelon form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// First nonzero column strictly increasing down the rows.
    Forward,
    /// Last nonzero column strictly decreasing down the rows.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Same shape as the input; nonzero rows first, then zero rows.
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Echelon {
    /// The nonzero rows only.
    pub fn nonzero_rows(&self) -> FieldMatrix {
        let cols = self.matrix.cols;
        FieldMatrix::from_raw(
            self.matrix.field,
            self.rank,
            cols,
            self.matrix.data[..self.rank * cols].to_vec(),
        )
    }
}

fn rref_in_place(m: &mut FieldMatrix) -> Vec<usize> {
    let f = m.field;
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        if pr != rank {
            for j in 0..cols {
                m.data.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(m.get(rank, col));
        for j in col..cols {
            let v = m.get(rank, j);
            m.set(rank, j, f.mul(v, inv));
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = m.get(r, col);
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for j in col..cols {
                let v = f.mul_add(m.get(r, j), neg, m.get(rank, j));
                m.set(r, j, v);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Reduced row echelon form in the requested pivot order.
///
/// The backward form is the forward form of the column-mirrored matrix,
/// mirrored back, so both orders share one elimination routine.
pub fn echelonize(m: &FieldMatrix, direction: Direction) -> Echelon {
    match direction {
        Direction::Forward => {
            let mut e = m.clone();
            let pivots = rref_in_place(&mut e);
            let rank = pivots.len();
            Echelon {
                matrix: e,
                pivots,
                rank,
            }
        }
        Direction::Backward => {
            let mut e = m.mirror_columns();
            let pivots = rref_in_place(&mut e);
            let rank = pivots.len();
            let cols = m.cols;
            Echelon {
                matrix: e.mirror_columns(),
                pivots: pivots.into_iter().map(|c| cols - 1 - c).collect(),
                rank,
            }
        }
    }
}

/// A subspace of GF(p)^n stored by its canonical (forward reduced echelon) basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    // dim × ambient, reduced echelon, no zero rows
    basis: Vec<u32>,
    dim: usize,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self {
            field,
            ambient,
            basis: Vec::new(),
            dim: 0,
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Self::from_echelon_rows(FieldMatrix::identity(field, ambient))
    }

    /// The span of the rows of `m`.
    pub fn span(m: &FieldMatrix) -> Self {
        let e = echelonize(m, Direction::Forward);
        Self::from_echelon_rows(e.nonzero_rows())
    }

    pub fn span_rows(field: PrimeField, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::span(&FieldMatrix::from_rows(field, ambient, rows)?))
    }

    /// Accepts `basis` only if it is already the canonical reduced echelon basis.
    pub fn from_canonical(basis: FieldMatrix) -> Result<Self> {
        let e = echelonize(&basis, Direction::Forward);
        if e.rank != basis.rows || e.matrix != basis {
            return Err(Error::NonCanonicalBasis);
        }
        Ok(Self::from_echelon_rows(basis))
    }

    pub(crate) fn from_echelon_rows(m: FieldMatrix) -> Self {
        Self {
            field: m.field,
            ambient: m.cols,
            dim: m.rows,
            basis: m.data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim
    }

    pub fn basis(&self) -> FieldMatrix {
        FieldMatrix::from_raw(self.field, self.dim, self.ambient, self.basis.clone())
    }

    pub fn basis_row(&self, i: usize) -> &[u32] {
        &self.basis[i * self.ambient..(i + 1) * self.ambient]
    }

    /// Pivot column of each canonical basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|i| {
                self.basis_row(i)
                    .iter()
                    .position(|&x| x != 0)
                    .expect("canonical rows are nonzero")
            })
            .collect()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = v.to_vec();
        for (i, &pc) in self.pivots().iter().enumerate() {
            let c = r[pc];
            if c != 0 {
                let neg = f.neg(c);
                for (x, &b) in r.iter_mut().zip(self.basis_row(i)) {
                    *x = f.mul_add(*x, neg, b);
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim).all(|i| other.contains(self.basis_row(i)))
    }

    /// Direct sum `self ⊕ other` inside GF(p)^(n1 + n2).
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        let n = self.ambient + other.ambient;
        let mut rows = Vec::with_capacity(self.dim + other.dim);
        for i in 0..self.dim {
            let mut r = self.basis_row(i).to_vec();
            r.resize(n, 0);
            rows.push(r);
        }
        for i in 0..other.dim {
            let mut r = vec![0; self.ambient];
            r.extend_from_slice(other.basis_row(i));
            rows.push(r);
        }
        Subspace::span(&FieldMatrix::from_rows(self.field, n, &rows).expect("valid rows"))
    }
}

/// `{x : m·x = 0}`.
pub fn kernel_basis(m: &FieldMatrix) -> Subspace {
    let f = m.field;
    let n = m.cols;
    let e = echelonize(m, Direction::Forward);
    let mut is_pivot = vec![false; n];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut rows = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (i, &pc) in e.pivots.iter().enumerate() {
            v[pc] = f.neg(e.matrix.get(i, free));
        }
        rows.push(v);
    }
    Subspace::span(&FieldMatrix::from_raw(f, rows.len(), n, rows.concat()))
}

/// Annihilator `{u : u·v = 0 for every row v}` in the dual space.
pub fn annihilator(vectors: &FieldMatrix) -> Subspace {
    kernel_basis(vectors)
}

/// An invertible n×n matrix whose first `dim(s)` rows are the canonical basis of
/// `s`, completed by standard basis vectors at the non-pivot positions.
pub fn complete_basis(s: &Subspace) -> FieldMatrix {
    let n = s.ambient;
    let mut is_pivot = vec![false; n];
    for p in s.pivots() {
        is_pivot[p] = true;
    }
    let mut data = s.basis.clone();
    for c in (0..n).filter(|&c| !is_pivot[c]) {
        let mut e = vec![0u32; n];
        e[c] = 1;
        data.extend(e);
    }
    FieldMatrix::from_raw(s.field, n, n, data)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FewZeroVector {
    pub vector: Vec<u32>,
    /// The constraints have full column rank, so only the zero vector solves them.
    pub degenerate: bool,
}

impl FewZeroVector {
    pub fn zero_count(&self) -> usize {
        self.vector.iter().filter(|&&x| x == 0).count()
    }
}

/// A vector in the kernel of `constraints` with at most `rank(constraints)` zero
/// coordinates: free coordinates are set to 1 and pivot coordinates solved for.
pub fn few_zero_kernel_vector(constraints: &FieldMatrix) -> FewZeroVector {
    let f = constraints.field;
    let n = constraints.cols;
    let e = echelonize(constraints, Direction::Forward);
    let mut h = vec![1u32; n];
    for &p in &e.pivots {
        h[p] = 0;
    }
    for (i, &pc) in e.pivots.iter().enumerate() {
        let mut acc = 0u32;
        for (c, &hc) in h.iter().enumerate() {
            if c != pc && hc != 0 {
                acc = f.mul_add(acc, e.matrix.get(i, c), hc);
            }
        }
        h[pc] = f.neg(acc);
    }
    FewZeroVector {
        vector: h,
        degenerate: e.rank == n,
    }
}

/// Row echelon basis that grows one vector at a time; used where the rank only
/// needs to be compared against a cap.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl IncrementalBasis {
    pub fn new(field: PrimeField, n: usize) -> Self {
        Self {
            field,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis and inserts the remainder; returns whether
    /// the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let neg = f.neg(c);
                for j in pc..self.n {
                    v[j] = f.mul_add(v[j], neg, row[j]);
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut().skip(pc) {
            *x = f.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn to_matrix(&self) -> FieldMatrix {
        FieldMatrix::from_raw(self.field, self.rows.len(), self.n, self.rows.concat())
    }
}

/// Increments `digits` base `p`, last digit fastest; `false` once it wraps.
pub(crate) fn advance_odometer(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Canonical enumeration of all `m`-dimensional subspaces of GF(p)^n.
///
/// Pivot column sets come in lexicographic order; within a pivot profile the
/// free entries (row-major) run as an odometer with the last entry fastest.
pub fn subspaces_of_dim(field: PrimeField, n: usize, m: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let p = field.modulus();
    let mut pivots: Vec<usize> = (0..m).collect();
    loop {
        // free positions: (row, col) with col > pivot[row] and col not a pivot
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !pivots.contains(&c) {
                    free.push(r * n + c);
                }
            }
        }
        let mut base = vec![0u32; m * n];
        for (r, &pc) in pivots.iter().enumerate() {
            base[r * n + pc] = 1;
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut b = base.clone();
            for (&pos, &d) in free.iter().zip(&digits) {
                b[pos] = d;
            }
            out.push(Subspace {
                field,
                ambient: n,
                basis: b,
                dim: m,
            });
            if !advance_odometer(&mut digits, p) {
                break;
            }
        }
        let Some(i) = (0..m).rev().find(|&i| pivots[i] < n - m + i) else {
            return out;
        };
        pivots[i] += 1;
        for j in i + 1..m {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[u32]]) -> FieldMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        FieldMatrix::from_rows(gf(p), cols, &rows).unwrap()
    }

    #[test]
    fn echelon_identity_and_equal_rows() {
        let id = FieldMatrix::identity(gf(2), 2);
        let e = echelonize(&id, Direction::Forward);
        assert_eq!(e.matrix, id);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rank, 2);

        let e = echelonize(&mat(2, &[&[1, 1], &[1, 1]]), Direction::Forward);
        assert_eq!(e.matrix, mat(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(e.rank, 1);
    }

    #[test]
    fn backward_echelon_last_pivots_decrease() {
        let e = echelonize(&mat(3, &[&[1, 1, 0], &[0, 1, 1]]), Direction::Backward);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivots, vec![2, 1]);
        // hand elimination from the last coordinate
        assert_eq!(e.matrix, mat(3, &[&[2, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn kernel_examples() {
        let z = FieldMatrix::zeros(gf(2), 2, 3);
        assert_eq!(kernel_basis(&z).dim(), 3);
        assert_eq!(kernel_basis(&FieldMatrix::identity(gf(5), 3)).dim(), 0);

        let k = kernel_basis(&mat(2, &[&[1, 1, 0]]));
        assert_eq!(k.dim(), 2);
        // enumerate all 8 vectors of GF(2)^3
        let members: Vec<Vec<u32>> = (0..8u32)
            .map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1])
            .filter(|v| k.contains(v))
            .collect();
        assert_eq!(members.len(), 4);
        assert!(k.contains(&[1, 1, 0]));
        assert!(k.contains(&[0, 0, 1]));
        assert!(!k.contains(&[1, 0, 0]));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(
            complete_basis(&Subspace::zero(gf(2), 2)),
            FieldMatrix::identity(gf(2), 2)
        );
        let s = Subspace::span_rows(gf(2), 2, &[vec![1, 1]]).unwrap();
        let c = complete_basis(&s);
        assert_eq!(c, mat(2, &[&[1, 1], &[0, 1]]));
        assert_eq!(c.rank(), 2);
        let full = Subspace::full(gf(3), 3);
        assert_eq!(complete_basis(&full), FieldMatrix::identity(gf(3), 3));
    }

    #[test]
    fn few_zero_examples() {
        let f = gf(5);
        // first r standard basis rows: zeros exactly on the first r coordinates
        let c = FieldMatrix::from_rows(f, 5, &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]]).unwrap();
        let h = few_zero_kernel_vector(&c);
        assert_eq!(h.vector, vec![0, 0, 1, 1, 1]);
        assert!(!h.degenerate);

        let none = FieldMatrix::zeros(f, 0, 4);
        assert_eq!(few_zero_kernel_vector(&none).vector, vec![1; 4]);

        let h = few_zero_kernel_vector(&mat(2, &[&[1, 1, 0]]));
        assert_eq!(h.vector, vec![1, 1, 1]);

        let h = few_zero_kernel_vector(&FieldMatrix::identity(f, 3));
        assert!(h.degenerate);
        assert_eq!(h.vector, vec![0, 0, 0]);
    }

    #[test]
    fn annihilator_examples() {
        let a = annihilator(&mat(3, &[&[1, 0, 0]]));
        assert_eq!(a.codim(), 1);
        assert_eq!(a, Subspace::span_rows(gf(3), 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap());

        let a = annihilator(&FieldMatrix::zeros(gf(3), 0, 3));
        assert_eq!(a, Subspace::full(gf(3), 3));

        let a = annihilator(&mat(2, &[&[1, 0, 0], &[1, 1, 0]]));
        assert_eq!(a.codim(), 2);
        assert_eq!(a, Subspace::span_rows(gf(2), 3, &[vec![0, 0, 1]]).unwrap());
    }

    #[test]
    fn canonical_basis_check() {
        let ok = mat(3, &[&[1, 0, 2], &[0, 1, 1]]);
        assert!(Subspace::from_canonical(ok).is_ok());
        let bad = mat(3, &[&[1, 1, 0], &[0, 1, 1]]);
        assert!(matches!(Subspace::from_canonical(bad), Err(Error::NonCanonicalBasis)));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(5, &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FieldMatrix::identity(gf(5), 3));
        assert!(mat(2, &[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for (p, n) in [(2u32, 4usize), (3, 3), (5, 2), (3, 4)] {
            let f = gf(p);
            for m in 0..=n {
                let list = subspaces_of_dim(f, n, m);
                assert_eq!(list.len() as u128, f.gaussian_binomial(n, m), "p={p} n={n} m={m}");
                let mut seen = std::collections::HashSet::new();
                for s in &list {
                    assert!(Subspace::from_canonical(s.basis()).is_ok());
                    assert!(seen.insert(s.clone()));
                }
            }
        }
    }
}
