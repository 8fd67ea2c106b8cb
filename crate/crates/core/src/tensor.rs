//! Dense tensors over GF(p) in "matrix form": a function on a product of index
//! ranges, stored row-major with the last axis fastest. Indices are 0-based here.

use std::collections::BTreeSet;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::FieldMatrix;

/// A dense array of any order ≥ 1. Cotensors (the order d−1 factors of slice
/// terms) and contraction results live here; [`Tensor`] adds the order ≥ 2 rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseArray {
    field: PrimeField,
    shape: Vec<usize>,
    data: Vec<u32>,
}

impl DenseArray {
    pub fn new(field: PrimeField, shape: Vec<usize>, data: Vec<u32>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::OrderTooSmall(0, 1));
        }
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: data.len(),
            });
        }
        for &x in &data {
            field.check(x as u64)?;
        }
        Ok(Self { field, shape, data })
    }

    pub(crate) fn from_raw(field: PrimeField, shape: Vec<usize>, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), shape.iter().product::<usize>());
        Self { field, shape, data }
    }

    pub fn zeros(field: PrimeField, shape: Vec<usize>) -> Self {
        assert!(!shape.is_empty(), "arrays have order at least 1");
        let len = shape.iter().product();
        Self {
            field,
            shape,
            data: vec![0; len],
        }
    }

    pub fn from_vector(field: PrimeField, v: Vec<u32>) -> Result<Self> {
        let n = v.len();
        Self::new(field, vec![n], v)
    }

    pub fn from_fn(field: PrimeField, shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> u32) -> Self {
        let mut a = Self::zeros(field, shape);
        let shape = a.shape.clone();
        for (pos, idx) in MultiIndex::new(&shape).enumerate() {
            a.data[pos] = f(&idx) % field.modulus();
        }
        a
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, index: &[usize]) -> u32 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: u32) {
        let o = self.offset(index);
        self.data[o] = value % self.field.modulus();
    }

    pub fn indices(&self) -> MultiIndex {
        MultiIndex::new(&self.shape)
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.order() {
            return Err(Error::AxisOutOfRange {
                axis,
                order: self.order(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &DenseArray) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.modulus(), other.field.modulus()));
        }
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(())
    }

    /// (outer, axis, inner) sizes of the row-major layout around `axis`.
    fn split_at_axis(&self, axis: usize) -> (usize, usize, usize) {
        let outer = self.shape[..axis].iter().product();
        let inner = self.shape[axis + 1..].iter().product();
        (outer, self.shape[axis], inner)
    }

    /// Replaces axis `axis` (size n) by an axis of size `m.rows()`:
    /// `out[.., i, ..] = Σ_j m[i][j] · self[.., j, ..]`.
    pub fn contract_with_matrix(&self, axis: usize, m: &FieldMatrix) -> Result<DenseArray> {
        self.check_axis(axis)?;
        if m.cols() != self.shape[axis] {
            return Err(Error::LengthMismatch {
                expected: self.shape[axis],
                found: m.cols(),
            });
        }
        let f = self.field;
        let p = f.modulus() as u64;
        let (outer, n, inner) = self.split_at_axis(axis);
        let rows = m.rows();
        let mut shape = self.shape.clone();
        shape[axis] = rows;
        let mut acc = vec![0u64; outer * rows * inner];
        for o in 0..outer {
            for j in 0..n {
                let src = &self.data[(o * n + j) * inner..(o * n + j + 1) * inner];
                if src.iter().all(|&x| x == 0) {
                    continue;
                }
                for i in 0..rows {
                    let c = m.get(i, j) as u64;
                    if c == 0 {
                        continue;
                    }
                    let dst = &mut acc[(o * rows + i) * inner..(o * rows + i + 1) * inner];
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d = (*d + c * s as u64) % p;
                    }
                }
            }
        }
        Ok(DenseArray::from_raw(
            f,
            shape,
            acc.into_iter().map(|x| x as u32).collect(),
        ))
    }

    /// `Σ_{x_axis} h(x_axis) · self(x)`, dropping `axis`. Requires order ≥ 2.
    pub fn contract_axis(&self, h: &[u32], axis: usize) -> Result<DenseArray> {
        self.check_axis(axis)?;
        if self.order() < 2 {
            return Err(Error::OrderTooSmall(self.order(), 2));
        }
        if h.len() != self.shape[axis] {
            return Err(Error::LengthMismatch {
                expected: self.shape[axis],
                found: h.len(),
            });
        }
        let row = FieldMatrix::from_raw(self.field, 1, h.len(), h.to_vec());
        let c = self.contract_with_matrix(axis, &row)?;
        let mut shape = self.shape.clone();
        shape.remove(axis);
        Ok(DenseArray::from_raw(self.field, shape, c.data))
    }

    /// Rows indexed by `x_axis`, columns by the remaining indices in row-major order.
    pub fn flatten(&self, axis: usize) -> Result<FieldMatrix> {
        self.check_axis(axis)?;
        let (outer, n, inner) = self.split_at_axis(axis);
        let cols = outer * inner;
        let mut data = vec![0u32; n * cols];
        for o in 0..outer {
            for j in 0..n {
                for k in 0..inner {
                    data[j * cols + o * inner + k] = self.data[(o * n + j) * inner + k];
                }
            }
        }
        Ok(FieldMatrix::from_raw(self.field, n, cols, data))
    }

    /// The array `u(x_axis) · self(x̄_axis)` of order one higher.
    pub fn insert_axis(&self, axis: usize, u: &[u32]) -> Result<DenseArray> {
        if axis > self.order() {
            return Err(Error::AxisOutOfRange {
                axis,
                order: self.order() + 1,
            });
        }
        let f = self.field;
        let outer: usize = self.shape[..axis].iter().product();
        let inner: usize = self.shape[axis..].iter().product();
        let n = u.len();
        let mut shape = self.shape.clone();
        shape.insert(axis, n);
        let mut data = Vec::with_capacity(outer * n * inner);
        for o in 0..outer {
            let src = &self.data[o * inner..(o + 1) * inner];
            for &c in u {
                data.extend(src.iter().map(|&s| f.mul(c, s)));
            }
        }
        Ok(DenseArray::from_raw(f, shape, data))
    }

    pub fn add(&self, other: &DenseArray) -> Result<DenseArray> {
        self.check_compatible(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(DenseArray::from_raw(f, self.shape.clone(), data))
    }

    pub fn sub(&self, other: &DenseArray) -> Result<DenseArray> {
        self.check_compatible(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(DenseArray::from_raw(f, self.shape.clone(), data))
    }

    pub fn scale(&self, c: u32) -> DenseArray {
        let f = self.field;
        let c = c % f.modulus();
        DenseArray::from_raw(f, self.shape.clone(), self.data.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Reorders axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<DenseArray> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&a| a >= d || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::ShapeMismatch(format!("{perm:?} is not a permutation of {d} axes")));
        }
        let shape: Vec<usize> = perm.iter().map(|&a| self.shape[a]).collect();
        let mut src_idx = vec![0usize; d];
        let out = DenseArray::from_fn(self.field, shape, |idx| {
            for (k, &a) in perm.iter().enumerate() {
                src_idx[a] = idx[k];
            }
            self.get(&src_idx)
        });
        Ok(out)
    }

    /// Relabels the indices of one axis: `out(.., perm[x], ..) = self(.., x, ..)`.
    pub fn permute_indices(&self, axis: usize, perm: &[usize]) -> Result<DenseArray> {
        self.check_axis(axis)?;
        let n = self.shape[axis];
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&a| a >= n || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::ShapeMismatch(format!("{perm:?} is not a permutation of {n} indices")));
        }
        let mut out = DenseArray::zeros(self.field, self.shape.clone());
        let mut dst = vec![0usize; self.order()];
        for (pos, idx) in self.indices().enumerate() {
            dst.copy_from_slice(&idx);
            dst[axis] = perm[idx[axis]];
            let o = out.offset(&dst);
            out.data[o] = self.data[pos];
        }
        Ok(out)
    }
}

/// Row-major iterator over all multi-indices of a shape.
#[derive(Clone, Debug)]
pub struct MultiIndex {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(shape: &[usize]) -> Self {
        let next = if shape.contains(&0) {
            None
        } else {
            Some(vec![0; shape.len()])
        };
        Self {
            shape: shape.to_vec(),
            next,
        }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut k = nxt.len();
        while k > 0 {
            k -= 1;
            nxt[k] += 1;
            if nxt[k] < self.shape[k] {
                self.next = Some(nxt);
                return Some(cur);
            }
            nxt[k] = 0;
        }
        Some(cur)
    }
}

/// A d-tensor, d ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor(DenseArray);

impl Deref for Tensor {
    type Target = DenseArray;

    fn deref(&self) -> &DenseArray {
        &self.0
    }
}

impl TryFrom<DenseArray> for Tensor {
    type Error = Error;

    fn try_from(a: DenseArray) -> Result<Tensor> {
        if a.order() < 2 {
            return Err(Error::OrderTooSmall(a.order(), 2));
        }
        Ok(Tensor(a))
    }
}

impl From<Tensor> for DenseArray {
    fn from(t: Tensor) -> DenseArray {
        t.0
    }
}

impl Tensor {
    pub fn new(field: PrimeField, shape: Vec<usize>, data: Vec<u32>) -> Result<Self> {
        Tensor::try_from(DenseArray::new(field, shape, data)?)
    }

    pub fn zeros(field: PrimeField, shape: Vec<usize>) -> Result<Self> {
        if shape.len() < 2 {
            return Err(Error::OrderTooSmall(shape.len(), 2));
        }
        Ok(Tensor(DenseArray::zeros(field, shape)))
    }

    pub fn from_fn(field: PrimeField, shape: Vec<usize>, f: impl FnMut(&[usize]) -> u32) -> Result<Self> {
        if shape.len() < 2 {
            return Err(Error::OrderTooSmall(shape.len(), 2));
        }
        Ok(Tensor(DenseArray::from_fn(field, shape, f)))
    }

    pub fn as_array(&self) -> &DenseArray {
        &self.0
    }

    pub fn into_array(self) -> DenseArray {
        self.0
    }

    pub fn set(&mut self, index: &[usize], value: u32) {
        self.0.set(index, value);
    }

    /// The 3×3×3 Levi-Civita symbol: 1 on even permutations, p−1 on odd ones.
    pub fn levi_civita(field: PrimeField) -> Tensor {
        let one = 1 % field.modulus();
        let minus = field.neg(one);
        Tensor::from_fn(field, vec![3, 3, 3], |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            if x == y || y == z || x == z {
                0
            } else if (y + 3 - x) % 3 == 1 {
                one
            } else {
                minus
            }
        })
        .expect("order 3")
    }

    /// Order-`order` tensor of side `values.len()` with `values` on the diagonal.
    pub fn diagonal(field: PrimeField, order: usize, values: &[u32]) -> Result<Tensor> {
        let n = values.len();
        let mut t = Tensor::zeros(field, vec![n; order])?;
        for (i, &v) in values.iter().enumerate() {
            field.check(v as u64)?;
            t.set(&vec![i; order], v);
        }
        Ok(t)
    }

    pub fn direct_sum(&self, other: &Tensor) -> Result<(Tensor, BlockStructure)> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().modulus(), other.field().modulus()));
        }
        if self.order() != other.order() {
            return Err(Error::ShapeMismatch(format!(
                "orders {} and {} differ",
                self.order(),
                other.order()
            )));
        }
        let shape: Vec<usize> = self.shape().iter().zip(other.shape()).map(|(a, b)| a + b).collect();
        let mut out = Tensor::zeros(self.field(), shape)?;
        for (pos, idx) in self.indices().enumerate() {
            let o = out.offset(&idx);
            out.0.data[o] = self.data()[pos];
        }
        for (pos, idx) in other.indices().enumerate() {
            let shifted: Vec<usize> = idx.iter().zip(self.shape()).map(|(i, n)| i + n).collect();
            let o = out.offset(&shifted);
            out.0.data[o] = other.data()[pos];
        }
        let blocks = BlockStructure::new(
            self.shape()
                .iter()
                .zip(other.shape())
                .map(|(&a, &b)| vec![a, b])
                .collect(),
        )?;
        Ok((out, blocks))
    }

    /// Nonzero positions, and whether no two of them are componentwise comparable.
    pub fn support_and_antichain(&self) -> (Vec<Vec<usize>>, bool) {
        let support: Vec<Vec<usize>> = self
            .indices()
            .zip(self.data())
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect();
        let mut antichain = true;
        'outer: for (a, x) in support.iter().enumerate() {
            for y in &support[a + 1..] {
                let le = x.iter().zip(y).all(|(p, q)| p <= q);
                let ge = x.iter().zip(y).all(|(p, q)| p >= q);
                if le || ge {
                    antichain = false;
                    break 'outer;
                }
            }
        }
        (support, antichain)
    }

    pub fn permute_indices(&self, axis: usize, perm: &[usize]) -> Result<Tensor> {
        Ok(Tensor(self.0.permute_indices(axis, perm)?))
    }

    pub fn permute_axes(&self, perm: &[usize]) -> Result<Tensor> {
        Ok(Tensor(self.0.permute_axes(perm)?))
    }

    pub fn scale(&self, c: u32) -> Tensor {
        Tensor(self.0.scale(c))
    }

    /// Appends `extra[i]` zero slabs at the end of each axis.
    pub fn pad_zeros(&self, extra: &[usize]) -> Result<Tensor> {
        if extra.len() != self.order() {
            return Err(Error::ShapeMismatch("padding length must equal the order".into()));
        }
        let shape: Vec<usize> = self.shape().iter().zip(extra).map(|(a, b)| a + b).collect();
        let mut out = Tensor::zeros(self.field(), shape)?;
        for (pos, idx) in self.indices().enumerate() {
            let o = out.offset(&idx);
            out.0.data[o] = self.data()[pos];
        }
        Ok(out)
    }
}

/// Per-axis partition of each index range into `k` consecutive blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<Vec<usize>>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<Vec<usize>>) -> Result<Self> {
        let k = sizes.first().map_or(0, |s| s.len());
        if k == 0 {
            return Err(Error::InvalidBlocks("need at least one block per axis".into()));
        }
        if sizes.iter().any(|s| s.len() != k) {
            return Err(Error::InvalidBlocks("every axis needs the same number of blocks".into()));
        }
        Ok(Self { sizes })
    }

    /// The same partition on each of `order` axes.
    pub fn uniform(order: usize, sizes: &[usize]) -> Result<Self> {
        Self::new(vec![sizes.to_vec(); order])
    }

    pub fn order(&self) -> usize {
        self.sizes.len()
    }

    pub fn blocks(&self) -> usize {
        self.sizes[0].len()
    }

    pub fn sizes(&self) -> &[Vec<usize>] {
        &self.sizes
    }

    pub fn axis_len(&self, axis: usize) -> usize {
        self.sizes[axis].iter().sum()
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.order()).map(|i| self.axis_len(i)).collect()
    }

    /// Index range of block `b` on `axis`.
    pub fn range(&self, axis: usize, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[axis][..b].iter().sum();
        start..start + self.sizes[axis][b]
    }

    pub fn check_shape(&self, shape: &[usize]) -> Result<()> {
        if shape != self.shape().as_slice() {
            return Err(Error::InvalidBlocks(format!(
                "blocks cover shape {:?}, tensor has {:?}",
                self.shape(),
                shape
            )));
        }
        Ok(())
    }

    /// Every block index α ∈ [k]^d in row-major order.
    pub fn block_indices(&self) -> MultiIndex {
        MultiIndex::new(&vec![self.blocks(); self.order()])
    }

    fn check_alpha(&self, alpha: &[usize]) -> Result<()> {
        if alpha.len() != self.order() || alpha.iter().any(|&a| a >= self.blocks()) {
            return Err(Error::InvalidBlocks(format!("block index {alpha:?} out of range")));
        }
        Ok(())
    }

    /// Two blocks per axis: blocks `0..k-1` merged, then block `k-1`.
    pub fn fold_last(&self) -> Result<BlockStructure> {
        let k = self.blocks();
        if k < 2 {
            return Err(Error::InvalidBlocks("folding needs at least two blocks".into()));
        }
        BlockStructure::new(
            self.sizes
                .iter()
                .map(|s| vec![s[..k - 1].iter().sum(), s[k - 1]])
                .collect(),
        )
    }

    /// The structure restricted to the first `k-1` blocks.
    pub fn drop_last(&self) -> Result<BlockStructure> {
        let k = self.blocks();
        if k < 2 {
            return Err(Error::InvalidBlocks("cannot drop the only block".into()));
        }
        BlockStructure::new(self.sizes.iter().map(|s| s[..k - 1].to_vec()).collect())
    }
}

/// The sub-array `T^α` on blocks `alpha` (0-based).
pub fn block_component(t: &Tensor, blocks: &BlockStructure, alpha: &[usize]) -> Result<Tensor> {
    blocks.check_shape(t.shape())?;
    blocks.check_alpha(alpha)?;
    let starts: Vec<usize> = alpha.iter().enumerate().map(|(i, &a)| blocks.range(i, a).start).collect();
    let shape: Vec<usize> = alpha.iter().enumerate().map(|(i, &a)| blocks.sizes[i][a]).collect();
    let mut src = vec![0usize; t.order()];
    Tensor::from_fn(t.field(), shape, |idx| {
        for k in 0..idx.len() {
            src[k] = starts[k] + idx[k];
        }
        t.get(&src)
    })
}

/// Places `component` at block `alpha` of an otherwise zero tensor.
pub fn embed_component(component: &Tensor, blocks: &BlockStructure, alpha: &[usize]) -> Result<Tensor> {
    blocks.check_alpha(alpha)?;
    let expect: Vec<usize> = alpha.iter().enumerate().map(|(i, &a)| blocks.sizes[i][a]).collect();
    if component.shape() != expect.as_slice() {
        return Err(Error::ShapeMismatch(format!(
            "component {:?} does not fit block {:?}",
            component.shape(),
            expect
        )));
    }
    let mut out = Tensor::zeros(component.field(), blocks.shape())?;
    let starts: Vec<usize> = alpha.iter().enumerate().map(|(i, &a)| blocks.range(i, a).start).collect();
    let mut dst = vec![0usize; out.order()];
    for (pos, idx) in component.indices().enumerate() {
        for k in 0..idx.len() {
            dst[k] = starts[k] + idx[k];
        }
        out.set(&dst, component.data()[pos]);
    }
    Ok(out)
}

/// Block indices whose component is nonzero.
pub fn nonzero_blocks(t: &Tensor, blocks: &BlockStructure) -> Result<Vec<Vec<usize>>> {
    blocks.check_shape(t.shape())?;
    let mut out = BTreeSet::new();
    for (idx, &v) in t.indices().zip(t.data()) {
        if v == 0 {
            continue;
        }
        let alpha: Vec<usize> = idx
            .iter()
            .enumerate()
            .map(|(axis, &x)| {
                (0..blocks.blocks())
                    .find(|&b| blocks.range(axis, b).contains(&x))
                    .expect("index inside some block")
            })
            .collect();
        out.insert(alpha);
    }
    Ok(out.into_iter().collect())
}

/// True iff every nonzero block component has a nondecreasing block index.
pub fn is_block_upper_triangular(t: &Tensor, blocks: &BlockStructure) -> Result<bool> {
    Ok(nonzero_blocks(t, blocks)?
        .iter()
        .all(|a| a.windows(2).all(|w| w[0] <= w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn order_one_is_rejected() {
        assert!(matches!(Tensor::new(gf(2), vec![3], vec![0; 3]), Err(Error::OrderTooSmall(1, 2))));
        assert!(DenseArray::new(gf(2), vec![3], vec![0; 3]).is_ok());
    }

    #[test]
    fn levi_civita_contraction_e1() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let m = eps.contract_axis(&[1, 0, 0], 0).unwrap();
        assert_eq!(m.shape(), &[3, 3]);
        let mut expect = vec![0; 9];
        expect[3 + 2] = 1;
        expect[2 * 3 + 1] = 2;
        assert_eq!(m.data(), expect.as_slice());
    }

    #[test]
    fn levi_civita_contractions_are_antisymmetric() {
        let f = gf(5);
        let eps = Tensor::levi_civita(f);
        for h in [[1, 2, 3], [0, 0, 4], [1, 1, 1]] {
            let m = eps.contract_axis(&h, 0).unwrap();
            for y in 0..3 {
                for z in 0..3 {
                    assert_eq!(m.get(&[y, z]), f.neg(m.get(&[z, y])));
                }
            }
            assert!(m.flatten(0).unwrap().rank() <= 2);
        }
    }

    #[test]
    fn contract_zero_and_bad_length() {
        let z = Tensor::zeros(gf(3), vec![2, 2, 2]).unwrap();
        assert!(z.contract_axis(&[1, 2], 1).unwrap().is_zero());
        assert!(matches!(z.contract_axis(&[1], 1), Err(Error::LengthMismatch { .. })));
        assert!(matches!(z.contract_axis(&[1, 1], 3), Err(Error::AxisOutOfRange { .. })));
        let m = Tensor::zeros(gf(3), vec![2, 3]).unwrap();
        assert_eq!(m.contract_axis(&[1, 1], 0).unwrap().order(), 1);
    }

    #[test]
    fn flatten_examples() {
        let eps = Tensor::levi_civita(gf(3));
        let fl = eps.flatten(0).unwrap();
        assert_eq!((fl.rows(), fl.cols()), (3, 9));
        assert_eq!(fl.rank(), 3);
        let z = Tensor::zeros(gf(2), vec![2, 3, 2]).unwrap();
        assert_eq!(z.flatten(1).unwrap().rank(), 0);
        let v = DenseArray::new(gf(5), vec![2, 2], vec![1, 2, 3, 4]).unwrap();
        let term = Tensor::try_from(v.insert_axis(1, &[3, 0, 1]).unwrap()).unwrap();
        assert_eq!(term.flatten(1).unwrap().rank(), 1);
    }

    #[test]
    fn direct_sum_examples() {
        let f = gf(2);
        let one = Tensor::new(f, vec![1, 1, 1], vec![1]).unwrap();
        let (s, b) = one.direct_sum(&one).unwrap();
        assert_eq!(s, Tensor::diagonal(f, 3, &[1, 1]).unwrap());
        assert_eq!(b.sizes(), &[vec![1, 1], vec![1, 1], vec![1, 1]]);

        let eps = Tensor::levi_civita(gf(3));
        let (s, b) = eps.direct_sum(&eps).unwrap();
        assert_eq!(s.shape(), &[6, 6, 6]);
        assert_eq!(block_component(&s, &b, &[0, 0, 0]).unwrap(), eps);
        assert_eq!(block_component(&s, &b, &[1, 1, 1]).unwrap(), eps);
        for alpha in b.block_indices() {
            if alpha.iter().any(|&a| a != alpha[0]) {
                assert!(block_component(&s, &b, &alpha).unwrap().is_zero());
            }
        }
        assert!(is_block_upper_triangular(&s, &b).unwrap());

        let empty = Tensor::zeros(gf(3), vec![0, 2, 0]).unwrap();
        let (s, _) = eps.direct_sum(&empty).unwrap();
        assert_eq!(s.shape(), &[3, 5, 3]);
        assert_eq!(s.support_and_antichain().0.len(), 6);

        let mismatched = Tensor::zeros(gf(5), vec![1, 1, 1]).unwrap();
        assert!(matches!(eps.direct_sum(&mismatched), Err(Error::FieldMismatch(3, 5))));
        let order2 = Tensor::zeros(gf(3), vec![1, 1]).unwrap();
        assert!(eps.direct_sum(&order2).is_err());
    }

    #[test]
    fn components_reconstruct() {
        let f = gf(5);
        let t = Tensor::from_fn(f, vec![4, 4, 4], |i| (i[0] * 7 + i[1] * 3 + i[2] * 11 + 1) as u32).unwrap();
        let b = BlockStructure::uniform(3, &[2, 2]).unwrap();
        let mut acc = Tensor::zeros(f, vec![4, 4, 4]).unwrap().into_array();
        for alpha in b.block_indices() {
            let c = block_component(&t, &b, &alpha).unwrap();
            acc = acc.add(&embed_component(&c, &b, &alpha).unwrap()).unwrap();
        }
        assert_eq!(&acc, t.as_array());
        assert!(block_component(&t, &b, &[0, 2, 0]).is_err());
    }

    #[test]
    fn antichain_examples() {
        let (s, a) = Tensor::levi_civita(gf(3)).support_and_antichain();
        assert_eq!(s.len(), 6);
        assert!(a);
        let (s, a) = Tensor::diagonal(gf(2), 3, &[1, 1]).unwrap().support_and_antichain();
        assert_eq!(s.len(), 2);
        assert!(!a);
        let (s, a) = Tensor::zeros(gf(2), vec![2, 2]).unwrap().support_and_antichain();
        assert!(s.is_empty() && a);
    }

    #[test]
    fn triangularity() {
        let f = gf(2);
        let b = BlockStructure::uniform(3, &[1, 1]).unwrap();
        let mut t = Tensor::zeros(f, vec![2, 2, 2]).unwrap();
        t.set(&[0, 1, 1], 1);
        assert!(is_block_upper_triangular(&t, &b).unwrap());
        t.set(&[1, 0, 0], 1);
        assert!(!is_block_upper_triangular(&t, &b).unwrap());
    }

    #[test]
    fn permute_roundtrip() {
        let f = gf(3);
        let t = Tensor::from_fn(f, vec![2, 3, 2], |i| (i[0] + 2 * i[1] + i[2]) as u32).unwrap();
        let p = t.permute_axes(&[2, 0, 1]).unwrap();
        assert_eq!(p.shape(), &[2, 2, 3]);
        assert_eq!(p.get(&[1, 0, 2]), t.get(&[0, 2, 1]));
        let q = t.permute_indices(1, &[2, 0, 1]).unwrap();
        assert_eq!(q.get(&[1, 2, 0]), t.get(&[1, 0, 0]));
    }
}
