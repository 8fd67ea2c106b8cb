//! Alternate-proof machinery for order 3: rebasing slice terms onto a new
//! spanning set, and the triangular normal form obtained from the commuting
//! axis projections `P_i T = Σ_j a_ij ⊗ (a*_ij · T)`.

use crate::decomposition::{SliceDecomposition, SliceTerm};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{complete_basis, echelonize, Direction, FieldMatrix, Subspace};
use crate::tensor::{DenseArray, Tensor};

/// Solves `Σ_j x_j cols[j] = rhs`; free unknowns are set to zero.
fn solve_combination(field: PrimeField, cols: &[Vec<u32>], rhs: &[u32]) -> Option<Vec<u32>> {
    let n = rhs.len();
    let k = cols.len();
    let mut aug = FieldMatrix::zeros(field, n, k + 1);
    for (j, c) in cols.iter().enumerate() {
        for (r, &x) in c.iter().enumerate() {
            aug.set(r, j, x);
        }
    }
    for (r, &x) in rhs.iter().enumerate() {
        aug.set(r, k, x);
    }
    let e = echelonize(&aug, Direction::Forward);
    let mut x = vec![0u32; k];
    for (row, &pivot) in e.pivots.iter().enumerate() {
        if pivot == k {
            return None;
        }
        x[pivot] = e.matrix.get(row, k);
    }
    Some(x)
}

/// Rewrites `Σ a_i ⊗ b_i` as `Σ a_new_j ⊗ b_new_j`.
pub fn rebase_terms(field: PrimeField, a: &[Vec<u32>], b: &[DenseArray], a_new: &[Vec<u32>]) -> Result<Vec<DenseArray>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let Some(shape) = b.first().map(|x| x.shape().to_vec()) else {
        return Ok(Vec::new());
    };
    let mut out = vec![DenseArray::zeros(field, shape.clone()); a_new.len()];
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        if bi.shape() != shape.as_slice() {
            return Err(Error::ShapeMismatch("cotensors differ in shape".into()));
        }
        let theta = solve_combination(field, a_new, ai).ok_or(Error::SpanContainment(i))?;
        for (j, &c) in theta.iter().enumerate() {
            if c != 0 {
                out[j] = out[j].add(&bi.scale(c))?;
            }
        }
    }
    Ok(out)
}

/// Dual functionals for linearly independent `a`: column `l` of the inverse of
/// the completed basis of `span(a)`. Requires `a` in echelon form.
fn dual_family(field: PrimeField, n: usize, a: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    let s = Subspace::span_rows(field, n, a)?;
    debug_assert_eq!(s.dim(), a.len());
    let inv = complete_basis(&s).inverse().expect("completed basis is invertible");
    Ok((0..a.len()).map(|l| inv.column(l)).collect())
}

fn projection_matrix(field: PrimeField, n: usize, a: &[Vec<u32>], a_duals: &[Vec<u32>]) -> Result<FieldMatrix> {
    if a.len() != a_duals.len() {
        return Err(Error::Biorthogonality);
    }
    for v in a.iter().chain(a_duals) {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    for (j, aj) in a.iter().enumerate() {
        for (l, dl) in a_duals.iter().enumerate() {
            if field.dot(aj, dl) != u32::from(j == l) {
                return Err(Error::Biorthogonality);
            }
        }
    }
    let mut p = FieldMatrix::zeros(field, n, n);
    for (aj, dj) in a.iter().zip(a_duals) {
        for (r, &x) in aj.iter().enumerate() {
            for (c, &y) in dj.iter().enumerate() {
                p.set(r, c, field.mul_add(p.get(r, c), x, y));
            }
        }
    }
    Ok(p)
}

/// `P_i T = Σ_j a_j ⊗ (a*_j · T)` along `axis`.
pub fn axis_projection(t: &Tensor, axis: usize, a: &[Vec<u32>], a_duals: &[Vec<u32>]) -> Result<Tensor> {
    if axis >= t.order() {
        return Err(Error::AxisOutOfRange {
            axis,
            order: t.order(),
        });
    }
    let p = projection_matrix(t.field(), t.shape()[axis], a, a_duals)?;
    Tensor::try_from(t.contract_with_matrix(axis, &p)?)
}

/// `Q_i T = T − P_i T`.
pub fn axis_complement(t: &Tensor, axis: usize, a: &[Vec<u32>], a_duals: &[Vec<u32>]) -> Result<Tensor> {
    let pt = axis_projection(t, axis, a, a_duals)?;
    Tensor::try_from(t.sub(&pt)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub s: usize,
    pub t: usize,
    /// `a*_{s,j} · b'_{t,j'} = 0` for every `j`, `j'`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedDecomposition {
    pub decomposition: SliceDecomposition,
    /// Per axis, the functionals dual to that axis's u-vectors.
    pub duals: Vec<Vec<Vec<u32>>>,
    pub ledger: Vec<LedgerEntry>,
}

impl NormalizedDecomposition {
    pub fn ledger_complete(&self) -> bool {
        let d = self.decomposition.order();
        self.ledger.len() == d * (d - 1) / 2 && self.ledger.iter().all(|e| e.verified)
    }
}

/// Triangular normal form of an order-3 decomposition.
///
/// The u-vectors of each axis are replaced by an echelon basis of their span,
/// and the cotensors are recomputed as `b'_ij = a*_ij · (Q_{i-1}…Q_1 T)`, so
/// that `T = P_1 T + P_2 Q_1 T + P_3 Q_2 Q_1 T`. Dependent u-vectors shrink the
/// term count of their axis to the rank of the span.
pub fn triangular_normalize(dec: &SliceDecomposition) -> Result<NormalizedDecomposition> {
    if dec.order() != 3 {
        return Err(Error::ShapeMismatch(format!("order 3 required, got {}", dec.order())));
    }
    let f = dec.field();
    let target = dec.evaluate()?;

    let mut bases = Vec::with_capacity(3);
    let mut duals = Vec::with_capacity(3);
    for axis in 0..3 {
        let n = dec.shape()[axis];
        let (us, vs) = dec.axis_terms(axis);
        let span = Subspace::span(&FieldMatrix::from_rows(f, n, &us)?);
        let a = span.basis().row_vecs();
        // the span always contains the old vectors, so this cannot fail
        rebase_terms(f, &us, &vs, &a)?;
        duals.push(dual_family(f, n, &a)?);
        bases.push(a);
    }

    let mut remainder = target.clone();
    let mut terms = Vec::new();
    for axis in 0..3 {
        for (aj, dj) in bases[axis].iter().zip(&duals[axis]) {
            terms.push(SliceTerm::new(axis, aj.clone(), remainder.contract_axis(dj, axis)?));
        }
        remainder = axis_complement(&remainder, axis, &bases[axis], &duals[axis])?;
    }
    debug_assert!(remainder.is_zero());
    let decomposition = SliceDecomposition::new(f, dec.shape().to_vec(), terms)?;
    if decomposition.evaluate()? != target {
        return Err(Error::SpanContainment(0));
    }

    let mut ledger = Vec::new();
    for (s, ds) in duals.iter().enumerate() {
        for t in s + 1..3 {
            let (_, bt) = decomposition.axis_terms(t);
            // axis s < t keeps its position in a cotensor with axis t removed
            let verified = bt.iter().all(|b| {
                ds.iter()
                    .all(|d| b.contract_axis(d, s).map(|x| x.is_zero()).unwrap_or(false))
            });
            ledger.push(LedgerEntry { s, t, verified });
        }
    }
    Ok(NormalizedDecomposition {
        decomposition,
        duals,
        ledger,
    })
}
