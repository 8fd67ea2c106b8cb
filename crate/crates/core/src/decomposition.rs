use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::tensor::{DenseArray, Tensor};

/// One slice-rank-1 term `u(x_axis) · v(x̄_axis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTerm {
    pub axis: usize,
    pub u: Vec<u32>,
    pub v: DenseArray,
}

impl SliceTerm {
    pub fn new(axis: usize, u: Vec<u32>, v: DenseArray) -> Self {
        Self { axis, u, v }
    }

    /// Shape of the tensor this term lives in.
    pub fn target_shape(&self) -> Vec<usize> {
        let mut s = self.v.shape().to_vec();
        s.insert(self.axis.min(s.len()), self.u.len());
        s
    }

    pub fn evaluate(&self) -> Result<DenseArray> {
        self.v.insert_axis(self.axis, &self.u)
    }
}

/// A sum of slice terms; witnesses slice rank ≤ `len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    field: PrimeField,
    shape: Vec<usize>,
    terms: Vec<SliceTerm>,
}

impl SliceDecomposition {
    pub fn new(field: PrimeField, shape: Vec<usize>, terms: Vec<SliceTerm>) -> Result<Self> {
        if shape.len() < 2 {
            return Err(Error::OrderTooSmall(shape.len(), 2));
        }
        for t in &terms {
            if t.v.field() != field {
                return Err(Error::FieldMismatch(field.modulus(), t.v.field().modulus()));
            }
            if t.axis >= shape.len() {
                return Err(Error::AxisOutOfRange {
                    axis: t.axis,
                    order: shape.len(),
                });
            }
            if t.v.order() + 1 != shape.len() || t.target_shape() != shape {
                return Err(Error::ShapeMismatch(format!(
                    "term on axis {} has shape {:?}, decomposition has {:?}",
                    t.axis,
                    t.target_shape(),
                    shape
                )));
            }
            for &x in &t.u {
                field.check(x as u64)?;
            }
        }
        Ok(Self { field, shape, terms })
    }

    pub fn empty(field: PrimeField, shape: Vec<usize>) -> Result<Self> {
        Self::new(field, shape, Vec::new())
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

    pub fn terms(&self) -> &[SliceTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<SliceTerm> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms on each axis.
    pub fn axis_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.order()];
        for t in &self.terms {
            c[t.axis] += 1;
        }
        c
    }

    /// Terms on one axis, as (u-vectors, cotensors).
    pub fn axis_terms(&self, axis: usize) -> (Vec<Vec<u32>>, Vec<DenseArray>) {
        self.terms
            .iter()
            .filter(|t| t.axis == axis)
            .map(|t| (t.u.clone(), t.v.clone()))
            .unzip()
    }

    /// The three-term decomposition of the Levi-Civita symbol given by the
    /// slices x = 0, y = 0 and z = 0, each holding two support points.
    pub fn levi_civita_cover(field: PrimeField) -> SliceDecomposition {
        let eps = Tensor::levi_civita(field);
        let e0 = vec![1, 0, 0];
        let terms = (0..3)
            .map(|axis| SliceTerm::new(axis, e0.clone(), eps.contract_axis(&e0, axis).expect("order 3")))
            .collect();
        SliceDecomposition::new(field, vec![3, 3, 3], terms).expect("compatible terms")
    }

    /// Pointwise sum of the terms.
    pub fn evaluate(&self) -> Result<Tensor> {
        let mut acc = DenseArray::zeros(self.field, self.shape.clone());
        for t in &self.terms {
            acc = acc.add(&t.evaluate()?)?;
        }
        Tensor::try_from(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn empty_decomposition_is_zero() {
        let d = SliceDecomposition::empty(gf(3), vec![2, 3, 2]).unwrap();
        let t = d.evaluate().unwrap();
        assert!(t.is_zero());
        assert_eq!(t.shape(), &[2, 3, 2]);
    }

    #[test]
    fn indicator_slab() {
        let f = gf(2);
        let v = DenseArray::new(f, vec![1, 1], vec![1]).unwrap();
        let d = SliceDecomposition::new(f, vec![2, 1, 1], vec![SliceTerm::new(0, vec![1, 0], v)]).unwrap();
        assert_eq!(d.evaluate().unwrap().data(), &[1, 0]);
    }

    #[test]
    fn levi_civita_from_three_slices() {
        let f = gf(5);
        let d = SliceDecomposition::levi_civita_cover(f);
        assert_eq!(d.axis_counts(), vec![1, 1, 1]);
        assert_eq!(d.evaluate().unwrap(), Tensor::levi_civita(f));
    }

    #[test]
    fn incompatible_terms_rejected() {
        let f = gf(3);
        let v = DenseArray::zeros(f, vec![2, 2]);
        assert!(SliceDecomposition::new(f, vec![3, 2, 2], vec![SliceTerm::new(0, vec![1, 0], v.clone())]).is_err());
        assert!(SliceDecomposition::new(f, vec![2, 2, 2], vec![SliceTerm::new(3, vec![1, 0], v.clone())]).is_err());
        let v5 = DenseArray::zeros(gf(5), vec![2, 2]);
        assert!(SliceDecomposition::new(f, vec![2, 2, 2], vec![SliceTerm::new(0, vec![1, 0], v5)]).is_err());
    }
}
