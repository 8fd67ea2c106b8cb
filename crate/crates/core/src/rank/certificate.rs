use crate::decomposition::{SliceDecomposition, SliceTerm};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{annihilator, complete_basis, FieldMatrix, Subspace};
use crate::tensor::{DenseArray, Tensor};

/// Dual subspaces `U_i ⊂ (GF(p)^{n_i})*`, one per axis. The tensor is certified
/// to have slice rank at most `Σ codim U_i` when it pairs to zero with every
/// `u_1 ⊗ … ⊗ u_d`, `u_i ∈ U_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualCertificate {
    subspaces: Vec<Subspace>,
}

impl DualCertificate {
    pub fn new(subspaces: Vec<Subspace>) -> Result<Self> {
        if subspaces.len() < 2 {
            return Err(Error::OrderTooSmall(subspaces.len(), 2));
        }
        let f = subspaces[0].field();
        if let Some(s) = subspaces.iter().find(|s| s.field() != f) {
            return Err(Error::FieldMismatch(f.modulus(), s.field().modulus()));
        }
        Ok(Self { subspaces })
    }

    /// All `U_i` equal to the full dual space: bound 0.
    pub fn full(field: PrimeField, shape: &[usize]) -> Result<Self> {
        Self::new(shape.iter().map(|&n| Subspace::full(field, n)).collect())
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn field(&self) -> PrimeField {
        self.subspaces[0].field()
    }

    pub fn order(&self) -> usize {
        self.subspaces.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.subspaces.iter().map(Subspace::ambient).collect()
    }

    /// Per-axis codimensions `r_i`.
    pub fn codims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Subspace::codim).collect()
    }

    pub fn bound(&self) -> usize {
        self.codims().iter().sum()
    }

    /// Axis-wise direct sum of two certificates; certifies `T1 ⊕ T2` when the
    /// parts certify `T1` and `T2`.
    pub fn direct_sum(&self, other: &DualCertificate) -> Result<DualCertificate> {
        if self.order() != other.order() {
            return Err(Error::ShapeMismatch("certificate orders differ".into()));
        }
        DualCertificate::new(
            self.subspaces
                .iter()
                .zip(&other.subspaces)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        )
    }
}

fn check_shapes(t: &Tensor, c: &DualCertificate) -> Result<()> {
    if t.field() != c.field() {
        return Err(Error::FieldMismatch(t.field().modulus(), c.field().modulus()));
    }
    if t.shape() != c.shape().as_slice() {
        return Err(Error::ShapeMismatch(format!(
            "certificate ambient dims {:?}, tensor shape {:?}",
            c.shape(),
            t.shape()
        )));
    }
    Ok(())
}

/// Contracts every axis of `t` against the rows of `mats[i]`.
pub(crate) fn contract_all(t: &DenseArray, mats: &[FieldMatrix]) -> DenseArray {
    let mut k = t.clone();
    for (axis, m) in mats.iter().enumerate() {
        k = k.contract_with_matrix(axis, m).expect("shapes checked");
    }
    k
}

/// Checks `⟨T, u_1 ⊗ … ⊗ u_d⟩ = 0` over all tuples of basis rows, which by
/// multilinearity decides the whole tensor-product condition.
pub fn verify_certificate(t: &Tensor, c: &DualCertificate) -> Result<bool> {
    check_shapes(t, c)?;
    let bases: Vec<FieldMatrix> = c.subspaces.iter().map(Subspace::basis).collect();
    Ok(contract_all(t.as_array(), &bases).is_zero())
}

/// `U_i` = annihilator of the u-vectors of the axis-i terms.
pub fn certificate_from_decomposition(dec: &SliceDecomposition) -> Result<DualCertificate> {
    let f = dec.field();
    DualCertificate::new(
        (0..dec.order())
            .map(|axis| {
                let (us, _) = dec.axis_terms(axis);
                let m = FieldMatrix::from_rows(f, dec.shape()[axis], &us)?;
                Ok(annihilator(&m))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Expands `t` in the basis dual to completed bases of the `U_i` and groups the
/// surviving coefficients into exactly `Σ r_i` slice terms.
///
/// A coefficient λ(j) can be nonzero only when some `j_i` indexes a completion
/// vector (a direction of `U_i^⊥`); it goes to the lowest such axis.
pub fn decomposition_from_certificate(t: &Tensor, c: &DualCertificate) -> Result<SliceDecomposition> {
    if !verify_certificate(t, c)? {
        return Err(Error::CertificateRejected);
    }
    let f = t.field();
    let d = t.order();
    let dims: Vec<usize> = c.subspaces.iter().map(Subspace::dim).collect();
    let completed: Vec<FieldMatrix> = c.subspaces.iter().map(complete_basis).collect();
    // columns of the inverse form the primal basis dual to the completed rows
    let primal: Vec<FieldMatrix> = completed
        .iter()
        .map(|b| b.inverse().expect("completed basis is invertible"))
        .collect();
    let coeffs = contract_all(t.as_array(), &completed);

    let mut terms = Vec::with_capacity(c.bound());
    for axis in 0..d {
        let n = t.shape()[axis];
        for l in dims[axis]..n {
            let mut other_shape = t.shape().to_vec();
            other_shape.remove(axis);
            let mut grouped = DenseArray::zeros(f, other_shape);
            for (idx, &lambda) in coeffs.indices().zip(coeffs.data()) {
                if lambda == 0 || idx[axis] != l {
                    continue;
                }
                let owner = (0..d).find(|&i| idx[i] >= dims[i]).expect("certificate verified");
                if owner != axis {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(axis);
                grouped.set(&rest, lambda);
            }
            let mut v = grouped;
            for (k, other) in (0..d).filter(|&k| k != axis).enumerate() {
                v = v.contract_with_matrix(k, &primal[other])?;
            }
            terms.push(SliceTerm::new(axis, primal[axis].column(l), v));
        }
    }
    SliceDecomposition::new(f, t.shape().to_vec(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn ones_line(f: PrimeField) -> Subspace {
        Subspace::span_rows(f, 3, &[vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn full_duals_reject_nonzero() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let c = DualCertificate::full(f, &[3, 3, 3]).unwrap();
        assert_eq!(c.bound(), 0);
        assert!(!verify_certificate(&eps, &c).unwrap());
        let z = Tensor::zeros(f, vec![3, 3, 3]).unwrap();
        assert!(verify_certificate(&z, &c).unwrap());
    }

    #[test]
    fn all_ones_certificate_for_levi_civita() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let c = DualCertificate::new(vec![ones_line(f), ones_line(f), ones_line(f)]).unwrap();
        assert_eq!(c.bound(), 6);
        // Σ ε(x,y,z) over the single basis triple
        let total = eps.data().iter().fold(0, |a, &x| f.add(a, x));
        assert_eq!(total, 0);
        assert!(verify_certificate(&eps, &c).unwrap());

        let dec = decomposition_from_certificate(&eps, &c).unwrap();
        assert_eq!(dec.len(), 6);
        assert_eq!(dec.evaluate().unwrap(), eps);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let f = gf(2);
        let t = Tensor::zeros(f, vec![2, 2, 2]).unwrap();
        let c = DualCertificate::full(f, &[2, 2, 3]).unwrap();
        assert!(matches!(verify_certificate(&t, &c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn forward_direction_examples() {
        let f = gf(2);
        let empty = SliceDecomposition::empty(f, vec![2, 2, 2]).unwrap();
        let c = certificate_from_decomposition(&empty).unwrap();
        assert_eq!(c, DualCertificate::full(f, &[2, 2, 2]).unwrap());

        let v = DenseArray::new(f, vec![2, 2], vec![1, 0, 1, 1]).unwrap();
        let one = SliceDecomposition::new(f, vec![2, 2, 2], vec![SliceTerm::new(0, vec![1, 0], v)]).unwrap();
        let c = certificate_from_decomposition(&one).unwrap();
        assert_eq!(c.bound(), 1);
        assert_eq!(c.subspaces()[0], Subspace::span_rows(f, 2, &[vec![0, 1]]).unwrap());

        let f3 = gf(3);
        let cover = SliceDecomposition::levi_civita_cover(f3);
        let c = certificate_from_decomposition(&cover).unwrap();
        assert_eq!(c.bound(), 3);
        assert!(verify_certificate(&Tensor::levi_civita(f3), &c).unwrap());
    }

    #[test]
    fn reverse_direction_examples() {
        let f = gf(2);
        let z = Tensor::zeros(f, vec![2, 2, 2]).unwrap();
        let c = DualCertificate::full(f, &[2, 2, 2]).unwrap();
        assert!(decomposition_from_certificate(&z, &c).unwrap().is_empty());

        let diag = Tensor::diagonal(f, 3, &[1, 1]).unwrap();
        let c = DualCertificate::new(vec![
            Subspace::zero(f, 2),
            Subspace::full(f, 2),
            Subspace::full(f, 2),
        ])
        .unwrap();
        let dec = decomposition_from_certificate(&diag, &c).unwrap();
        assert_eq!(dec.axis_counts(), vec![2, 0, 0]);
        assert_eq!(dec.evaluate().unwrap(), diag);

        let bad = DualCertificate::full(f, &[2, 2, 2]).unwrap();
        assert!(matches!(decomposition_from_certificate(&diag, &bad), Err(Error::CertificateRejected)));
    }

    #[test]
    fn direct_sum_of_certificates() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let c = certificate_from_decomposition(&SliceDecomposition::levi_civita_cover(f)).unwrap();
        let (sum, _) = eps.direct_sum(&eps).unwrap();
        let cc = c.direct_sum(&c).unwrap();
        assert_eq!(cc.bound(), 6);
        assert!(verify_certificate(&sum, &cc).unwrap());
    }
}
