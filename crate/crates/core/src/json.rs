//! JSON formats. Indices and axes are 1-based on the wire and 0-based in
//! memory. Tensors list only their nonzero entries, in row-major order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::decomposition::{SliceDecomposition, SliceTerm};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{FieldMatrix, Subspace};
use crate::normalize::NormalizedDecomposition;
use crate::rank::{DualCertificate, Method, RankResult};
use crate::split::{PivotOption, RankReport, SplitTrace, Status, TriangularReport, FoldCheck};
use crate::tensor::{DenseArray, Tensor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: Vec<usize>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub prime: u32,
    pub shape: Vec<usize>,
    pub entries: Vec<EntryJson>,
}

impl TensorJson {
    pub fn from_array(t: &DenseArray) -> Self {
        Self {
            prime: t.field().modulus(),
            shape: t.shape().to_vec(),
            entries: t
                .indices()
                .zip(t.data())
                .filter(|(_, &v)| v != 0)
                .map(|(idx, &v)| EntryJson {
                    index: idx.iter().map(|x| x + 1).collect(),
                    value: v as u64,
                })
                .collect(),
        }
    }

    /// Any order ≥ 1; cotensors of order-2 decompositions are vectors.
    pub fn to_array(&self) -> Result<DenseArray> {
        let field = PrimeField::new(self.prime)?;
        if self.shape.is_empty() {
            return Err(Error::OrderTooSmall(0, 1));
        }
        let mut a = DenseArray::zeros(field, self.shape.clone());
        let mut seen = HashSet::new();
        for e in &self.entries {
            if e.index.len() != self.shape.len()
                || e.index.iter().zip(&self.shape).any(|(&i, &n)| i == 0 || i > n)
            {
                return Err(Error::IndexOutOfRange(e.index.clone()));
            }
            if !seen.insert(e.index.clone()) {
                return Err(Error::DuplicateIndex(e.index.clone()));
            }
            let v = field.check(e.value)?;
            let idx: Vec<usize> = e.index.iter().map(|i| i - 1).collect();
            a.set(&idx, v);
        }
        Ok(a)
    }

    pub fn to_tensor(&self) -> Result<Tensor> {
        if self.shape.len() < 2 {
            return Err(Error::OrderTooSmall(self.shape.len(), 2));
        }
        Tensor::try_from(self.to_array()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub axis: usize,
    pub u: Vec<u64>,
    pub v: TensorJson,
}

pub fn decomposition_to_json(dec: &SliceDecomposition) -> Vec<TermJson> {
    dec.terms()
        .iter()
        .map(|t| TermJson {
            axis: t.axis + 1,
            u: t.u.iter().map(|&x| x as u64).collect(),
            v: TensorJson::from_array(&t.v),
        })
        .collect()
}

/// The field and shape come from the tensor the terms belong to, so that an
/// empty list is meaningful.
pub fn decomposition_from_json(terms: &[TermJson], field: PrimeField, shape: &[usize]) -> Result<SliceDecomposition> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.axis == 0 || t.axis > shape.len() {
            return Err(Error::AxisOutOfRange {
                axis: t.axis,
                order: shape.len(),
            });
        }
        let u = t.u.iter().map(|&x| field.check(x)).collect::<Result<Vec<_>>>()?;
        let v = t.v.to_array()?;
        if v.field() != field {
            return Err(Error::FieldMismatch(field.modulus(), v.field().modulus()));
        }
        out.push(SliceTerm::new(t.axis - 1, u, v));
    }
    SliceDecomposition::new(field, shape.to_vec(), out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient: usize,
    pub basis: Vec<Vec<u64>>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        Self {
            ambient: s.ambient(),
            basis: (0..s.dim())
                .map(|i| s.basis_row(i).iter().map(|&x| x as u64).collect())
                .collect(),
        }
    }

    /// Rejects bases that are not already in reduced echelon form.
    pub fn to_subspace(&self, field: PrimeField) -> Result<Subspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| {
                if r.len() != self.ambient {
                    return Err(Error::LengthMismatch {
                        expected: self.ambient,
                        found: r.len(),
                    });
                }
                r.iter().map(|&x| field.check(x)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_canonical(FieldMatrix::from_rows(field, self.ambient, &rows)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub bound: usize,
    pub subspaces: Vec<SubspaceJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &DualCertificate) -> Self {
        Self {
            bound: c.bound(),
            subspaces: c.subspaces().iter().map(SubspaceJson::from_subspace).collect(),
        }
    }

    pub fn to_certificate(&self, field: PrimeField) -> Result<DualCertificate> {
        let c = DualCertificate::new(
            self.subspaces
                .iter()
                .map(|s| s.to_subspace(field))
                .collect::<Result<Vec<_>>>()?,
        )?;
        if c.bound() != self.bound {
            return Err(Error::BoundMismatch {
                stated: self.bound,
                actual: c.bound(),
            });
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResultJson {
    pub sigma: usize,
    pub method: Method,
    pub certificate: CertificateJson,
    pub decomposition: Vec<TermJson>,
}

impl RankResultJson {
    pub fn from_result(r: &RankResult) -> Self {
        Self {
            sigma: r.sigma,
            method: r.method,
            certificate: CertificateJson::from_certificate(&r.certificate),
            decomposition: decomposition_to_json(&r.decomposition),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisSplitJson {
    pub option: PivotOption,
    /// Number of leading w-vectors that belong to block 1.
    pub threshold: usize,
    pub w_vectors: Vec<Vec<u64>>,
    pub block1: SubspaceJson,
    pub block2: SubspaceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTraceJson {
    pub axes: Vec<AxisSplitJson>,
    pub certificate_block1: CertificateJson,
    pub certificate_block2: CertificateJson,
}

impl SplitTraceJson {
    pub fn from_trace(t: &SplitTrace) -> Self {
        Self {
            axes: t
                .axes
                .iter()
                .map(|a| AxisSplitJson {
                    option: a.option,
                    threshold: a.threshold,
                    w_vectors: a
                        .w_vectors
                        .row_vecs()
                        .into_iter()
                        .map(|r| r.into_iter().map(u64::from).collect())
                        .collect(),
                    block1: SubspaceJson::from_subspace(&a.block1),
                    block2: SubspaceJson::from_subspace(&a.block2),
                })
                .collect(),
            certificate_block1: CertificateJson::from_certificate(&t.certificate_block1()),
            certificate_block2: CertificateJson::from_certificate(&t.certificate_block2()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReportJson {
    pub sigma_parts: Vec<usize>,
    pub sigma_sum: usize,
    pub sigma_total: usize,
    pub certificates: Vec<CertificateJson>,
    pub status: Status,
    pub split_verified: bool,
}

impl RankReportJson {
    pub fn from_report(r: &RankReport) -> Self {
        Self {
            sigma_parts: r.sigma_parts.clone(),
            sigma_sum: r.sigma_sum,
            sigma_total: r.sigma_total,
            certificates: r.certificates.iter().map(CertificateJson::from_certificate).collect(),
            status: r.status,
            split_verified: r.split_verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularReportJson {
    #[serde(flatten)]
    pub report: RankReportJson,
    pub folds: Vec<FoldCheck>,
}

impl TriangularReportJson {
    pub fn from_report(r: &TriangularReport) -> Self {
        Self {
            report: RankReportJson::from_report(&r.report),
            folds: r.folds.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntryJson {
    /// 1-based axes.
    pub s: usize,
    pub t: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedJson {
    pub decomposition: Vec<TermJson>,
    pub duals: Vec<Vec<Vec<u64>>>,
    pub ledger: Vec<LedgerEntryJson>,
    pub ledger_complete: bool,
}

impl NormalizedJson {
    pub fn from_normalized(n: &NormalizedDecomposition) -> Self {
        Self {
            decomposition: decomposition_to_json(&n.decomposition),
            duals: n
                .duals
                .iter()
                .map(|axis| axis.iter().map(|d| d.iter().map(|&x| x as u64).collect()).collect())
                .collect(),
            ledger: n
                .ledger
                .iter()
                .map(|e| LedgerEntryJson {
                    s: e.s + 1,
                    t: e.t + 1,
                    verified: e.verified,
                })
                .collect(),
            ledger_complete: n.ledger_complete(),
        }
    }
}

pub fn parse_tensor(s: &str) -> Result<Tensor> {
    serde_json::from_str::<TensorJson>(s)?.to_tensor()
}

pub fn parse_certificate(s: &str, field: PrimeField) -> Result<DualCertificate> {
    serde_json::from_str::<CertificateJson>(s)?.to_certificate(field)
}

pub fn parse_decomposition(s: &str, field: PrimeField, shape: &[usize]) -> Result<SliceDecomposition> {
    decomposition_from_json(&serde_json::from_str::<Vec<TermJson>>(s)?, field, shape)
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn tensor_to_string(t: &Tensor) -> String {
    to_string(&TensorJson::from_array(t))
}
