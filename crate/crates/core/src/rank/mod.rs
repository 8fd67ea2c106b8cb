//! Slice rank through dual-subspace certificates: verification, conversion
//! between certificates and decompositions, exhaustive minimum search, and the
//! slice-cover bound.

mod certificate;
mod cover;
mod search;

pub use certificate::{
    certificate_from_decomposition, decomposition_from_certificate, verify_certificate, DualCertificate,
};
pub use cover::{cover_decomposition, min_slice_cover, SliceCover};
pub use search::{
    compositions, cover_rank_result, dual_search, matrix_rank_result, search_space_size, slice_rank_exact,
    SearchConfig, DEFAULT_LIMIT,
};

use crate::decomposition::SliceDecomposition;

/// How a rank value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DualSearch,
    MatrixRank,
    Cover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub sigma: usize,
    /// Witnesses σ ≤ `sigma`; its bound equals `sigma`.
    pub certificate: DualCertificate,
    /// Exactly `sigma` terms evaluating to the tensor.
    pub decomposition: SliceDecomposition,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOutcome {
    Exact(RankResult),
    /// No certificate of bound ≤ `budget` exists.
    ExceedsBudget { budget: usize },
}

impl RankOutcome {
    pub fn exact(self) -> Option<RankResult> {
        match self {
            RankOutcome::Exact(r) => Some(r),
            RankOutcome::ExceedsBudget { .. } => None,
        }
    }
}
