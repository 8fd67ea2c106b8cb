//! Exact slice rank of tensors over prime fields.
//!
//! Slice rank is computed by searching for dual-subspace certificates: subspaces
//! `U_i` of the coordinate duals such that the tensor pairs to zero with every
//! `u_1 ⊗ … ⊗ u_d`, `u_i ∈ U_i`. Such a tuple bounds the rank by `Σ codim U_i`,
//! and the minimum over all tuples is the rank. Over GF(p) the tuples form a
//! finite set, so small tensors can be ranked exactly.
//!
//! Beyond the search, the crate splits certificates of direct sums and block
//! triangular tensors into certificates of their diagonal blocks, and carries
//! the rebasing and projection machinery for triangular normalization of
//! order-3 decompositions.

pub mod decomposition;
pub mod error;
pub mod field;
pub mod generate;
pub mod json;
pub mod linalg;
pub mod normalize;
pub mod rank;
pub mod split;
pub mod tensor;

pub use decomposition::{SliceDecomposition, SliceTerm};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use linalg::{Direction, FieldMatrix, Subspace};
pub use rank::{DualCertificate, Method, RankOutcome, RankResult, SearchConfig};
pub use tensor::{BlockStructure, DenseArray, Tensor};
