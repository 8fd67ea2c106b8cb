//! Seeded random instances for tests, demos and the CLI trial loops.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{SliceDecomposition, SliceTerm};
use crate::error::Result;
use crate::field::PrimeField;
use crate::linalg::FieldMatrix;
use crate::tensor::{BlockStructure, DenseArray, MultiIndex, Tensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut impl Rng, field: PrimeField, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..field.modulus())).collect()
}

pub fn random_array(rng: &mut impl Rng, field: PrimeField, shape: Vec<usize>) -> DenseArray {
    DenseArray::from_fn(field, shape, |_| rng.gen_range(0..field.modulus()))
}

/// Uniform entries.
pub fn random_tensor(rng: &mut impl Rng, field: PrimeField, shape: Vec<usize>) -> Result<Tensor> {
    Tensor::try_from(random_array(rng, field, shape))
}

/// Each entry nonzero with probability `density`, then uniform over nonzero residues.
pub fn random_sparse_tensor(rng: &mut impl Rng, field: PrimeField, shape: Vec<usize>, density: f64) -> Result<Tensor> {
    Tensor::from_fn(field, shape, |_| {
        if rng.gen_bool(density) {
            rng.gen_range(1..field.modulus())
        } else {
            0
        }
    })
}

pub fn random_matrix(rng: &mut impl Rng, field: PrimeField, rows: usize, cols: usize) -> FieldMatrix {
    FieldMatrix::from_raw(field, rows, cols, random_vector(rng, field, rows * cols))
}

/// Rejection-sampled invertible matrix.
pub fn random_invertible(rng: &mut impl Rng, field: PrimeField, n: usize) -> FieldMatrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// `k` vectors and their dual functionals: rows of a random invertible matrix
/// and the matching columns of its inverse.
pub fn random_biorthogonal(rng: &mut impl Rng, field: PrimeField, n: usize, k: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let c = random_invertible(rng, field, n);
    let inv = c.inverse().expect("invertible");
    ((0..k).map(|j| c.row(j).to_vec()).collect(), (0..k).map(|j| inv.column(j)).collect())
}

/// `counts[i]` random terms on axis `i`.
pub fn random_decomposition(
    rng: &mut impl Rng,
    field: PrimeField,
    shape: &[usize],
    counts: &[usize],
) -> Result<SliceDecomposition> {
    let mut terms = Vec::new();
    for (axis, &c) in counts.iter().enumerate() {
        let mut rest = shape.to_vec();
        rest.remove(axis);
        for _ in 0..c {
            let u = random_vector(rng, field, shape[axis]);
            terms.push(SliceTerm::new(axis, u, random_array(rng, field, rest.clone())));
        }
    }
    SliceDecomposition::new(field, shape.to_vec(), terms)
}

/// Random order-3 shape with sides in `1..=max_side`, and up to `max_terms`
/// terms spread over random axes.
pub fn random_small_decomposition(
    rng: &mut impl Rng,
    field: PrimeField,
    max_side: usize,
    max_terms: usize,
) -> Result<SliceDecomposition> {
    let shape: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=max_side)).collect();
    let mut counts = vec![0; 3];
    for _ in 0..rng.gen_range(0..=max_terms) {
        counts[rng.gen_range(0..3)] += 1;
    }
    random_decomposition(rng, field, &shape, &counts)
}

/// Random entries on the blocks accepted by `keep`, zero elsewhere.
pub fn random_block_supported(
    rng: &mut impl Rng,
    field: PrimeField,
    blocks: &BlockStructure,
    mut keep: impl FnMut(&[usize]) -> bool,
) -> Result<Tensor> {
    let mut t = Tensor::zeros(field, blocks.shape())?;
    for alpha in blocks.block_indices() {
        if !keep(&alpha) {
            continue;
        }
        let ranges: Vec<_> = (0..blocks.order()).map(|i| blocks.range(i, alpha[i])).collect();
        let sizes: Vec<usize> = ranges.iter().map(|r| r.len()).collect();
        for local in MultiIndex::new(&sizes) {
            let idx: Vec<usize> = local.iter().zip(&ranges).map(|(&x, r)| r.start + x).collect();
            t.set(&idx, rng.gen_range(0..field.modulus()));
        }
    }
    Ok(t)
}

/// Block upper triangular: nonzero only on nondecreasing block indices.
pub fn random_upper_triangular(rng: &mut impl Rng, field: PrimeField, blocks: &BlockStructure) -> Result<Tensor> {
    random_block_supported(rng, field, blocks, |a| a.windows(2).all(|w| w[0] <= w[1]))
}

/// Two blocks; nonzero only on the all-1 block and on blocks whose last index is 2.
pub fn random_one_sided(rng: &mut impl Rng, field: PrimeField, blocks: &BlockStructure) -> Result<Tensor> {
    random_block_supported(rng, field, blocks, |a| a.last() == Some(&1) || a.iter().all(|&x| x == 0))
}

/// Random block sizes in `0..=max_size` (the same number of blocks per axis).
pub fn random_blocks(rng: &mut impl Rng, order: usize, blocks: usize, max_size: usize) -> Result<BlockStructure> {
    BlockStructure::new(
        (0..order)
            .map(|_| (0..blocks).map(|_| rng.gen_range(0..=max_size)).collect())
            .collect(),
    )
}
