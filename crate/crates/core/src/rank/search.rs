//! Exhaustive minimum-certificate search over tuples of dual subspaces.
//!
//! Levels `r = 0, 1, 2, …` are tried in order; within a level, compositions
//! `(r_1, …, r_d)` run lexicographically. For each composition one axis, the
//! "free" axis, is not enumerated: once the other subspaces are fixed, the largest
//! admissible `U_free` is the annihilator of the contracted vectors, and its
//! codimension is a rank. The remaining axes are enumerated as an odometer over
//! the canonical subspace lists, first enumerated axis most significant.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::certificate::{decomposition_from_certificate, DualCertificate};
use super::cover::{cover_decomposition, min_slice_cover};
use super::{Method, RankOutcome, RankResult};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{annihilator, subspaces_of_dim, FieldMatrix, IncrementalBasis, Subspace};
use crate::tensor::{DenseArray, Tensor};

/// Default cap on the number of enumerated subspace tuples.
pub const DEFAULT_LIMIT: u128 = 10_000_000_000;

const PRUNE_SAMPLES: usize = 256;
const PRUNE_SEED: u64 = 0x51ce_5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Refuse tensors whose enumeration space exceeds this many tuples.
    pub limit: u128,
    /// Stop with [`RankOutcome::ExceedsBudget`] instead of searching past this rank.
    pub budget: Option<usize>,
    /// Start the search at the slice-cover value when the support is an antichain.
    pub oracle_assisted: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            limit: DEFAULT_LIMIT,
            budget: None,
            oracle_assisted: false,
        }
    }
}

impl SearchConfig {
    pub fn with_limit(mut self, limit: u128) -> Self {
        self.limit = limit;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }
}

/// Number of tuples the search may enumerate: the product of per-axis subspace
/// counts, leaving out the axis with the largest count.
pub fn search_space_size(field: PrimeField, shape: &[usize]) -> u128 {
    let counts: Vec<u128> = shape.iter().map(|&n| field.subspace_count(n)).collect();
    let skip = counts
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (*c, i))
        .map(|(i, _)| i);
    counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .fold(1u128, |acc, (_, &c)| acc.saturating_mul(c))
}

/// Exact slice rank. Order-2 tensors short-circuit to matrix rank.
pub fn slice_rank_exact(t: &Tensor, config: &SearchConfig) -> Result<RankOutcome> {
    if t.order() == 2 {
        let result = matrix_rank_result(t)?;
        return Ok(match config.budget {
            Some(b) if result.sigma > b => RankOutcome::ExceedsBudget { budget: b },
            _ => RankOutcome::Exact(result),
        });
    }
    dual_search(t, config)
}

/// Rank of an order-2 tensor as a matrix, with the certificate
/// `U_1 = {u : uᵀ M = 0}`, `U_2` full.
pub fn matrix_rank_result(t: &Tensor) -> Result<RankResult> {
    if t.order() != 2 {
        return Err(Error::ShapeMismatch(format!("matrix rank needs order 2, got {}", t.order())));
    }
    let m = t.flatten(0)?;
    let certificate = DualCertificate::new(vec![
        annihilator(&m.transpose()),
        Subspace::full(t.field(), t.shape()[1]),
    ])?;
    RankResult::from_certificate(t, certificate, Method::MatrixRank)
}

/// The search itself, without the order-2 short circuit.
pub fn dual_search(t: &Tensor, config: &SearchConfig) -> Result<RankOutcome> {
    let f = t.field();
    let shape = t.shape().to_vec();
    if t.is_zero() {
        let c = DualCertificate::full(f, &shape)?;
        return Ok(RankOutcome::Exact(RankResult::from_certificate(t, c, Method::DualSearch)?));
    }
    let required = search_space_size(f, &shape);
    if required > config.limit {
        return Err(Error::LimitExceeded {
            required,
            limit: config.limit,
        });
    }
    let mut start = 0;
    if config.oracle_assisted {
        let (_, antichain) = t.support_and_antichain();
        if antichain {
            start = min_slice_cover(t).count;
        }
    }
    let upper = *shape.iter().min().expect("order ≥ 2");
    let mut cache = SubspaceCache::new(f);
    for r in start..=upper {
        if let Some(b) = config.budget {
            if r > b {
                return Ok(RankOutcome::ExceedsBudget { budget: b });
            }
        }
        for comp in compositions(r, &shape) {
            if let Some(c) = search_composition(t, &comp, &mut cache) {
                debug_assert_eq!(c.bound(), r);
                return Ok(RankOutcome::Exact(RankResult::from_certificate(t, c, Method::DualSearch)?));
            }
        }
    }
    unreachable!("the all-zero subspace on a shortest axis always certifies")
}

/// The slice-cover value as a rank result; exact only for antichain support.
pub fn cover_rank_result(t: &Tensor) -> Result<RankResult> {
    let (_, antichain) = t.support_and_antichain();
    if !antichain {
        return Err(Error::CoverNotExact);
    }
    let cover = min_slice_cover(t);
    let dec = cover_decomposition(t, &cover)?;
    let certificate = super::certificate::certificate_from_decomposition(&dec)?;
    Ok(RankResult {
        sigma: cover.count,
        certificate,
        decomposition: dec,
        method: Method::Cover,
    })
}

impl RankResult {
    pub(crate) fn from_certificate(t: &Tensor, certificate: DualCertificate, method: Method) -> Result<Self> {
        let decomposition = decomposition_from_certificate(t, &certificate)?;
        Ok(Self {
            sigma: certificate.bound(),
            certificate,
            decomposition,
            method,
        })
    }
}

/// All `(r_1, …, r_d)` with `Σ r_i = r` and `r_i ≤ n_i`, lexicographically.
pub fn compositions(r: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn rec(rest: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if caps.len() == 1 {
            if rest <= caps[0] {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let tail: usize = caps[1..].iter().sum();
        for c in rest.saturating_sub(tail)..=rest.min(caps[0]) {
            cur.push(c);
            rec(rest - c, &caps[1..], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if caps.iter().sum::<usize>() >= r {
        rec(r, caps, &mut Vec::new(), &mut out);
    }
    out
}

struct SubspaceCache {
    field: PrimeField,
    lists: HashMap<(usize, usize), Arc<Vec<Subspace>>>,
}

impl SubspaceCache {
    fn new(field: PrimeField) -> Self {
        Self {
            field,
            lists: HashMap::new(),
        }
    }

    fn get(&mut self, n: usize, dim: usize) -> Arc<Vec<Subspace>> {
        let f = self.field;
        self.lists
            .entry((n, dim))
            .or_insert_with(|| Arc::new(subspaces_of_dim(f, n, dim)))
            .clone()
    }
}

struct Level {
    basis: Vec<FieldMatrix>,
}

struct Plan {
    field: PrimeField,
    levels: Vec<Level>,
    // codims of the enumerated axes, then of the free axis
    codims: Vec<usize>,
    free_codim: usize,
}

fn search_composition(t: &Tensor, comp: &[usize], cache: &mut SubspaceCache) -> Option<DualCertificate> {
    let f = t.field();
    let d = t.order();
    let shape = t.shape();
    let counts: Vec<u128> = (0..d).map(|i| f.gaussian_binomial(shape[i], shape[i] - comp[i])).collect();
    let free = (0..d).max_by_key(|&i| (counts[i], i)).expect("order ≥ 2");
    let enumerated: Vec<usize> = (0..d).filter(|&i| i != free).collect();

    let lists: Vec<Arc<Vec<Subspace>>> = enumerated
        .iter()
        .map(|&i| cache.get(shape[i], shape[i] - comp[i]))
        .collect();
    let plan = Plan {
        field: f,
        levels: lists
            .iter()
            .map(|l| Level {
                basis: l.iter().map(Subspace::basis).collect(),
            })
            .collect(),
        codims: enumerated.iter().map(|&i| comp[i]).collect(),
        free_codim: comp[free],
    };

    let mut perm = enumerated.clone();
    perm.push(free);
    let permuted = t.permute_axes(&perm).expect("valid permutation");
    let mut kshape = vec![1];
    kshape.extend_from_slice(permuted.shape());
    let k0 = DenseArray::from_raw(f, kshape, permuted.data().to_vec());

    let path = descend(&plan, 0, &k0, true)?;

    let mut subspaces: Vec<Option<Subspace>> = vec![None; d];
    let mut bases = Vec::with_capacity(enumerated.len());
    for ((&axis, list), &idx) in enumerated.iter().zip(&lists).zip(&path) {
        bases.push(list[idx].basis());
        subspaces[axis] = Some(list[idx].clone());
    }
    // contract everything but the free axis and read off the largest U_free
    let mut k = t.as_array().clone();
    for (&axis, b) in enumerated.iter().zip(&bases) {
        k = k.contract_with_matrix(axis, b).expect("shapes match");
    }
    let flat = k.flatten(free).expect("free axis in range");
    subspaces[free] = Some(annihilator(&flat.transpose()));
    let c = DualCertificate::new(subspaces.into_iter().map(|s| s.expect("filled")).collect()).ok()?;
    debug_assert!(super::certificate::verify_certificate(t, &c).unwrap_or(false));
    Some(c)
}

/// `k` has shape `[M, n_level, …, n_free]`.
fn descend(plan: &Plan, level: usize, k: &DenseArray, parallel: bool) -> Option<Vec<usize>> {
    let last = level + 1 == plan.levels.len();
    let options = &plan.levels[level].basis;
    if last {
        if !matrix_condition_possible(plan, k, plan.codims[level] + plan.free_codim) {
            return None;
        }
        let check = |idx: usize| leaf_accepts(plan, k, &options[idx]).then(|| vec![idx]);
        return if parallel {
            (0..options.len()).into_par_iter().find_map_first(check)
        } else {
            (0..options.len()).find_map(check)
        };
    }
    let step = |idx: usize| {
        let next = contract_level(k, &options[idx]);
        descend(plan, level + 1, &next, false).map(|mut rest| {
            rest.insert(0, idx);
            rest
        })
    };
    if parallel {
        (0..options.len()).into_par_iter().find_map_first(step)
    } else {
        (0..options.len()).find_map(step)
    }
}

/// `[M, n, rest…]` contracted on axis 1 by `basis` (m × n), reshaped to `[M·m, rest…]`.
fn contract_level(k: &DenseArray, basis: &FieldMatrix) -> DenseArray {
    let c = k.contract_with_matrix(1, basis).expect("level shapes match");
    let mut shape = c.shape().to_vec();
    let merged = shape[0] * shape[1];
    shape.splice(0..2, [merged]);
    DenseArray::from_raw(c.field(), shape, c.data().to_vec())
}

/// For `k` of shape `[M, n_b, n_f]`: the contracted vectors over the free axis
/// span at most `free_codim` dimensions.
fn leaf_accepts(plan: &Plan, k: &DenseArray, basis: &FieldMatrix) -> bool {
    let f = plan.field;
    let p = f.modulus() as u64;
    let (mm, nb, nf) = (k.shape()[0], k.shape()[1], k.shape()[2]);
    let data = k.data();
    let mut acc = IncrementalBasis::new(f, nf);
    let mut v = vec![0u64; nf];
    for j in 0..mm {
        for row in 0..basis.rows() {
            v.iter_mut().for_each(|x| *x = 0);
            for y in 0..nb {
                let c = basis.get(row, y) as u64;
                if c == 0 {
                    continue;
                }
                let src = &data[(j * nb + y) * nf..(j * nb + y + 1) * nf];
                for (x, &s) in v.iter_mut().zip(src) {
                    *x = (*x + c * s as u64) % p;
                }
            }
            if acc.insert(v.iter().map(|&x| x as u32).collect()) && acc.rank() > plan.free_codim {
                return false;
            }
        }
    }
    true
}

/// Necessary condition before enumerating the last axis: every matrix
/// `Σ_J w_J k[J]` must have rank ≤ `cap`, since it vanishes on `U_b × U_f`.
/// Checked on all nonzero `w` when that set is small, otherwise on unit vectors
/// plus a fixed pseudo-random sample.
fn matrix_condition_possible(plan: &Plan, k: &DenseArray, cap: usize) -> bool {
    let f = plan.field;
    let (mm, nb, nf) = (k.shape()[0], k.shape()[1], k.shape()[2]);
    if cap >= nb.min(nf) {
        return true;
    }
    let p = f.modulus();
    let exhaustive = (p as f64).powi(mm as i32) <= (PRUNE_SAMPLES + 1) as f64;
    let data = k.data();
    let rank_ok = |w: &[u32]| {
        let mut acc = IncrementalBasis::new(f, nf);
        for y in 0..nb {
            let mut row = vec![0u32; nf];
            for (j, &c) in w.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let src = &data[(j * nb + y) * nf..(j * nb + y + 1) * nf];
                for (x, &s) in row.iter_mut().zip(src) {
                    *x = f.mul_add(*x, c, s);
                }
            }
            if acc.insert(row) && acc.rank() > cap {
                return false;
            }
        }
        true
    };
    if exhaustive {
        let mut w = vec![0u32; mm];
        while crate::linalg::advance_odometer(&mut w, p) {
            if !rank_ok(&w) {
                return false;
            }
        }
        return true;
    }
    for j in 0..mm {
        let mut w = vec![0u32; mm];
        w[j] = 1;
        if !rank_ok(&w) {
            return false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PRUNE_SEED);
    for _ in 0..PRUNE_SAMPLES {
        let w: Vec<u32> = (0..mm).map(|_| rng.gen_range(0..p)).collect();
        if !rank_ok(&w) {
            return false;
        }
    }
    true
}
