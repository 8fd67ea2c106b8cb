//! Splitting a certificate of a two-block tensor into certificates of its
//! diagonal blocks, and the rank checks built on it: additivity under direct
//! sums and lower bounds for block upper triangular tensors.
//!
//! Each axis basis is echelonized in one of two pivot orders. With the first
//! option (forward echelon), rows whose first pivot lies in block 1 are cut
//! down to block 1 and the others already vanish there. With the second option
//! (backward echelon) the roles of the blocks swap. Mixing the two options
//! across axes is what makes both derived certificates valid.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{echelonize, few_zero_kernel_vector, Direction, FieldMatrix, Subspace};
use crate::rank::{
    min_slice_cover, slice_rank_exact, verify_certificate, DualCertificate, RankResult,
    SearchConfig,
};
use crate::tensor::{block_component, is_block_upper_triangular, nonzero_blocks, BlockStructure, Tensor};
use crate::SliceDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotOption {
    /// Forward echelon; block-1 rows are projected onto block 1.
    First,
    /// Backward echelon; block-2 rows are projected onto block 2.
    Second,
}

/// One pivot option per axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptionChoice(pub Vec<PivotOption>);

impl OptionChoice {
    /// First option on axes `0..d-1`, second on the last axis.
    pub fn default_for(order: usize) -> Self {
        let mut v = vec![PivotOption::First; order];
        if let Some(last) = v.last_mut() {
            *last = PivotOption::Second;
        }
        Self(v)
    }

    pub fn is_mixed(&self) -> bool {
        self.0.contains(&PivotOption::First) && self.0.contains(&PivotOption::Second)
    }

    /// Every choice with both options present, in binary order.
    pub fn all_mixed(order: usize) -> Vec<OptionChoice> {
        (0..1u32 << order)
            .map(|bits| {
                OptionChoice(
                    (0..order)
                        .map(|i| {
                            if bits >> (order - 1 - i) & 1 == 0 {
                                PivotOption::First
                            } else {
                                PivotOption::Second
                            }
                        })
                        .collect(),
                )
            })
            .filter(OptionChoice::is_mixed)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisSplit {
    pub option: PivotOption,
    /// Rows `0..threshold` vanish outside block 1, the rest outside block 2.
    pub w_vectors: FieldMatrix,
    pub threshold: usize,
    /// Subspace of the block-1 dual.
    pub block1: Subspace,
    /// Subspace of the block-2 dual.
    pub block2: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTrace {
    pub axes: Vec<AxisSplit>,
}

impl SplitTrace {
    pub fn certificate_block1(&self) -> DualCertificate {
        DualCertificate::new(self.axes.iter().map(|a| a.block1.clone()).collect()).expect("order ≥ 2")
    }

    pub fn certificate_block2(&self) -> DualCertificate {
        DualCertificate::new(self.axes.iter().map(|a| a.block2.clone()).collect()).expect("order ≥ 2")
    }
}

fn split_axis(u: &Subspace, s: usize, option: PivotOption) -> AxisSplit {
    let f = u.field();
    let n = u.ambient();
    let direction = match option {
        PivotOption::First => Direction::Forward,
        PivotOption::Second => Direction::Backward,
    };
    let e = echelonize(&u.basis(), direction);
    let rows = e.nonzero_rows();
    let mut first_rows = Vec::new();
    let mut second_rows = Vec::new();
    for (i, &pivot) in e.pivots.iter().enumerate() {
        let mut w = rows.row(i).to_vec();
        let in_block1 = pivot < s;
        match (option, in_block1) {
            // agrees with u on block 1, cut to block 1
            (PivotOption::First, true) => {
                w[s..].iter_mut().for_each(|x| *x = 0);
                first_rows.push(w);
            }
            // pivot beyond block 1: the whole row vanishes there already
            (PivotOption::First, false) => second_rows.push(w),
            // last nonzero inside block 1: vanishes on block 2
            (PivotOption::Second, true) => first_rows.push(w),
            (PivotOption::Second, false) => {
                w[..s].iter_mut().for_each(|x| *x = 0);
                second_rows.push(w);
            }
        }
    }
    let threshold = first_rows.len();
    let block1 = Subspace::span(&FieldMatrix::from_raw(f, threshold, n, first_rows.concat()).restrict_columns(0, s));
    let block2 = Subspace::span(
        &FieldMatrix::from_raw(f, second_rows.len(), n, second_rows.concat()).restrict_columns(s, n),
    );
    first_rows.extend(second_rows);
    AxisSplit {
        option,
        w_vectors: FieldMatrix::from_raw(f, e.rank, n, first_rows.concat()),
        threshold,
        block1,
        block2,
    }
}

fn check_two_blocks(c: &DualCertificate, blocks: &BlockStructure) -> Result<()> {
    if blocks.blocks() != 2 {
        return Err(Error::InvalidBlocks(format!("expected 2 blocks, got {}", blocks.blocks())));
    }
    if blocks.shape() != c.shape() || blocks.order() != c.order() {
        return Err(Error::ShapeMismatch(format!(
            "blocks cover {:?}, certificate is over {:?}",
            blocks.shape(),
            c.shape()
        )));
    }
    Ok(())
}

fn split_unchecked(c: &DualCertificate, blocks: &BlockStructure, choices: &OptionChoice) -> Result<SplitTrace> {
    check_two_blocks(c, blocks)?;
    if choices.0.len() != c.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} option choices for order {}",
            choices.0.len(),
            c.order()
        )));
    }
    Ok(SplitTrace {
        axes: c
            .subspaces()
            .iter()
            .zip(&choices.0)
            .enumerate()
            .map(|(i, (u, &opt))| split_axis(u, blocks.sizes()[i][0], opt))
            .collect(),
    })
}

/// Splits a certificate of `T1 ⊕ T2` (two blocks per axis) into certificates
/// of the blocks. The choices must use both options.
pub fn split_certificate(c: &DualCertificate, blocks: &BlockStructure, choices: &OptionChoice) -> Result<SplitTrace> {
    if !choices.is_mixed() {
        return Err(Error::OptionConstraint);
    }
    split_unchecked(c, blocks, choices)
}

/// Block indices (0-based) violating "last block index is 2, or all are 1".
pub fn one_sided_violations(t: &Tensor, blocks: &BlockStructure) -> Result<Vec<Vec<usize>>> {
    Ok(nonzero_blocks(t, blocks)?
        .into_iter()
        .filter(|a| !(a.last() == Some(&1) || a.iter().all(|&x| x == 0)))
        .collect())
}

/// The split with the first option on axes `0..d-1` and the second on the last
/// axis, valid when `t`'s nonzero block components have last index 2 or are the
/// all-1 block. The derived certificates then witness
/// `σ(t) ≥ σ(T^{1…1}) + σ(T^{2…2})`.
pub fn split_certificate_theorem2(t: &Tensor, c: &DualCertificate, blocks: &BlockStructure) -> Result<SplitTrace> {
    check_two_blocks(c, blocks)?;
    if let Some(bad) = one_sided_violations(t, blocks)?.into_iter().next() {
        return Err(Error::SupportCondition(bad));
    }
    split_unchecked(c, blocks, &OptionChoice::default_for(c.order()))
}

/// Checks the two derived certificates against the diagonal blocks of `t`.
pub fn verify_split(t: &Tensor, blocks: &BlockStructure, trace: &SplitTrace) -> Result<(bool, bool)> {
    let d = t.order();
    let t1 = block_component(t, blocks, &vec![0; d])?;
    let t2 = block_component(t, blocks, &vec![1; d])?;
    Ok((
        verify_certificate(&t1, &trace.certificate_block1())?,
        verify_certificate(&t2, &trace.certificate_block2())?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Equal,
    InequalityHolds,
    /// Would contradict the theorem being checked; signals a bug.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub sigma_parts: Vec<usize>,
    pub sigma_sum: usize,
    pub sigma_total: usize,
    /// Certificates of the parts, then of the whole.
    pub certificates: Vec<DualCertificate>,
    pub status: Status,
    /// Whether the whole tensor's certificate split into verifying block certificates.
    pub split_verified: bool,
}

fn exact(t: &Tensor, config: &SearchConfig) -> Result<RankResult> {
    let cfg = SearchConfig {
        budget: None,
        ..config.clone()
    };
    Ok(slice_rank_exact(t, &cfg)?.exact().expect("no budget"))
}

/// Ranks `t1`, `t2` and `t1 ⊕ t2` independently and compares.
pub fn check_additivity(t1: &Tensor, t2: &Tensor, config: &SearchConfig) -> Result<RankReport> {
    let (sum, blocks) = t1.direct_sum(t2)?;
    let r1 = exact(t1, config)?;
    let r2 = exact(t2, config)?;
    let total = exact(&sum, config)?;
    let trace = split_certificate(&total.certificate, &blocks, &OptionChoice::default_for(sum.order()))?;
    let (a, b) = verify_split(&sum, &blocks, &trace)?;
    let sigma_sum = r1.sigma + r2.sigma;
    let status = if sigma_sum == total.sigma && a && b {
        Status::Equal
    } else {
        Status::Violation
    };
    Ok(RankReport {
        sigma_parts: vec![r1.sigma, r2.sigma],
        sigma_sum,
        sigma_total: total.sigma,
        certificates: vec![r1.certificate, r2.certificate, total.certificate],
        status,
        split_verified: a && b,
    })
}

/// One step of the induction: blocks `1..k-1` merged against block `k`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FoldCheck {
    pub blocks: usize,
    pub sigma_total: usize,
    pub sigma_leading: usize,
    pub sigma_last: usize,
    pub holds: bool,
    pub split_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularReport {
    pub report: RankReport,
    pub folds: Vec<FoldCheck>,
}

/// `σ(t) ≥ Σ_j σ(T^{j…j})` for block upper triangular `t`, plus the two-block
/// inequality at every fold of the induction on the number of blocks.
pub fn check_triangular(t: &Tensor, blocks: &BlockStructure, config: &SearchConfig) -> Result<TriangularReport> {
    blocks.check_shape(t.shape())?;
    if let Some(bad) = nonzero_blocks(t, blocks)?
        .into_iter()
        .find(|a| a.windows(2).any(|w| w[0] > w[1]))
    {
        return Err(Error::NotTriangular(bad));
    }
    debug_assert!(is_block_upper_triangular(t, blocks)?);
    let d = t.order();
    let k = blocks.blocks();
    let mut diag = Vec::with_capacity(k);
    for j in 0..k {
        diag.push(exact(&block_component(t, blocks, &vec![j; d])?, config)?);
    }
    let total = exact(t, config)?;

    let mut folds = Vec::new();
    let mut all_split = true;
    let mut cur = t.clone();
    let mut cur_blocks = blocks.clone();
    let mut cur_rank = total.clone();
    while cur_blocks.blocks() >= 2 {
        let kk = cur_blocks.blocks();
        let fold = cur_blocks.fold_last()?;
        let leading = block_component(&cur, &fold, &vec![0; d])?;
        let leading_rank = if kk == 2 {
            diag[0].clone()
        } else {
            exact(&leading, config)?
        };
        let last = diag[kk - 1].sigma;
        let trace = split_certificate_theorem2(&cur, &cur_rank.certificate, &fold)?;
        let (a, b) = verify_split(&cur, &fold, &trace)?;
        all_split &= a && b;
        folds.push(FoldCheck {
            blocks: kk,
            sigma_total: cur_rank.sigma,
            sigma_leading: leading_rank.sigma,
            sigma_last: last,
            holds: cur_rank.sigma >= leading_rank.sigma + last,
            split_verified: a && b,
        });
        cur = leading;
        cur_blocks = cur_blocks.drop_last()?;
        cur_rank = leading_rank;
    }

    let sigma_parts: Vec<usize> = diag.iter().map(|r| r.sigma).collect();
    let sigma_sum = sigma_parts.iter().sum();
    let holds = total.sigma >= sigma_sum && folds.iter().all(|f| f.holds) && all_split;
    let mut certificates: Vec<DualCertificate> = diag.into_iter().map(|r| r.certificate).collect();
    certificates.push(total.certificate);
    Ok(TriangularReport {
        report: RankReport {
            sigma_parts,
            sigma_sum,
            sigma_total: total.sigma,
            certificates,
            status: if !holds {
                Status::Violation
            } else if total.sigma == sigma_sum {
                Status::Equal
            } else {
                Status::InequalityHolds
            },
            split_verified: all_split,
        },
        folds,
    })
}

/// The accounting behind the Levi-Civita obstruction for `m` copies of ε.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ObstructionReport {
    pub copies: usize,
    pub prime: u32,
    /// Term counts on the three axes of the decomposition used.
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub h: Vec<u32>,
    pub h_zeros: usize,
    /// Whether `h` annihilates every axis-1 vector of the decomposition.
    pub h_annihilates: bool,
    /// `M(y, z) = Σ_x h(x) T(x, y, z)`, row-major.
    pub contraction: Vec<Vec<u32>>,
    pub contraction_rank: usize,
    pub antisymmetric: bool,
    /// Copies on which `h` is not identically zero.
    pub surviving_copies: usize,
    /// `2⌊r/3⌋ + s + t`.
    pub tao_lhs: usize,
    /// `2m`.
    pub tao_rhs: usize,
    /// The best `r + s + t` lower bound the argument gives: `9m/4`.
    pub naive_total_bound: f64,
    /// True slice rank, from the slice cover of an antichain relabelling.
    pub sigma: usize,
}

/// `m` copies of ε, with axis 0 blocks in reverse order so that the support is
/// an antichain.
fn antichain_relabelling(t: &Tensor, copies: usize) -> Result<Tensor> {
    let perm: Vec<usize> = (0..3 * copies).map(|x| 3 * (copies - 1 - x / 3) + x % 3).collect();
    t.permute_indices(0, &perm)
}

/// Builds `ε ⊕ … ⊕ ε`, decomposes it with one slice per axis per copy
/// (r = s = t = m), picks a few-zeros `h` annihilating the axis-1 vectors (or
/// uses `h` if given) and reports the resulting bounds.
pub fn levi_civita_obstruction_demo(copies: usize, field: PrimeField, h: Option<Vec<u32>>) -> Result<ObstructionReport> {
    let eps = Tensor::levi_civita(field);
    let eps_dec = SliceDecomposition::levi_civita_cover(field);
    if copies == 0 {
        return Ok(ObstructionReport {
            copies: 0,
            prime: field.modulus(),
            r: 0,
            s: 0,
            t: 0,
            h: Vec::new(),
            h_zeros: 0,
            h_annihilates: true,
            contraction: Vec::new(),
            contraction_rank: 0,
            antisymmetric: true,
            surviving_copies: 0,
            tao_lhs: 0,
            tao_rhs: 0,
            naive_total_bound: 0.0,
            sigma: 0,
        });
    }
    let mut t = eps.clone();
    for _ in 1..copies {
        t = t.direct_sum(&eps)?.0;
    }
    let n = 3 * copies;
    // axis-0 vectors of the decomposition: e_{3q} for each copy q
    let axis0: Vec<Vec<u32>> = (0..copies)
        .map(|q| {
            let mut u = vec![0u32; n];
            for term in eps_dec.terms().iter().filter(|t| t.axis == 0) {
                u[3 * q..3 * q + 3].copy_from_slice(&term.u);
            }
            u
        })
        .collect();
    let counts = eps_dec.axis_counts();
    let (r, s, tt) = (counts[0] * copies, counts[1] * copies, counts[2] * copies);
    let constraints = FieldMatrix::from_rows(field, n, &axis0)?;
    let h = match h {
        Some(h) => {
            if h.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: h.len(),
                });
            }
            for &x in &h {
                field.check(x as u64)?;
            }
            h
        }
        None => few_zero_kernel_vector(&constraints).vector,
    };
    let h_annihilates = constraints.mul_vec(&h).iter().all(|&x| x == 0);
    let m = t.contract_axis(&h, 0)?;
    let mm = m.flatten(0)?;
    let antisymmetric = (0..n).all(|y| (0..n).all(|z| mm.get(y, z) == field.neg(mm.get(z, y))));
    let surviving = (0..copies).filter(|q| h[3 * q..3 * q + 3].iter().any(|&x| x != 0)).count();
    let relabelled = antichain_relabelling(&t, copies)?;
    debug_assert!(relabelled.support_and_antichain().1);
    Ok(ObstructionReport {
        copies,
        prime: field.modulus(),
        r,
        s,
        t: tt,
        h_zeros: h.iter().filter(|&&x| x == 0).count(),
        h,
        h_annihilates,
        contraction: mm.row_vecs(),
        contraction_rank: mm.rank(),
        antisymmetric,
        surviving_copies: surviving,
        tao_lhs: 2 * (r / 3) + s + tt,
        tao_rhs: 2 * copies,
        naive_total_bound: 9.0 * copies as f64 / 4.0,
        sigma: min_slice_cover(&relabelled).count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::certificate_from_decomposition;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn options(s: &str) -> OptionChoice {
        OptionChoice(
            s.chars()
                .map(|c| if c == 'F' { PivotOption::First } else { PivotOption::Second })
                .collect(),
        )
    }

    #[test]
    fn diagonal_splits_into_unit_certificates() {
        let f = gf(2);
        let one = Tensor::new(f, vec![1, 1, 1], vec![1]).unwrap();
        let (t, blocks) = one.direct_sum(&one).unwrap();
        let dec = crate::rank::decomposition_from_certificate(
            &t,
            &crate::rank::slice_rank_exact(&t, &SearchConfig::default())
                .unwrap()
                .exact()
                .unwrap()
                .certificate,
        )
        .unwrap();
        let c = certificate_from_decomposition(&dec).unwrap();
        assert_eq!(c.bound(), 2);
        let trace = split_certificate(&c, &blocks, &options("FSS")).unwrap();
        assert_eq!(trace.certificate_block1().bound(), 1);
        assert_eq!(trace.certificate_block2().bound(), 1);
        assert_eq!(verify_split(&t, &blocks, &trace).unwrap(), (true, true));
        for (axis, u) in trace.axes.iter().zip(c.subspaces()) {
            assert_eq!(axis.block1.dim() + axis.block2.dim(), u.dim());
        }
    }

    #[test]
    fn zero_subspaces_split_trivially() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let (t, blocks) = eps.direct_sum(&eps).unwrap();
        let c = DualCertificate::new(vec![Subspace::zero(f, 6); 3]).unwrap();
        let trace = split_certificate(&c, &blocks, &OptionChoice::default_for(3)).unwrap();
        for a in &trace.axes {
            assert_eq!(a.block1.dim(), 0);
            assert_eq!(a.block2.dim(), 0);
            assert_eq!(a.block1.codim() + a.block2.codim(), 6);
        }
        assert_eq!(verify_split(&t, &blocks, &trace).unwrap(), (true, true));
    }

    #[test]
    fn empty_second_block_keeps_everything() {
        let f = gf(3);
        let eps = Tensor::levi_civita(f);
        let empty = Tensor::zeros(f, vec![0, 0, 0]).unwrap();
        let (t, blocks) = eps.direct_sum(&empty).unwrap();
        let c = certificate_from_decomposition(&SliceDecomposition::levi_civita_cover(f)).unwrap();
        let trace = split_certificate(&c, &blocks, &options("FSF")).unwrap();
        for (a, u) in trace.axes.iter().zip(c.subspaces()) {
            assert_eq!(&a.block1, u);
            assert_eq!(a.threshold, u.dim());
        }
        assert_eq!(verify_split(&t, &blocks, &trace).unwrap(), (true, true));
    }

    #[test]
    fn option_constraint_enforced() {
        let f = gf(2);
        let c = DualCertificate::full(f, &[2, 2, 2]).unwrap();
        let blocks = BlockStructure::uniform(3, &[1, 1]).unwrap();
        assert!(matches!(
            split_certificate(&c, &blocks, &options("FFF")),
            Err(Error::OptionConstraint)
        ));
        assert!(matches!(
            split_certificate(&c, &blocks, &options("SSS")),
            Err(Error::OptionConstraint)
        ));
        assert_eq!(OptionChoice::all_mixed(3).len(), 6);
    }

    #[test]
    fn w_vectors_respect_blocks() {
        let f = gf(5);
        let u = Subspace::span_rows(f, 4, &[vec![1, 2, 3, 4], vec![0, 1, 0, 2], vec![0, 0, 1, 1]]).unwrap();
        for opt in [PivotOption::First, PivotOption::Second] {
            let a = split_axis(&u, 2, opt);
            for i in 0..a.w_vectors.rows() {
                let row = a.w_vectors.row(i);
                if i < a.threshold {
                    assert!(row[2..].iter().all(|&x| x == 0));
                } else {
                    assert!(row[..2].iter().all(|&x| x == 0));
                }
            }
            assert_eq!(a.block1.dim() + a.block2.dim(), 3);
        }
    }

    #[test]
    fn one_sided_support_condition() {
        let f = gf(2);
        let blocks = BlockStructure::uniform(3, &[1, 1]).unwrap();
        let mut t = Tensor::zeros(f, vec![2, 2, 2]).unwrap();
        t.set(&[0, 0, 0], 1);
        t.set(&[0, 1, 1], 1);
        t.set(&[1, 0, 1], 1);
        let c = slice_rank_exact(&t, &SearchConfig::default()).unwrap().exact().unwrap().certificate;
        let trace = split_certificate_theorem2(&t, &c, &blocks).unwrap();
        assert_eq!(verify_split(&t, &blocks, &trace).unwrap(), (true, true));

        t.set(&[1, 1, 0], 1);
        assert!(matches!(
            split_certificate_theorem2(&t, &c, &blocks),
            Err(Error::SupportCondition(ref a)) if a == &vec![1, 1, 0]
        ));
    }

    #[test]
    fn additivity_examples() {
        let f = gf(2);
        let d1 = Tensor::diagonal(f, 3, &[1, 1]).unwrap();
        let d2 = Tensor::diagonal(f, 3, &[1]).unwrap();
        let rep = check_additivity(&d1, &d2, &SearchConfig::default()).unwrap();
        assert_eq!(rep.sigma_parts, vec![2, 1]);
        assert_eq!(rep.sigma_total, 3);
        assert_eq!(rep.status, Status::Equal);

        let empty = Tensor::zeros(f, vec![0, 0, 0]).unwrap();
        let rep = check_additivity(&d1, &empty, &SearchConfig::default()).unwrap();
        assert_eq!(rep.sigma_total, 2);
        assert_eq!(rep.status, Status::Equal);
    }

    #[test]
    fn triangular_examples() {
        let f = gf(2);
        let d1 = Tensor::diagonal(f, 3, &[1]).unwrap();
        let (t, blocks) = d1.direct_sum(&d1).unwrap();
        let rep = check_triangular(&t, &blocks, &SearchConfig::default()).unwrap();
        assert_eq!(rep.report.status, Status::Equal);

        // strictly upper triangular: only the (1,2,2) block is nonzero
        let mut s = Tensor::zeros(f, vec![2, 2, 2]).unwrap();
        s.set(&[0, 1, 1], 1);
        let rep = check_triangular(&s, &blocks, &SearchConfig::default()).unwrap();
        assert_eq!(rep.report.sigma_parts, vec![0, 0]);
        assert_eq!(rep.report.sigma_total, 1);
        assert_eq!(rep.report.status, Status::InequalityHolds);

        s.set(&[1, 0, 0], 1);
        assert!(matches!(
            check_triangular(&s, &blocks, &SearchConfig::default()),
            Err(Error::NotTriangular(_))
        ));
    }

    #[test]
    fn triangular_three_blocks_folds() {
        let f = gf(3);
        let blocks = BlockStructure::uniform(3, &[1, 1, 1]).unwrap();
        let mut t = Tensor::zeros(f, vec![3, 3, 3]).unwrap();
        for j in 0..3 {
            t.set(&[j, j, j], 1);
        }
        t.set(&[0, 1, 2], 2);
        let rep = check_triangular(&t, &blocks, &SearchConfig::default()).unwrap();
        assert_eq!(rep.folds.len(), 2);
        assert_eq!(rep.folds[0].blocks, 3);
        assert!(rep.folds.iter().all(|f| f.holds && f.split_verified));
        assert_eq!(rep.report.sigma_parts, vec![1, 1, 1]);
        assert!(rep.report.sigma_total >= 3);
    }

    #[test]
    fn obstruction_single_copy() {
        let f = gf(3);
        let rep = levi_civita_obstruction_demo(1, f, None).unwrap();
        assert_eq!(rep.sigma, 3);
        assert!(rep.antisymmetric);
        assert!(rep.contraction_rank <= 2);
        assert!(rep.h_annihilates);
        assert!(rep.contraction_rank <= rep.s + rep.t);
        assert!(rep.naive_total_bound <= 3.0);

        let rep = levi_civita_obstruction_demo(1, f, Some(vec![1, 1, 1])).unwrap();
        assert!(rep.antisymmetric);
        assert_eq!(rep.contraction_rank, 2);

        let rep = levi_civita_obstruction_demo(0, f, None).unwrap();
        assert_eq!(rep.copies, 0);
        assert!(rep.h.is_empty());
    }

    #[test]
    fn obstruction_two_copies() {
        let rep = levi_civita_obstruction_demo(2, gf(3), None).unwrap();
        assert_eq!(rep.sigma, 6);
        assert_eq!((rep.r, rep.s, rep.t), (2, 2, 2));
        assert_eq!(rep.h_zeros, 2);
        assert_eq!(rep.surviving_copies, 2);
        assert_eq!(rep.contraction_rank, 4);
        assert!(rep.tao_lhs >= rep.tao_rhs);
    }
}
