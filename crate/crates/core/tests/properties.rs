use proptest::prelude::*;
use rand::Rng;

use slicerank::generate::{self, rng};
use slicerank::linalg::{annihilator, complete_basis, echelonize, kernel_basis};
use slicerank::rank::{
    certificate_from_decomposition, decomposition_from_certificate, dual_search, matrix_rank_result,
    slice_rank_exact, verify_certificate,
};
use slicerank::split::{split_certificate, OptionChoice};
use slicerank::{
    DenseArray, Direction, DualCertificate, FieldMatrix, PrimeField, SearchConfig, Subspace, Tensor,
};

fn field() -> impl Strategy<Value = PrimeField> {
    prop_oneof![Just(2u32), Just(3), Just(5)].prop_map(|p| PrimeField::new(p).unwrap())
}

fn matrix(max: usize) -> impl Strategy<Value = FieldMatrix> {
    (field(), 0..=max, 0..=max).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(0..f.modulus(), r * c).prop_map(move |d| FieldMatrix::new(f, r, c, d).unwrap())
    })
}

fn tensor3(max: usize) -> impl Strategy<Value = Tensor> {
    (field(), proptest::collection::vec(1..=max, 3)).prop_flat_map(|(f, shape)| {
        let len: usize = shape.iter().product();
        proptest::collection::vec(0..f.modulus(), len).prop_map(move |d| Tensor::new(f, shape.clone(), d).unwrap())
    })
}

fn sigma(t: &Tensor) -> usize {
    slice_rank_exact(t, &SearchConfig::default())
        .unwrap()
        .exact()
        .unwrap()
        .sigma
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn echelon_preserves_row_space(m in matrix(5)) {
        let s = Subspace::span(&m);
        for dir in [Direction::Forward, Direction::Backward] {
            let e = echelonize(&m, dir);
            prop_assert_eq!(e.rank, s.dim());
            prop_assert_eq!(Subspace::span(&e.matrix), s.clone());
        }
    }

    #[test]
    fn backward_pivots_strictly_decrease(m in matrix(5)) {
        let e = echelonize(&m, Direction::Backward);
        prop_assert!(e.pivots.windows(2).all(|w| w[0] > w[1]));
        for (i, &p) in e.pivots.iter().enumerate() {
            let row = e.matrix.row(i);
            prop_assert_eq!(row[p], 1);
            prop_assert!(row[p + 1..].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_of_transpose(m in matrix(5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_is_annihilated(m in matrix(5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim(), m.cols() - m.rank());
        for i in 0..k.dim() {
            prop_assert!(m.mul_vec(k.basis_row(i)).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn completed_basis_is_invertible(m in matrix(5)) {
        let s = Subspace::span(&m);
        let c = complete_basis(&s);
        prop_assert_eq!(c.rank(), s.ambient());
        for i in 0..s.dim() {
            prop_assert_eq!(c.row(i), s.basis_row(i));
        }
    }

    #[test]
    fn double_annihilator(m in matrix(5)) {
        let s = Subspace::span(&m);
        prop_assert_eq!(annihilator(&annihilator(&s.basis()).basis()), s);
    }

    #[test]
    fn contraction_is_linear(t in tensor3(3), seed in any::<u64>(), axis in 0usize..3) {
        let f = t.field();
        let n = t.shape()[axis];
        let mut r = rng(seed);
        let g = generate::random_vector(&mut r, f, n);
        let h = generate::random_vector(&mut r, f, n);
        let c = r.gen_range(0..f.modulus());
        let combo: Vec<u32> = g.iter().zip(&h).map(|(&a, &b)| f.add(f.mul(c, a), b)).collect();
        let lhs = t.contract_axis(&combo, axis).unwrap();
        let rhs = t.contract_axis(&g, axis).unwrap().scale(c).add(&t.contract_axis(&h, axis).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contractions_on_different_axes_commute(t in tensor3(3), seed in any::<u64>()) {
        let f = t.field();
        let mut r = rng(seed);
        let g = generate::random_vector(&mut r, f, t.shape()[0]);
        let h = generate::random_vector(&mut r, f, t.shape()[2]);
        let a = t.contract_axis(&g, 0).unwrap().contract_axis(&h, 1).unwrap();
        let b = t.contract_axis(&h, 2).unwrap().contract_axis(&g, 0).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn direct_sum_contraction_splits(a in tensor3(2), seed in any::<u64>()) {
        let f = a.field();
        let mut r = rng(seed);
        let b = generate::random_tensor(&mut r, f, vec![2, 1, 2]).unwrap();
        let (sum, _) = a.direct_sum(&b).unwrap();
        let h: Vec<u32> = generate::random_vector(&mut r, f, a.shape()[0]);
        let mut padded = h.clone();
        padded.extend([0, 0]);
        let c = sum.contract_axis(&padded, 0).unwrap();
        let direct = a.contract_axis(&h, 0).unwrap();
        let (n1, n2) = (a.shape()[1], a.shape()[2]);
        for y in 0..sum.shape()[1] {
            for z in 0..sum.shape()[2] {
                let want = if y < n1 && z < n2 { direct.get(&[y, z]) } else { 0 };
                prop_assert_eq!(c.get(&[y, z]), want);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trip(seed in any::<u64>(), f in field()) {
        let mut r = rng(seed);
        let dec = generate::random_small_decomposition(&mut r, f, 3, 4).unwrap();
        let t = dec.evaluate().unwrap();
        let c = certificate_from_decomposition(&dec).unwrap();
        prop_assert!(verify_certificate(&t, &c).unwrap());
        prop_assert!(c.bound() <= dec.len());
        let back = decomposition_from_certificate(&t, &c).unwrap();
        prop_assert_eq!(back.len(), c.bound());
        prop_assert_eq!(back.evaluate().unwrap(), t);
    }

    #[test]
    fn rank_invariant_under_scaling_and_permutation(t in tensor3(2), seed in any::<u64>()) {
        let f = t.field();
        let s = sigma(&t);
        let mut r = rng(seed);
        let c = 1 + r.gen_range(0..f.modulus() - 1);
        prop_assert_eq!(sigma(&t.scale(c)), s);
        prop_assert_eq!(sigma(&t.permute_axes(&[2, 0, 1]).unwrap()), s);
        let n = t.shape()[1];
        let perm: Vec<usize> = (0..n).rev().collect();
        prop_assert_eq!(sigma(&t.permute_indices(1, &perm).unwrap()), s);
        prop_assert_eq!(sigma(&t.pad_zeros(&[1, 0, 1]).unwrap()), s);
    }

    #[test]
    fn minimal_certificate_is_consistent(t in tensor3(3)) {
        let res = slice_rank_exact(&t, &SearchConfig::default()).unwrap().exact().unwrap();
        prop_assert_eq!(res.certificate.bound(), res.sigma);
        prop_assert!(verify_certificate(&t, &res.certificate).unwrap());
        prop_assert_eq!(res.decomposition.len(), res.sigma);
        prop_assert_eq!(res.decomposition.evaluate().unwrap(), t.clone());
        if res.sigma > 0 {
            let below = slice_rank_exact(&t, &SearchConfig::default().with_budget(res.sigma - 1)).unwrap();
            prop_assert!(below.exact().is_none());
        }
    }

    #[test]
    fn split_ignores_basis_presentation(seed in any::<u64>(), f in field()) {
        let mut r = rng(seed);
        let t1 = generate::random_tensor(&mut r, f, vec![2, 1, 2]).unwrap();
        let t2 = generate::random_tensor(&mut r, f, vec![1, 2, 1]).unwrap();
        let (sum, blocks) = t1.direct_sum(&t2).unwrap();
        let c = slice_rank_exact(&sum, &SearchConfig::default()).unwrap().exact().unwrap().certificate;
        // re-present every basis through a random invertible change of basis
        let mixed = DualCertificate::new(
            c.subspaces()
                .iter()
                .map(|s| {
                    let g = generate::random_invertible(&mut r, f, s.dim());
                    Subspace::span(&g.mul(&s.basis()))
                })
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(&mixed, &c);
        let choice = OptionChoice::default_for(3);
        prop_assert_eq!(
            split_certificate(&mixed, &blocks, &choice).unwrap(),
            split_certificate(&c, &blocks, &choice).unwrap()
        );
    }
}

#[test]
fn order_two_search_matches_matrix_rank() {
    for p in [2, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        let mut r = rng(u64::from(p));
        for _ in 0..200 {
            let rows = r.gen_range(0..5usize);
            let cols = r.gen_range(0..5usize);
            let t = generate::random_tensor(&mut r, f, vec![rows, cols]).unwrap();
            let search = dual_search(&t, &SearchConfig::default()).unwrap().exact().unwrap();
            let m = matrix_rank_result(&t).unwrap();
            assert_eq!(search.sigma, m.sigma);
            assert_eq!(search.sigma, t.flatten(0).unwrap().rank());
        }
    }
}

#[test]
fn single_slice_terms_have_rank_one() {
    let f = PrimeField::new(3).unwrap();
    let mut r = rng(11);
    for axis in 0..3 {
        let mut shape = vec![2, 3, 2];
        let u = loop {
            let u = generate::random_vector(&mut r, f, shape[axis]);
            if u.iter().any(|&x| x != 0) {
                break u;
            }
        };
        shape.remove(axis);
        let v: DenseArray = loop {
            let v = generate::random_array(&mut r, f, shape.clone());
            if !v.is_zero() {
                break v;
            }
        };
        let t = Tensor::try_from(v.insert_axis(axis, &u).unwrap()).unwrap();
        assert_eq!(sigma(&t), 1);
    }
}
