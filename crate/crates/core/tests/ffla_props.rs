use frobetti::ffla::sparse::{SparseEchelon, SparseVec};
use frobetti::ffla::{det, inverse, kernel_basis, left_kernel_basis, row_space_membership, rref, Span};
use frobetti::{FMatrix, Field, Prime};
use proptest::prelude::*;

fn matrix(p: u64, max: usize) -> impl Strategy<Value = FMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(0..p as u32, r * c).prop_map(move |v| {
            let pr = Prime::new(p).unwrap();
            FMatrix::from_fn(pr, r, c, |i, j| v[i * c + j])
        })
    })
}

fn square(p: u64, max: usize) -> impl Strategy<Value = FMatrix> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(0..p as u32, n * n).prop_map(move |v| {
            let pr = Prime::new(p).unwrap();
            FMatrix::from_fn(pr, n, n, |i, j| v[i * n + j])
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(7, 9)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_nullity(m in matrix(5, 9)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        for r in 0..k.rows() {
            let v = m.mul(&k.transpose()).unwrap();
            prop_assert!(v.is_zero(), "row {}", r);
        }
        let lk = left_kernel_basis(&m);
        prop_assert_eq!(lk.rows() + m.rank(), m.rows());
        if lk.rows() > 0 {
            prop_assert!(lk.mul(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_pivots_are_unit_columns(m in matrix(11, 8)) {
        let (r, rank, piv) = rref(&m);
        prop_assert_eq!(rank, piv.len());
        for (k, &c) in piv.iter().enumerate() {
            for i in 0..r.rows() {
                prop_assert_eq!(r.get(i, c), u32::from(i == k));
            }
        }
    }

    #[test]
    fn det_is_multiplicative(a in square(13, 6), seed in 0u32..1000) {
        let n = a.rows();
        let b = FMatrix::from_fn(a.prime(), n, n, |i, j| (seed + 3 * i as u32 + 7 * j as u32 * j as u32) % 13);
        let f = a.field();
        prop_assert_eq!(det(&a.mul(&b).unwrap()).unwrap(), f.mul(det(&a).unwrap(), det(&b).unwrap()));
        prop_assert_eq!(det(&a).unwrap() != 0, a.rank() == n);
    }

    #[test]
    fn inverse_round_trip(a in square(101, 6)) {
        match inverse(&a).unwrap() {
            Some(inv) => prop_assert_eq!(a.mul(&inv).unwrap(), FMatrix::identity(a.prime(), a.rows())),
            None => prop_assert!(a.rank() < a.rows()),
        }
    }

    #[test]
    fn sparse_echelon_agrees_with_dense(m in matrix(7, 10)) {
        let f = m.field();
        let mut e = SparseEchelon::with_tracking(m.prime(), m.cols());
        let mut span = Span::new(m.prime(), m.cols());
        for r in 0..m.rows() {
            let sv = SparseVec::from_pairs(f, m.row(r).iter().enumerate().map(|(c, &v)| (c as u32, v)).collect());
            let grew = e.insert(&sv);
            prop_assert_eq!(grew, span.insert(m.row(r)));
        }
        prop_assert_eq!(e.rank(), m.rank());
        for k in e.kernel() {
            let v = k.to_dense(m.rows());
            prop_assert!(m.left_apply(&v).unwrap().iter().all(|&x| x == 0));
        }
        prop_assert_eq!(e.kernel().len(), m.rows() - m.rank());
        for r in 0..m.rows() {
            prop_assert!(row_space_membership(&m, m.row(r)).unwrap());
        }
    }

    #[test]
    fn field_axioms(a in 1u32..97, b in 0u32..97, c in 0u32..97) {
        let f = Field::new(Prime::new(97).unwrap());
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(b, c), c), b);
        prop_assert_eq!(f.pow(a, 96), 1);
    }
}
