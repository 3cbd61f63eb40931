use frobetti::ffla::det;
use frobetti::pfaffian::{pfaffian, pfaffian_adjoint, poly_det, signed_maximal_pfaffians, Fp, Ring};
use frobetti::{FMatrix, PolyMatrix, Prime, SkewMatrix, SkewPolyMatrix, SparsePoly};
use proptest::prelude::*;

const P: u64 = 101;

fn prime() -> Prime {
    Prime::new(P).unwrap()
}

fn scalar_skew(max_half: usize) -> impl Strategy<Value = SkewMatrix<Fp>> {
    (1..=max_half).prop_flat_map(|h| {
        let size = 2 * h;
        proptest::collection::vec(0..P as u32, size * (size - 1) / 2).prop_map(move |v| {
            let upper: Vec<Fp> = v.into_iter().map(|c| Fp::new(prime(), c)).collect();
            SkewMatrix::from_upper(size, &Fp::new(prime(), 0), &upper).unwrap()
        })
    })
}

/// Skew matrices whose entries are random linear forms in three variables.
fn linear_skew(max_half: usize) -> impl Strategy<Value = SkewPolyMatrix> {
    (1..=max_half).prop_flat_map(|h| {
        let size = 2 * h;
        proptest::collection::vec(proptest::collection::vec(0..P as u32, 3), size * (size - 1) / 2).prop_map(move |v| {
            let upper: Vec<SparsePoly> = v
                .into_iter()
                .map(|cs| {
                    let mut s = SparsePoly::zero(prime(), 3);
                    for (k, c) in cs.into_iter().enumerate() {
                        let mut e = vec![0; 3];
                        e[k] = 1;
                        s.add_term(e, c);
                    }
                    s
                })
                .collect();
            SkewMatrix::from_upper(size, &SparsePoly::zero(prime(), 3), &upper).unwrap()
        })
    })
}

fn dense(x: &SkewMatrix<Fp>) -> FMatrix {
    FMatrix::from_fn(prime(), x.size(), x.size(), |i, j| x.get(i, j).v)
}

fn poly_matrix(x: &SkewPolyMatrix) -> PolyMatrix {
    PolyMatrix::from_fn(prime(), 3, x.size(), x.size(), |i, j| x.get(i, j).clone())
}

fn block_diagonal(a: &SkewMatrix<Fp>, b: &SkewMatrix<Fp>) -> SkewMatrix<Fp> {
    let (m, n) = (a.size(), b.size());
    let zero = Fp::new(prime(), 0);
    let rows = (0..m + n)
        .map(|i| {
            (0..m + n)
                .map(|j| match (i < m, j < m) {
                    (true, true) => *a.get(i, j),
                    (false, false) => *b.get(i - m, j - m),
                    _ => zero,
                })
                .collect()
        })
        .collect();
    SkewMatrix::from_rows(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn square_is_determinant(x in scalar_skew(5)) {
        let pf = pfaffian(&x).unwrap();
        prop_assert_eq!(pf.mul(&pf).v, det(&dense(&x)).unwrap());
    }

    #[test]
    fn swapping_flips_sign(x in scalar_skew(4), i in 0usize..8, j in 0usize..8) {
        let (i, j) = (i % x.size(), j % x.size());
        prop_assume!(i != j);
        prop_assert_eq!(pfaffian(&x.swap(i, j)).unwrap(), pfaffian(&x).unwrap().neg());
    }

    #[test]
    fn block_diagonal_is_multiplicative(a in scalar_skew(3), b in scalar_skew(2)) {
        let expected = pfaffian(&a).unwrap().mul(&pfaffian(&b).unwrap());
        prop_assert_eq!(pfaffian(&block_diagonal(&a, &b)).unwrap(), expected);
    }

    #[test]
    fn scalar_adjoint_identity(x in scalar_skew(4)) {
        let pf = pfaffian(&x).unwrap();
        let adj = pfaffian_adjoint(&x).unwrap();
        for (i, row) in x.product(&adj).iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                prop_assert_eq!(v.v, if i == j { pf.v } else { 0 });
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn polynomial_adjoint_identity(x in linear_skew(4)) {
        let pf = pfaffian(&x).unwrap();
        let adj = pfaffian_adjoint(&x).unwrap();
        for (i, row) in x.product(&adj).iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { pf.clone() } else { pf.zero_like() };
                prop_assert_eq!(v, &expected);
            }
        }
    }

    #[test]
    fn polynomial_square_is_determinant(x in linear_skew(3)) {
        let pf = pfaffian(&x).unwrap();
        prop_assert_eq!(poly_det(&poly_matrix(&x)).unwrap(), pf.mul(&pf));
    }

    #[test]
    fn maximal_pfaffians_are_syzygies(x in linear_skew(2), extra in proptest::collection::vec(0..P as u32, 4)) {
        // Border an even matrix to odd size; the signed maximal Pfaffians
        // then form a vector killed by X.
        let n = x.size() + 1;
        let zero = SparsePoly::zero(prime(), 3);
        let mut rows: Vec<Vec<SparsePoly>> = (0..n).map(|_| vec![zero.clone(); n]).collect();
        for i in 0..x.size() {
            for j in 0..x.size() {
                rows[i][j] = x.get(i, j).clone();
            }
            let mut e = vec![0; 3];
            e[i % 3] = 1;
            let mut c = SparsePoly::zero(prime(), 3);
            c.add_term(e, extra[i % extra.len()]);
            rows[i][n - 1] = c.clone();
            rows[n - 1][i] = c.neg();
        }
        let y = SkewMatrix::from_rows(rows).unwrap();
        let pfs = signed_maximal_pfaffians(&y).unwrap();
        for i in 0..n {
            let mut acc = zero.clone();
            for (j, pf) in pfs.iter().enumerate() {
                acc = acc.add(&y.get(i, j).mul(pf));
            }
            prop_assert!(acc.is_zero(), "row {}", i);
        }
    }
}

#[test]
fn odd_size_has_no_pfaffian() {
    let zero = Fp::new(prime(), 0);
    let x = SkewMatrix::from_upper(3, &zero, &[Fp::new(prime(), 1), Fp::new(prime(), 2), Fp::new(prime(), 3)]).unwrap();
    assert!(pfaffian(&x).is_err());
}
