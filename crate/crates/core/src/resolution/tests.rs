use super::homology::tate_square_is_zero;
use super::*;
use crate::polyring::parse_poly;

fn poly(p: u64, s: &str) -> HomogPoly {
    parse_poly(s, Prime::new(p).unwrap(), 3).unwrap()
}

fn twists(t: &BettiTable, i: usize) -> Vec<i64> {
    t.twists(i)
}

#[test]
fn complete_intersection_is_koszul() {
    let t = betti_over_p_ci(Prime::new(5).unwrap(), 3, 4).unwrap();
    assert_eq!(twists(&t, 1), vec![4, 4, 4]);
    assert_eq!(twists(&t, 2), vec![8, 8, 8]);
    assert_eq!(twists(&t, 3), vec![12]);
    assert_eq!(t.steps(), 3);
}

#[test]
fn over_p_compressed_quartic() {
    let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
    let res = resolve_over_p(&f, 7).unwrap();
    let t = &res.table;
    assert_eq!(twists(t, 1), vec![4, 7, 7, 7]);
    assert_eq!(twists(t, 2), [vec![11; 3], vec![12; 8]].concat());
    assert_eq!(twists(t, 3), vec![13; 8]);
    assert_eq!(t, &koszul_betti_over_p(&f, 7).unwrap());
    // Consecutive maps compose to zero over P.
    for w in res.maps.windows(2) {
        assert!(w[0].entries.mul(&w[1].entries).unwrap().is_zero());
    }
}

#[test]
fn over_p_euler_characteristic() {
    let f = poly(5, "x*y^2 + y*z^2 + z*x^2");
    let t = betti_over_p(&f, 5).unwrap();
    let profile = quotient_profile(&f, 5);
    for j in 0..30i64 {
        let mut chi: i64 = 0;
        for (i, tw, b) in t.entries() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            chi += sign * b as i64 * monomial_count(3, j - tw) as i64;
        }
        assert_eq!(chi, profile.get(j as usize).copied().unwrap_or(0) as i64, "j={j}");
    }
}

#[test]
fn over_r_tables_match_tate() {
    for (p, s, q) in [(7, "x*y^3 + y*z^3 + z*x^3", 7), (5, "x*y^2 + y*z^2 + z*x^2", 5), (7, "x^5 + y^5 + z^5", 7)] {
        let f = poly(p, s);
        let engine = betti_over_r(&f, q, 4, None).unwrap();
        let tate = tate_betti_over_r(&f, q, 4).unwrap();
        assert_eq!(engine, tate, "{s}");
    }
}

#[test]
fn over_r_quartic_grid() {
    let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
    let t = betti_over_r(&f, 7, 4, None).unwrap();
    let expected = "       0 1 2 3 4\n\
                    total: 1 3 8 8 8\n    \
                    0: 1 . . . .\n    \
                    6: . 3 . . .\n   \
                    10: . . 8 8 .\n   \
                    12: . . . . 8\n";
    assert_eq!(t.to_grid(), expected);
    let tail = detect_periodic_tail(&t).unwrap().unwrap();
    assert_eq!((tail.start, tail.rank, tail.gaps, tail.period_shift), (2, 8, Some((1, 3)), 4));
    assert_eq!(BettiTable::from_json(&t.to_json()).unwrap(), t);
}

#[test]
fn over_r_maps_compose_to_zero_mod_f() {
    let f = poly(5, "x*y^2 + y*z^2 + z*x^2");
    let res = resolve_over_r(&f, 5, 4, None).unwrap();
    let mut ring = GradedRing::new(f.prime(), 3, Some(&f));
    for w in res.maps.windows(2) {
        let prod = w[0].entries.mul(&w[1].entries).unwrap();
        for l in 0..prod.rows() {
            for k in 0..prod.cols() {
                let e = prod.get(l, k);
                if let Some(deg) = e.homogeneous_degree() {
                    let class = ring.class_of(&e.to_homog(deg).unwrap());
                    assert!(class.iter().all(|&c| c == 0));
                }
            }
        }
    }
}

#[test]
fn tate_differential_squares_to_zero() {
    assert!(tate_square_is_zero(&poly(5, "x*y^2 + y*z^2 + z*x^2"), 5, 5));
    assert!(tate_square_is_zero(&poly(7, "x^3*y - x*y^3 + x^3*z - x*z^3 - y*z^3"), 7, 4));
}

#[test]
fn cap_below_generators_is_rejected() {
    let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
    let err = betti_over_r(&f, 7, 3, Some(12)).unwrap_err();
    assert!(matches!(err, Error::UncertifiedCap { step: 2, .. }), "{err}");
}

#[test]
fn tail_matrix_factorization() {
    let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
    let mf = extract_tail_mf(&f, 7, 3).unwrap();
    assert_eq!((mf.a.rows(), mf.a.cols()), (8, 8));
    assert_eq!(mf.a.max_degree(), Some(1));
    assert_eq!(mf.b.max_degree(), Some(3));
    assert!(mf.verify().unwrap());
}

#[test]
fn koszul_table_has_no_tail() {
    let t = betti_over_p_ci(Prime::new(5).unwrap(), 3, 3).unwrap();
    let mut padded = BettiTable::new(RingTag::P, 4);
    for (i, j, b) in t.entries() {
        padded.add(i, j, b);
    }
    assert_eq!(detect_periodic_tail(&padded).unwrap(), None);
}
