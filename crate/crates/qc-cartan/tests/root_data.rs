use qc_cartan::{det_i64, CartanData, QLaurent, Series};

fn all_supported() -> Vec<CartanData> {
    let mut out = Vec::new();
    for l in 1..=8 {
        out.push(CartanData::build(Series::A, l).unwrap());
    }
    for l in 2..=8 {
        out.push(CartanData::build(Series::B, l).unwrap());
        out.push(CartanData::build(Series::C, l).unwrap());
    }
    for l in 3..=8 {
        out.push(CartanData::build(Series::D, l).unwrap());
    }
    out
}

#[test]
fn known_small_cases() {
    let a1 = CartanData::build(Series::A, 1).unwrap();
    assert_eq!(a1.c, vec![vec![2]]);
    assert_eq!(a1.i_mat, vec![vec![0]]);
    assert_eq!(a1.r, vec![1]);
    assert_eq!((a1.rvee, a1.hvee), (1, 2));

    let b2 = CartanData::build(Series::B, 2).unwrap();
    assert_eq!(b2.c, vec![vec![2, -1], vec![-2, 2]]);
    assert_eq!(b2.r, vec![2, 1]);
    assert_eq!(b2.i_mat, vec![vec![0, 1], vec![2, 0]]);
    assert_eq!((b2.rvee, b2.hvee), (2, 3));

    let a2 = CartanData::build(Series::A, 2).unwrap();
    assert_eq!(a2.c, vec![vec![2, -1], vec![-1, 2]]);

    let c3 = CartanData::build(Series::C, 3).unwrap();
    assert_eq!(
        c3.c,
        vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]
    );
    assert_eq!(c3.r, vec![1, 1, 2]);
    assert_eq!((c3.rvee, c3.hvee), (2, 4));

    let d4 = CartanData::build(Series::D, 4).unwrap();
    assert_eq!(
        d4.c,
        vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2]
        ]
    );
    assert_eq!((d4.rvee, d4.hvee), (1, 6));
}

#[test]
fn coxeter_table() {
    for l in 1..=8 {
        assert_eq!(CartanData::build(Series::A, l).unwrap().hvee, l as i64 + 1);
    }
    for l in 2..=8 {
        assert_eq!(
            CartanData::build(Series::B, l).unwrap().hvee,
            2 * l as i64 - 1
        );
        assert_eq!(CartanData::build(Series::C, l).unwrap().hvee, l as i64 + 1);
    }
    for l in 3..=8 {
        assert_eq!(
            CartanData::build(Series::D, l).unwrap().hvee,
            2 * l as i64 - 2
        );
    }
}

#[test]
fn cartan_is_two_id_minus_incidence() {
    for cd in all_supported() {
        for i in 0..cd.rank {
            for j in 0..cd.rank {
                let id = if i == j { 2 } else { 0 };
                assert_eq!(cd.c[i][j], id - cd.i_mat[i][j], "{} {}", cd.series, cd.rank);
            }
        }
    }
}

#[test]
fn symmetrized_matrix_is_symmetric() {
    for cd in all_supported() {
        for i in 0..cd.rank {
            for j in 0..cd.rank {
                assert_eq!(
                    cd.r[i] * cd.c[i][j],
                    cd.r[j] * cd.c[j][i],
                    "{} rank {} at ({i},{j})",
                    cd.series,
                    cd.rank
                );
            }
        }
    }
}

#[test]
fn cartan_determinant_nonzero() {
    for cd in all_supported() {
        let d = det_i64(&cd.c);
        assert_ne!(d, 0, "{} rank {}", cd.series, cd.rank);
        // classical values: det A_l = l+1, det B_l = det C_l = 2, det D_l = 4
        let expect = match cd.series {
            Series::A => cd.rank as i64 + 1,
            Series::B | Series::C => 2,
            Series::D => 4,
        };
        assert_eq!(d, expect, "{} rank {}", cd.series, cd.rank);
    }
}

#[test]
fn q_factorization_holds_exactly() {
    // B(q) = D(q) C(q) entrywise, and B(q) is symmetric with
    // B_ij(q) = [r_i C_ij]_q off the diagonal of blocks.
    for cd in all_supported() {
        let b = cd.q_b();
        for i in 0..cd.rank {
            for j in 0..cd.rank {
                assert_eq!(b[i][j], b[j][i], "{} rank {}", cd.series, cd.rank);
                let bij = cd.r[i] * cd.c[i][j];
                assert_eq!(
                    b[i][j],
                    if bij >= 0 {
                        QLaurent::qnum(bij)
                    } else {
                        -QLaurent::qnum(-bij)
                    },
                    "{} rank {} entry ({i},{j})",
                    cd.series,
                    cd.rank
                );
            }
        }
    }
}

#[test]
fn q_cartan_specializes_to_cartan_at_q_one() {
    for cd in all_supported() {
        let m = cd.q_cartan();
        for i in 0..cd.rank {
            for j in 0..cd.rank {
                let at_one: i64 = m[i][j].terms().map(|(_, c)| c).sum();
                assert_eq!(at_one, cd.c[i][j]);
            }
        }
    }
}

mod prop {
    use super::*;
    use proptest::prelude::*;

    fn arb_case() -> impl Strategy<Value = (Series, usize)> {
        prop_oneof![
            (1usize..=10).prop_map(|l| (Series::A, l)),
            (2usize..=10).prop_map(|l| (Series::B, l)),
            (2usize..=10).prop_map(|l| (Series::C, l)),
            (3usize..=10).prop_map(|l| (Series::D, l)),
        ]
    }

    proptest! {
        #[test]
        fn invariants_hold((series, rank) in arb_case()) {
            let cd = CartanData::build(series, rank).unwrap();
            // diagonal 2, off-diagonal <= 0
            for i in 0..rank {
                prop_assert_eq!(cd.c[i][i], 2);
                for j in 0..rank {
                    if i != j {
                        prop_assert!(cd.c[i][j] <= 0);
                        // zero pattern is symmetric even when values aren't
                        prop_assert_eq!(cd.c[i][j] == 0, cd.c[j][i] == 0);
                    }
                }
            }
            prop_assert_ne!(det_i64(&cd.c), 0);
            // diag(r) C symmetric
            for i in 0..rank {
                for j in 0..rank {
                    prop_assert_eq!(cd.r[i] * cd.c[i][j], cd.r[j] * cd.c[j][i]);
                }
            }
            // factorization B(q) = D(q) C(q) stays symmetric
            let b = cd.q_b();
            for i in 0..rank {
                for j in i+1..rank {
                    prop_assert_eq!(&b[i][j], &b[j][i]);
                }
            }
        }
    }
}
