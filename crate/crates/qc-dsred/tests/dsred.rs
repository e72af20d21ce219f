//! End-to-end checks that the substituted canonical-form coefficients equal
//! the completed fundamental characters of sl_N, with the alignment shift
//! computed rather than assumed.

use std::time::Instant;

use qc_cartan::{CartanData, Series};
use qc_charbuild::{fm_expand, FmLimits, HighestWeightData};
use qc_dsred::{
    align_shift, compare_with_qcharacter, mu_q_component, substitute_lambda, DsComparison,
    DsError, LambdaMono, LambdaPoly,
};
use qc_ypoly::{YMono, YPoly};

fn binom(n: usize, k: usize) -> usize {
    let mut v = 1usize;
    for t in 0..k {
        v = v * (n - t) / (t + 1);
    }
    v
}

#[test]
fn all_components_match_fundamental_characters() {
    let start = Instant::now();
    for n in 2..=5usize {
        for i in 1..n {
            for a in [-2i64, 0, 7] {
                let out = compare_with_qcharacter(n, i, a).unwrap();
                assert_eq!(
                    out,
                    DsComparison {
                        matches: true,
                        shift: 1 - i as i64,
                        terms: binom(n, i),
                    },
                    "N={n} i={i} a={a}"
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 10, "comparison table too slow");
}

#[test]
fn substituted_component_is_the_explicit_two_term_character() {
    // N=2: t_1 at a lands on Y_{1,a} + Y_{1,a+2}^{-1}.
    let p = mu_q_component(2, 1).unwrap();
    let got = substitute_lambda(&p, 4);
    let mut expect = YPoly::zero();
    expect.add_term(YMono::var(1, 4, 1), 1);
    expect.add_term(YMono::var(1, 6, -1), 1);
    assert_eq!(got, expect);
}

#[test]
fn substituted_component_matches_a_directly_built_character() {
    // N=4, i=2: six terms, equal to the completed ω_2 character of A_3
    // placed at the computed alignment position.
    let p = mu_q_component(4, 2).unwrap();
    let lhs = substitute_lambda(&p, 0);
    assert_eq!(lhs.num_terms(), 6);
    let c = align_shift(&lhs, 2).unwrap();
    assert_eq!(c, -1);
    let cd = CartanData::build(Series::A, 3).unwrap();
    let mut hw = HighestWeightData::new();
    hw.add_root(2, c);
    let rhs = fm_expand(&cd, &hw, FmLimits::default()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn alignment_rejects_polynomials_without_a_fundamental_head() {
    // Two dominant monomials.
    let mut p = YPoly::zero();
    p.add_term(YMono::var(1, 0, 1), 1);
    p.add_term(YMono::var(1, 2, 1), 1);
    assert!(matches!(align_shift(&p, 1), Err(DsError::NoAlignment(_))));

    // Single dominant monomial, but a square.
    let mut p = YPoly::zero();
    p.add_term(YMono::var(1, 0, 2), 1);
    assert!(matches!(align_shift(&p, 1), Err(DsError::NoAlignment(_))));

    // Wrong node.
    let mut p = YPoly::zero();
    p.add_term(YMono::var(2, 0, 1), 1);
    p.add_term(YMono::var(2, 2, -1), 1);
    assert!(matches!(align_shift(&p, 1), Err(DsError::NoAlignment(_))));
}

#[test]
fn eliminated_form_still_matches_the_character() {
    // Rewriting λ_N away through the determinant constraint must not change
    // the Y-image, so the comparison goes through on the reduced form too.
    for n in 2..=4usize {
        for i in 1..n {
            let reduced = mu_q_component(n, i).unwrap().eliminate_top();
            let lhs = substitute_lambda(&reduced, 3);
            let c = align_shift(&lhs, i).unwrap();
            let cd = CartanData::build(Series::A, n - 1).unwrap();
            let mut hw = HighestWeightData::new();
            hw.add_root(i, c);
            let rhs = fm_expand(&cd, &hw, FmLimits::default()).unwrap();
            assert_eq!(lhs, rhs, "N={n} i={i}");
        }
    }
}

#[test]
fn shifting_the_whole_sum_shifts_the_character() {
    // λ arguments step in q^2, the Y lattice in single units: replacing every
    // shift k by k+1 must move the character by two lattice positions.
    let p = mu_q_component(3, 2).unwrap();
    let mut stepped = LambdaPoly::zero(3);
    for (m, c) in p.terms() {
        let mut shifted = LambdaMono::one();
        for (sym, e) in m.iter() {
            shifted.mul_var(sym.index, sym.shift + 1, e);
        }
        stepped.add_term(shifted, c);
    }
    assert_eq!(
        substitute_lambda(&stepped, 0),
        substitute_lambda(&p, 0).shift(2)
    );
}
