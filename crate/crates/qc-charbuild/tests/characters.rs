use std::collections::BTreeMap;

use proptest::prelude::*;
use qc_cartan::{CartanData, Series};
use qc_charbuild::{
    a_coordinates, build_graph, check_monom_shape, chi_i_expand, export_dot, fm_expand,
    fundamental_table, fundamental_terms, restriction_strings, unique_dominant_product, FmFailure,
    FmLimits, HighestWeightData,
};
use qc_screening::in_kernel_all;
use qc_sl2::{chi_irreducible, chi_wr, string_patterns};
use qc_ypoly::{a_monomial, alpha, classical_character, weight_of, YMono};

fn cd(series: Series, rank: usize) -> CartanData {
    CartanData::build(series, rank).unwrap()
}

fn mono(pairs: &[(usize, i64, i64)]) -> YMono {
    YMono::from_pairs(pairs)
}

/// The (series, rank) pairs the fundamental machinery is exercised on.
fn table_cases() -> Vec<(Series, usize)> {
    let mut v = Vec::new();
    for l in 1..=5 {
        v.push((Series::A, l));
    }
    for l in 2..=4 {
        v.push((Series::B, l));
        v.push((Series::C, l));
    }
    for l in 3..=4 {
        v.push((Series::D, l));
    }
    v
}

fn expected_term_count(series: Series, l: usize) -> usize {
    match series {
        Series::A => l + 1,
        Series::B => 2 * l + 1,
        Series::C | Series::D => 2 * l,
    }
}

#[test]
fn fundamental_term_counts() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let terms = fundamental_terms(&data, 0).unwrap();
        assert_eq!(
            terms.len(),
            expected_term_count(series, l),
            "{series:?}{l} term count"
        );
        let table = fundamental_table(&data, 0).unwrap();
        assert_eq!(table.num_terms(), terms.len(), "{series:?}{l} all coeff 1");
    }
}

#[test]
fn fundamental_closed_forms_rank_two() {
    let b2 = cd(Series::B, 2);
    let expect = vec![
        mono(&[(1, 0, 1)]),
        mono(&[(1, 4, -1), (2, 1, 1), (2, 3, 1)]),
        mono(&[(2, 1, 1), (2, 5, -1)]),
        mono(&[(1, 2, 1), (2, 3, -1), (2, 5, -1)]),
        mono(&[(1, 6, -1)]),
    ];
    assert_eq!(fundamental_terms(&b2, 0).unwrap(), expect);

    let c2 = cd(Series::C, 2);
    let expect = vec![
        mono(&[(1, 0, 1)]),
        mono(&[(1, 2, -1), (2, 1, 1)]),
        mono(&[(1, 4, 1), (2, 5, -1)]),
        mono(&[(1, 6, -1)]),
    ];
    assert_eq!(fundamental_terms(&c2, 0).unwrap(), expect);
}

#[test]
fn fundamental_closed_form_d4() {
    // the fork at node 2 produces the four middle terms, two of them
    // reachable two ways (the diamond)
    let d4 = cd(Series::D, 4);
    let expect = vec![
        mono(&[(1, 0, 1)]),
        mono(&[(1, 2, -1), (2, 1, 1)]),
        mono(&[(2, 3, -1), (3, 2, 1), (4, 2, 1)]),
        mono(&[(3, 4, -1), (4, 2, 1)]),
        mono(&[(3, 2, 1), (4, 4, -1)]),
        mono(&[(2, 3, 1), (3, 4, -1), (4, 4, -1)]),
        mono(&[(1, 4, 1), (2, 5, -1)]),
        mono(&[(1, 6, -1)]),
    ];
    assert_eq!(fundamental_terms(&d4, 0).unwrap(), expect);
}

#[test]
fn fundamental_telescopes_to_a_single_inverse() {
    // the alternating product collapses so the last term is a lone Y^{-1} at
    // node 1; its position doubles as a consistency check on every
    // intermediate step
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let a = -3;
        let li = l as i64;
        let last_pos = match series {
            Series::A => a + li + 1,
            Series::B => a + 4 * li - 2,
            Series::C => a + 2 * li + 2,
            Series::D => a + 2 * li - 2,
        };
        let terms = fundamental_terms(&data, a).unwrap();
        let (node, pos) = match series {
            Series::A => (l, a + li + 1),
            _ => (1, last_pos),
        };
        assert_eq!(
            terms.last().unwrap(),
            &mono(&[(node, pos, -1)]),
            "{series:?}{l} lowest term"
        );
    }
}

#[test]
fn fundamental_matches_fixed_point_completion() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let hw = HighestWeightData::first_fundamental(0);
        let completed = fm_expand(&data, &hw, FmLimits::default()).unwrap();
        let table = fundamental_table(&data, 0).unwrap();
        assert_eq!(completed, table, "{series:?}{l}");
    }
}

#[test]
fn fundamentals_lie_in_the_screening_kernel() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let table = fundamental_table(&data, 2).unwrap();
        assert!(in_kernel_all(&data, &table).unwrap(), "{series:?}{l}");
    }
}

#[test]
fn fundamental_classical_weights_are_multiplicity_free() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let table = fundamental_table(&data, 0).unwrap();
        let weights = classical_character(&table, &data).unwrap();
        assert_eq!(weights.len(), expected_term_count(series, l));
        assert!(weights.values().all(|&m| m == 1), "{series:?}{l}");
    }
}

#[test]
fn generator_weights_are_simple_roots() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        for i in 1..=l {
            let a = a_monomial(&data, i, 5).unwrap();
            assert_eq!(weight_of(&a, &data).unwrap(), alpha(&data, i));
        }
    }
}

#[test]
fn restriction_strings_examples() {
    let a2 = cd(Series::A, 2);
    let table = fundamental_table(&a2, 0).unwrap();
    assert_eq!(
        restriction_strings(&a2, 1, &table).unwrap(),
        vec![(vec![], 1), (vec![0], 1)]
    );
    assert_eq!(
        restriction_strings(&a2, 2, &table).unwrap(),
        vec![(vec![], 1), (vec![1], 1)]
    );
}

#[test]
fn fundamental_restrictions_decompose_with_full_dimension() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let table = fundamental_table(&data, 0).unwrap();
        let dim = table.eval_ones();
        for i in 1..=l {
            let strings = restriction_strings(&data, i, &table)
                .unwrap_or_else(|e| panic!("{series:?}{l} node {i}: {e}"));
            assert!(strings.iter().all(|(_, m)| *m > 0));
            let total: i64 = strings
                .iter()
                .map(|(roots, m)| {
                    let (_, patterns) = string_patterns(roots, data.sym(i));
                    m * patterns.len() as i64
                })
                .sum();
            assert_eq!(total, dim, "{series:?}{l} node {i}");
        }
    }
}

#[test]
fn two_root_completion_is_consistent() {
    // one node-1 string of length two: six terms, one dominant monomial,
    // kernel membership, and every term an A^{-1}-product over the highest
    let a2 = cd(Series::A, 2);
    let mut hw = HighestWeightData::new();
    hw.add_root(1, 0);
    hw.add_root(1, 2);
    let p = fm_expand(&a2, &hw, FmLimits::default()).unwrap();
    assert_eq!(p.eval_ones(), 6);
    assert_eq!(p.dominant_monomials().len(), 1);
    assert!(in_kernel_all(&a2, &p).unwrap());
    assert!(check_monom_shape(&a2, &p, &hw));
}

#[test]
fn completion_reports_an_extra_dominant_monomial() {
    // {0, 0, 2} is the minimal irregular multiset: the completion stabilizes
    // but picks up the dominant monomial Y_{1,0} below the top
    let a1 = cd(Series::A, 1);
    let mut hw = HighestWeightData::new();
    hw.add_root(1, 0);
    hw.add_root(1, 0);
    hw.add_root(1, 2);
    match fm_expand(&a1, &hw, FmLimits::default()) {
        Err(FmFailure::ExtraDominant(m)) => assert_eq!(m, YMono::var(1, 0, 1)),
        other => panic!("expected an extra-dominant failure, got {other:?}"),
    }
}

#[test]
fn completion_respects_term_limits() {
    let a2 = cd(Series::A, 2);
    let hw = HighestWeightData::first_fundamental(0);
    let limits = FmLimits {
        max_terms: 1,
        max_iterations: 100,
    };
    assert!(matches!(
        fm_expand(&a2, &hw, limits),
        Err(FmFailure::LimitExceeded { .. })
    ));
}

#[test]
fn unique_dominant_examples() {
    let w1 = chi_wr(0, 1);
    let far = chi_wr(5, 2);
    assert!(unique_dominant_product(&[w1.clone(), far]));
    // adjacent strings overlap: the unit monomial shows up as a second
    // dominant term of the product
    let w2 = chi_wr(2, 1);
    assert!(!unique_dominant_product(&[w1.clone(), w2]));
    let d4 = cd(Series::D, 4);
    assert!(unique_dominant_product(&[fundamental_table(&d4, 0).unwrap()]));
}

#[test]
fn shape_check_accepts_fundamentals() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let hw = HighestWeightData::first_fundamental(0);
        let table = fundamental_table(&data, 0).unwrap();
        assert!(check_monom_shape(&data, &table, &hw), "{series:?}{l}");
    }
}

#[test]
fn graph_of_a_rank_one_string() {
    let a1 = cd(Series::A, 1);
    let mut hw = HighestWeightData::new();
    hw.add_root(1, -1);
    hw.add_root(1, 1);
    let p = chi_wr(0, 2);
    let g = build_graph(&a1, &p, &hw).unwrap();
    assert_eq!(g.vertices.len(), 3);
    let top = g
        .vertices
        .iter()
        .position(|(m, _)| *m == mono(&[(1, -1, 1), (1, 1, 1)]))
        .unwrap();
    let mid = g
        .vertices
        .iter()
        .position(|(m, _)| *m == mono(&[(1, -1, 1), (1, 3, -1)]))
        .unwrap();
    let bot = g
        .vertices
        .iter()
        .position(|(m, _)| *m == mono(&[(1, 1, -1), (1, 3, -1)]))
        .unwrap();
    assert_eq!(g.highest, top);
    assert_eq!(g.edges, vec![(top, mid, 1, 2), (mid, bot, 1, 0)]);
    assert!(g.reachable_from_highest().iter().all(|&b| b));
}

#[test]
fn graph_of_a3_fundamental_is_a_path() {
    let a3 = cd(Series::A, 3);
    let hw = HighestWeightData::first_fundamental(0);
    let p = fundamental_table(&a3, 0).unwrap();
    let g = build_graph(&a3, &p, &hw).unwrap();
    assert_eq!(g.vertices.len(), 4);
    assert_eq!(g.edges.len(), 3);
    let mut colors: Vec<(usize, i64)> = g.edges.iter().map(|&(_, _, i, c)| (i, c)).collect();
    colors.sort();
    assert_eq!(colors, vec![(1, 1), (2, 2), (3, 3)]);
    assert!(g.reachable_from_highest().iter().all(|&b| b));
    assert!(g.notes.is_empty());
}

#[test]
fn graph_of_d4_fundamental_is_a_diamond() {
    let d4 = cd(Series::D, 4);
    let hw = HighestWeightData::first_fundamental(0);
    let p = fundamental_table(&d4, 0).unwrap();
    let g = build_graph(&d4, &p, &hw).unwrap();
    assert_eq!(g.vertices.len(), 8);
    assert_eq!(g.edges.len(), 8);
    let mut labels: Vec<(usize, i64)> = g.edges.iter().map(|&(_, _, i, c)| (i, c)).collect();
    labels.sort();
    assert_eq!(
        labels,
        vec![
            (1, 1),
            (1, 5),
            (2, 2),
            (2, 4),
            (3, 3),
            (3, 3),
            (4, 3),
            (4, 3)
        ]
    );
    // fork below Y_{2,3}^{-1}Y_{3,2}Y_{4,2}, merge above Y_{2,3}Y_{3,4}^{-1}Y_{4,4}^{-1}
    let fork = g
        .vertices
        .iter()
        .position(|(m, _)| *m == mono(&[(2, 3, -1), (3, 2, 1), (4, 2, 1)]))
        .unwrap();
    let merge = g
        .vertices
        .iter()
        .position(|(m, _)| *m == mono(&[(2, 3, 1), (3, 4, -1), (4, 4, -1)]))
        .unwrap();
    assert_eq!(g.edges.iter().filter(|&&(f, _, _, _)| f == fork).count(), 2);
    assert_eq!(g.edges.iter().filter(|&&(_, t, _, _)| t == merge).count(), 2);
    assert!(g.reachable_from_highest().iter().all(|&b| b));

    let dot1 = export_dot(&g);
    let dot2 = export_dot(&build_graph(&d4, &p, &hw).unwrap());
    assert_eq!(dot1, dot2);
    assert!(dot1.contains("-> "));
}

#[test]
fn graphs_of_all_table_fundamentals_are_connected() {
    for (series, l) in table_cases() {
        let data = cd(series, l);
        let hw = HighestWeightData::first_fundamental(0);
        let p = fundamental_table(&data, 0).unwrap();
        let g = build_graph(&data, &p, &hw).unwrap();
        assert!(
            g.reachable_from_highest().iter().all(|&b| b),
            "{series:?}{l}"
        );
    }
}

#[test]
fn graph_rejects_a_missing_highest_monomial() {
    let a2 = cd(Series::A, 2);
    let hw = HighestWeightData::first_fundamental(0);
    let mut p = fundamental_table(&a2, 0).unwrap();
    p.add_term(YMono::var(1, 0, 1), -1); // strike the top term
    assert!(build_graph(&a2, &p, &hw).is_err());
}

#[test]
fn highest_weight_json_errors() {
    assert!(HighestWeightData::from_json(r#"{"roots":{"x":[0]}}"#).is_err());
    assert!(HighestWeightData::from_json("not json").is_err());
    let hw = HighestWeightData::from_json(r#"{"roots":{}}"#).unwrap();
    assert!(hw.is_empty());
}

#[test]
fn color_expansion_agrees_with_the_rank_one_character() {
    // on the scaled lattice of a long node the expansion is the rank-one
    // character with doubled spacing
    let b2 = cd(Series::B, 2);
    let p = chi_i_expand(&b2, 2, &[0, 2]).unwrap();
    assert_eq!(p.num_terms(), chi_irreducible(&[0, 2]).num_terms());
    let q = chi_i_expand(&b2, 1, &[0, 4]).unwrap();
    assert_eq!(q.num_terms(), chi_irreducible(&[0, 2]).num_terms());
}

fn series_rank_strategy() -> impl Strategy<Value = (Series, usize)> {
    prop_oneof![
        Just((Series::A, 1)),
        Just((Series::A, 2)),
        Just((Series::A, 3)),
        Just((Series::B, 2)),
        Just((Series::C, 2)),
        Just((Series::D, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completion_commutes_with_translation(
        (series, l) in series_rank_strategy(),
        node in 1usize..=3,
        pos in -6i64..=6,
        d in -4i64..=4,
    ) {
        let data = cd(series, l);
        let node = (node - 1) % l + 1;
        let mut hw = HighestWeightData::new();
        hw.add_root(node, pos);
        let base = fm_expand(&data, &hw, FmLimits::default()).unwrap();
        let shifted = fm_expand(&data, &hw.shift(d), FmLimits::default()).unwrap();
        prop_assert_eq!(base.shift(d), shifted);
    }

    #[test]
    fn coordinates_recover_generator_products(
        (series, l) in series_rank_strategy(),
        factors in proptest::collection::vec((1usize..=3, -5i64..=5), 0..4),
        top in -4i64..=4,
    ) {
        let data = cd(series, l);
        let highest = YMono::var(1, top, 1);
        let mut m = highest.clone();
        let mut expect: BTreeMap<(usize, i64), i64> = BTreeMap::new();
        for &(node, c) in &factors {
            let node = (node - 1) % l + 1;
            m = m.mul(&a_monomial(&data, node, c).unwrap().inv());
            *expect.entry((node, c)).or_insert(0) += 1;
        }
        let coords = a_coordinates(&data, &highest, &m);
        prop_assert_eq!(coords, Some(expect));
    }

    #[test]
    fn completed_characters_pass_the_kernel_test(
        (series, l) in series_rank_strategy(),
        node in 1usize..=3,
        pos in -4i64..=4,
    ) {
        let data = cd(series, l);
        let node = (node - 1) % l + 1;
        let mut hw = HighestWeightData::new();
        hw.add_root(node, pos);
        let p = fm_expand(&data, &hw, FmLimits::default()).unwrap();
        prop_assert!(in_kernel_all(&data, &p).unwrap());
        prop_assert!(check_monom_shape(&data, &p, &hw));
    }
}
