//! Randomized invariants. Case counts are kept small because every series
//! here is computed exactly.

use kromatik::arith::{multinomial, q_multinomial, rat_int, QPoly};
use kromatik::coloring::{chromatic, kromatic, kromatic_l, kromatic_x, oracle};
use kromatik::graph::{all_posets, parse_input, Dag, Graph, Input, LabeledPoset};
use kromatik::orientation::ml_expansion_check;
use kromatik::qsym::{expand_in_basis, BasisId, Composition, TruncatedSeries};
use kromatik::tableaux::{enumerate_gpt, inv_count};
use kromatik::Variant;
use proptest::prelude::*;

fn qpoly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-4i64..=4, 0..4).prop_map(|c| QPoly::from_ints(&c))
}

fn composition(max: usize) -> impl Strategy<Value = Composition> {
    (0..=max).prop_flat_map(|d| {
        let all = Composition::all_of(d);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn series(n: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((composition(n), qpoly()), 0..4).prop_map(move |terms| {
        let mut s = TruncatedSeries::zero(n);
        for (a, c) in terms {
            s.add_term(a, &c);
        }
        s
    })
}

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (0..=max, any::<u64>()).prop_map(|(n, code)| Graph::from_code(n, code))
}

fn labeled_dag(max: usize) -> impl Strategy<Value = LabeledPoset> {
    (1..=max).prop_flat_map(|n| (Just(n), any::<u64>(), Just((1..=n as i64).collect::<Vec<_>>()).prop_shuffle())).prop_map(|(n, code, labels)| {
        let g = Graph::from_code(n, code);
        // orient every edge upward: always acyclic
        LabeledPoset::new(Dag::from_edges(n, &g.edges()), labels).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qpoly_ring(a in qpoly(), b in qpoly(), c in qpoly()) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), QPoly::zero());
    }

    #[test]
    fn qpoly_exact_division(a in qpoly(), b in qpoly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((a.clone() * b.clone()).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn qpoly_text_roundtrip(a in qpoly()) {
        prop_assert_eq!(a.to_string().parse::<QPoly>().unwrap(), a);
    }

    #[test]
    fn q_multinomial_at_one(parts in prop::collection::vec(0usize..4, 0..4)) {
        let r = parts.iter().sum();
        let qm = q_multinomial(r, &parts).unwrap();
        prop_assert!(qm.is_natural());
        prop_assert_eq!(qm.at_one(), rat_int(multinomial(r, &parts)));
    }

    #[test]
    fn quasi_shuffle_ring(a in series(5), b in series(5), c in series(5)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&TruncatedSeries::one(5)).unwrap(), a.clone());
    }

    #[test]
    fn coproduct_is_multiplicative(a in series(4), b in series(4)) {
        let lhs = a.mul(&b).unwrap().coproduct();
        let rhs = a.coproduct().mul(&b.coproduct());
        prop_assert!(lhs.first_difference(&rhs).is_none());
    }

    #[test]
    fn json_roundtrip(a in series(5)) {
        prop_assert_eq!(TruncatedSeries::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn lbar_roundtrip(a in series(5)) {
        let ex = expand_in_basis(&a, BasisId::Lbar).unwrap();
        prop_assert_eq!(ex.resum(), a);
    }

    #[test]
    fn rho_is_involution(a in series(5)) {
        prop_assert_eq!(a.rho().rho(), a);
    }

    #[test]
    fn graph_text_roundtrip(g in graph(6)) {
        match parse_input(&g.to_text()).unwrap() {
            Input::Graph { graph, weights } => {
                prop_assert_eq!(graph, g.clone());
                prop_assert!(weights.iter().all(|&w| w == 1));
            }
            other => prop_assert!(false, "parsed as {:?}", other),
        }
    }

    #[test]
    fn engine_matches_naive(g in graph(3), n in 0usize..=4) {
        for kind in oracle::SeriesKind::ALL {
            let naive = oracle::naive(&g, kind, n).unwrap();
            prop_assert_eq!(oracle::engine(&g, kind, n).to_text(), naive.to_text());
        }
    }

    #[test]
    fn kromatic_is_symmetric(g in graph(4)) {
        prop_assert!(kromatic(&g, 6).is_symmetric().is_ok());
    }

    #[test]
    fn lowest_degree_is_chromatic(g in graph(4)) {
        let n = g.n();
        prop_assert_eq!(kromatic(&g, n).component(n), chromatic(&g, n, false).component(n));
        prop_assert_eq!(kromatic_x(&g, n).component(n), chromatic(&g, n, true).component(n));
    }

    #[test]
    fn q_one_specialization(g in graph(4)) {
        prop_assert_eq!(chromatic(&g, 6, true).at_q_one(), chromatic(&g, 6, false));
        prop_assert_eq!(kromatic_l(&g, 5, Variant::AscMax).at_q_one(), kromatic(&g, 5));
    }

    #[test]
    fn disjoint_union_multiplies(g in graph(2), h in graph(2)) {
        let gh = g.disjoint_union(&h);
        prop_assert_eq!(kromatic(&gh, 5), kromatic(&g, 5).mul(&kromatic(&h, 5)).unwrap());
        prop_assert_eq!(kromatic_l(&gh, 5, Variant::AscMax), kromatic_l(&g, 5, Variant::AscMax).mul(&kromatic_l(&h, 5, Variant::AscMax)).unwrap());
    }

    #[test]
    fn multilinear_expansion(p in labeled_dag(4)) {
        prop_assert!(ml_expansion_check(&p, 5).is_ok());
    }

    #[test]
    fn coefficients_count_colorings(g in graph(4)) {
        // every coefficient of kromatic at q=1 is a nonnegative integer
        prop_assert!(kromatic(&g, 5).is_natural());
        prop_assert!(kromatic_x(&g, 5).map_coeffs(|c| QPoly::constant(c.at_one())).is_natural());
    }
}

#[test]
fn p_tableaux_are_valid() {
    for n in 0..=3 {
        for p in all_posets(n) {
            let g = p.incomparability_graph();
            for t in enumerate_gpt(&p, 6) {
                assert!(t.is_valid(&p), "{:?}", t);
                assert!(inv_count(&t, &g) <= 6 * 6);
            }
        }
    }
}
