mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{cofactor_charpoly, oracle_matmul, Q};
use hyperalg_core::fixtures;
use hyperalg_core::graph::*;
use hyperalg_core::hypermatrix::Permutation;
use hyperalg_core::power::Formulation;
use hyperalg_core::product::Convention;
use hyperalg_core::random::seeded;
use hyperalg_core::scalar::{Backend, Rational, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn adjacency_rows(g: &Graph) -> Vec<Vec<i64>> {
    (0..g.n()).map(|u| (0..g.n()).map(|v| i64::from(g.has_edge(u, v))).collect()).collect()
}

fn as_i64(p: Vec<BigInt>) -> Vec<i64> {
    p.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
}

fn exact_settings() -> InvariantSettings {
    InvariantSettings {
        semantics: Semantics::Walks,
        formulation: Formulation::Second,
        convention: Convention::Literal,
        backend: Backend::Exact,
    }
}

fn nonzeros(h: &Q) -> BTreeSet<Vec<usize>> {
    h.indexed().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

#[test]
fn cospectral_pair_has_expected_polynomial() {
    let star = fixtures::star_k14();
    let c4k1 = fixtures::cycle_c4_k1();
    let expected = vec![0, 0, 0, -4, 0, 1];
    assert_eq!(cofactor_charpoly(&adjacency_rows(&star)), expected);
    assert_eq!(cofactor_charpoly(&adjacency_rows(&c4k1)), expected);
    assert_eq!(as_i64(charpoly(&star)), expected);
    assert!(cospectral(&star, &c4k1));
    for tau in 0..=5 {
        assert!(shifted_walk_relation(&star, &c4k1, tau), "tau {tau}");
    }
}

#[test]
fn charpoly_matches_cofactor_oracle() {
    let mut rng = seeded(31);
    for case in 0..60 {
        let n = rng.gen_range(1..=6);
        let g = Graph::random(n, 0.4, case % 2 == 0, &mut rng);
        assert_eq!(as_i64(charpoly(&g)), cofactor_charpoly(&adjacency_rows(&g)), "case {case}");
    }
}

#[test]
fn cospectrality_is_an_equivalence() {
    let graphs: Vec<Graph> = Graph::all_undirected(4).collect();
    let mut rng = seeded(32);
    for _ in 0..300 {
        let [a, b, c] = [0; 3].map(|_| &graphs[rng.gen_range(0..graphs.len())]);
        assert!(cospectral(a, a));
        assert_eq!(cospectral(a, b), cospectral(b, a));
        if cospectral(a, b) && cospectral(b, c) {
            assert!(cospectral(a, c));
        }
    }
    let k2 = Graph::from_edges(2, &[(0, 1)], true).unwrap();
    assert!(!cospectral(&k2, &Graph::empty(2, true)));
    assert!(!cospectral(&k2, &Graph::empty(3, true)));
}

#[test]
fn shifted_relation_on_small_cospectral_classes() {
    for n in 1..=4 {
        let mut buckets: BTreeMap<Vec<BigInt>, Vec<Graph>> = BTreeMap::new();
        for g in Graph::all_undirected(n) {
            buckets.entry(charpoly(&g)).or_default().push(g);
        }
        for class in buckets.values() {
            for tau in 0..=5 {
                assert!(shifted_walk_relation(&class[0], &class[class.len() - 1], tau));
            }
        }
    }
    let k2 = Graph::from_edges(2, &[(0, 1)], true).unwrap();
    assert!(!shifted_walk_relation(&k2, &Graph::empty(2, true), 0));
}

#[test]
fn star_inflation() {
    let star = fixtures::star_k14();
    assert_eq!(star.edge_count(), 8);
    let a = inflate::<Rational>(&star, Semantics::Walks, ()).unwrap();
    let mut expected = BTreeSet::new();
    for i in 1..5 {
        for j in 1..5 {
            expected.insert(vec![i, 0, j]);
        }
        expected.insert(vec![0, i, 0]);
    }
    assert_eq!(nonzeros(&a), expected);
    let paths = inflate::<Rational>(&star, Semantics::Paths, ()).unwrap();
    assert_eq!(nonzeros(&paths).len(), 12);
    let empty = inflate::<Rational>(&Graph::empty(3, false), Semantics::Walks, ()).unwrap();
    assert!(empty.is_zero());
}

#[test]
fn inflation_structure() {
    let mut rng = seeded(33);
    for case in 0..40 {
        let n = rng.gen_range(1..=5);
        let mut g = Graph::random(n, 0.5, case % 3 == 0, &mut rng);
        if case % 5 == 0 {
            g.add_edge(0, 0).unwrap();
        }
        let walks = inflate::<Rational>(&g, Semantics::Walks, ()).unwrap();
        let paths = inflate::<Rational>(&g, Semantics::Paths, ()).unwrap();
        assert!(nonzeros(&paths).is_subset(&nonzeros(&walks)));
        assert!(walks.is_binary());

        // length-two walk marginalisation
        let m = g.adjacency::<Rational>(()).unwrap();
        let m2 = oracle_matmul(&m, &m);
        for r in 0..n {
            for b in 0..n {
                let total = (0..n).fold(Rational::from(0), |s, mid| &s + walks.get(&[r, mid, b]).unwrap());
                assert_eq!(&total, m2.get(&[r, b]).unwrap());
            }
        }

        // inflate(σG) relabels the inflation by σ⁻¹
        let sigma = Permutation::random(n, &mut rng);
        let moved = inflate::<Rational>(&g.relabel(&sigma).unwrap(), Semantics::Walks, ()).unwrap();
        assert_eq!(moved, walks.permute_indices(&sigma.inverse()).unwrap(), "case {case}");
    }
}

#[test]
fn invariants_survive_relabelling() {
    let mut rng = seeded(34);
    for case in 0..15 {
        let n = rng.gen_range(1..=4);
        let g = Graph::random(n, 0.5, case % 2 == 0, &mut rng);
        let sigma = Permutation::random(n, &mut rng);
        let h = g.relabel(&sigma).unwrap();
        for formulation in [Formulation::First, Formulation::Second] {
            let s = InvariantSettings { formulation, ..exact_settings() };
            assert_eq!(hypergraph_invariant(&g, "G", &s).unwrap(), hypergraph_invariant(&h, "G", &s).unwrap());
        }
    }
    // two different leaf labellings of the star
    let a = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], true).unwrap();
    let b = Graph::from_edges(5, &[(3, 0), (3, 1), (3, 2), (3, 4)], true).unwrap();
    let s = exact_settings();
    assert_eq!(hypergraph_invariant(&a, "K14", &s).unwrap(), hypergraph_invariant(&b, "K14", &s).unwrap());
}

#[test]
fn verdicts() {
    let star = fixtures::star_k14();
    let c4k1 = fixtures::cycle_c4_k1();
    let s = exact_settings();
    let d = distinguish((&star, "k14"), (&c4k1, "c4k1"), &s).unwrap();
    assert_eq!(d.verdict, Verdict::DifferentInvariant);
    assert_ne!(d.reports[0].rank, d.reports[1].rank);

    let mut rng = seeded(35);
    let sigma = Permutation::random(5, &mut rng);
    let moved = c4k1.relabel(&sigma).unwrap();
    assert_eq!(distinguish((&c4k1, "a"), (&moved, "b"), &s).unwrap().verdict, Verdict::SameInvariant);

    let k2 = Graph::from_edges(2, &[(0, 1)], true).unwrap();
    let e2 = Graph::empty(2, true);
    assert_eq!(distinguish((&k2, "k2"), (&e2, "2k1"), &s).unwrap().verdict, Verdict::NotCospectral);
}

#[test]
fn graph_text_formats() {
    let l = load_graph("0 1\n1 2\n2 0", GraphFormat::Edgelist, false).unwrap();
    assert_eq!(l.graph.edges().collect::<Vec<_>>(), [(0, 1), (1, 2), (2, 0)]);
    let g6 = load_graph("Ds_\n", GraphFormat::Graph6, false).unwrap().graph;
    assert_eq!(g6, fixtures::star_k14());
    assert_eq!(encode_graph6(&fixtures::cycle_c4_k1()).unwrap(), "Dl?");
}

proptest! {
    #[test]
    fn graph6_round_trip(seed in any::<u64>(), n in 0usize..70) {
        let mut rng = seeded(seed);
        let g = Graph::random(n, 0.3, true, &mut rng);
        let s = encode_graph6(&g).unwrap();
        let back = decode_graph6(&s).unwrap();
        prop_assert_eq!(encode_graph6(&back).unwrap(), s);
        prop_assert_eq!(back, g);
    }
}
