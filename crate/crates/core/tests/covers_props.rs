mod common;

use common::{clique, hypergraphs};
use hgd_core::covers::{self, EdgeWeighting};
use hgd_core::oracle::{brute_rho, brute_rho_star};
use hgd_core::properties;
use hgd_core::rational::{int, ratio};
use hgd_core::{Hypergraph, Rational, VertexSet};
use proptest::prelude::*;

fn subset_of(h: &Hypergraph, mask: u32) -> VertexSet {
    (0..h.num_vertices()).filter(|v| mask >> v & 1 == 1).collect()
}

/// Total weight on each target vertex, recomputed from scratch.
fn coverage_ok(h: &Hypergraph, gamma: &EdgeWeighting, target: &VertexSet) -> bool {
    target.iter().all(|v| {
        let total: Rational = gamma.iter().filter(|(e, _)| h.edge(*e).vertices.contains(v)).map(|(_, w)| w.clone()).sum();
        total >= int(1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fractional_below_integral(h in hypergraphs(10, 7), mask in any::<u32>()) {
        let t = subset_of(&h, mask);
        let (g, rs) = covers::optimal_fractional_cover(&h, &t).unwrap();
        let (l, r) = covers::optimal_integral_cover(&h, &t).unwrap();
        prop_assert!(rs <= int(r as i64));
        prop_assert!(coverage_ok(&h, &g, &t));
        prop_assert!(coverage_ok(&h, &l, &t));
        prop_assert_eq!(g.weight(), rs.clone());
        prop_assert_eq!(l.weight(), int(r as i64));
        prop_assert!(l.is_integral());
        if h.num_vertices() <= 7 {
            prop_assert_eq!(brute_rho(&h, &t), Some(r));
            prop_assert_eq!(brute_rho_star(&h, &t), Some(rs));
        }
    }

    #[test]
    fn degree_rounding_bound(h in hypergraphs(10, 7), weights in prop::collection::vec(0i64..=4, 7)) {
        let mut gamma = EdgeWeighting::new();
        for e in 0..h.num_edges() {
            if weights[e] > 0 {
                gamma.set(e, ratio(weights[e], 4)).unwrap();
            }
        }
        let lambda = covers::degree_round(&h, &gamma);
        let d = properties::degree(&h) as i64;
        prop_assert!(lambda.weight() <= gamma.weight() * int(d));
        prop_assert!(gamma.covered(&h).is_subset(&lambda.covered(&h)));
    }

    #[test]
    fn optimum_ignores_duplicates_and_names(h in hypergraphs(8, 6), mask in any::<u32>()) {
        let t = subset_of(&h, mask);
        let base = covers::rho_star(&h, &t).unwrap();
        let mut edges: Vec<(String, Vec<String>)> = h
            .edges()
            .iter()
            .map(|e| (format!("x_{}", e.name), h.vertex_names_of(&e.vertices).iter().map(|v| format!("w_{v}")).collect()))
            .collect();
        edges.reverse();
        let first = edges[0].clone();
        edges.push((format!("{}_copy", first.0), first.1));
        let h2 = Hypergraph::build(edges).unwrap();
        let names: Vec<String> = t.iter().map(|v| format!("w_{}", h.vertex_name(v))).collect();
        let t2 = h2.vertex_set(&names).unwrap();
        prop_assert_eq!(covers::rho_star(&h2, &t2).unwrap(), base);
    }
}

#[test]
fn clique_law() {
    for n in 1..=4usize {
        let k = clique(2 * n);
        let all = k.all_vertices();
        assert_eq!(covers::rho(&k, &all).unwrap(), n);
        assert_eq!(covers::rho_star(&k, &all).unwrap(), int(n as i64));
    }
    let k3 = clique(3);
    assert_eq!(covers::rho_star(&k3, &k3.all_vertices()).unwrap(), ratio(3, 2));
}

#[test]
fn uncoverable_target() {
    let h = common::triangle();
    let mut t = h.all_vertices();
    t.insert(9);
    assert!(covers::rho(&h, &t).is_err());
}
