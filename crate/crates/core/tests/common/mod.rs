#![allow(dead_code)]

use std::collections::BTreeSet;

use hgd_core::Hypergraph;
use proptest::prelude::*;

pub fn build(edges: &[(&str, &[&str])]) -> Hypergraph {
    Hypergraph::build(edges.iter().map(|(n, vs)| (*n, vs.to_vec()))).unwrap()
}

pub fn from_sets(sets: Vec<BTreeSet<usize>>) -> Hypergraph {
    Hypergraph::build(
        sets.into_iter()
            .enumerate()
            .map(|(i, s)| (format!("e{i}"), s.into_iter().map(|v| format!("v{v}")).collect::<Vec<_>>())),
    )
    .unwrap()
}

/// Hypergraphs on at most `max_vertices` vertices with 1..=`max_edges`
/// edges of size at most 4.
pub fn hypergraphs(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_vertices)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(4)), 1..=max_edges))
        .prop_map(from_sets)
}

pub fn clique(n: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((format!("e{i}_{j}"), vec![format!("v{i}"), format!("v{j}")]));
        }
    }
    Hypergraph::build(edges).unwrap()
}

pub fn triangle() -> Hypergraph {
    build(&[("e1", &["a", "b"]), ("e2", &["b", "c"]), ("e3", &["a", "c"])])
}
