//! Seeded instance generators for tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hardness::CnfFormula;
use crate::hypergraph::Hypergraph;
use crate::properties;

/// A hypergraph with at most `max_vertices` vertices and between 1 and
/// `max_edges` edges of size 1 to 4. Vertices are named `v0, v1, …` and
/// only those occurring in some edge exist.
pub fn hypergraph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Hypergraph {
    assert!(max_vertices >= 1 && max_edges >= 1);
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let pool: Vec<usize> = (0..n).collect();
    let edges: Vec<(String, Vec<String>)> = (0..m)
        .map(|i| {
            let size = rng.gen_range(1..=n.min(4));
            let mut vs: Vec<usize> = pool.choose_multiple(rng, size).copied().collect();
            vs.sort_unstable();
            (format!("e{i}"), vs.into_iter().map(|v| format!("v{v}")).collect())
        })
        .collect();
    Hypergraph::build(edges).expect("generated edges are non-empty with distinct names")
}

/// Like [`hypergraph`], resampled until the intersection width is at most
/// `iwidth`.
pub fn hypergraph_with_iwidth<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize, iwidth: usize) -> Hypergraph {
    loop {
        let h = hypergraph(rng, max_vertices, max_edges);
        if properties::iwidth(&h) <= iwidth {
            return h;
        }
    }
}

/// An essential hypergraph obtained by collapsing vertex types.
pub fn essential_hypergraph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Hypergraph {
    hypergraph(rng, max_vertices, max_edges).reduce_essential().hypergraph
}

/// `H_n`: the `n` edges `V_n ∖ {v_i}` over `v1..vn`.
pub fn complement_family(n: usize) -> Hypergraph {
    assert!(n >= 2);
    let edges: Vec<(String, Vec<String>)> = (1..=n)
        .map(|i| {
            let vs = (1..=n).filter(|&j| j != i).map(|j| format!("v{j}")).collect();
            (format!("e{i}"), vs)
        })
        .collect();
    Hypergraph::build(edges).expect("complement family is well formed")
}

/// A uniformly random 3CNF with `vars` variables and `clauses` clauses;
/// each clause uses three distinct variables when `vars ≥ 3`.
pub fn cnf<R: Rng>(rng: &mut R, vars: usize, clauses: usize) -> CnfFormula {
    assert!(vars >= 1 && clauses >= 1);
    let pool: Vec<usize> = (1..=vars).collect();
    let cs = (0..clauses)
        .map(|_| {
            let picks: Vec<usize> = if vars >= 3 {
                pool.choose_multiple(rng, 3).copied().collect()
            } else {
                (0..3).map(|_| *pool.choose(rng).expect("non-empty")).collect()
            };
            [0, 1, 2].map(|i| (picks[i], rng.gen_bool(0.5)))
        })
        .collect();
    CnfFormula::new(vars, cs).expect("variables are in range")
}

/// A random 3CNF together with an assignment satisfying it. Clauses are
/// resampled until the planted assignment satisfies them.
pub fn satisfiable_cnf<R: Rng>(rng: &mut R, vars: usize, clauses: usize) -> (CnfFormula, Vec<bool>) {
    let sigma: Vec<bool> = (0..vars).map(|_| rng.gen_bool(0.5)).collect();
    let mut out = Vec::with_capacity(clauses);
    while out.len() < clauses {
        let c = cnf(rng, vars, 1).clauses[0];
        if c.iter().any(|&(v, pos)| sigma[v - 1] == pos) {
            out.push(c);
        }
    }
    (CnfFormula::new(vars, out).expect("variables are in range"), sigma)
}
