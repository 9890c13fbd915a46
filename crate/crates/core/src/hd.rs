//! Hypertree decompositions.

use crate::decomp::DecompositionTree;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational;
use crate::search::{Search, SearchParams};

/// An HD of width at most `k`, or `None` if `hw(H) > k`.
pub fn solve_hd(h: &Hypergraph, k: usize) -> Result<Option<DecompositionTree>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let params = SearchParams {
        k: rational::int(k as i64),
        c: 0,
        integral: true,
        strict: false,
        no_integral_part: false,
    };
    Ok(Search::new(h, params).run())
}

/// Least `k` with an HD of width `k`; 0 for the empty hypergraph.
pub fn hw(h: &Hypergraph) -> usize {
    if h.num_vertices() == 0 {
        return 0;
    }
    (1..=h.num_edges())
        .find(|&k| matches!(solve_hd(h, k), Ok(Some(_))))
        .expect("a single bag over all edges is an HD")
}
