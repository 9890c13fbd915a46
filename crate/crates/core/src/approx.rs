//! Turning FHDs into GHDs, and the width bounds that go with it.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bitset::{for_each_combination, VertexSet};
use crate::covers::{self, EdgeWeighting};
use crate::decomp::{validate, DecompKind, DecompositionTree};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::properties;
use crate::rational::{self, Rational};

fn check_fhd(h: &Hypergraph, f: &DecompositionTree) -> Result<()> {
    let as_fhd = f.clone().with_kind(DecompKind::Fhd);
    let violations = validate(h, &as_fhd, &f.width())?;
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidDecomposition(v.describe(h))),
    }
}

fn recover<F>(h: &Hypergraph, f: &DecompositionTree, cover: F) -> Result<DecompositionTree>
where
    F: Fn(&VertexSet, &EdgeWeighting) -> Result<EdgeWeighting> + Sync,
{
    check_fhd(h, f)?;
    let covers: Vec<EdgeWeighting> = f
        .nodes()
        .par_iter()
        .map(|n| cover(&n.bag, &n.cover))
        .collect::<Result<_>>()?;
    let mut out = f.clone().with_kind(DecompKind::Ghd);
    for (u, c) in covers.into_iter().enumerate() {
        out.node_mut(u).cover = c;
    }
    Ok(out)
}

/// Replaces every fractional cover by an optimal integral cover of its bag.
pub fn fhd_to_ghd_bagwise(h: &Hypergraph, f: &DecompositionTree) -> Result<DecompositionTree> {
    recover(h, f, |bag, _| Ok(covers::optimal_integral_cover(h, bag)?.0))
}

/// Rounds every cover with [`covers::degree_round`]; the width grows by at
/// most a factor `degree(h)`.
pub fn fhd_to_ghd_degree(h: &Hypergraph, f: &DecompositionTree) -> Result<DecompositionTree> {
    recover(h, f, |_, gamma| Ok(covers::degree_round(h, gamma)))
}

/// `τ(h)`: least number of vertices meeting every edge. Exhaustive, so
/// limited to `cap` vertices.
pub fn transversal(h: &Hypergraph, cap: usize) -> Result<usize> {
    if h.num_vertices() > cap {
        return Err(Error::TooManyVertices {
            count: h.num_vertices(),
            cap,
        });
    }
    let vertices: Vec<usize> = (0..h.num_vertices()).collect();
    for size in 0..=vertices.len() {
        let mut found = false;
        for_each_combination(&vertices, size, |pick| {
            let x: VertexSet = pick.iter().map(|&&v| v).collect();
            found = h.edges().iter().all(|e| e.vertices.intersects(&x));
            !found
        });
        if found {
            return Ok(size);
        }
    }
    unreachable!("all vertices meet every non-empty edge")
}

/// `τ*(h)`: the fractional relaxation of [`transversal`].
pub fn fractional_transversal(h: &Hypergraph) -> Rational {
    if h.num_edges() == 0 {
        return rational::zero();
    }
    let mut lp = LinearProgram::new(h.num_vertices(), Sense::Minimize);
    for v in 0..h.num_vertices() {
        lp.set_objective(v, rational::one());
    }
    for e in h.edges() {
        lp.add_constraint(e.vertices.iter().map(|v| (v, rational::one())).collect(), Relation::Ge, rational::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("hitting-set LP is feasible and bounded: {other:?}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub vertices: usize,
    pub edges: usize,
    pub vc: Option<usize>,
    /// VC dimension of the dual, whose transversals are the covers of `h`.
    pub vc_dual: Option<usize>,
    pub rho_star: Rational,
    /// `ρ(V(h))`, present when the vertex count is within the cap.
    pub rho: Option<usize>,
    /// `2·vc(h^d)·ln(11·ρ*)`, an upper bound on `ρ`.
    pub tigap_bound: Option<f64>,
    /// `2^{vc+2}·ln(11·ρ*)/ρ*`, bounding the gap `ρ/ρ*`.
    pub cigap_bound: Option<f64>,
    pub degree: usize,
    pub k: Rational,
    /// `d·k`: width reachable from a width-`k` FHD by degree rounding.
    pub degree_bound: Rational,
}

/// Collects the quantities behind the FHD-to-GHD bounds. The logarithms
/// are natural and only informative.
pub fn bound_report(h: &Hypergraph, k: &Rational, vc_cap: usize) -> Result<BoundReport> {
    let all = h.all_vertices();
    let rho_star = covers::rho_star(h, &all)?;
    let vc = properties::vc_dimension(h, vc_cap);
    let dual = h.dual().hypergraph;
    let vc_dual = properties::vc_dimension(&dual, vc_cap);
    let rho = if h.num_vertices() <= vc_cap {
        Some(covers::rho(h, &all)?)
    } else {
        None
    };
    let log = (rho_star > rational::zero()).then(|| (11.0 * rational::to_f64(&rho_star)).ln());
    let degree = properties::degree(h);
    Ok(BoundReport {
        vertices: h.num_vertices(),
        edges: h.num_edges(),
        vc,
        vc_dual,
        rho,
        tigap_bound: vc_dual.zip(log).map(|(v, l)| 2.0 * v as f64 * l),
        cigap_bound: vc
            .zip(log)
            .map(|(v, l)| 2f64.powi(v as i32 + 2) * l / rational::to_f64(&rho_star)),
        degree_bound: k * Rational::from_integer((degree as i64).into()),
        rho_star,
        degree,
        k: k.clone(),
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "vertices,edges,vc,vc_dual,rho_star,rho,tigap_bound,cigap_bound,degree,k,degree_bound";

    fn fields(&self) -> Vec<(&'static str, String)> {
        let float = |x: &Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        vec![
            ("vertices", self.vertices.to_string()),
            ("edges", self.edges.to_string()),
            ("vc", opt(&self.vc)),
            ("vc_dual", opt(&self.vc_dual)),
            ("rho_star", rational::format(&self.rho_star)),
            ("rho", opt(&self.rho)),
            ("tigap_bound", float(&self.tigap_bound)),
            ("cigap_bound", float(&self.cigap_bound)),
            ("degree", self.degree.to_string()),
            ("k", rational::format(&self.k)),
            ("degree_bound", rational::format(&self.degree_bound)),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.fields() {
            let _ = writeln!(out, "{key}: {value}");
        }
        out
    }

    pub fn csv_row(&self) -> String {
        self.fields().into_iter().map(|(_, v)| v).collect::<Vec<_>>().join(",")
    }
}
