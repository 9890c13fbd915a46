//! Integral and fractional edge covers.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::bitset::{EdgeSet, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{self, Rational};

/// Map from edge index to a weight in `(0, 1]`. Zero weights are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeWeighting {
    weights: BTreeMap<usize, Rational>,
}

impl EdgeWeighting {
    pub fn new() -> Self {
        Self::default()
    }

    /// Weight 1 on every edge of `edges`.
    pub fn integral(edges: &EdgeSet) -> Self {
        EdgeWeighting {
            weights: edges.iter().map(|e| (e, Rational::one())).collect(),
        }
    }

    /// Sets a weight, rejecting values outside `[0,1]`.
    pub fn set(&mut self, edge: usize, w: Rational) -> Result<()> {
        if w.is_negative() || w > Rational::one() {
            return Err(Error::WeightOutOfRange {
                edge: format!("#{edge}"),
                weight: rational::format(&w),
            });
        }
        if w.is_zero() {
            self.weights.remove(&edge);
        } else {
            self.weights.insert(edge, w);
        }
        Ok(())
    }

    pub fn get(&self, edge: usize) -> Rational {
        self.weights.get(&edge).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.weights.iter().map(|(e, w)| (*e, w))
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Edges with positive weight.
    pub fn support(&self) -> EdgeSet {
        self.weights.keys().copied().collect()
    }

    /// Edges with weight exactly 1.
    pub fn integral_part(&self) -> EdgeSet {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_one())
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.weights.values().all(|w| w.is_one())
    }

    /// The weighting restricted to `edges`.
    pub fn restrict(&self, edges: &EdgeSet) -> EdgeWeighting {
        EdgeWeighting {
            weights: self
                .weights
                .iter()
                .filter(|(e, _)| edges.contains(**e))
                .map(|(e, w)| (*e, w.clone()))
                .collect(),
        }
    }

    /// `B(θ)` without edge-range checks.
    pub fn covered(&self, h: &Hypergraph) -> VertexSet {
        let mut sums: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut out = VertexSet::new();
        for (e, w) in self.iter() {
            if w.is_one() {
                out.union_with(&h.edge(e).vertices);
                continue;
            }
            for v in &h.edge(e).vertices {
                *sums.entry(v).or_insert_with(Rational::zero) += w;
            }
        }
        let one = Rational::one();
        out.extend(sums.into_iter().filter(|(_, s)| *s >= one).map(|(v, _)| v));
        out
    }

    pub(crate) fn from_map(weights: BTreeMap<usize, Rational>) -> Self {
        debug_assert!(weights.values().all(|w| w.is_positive() && *w <= Rational::one()));
        EdgeWeighting { weights }
    }
}

fn check_edges(h: &Hypergraph, theta: &EdgeWeighting) -> Result<()> {
    match theta.weights.keys().next_back() {
        Some(&e) if e >= h.num_edges() => Err(Error::UnknownEdge(format!("#{e}"))),
        _ => Ok(()),
    }
}

/// `B(θ) = {v : Σ_{e∋v} θ(e) ≥ 1}`.
pub fn coverage(h: &Hypergraph, theta: &EdgeWeighting) -> Result<VertexSet> {
    check_edges(h, theta)?;
    Ok(theta.covered(h))
}

pub fn weight(theta: &EdgeWeighting) -> Rational {
    theta.weight()
}

fn check_coverable(h: &Hypergraph, target: &VertexSet, allowed: &EdgeSet) -> Result<()> {
    for v in target {
        if v >= h.num_vertices() || !h.incident(v).intersects(allowed) {
            let name = if v < h.num_vertices() {
                h.vertex_name(v).to_string()
            } else {
                format!("#{v}")
            };
            return Err(Error::Uncoverable(name));
        }
    }
    Ok(())
}

/// Candidate edges for covering `target`: one representative per distinct
/// non-empty trace, with traces strictly inside another trace removed.
fn reduced_traces(h: &Hypergraph, target: &VertexSet, allowed: &EdgeSet) -> Vec<(usize, VertexSet)> {
    let mut seen = HashSet::new();
    let mut items: Vec<(usize, VertexSet)> = Vec::new();
    for e in h.edges_incident(target).intersection(allowed).iter() {
        let t = h.edge(e).vertices.intersection(target);
        if seen.insert(t.clone()) {
            items.push((e, t));
        }
    }
    let keep: Vec<bool> = items
        .iter()
        .map(|(_, t)| !items.iter().any(|(_, u)| u != t && t.is_subset(u)))
        .collect();
    items
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(i, _)| i)
        .collect()
}

/// Optimal fractional cover of `target` using only edges in `allowed`.
pub fn optimal_fractional_cover_among(
    h: &Hypergraph,
    target: &VertexSet,
    allowed: &EdgeSet,
) -> Result<(EdgeWeighting, Rational)> {
    check_coverable(h, target, allowed)?;
    if target.is_empty() {
        return Ok((EdgeWeighting::new(), Rational::zero()));
    }
    let items = reduced_traces(h, target, allowed);
    let mut lp = LinearProgram::new(items.len(), Sense::Minimize);
    for i in 0..items.len() {
        lp.set_objective(i, Rational::one());
    }
    for v in target {
        let row: Vec<(usize, Rational)> = items
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| t.contains(v))
            .map(|(i, _)| (i, Rational::one()))
            .collect();
        lp.add_constraint(row, Relation::Ge, Rational::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, solution } => {
            let mut map = BTreeMap::new();
            for ((e, _), x) in items.iter().zip(solution) {
                if x.is_positive() {
                    map.insert(*e, x.min(Rational::one()));
                }
            }
            Ok((EdgeWeighting::from_map(map), value))
        }
        other => unreachable!("covering LP with coverable target: {other:?}"),
    }
}

/// `ρ*(target)` with a witness weighting.
pub fn optimal_fractional_cover(h: &Hypergraph, target: &VertexSet) -> Result<(EdgeWeighting, Rational)> {
    optimal_fractional_cover_among(h, target, &h.all_edges())
}

pub fn rho_star(h: &Hypergraph, target: &VertexSet) -> Result<Rational> {
    Ok(optimal_fractional_cover(h, target)?.1)
}

/// A cover of `target` with weight at most `bound`, if one exists.
pub fn exists_fractional_cover(h: &Hypergraph, target: &VertexSet, bound: &Rational) -> Option<EdgeWeighting> {
    let (gamma, value) = optimal_fractional_cover(h, target).ok()?;
    (value <= *bound).then_some(gamma)
}

/// Optimal integral cover of `target` using only edges in `allowed`.
pub fn optimal_integral_cover_among(
    h: &Hypergraph,
    target: &VertexSet,
    allowed: &EdgeSet,
) -> Result<(EdgeWeighting, usize)> {
    check_coverable(h, target, allowed)?;
    if target.is_empty() {
        return Ok((EdgeWeighting::new(), 0));
    }
    let mut items = reduced_traces(h, target, allowed);
    items.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));

    // Greedy upper bound.
    let mut best: Vec<usize> = Vec::new();
    let mut covered = VertexSet::new();
    while !target.is_subset(&covered) {
        let (i, _) = items
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.1.difference(&covered)
                    .len()
                    .cmp(&b.1.difference(&covered).len())
                    .then(j.cmp(i))
            })
            .expect("coverable");
        covered.union_with(&items[i].1);
        best.push(i);
    }

    let lower = {
        let (_, v) = optimal_fractional_cover_among(h, target, allowed)?;
        rational::ceil_usize(&v)
    };
    if best.len() > lower {
        let mut chosen = Vec::new();
        branch(&items, target, &VertexSet::new(), &mut chosen, &mut best, lower);
    }
    let edges: EdgeSet = best.iter().map(|&i| items[i].0).collect();
    let n = edges.len();
    Ok((EdgeWeighting::integral(&edges), n))
}

fn branch(
    items: &[(usize, VertexSet)],
    target: &VertexSet,
    covered: &VertexSet,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
    lower: usize,
) -> bool {
    let uncovered = target.difference(covered);
    let Some(v) = uncovered.first() else {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return best.len() <= lower;
    };
    let max_gain = items
        .iter()
        .map(|(_, t)| t.intersection_len(&uncovered))
        .max()
        .unwrap_or(0);
    if max_gain == 0 {
        return false;
    }
    let needed = uncovered.len().div_ceil(max_gain);
    if chosen.len() + needed >= best.len() {
        return false;
    }
    let mut options: Vec<usize> = (0..items.len()).filter(|&i| items[i].1.contains(v)).collect();
    options.sort_by_key(|&i| std::cmp::Reverse(items[i].1.intersection_len(&uncovered)));
    for i in options {
        chosen.push(i);
        let done = branch(items, target, &covered.union(&items[i].1), chosen, best, lower);
        chosen.pop();
        if done {
            return true;
        }
    }
    false
}

/// `ρ(target)` with a witness edge set.
pub fn optimal_integral_cover(h: &Hypergraph, target: &VertexSet) -> Result<(EdgeWeighting, usize)> {
    optimal_integral_cover_among(h, target, &h.all_edges())
}

pub fn rho(h: &Hypergraph, target: &VertexSet) -> Result<usize> {
    Ok(optimal_integral_cover(h, target)?.1)
}

/// Rounds `gamma` to an integral cover of `B(gamma)`: while some vertex of
/// `B(gamma)` is uncovered, take the lowest such vertex and add its
/// heaviest incident edge (lowest index on ties). With `d = degree(h)` the
/// chosen edge has weight at least `1/d`, so the result weighs at most
/// `d * weight(gamma)`.
pub fn degree_round(h: &Hypergraph, gamma: &EdgeWeighting) -> EdgeWeighting {
    let target = gamma.covered(h);
    let mut chosen = EdgeSet::new();
    let mut covered = VertexSet::new();
    while let Some(v) = target.difference(&covered).first() {
        let mut pick: Option<(usize, Rational)> = None;
        for (e, w) in gamma.iter() {
            if !h.edge(e).vertices.contains(v) {
                continue;
            }
            if pick.as_ref().map_or(true, |(_, bw)| w > bw) {
                pick = Some((e, w.clone()));
            }
        }
        let (e, _) = pick.expect("vertex of B(gamma) has a weighted incident edge");
        chosen.insert(e);
        covered.union_with(&h.edge(e).vertices);
    }
    EdgeWeighting::integral(&chosen)
}
