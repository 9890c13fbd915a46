//! Subedge augmentation for the GHD and FHD pipelines.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::bitset::VertexSet;
use crate::decomp::{lift_to_original, DecompositionTree};
use crate::error::{Error, Result};
use crate::hd;
use crate::hypergraph::Hypergraph;
use crate::properties;
use crate::rational::{self, Rational};

pub const DEFAULT_SUBEDGE_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubedgeRule {
    /// Subsets of `e ∩ (e₁ ∪ … ∪ e_j)` for `j ≤ k`.
    Bip,
    /// Subsets of unions of multi-intersections of depth `< c`.
    Bmip { c: usize },
    /// Every subset up to a size bound.
    Bounded { size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubedgeSet {
    pub rule: SubedgeRule,
    /// Vertex set with every edge it was generated from, sorted by set.
    pub subedges: Vec<(VertexSet, Vec<usize>)>,
}

impl SubedgeSet {
    pub fn len(&self) -> usize {
        self.subedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subedges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    Original(usize),
    Subedge { parents: Vec<usize> },
}

/// A hypergraph extended by subedges. Edge `i < m` is edge `i` of the
/// original; vertex indices are shared with the original.
#[derive(Clone, Debug)]
pub struct Augmented {
    pub hypergraph: Hypergraph,
    pub origin: Vec<EdgeOrigin>,
}

fn budget_error(what: &str, projected: u128, budget: usize) -> Error {
    Error::Budget(format!(
        "{what}: projected {projected} subedges exceeds budget {budget}; use a smaller k or raise the budget"
    ))
}

/// Non-empty traces `e ∩ f` for `f ≠ e`, deduplicated and kept only when
/// maximal.
fn maximal_traces(h: &Hypergraph, e: usize) -> Vec<VertexSet> {
    let ev = &h.edge(e).vertices;
    let mut traces: Vec<VertexSet> = Vec::new();
    let mut seen = HashSet::new();
    for f in h.edges_incident(ev).iter() {
        if f == e || h.edge(f).vertices == *ev {
            continue;
        }
        let t = ev.intersection(&h.edge(f).vertices);
        if seen.insert(t.clone()) {
            traces.push(t);
        }
    }
    maximal_only(traces)
}

fn maximal_only(sets: Vec<VertexSet>) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Distinct unions of at most `arity` members of `traces`, maximal only.
fn maximal_unions(traces: &[VertexSet], arity: usize, budget: usize) -> Result<Vec<VertexSet>> {
    let mut level: HashSet<VertexSet> = HashSet::from([VertexSet::new()]);
    let mut all: HashSet<VertexSet> = HashSet::new();
    for _ in 0..arity.min(traces.len()) {
        let mut next = HashSet::new();
        for u in &level {
            for t in traces {
                if t.is_subset(u) {
                    continue;
                }
                let v = u.union(t);
                if !all.contains(&v) {
                    next.insert(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        if all.len() > budget {
            return Err(budget_error("union enumeration", all.len() as u128, budget));
        }
        level = next;
    }
    Ok(maximal_only(all.into_iter().collect()))
}

fn projected(unions: &[VertexSet]) -> u128 {
    unions
        .iter()
        .map(|u| if u.len() >= 100 { u128::MAX / 4 } else { (1u128 << u.len()) - 1 })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Expands each edge's maximal unions into all non-empty subsets, drops
/// sets equal to an existing edge, and merges parents.
fn expand(h: &Hypergraph, per_edge: Vec<(usize, Vec<VertexSet>)>, rule: SubedgeRule, budget: usize) -> Result<SubedgeSet> {
    let total: u128 = per_edge.iter().map(|(_, u)| projected(u)).fold(0, |a: u128, b| a.saturating_add(b));
    if total > budget as u128 {
        return Err(budget_error("subedge generation", total, budget));
    }
    let existing: HashSet<&VertexSet> = h.edges().iter().map(|e| &e.vertices).collect();
    let mut merged: BTreeMap<VertexSet, BTreeSet<usize>> = BTreeMap::new();
    let chunks: Vec<Vec<(VertexSet, usize)>> = per_edge
        .par_iter()
        .map(|(e, unions)| {
            let mut local = HashSet::new();
            for u in unions {
                for s in u.subsets() {
                    if !s.is_empty() {
                        local.insert(s);
                    }
                }
            }
            local.into_iter().map(|s| (s, *e)).collect()
        })
        .collect();
    for chunk in chunks {
        for (s, e) in chunk {
            if !existing.contains(&s) {
                merged.entry(s).or_default().insert(e);
            }
        }
    }
    Ok(SubedgeSet {
        rule,
        subedges: merged.into_iter().map(|(s, p)| (s, p.into_iter().collect())).collect(),
    })
}

/// All non-empty subsets of `e ∩ (e₁ ∪ … ∪ e_j)` over edges `e` and sets of
/// at most `k` other edges.
pub fn f_bip(h: &Hypergraph, k: usize, budget: usize) -> Result<SubedgeSet> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let per_edge = (0..h.num_edges())
        .map(|e| Ok((e, maximal_unions(&maximal_traces(h, e), k, budget)?)))
        .collect::<Result<Vec<_>>>()?;
    expand(h, per_edge, SubedgeRule::Bip, budget)
}

/// `I(e)`: non-empty intersections of `e` with `1..=c-1` distinct other
/// edges, found by a depth-bounded search from `e` that stops on empty
/// intersections.
pub fn multi_intersections(h: &Hypergraph, e: usize, c: usize) -> Vec<VertexSet> {
    let ev = h.edge(e).vertices.clone();
    let others: Vec<usize> = (0..h.num_edges()).filter(|&f| f != e && h.edge(f).vertices != ev).collect();
    let mut found = HashSet::new();
    fn dfs(h: &Hypergraph, others: &[usize], from: usize, depth: usize, acc: &VertexSet, found: &mut HashSet<VertexSet>) {
        if depth == 0 {
            return;
        }
        for (i, &f) in others.iter().enumerate().skip(from) {
            let next = acc.intersection(&h.edge(f).vertices);
            if next.is_empty() {
                continue;
            }
            found.insert(next.clone());
            dfs(h, others, i + 1, depth - 1, &next, found);
        }
    }
    dfs(h, &others, 0, c.saturating_sub(1), &ev, &mut found);
    let mut out: Vec<VertexSet> = found.into_iter().collect();
    out.sort();
    out
}

/// Subsets of unions of at most `arity` members of `I(e)`; the default
/// arity is `k^(c-1)`.
pub fn g_bmip(h: &Hypergraph, k: usize, c: usize, arity: Option<usize>, budget: usize) -> Result<SubedgeSet> {
    if k == 0 || c < 2 {
        return Err(Error::InvalidArgument("g_bmip needs k >= 1 and c >= 2".into()));
    }
    let arity = arity.unwrap_or_else(|| k.saturating_pow((c - 1) as u32));
    let per_edge = (0..h.num_edges())
        .map(|e| {
            // Deeper intersections lie inside single ones, so unions of
            // maximal members already contain every union of members.
            let members = maximal_only(multi_intersections(h, e, c));
            Ok((e, maximal_unions(&members, arity, budget)?))
        })
        .collect::<Result<Vec<_>>>()?;
    expand(h, per_edge, SubedgeRule::Bmip { c }, budget)
}

/// Adds `subedges` to `h` as fresh edges named after their first parent.
pub fn augment(h: &Hypergraph, subedges: &SubedgeSet) -> Augmented {
    let mut names: HashSet<String> = h.edges().iter().map(|e| e.name.clone()).collect();
    let mut extra = Vec::with_capacity(subedges.len());
    let mut origin: Vec<EdgeOrigin> = (0..h.num_edges()).map(EdgeOrigin::Original).collect();
    let mut counters: BTreeMap<usize, usize> = BTreeMap::new();
    for (set, parents) in &subedges.subedges {
        let p = parents[0];
        let n = counters.entry(p).or_insert(0);
        *n += 1;
        let mut name = format!("{}__s{}", h.edge(p).name, n);
        while names.contains(&name) {
            name.push('_');
        }
        names.insert(name.clone());
        extra.push((name, set.clone()));
        origin.push(EdgeOrigin::Subedge { parents: parents.clone() });
    }
    Augmented {
        hypergraph: h.with_extra_edges(extra),
        origin,
    }
}

/// Every non-empty proper subedge of size at most `⌊k⌋·iwidth(H) + c`.
pub fn augment_fractional(h: &Hypergraph, k: &Rational, c: usize, budget: usize) -> Result<Augmented> {
    let i = properties::iwidth(h);
    let size = rational::floor_usize(k).saturating_mul(i).saturating_add(c);
    let mut total: u128 = 0;
    for e in h.edges() {
        let n = e.vertices.len();
        let mut binom: u128 = 1;
        for j in 1..=size.min(n) {
            binom = binom.saturating_mul((n - j + 1) as u128) / j as u128;
            total = total.saturating_add(binom);
        }
    }
    if total > budget as u128 {
        return Err(budget_error("fractional augmentation", total, budget));
    }
    let existing: HashSet<&VertexSet> = h.edges().iter().map(|e| &e.vertices).collect();
    let mut merged: BTreeMap<VertexSet, BTreeSet<usize>> = BTreeMap::new();
    for (p, e) in h.edges().iter().enumerate() {
        let members = e.vertices.to_vec();
        for j in 1..=size.min(members.len()) {
            crate::bitset::for_each_combination(&members, j, |chosen| {
                let s: VertexSet = chosen.iter().map(|&&v| v).collect();
                if !existing.contains(&s) {
                    merged.entry(s).or_default().insert(p);
                }
                true
            });
        }
    }
    let set = SubedgeSet {
        rule: SubedgeRule::Bounded { size },
        subedges: merged.into_iter().map(|(s, p)| (s, p.into_iter().collect())).collect(),
    };
    Ok(augment(h, &set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhdMode {
    Bip,
    Bmip { c: usize },
}

#[derive(Clone, Debug, Default)]
pub struct GhdOptions {
    pub budget: Option<usize>,
    /// Override for the union arity of the BMIP rule.
    pub arity: Option<usize>,
    /// Intersection bound the caller assumes holds; a negative verdict is
    /// flagged when the measured value exceeds it.
    pub assumed_bound: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GhdOutcome {
    pub decomposition: Option<DecompositionTree>,
    /// `iwidth` for BIP, `c`-multi-intersection width for BMIP.
    pub measured: usize,
    pub subedges: usize,
    /// Negative verdict whose completeness hypothesis is known to fail.
    pub unsound_if: bool,
}

/// Decides `ghw(H) ≤ k` by augmenting with subedges, solving for an HD and
/// lifting subedges back to their parents.
pub fn solve_ghd(h: &Hypergraph, k: usize, mode: GhdMode, opts: &GhdOptions) -> Result<GhdOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let budget = opts.budget.unwrap_or(DEFAULT_SUBEDGE_BUDGET);
    let (set, measured) = match mode {
        GhdMode::Bip => (f_bip(h, k, budget)?, properties::iwidth(h)),
        GhdMode::Bmip { c } => (g_bmip(h, k, c, opts.arity, budget)?, properties::c_miwidth(h, c)),
    };
    let aug = augment(h, &set);
    let decomposition = match hd::solve_hd(&aug.hypergraph, k)? {
        Some(d) => Some(lift_to_original(h, &aug, &d)?.with_kind(crate::decomp::DecompKind::Ghd)),
        None => None,
    };
    let unsound_if = decomposition.is_none() && opts.assumed_bound.is_some_and(|b| measured > b);
    Ok(GhdOutcome {
        decomposition,
        measured,
        subedges: set.len(),
        unsound_if,
    })
}
