//! Memoized separator search shared by the HD and FHD solvers.
//!
//! A subproblem is a component `C` together with its boundary
//! `Δ(C) = V(edges(C)) \ C`. Every constraint a parent places on the subtree
//! for `C` is a function of `C` alone: the child bag must contain `Δ(C)`,
//! meet `C`, and only `C ∪ Δ(C)` is visible below. Results are therefore
//! memoized per component.
//!
//! At `C` the search guesses an integral part `S` (at most `⌊k⌋` edges) and a
//! fractional part `W ⊆ (C ∪ Δ) \ V(S)` with `|W| ≤ c`, requires
//! `Δ ⊆ V(S) ∪ W`, `(V(S) ∪ W) ∩ C ≠ ∅` and `ρ*(W) ≤ k - |S|`, and recurses
//! on the `[V(S) ∪ W]`-components inside `C`. With `c = 0` and integral
//! covers this is the classical hypertree search.

use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::bitset::{for_each_combination, EdgeSet, VertexSet};
use crate::covers::{self, EdgeWeighting};
use crate::decomp::{DecompKind, DecompositionTree};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub k: Rational,
    /// Bound on the fractional part of every bag.
    pub c: usize,
    /// Only integral covers (hypertree search).
    pub integral: bool,
    /// Let the fractional part overlap `V(S)`.
    pub strict: bool,
    /// Never guess an integral part; every bag is covered fractionally.
    pub no_integral_part: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub subproblems: usize,
    pub candidates: usize,
    pub lp_calls: usize,
    /// Nodes where the parent-facing normal-form bag could not be formed
    /// without exceeding `c`; the plain bag was used instead.
    pub normal_form_fallbacks: usize,
}

#[derive(Debug)]
struct Separator {
    s: EdgeSet,
    /// `(V(S) ∩ (C ∪ Δ)) ∪ W`.
    bag: VertexSet,
    w: VertexSet,
    residual: EdgeWeighting,
    children: Vec<VertexSet>,
}

pub struct Search<'a> {
    g: &'a Hypergraph,
    params: SearchParams,
    floor_k: usize,
    memo: HashMap<VertexSet, Option<Rc<Separator>>>,
    rho_cache: HashMap<VertexSet, (Rational, EdgeWeighting)>,
    pub stats: SearchStats,
}

impl<'a> Search<'a> {
    pub fn new(g: &'a Hypergraph, params: SearchParams) -> Self {
        let floor_k = if params.no_integral_part {
            0
        } else {
            rational::floor_usize(&params.k)
        };
        Search {
            g,
            params,
            floor_k,
            memo: HashMap::new(),
            rho_cache: HashMap::new(),
            stats: SearchStats::default(),
        }
    }

    /// Runs the search from the whole vertex set and returns the witness.
    ///
    /// Child bags additionally receive the parent-bag vertices their cover
    /// saturates, so that each child's cover stays inside its bag on the
    /// parent side. When that would push the fractional part past `c`, a
    /// cover avoiding those vertices is tried first.
    pub fn run(&mut self) -> Option<DecompositionTree> {
        let kind = if self.params.integral {
            DecompKind::Hd
        } else {
            DecompKind::Fhd
        };
        if self.g.num_vertices() == 0 {
            return Some(DecompositionTree::new(kind, VertexSet::new(), EdgeWeighting::new()));
        }
        let all = self.g.all_vertices();
        if !self.solve(&all) {
            return None;
        }
        let sep = self.memo[&all].clone().expect("solved root");
        let mut tree = DecompositionTree::new(kind, sep.bag.clone(), merge(&sep.s, &sep.residual));
        self.build_children(&sep, &sep.bag, 0, &mut tree);
        Some(tree)
    }

    fn solve(&mut self, c: &VertexSet) -> bool {
        if let Some(r) = self.memo.get(c) {
            return r.is_some();
        }
        self.stats.subproblems += 1;
        let found = self.find_separator(c);
        let ok = found.is_some();
        self.memo.insert(c.clone(), found.map(Rc::new));
        ok
    }

    fn find_separator(&mut self, c: &VertexSet) -> Option<Separator> {
        let g = self.g;
        let delta = g.boundary(c);
        let scope = c.union(&delta);

        // One representative per distinct trace on the scope.
        let mut seen: HashMap<VertexSet, ()> = HashMap::new();
        let mut cands: Vec<(usize, VertexSet)> = Vec::new();
        for e in g.edges_incident(&scope).iter() {
            let t = g.edge(e).vertices.intersection(&scope);
            if seen.insert(t.clone(), ()).is_none() {
                cands.push((e, t));
            }
        }

        let max_l = self.floor_k.min(cands.len());
        for l in 0..=max_l {
            let mut result = None;
            let mut combos: Vec<Vec<usize>> = Vec::new();
            let idx: Vec<usize> = (0..cands.len()).collect();
            for_each_combination(&idx, l, |chosen| {
                combos.push(chosen.iter().map(|&&i| i).collect());
                true
            });
            for combo in combos {
                if redundant(&cands, &combo) {
                    continue;
                }
                if let Some(sep) = self.try_integral_part(c, &delta, &scope, &cands, &combo) {
                    result = Some(sep);
                    break;
                }
            }
            if result.is_some() {
                return result;
            }
        }
        None
    }

    fn try_integral_part(
        &mut self,
        c: &VertexSet,
        delta: &VertexSet,
        scope: &VertexSet,
        cands: &[(usize, VertexSet)],
        combo: &[usize],
    ) -> Option<Separator> {
        let mut vs = VertexSet::new();
        let mut s = EdgeSet::new();
        for &i in combo {
            vs.union_with(&cands[i].1);
            s.insert(cands[i].0);
        }
        let forced = delta.difference(&vs);
        if forced.len() > self.params.c {
            return None;
        }
        let budget = &self.params.k - Rational::from_integer(combo.len().into());
        if budget.is_negative() {
            return None;
        }
        let pool: Vec<usize> = if self.params.strict {
            c.difference(&forced).to_vec()
        } else {
            c.difference(&vs).to_vec()
        };
        let room = self.params.c - forced.len();
        for extra in 0..=room.min(pool.len()) {
            let mut subsets: Vec<VertexSet> = Vec::new();
            for_each_combination(&pool, extra, |chosen| {
                let mut w = forced.clone();
                w.extend(chosen.iter().map(|&&v| v));
                subsets.push(w);
                true
            });
            for w in subsets {
                self.stats.candidates += 1;
                let bag = vs.union(&w);
                if !bag.intersects(c) {
                    continue;
                }
                if !self.rho_within(&w, &budget) {
                    continue;
                }
                let offending = self.offending(&s, scope, &bag);
                let Some(residual) = self.residual(&w, &budget, &offending, &VertexSet::new()) else {
                    continue;
                };
                let children: Vec<VertexSet> = self
                    .g
                    .components_within(&bag, c)
                    .into_iter()
                    .map(|comp| comp.members)
                    .collect();
                if children.iter().all(|d| self.solve(d)) {
                    return Some(Separator {
                        s,
                        bag,
                        w,
                        residual,
                        children,
                    });
                }
            }
        }
        None
    }

    /// Edges outside `s` whose trace on the scope leaves the bag; such
    /// edges must not receive weight 1 (weak special condition).
    fn offending(&self, s: &EdgeSet, scope: &VertexSet, bag: &VertexSet) -> EdgeSet {
        self.g
            .edges_incident(scope)
            .iter()
            .filter(|&e| !s.contains(e) && !self.g.edge(e).vertices.intersection(scope).is_subset(bag))
            .collect()
    }

    fn optimum(&mut self, w: &VertexSet) -> (Rational, EdgeWeighting) {
        if let Some(r) = self.rho_cache.get(w) {
            return r.clone();
        }
        self.stats.lp_calls += 1;
        let (gamma, value) = covers::optimal_fractional_cover(self.g, w).expect("vertices of a hypergraph are coverable");
        self.rho_cache.insert(w.clone(), (value.clone(), gamma.clone()));
        (value, gamma)
    }

    fn rho_within(&mut self, w: &VertexSet, budget: &Rational) -> bool {
        w.is_empty() || self.optimum(w).0 <= *budget
    }

    /// A cover of `w` of weight at most `budget` giving every edge of
    /// `protect` weight below 1 and leaving every vertex of `avoid` with
    /// total weight below 1.
    fn residual(
        &mut self,
        w: &VertexSet,
        budget: &Rational,
        protect: &EdgeSet,
        avoid: &VertexSet,
    ) -> Option<EdgeWeighting> {
        if w.is_empty() {
            return Some(EdgeWeighting::new());
        }
        let (value, gamma) = self.optimum(w);
        if value > *budget {
            return None;
        }
        let fine = gamma.iter().all(|(e, x)| !(x.is_one() && protect.contains(e)))
            && gamma.covered(self.g).is_disjoint(avoid);
        if fine {
            return Some(gamma);
        }
        self.stats.lp_calls += 1;
        slack_cover(self.g, w, budget, protect, avoid)
    }

    fn build_children(&mut self, sep: &Separator, bag: &VertexSet, node: usize, tree: &mut DecompositionTree) {
        for d in &sep.children {
            let child_sep = self.memo[d].clone().expect("solved component");
            let (child_bag, cover) = self.child_node(d, &child_sep, bag);
            let id = tree.add_child(node, child_bag.clone(), cover);
            self.build_children(&child_sep, &child_bag, id, tree);
        }
    }

    fn child_node(&mut self, c: &VertexSet, sep: &Separator, parent: &VertexSet) -> (VertexSet, EdgeWeighting) {
        let integral_cover = self.g.vertices_of(&sep.s);
        let mut bag = sep.bag.clone();
        let full = merge(&sep.s, &sep.residual);
        let extras = full.covered(self.g).intersection(parent).difference(&bag);
        let fractional = extras.difference(&integral_cover);
        if fractional.is_empty() {
            bag.union_with(&extras);
            return (bag, full);
        }
        let scope = c.union(&self.g.boundary(c));
        let offending = self.offending(&sep.s, &scope, &sep.bag);
        let avoid = parent
            .difference(&sep.bag)
            .difference(&integral_cover)
            .intersection(&self.g.vertices_of(&self.g.edges_incident(&sep.w)));
        let budget = &self.params.k - Rational::from_integer(sep.s.len().into());
        self.stats.lp_calls += 1;
        if let Some(r) = slack_cover(self.g, &sep.w, &budget, &offending, &avoid) {
            let full = merge(&sep.s, &r);
            bag.union_with(&full.covered(self.g).intersection(parent));
            return (bag, full);
        }
        if sep.bag.difference(&integral_cover).len() + fractional.len() <= self.params.c {
            bag.union_with(&extras);
        } else {
            self.stats.normal_form_fallbacks += 1;
        }
        (bag, full)
    }
}

/// True when some chosen trace is contained in the union of the others.
fn redundant(cands: &[(usize, VertexSet)], combo: &[usize]) -> bool {
    combo.iter().any(|&i| {
        let mut rest = VertexSet::new();
        for &j in combo {
            if j != i {
                rest.union_with(&cands[j].1);
            }
        }
        cands[i].1.is_subset(&rest)
    })
}

/// Weight 1 on `s` plus `residual`, capped at 1 per edge.
fn merge(s: &EdgeSet, residual: &EdgeWeighting) -> EdgeWeighting {
    let mut out = residual.clone();
    for e in s.iter() {
        out.set(e, Rational::one()).expect("unit weight");
    }
    out
}

/// Maximizes a slack `t` such that a cover of `w` with weight at most
/// `budget` keeps `protect` edges and `avoid` vertices at most `1 - t`.
/// Returns the cover when `t > 0`.
fn slack_cover(
    g: &Hypergraph,
    w: &VertexSet,
    budget: &Rational,
    protect: &EdgeSet,
    avoid: &VertexSet,
) -> Option<EdgeWeighting> {
    if w.is_empty() {
        return Some(EdgeWeighting::new());
    }
    let edges = g.edges_incident(w).to_vec();
    let t = edges.len();
    let one = Rational::one;
    let mut lp = LinearProgram::new(t + 1, Sense::Maximize);
    lp.set_objective(t, one());
    for v in w.iter() {
        let row = edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| g.edge(e).vertices.contains(v))
            .map(|(i, _)| (i, one()))
            .collect();
        lp.add_constraint(row, Relation::Ge, one());
    }
    lp.add_constraint((0..t).map(|i| (i, one())).collect(), Relation::Le, budget.clone());
    for (i, &e) in edges.iter().enumerate() {
        if protect.contains(e) {
            lp.add_constraint(vec![(i, one()), (t, one())], Relation::Le, one());
        } else {
            lp.add_constraint(vec![(i, one())], Relation::Le, one());
        }
    }
    for y in avoid.iter() {
        let mut row: Vec<(usize, Rational)> = edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| g.edge(e).vertices.contains(y))
            .map(|(i, _)| (i, one()))
            .collect();
        if row.is_empty() {
            continue;
        }
        row.push((t, one()));
        lp.add_constraint(row, Relation::Le, one());
    }
    lp.add_constraint(vec![(t, one())], Relation::Le, one());
    match lp.solve() {
        LpOutcome::Optimal { solution, .. } if solution[t].is_positive() => {
            let mut gamma = EdgeWeighting::new();
            for (i, &e) in edges.iter().enumerate() {
                if !solution[i].is_zero() {
                    gamma.set(e, solution[i].clone()).expect("bounded by constraint");
                }
            }
            Some(gamma)
        }
        _ => None,
    }
}
