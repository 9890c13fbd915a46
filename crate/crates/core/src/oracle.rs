//! Brute-force reference implementations for tests.
//!
//! `brute_value` and `brute_width` try every bag at every component and are
//! complete for tiny inputs. The `enumeration_*` functions reach the same
//! numbers by unrelated routes (elimination orderings for GHD/FHD, the
//! monotone robber and marshals game for HD) together with covers computed
//! by subset enumeration and LP vertex enumeration instead of the simplex.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::bitset::{for_each_combination, EdgeSet, VertexSet};
use crate::covers::{self, EdgeWeighting};
use crate::decomp::{DecompKind, DecompositionTree};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::{self, Rational};

pub const ORACLE_VERTEX_CAP: usize = 12;
pub const ENUMERATION_VERTEX_CAP: usize = 7;

fn check_cap(h: &Hypergraph, cap: usize) -> Result<()> {
    if h.num_vertices() > cap {
        return Err(Error::TooManyVertices {
            count: h.num_vertices(),
            cap,
        });
    }
    Ok(())
}

/// A decomposition of the given kind with width at most `k`, or `None`.
pub fn brute_width(h: &Hypergraph, k: &Rational, kind: DecompKind) -> Result<Option<DecompositionTree>> {
    check_cap(h, ORACLE_VERTEX_CAP)?;
    match kind {
        DecompKind::Hd => {
            if k.is_negative() {
                return Ok(None);
            }
            let mut o = HdOracle::new(h, rational::floor_usize(k));
            Ok(o.run())
        }
        _ => {
            let (value, tree) = brute_value(h, kind)?;
            Ok((value <= *k).then_some(tree))
        }
    }
}

/// The exact width (`hw`, `ghw` or `fhw`) with an optimal decomposition.
pub fn brute_value(h: &Hypergraph, kind: DecompKind) -> Result<(Rational, DecompositionTree)> {
    check_cap(h, ORACLE_VERTEX_CAP)?;
    if h.num_vertices() == 0 {
        return Ok((Rational::zero(), DecompositionTree::new(kind, VertexSet::new(), EdgeWeighting::new())));
    }
    if kind == DecompKind::Hd {
        for k in 1..=h.num_edges() {
            if let Some(d) = HdOracle::new(h, k).run() {
                return Ok((rational::int(k as i64), d));
            }
        }
        unreachable!("one bag with all edges is an HD");
    }
    let mut o = Minimax {
        h,
        integral: kind == DecompKind::Ghd,
        cost: HashMap::new(),
        memo: HashMap::new(),
    };
    let all = h.all_vertices();
    let value = o.value(&all);
    let (bag, cover) = o.node(&all);
    let mut tree = DecompositionTree::new(kind, bag.clone(), cover);
    o.attach(&all, &bag, 0, &mut tree);
    Ok((value, tree))
}

struct Minimax<'a> {
    h: &'a Hypergraph,
    integral: bool,
    cost: HashMap<VertexSet, (Rational, EdgeWeighting)>,
    memo: HashMap<VertexSet, (Rational, VertexSet)>,
}

impl Minimax<'_> {
    fn cost(&mut self, bag: &VertexSet) -> Rational {
        if let Some((w, _)) = self.cost.get(bag) {
            return w.clone();
        }
        let (cover, w) = if self.integral {
            let (c, n) = covers::optimal_integral_cover(self.h, bag).expect("bag vertices lie in edges");
            (c, rational::int(n as i64))
        } else {
            covers::optimal_fractional_cover(self.h, bag).expect("bag vertices lie in edges")
        };
        self.cost.insert(bag.clone(), (w.clone(), cover));
        w
    }

    /// Least width of a decomposition of `c` whose root bag contains the
    /// boundary of `c`.
    fn value(&mut self, c: &VertexSet) -> Rational {
        if let Some((v, _)) = self.memo.get(c) {
            return v.clone();
        }
        let delta = self.h.boundary(c);
        let mut best: Option<(Rational, VertexSet)> = None;
        let extras: Vec<VertexSet> = c.subsets().filter(|s| !s.is_empty()).collect();
        'bags: for extra in extras {
            let bag = delta.union(&extra);
            let mut v = self.cost(&bag);
            if best.as_ref().is_some_and(|(b, _)| v >= *b) {
                continue;
            }
            for comp in self.h.components_within(&bag, c) {
                let sub = self.value(&comp.members);
                if sub > v {
                    v = sub;
                }
                if best.as_ref().is_some_and(|(b, _)| v >= *b) {
                    continue 'bags;
                }
            }
            best = Some((v, bag));
        }
        let best = best.expect("c is non-empty");
        self.memo.insert(c.clone(), best.clone());
        best.0
    }

    fn node(&mut self, c: &VertexSet) -> (VertexSet, EdgeWeighting) {
        let bag = self.memo[c].1.clone();
        self.cost(&bag);
        let cover = self.cost[&bag].1.clone();
        (bag, cover)
    }

    fn attach(&mut self, c: &VertexSet, bag: &VertexSet, id: usize, tree: &mut DecompositionTree) {
        for comp in self.h.components_within(bag, c) {
            self.value(&comp.members);
            let (b, cover) = self.node(&comp.members);
            let child = tree.add_child(id, b.clone(), cover);
            self.attach(&comp.members, &b, child, tree);
        }
    }
}

struct HdOracle<'a> {
    h: &'a Hypergraph,
    k: usize,
    memo: HashMap<VertexSet, Option<EdgeSet>>,
}

impl<'a> HdOracle<'a> {
    fn new(h: &'a Hypergraph, k: usize) -> Self {
        HdOracle {
            h,
            k,
            memo: HashMap::new(),
        }
    }

    fn run(&mut self) -> Option<DecompositionTree> {
        if self.h.num_vertices() == 0 {
            return Some(DecompositionTree::new(DecompKind::Hd, VertexSet::new(), EdgeWeighting::new()));
        }
        let all = self.h.all_vertices();
        if !self.ok(&all) {
            return None;
        }
        let (bag, cover) = self.node(&all);
        let mut tree = DecompositionTree::new(DecompKind::Hd, bag.clone(), cover);
        self.attach(&all, &bag, 0, &mut tree);
        Some(tree)
    }

    /// Every edge set of size `1..=k`, in lexicographic order, is tried as
    /// the cover of the node for `c`.
    fn ok(&mut self, c: &VertexSet) -> bool {
        if let Some(r) = self.memo.get(c) {
            return r.is_some();
        }
        let delta = self.h.boundary(c);
        let edges: Vec<usize> = (0..self.h.num_edges()).collect();
        let mut found = None;
        for size in 1..=self.k.min(edges.len()) {
            let mut sets = Vec::new();
            for_each_combination(&edges, size, |chosen| {
                sets.push(chosen.iter().map(|&&e| e).collect::<EdgeSet>());
                true
            });
            for s in sets {
                let vs = self.h.vertices_of(&s);
                if !vs.intersects(c) || !delta.is_subset(&vs) {
                    continue;
                }
                let children = self.h.components_within(&vs, c);
                if children.iter().all(|comp| self.ok(&comp.members)) {
                    found = Some(s);
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        let ok = found.is_some();
        self.memo.insert(c.clone(), found);
        ok
    }

    fn node(&self, c: &VertexSet) -> (VertexSet, EdgeWeighting) {
        let s = self.memo[c].clone().expect("solved");
        let scope = c.union(&self.h.boundary(c));
        (self.h.vertices_of(&s).intersection(&scope), EdgeWeighting::integral(&s))
    }

    fn attach(&mut self, c: &VertexSet, bag: &VertexSet, id: usize, tree: &mut DecompositionTree) {
        for comp in self.h.components_within(bag, c) {
            let (b, cover) = self.node(&comp.members);
            let child = tree.add_child(id, b.clone(), cover);
            self.attach(&comp.members, &b, child, tree);
        }
    }
}

/// Minimum number of edges covering `target`, by subset enumeration.
pub fn brute_rho(h: &Hypergraph, target: &VertexSet) -> Option<usize> {
    if target.is_empty() {
        return Some(0);
    }
    let edges: Vec<usize> = h.edges_incident(target).to_vec();
    for size in 1..=edges.len() {
        let mut hit = false;
        for_each_combination(&edges, size, |chosen| {
            let mut cov = VertexSet::new();
            for &&e in chosen {
                cov.union_with(&h.edge(e).vertices);
            }
            hit = target.is_subset(&cov);
            !hit
        });
        if hit {
            return Some(size);
        }
    }
    None
}

/// `ρ*(target)` as the largest objective over all vertices of the dual
/// polytope `{y ≥ 0 : Σ_{v ∈ e} y_v ≤ 1}`, found by solving every square
/// subsystem of tight constraints.
pub fn brute_rho_star(h: &Hypergraph, target: &VertexSet) -> Option<Rational> {
    let vars = target.to_vec();
    let n = vars.len();
    if n == 0 {
        return Some(Rational::zero());
    }
    let mut traces: Vec<Vec<bool>> = Vec::new();
    let mut seen = HashSet::new();
    for e in h.edges_incident(target).iter() {
        let t = h.edge(e).vertices.intersection(target);
        if seen.insert(t.clone()) {
            traces.push(vars.iter().map(|&v| t.contains(v)).collect());
        }
    }
    if vars.iter().enumerate().any(|(i, _)| !traces.iter().any(|t| t[i])) {
        return None;
    }
    // Rows 0..traces are `Σ y ≤ 1`; the rest are `y_i ≥ 0`.
    let rows: Vec<(Vec<Rational>, Rational)> = traces
        .iter()
        .map(|t| (t.iter().map(|&b| if b { Rational::one() } else { Rational::zero() }).collect(), Rational::one()))
        .chain((0..n).map(|i| ((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect(), Rational::zero())))
        .collect();
    let idx: Vec<usize> = (0..rows.len()).collect();
    let mut best: Option<Rational> = None;
    for_each_combination(&idx, n, |chosen| {
        let a: Vec<Vec<Rational>> = chosen.iter().map(|&&r| rows[r].0.clone()).collect();
        let b: Vec<Rational> = chosen.iter().map(|&&r| rows[r].1.clone()).collect();
        if let Some(y) = solve_square(a, b) {
            let feasible = y.iter().all(|x| !x.is_negative())
                && traces.iter().all(|t| {
                    let s: Rational = t.iter().zip(&y).filter(|(b, _)| **b).map(|(_, x)| x.clone()).sum();
                    s <= Rational::one()
                });
            if feasible {
                let obj: Rational = y.iter().cloned().sum();
                if best.as_ref().is_none_or(|b| obj > *b) {
                    best = Some(obj);
                }
            }
        }
        true
    });
    best
}

/// Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

/// `ghw` or `fhw` as the least, over all elimination orderings of the
/// primal graph, of the largest cover of an elimination bag.
pub fn enumeration_value(h: &Hypergraph, kind: DecompKind) -> Result<Rational> {
    check_cap(h, ENUMERATION_VERTEX_CAP)?;
    let n = h.num_vertices();
    if n == 0 {
        return Ok(Rational::zero());
    }
    let mut adj = vec![VertexSet::new(); n];
    for e in h.edges() {
        for v in e.vertices.iter() {
            adj[v].union_with(&e.vertices);
        }
    }
    for (v, a) in adj.iter_mut().enumerate() {
        a.remove(v);
    }
    let mut cache: HashMap<VertexSet, Rational> = HashMap::new();
    let mut cost = |bag: &VertexSet| -> Rational {
        cache
            .entry(bag.clone())
            .or_insert_with(|| match kind {
                DecompKind::Fhd => brute_rho_star(h, bag).expect("coverable"),
                _ => rational::int(brute_rho(h, bag).expect("coverable") as i64),
            })
            .clone()
    };
    let mut best: Option<Rational> = None;
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |order| {
        let mut g = adj.clone();
        let mut width = Rational::zero();
        for &v in order {
            let mut bag = g[v].clone();
            bag.insert(v);
            let w = cost(&bag);
            if w > width {
                width = w;
            }
            let nb = g[v].clone();
            for u in nb.iter() {
                g[u].union_with(&nb);
                g[u].remove(u);
                g[u].remove(v);
            }
        }
        if best.as_ref().is_none_or(|b| width < *b) {
            best = Some(width);
        }
    });
    Ok(best.expect("at least one ordering"))
}

fn permute(items: &mut Vec<usize>, from: usize, f: &mut impl FnMut(&[usize])) {
    if from == items.len() {
        f(items);
        return;
    }
    for i in from..items.len() {
        items.swap(from, i);
        permute(items, from + 1, f);
        items.swap(from, i);
    }
}

/// Whether `k` marshals win the monotone robber and marshals game, which
/// characterizes `hw(H) ≤ k`.
pub fn marshals_win(h: &Hypergraph, k: usize) -> Result<bool> {
    check_cap(h, ENUMERATION_VERTEX_CAP)?;
    let edges: Vec<usize> = (0..h.num_edges()).collect();
    let mut positions: Vec<EdgeSet> = vec![EdgeSet::new()];
    for size in 1..=k.min(edges.len()) {
        for_each_combination(&edges, size, |chosen| {
            positions.push(chosen.iter().map(|&&e| e).collect());
            true
        });
    }
    let all = h.all_vertices();
    let mut states: Vec<(EdgeSet, VertexSet)> = Vec::new();
    for m in &positions {
        for comp in h.components(&h.vertices_of(m)) {
            states.push((m.clone(), comp.members));
        }
    }
    let mut winning: HashSet<(EdgeSet, VertexSet)> = HashSet::new();
    loop {
        let mut changed = false;
        for (m, r) in &states {
            if winning.contains(&(m.clone(), r.clone())) {
                continue;
            }
            let vm = h.vertices_of(m);
            let wins = positions.iter().filter(|m2| !m2.is_empty()).any(|m2| {
                let vm2 = h.vertices_of(m2);
                let stay = vm.intersection(&vm2);
                let Some(escape) = h
                    .components_within(&stay, &all)
                    .into_iter()
                    .find(|c| c.members.is_superset(r))
                else {
                    return false;
                };
                // Monotone: the robber's region never grows.
                h.components_within(&vm2, &escape.members)
                    .iter()
                    .all(|c| c.members.is_subset(r) && winning.contains(&(m2.clone(), c.members.clone())))
            });
            if wins {
                winning.insert((m.clone(), r.clone()));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(h.components(&VertexSet::new())
        .into_iter()
        .all(|c| winning.contains(&(EdgeSet::new(), c.members))))
}

/// `hw` from the marshals game.
pub fn enumeration_hw(h: &Hypergraph) -> Result<usize> {
    if h.num_vertices() == 0 {
        return Ok(0);
    }
    for k in 1..=h.num_edges() {
        if marshals_win(h, k)? {
            return Ok(k);
        }
    }
    unreachable!("marshals on every edge capture the robber")
}

/// Whether every subset of `x` is the trace of some edge on `x`.
pub fn brute_shattered(h: &Hypergraph, x: &VertexSet) -> Result<bool> {
    if x.len() > 20 {
        return Err(Error::InvalidArgument(format!("shattering test limited to 20 vertices, got {}", x.len())));
    }
    let members = x.to_vec();
    let mut traces: HashSet<u32> = HashSet::new();
    for e in h.edges() {
        let mut mask = 0u32;
        for (i, &v) in members.iter().enumerate() {
            if e.vertices.contains(v) {
                mask |= 1 << i;
            }
        }
        traces.insert(mask);
    }
    Ok(traces.len() == 1usize << members.len())
}
