//! Decomposition trees and their validators.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::augment::{Augmented, EdgeOrigin};
use crate::bitset::VertexSet;
use crate::covers::EdgeWeighting;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompKind {
    Hd,
    Ghd,
    Fhd,
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompKind::Hd => "HD",
            DecompKind::Ghd => "GHD",
            DecompKind::Fhd => "FHD",
        })
    }
}

impl FromStr for DecompKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HD" => Ok(DecompKind::Hd),
            "GHD" => Ok(DecompKind::Ghd),
            "FHD" => Ok(DecompKind::Fhd),
            _ => Err(Error::InvalidArgument(format!("unknown decomposition kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub bag: VertexSet,
    pub cover: EdgeWeighting,
}

/// Rooted tree; node 0 is always the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTree {
    pub kind: DecompKind,
    nodes: Vec<Node>,
}

impl DecompositionTree {
    pub fn new(kind: DecompKind, bag: VertexSet, cover: EdgeWeighting) -> Self {
        DecompositionTree {
            kind,
            nodes: vec![Node {
                parent: None,
                children: Vec::new(),
                bag,
                cover,
            }],
        }
    }

    pub fn add_child(&mut self, parent: usize, bag: VertexSet, cover: EdgeWeighting) -> usize {
        let id = self.nodes.len();
        self.nodes[parent].children.push(id);
        self.nodes.push(Node {
            parent: Some(parent),
            children: Vec::new(),
            bag,
            cover,
        });
        id
    }

    /// Builds from `(parent, bag, cover)` records. Exactly one record has
    /// no parent; it becomes node 0 and the rest keep their relative order.
    pub fn from_records(kind: DecompKind, records: Vec<(Option<usize>, VertexSet, EdgeWeighting)>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Structure("empty tree".into()));
        }
        let roots: Vec<usize> = (0..records.len()).filter(|&i| records[i].0.is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Structure(format!("expected one root, found {}", roots.len())));
        }
        for (i, r) in records.iter().enumerate() {
            if let Some(p) = r.0 {
                if p >= records.len() || p == i {
                    return Err(Error::Structure(format!("node {i} has invalid parent {p}")));
                }
            }
        }
        let root = roots[0];
        let mut order = vec![root];
        order.extend((0..records.len()).filter(|&i| i != root));
        let mut new_id = vec![0; records.len()];
        for (n, &old) in order.iter().enumerate() {
            new_id[old] = n;
        }
        let mut nodes: Vec<Node> = order
            .iter()
            .map(|&old| Node {
                parent: records[old].0.map(|p| new_id[p]),
                children: Vec::new(),
                bag: records[old].1.clone(),
                cover: records[old].2.clone(),
            })
            .collect();
        for i in 1..nodes.len() {
            let p = nodes[i].parent.expect("non-root");
            nodes[p].children.push(i);
        }
        let tree = DecompositionTree { kind, nodes };
        if tree.preorder().len() != tree.len() {
            return Err(Error::Structure("parent links contain a cycle".into()));
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, u: usize) -> &Node {
        &self.nodes[u]
    }

    pub fn node_mut(&mut self, u: usize) -> &mut Node {
        &mut self.nodes[u]
    }

    pub fn with_kind(mut self, kind: DecompKind) -> Self {
        self.kind = kind;
        self
    }

    /// Nodes reachable from the root, parents before children.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            if out.len() > self.nodes.len() {
                break;
            }
            out.push(u);
            stack.extend(self.nodes[u].children.iter().rev());
        }
        out
    }

    /// Nodes in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            queue.extend(self.nodes[u].children.iter().copied());
        }
        out
    }

    /// `V(T_u)` for every node `u`.
    pub fn subtree_vertices(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::new(); self.nodes.len()];
        for &u in self.preorder().iter().rev() {
            let mut acc = self.nodes[u].bag.clone();
            for &c in &self.nodes[u].children {
                acc.union_with(&out[c]);
            }
            out[u] = acc;
        }
        out
    }

    pub fn width(&self) -> Rational {
        self.nodes
            .iter()
            .map(|n| n.cover.weight())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn check_references(&self, h: &Hypergraph) -> Result<()> {
        for (u, n) in self.nodes.iter().enumerate() {
            if let Some(v) = n.bag.last() {
                if v >= h.num_vertices() {
                    return Err(Error::Structure(format!("node {u} references unknown vertex #{v}")));
                }
            }
            if let Some((e, _)) = n.cover.iter().last() {
                if e >= h.num_edges() {
                    return Err(Error::Structure(format!("node {u} references unknown edge #{e}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// Some bag contains the edge.
    EdgeCoverage,
    /// Nodes whose bag holds a vertex form a subtree.
    Connectedness,
    /// Bag inside the covered set of its weighting.
    BagCover,
    /// HD/GHD covers use weights 0/1 only.
    Integrality,
    /// Cover weight at most k.
    Width,
    /// HD condition `V(T_u) ∩ B(λ_u) ⊆ B_u`.
    Special,
    /// Special condition restricted to weight-1 edges.
    WeakSpecial,
    /// Too many bag vertices outside the integrally covered part.
    CBounded,
    /// Child subtree is not exactly one parent component plus shared bag.
    FnfComponent,
    /// Child bag misses its component.
    FnfMeetsComponent,
    /// Child cover reaches parent-bag vertices outside the child bag.
    FnfBoundary,
}

/// A failed condition together with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub condition: Condition,
    pub node: Option<usize>,
    pub vertex: Option<usize>,
    pub edge: Option<usize>,
}

impl Violation {
    fn new(condition: Condition) -> Self {
        Violation {
            condition,
            node: None,
            vertex: None,
            edge: None,
        }
    }
    fn node(mut self, u: usize) -> Self {
        self.node = Some(u);
        self
    }
    fn vertex(mut self, v: usize) -> Self {
        self.vertex = Some(v);
        self
    }
    fn edge(mut self, e: usize) -> Self {
        self.edge = Some(e);
        self
    }

    /// Human-readable form using names from `h`.
    pub fn describe(&self, h: &Hypergraph) -> String {
        let mut s = format!("{:?}", self.condition);
        if let Some(u) = self.node {
            s.push_str(&format!(" node={u}"));
        }
        if let Some(v) = self.vertex {
            s.push_str(&format!(" vertex={}", h.vertex_name(v)));
        }
        if let Some(e) = self.edge {
            s.push_str(&format!(" edge={}", h.edge(e).name));
        }
        s
    }
}

/// Checks the decomposition conditions for `d.kind` at width `k`.
/// An empty result means valid; dangling references are errors.
pub fn validate(h: &Hypergraph, d: &DecompositionTree, k: &Rational) -> Result<Vec<Violation>> {
    d.check_references(h)?;
    let mut out = Vec::new();

    for (e, edge) in h.edges().iter().enumerate() {
        if !d.nodes.iter().any(|n| edge.vertices.is_subset(&n.bag)) {
            out.push(Violation::new(Condition::EdgeCoverage).edge(e));
        }
    }

    for v in 0..h.num_vertices() {
        let tops: Vec<usize> = (0..d.len())
            .filter(|&u| {
                d.nodes[u].bag.contains(v) && d.nodes[u].parent.map_or(true, |p| !d.nodes[p].bag.contains(v))
            })
            .collect();
        if tops.len() > 1 {
            out.push(Violation::new(Condition::Connectedness).node(tops[1]).vertex(v));
        }
    }

    for (u, n) in d.nodes.iter().enumerate() {
        let covered = n.cover.covered(h);
        for v in n.bag.difference(&covered).iter() {
            out.push(Violation::new(Condition::BagCover).node(u).vertex(v));
        }
        if d.kind != DecompKind::Fhd {
            for (e, w) in n.cover.iter() {
                if !w.is_one() {
                    out.push(Violation::new(Condition::Integrality).node(u).edge(e));
                }
            }
        }
        if n.cover.weight() > *k {
            out.push(Violation::new(Condition::Width).node(u));
        }
    }

    if d.kind == DecompKind::Hd {
        let sub = d.subtree_vertices();
        for (u, n) in d.nodes.iter().enumerate() {
            for e in n.cover.support().iter() {
                let leak = h.edge(e).vertices.intersection(&sub[u]).difference(&n.bag);
                if let Some(v) = leak.first() {
                    out.push(Violation::new(Condition::Special).node(u).vertex(v).edge(e));
                }
            }
        }
    }
    Ok(out)
}

/// `B(γ_u|_S) ∩ V(T_u) ⊆ B_u` with `S` the weight-1 edges of `γ_u`.
pub fn check_weak_special(h: &Hypergraph, d: &DecompositionTree) -> Vec<Violation> {
    let sub = d.subtree_vertices();
    let mut out = Vec::new();
    for (u, n) in d.nodes.iter().enumerate() {
        for e in n.cover.integral_part().iter() {
            for v in h.edge(e).vertices.intersection(&sub[u]).difference(&n.bag).iter() {
                out.push(Violation::new(Condition::WeakSpecial).node(u).edge(e).vertex(v));
            }
        }
    }
    out
}

/// Every bag has at most `c` vertices outside `B(γ_u|_S)`.
pub fn check_c_bounded(h: &Hypergraph, d: &DecompositionTree, c: usize) -> bool {
    c_bounded_violations(h, d, c).is_empty()
}

pub fn c_bounded_violations(h: &Hypergraph, d: &DecompositionTree, c: usize) -> Vec<Violation> {
    d.nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| {
            let integral = h.vertices_of(&n.cover.integral_part());
            n.bag.difference(&integral).len() > c
        })
        .map(|(u, _)| Violation::new(Condition::CBounded).node(u))
        .collect()
}

/// Fractional normal form, checked against the stored root.
pub fn check_fnf(h: &Hypergraph, d: &DecompositionTree) -> Vec<Violation> {
    let sub = d.subtree_vertices();
    let mut out = Vec::new();
    for parent in &d.nodes {
        if parent.children.is_empty() {
            continue;
        }
        let comps = h.components(&parent.bag);
        for &s in &parent.children {
            let child = &d.nodes[s];
            let below = sub[s].difference(&parent.bag);
            let comp = comps.iter().find(|c| c.members.intersects(&below));
            let exact = comp.is_some_and(|c| c.members == below)
                && sub[s].intersection(&parent.bag) == parent.bag.intersection(&child.bag);
            if !exact {
                let mut v = Violation::new(Condition::FnfComponent).node(s);
                if let Some(x) = below.first() {
                    v = v.vertex(x);
                }
                out.push(v);
                continue;
            }
            let c = &comp.expect("checked").members;
            if !child.bag.intersects(c) {
                out.push(Violation::new(Condition::FnfMeetsComponent).node(s));
            }
            let leak = child.cover.covered(h).intersection(&parent.bag).difference(&child.bag);
            if let Some(v) = leak.first() {
                out.push(Violation::new(Condition::FnfBoundary).node(s).vertex(v));
            }
        }
    }
    out
}

/// Adds coverable vertices to bags while connectedness is preserved, until
/// no more additions are possible.
pub fn bag_maximalize(h: &Hypergraph, d: &DecompositionTree) -> Result<DecompositionTree> {
    let violations = validate(h, d, &d.width())?;
    if !violations.is_empty() {
        return Err(Error::InvalidDecomposition(format!(
            "{} violation(s), first: {}",
            violations.len(),
            violations[0].describe(h)
        )));
    }
    let mut out = d.clone();
    let order = out.bfs_order();
    loop {
        let mut changed = false;
        for &u in &order {
            let covered = out.nodes[u].cover.covered(h);
            for v in covered.difference(&out.nodes[u].bag).iter() {
                let node = &out.nodes[u];
                let neighbor_has = node.parent.iter().chain(node.children.iter()).any(|&w| out.nodes[w].bag.contains(v));
                if neighbor_has {
                    out.nodes[u].bag.insert(v);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(out);
        }
    }
}

/// Replaces subedges of an augmented hypergraph by their parent edges.
/// Weights landing on the same parent are added and capped at 1.
pub fn lift_to_original(h: &Hypergraph, aug: &Augmented, d: &DecompositionTree) -> Result<DecompositionTree> {
    let mut out = d.clone();
    for node in out.nodes.iter_mut() {
        let mut lifted: BTreeMap<usize, Rational> = BTreeMap::new();
        for (e, w) in node.cover.iter() {
            let parent = match aug.origin.get(e) {
                Some(EdgeOrigin::Original(i)) => *i,
                Some(EdgeOrigin::Subedge { parents }) if !parents.is_empty() => parents[0],
                _ => {
                    let name = if e < aug.hypergraph.num_edges() {
                        aug.hypergraph.edge(e).name.clone()
                    } else {
                        format!("#{e}")
                    };
                    return Err(Error::MissingParent(name));
                }
            };
            if parent >= h.num_edges() {
                return Err(Error::MissingParent(aug.hypergraph.edge(e).name.clone()));
            }
            let slot = lifted.entry(parent).or_insert_with(Rational::zero);
            *slot += w;
            if *slot > Rational::one() {
                *slot = Rational::one();
            }
        }
        node.cover = EdgeWeighting::from_map(lifted);
    }
    Ok(out)
}
