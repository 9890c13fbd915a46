//! Immutable hypergraphs with dense vertex and edge indices.
//!
//! Vertices and edges are indexed in first-seen order. Every edge is
//! non-empty and every vertex occurs in some edge, so the incidence
//! structure alone determines the vertex set.

use std::collections::{HashMap, VecDeque};

use crate::bitset::{BitSet, EdgeSet, VertexSet};
use crate::error::{Error, Result};

pub const DEFAULT_VERTEX_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub vertices: VertexSet,
}

#[derive(Clone, Debug)]
pub struct Hypergraph {
    vertex_names: Vec<String>,
    vertex_ids: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_ids: HashMap<String, usize>,
    incidence: Vec<EdgeSet>,
    duplicates: Vec<(usize, usize)>,
}

/// A `[V]`-component: a maximal `[V]`-connected vertex set disjoint from `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub separator: VertexSet,
    pub members: VertexSet,
}

impl Component {
    /// Canonical key: the sorted member list.
    pub fn key(&self) -> Vec<usize> {
        self.members.to_vec()
    }
}

/// Result of [`Hypergraph::induced_sub`]: `provenance[i]` lists the edges of
/// the original hypergraph whose trace produced edge `i`.
#[derive(Clone, Debug)]
pub struct InducedSub {
    pub hypergraph: Hypergraph,
    pub provenance: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Dual {
    pub hypergraph: Hypergraph,
    /// Set when the input was not essential; the dual then has repeated edges.
    pub input_not_essential: bool,
}

#[derive(Clone, Debug)]
pub struct EssentialReduction {
    pub hypergraph: Hypergraph,
    /// `(deleted vertex, kept representative)` in the input's indices.
    pub merged: Vec<(usize, usize)>,
}

impl Hypergraph {
    pub fn build<I, S, V>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<V>)>,
        S: Into<String>,
        V: AsRef<str>,
    {
        Self::build_with_cap(edges, DEFAULT_VERTEX_CAP)
    }

    pub fn build_with_cap<I, S, V>(edges: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<V>)>,
        S: Into<String>,
        V: AsRef<str>,
    {
        let mut h = Hypergraph {
            vertex_names: Vec::new(),
            vertex_ids: HashMap::new(),
            edges: Vec::new(),
            edge_ids: HashMap::new(),
            incidence: Vec::new(),
            duplicates: Vec::new(),
        };
        let mut by_set: HashMap<VertexSet, usize> = HashMap::new();
        for (name, vs) in edges {
            let name = name.into();
            if vs.is_empty() {
                return Err(Error::EmptyEdge(name));
            }
            if h.edge_ids.contains_key(&name) {
                return Err(Error::DuplicateEdge(name));
            }
            let mut set = VertexSet::new();
            for v in &vs {
                let v = v.as_ref();
                let id = match h.vertex_ids.get(v) {
                    Some(&id) => id,
                    None => {
                        let id = h.vertex_names.len();
                        if id >= cap {
                            return Err(Error::TooManyVertices { count: id + 1, cap });
                        }
                        h.vertex_names.push(v.to_string());
                        h.vertex_ids.insert(v.to_string(), id);
                        h.incidence.push(EdgeSet::new());
                        id
                    }
                };
                set.insert(id);
            }
            let eid = h.edges.len();
            for v in &set {
                h.incidence[v].insert(eid);
            }
            match by_set.get(&set) {
                Some(&first) => h.duplicates.push((eid, first)),
                None => {
                    by_set.insert(set.clone(), eid);
                }
            }
            h.edge_ids.insert(name.clone(), eid);
            h.edges.push(Edge { name, vertices: set });
        }
        Ok(h)
    }

    /// Builds from index-level data. Vertices that end up in no edge are
    /// dropped; the rest keep their relative order.
    fn from_sets(vertex_names: &[String], edges: Vec<(String, VertexSet)>) -> Hypergraph {
        let mut used = VertexSet::new();
        for (_, s) in &edges {
            used.union_with(s);
        }
        let order = used.to_vec();
        let mut remap = vec![usize::MAX; vertex_names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let names: Vec<String> = order.iter().map(|&v| vertex_names[v].clone()).collect();
        let mut h = Hypergraph {
            vertex_ids: names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect(),
            vertex_names: names,
            edges: Vec::with_capacity(edges.len()),
            edge_ids: HashMap::new(),
            incidence: vec![EdgeSet::new(); order.len()],
            duplicates: Vec::new(),
        };
        let mut by_set: HashMap<VertexSet, usize> = HashMap::new();
        for (name, s) in edges {
            debug_assert!(!s.is_empty());
            let set: VertexSet = s.iter().map(|v| remap[v]).collect();
            let eid = h.edges.len();
            for v in &set {
                h.incidence[v].insert(eid);
            }
            match by_set.get(&set) {
                Some(&first) => h.duplicates.push((eid, first)),
                None => {
                    by_set.insert(set.clone(), eid);
                }
            }
            let fresh = h.edge_ids.insert(name.clone(), eid).is_none();
            debug_assert!(fresh, "duplicate edge name {name}");
            h.edges.push(Edge { name, vertices: set });
        }
        h
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_ids.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_ids.get(name).copied()
    }

    /// Resolves vertex names, rejecting unknown ones.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names
            .iter()
            .map(|n| {
                self.vertex_id(n.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn edge_set<S: AsRef<str>>(&self, names: &[S]) -> Result<EdgeSet> {
        names
            .iter()
            .map(|n| {
                self.edge_id(n.as_ref())
                    .ok_or_else(|| Error::UnknownEdge(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn vertex_names_of(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.vertex_name(v)).collect()
    }

    pub fn edge_names_of(&self, set: &EdgeSet) -> Vec<&str> {
        set.iter().map(|e| self.edges[e].name.as_str()).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.num_edges())
    }

    /// Edges containing `v`.
    pub fn incident(&self, v: usize) -> &EdgeSet {
        &self.incidence[v]
    }

    /// Pairs `(duplicate, first)` of edges with identical vertex sets.
    pub fn duplicate_edges(&self) -> &[(usize, usize)] {
        &self.duplicates
    }

    /// Dedup view: the first edge of each distinct vertex set.
    pub fn distinct_edges(&self) -> Vec<usize> {
        let dup: BitSet = self.duplicates.iter().map(|&(d, _)| d).collect();
        (0..self.num_edges()).filter(|e| !dup.contains(*e)).collect()
    }

    /// `edges(C)`: edges meeting `c`.
    pub fn edges_incident(&self, c: &VertexSet) -> EdgeSet {
        let mut out = EdgeSet::new();
        for v in c {
            if v < self.incidence.len() {
                out.union_with(&self.incidence[v]);
            }
        }
        out
    }

    /// Checked variant of [`edges_incident`](Self::edges_incident).
    pub fn edges_incident_checked(&self, c: &VertexSet) -> Result<EdgeSet> {
        if let Some(v) = c.last() {
            if v >= self.num_vertices() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        Ok(self.edges_incident(c))
    }

    /// `V(E)`: union of the given edges.
    pub fn vertices_of(&self, edges: &EdgeSet) -> VertexSet {
        let mut out = VertexSet::new();
        for e in edges {
            out.union_with(&self.edges[e].vertices);
        }
        out
    }

    /// Vertices outside `c` sharing an edge with `c`.
    pub fn boundary(&self, c: &VertexSet) -> VertexSet {
        self.vertices_of(&self.edges_incident(c)).difference(c)
    }

    /// `[sep]`-components, sorted by canonical key.
    pub fn components(&self, sep: &VertexSet) -> Vec<Component> {
        self.components_within(sep, &self.all_vertices())
    }

    /// `[sep]`-components contained in `within`. `within` must be a union of
    /// `[sep]`-components together with vertices of `sep`.
    pub fn components_within(&self, sep: &VertexSet, within: &VertexSet) -> Vec<Component> {
        let mut seen = sep.clone();
        let mut out = Vec::new();
        for start in within {
            if seen.contains(start) {
                continue;
            }
            let mut members = VertexSet::singleton(start);
            seen.insert(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for e in &self.incidence[v] {
                    for w in &self.edges[e].vertices {
                        if !seen.contains(w) {
                            seen.insert(w);
                            members.insert(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            out.push(Component {
                separator: sep.clone(),
                members,
            });
        }
        out.sort_by(|a, b| a.members.cmp(&b.members));
        out
    }

    /// A `[sep]`-path from `x` to `y`: consecutive vertices share an edge
    /// that, minus `sep`, contains both.
    pub fn separated_path(&self, sep: &VertexSet, x: usize, y: usize) -> Option<Vec<usize>> {
        if sep.contains(x) || sep.contains(y) {
            return None;
        }
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut seen = VertexSet::singleton(x);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            if v == y {
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for e in &self.incidence[v] {
                for w in self.edges[e].vertices.difference(sep).iter() {
                    if seen.insert(w) {
                        prev.insert(w, v);
                        queue.push_back(w);
                    }
                }
            }
        }
        None
    }

    /// Subhypergraph induced by `keep`: edges `e ∩ keep`, deduplicated, each
    /// named after its first source edge.
    pub fn induced_sub(&self, keep: &VertexSet) -> InducedSub {
        let mut index: HashMap<VertexSet, usize> = HashMap::new();
        let mut sets: Vec<(String, VertexSet)> = Vec::new();
        let mut provenance: Vec<Vec<usize>> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let t = e.vertices.intersection(keep);
            if t.is_empty() {
                continue;
            }
            match index.get(&t) {
                Some(&j) => provenance[j].push(i),
                None => {
                    index.insert(t.clone(), sets.len());
                    sets.push((e.name.clone(), t));
                    provenance.push(vec![i]);
                }
            }
        }
        InducedSub {
            hypergraph: Hypergraph::from_sets(&self.vertex_names, sets),
            provenance,
        }
    }

    /// Vertices grouped by edge-type (the set of incident edges).
    fn type_classes(&self) -> Vec<Vec<usize>> {
        let mut index: HashMap<&EdgeSet, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.num_vertices() {
            let t = &self.incidence[v];
            match index.get(t) {
                Some(&c) => classes[c].push(v),
                None => {
                    index.insert(t, classes.len());
                    classes.push(vec![v]);
                }
            }
        }
        classes
    }

    /// True when no two distinct vertices have the same edge-type.
    pub fn is_essential(&self) -> bool {
        self.type_classes().iter().all(|c| c.len() == 1)
    }

    /// Dual hypergraph: one vertex per edge, one edge per vertex.
    pub fn dual(&self) -> Dual {
        let names: Vec<String> = self.edges.iter().map(|e| e.name.clone()).collect();
        let edges: Vec<(String, VertexSet)> = (0..self.num_vertices())
            .map(|v| (self.vertex_names[v].clone(), self.incidence[v].clone()))
            .collect();
        Dual {
            hypergraph: Hypergraph::from_sets(&names, edges),
            input_not_essential: !self.is_essential(),
        }
    }

    /// Deletes all but the first vertex of each edge-type class.
    pub fn reduce_essential(&self) -> EssentialReduction {
        let mut drop = VertexSet::new();
        let mut merged = Vec::new();
        for class in self.type_classes() {
            let keep = class[0];
            for &v in &class[1..] {
                drop.insert(v);
                merged.push((v, keep));
            }
        }
        merged.sort();
        let edges: Vec<(String, VertexSet)> = self
            .edges
            .iter()
            .map(|e| (e.name.clone(), e.vertices.difference(&drop)))
            .collect();
        EssentialReduction {
            hypergraph: Hypergraph::from_sets(&self.vertex_names, edges),
            merged,
        }
    }

    /// Adds edges given as vertex sets over this hypergraph's indices.
    /// Used by the augmentation routines; names must be fresh.
    pub(crate) fn with_extra_edges(&self, extra: Vec<(String, VertexSet)>) -> Hypergraph {
        let mut all: Vec<(String, VertexSet)> = self
            .edges
            .iter()
            .map(|e| (e.name.clone(), e.vertices.clone()))
            .collect();
        all.extend(extra);
        Hypergraph::from_sets(&self.vertex_names, all)
    }

    /// Writes a set as `{a,b,c}` using vertex names.
    pub fn format_vertices(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.vertex_names_of(set).join(","))
    }
}
