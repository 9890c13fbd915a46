//! Structural measures: degree, intersection widths, VC dimension, rank,
//! and corpus histograms.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bitset::VertexSet;
use crate::hypergraph::Hypergraph;
use crate::io;

pub const DEFAULT_VC_CAP: usize = 16;

pub fn degree(h: &Hypergraph) -> usize {
    (0..h.num_vertices()).map(|v| h.incident(v).len()).max().unwrap_or(0)
}

pub fn rank(h: &Hypergraph) -> usize {
    h.edges().iter().map(|e| e.vertices.len()).max().unwrap_or(0)
}

fn edge_sets(h: &Hypergraph, count_duplicates: bool) -> Vec<&VertexSet> {
    if count_duplicates {
        h.edges().iter().map(|e| &e.vertices).collect()
    } else {
        h.distinct_edges().into_iter().map(|e| &h.edge(e).vertices).collect()
    }
}

/// Largest intersection of two distinct edges (dedup view).
pub fn iwidth(h: &Hypergraph) -> usize {
    c_miwidth(h, 2)
}

pub fn iwidth_with(h: &Hypergraph, count_duplicates: bool) -> usize {
    c_miwidth_with(h, 2, count_duplicates)
}

/// Largest intersection of `c` pairwise distinct edges (dedup view);
/// 0 when there are fewer than `c` edges.
pub fn c_miwidth(h: &Hypergraph, c: usize) -> usize {
    c_miwidth_with(h, c, false)
}

pub fn c_miwidth_with(h: &Hypergraph, c: usize, count_duplicates: bool) -> usize {
    assert!(c >= 1, "c must be positive");
    let sets = edge_sets(h, count_duplicates);
    if sets.len() < c {
        return 0;
    }
    let mut best = 0;
    for (i, s) in sets.iter().enumerate() {
        deepen(&sets, i + 1, c - 1, (*s).clone(), &mut best);
    }
    best
}

fn deepen(sets: &[&VertexSet], from: usize, remaining: usize, acc: VertexSet, best: &mut usize) {
    let size = acc.len();
    if size <= *best {
        return;
    }
    if remaining == 0 {
        *best = size;
        return;
    }
    if sets.len() - from < remaining {
        return;
    }
    for j in from..sets.len() {
        deepen(sets, j + 1, remaining - 1, acc.intersection(sets[j]), best);
    }
}

/// Exact VC dimension, or `None` when the vertex count exceeds `cap`.
pub fn vc_dimension(h: &Hypergraph, cap: usize) -> Option<usize> {
    if h.num_vertices() > cap {
        return None;
    }
    if h.num_edges() == 0 {
        return Some(0);
    }
    let traces_full = |x: &VertexSet| {
        let mut traces = HashSet::new();
        for e in h.edges() {
            traces.insert(e.vertices.intersection(x));
        }
        traces.len() == 1usize << x.len()
    };
    // Shattered sets are closed under subsets, so level s+1 only needs
    // extensions of shattered sets of level s by a larger vertex.
    let mut level: Vec<VertexSet> = vec![VertexSet::new()];
    let mut dim = 0;
    loop {
        let mut next = Vec::new();
        for x in &level {
            let start = x.last().map_or(0, |m| m + 1);
            for v in start..h.num_vertices() {
                let mut y = x.clone();
                y.insert(v);
                if traces_full(&y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Some(dim);
        }
        dim += 1;
        level = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub vertices: usize,
    pub edges: usize,
    pub degree: usize,
    pub iwidth: usize,
    pub miwidth: BTreeMap<usize, usize>,
    pub vc_dim: Option<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub miwidth_cs: Vec<usize>,
    pub vc_cap: usize,
    pub count_duplicates: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            miwidth_cs: vec![3, 4],
            vc_cap: DEFAULT_VC_CAP,
            count_duplicates: false,
        }
    }
}

pub fn analyze(h: &Hypergraph, opts: &AnalyzeOptions) -> PropertyReport {
    PropertyReport {
        vertices: h.num_vertices(),
        edges: h.num_edges(),
        degree: degree(h),
        iwidth: iwidth_with(h, opts.count_duplicates),
        miwidth: opts
            .miwidth_cs
            .iter()
            .map(|&c| (c, c_miwidth_with(h, c, opts.count_duplicates)))
            .collect(),
        vc_dim: vc_dimension(h, opts.vc_cap),
        rank: rank(h),
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub miwidth_cs: Vec<usize>,
    pub rows: Vec<(String, PropertyReport)>,
    pub errors: Vec<(String, String)>,
}

/// Histogram bucket labels.
pub const BUCKETS: [&str; 7] = ["0", "1", "2", "3", "4", "5", ">5"];

fn bucket(x: usize) -> usize {
    x.min(6)
}

/// Analyzes every file; unreadable or malformed files become error records.
/// Files are processed concurrently, results keep input order.
pub fn analyze_corpus(paths: &[PathBuf], opts: &AnalyzeOptions) -> CorpusReport {
    let results: Vec<(String, std::result::Result<PropertyReport, String>)> = paths
        .par_iter()
        .map(|p| (p.display().to_string(), analyze_file(p, opts)))
        .collect();
    let mut report = CorpusReport {
        miwidth_cs: opts.miwidth_cs.clone(),
        ..CorpusReport::default()
    };
    for (name, r) in results {
        match r {
            Ok(row) => report.rows.push((name, row)),
            Err(e) => report.errors.push((name, e)),
        }
    }
    report
}

fn analyze_file(p: &Path, opts: &AnalyzeOptions) -> std::result::Result<PropertyReport, String> {
    let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
    let h = io::parse_hypergraph(&text).map_err(|e| e.to_string())?;
    Ok(analyze(&h, opts))
}

impl CorpusReport {
    /// Rows `(property, counts per bucket)`.
    pub fn histogram(&self) -> Vec<(String, [usize; 7])> {
        let mut out = Vec::new();
        let mut add = |label: String, f: &dyn Fn(&PropertyReport) -> Option<usize>| {
            let mut counts = [0usize; 7];
            for (_, r) in &self.rows {
                if let Some(x) = f(r) {
                    counts[bucket(x)] += 1;
                }
            }
            out.push((label, counts));
        };
        add("degree".into(), &|r| Some(r.degree));
        add("iwidth".into(), &|r| Some(r.iwidth));
        for &c in &self.miwidth_cs {
            add(format!("miwidth_c{c}"), &move |r| r.miwidth.get(&c).copied());
        }
        add("vc_dim".into(), &|r| r.vc_dim);
        out
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("instance,degree,iwidth");
        for c in &self.miwidth_cs {
            let _ = write!(s, ",miwidth_c{c}");
        }
        s.push_str(",vc_dim,rank\n");
        for (name, r) in &self.rows {
            let _ = write!(s, "{name},{},{}", r.degree, r.iwidth);
            for c in &self.miwidth_cs {
                let _ = write!(s, ",{}", r.miwidth[c]);
            }
            let vc = r.vc_dim.map_or_else(|| "NA".to_string(), |v| v.to_string());
            let _ = writeln!(s, ",{vc},{}", r.rank);
        }
        s
    }

    pub fn histogram_csv(&self) -> String {
        let mut s = format!("property,{}\n", BUCKETS.join(","));
        for (label, counts) in self.histogram() {
            let cells: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "{label},{}", cells.join(","));
        }
        s
    }

    /// Aligned text table of the histogram followed by error records.
    pub fn table(&self) -> String {
        let hist = self.histogram();
        let label_w = hist.iter().map(|(l, _)| l.len()).max().unwrap_or(8).max(8);
        let mut s = format!("{:<label_w$}", "property");
        for b in BUCKETS {
            let _ = write!(s, " {b:>6}");
        }
        s.push('\n');
        for (label, counts) in hist {
            let _ = write!(s, "{label:<label_w$}");
            for c in counts {
                let _ = write!(s, " {c:>6}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "instances: {}  errors: {}", self.rows.len(), self.errors.len());
        for (name, e) in &self.errors {
            let _ = writeln!(s, "error {name}: {e}");
        }
        s
    }
}
