//! Instances from the 3SAT reduction for width 2: the four-clique gadget,
//! the reduction hypergraph, its width-2 witness for satisfying
//! assignments, and width padding.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::covers::EdgeWeighting;
use crate::decomp::{DecompKind, DecompositionTree};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// A literal: 1-based variable index and polarity (`true` for `x`).
pub type Literal = (usize, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidArgument("formula has no clauses".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            for &(v, _) in c {
                if v == 0 || v > vars {
                    return Err(Error::InvalidArgument(format!(
                        "clause {} uses variable {v} outside 1..={vars}",
                        j + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    /// Parses `(x1 | !x2 | x3) & (...)`. Negation may be written `!`, `~`,
    /// `-` or `¬`; `∨`/`∧` are accepted for `|`/`&`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.replace('∨', "|").replace('∧', "&").replace('¬', "!");
        let mut clauses = Vec::new();
        let mut vars = 0;
        for (j, part) in text.split('&').enumerate() {
            let body = part.trim().trim_start_matches('(').trim_end_matches(')');
            let lits: Vec<&str> = body.split('|').map(str::trim).collect();
            if lits.len() != 3 {
                return Err(Error::InvalidArgument(format!("clause {} has {} literals, expected 3", j + 1, lits.len())));
            }
            let mut clause = [(0, true); 3];
            for (slot, lit) in clause.iter_mut().zip(&lits) {
                let (neg, rest) = match lit.strip_prefix(['!', '~', '-']) {
                    Some(r) => (true, r.trim()),
                    None => (false, *lit),
                };
                let idx: usize = rest
                    .strip_prefix('x')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("bad literal {lit:?} in clause {}", j + 1)))?;
                vars = vars.max(idx);
                *slot = (idx, !neg);
            }
            clauses.push(clause);
        }
        CnfFormula::new(vars, clauses)
    }

    /// DIMACS CNF with exactly three literals per clause.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut vars = None;
        let mut lits: Vec<i64> = Vec::new();
        let mut clauses = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: ln + 1,
                column: 1,
                message,
            };
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 3 || f[0] != "cnf" {
                    return Err(perr("expected 'p cnf <vars> <clauses>'".into()));
                }
                vars = Some(f[1].parse::<usize>().map_err(|_| perr(format!("bad variable count {}", f[1])))?);
                continue;
            }
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| perr(format!("bad literal {tok}")))?;
                if x != 0 {
                    lits.push(x);
                    continue;
                }
                if lits.len() != 3 {
                    return Err(perr(format!("clause {} has {} literals, expected 3", clauses.len() + 1, lits.len())));
                }
                clauses.push([0, 1, 2].map(|i| (lits[i].unsigned_abs() as usize, lits[i] > 0)));
                lits.clear();
            }
        }
        if !lits.is_empty() {
            return Err(Error::InvalidArgument("last clause is not terminated by 0".into()));
        }
        let vars = vars.ok_or_else(|| Error::InvalidArgument("missing 'p cnf' header".into()))?;
        CnfFormula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for &(v, pos) in c {
                let _ = write!(out, "{}{} ", if pos { "" } else { "-" }, v);
            }
            out.push_str("0\n");
        }
        out
    }

    /// Index of the first satisfied literal of each clause, or the first
    /// falsified clause (1-based).
    pub fn chosen_literals(&self, sigma: &[bool]) -> Result<Vec<usize>> {
        if sigma.len() != self.vars {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} values for {} variables",
                sigma.len(),
                self.vars
            )));
        }
        self.clauses
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.iter()
                    .position(|&(v, pos)| sigma[v - 1] == pos)
                    .ok_or(Error::Falsified { clause: j + 1 })
            })
            .collect()
    }

    pub fn satisfied_by(&self, sigma: &[bool]) -> bool {
        self.chosen_literals(sigma).is_ok()
    }

    /// A satisfying assignment by exhaustive search (at most 24 variables).
    pub fn find_model(&self) -> Option<Vec<bool>> {
        assert!(self.vars <= 24, "exhaustive search limited to 24 variables");
        (0u32..1 << self.vars)
            .map(|bits| (0..self.vars).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
            .find(|s| self.satisfied_by(s))
    }
}

/// Parses an assignment such as `TFF`, `1,0,0` or `x1=1 x2=0 x3=0`.
pub fn parse_assignment(text: &str, vars: usize) -> Result<Vec<bool>> {
    let mut sigma = Vec::new();
    if text.contains('=') {
        let mut map = BTreeMap::new();
        for part in text.split([',', ' ', ';']).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::InvalidArgument(format!("bad binding {part:?}")))?;
            let idx: usize = k
                .trim()
                .trim_start_matches('x')
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad variable {k:?}")))?;
            map.insert(idx, truth(v.trim())?);
        }
        for i in 1..=vars {
            sigma.push(*map.get(&i).ok_or_else(|| Error::InvalidArgument(format!("no value for x{i}")))?);
        }
    } else {
        for c in text.chars().filter(|c| !c.is_whitespace() && *c != ',') {
            sigma.push(truth(&c.to_string())?);
        }
    }
    if sigma.len() != vars {
        return Err(Error::InvalidArgument(format!("assignment has {} values for {vars} variables", sigma.len())));
    }
    Ok(sigma)
}

fn truth(s: &str) -> Result<bool> {
    match s {
        "1" | "T" | "t" | "true" => Ok(true),
        "0" | "F" | "f" | "false" => Ok(false),
        _ => Err(Error::InvalidArgument(format!("bad truth value {s:?}"))),
    }
}

/// Sidecar status of reductions from unsatisfiable formulas: their width
/// exceeds 2 by the reduction, but nothing here checks it.
pub const UNVERIFIED_TAG: &str = "EXPECTED-WIDTH>2-UNVERIFIED";

const GADGET: [&str; 8] = ["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"];

/// The 16 gadget edges over `prefix`-renamed gadget vertices (`a1` becomes
/// `{prefix}a1`, with the prime marker inserted after the letter).
fn gadget_edges(prime: bool, m1: &[String], m2: &[String]) -> Vec<(String, Vec<String>)> {
    let v = |s: &str| {
        if prime {
            format!("{}p{}", &s[..1], &s[1..])
        } else {
            s.to_string()
        }
    };
    let with = |pair: [&str; 2], m: &[String]| {
        let mut e = vec![v(pair[0]), v(pair[1])];
        e.extend(m.iter().cloned());
        e
    };
    let none: &[String] = &[];
    let families: [(&str, Vec<Vec<String>>); 3] = [
        (
            "A",
            vec![
                with(["a1", "b1"], m1),
                with(["a2", "b2"], m2),
                with(["a1", "b2"], none),
                with(["a2", "b1"], none),
                with(["a1", "a2"], none),
            ],
        ),
        (
            "B",
            vec![
                with(["b1", "c1"], m1),
                with(["b2", "c2"], m2),
                with(["b1", "c2"], none),
                with(["b2", "c1"], none),
                with(["b1", "b2"], none),
                with(["c1", "c2"], none),
            ],
        ),
        (
            "C",
            vec![
                with(["c1", "d1"], m1),
                with(["c2", "d2"], m2),
                with(["c1", "d2"], none),
                with(["c2", "d1"], none),
                with(["d1", "d2"], none),
            ],
        ),
    ];
    let mut out = Vec::new();
    for (fam, edges) in families {
        for (i, e) in edges.into_iter().enumerate() {
            out.push((format!("E{}{}{}", if prime { "p" } else { "" }, fam, i + 1), e));
        }
    }
    out
}

/// The three-clique gadget over `a1..d2` and the sets `m1`, `m2`.
pub fn gadget_h0(m1: &[String], m2: &[String]) -> Result<Hypergraph> {
    let reserved: HashSet<&str> = GADGET.into_iter().collect();
    let mut seen = HashSet::new();
    for x in m1.iter().chain(m2) {
        if reserved.contains(x.as_str()) {
            return Err(Error::InvalidArgument(format!("{x} is a reserved gadget vertex")));
        }
        if !seen.insert(x.as_str()) {
            return Err(Error::InvalidArgument(format!("{x} occurs twice in M1 and M2")));
        }
    }
    Hypergraph::build(gadget_edges(false, m1, m2))
}

type Pos = (usize, usize);

/// Names and index sets of the reduction hypergraph.
#[derive(Clone, Debug)]
pub struct ReductionLayout {
    pub formula: CnfFormula,
    /// `[2n+3; m]` in lexicographic order.
    pub positions: Vec<Pos>,
    /// `Q`: the positions followed by `(0,1)`, `(0,0)`, `(1,0)`.
    pub q: Vec<Pos>,
    pub s: Vec<String>,
    pub a: Vec<String>,
    pub a_prime: Vec<String>,
    pub y: Vec<String>,
    pub y_prime: Vec<String>,
    pub m1: Vec<String>,
    pub m2: Vec<String>,
    pub m1_prime: Vec<String>,
    pub m2_prime: Vec<String>,
}

pub fn s_name(q: Pos, k: usize, t: usize) -> String {
    format!("S_{}_{}_{}_{}", q.0, q.1, k, t)
}

pub fn a_name(p: Pos) -> String {
    format!("A_{}_{}", p.0, p.1)
}

pub fn a_prime_name(p: Pos) -> String {
    format!("Ap_{}_{}", p.0, p.1)
}

pub fn y_name(i: usize) -> String {
    format!("y_{i}")
}

pub fn y_prime_name(i: usize) -> String {
    format!("yp_{i}")
}

impl ReductionLayout {
    fn new(formula: &CnfFormula) -> Self {
        let (n, m) = (formula.vars, formula.clauses.len());
        let positions: Vec<Pos> = (1..=2 * n + 3).flat_map(|i| (1..=m).map(move |j| (i, j))).collect();
        let mut q = positions.clone();
        q.extend([(0, 1), (0, 0), (1, 0)]);
        let s: Vec<String> = q
            .iter()
            .flat_map(|&p| (1..=3).flat_map(move |k| (0..=1).map(move |t| s_name(p, k, t))))
            .collect();
        let s_at = |p: Pos| -> Vec<String> { (1..=3).flat_map(|k| (0..=1).map(move |t| s_name(p, k, t))).collect() };
        let minus = |p: Pos| -> Vec<String> {
            let drop: HashSet<String> = s_at(p).into_iter().collect();
            s.iter().filter(|x| !drop.contains(*x)).cloned().collect()
        };
        let y: Vec<String> = (1..=n).map(y_name).collect();
        let y_prime: Vec<String> = (1..=n).map(y_prime_name).collect();
        let mut m1 = minus((0, 1));
        m1.push("z1".into());
        let mut m2 = y.clone();
        m2.extend(s_at((0, 1)));
        m2.push("z2".into());
        let mut m1_prime = minus((1, 0));
        m1_prime.push("z1".into());
        let mut m2_prime = y_prime.clone();
        m2_prime.extend(s_at((1, 0)));
        m2_prime.push("z2".into());
        ReductionLayout {
            formula: formula.clone(),
            a: positions.iter().map(|&p| a_name(p)).collect(),
            a_prime: positions.iter().map(|&p| a_prime_name(p)).collect(),
            positions,
            q,
            s,
            y,
            y_prime,
            m1,
            m2,
            m1_prime,
            m2_prime,
        }
    }

    /// `S_p`: the six elements with first component `p`.
    pub fn s_at(&self, p: Pos) -> Vec<String> {
        (1..=3).flat_map(|k| (0..=1).map(move |t| s_name(p, k, t))).collect()
    }

    pub fn s_without(&self, drop: &[String]) -> Vec<String> {
        let drop: HashSet<&String> = drop.iter().collect();
        self.s.iter().filter(|x| !drop.contains(x)).cloned().collect()
    }

    /// `A_p = {a_min, …, a_p}`.
    pub fn a_upto(&self, idx: usize) -> Vec<String> {
        self.a[..=idx].to_vec()
    }

    /// `Ā_p = {a_p, …, a_max}`.
    pub fn a_from(&self, idx: usize) -> Vec<String> {
        self.a[idx..].to_vec()
    }

    pub fn a_prime_upto(&self, idx: usize) -> Vec<String> {
        self.a_prime[..=idx].to_vec()
    }

    /// `Z = {y_i : σ(x_i)} ∪ {y'_i : ¬σ(x_i)}`.
    pub fn z(&self, sigma: &[bool]) -> Vec<String> {
        sigma
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { y_name(i + 1) } else { y_prime_name(i + 1) })
            .collect()
    }

    /// `satisfiable`, [`UNVERIFIED_TAG`], or `unchecked` above 24 variables.
    pub fn status(&self) -> &'static str {
        if self.formula.vars > 24 {
            "unchecked"
        } else if self.formula.find_model().is_some() {
            "satisfiable"
        } else {
            UNVERIFIED_TAG
        }
    }

    /// The `key: value` sidecar describing the vertex families.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "status: {}", self.status());
        let _ = writeln!(out, "variables: {}", self.formula.vars);
        let _ = writeln!(out, "clauses: {}", self.formula.clauses.len());
        let pos: Vec<String> = self.positions.iter().map(|p| format!("{}_{}", p.0, p.1)).collect();
        let _ = writeln!(out, "positions: {}", pos.join(" "));
        for (key, list) in [
            ("S", &self.s),
            ("A", &self.a),
            ("A'", &self.a_prime),
            ("Y", &self.y),
            ("Y'", &self.y_prime),
            ("M1", &self.m1),
            ("M2", &self.m2),
            ("M1'", &self.m1_prime),
            ("M2'", &self.m2_prime),
        ] {
            let _ = writeln!(out, "{key}: {}", list.join(" "));
        }
        let _ = writeln!(out, "Z: z1 z2");
        let gadget: Vec<String> = GADGET.iter().map(|s| s.to_string()).collect();
        let primed: Vec<String> = GADGET.iter().map(|s| format!("{}p{}", &s[..1], &s[1..])).collect();
        let _ = writeln!(out, "gadget: {}", gadget.join(" "));
        let _ = writeln!(out, "gadget': {}", primed.join(" "));
        out
    }
}

fn pos_tag(p: Pos) -> String {
    format!("{}_{}", p.0, p.1)
}

/// The reduction hypergraph of `phi`: two gadget copies joined by the path
/// edges, the `y`-edges, the literal edge pairs and the four end edges.
pub fn reduce_3sat(phi: &CnfFormula) -> Result<(Hypergraph, ReductionLayout)> {
    let lay = ReductionLayout::new(phi);
    let mut edges = gadget_edges(false, &lay.m1, &lay.m2);
    edges.extend(gadget_edges(true, &lay.m1_prime, &lay.m2_prime));
    let last = lay.positions.len() - 1;
    let z1 = || vec!["z1".to_string()];
    let z2 = || vec!["z2".to_string()];
    let cat = |parts: Vec<Vec<String>>| parts.concat();

    for (idx, &p) in lay.positions[..last].iter().enumerate() {
        edges.push((format!("e_p_{}", pos_tag(p)), cat(vec![lay.a_prime_upto(idx), lay.a_from(idx)])));
    }
    for i in 1..=phi.vars {
        edges.push((format!("ey_{i}"), vec![y_name(i), y_prime_name(i)]));
    }
    for (idx, &p) in lay.positions[..last].iter().enumerate() {
        let clause = phi.clauses[p.1 - 1];
        for (k0, &(l, positive)) in clause.iter().enumerate() {
            let k = k0 + 1;
            let single = vec![s_name(p, k, 1)];
            let y: Vec<String> = if positive {
                lay.y.clone()
            } else {
                lay.y.iter().filter(|v| **v != y_name(l)).cloned().collect()
            };
            let yp: Vec<String> = if positive {
                lay.y_prime.iter().filter(|v| **v != y_prime_name(l)).cloned().collect()
            } else {
                lay.y_prime.clone()
            };
            edges.push((
                format!("e_{k}_0_{}", pos_tag(p)),
                cat(vec![lay.a_from(idx), lay.s_without(&single), y, z1()]),
            ));
            edges.push((format!("e_{k}_1_{}", pos_tag(p)), cat(vec![lay.a_prime_upto(idx), single, yp, z2()])));
        }
    }
    let s00 = lay.s_at((0, 0));
    let smax = lay.s_at(lay.positions[last]);
    edges.push((
        "e0_00".into(),
        cat(vec![vec!["a1".into()], lay.a.clone(), lay.s_without(&s00), lay.y.clone(), z1()]),
    ));
    edges.push(("e1_00".into(), cat(vec![s00, lay.y_prime.clone(), z2()])));
    edges.push(("e0_max".into(), cat(vec![lay.s_without(&smax), lay.y.clone(), z1()])));
    edges.push((
        "e1_max".into(),
        cat(vec![vec!["ap1".into()], lay.a_prime.clone(), smax, lay.y_prime.clone(), z2()]),
    ));
    Ok((Hypergraph::build(edges)?, lay))
}

/// The path-shaped width-2 GHD of the reduction hypergraph for a
/// satisfying assignment `sigma`. The literal used at a position is the
/// first satisfied literal of its clause.
pub fn witness_ghd(h: &Hypergraph, lay: &ReductionLayout, sigma: &[bool]) -> Result<DecompositionTree> {
    let chosen = lay.formula.chosen_literals(sigma)?;
    let z = lay.z(sigma);
    let zz = vec!["z1".to_string(), "z2".to_string()];
    let last = lay.positions.len() - 1;
    let mut nodes: Vec<(Vec<String>, Vec<String>)> = Vec::new();

    let gadget_node = |prime: bool, fam: &str, pair: [&str; 4]| -> (Vec<String>, Vec<String>) {
        let p = if prime { "p" } else { "" };
        let v = |s: &str| format!("{}{p}{}", &s[..1], &s[1..]);
        let ys = if prime { &lay.y_prime } else { &lay.y };
        let bag = [pair.iter().map(|s| v(s)).collect(), ys.clone(), lay.s.clone(), zz.clone()].concat();
        (bag, vec![format!("E{p}{fam}1"), format!("E{p}{fam}2")])
    };
    nodes.push(gadget_node(false, "C", ["d1", "d2", "c1", "c2"]));
    nodes.push(gadget_node(false, "B", ["c1", "c2", "b1", "b2"]));
    nodes.push(gadget_node(false, "A", ["b1", "b2", "a1", "a2"]));
    nodes.push((
        [vec!["a1".into()], lay.a.clone(), lay.y.clone(), lay.s.clone(), z.clone(), zz.clone()].concat(),
        vec!["e0_00".into(), "e1_00".into()],
    ));
    for (idx, &p) in lay.positions[..last].iter().enumerate() {
        let k = chosen[p.1 - 1] + 1;
        nodes.push((
            [lay.a_prime_upto(idx), lay.a_from(idx), lay.s.clone(), z.clone(), zz.clone()].concat(),
            vec![format!("e_{k}_0_{}", pos_tag(p)), format!("e_{k}_1_{}", pos_tag(p))],
        ));
    }
    nodes.push((
        [vec!["ap1".into()], lay.a_prime.clone(), lay.y_prime.clone(), lay.s.clone(), z.clone(), zz.clone()].concat(),
        vec!["e0_max".into(), "e1_max".into()],
    ));
    nodes.push(gadget_node(true, "A", ["a1", "a2", "b1", "b2"]));
    nodes.push(gadget_node(true, "B", ["b1", "b2", "c1", "c2"]));
    nodes.push(gadget_node(true, "C", ["c1", "c2", "d1", "d2"]));

    let mut tree: Option<DecompositionTree> = None;
    for (i, (bag, cover)) in nodes.into_iter().enumerate() {
        let bag = h.vertex_set(&bag)?;
        let cover = EdgeWeighting::integral(&h.edge_set(&cover)?);
        match tree.as_mut() {
            None => tree = Some(DecompositionTree::new(DecompKind::Ghd, bag, cover)),
            Some(t) => {
                t.add_child(i - 1, bag, cover);
            }
        }
    }
    Ok(tree.expect("at least nine nodes"))
}

fn fresh_names(h: &Hypergraph, base: &str, count: usize) -> Vec<String> {
    let mut prefix = base.to_string();
    while (1..=count).any(|i| h.vertex_id(&format!("{prefix}{i}")).is_some()) {
        prefix.push('_');
    }
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

/// Adds fresh vertices joined to every old vertex: a clique on `2ℓ`
/// vertices when `q = 0` (width `+ℓ`), or a clique on `ℓ` vertices plus the
/// cyclic windows `{v_i, …, v_{i+q-1}}` when `ℓ > q ≥ 1` (width `+ℓ/q`).
pub fn pad_width(h: &Hypergraph, l: usize, q: usize) -> Result<Hypergraph> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    if q > 0 && l <= q {
        return Err(Error::InvalidArgument(format!("rational padding needs l > q, got l = {l}, q = {q}")));
    }
    let count = if q == 0 { 2 * l } else { l };
    let fresh = fresh_names(h, "pad", count);
    let mut names: HashSet<String> = h.edges().iter().map(|e| e.name.clone()).collect();
    let mut edges: Vec<(String, Vec<String>)> = h
        .edges()
        .iter()
        .map(|e| (e.name.clone(), h.vertex_names_of(&e.vertices).into_iter().map(String::from).collect()))
        .collect();
    let mut push = |name: String, vs: Vec<String>| {
        let mut name = name;
        while names.contains(&name) {
            name.push('_');
        }
        names.insert(name.clone());
        edges.push((name, vs));
    };
    for i in 0..count {
        for j in i + 1..count {
            push(format!("padk_{}_{}", i + 1, j + 1), vec![fresh[i].clone(), fresh[j].clone()]);
        }
    }
    if q > 0 {
        for i in 0..count {
            push(
                format!("padw_{}", i + 1),
                (0..q).map(|d| fresh[(i + d) % count].clone()).collect(),
            );
        }
    }
    for (i, f) in fresh.iter().enumerate() {
        for v in h.vertex_names() {
            push(format!("padx_{}_{v}", i + 1), vec![f.clone(), v.clone()]);
        }
    }
    Hypergraph::build(edges)
}
