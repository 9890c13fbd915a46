//! Text formats for hypergraphs and decompositions.
//!
//! Hypergraphs are lists of `name(v1,v2,...)` atoms separated by `,` or `.`,
//! with `%` starting a comment. Decompositions use a line format:
//!
//! ```text
//! hgd-decomposition 1
//! kind FHD width 3/2
//! node 0 parent - bag {a,b,c} cover {e1=1/2,e2=1/2,e3=1/2}
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::bitset::VertexSet;
use crate::covers::EdgeWeighting;
use crate::decomp::{DecompKind, DecompositionTree};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, DEFAULT_VERTEX_CAP};
use crate::rational::{self, Rational};

pub const DECOMPOSITION_HEADER: &str = "hgd-decomposition 1";

const DELIMITERS: &str = "(),{}=%";

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else if c != '\r' {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '%' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_blank();
        self.chars.peek().copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    /// Identifier plus its starting position.
    fn ident(&mut self, what: &str) -> Result<(String, usize, usize)> {
        self.skip_blank();
        let (line, column) = (self.line, self.column);
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || DELIMITERS.contains(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(match self.chars.peek().copied() {
                Some(c) => self.error(format!("expected {what}, found '{c}'")),
                None => self.error(format!("expected {what}, found end of input")),
            });
        }
        Ok((s, line, column))
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    parse_hypergraph_with_cap(text, DEFAULT_VERTEX_CAP)
}

pub fn parse_hypergraph_with_cap(text: &str, cap: usize) -> Result<Hypergraph> {
    let mut cur = Cursor::new(text);
    let mut edges: Vec<(String, Vec<String>)> = Vec::new();
    let mut names = HashSet::new();
    while cur.peek().is_some() {
        let (name, line, column) = cur.ident("edge name")?;
        if !names.insert(name.clone()) {
            return Err(Error::Parse {
                line,
                column,
                message: format!("duplicate edge id {name}"),
            });
        }
        cur.expect('(')?;
        let mut vs = Vec::new();
        if cur.peek() == Some(')') {
            return Err(Error::Parse {
                line,
                column,
                message: format!("empty edge {name}"),
            });
        }
        loop {
            let (v, _, _) = cur.ident("vertex name")?;
            vs.push(v);
            match cur.peek() {
                Some(',') => {
                    cur.bump();
                }
                Some(')') => {
                    cur.bump();
                    break;
                }
                Some(c) => return Err(cur.error(format!("expected ',' or ')', found '{c}'"))),
                None => return Err(cur.error("unterminated edge")),
            }
        }
        match cur.peek() {
            Some(',') | Some('.') => {
                cur.bump();
            }
            _ => {}
        }
        edges.push((name, vs));
    }
    Hypergraph::build_with_cap(edges, cap)
}

/// One atom per line, `,`-separated and closed by `.`.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let m = h.num_edges();
    for (i, e) in h.edges().iter().enumerate() {
        let vs: Vec<&str> = h.vertex_names_of(&e.vertices);
        let sep = if i + 1 == m { '.' } else { ',' };
        let _ = writeln!(out, "{}({}){}", e.name, vs.join(","), sep);
    }
    out
}

/// Names containing non-ASCII characters.
pub fn non_ascii_identifiers(h: &Hypergraph) -> Vec<String> {
    h.edges()
        .iter()
        .map(|e| e.name.as_str())
        .chain(h.vertex_names().iter().map(String::as_str))
        .filter(|s| !s.is_ascii())
        .map(String::from)
        .collect()
}

pub fn write_decomposition(h: &Hypergraph, d: &DecompositionTree) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{DECOMPOSITION_HEADER}");
    let _ = writeln!(out, "kind {} width {}", d.kind, rational::format(&d.width()));
    for (u, node) in d.nodes().iter().enumerate() {
        let parent = node.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
        let cover: Vec<String> = node
            .cover
            .iter()
            .map(|(e, w)| format!("{}={}", h.edge(e).name, rational::format(w)))
            .collect();
        let _ = writeln!(
            out,
            "node {u} parent {parent} bag {{{}}} cover {{{}}}",
            h.vertex_names_of(&node.bag).join(","),
            cover.join(",")
        );
    }
    out
}

#[derive(Clone, Debug)]
pub struct ParsedDecomposition {
    pub tree: DecompositionTree,
    pub declared_width: Rational,
    pub warnings: Vec<String>,
}

fn keyword(cur: &mut Cursor, want: &str) -> Result<()> {
    let (w, line, column) = cur.ident(want)?;
    if w != want {
        return Err(Error::Parse {
            line,
            column,
            message: format!("expected '{want}', found '{w}'"),
        });
    }
    Ok(())
}

fn braced_list(cur: &mut Cursor, what: &str) -> Result<Vec<(String, Option<String>, usize, usize)>> {
    cur.expect('{')?;
    let mut items = Vec::new();
    if cur.peek() == Some('}') {
        cur.bump();
        return Ok(items);
    }
    loop {
        let (name, line, column) = cur.ident(what)?;
        let value = if cur.peek() == Some('=') {
            cur.bump();
            Some(cur.ident("weight")?.0)
        } else {
            None
        };
        items.push((name, value, line, column));
        match cur.peek() {
            Some(',') => {
                cur.bump();
            }
            Some('}') => {
                cur.bump();
                return Ok(items);
            }
            _ => return Err(cur.error("expected ',' or '}'")),
        }
    }
}

/// Reads a decomposition of `h`. A declared width that differs from the
/// recomputed one is reported as a warning.
pub fn parse_decomposition(h: &Hypergraph, text: &str) -> Result<ParsedDecomposition> {
    let mut cur = Cursor::new(text);
    let (magic, line, column) = cur.ident("header")?;
    let (version, vline, vcolumn) = cur.ident("format version")?;
    if magic != "hgd-decomposition" {
        return Err(Error::Parse {
            line,
            column,
            message: format!("expected header '{DECOMPOSITION_HEADER}'"),
        });
    }
    if version != "1" {
        return Err(Error::Parse {
            line: vline,
            column: vcolumn,
            message: format!("unsupported format version {version}"),
        });
    }
    keyword(&mut cur, "kind")?;
    let (kind, line, column) = cur.ident("kind")?;
    let kind: DecompKind = kind.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("unknown kind {kind}"),
    })?;
    keyword(&mut cur, "width")?;
    let (w, line, column) = cur.ident("width")?;
    let declared_width = rational::parse(&w).map_err(|e| Error::Parse {
        line,
        column,
        message: e.to_string(),
    })?;

    let mut records: BTreeMap<usize, (Option<usize>, VertexSet, EdgeWeighting)> = BTreeMap::new();
    while cur.peek().is_some() {
        keyword(&mut cur, "node")?;
        let (id, line, column) = cur.ident("node id")?;
        let at = |message: String| Error::Parse { line, column, message };
        let id: usize = id.parse().map_err(|_| at(format!("bad node id {id}")))?;
        keyword(&mut cur, "parent")?;
        let (p, pline, pcolumn) = cur.ident("parent id")?;
        let parent = if p == "-" {
            None
        } else {
            Some(p.parse::<usize>().map_err(|_| Error::Parse {
                line: pline,
                column: pcolumn,
                message: format!("bad parent id {p}"),
            })?)
        };
        keyword(&mut cur, "bag")?;
        let mut bag = VertexSet::new();
        for (v, _, l, c) in braced_list(&mut cur, "vertex name")? {
            let vid = h.vertex_id(&v).ok_or_else(|| Error::Parse {
                line: l,
                column: c,
                message: format!("unknown vertex {v}"),
            })?;
            bag.insert(vid);
        }
        keyword(&mut cur, "cover")?;
        let mut cover = EdgeWeighting::new();
        for (e, w, l, c) in braced_list(&mut cur, "edge name")? {
            let at = |message: String| Error::Parse { line: l, column: c, message };
            let eid = h.edge_id(&e).ok_or_else(|| at(format!("unknown edge {e}")))?;
            let w = w.ok_or_else(|| at(format!("edge {e} has no weight")))?;
            let w = rational::parse(&w).map_err(|err| at(err.to_string()))?;
            cover.set(eid, w).map_err(|err| at(err.to_string()))?;
        }
        if records.insert(id, (parent, bag, cover)).is_some() {
            return Err(at(format!("duplicate node id {id}")));
        }
    }
    if records.is_empty() {
        return Err(Error::Structure("decomposition has no nodes".into()));
    }
    let n = records.len();
    if records.keys().next_back() != Some(&(n - 1)) {
        return Err(Error::Structure(format!("node ids must be 0..{}", n - 1)));
    }
    let tree = DecompositionTree::from_records(kind, records.into_values().collect())?;
    let mut warnings = Vec::new();
    if tree.width() != declared_width {
        warnings.push(format!(
            "declared width {} differs from recomputed width {}",
            rational::format(&declared_width),
            rational::format(&tree.width())
        ));
    }
    Ok(ParsedDecomposition {
        tree,
        declared_width,
        warnings,
    })
}
