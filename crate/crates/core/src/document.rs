//! Line-based text format for systems of isometries and interval exchanges.
//!
//! ```text
//! system v1
//! field quadratic d=5
//! rank 2
//! tree T0
//!   vertex v0
//!   vertex v1
//!   edge e0 v0 v1 3/2 + 1/2*sqrt(5)
//! end
//! letter a
//!   map T0:v0 -> T0:e0@1/2 + 1/2*sqrt(5)
//!   map T0:e0@1 -> T0:v1
//! end
//! ```
//!
//! An interval exchange replaces the tree and letter blocks:
//!
//! ```text
//! system v1
//! iet
//!   lengths = [1, 1/2 + 1/2*sqrt(5)]; permutation = [2, 1]
//! end
//! ```
//!
//! Blank lines and text after `#` are ignored.

use std::fmt::Write as _;

use crate::error::DocumentError;
use crate::forest::{build_forest, Forest, Loc, TreeSpec};
use crate::iet::{iet_to_system, IntervalExchange};
use crate::scalar::{Field, Scalar};
use crate::system::{LetterSpec, SystemOfIsometries, SystemSpec};
use crate::tree::Point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    System(SystemSpec),
    Iet(IntervalExchange),
}

impl Document {
    /// The system the document describes, validated.
    pub fn into_system(self) -> Result<SystemOfIsometries, DocumentError> {
        match self {
            Document::System(spec) => spec.build().map_err(|e| DocumentError { line: 0, message: e.to_string() }),
            Document::Iet(e) => iet_to_system(&e).map_err(|e| DocumentError { line: 0, message: e.to_string() }),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> DocumentError {
    DocumentError { line, message: message.into() }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let x = self.items.get(self.pos).copied();
        self.pos += 1;
        x
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |x| x.0)
    }
}

fn parse_scalar(line: usize, s: &str) -> Result<Scalar, DocumentError> {
    s.trim().parse().map_err(|e| err(line, format!("{e}")))
}

fn parse_field(line: usize, rest: &str) -> Result<Field, DocumentError> {
    let rest = rest.trim();
    if rest == "rational" {
        return Ok(Field::Rational);
    }
    let d = rest
        .strip_prefix("quadratic")
        .map(|d| d.trim().trim_start_matches("d=").trim())
        .ok_or_else(|| err(line, format!("unknown field {rest:?}")))?;
    let d: u32 = d.parse().map_err(|_| err(line, format!("bad root {d:?}")))?;
    Field::quadratic(d).map_err(|e| err(line, e.to_string()))
}

fn parse_loc(line: usize, forest: &Forest, s: &str) -> Result<Loc, DocumentError> {
    let s = s.trim();
    let (tname, rest) = s.split_once(':').ok_or_else(|| err(line, format!("expected TREE:POINT, got {s:?}")))?;
    let t = forest.tree_by_name(tname.trim()).ok_or_else(|| err(line, format!("unknown tree {tname:?}")))?;
    let tree = forest.tree(t);
    let point = match rest.split_once('@') {
        None => Point::Vertex(tree.vertex_by_name(rest.trim()).ok_or_else(|| err(line, format!("unknown vertex {rest:?}")))?),
        Some((ename, off)) => {
            let e = tree.edge_by_name(ename.trim()).ok_or_else(|| err(line, format!("unknown edge {ename:?}")))?;
            let off = parse_scalar(line, off)?;
            tree.point_on_edge(e, off).ok_or_else(|| err(line, "offset outside the edge"))?
        }
    };
    Ok(Loc::new(t, point))
}

/// A point written as `TREE:VERTEX` or `TREE:EDGE@OFFSET`.
pub fn parse_location(forest: &Forest, text: &str) -> Result<Loc, DocumentError> {
    parse_loc(0, forest, text)
}

fn parse_list(line: usize, s: &str) -> Result<Vec<&str>, DocumentError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected [..], got {s:?}")))?;
    Ok(inner.split(',').map(str::trim).filter(|x| !x.is_empty()).collect())
}

fn parse_iet(lines: &mut Lines, start: usize) -> Result<IntervalExchange, DocumentError> {
    let mut lengths: Option<Vec<Scalar>> = None;
    let mut perm: Option<Vec<usize>> = None;
    loop {
        let (n, l) = lines.next().ok_or_else(|| err(start, "unterminated iet block"))?;
        if l == "end" {
            break;
        }
        for part in l.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| err(n, format!("expected key = value, got {part:?}")))?;
            match key.trim() {
                "lengths" => {
                    lengths = Some(parse_list(n, value)?.into_iter().map(|x| parse_scalar(n, x)).collect::<Result<_, _>>()?)
                }
                "permutation" => {
                    perm = Some(
                        parse_list(n, value)?
                            .into_iter()
                            .map(|x| x.parse().map_err(|_| err(n, format!("bad index {x:?}"))))
                            .collect::<Result<_, _>>()?,
                    )
                }
                other => return Err(err(n, format!("unknown key {other:?}"))),
            }
        }
    }
    let lengths = lengths.ok_or_else(|| err(start, "missing lengths"))?;
    let perm = perm.ok_or_else(|| err(start, "missing permutation"))?;
    IntervalExchange::new(lengths, &perm).map_err(|e| err(start, e.to_string()))
}

/// Parses a document. Systems are returned unvalidated.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, "system v1")) => {}
        Some((n, l)) => return Err(err(n, format!("expected header `system v1`, got {l:?}"))),
        None => return Err(err(1, "empty document")),
    }
    let mut field = Field::Rational;
    let mut rank_hint = None;
    let mut trees: Vec<TreeSpec> = Vec::new();
    let mut letters: Vec<(usize, String, Vec<(usize, String, String)>)> = Vec::new();
    let mut iet = None;
    while let Some((n, l)) = lines.next() {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match kw {
            "field" => field = parse_field(n, rest)?,
            "rank" => rank_hint = Some(rest.parse().map_err(|_| err(n, format!("bad rank {rest:?}")))?),
            "tree" => {
                let mut spec = TreeSpec { name: rest.to_string(), vertices: Vec::new(), edges: Vec::new() };
                loop {
                    let (m, l) = lines.next().ok_or_else(|| err(n, "unterminated tree block"))?;
                    if l == "end" {
                        break;
                    }
                    let mut parts = l.splitn(5, char::is_whitespace);
                    match parts.next() {
                        Some("vertex") => spec.vertices.push(parts.next().ok_or_else(|| err(m, "missing vertex name"))?.to_string()),
                        Some("edge") => {
                            let mut next = |what: &str| parts.next().map(str::to_string).ok_or_else(|| err(m, format!("missing {what}")));
                            let name = next("edge name")?;
                            let from = next("edge source")?;
                            let to = next("edge target")?;
                            let len = parse_scalar(m, &next("edge length")?)?;
                            spec.edges.push((name, from, to, len));
                        }
                        _ => return Err(err(m, format!("expected vertex or edge, got {l:?}"))),
                    }
                }
                trees.push(spec);
            }
            "letter" => {
                let mut maps = Vec::new();
                loop {
                    let (m, l) = lines.next().ok_or_else(|| err(n, "unterminated letter block"))?;
                    if l == "end" {
                        break;
                    }
                    let body = l.strip_prefix("map").ok_or_else(|| err(m, format!("expected map, got {l:?}")))?;
                    let (x, y) = body.split_once("->").ok_or_else(|| err(m, "expected `->`"))?;
                    maps.push((m, x.trim().to_string(), y.trim().to_string()));
                }
                letters.push((n, rest.to_string(), maps));
            }
            "iet" => iet = Some(parse_iet(&mut lines, n)?),
            _ => return Err(err(n, format!("unknown keyword {kw:?}"))),
        }
    }
    if let Some(e) = iet {
        if !trees.is_empty() || !letters.is_empty() {
            return Err(err(lines.last_line(), "an iet document has no tree or letter blocks"));
        }
        return Ok(Document::Iet(e));
    }
    let forest = build_forest(&trees).map_err(|e| err(0, e.to_string()))?;
    let mut specs = Vec::new();
    for (n, name, maps) in letters {
        let anchors = maps
            .iter()
            .map(|(m, x, y)| Ok((parse_loc(*m, &forest, x)?, parse_loc(*m, &forest, y)?)))
            .collect::<Result<Vec<_>, DocumentError>>()?;
        if anchors.is_empty() {
            return Err(err(n, format!("letter {name} has no map lines")));
        }
        specs.push(LetterSpec { name, anchors });
    }
    Ok(Document::System(SystemSpec { field, forest, letters: specs, rank_hint }))
}

/// Parses and validates a system document (interval exchanges are converted).
pub fn parse_system(text: &str) -> Result<SystemOfIsometries, DocumentError> {
    parse_document(text)?.into_system()
}

/// Canonical text of a system spec.
pub fn emit_spec(spec: &SystemSpec) -> String {
    let mut out = String::from("system v1\n");
    writeln!(out, "field {}", spec.field).unwrap();
    if let Some(r) = spec.rank_hint {
        writeln!(out, "rank {r}").unwrap();
    }
    for tree in spec.forest.trees() {
        writeln!(out, "tree {}", tree.name()).unwrap();
        for v in tree.vertex_names() {
            writeln!(out, "  vertex {v}").unwrap();
        }
        for e in tree.edges() {
            writeln!(out, "  edge {} {} {} {}", e.name, tree.vertex_name(e.from), tree.vertex_name(e.to), e.length).unwrap();
        }
        out.push_str("end\n");
    }
    for l in &spec.letters {
        writeln!(out, "letter {}", l.name).unwrap();
        for (x, y) in &l.anchors {
            writeln!(out, "  map {} -> {}", spec.forest.describe(x), spec.forest.describe(y)).unwrap();
        }
        out.push_str("end\n");
    }
    out
}

pub fn emit_system(s: &SystemOfIsometries) -> String {
    emit_spec(&s.to_spec())
}

pub fn emit_iet(e: &IntervalExchange) -> String {
    let lengths: Vec<String> = e.lengths().iter().map(|l| l.to_string()).collect();
    let perm: Vec<String> = e.permutation().iter().map(|p| p.to_string()).collect();
    format!("system v1\niet\n  lengths = [{}]; permutation = [{}]\nend\n", lengths.join(", "), perm.join(", "))
}
