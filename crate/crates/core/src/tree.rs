//! Finite metric trees with exact edge lengths.

use std::fmt;

use crate::error::ForestError;
use crate::scalar::Scalar;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
    pub length: Scalar,
}

/// A point of a tree in canonical form: a vertex, or an edge together with an
/// offset strictly between 0 and the edge length (measured from `from`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(VertexId),
    Edge(EdgeId, Scalar),
}

/// An edge germ at a point: leave along `edge` towards increasing offsets
/// (`up`) or decreasing offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    pub edge: EdgeId,
    pub up: bool,
}

/// A straight run along one edge, from offset `start` to offset `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: EdgeId,
    pub start: Scalar,
    pub end: Scalar,
}

#[derive(Clone, PartialEq, Eq)]
pub struct MetricTree {
    name: String,
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(EdgeId, VertexId)>>,
    parent: Vec<Option<(EdgeId, VertexId)>>,
    level: Vec<usize>,
    root_dist: Vec<Scalar>,
}

impl fmt::Debug for MetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricTree")
            .field("name", &self.name)
            .field("vertices", &self.vertex_names)
            .field("edges", &self.edges)
            .finish()
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl MetricTree {
    /// Builds a tree from named vertices and `(name, from, to, length)` edges.
    pub fn new(
        name: impl Into<String>,
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<Self, ForestError> {
        let name = name.into();
        let n = vertex_names.len();
        if n == 0 {
            return Err(ForestError::EmptyTree { tree: name });
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertex_names {
            if !seen.insert(v.as_str()) {
                return Err(ForestError::DuplicateName { tree: name, name: v.clone() });
            }
        }
        let mut edge_names = std::collections::BTreeSet::new();
        let mut pairs = std::collections::BTreeSet::new();
        let mut uf = UnionFind::new(n);
        let mut adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if !edge_names.insert(e.name.as_str()) {
                return Err(ForestError::DuplicateName { tree: name, name: e.name.clone() });
            }
            if e.from >= n || e.to >= n {
                return Err(ForestError::UnknownVertex { tree: name, vertex: e.name.clone() });
            }
            if !e.length.is_positive() {
                return Err(ForestError::NonPositiveLength { tree: name, edge: e.name.clone() });
            }
            let key = (e.from.min(e.to), e.from.max(e.to));
            if e.from == e.to || !pairs.insert(key) {
                return Err(ForestError::Multigraph { tree: name, edge: e.name.clone() });
            }
            if !uf.union(e.from, e.to) {
                return Err(ForestError::CycleDetected { tree: name });
            }
            adj[e.from].push((id, e.to));
            adj[e.to].push((id, e.from));
        }
        if (1..n).any(|v| uf.find(v) != uf.find(0)) {
            return Err(ForestError::Disconnected { tree: name });
        }
        let mut parent = vec![None; n];
        let mut level = vec![0; n];
        let mut root_dist = vec![Scalar::zero(); n];
        let mut stack = vec![0];
        let mut visited = vec![false; n];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &(e, w) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((e, v));
                    level[w] = level[v] + 1;
                    root_dist[w] = &root_dist[v] + &edges[e].length;
                    stack.push(w);
                }
            }
        }
        Ok(MetricTree { name, vertex_names, edges, adj, parent, level, root_dist })
    }

    /// A tree reduced to one vertex.
    pub fn point(name: impl Into<String>, vertex: impl Into<String>) -> Self {
        MetricTree::new(name, vec![vertex.into()], Vec::new()).expect("single vertex tree")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The same tree renamed to `name`, with vertices `v0, v1, ...` and edges `e0, e1, ...`.
    pub fn canonically_named(&self, name: impl Into<String>) -> MetricTree {
        let mut t = self.clone();
        t.name = name.into();
        for (i, v) in t.vertex_names.iter_mut().enumerate() {
            *v = format!("v{i}");
        }
        for (i, e) in t.edges.iter_mut().enumerate() {
            e.name = format!("e{i}");
        }
        t
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adj[v]
    }

    /// Canonical point at `offset` along `edge`, or `None` when out of range.
    pub fn point_on_edge(&self, edge: EdgeId, offset: Scalar) -> Option<Point> {
        let e = self.edges.get(edge)?;
        if offset.is_negative() || offset > e.length {
            return None;
        }
        Some(if offset.is_zero() {
            Point::Vertex(e.from)
        } else if offset == e.length {
            Point::Vertex(e.to)
        } else {
            Point::Edge(edge, offset)
        })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => *v < self.vertex_count(),
            Point::Edge(e, t) => self
                .edges
                .get(*e)
                .is_some_and(|edge| t.is_positive() && *t < edge.length),
        }
    }

    pub fn vertex_dist(&self, u: VertexId, v: VertexId) -> Scalar {
        let w = self.lca(u, v);
        &(&self.root_dist[u] + &self.root_dist[v]) - &(&self.root_dist[w] * &Scalar::int(2))
    }

    fn lca(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        while self.level[u] > self.level[v] {
            u = self.parent[u].expect("non-root").1;
        }
        while self.level[v] > self.level[u] {
            v = self.parent[v].expect("non-root").1;
        }
        while u != v {
            u = self.parent[u].expect("non-root").1;
            v = self.parent[v].expect("non-root").1;
        }
        u
    }

    /// Vertex ends of a point with the distance to each.
    fn ends(&self, p: &Point) -> Vec<(VertexId, Scalar)> {
        match p {
            Point::Vertex(v) => vec![(*v, Scalar::zero())],
            Point::Edge(e, t) => {
                let edge = &self.edges[*e];
                vec![(edge.from, t.clone()), (edge.to, &edge.length - t)]
            }
        }
    }

    pub fn dist(&self, p: &Point, q: &Point) -> Scalar {
        if let (Point::Edge(e1, t1), Point::Edge(e2, t2)) = (p, q) {
            if e1 == e2 {
                return (t1 - t2).abs();
            }
        }
        let mut best: Option<Scalar> = None;
        for (u, du) in self.ends(p) {
            for (v, dv) in self.ends(q) {
                let d = &(&du + &dv) + &self.vertex_dist(u, v);
                best = Some(match best {
                    Some(b) => b.min(d),
                    None => d,
                });
            }
        }
        best.expect("points have ends")
    }

    /// Oriented edges from `u` to `v`, as `(edge, up)`.
    fn vertex_path(&self, u: VertexId, v: VertexId) -> Vec<(EdgeId, bool)> {
        let w = self.lca(u, v);
        let mut head = Vec::new();
        let mut x = u;
        while x != w {
            let (e, p) = self.parent[x].expect("non-root");
            head.push((e, self.edges[e].from == x));
            x = p;
        }
        let mut tail = Vec::new();
        let mut y = v;
        while y != w {
            let (e, p) = self.parent[y].expect("non-root");
            tail.push((e, self.edges[e].from == p));
            y = p;
        }
        tail.reverse();
        head.extend(tail);
        head
    }

    /// The vertex through which the geodesic from an edge point leaves its edge
    /// when heading to `q` (q not on the same edge).
    fn exit_vertex(&self, e: EdgeId, t: &Scalar, q: &Point) -> (VertexId, bool) {
        let edge = &self.edges[e];
        let via_from = t + &self.dist(&Point::Vertex(edge.from), q);
        let via_to = &(&edge.length - t) + &self.dist(&Point::Vertex(edge.to), q);
        if via_from < via_to {
            (edge.from, false)
        } else {
            (edge.to, true)
        }
    }

    /// The geodesic from `p` to `q` as a sequence of edge pieces (empty when `p == q`).
    pub fn geodesic(&self, p: &Point, q: &Point) -> Vec<Piece> {
        if p == q {
            return Vec::new();
        }
        if let (Point::Edge(e1, t1), Point::Edge(e2, t2)) = (p, q) {
            if e1 == e2 {
                return vec![Piece { edge: *e1, start: t1.clone(), end: t2.clone() }];
            }
        }
        let mut pieces = Vec::new();
        let start = match p {
            Point::Vertex(v) => *v,
            Point::Edge(e, t) => {
                let (v, up) = self.exit_vertex(*e, t, q);
                let end = if up { self.edges[*e].length.clone() } else { Scalar::zero() };
                pieces.push(Piece { edge: *e, start: t.clone(), end });
                v
            }
        };
        let (finish, last) = match q {
            Point::Vertex(v) => (*v, None),
            Point::Edge(e, t) => {
                let (v, up) = self.exit_vertex(*e, t, p);
                let begin = if up { self.edges[*e].length.clone() } else { Scalar::zero() };
                (v, Some(Piece { edge: *e, start: begin, end: t.clone() }))
            }
        };
        for (e, up) in self.vertex_path(start, finish) {
            let len = self.edges[e].length.clone();
            pieces.push(if up {
                Piece { edge: e, start: Scalar::zero(), end: len }
            } else {
                Piece { edge: e, start: len, end: Scalar::zero() }
            });
        }
        pieces.extend(last);
        pieces
    }

    /// The point at distance `s` from `p` on the geodesic towards `q`.
    pub fn point_at(&self, p: &Point, q: &Point, s: &Scalar) -> Option<Point> {
        if s.is_negative() {
            return None;
        }
        if s.is_zero() {
            return Some(p.clone());
        }
        let mut left = s.clone();
        for piece in self.geodesic(p, q) {
            let len = (&piece.end - &piece.start).abs();
            if left <= len {
                let off = if piece.end > piece.start {
                    &piece.start + &left
                } else {
                    &piece.start - &left
                };
                return self.point_on_edge(piece.edge, off);
            }
            left = &left - &len;
        }
        None
    }

    /// The germ at `p` of the geodesic towards `q` (`None` when `p == q`).
    pub fn germ_toward(&self, p: &Point, q: &Point) -> Option<Germ> {
        self.geodesic(p, q).first().map(|piece| Germ { edge: piece.edge, up: piece.end > piece.start })
    }

    /// All germs at `p`: one per incident edge at a vertex, two at an edge point.
    pub fn germs_at(&self, p: &Point) -> Vec<Germ> {
        match p {
            Point::Vertex(v) => {
                let mut g: Vec<Germ> = self.adj[*v]
                    .iter()
                    .map(|&(e, _)| Germ { edge: e, up: self.edges[e].from == *v })
                    .collect();
                g.sort();
                g
            }
            Point::Edge(e, _) => vec![Germ { edge: *e, up: false }, Germ { edge: *e, up: true }],
        }
    }

    /// Whether `y` lies in the component of `T - {x}` selected by `germ`.
    pub fn in_direction(&self, x: &Point, germ: Germ, y: &Point) -> bool {
        x != y && self.germ_toward(x, y) == Some(germ)
    }

    /// Vertices of degree one (or the single vertex of a point tree).
    pub fn leaves(&self) -> Vec<VertexId> {
        (0..self.vertex_count()).filter(|&v| self.degree(v) <= 1).collect()
    }

    pub fn diameter(&self) -> Scalar {
        let leaves = self.leaves();
        let mut best = Scalar::zero();
        for (i, &u) in leaves.iter().enumerate() {
            for &v in &leaves[i + 1..] {
                best = best.max(self.vertex_dist(u, v));
            }
        }
        best
    }

    pub fn total_length(&self) -> Scalar {
        self.edges.iter().fold(Scalar::zero(), |acc, e| &acc + &e.length)
    }

    pub fn describe_point(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.vertex_names[*v].clone(),
            Point::Edge(e, t) => format!("{}@{}", self.edges[*e].name, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tripod() -> MetricTree {
        let names = ["c", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let edges = vec![
            Edge { name: "ex".into(), from: 0, to: 1, length: Scalar::int(1) },
            Edge { name: "ey".into(), from: 0, to: 2, length: Scalar::int(1) },
            Edge { name: "ez".into(), from: 0, to: 3, length: Scalar::int(2) },
        ];
        MetricTree::new("T", names, edges).unwrap()
    }

    #[test]
    fn rejects_cycles_and_bad_lengths() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let e = |n: &str, f, t, l| Edge { name: n.into(), from: f, to: t, length: Scalar::int(l) };
        let cyc = MetricTree::new("T", names.clone(), vec![e("1", 0, 1, 1), e("2", 1, 2, 1), e("3", 2, 0, 1)]);
        assert!(matches!(cyc, Err(ForestError::CycleDetected { .. })));
        let neg = MetricTree::new("T", names.clone(), vec![e("1", 0, 1, 0), e("2", 1, 2, 1)]);
        assert!(matches!(neg, Err(ForestError::NonPositiveLength { .. })));
        let disc = MetricTree::new("T", names.clone(), vec![e("1", 0, 1, 1)]);
        assert!(matches!(disc, Err(ForestError::Disconnected { .. })));
        let multi = MetricTree::new("T", names, vec![e("1", 0, 1, 1), e("2", 1, 0, 1)]);
        assert!(matches!(multi, Err(ForestError::Multigraph { .. })));
    }

    #[test]
    fn distances_and_geodesics() {
        let t = tripod();
        let px = t.point_on_edge(0, Scalar::frac(1, 2)).unwrap();
        let pz = t.point_on_edge(2, Scalar::int(1)).unwrap();
        assert_eq!(t.dist(&px, &pz), Scalar::frac(3, 2));
        assert_eq!(t.geodesic(&px, &pz).len(), 2);
        let mid = t.point_at(&px, &pz, &Scalar::frac(1, 2)).unwrap();
        assert_eq!(mid, Point::Vertex(0));
        assert_eq!(t.germ_toward(&Point::Vertex(0), &pz), Some(Germ { edge: 2, up: true }));
        assert_eq!(t.diameter(), Scalar::int(3));
    }

    #[test]
    fn four_point_condition_on_vertices() {
        let t = tripod();
        let n = t.vertex_count();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s1 = t.vertex_dist(a, b) + t.vertex_dist(c, d);
                        let s2 = t.vertex_dist(a, c) + t.vertex_dist(b, d);
                        let s3 = t.vertex_dist(a, d) + t.vertex_dist(b, c);
                        let mut v = [s1, s2, s3];
                        v.sort();
                        assert_eq!(v[1], v[2]);
                    }
                }
            }
        }
    }
}
