//! Closed convex subsets (subtrees) of a single metric tree.

use std::collections::{BTreeMap, BTreeSet};

use crate::scalar::Scalar;
use crate::tree::{EdgeId, Edge, Germ, MetricTree, Point, UnionFind, VertexId};

/// A nonempty closed subtree of a [`MetricTree`].
///
/// Stored as the set of vertices it contains plus, for every edge it meets in
/// more than one point, the closed offset interval `[lo, hi]`. A subtree reduced
/// to a single edge-interior point is stored as the interval `[t, t]` with no
/// vertices; this is the only case where `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    verts: BTreeSet<VertexId>,
    segs: BTreeMap<EdgeId, (Scalar, Scalar)>,
}

impl Region {
    pub fn point(p: &Point) -> Region {
        match p {
            Point::Vertex(v) => Region { verts: [*v].into(), segs: BTreeMap::new() },
            Point::Edge(e, t) => Region {
                verts: BTreeSet::new(),
                segs: [(*e, (t.clone(), t.clone()))].into(),
            },
        }
    }

    pub fn whole(tree: &MetricTree) -> Region {
        Region {
            verts: (0..tree.vertex_count()).collect(),
            segs: tree
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| (i, (Scalar::zero(), e.length.clone())))
                .collect(),
        }
    }

    /// Convex hull of a nonempty list of points.
    pub fn hull(tree: &MetricTree, points: &[Point]) -> Option<Region> {
        let (p0, rest) = points.split_first()?;
        let mut r = Region::point(p0);
        for q in rest {
            r.absorb_geodesic(tree, p0, q);
        }
        Some(r)
    }

    /// Convex hull of this region together with `q`.
    pub fn extended(&self, tree: &MetricTree, q: &Point) -> Region {
        let mut pts = self.key_points(tree);
        pts.push(q.clone());
        Region::hull(tree, &pts).expect("nonempty")
    }

    fn absorb_geodesic(&mut self, tree: &MetricTree, p: &Point, q: &Point) {
        let pieces = tree.geodesic(p, q);
        if pieces.is_empty() {
            return;
        }
        for piece in pieces {
            let (lo, hi) = if piece.start <= piece.end {
                (piece.start, piece.end)
            } else {
                (piece.end, piece.start)
            };
            let edge = tree.edge(piece.edge);
            if lo.is_zero() {
                self.verts.insert(edge.from);
            }
            if hi == edge.length {
                self.verts.insert(edge.to);
            }
            let entry = self.segs.entry(piece.edge).or_insert_with(|| (lo.clone(), hi.clone()));
            entry.0 = entry.0.clone().min(lo);
            entry.1 = entry.1.clone().max(hi);
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.verts
    }

    pub fn segments(&self) -> &BTreeMap<EdgeId, (Scalar, Scalar)> {
        &self.segs
    }

    /// The single point of a degenerate region.
    pub fn as_point(&self) -> Option<Point> {
        if self.segs.is_empty() && self.verts.len() == 1 {
            return self.verts.iter().next().map(|&v| Point::Vertex(v));
        }
        if self.verts.is_empty() && self.segs.len() == 1 {
            let (&e, (lo, hi)) = self.segs.iter().next().expect("one seg");
            if lo == hi {
                return Some(Point::Edge(e, lo.clone()));
            }
        }
        None
    }

    pub fn is_degenerate(&self) -> bool {
        self.as_point().is_some()
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.verts.contains(v),
            Point::Edge(e, t) => self.segs.get(e).is_some_and(|(lo, hi)| lo <= t && t <= hi),
        }
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.verts.is_subset(&other.verts)
            && self.segs.iter().all(|(e, (lo, hi))| {
                other.segs.get(e).is_some_and(|(olo, ohi)| olo <= lo && hi <= ohi)
            })
    }

    pub fn intersect(&self, other: &Region) -> Option<Region> {
        let verts: BTreeSet<VertexId> = self.verts.intersection(&other.verts).copied().collect();
        let mut segs = BTreeMap::new();
        let mut lone = None;
        for (e, (lo, hi)) in &self.segs {
            if let Some((olo, ohi)) = other.segs.get(e) {
                let l = lo.clone().max(olo.clone());
                let h = hi.clone().min(ohi.clone());
                if l < h {
                    segs.insert(*e, (l, h));
                } else if l == h {
                    lone = Some((*e, l));
                }
            }
        }
        if !verts.is_empty() || !segs.is_empty() {
            return Some(Region { verts, segs });
        }
        let (e, t) = lone?;
        // a touching point at an edge end is a vertex, which would be in `verts`
        Some(Region { verts: BTreeSet::new(), segs: [(e, (t.clone(), t))].into() })
    }

    fn vertex_germs(&self, tree: &MetricTree, v: VertexId) -> Vec<Germ> {
        tree.incident(v)
            .iter()
            .filter_map(|&(e, _)| {
                let (lo, hi) = self.segs.get(&e)?;
                if lo == hi {
                    return None;
                }
                let edge = tree.edge(e);
                if edge.from == v && lo.is_zero() {
                    Some(Germ { edge: e, up: true })
                } else if edge.to == v && *hi == edge.length {
                    Some(Germ { edge: e, up: false })
                } else {
                    None
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Germs at `x` pointing into the region.
    pub fn germs_at(&self, tree: &MetricTree, x: &Point) -> Vec<Germ> {
        match x {
            Point::Vertex(v) => self.vertex_germs(tree, *v),
            Point::Edge(e, t) => match self.segs.get(e) {
                Some((lo, hi)) => {
                    let mut g = Vec::new();
                    if lo < t {
                        g.push(Germ { edge: *e, up: false });
                    }
                    if hi > t {
                        g.push(Germ { edge: *e, up: true });
                    }
                    g
                }
                None => Vec::new(),
            },
        }
    }

    /// Whether `x` touches at most one direction of the region (caller ensures `x` is in it).
    pub fn is_extremal(&self, tree: &MetricTree, x: &Point) -> bool {
        self.germs_at(tree, x).len() <= 1
    }

    /// Extremal points, in canonical order.
    pub fn extremal_points(&self, tree: &MetricTree) -> Vec<Point> {
        if let Some(p) = self.as_point() {
            return vec![p];
        }
        let mut out = BTreeSet::new();
        for &v in &self.verts {
            if self.vertex_germs(tree, v).len() <= 1 {
                out.insert(Point::Vertex(v));
            }
        }
        for (&e, (lo, hi)) in &self.segs {
            let len = &tree.edge(e).length;
            if lo.is_positive() {
                out.insert(Point::Edge(e, lo.clone()));
            }
            if hi < len {
                out.insert(Point::Edge(e, hi.clone()));
            }
        }
        out.into_iter().collect()
    }

    /// Points with at least three region directions.
    pub fn branch_points(&self, tree: &MetricTree) -> Vec<Point> {
        self.verts
            .iter()
            .filter(|&&v| self.vertex_germs(tree, v).len() >= 3)
            .map(|&v| Point::Vertex(v))
            .collect()
    }

    /// Extremal points followed by branch points.
    pub fn key_points(&self, tree: &MetricTree) -> Vec<Point> {
        let mut pts = self.extremal_points(tree);
        pts.extend(self.branch_points(tree));
        pts
    }

    pub fn diameter(&self, tree: &MetricTree) -> Scalar {
        let ext = self.extremal_points(tree);
        let mut best = Scalar::zero();
        for (i, p) in ext.iter().enumerate() {
            for q in &ext[i + 1..] {
                best = best.max(tree.dist(p, q));
            }
        }
        best
    }

    /// Total edge length inside the region.
    pub fn measure(&self) -> Scalar {
        self.segs.values().fold(Scalar::zero(), |acc, (lo, hi)| &acc + &(hi - lo))
    }

    /// The nearest point of the region to `p`.
    pub fn project(&self, tree: &MetricTree, p: &Point) -> Point {
        if self.contains(p) {
            return p.clone();
        }
        let anchor = self.key_points(tree).into_iter().next().expect("nonempty");
        for piece in tree.geodesic(p, &anchor) {
            let up = piece.end > piece.start;
            if let Some((lo, hi)) = self.segs.get(&piece.edge) {
                let (a, b) = if up { (&piece.start, &piece.end) } else { (&piece.end, &piece.start) };
                if lo <= b && a <= hi {
                    let entry = if up { lo.clone().max(a.clone()) } else { hi.clone().min(b.clone()) };
                    return tree.point_on_edge(piece.edge, entry).expect("in range");
                }
            }
            let end = tree.point_on_edge(piece.edge, piece.end.clone()).expect("in range");
            if self.contains(&end) {
                return end;
            }
        }
        anchor
    }
}

/// Connected components of a union of regions, in canonical order.
pub fn components_of_union(tree: &MetricTree, regions: &[Region]) -> Vec<Region> {
    let mut verts = BTreeSet::new();
    let mut per_edge: BTreeMap<EdgeId, Vec<(Scalar, Scalar)>> = BTreeMap::new();
    for r in regions {
        verts.extend(r.verts.iter().copied());
        for (e, iv) in &r.segs {
            per_edge.entry(*e).or_default().push(iv.clone());
        }
    }
    let mut atoms: Vec<(EdgeId, Scalar, Scalar)> = Vec::new();
    for (e, mut ivs) in per_edge {
        ivs.sort();
        let mut cur: Option<(Scalar, Scalar)> = None;
        for (lo, hi) in ivs {
            cur = match cur {
                Some((clo, chi)) if lo <= chi => Some((clo, chi.max(hi))),
                Some(done) => {
                    atoms.push((e, done.0, done.1));
                    Some((lo, hi))
                }
                None => Some((lo, hi)),
            };
        }
        if let Some((lo, hi)) = cur {
            atoms.push((e, lo, hi));
        }
    }
    let vlist: Vec<VertexId> = verts.iter().copied().collect();
    let vindex: BTreeMap<VertexId, usize> = vlist.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vlist.len() + atoms.len();
    let mut uf = UnionFind::new(n);
    for (i, (e, lo, hi)) in atoms.iter().enumerate() {
        let Edge { from, to, length, .. } = tree.edge(*e);
        if lo.is_zero() {
            if let Some(&j) = vindex.get(from) {
                uf.union(vlist.len() + i, j);
            }
        }
        if hi == length {
            if let Some(&j) = vindex.get(to) {
                uf.union(vlist.len() + i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Region> = BTreeMap::new();
    for (j, &v) in vlist.iter().enumerate() {
        let root = uf.find(j);
        groups
            .entry(root)
            .or_insert_with(|| Region { verts: BTreeSet::new(), segs: BTreeMap::new() })
            .verts
            .insert(v);
    }
    for (i, (e, lo, hi)) in atoms.into_iter().enumerate() {
        let root = uf.find(vlist.len() + i);
        groups
            .entry(root)
            .or_insert_with(|| Region { verts: BTreeSet::new(), segs: BTreeMap::new() })
            .segs
            .insert(e, (lo, hi));
    }
    let mut out: Vec<Region> = groups.into_values().collect();
    out.sort();
    out
}

/// Isometric identification of a restricted tree with a region of its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_to_old: Vec<Point>,
    /// For each new edge: the old edge it lies on and the old offset of its `from` end.
    /// New edges keep the orientation of the old ones.
    pub edge_to_old: Vec<(EdgeId, Scalar)>,
}

impl Embedding {
    pub fn to_old(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => self.vertex_to_old[*v].clone(),
            Point::Edge(e, t) => {
                let (oe, lo) = &self.edge_to_old[*e];
                Point::Edge(*oe, lo + t)
            }
        }
    }

    pub fn to_new(&self, new_tree: &MetricTree, p: &Point) -> Option<Point> {
        if let Some(v) = self.vertex_to_old.iter().position(|q| q == p) {
            return Some(Point::Vertex(v));
        }
        if let Point::Edge(oe, t) = p {
            for (ne, (e, lo)) in self.edge_to_old.iter().enumerate() {
                if e == oe && lo < t {
                    let off = t - lo;
                    if off < new_tree.edge(ne).length {
                        return Some(Point::Edge(ne, off));
                    }
                }
            }
        }
        None
    }

    /// Composes `self: C -> B` with `outer: B -> A`.
    pub fn then(&self, outer: &Embedding) -> Embedding {
        Embedding {
            vertex_to_old: self.vertex_to_old.iter().map(|p| outer.to_old(p)).collect(),
            edge_to_old: self
                .edge_to_old
                .iter()
                .map(|(e, lo)| {
                    let (oe, olo) = &outer.edge_to_old[*e];
                    (*oe, olo + lo)
                })
                .collect(),
        }
    }

    pub fn identity(tree: &MetricTree) -> Embedding {
        Embedding {
            vertex_to_old: (0..tree.vertex_count()).map(Point::Vertex).collect(),
            edge_to_old: (0..tree.edges().len()).map(|e| (e, Scalar::zero())).collect(),
        }
    }
}

/// Builds the tree underlying `region` with an embedding back into `tree`.
///
/// New vertices are the region's vertices (in order) followed by the interior
/// endpoints of partial edge segments; names are inherited or synthesized.
pub fn restrict_tree(tree: &MetricTree, region: &Region, name: &str) -> (MetricTree, Embedding) {
    if let Some(p) = region.as_point() {
        let vname = match &p {
            Point::Vertex(v) => tree.vertex_name(*v).to_string(),
            Point::Edge(e, _) => format!("{}_p", tree.edge(*e).name),
        };
        let t = MetricTree::point(name, vname);
        return (t, Embedding { vertex_to_old: vec![p], edge_to_old: Vec::new() });
    }
    let mut vertex_to_old: Vec<Point> = region.verts.iter().map(|&v| Point::Vertex(v)).collect();
    let mut names: Vec<String> = region.verts.iter().map(|&v| tree.vertex_name(v).to_string()).collect();
    let mut edges = Vec::new();
    let mut edge_to_old = Vec::new();
    let node = |p: Point, label: String, vto: &mut Vec<Point>, names: &mut Vec<String>| -> VertexId {
        if let Some(i) = vto.iter().position(|q| *q == p) {
            return i;
        }
        vto.push(p);
        names.push(label);
        vto.len() - 1
    };
    for (&e, (lo, hi)) in &region.segs {
        let old = tree.edge(e);
        let a = tree.point_on_edge(e, lo.clone()).expect("in range");
        let b = tree.point_on_edge(e, hi.clone()).expect("in range");
        let from = node(a, format!("{}_lo", old.name), &mut vertex_to_old, &mut names);
        let to = node(b, format!("{}_hi", old.name), &mut vertex_to_old, &mut names);
        edges.push(Edge { name: old.name.clone(), from, to, length: hi - lo });
        edge_to_old.push((e, lo.clone()));
    }
    let t = MetricTree::new(name, names, edges).expect("a region of a tree is a tree");
    (t, Embedding { vertex_to_old, edge_to_old })
}

/// Maps a region of `from_tree` through a point map that is isometric on it.
pub fn map_region(
    from_tree: &MetricTree,
    region: &Region,
    to_tree: &MetricTree,
    f: impl Fn(&Point) -> Option<Point>,
) -> Option<Region> {
    let pts: Option<Vec<Point>> = region.key_points(from_tree).iter().map(f).collect();
    Region::hull(to_tree, &pts?)
}
