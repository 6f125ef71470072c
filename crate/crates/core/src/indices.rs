//! Orbit graphs, direction graphs and index estimates at points of the forest.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::IndexError;
use crate::forest::{directions_at, Direction, Loc};
use crate::system::{SystemOfIsometries, Sym, Word};
use crate::tree::{Point, UnionFind};

/// What to do when the explored orbit closes up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StabilizerPolicy {
    /// Any cycle is a [`IndexError::FreenessViolation`].
    #[default]
    Strict,
    /// Cycles are kept; their number is used as the rank of the stabilizer.
    AllowStabilizer,
}

/// The orbit of `center` under words of length at most `radius`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraph {
    pub center: Loc,
    pub radius: usize,
    /// In breadth-first order; `nodes[0]` is the center.
    pub nodes: Vec<Loc>,
    pub depth: Vec<usize>,
    /// A word from the center to each node.
    pub paths: Vec<Word>,
    /// `(u, a, v)` with `nodes[u].a = nodes[v]` and `a` a positive letter.
    pub links: BTreeSet<(usize, usize, usize)>,
    /// Reduced words of the closed loops found, one per non-tree link.
    pub cycles: Vec<Word>,
}

impl OrbitGraph {
    pub fn index_of(&self, x: &Loc) -> Option<usize> {
        self.nodes.iter().position(|y| y == x)
    }

    /// First Betti number of the explored ball.
    pub fn cycle_rank(&self) -> usize {
        self.links.len() + 1 - self.nodes.len()
    }

    pub fn is_tree(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Nodes at depth `r - 1` with a neighbour at depth `r`.
    pub fn growing_nodes(&self, r: usize) -> usize {
        if r == 0 {
            return 0;
        }
        let mut grown = BTreeSet::new();
        for &(u, _, v) in &self.links {
            if self.depth[u] + 1 == r && self.depth[v] == r {
                grown.insert(u);
            }
            if self.depth[v] + 1 == r && self.depth[u] == r {
                grown.insert(v);
            }
        }
        grown.len()
    }
}

/// Directions at the nodes of an orbit graph, linked by `d -> d.a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionGraph {
    pub nodes: Vec<Direction>,
    /// Index of the orbit node each direction is based at.
    pub owner: Vec<usize>,
    pub links: BTreeSet<(usize, usize, usize)>,
}

impl DirectionGraph {
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(d, _, e) in &self.links {
            uf.union(d, e);
        }
        (0..self.nodes.len()).filter(|&i| uf.find(i) == i).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(d, _, e) in &self.links {
            deg[d] += 1;
            deg[e] += 1;
        }
        deg
    }
}

fn cycle_word(paths: &[Word], u: usize, sym: Sym, v: usize) -> Word {
    let mut w = paths[u].0.clone();
    w.push(sym);
    w.extend(paths[v].inverse().0);
    Word(w).reduced()
}

/// Breadth-first exploration of the orbit of `x` to word length `r`.
pub fn orbit_graphs(
    s: &SystemOfIsometries,
    x: &Loc,
    r: usize,
    policy: StabilizerPolicy,
) -> Result<(OrbitGraph, DirectionGraph), IndexError> {
    if r < 1 {
        return Err(IndexError::RadiusTooSmall(1));
    }
    if !s.forest.contains(x) {
        return Err(IndexError::PointNotInForest);
    }
    let mut g = OrbitGraph {
        center: x.clone(),
        radius: r,
        nodes: vec![x.clone()],
        depth: vec![0],
        paths: vec![Word::empty()],
        links: BTreeSet::new(),
        cycles: Vec::new(),
    };
    let mut index: BTreeMap<Loc, usize> = BTreeMap::from([(x.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if g.depth[u] >= r {
            continue;
        }
        for sym in s.syms() {
            let Some(y) = s.apply(sym, &g.nodes[u]) else { continue };
            let (v, fresh) = match index.get(&y) {
                Some(&v) => (v, false),
                None => {
                    let v = g.nodes.len();
                    g.nodes.push(y.clone());
                    g.depth.push(g.depth[u] + 1);
                    let mut p = g.paths[u].clone();
                    p.0.push(sym);
                    g.paths.push(p);
                    index.insert(y, v);
                    queue.push_back(v);
                    (v, true)
                }
            };
            let link = if sym.inverse { (v, sym.index, u) } else { (u, sym.index, v) };
            if g.links.insert(link) && !fresh {
                let w = cycle_word(&g.paths, u, sym, v);
                if policy == StabilizerPolicy::Strict {
                    return Err(IndexError::FreenessViolation { word: w.display(s) });
                }
                g.cycles.push(w);
            }
        }
    }
    let mut d = DirectionGraph { nodes: Vec::new(), owner: Vec::new(), links: BTreeSet::new() };
    let mut dindex: BTreeMap<Direction, usize> = BTreeMap::new();
    for (i, y) in g.nodes.iter().enumerate() {
        for dir in directions_at(&s.forest, y).expect("orbit point in forest") {
            dindex.insert(dir.clone(), d.nodes.len());
            d.nodes.push(dir);
            d.owner.push(i);
        }
    }
    for &(u, a, v) in &g.links {
        let m = s.map(Sym::pos(a));
        for dir in directions_at(&s.forest, &g.nodes[u]).expect("orbit point in forest") {
            if let Some(img) = m.map_direction(&s.forest, &dir) {
                debug_assert_eq!(img.base, g.nodes[v]);
                d.links.insert((dindex[&dir], a, dindex[&img]));
            }
        }
    }
    Ok((g, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricIndex {
    pub value: i64,
    pub components: usize,
    pub stabilizer_rank: usize,
    pub radius: usize,
    /// Same component count and rank at radius `r - 1`.
    pub stable: bool,
}

fn geom_at(s: &SystemOfIsometries, x: &Loc, r: usize, policy: StabilizerPolicy) -> Result<(usize, usize), IndexError> {
    if r == 0 {
        let n = directions_at(&s.forest, x).map_err(|_| IndexError::PointNotInForest)?.len();
        return Ok((n, 0));
    }
    let (g, d) = orbit_graphs(s, x, r, policy)?;
    Ok((d.components(), g.cycle_rank()))
}

/// `#components(Γ_x^d) + 2 rank(Stab) - 2` at radius `r`.
pub fn geometric_index(
    s: &SystemOfIsometries,
    x: &Loc,
    r: usize,
    policy: StabilizerPolicy,
) -> Result<GeometricIndex, IndexError> {
    let (components, rank) = geom_at(s, x, r, policy)?;
    let prev = geom_at(s, x, r - 1, policy)?;
    Ok(GeometricIndex {
        value: components as i64 + 2 * rank as i64 - 2,
        components,
        stabilizer_rank: rank,
        radius: r,
        stable: prev == (components, rank),
    })
}

/// Lower-bound estimate of the Q-index from the growth of the orbit ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEstimate {
    pub value: i64,
    /// Growing nodes at each radius `2..=r`.
    pub branches: Vec<usize>,
    pub stabilizer_rank: usize,
    pub radius: usize,
    /// The hypotheses of [`lemma_hypothesis`] hold on the explored ball.
    pub hypothesis: bool,
}

/// Every explored orbit point is non-extremal in all bases containing it.
pub fn interior_hypothesis(s: &SystemOfIsometries, g: &OrbitGraph) -> bool {
    g.nodes.iter().all(|y| {
        s.syms().into_iter().all(|a| {
            let d = s.dom(a);
            !d.contains(y) || !d.region.is_extremal(s.forest.tree(d.tree), &y.point)
        })
    })
}

/// The hypotheses of the comparison `q <= geom`, checked on the explored ball:
/// the center lies in at least three distinct bases, every orbit point is
/// interior to its bases, and exactly two symbols are defined in every
/// direction at an orbit point.
pub fn lemma_hypothesis(s: &SystemOfIsometries, g: &OrbitGraph) -> bool {
    let bases: BTreeSet<_> = s.syms().into_iter().map(|a| s.dom(a)).filter(|d| d.contains(&g.center)).collect();
    bases.len() >= 3
        && interior_hypothesis(s, g)
        && g.nodes.iter().all(|y| {
            directions_at(&s.forest, y)
                .expect("orbit point in forest")
                .iter()
                .all(|d| s.syms().into_iter().filter(|&a| s.map(a).defined_in(&s.forest, d)).count() == 2)
        })
}

pub fn q_index_estimate(
    s: &SystemOfIsometries,
    x: &Loc,
    r: usize,
    policy: StabilizerPolicy,
) -> Result<QEstimate, IndexError> {
    if r < 2 {
        return Err(IndexError::RadiusTooSmall(2));
    }
    let (g, _) = orbit_graphs(s, x, r, policy)?;
    let branches: Vec<usize> = (2..=r).map(|k| g.growing_nodes(k)).collect();
    let rank = g.cycle_rank();
    Ok(QEstimate {
        value: g.growing_nodes(r) as i64 + 2 * rank as i64 - 2,
        branches,
        stabilizer_rank: rank,
        radius: r,
        hypothesis: lemma_hypothesis(s, &g),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexEntry {
    pub point: Loc,
    pub geometric: GeometricIndex,
    pub q: QEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub rank: usize,
    pub radius: usize,
    pub entries: Vec<IndexEntry>,
    /// Points skipped because an earlier point's ball reached them.
    pub merged: Vec<Loc>,
    /// Sum of the positive geometric indices.
    pub geometric_sum: i64,
    /// Sum of the positive Q-index estimates.
    pub q_sum: i64,
    pub bound: i64,
}

impl IndexReport {
    pub fn bound_violation(&self) -> bool {
        self.geometric_sum > self.bound || self.q_sum > self.bound
    }

    /// Entries where the lemma hypothesis holds but `q > geom`.
    pub fn q_exceeds_geometric(&self) -> Vec<&IndexEntry> {
        self.entries.iter().filter(|e| e.q.hypothesis && e.q.value > e.geometric.value).collect()
    }
}

/// Branch points of the forest and extremal points of the bases.
pub fn singular_candidates(s: &SystemOfIsometries) -> Vec<Loc> {
    let mut out: BTreeSet<Loc> = BTreeSet::new();
    for (t, tree) in s.forest.trees().iter().enumerate() {
        for v in 0..tree.vertex_count() {
            if tree.degree(v) >= 3 {
                out.insert(Loc::new(t, Point::Vertex(v)));
            }
        }
    }
    for a in s.syms() {
        let d = s.dom(a);
        for p in d.region.extremal_points(s.forest.tree(d.tree)) {
            out.insert(Loc::new(d.tree, p));
        }
    }
    out.into_iter().collect()
}

/// Index sums over `points`, one entry per explored orbit.
pub fn index_bound_report(
    s: &SystemOfIsometries,
    rank: usize,
    points: &[Loc],
    r: usize,
    policy: StabilizerPolicy,
) -> Result<IndexReport, IndexError> {
    let mut entries: Vec<IndexEntry> = Vec::new();
    let mut seen: BTreeSet<Loc> = BTreeSet::new();
    let mut merged = Vec::new();
    for x in points {
        if seen.contains(x) {
            merged.push(x.clone());
            continue;
        }
        let (g, _) = orbit_graphs(s, x, r, policy)?;
        seen.extend(g.nodes.iter().cloned());
        let geometric = geometric_index(s, x, r, policy)?;
        let q = q_index_estimate(s, x, r.max(2), policy)?;
        entries.push(IndexEntry { point: x.clone(), geometric, q });
    }
    let geometric_sum = entries.iter().map(|e| e.geometric.value.max(0)).sum();
    let q_sum = entries.iter().map(|e| e.q.value.max(0)).sum();
    Ok(IndexReport { rank, radius: r, entries, merged, geometric_sum, q_sum, bound: 2 * rank as i64 - 2 })
}
