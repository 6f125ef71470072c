//! Finite forests: disjoint unions of metric trees, with forest-level points,
//! subtrees and directions.

use std::fmt;

use crate::error::ForestError;
use crate::region::Region;
use crate::scalar::Scalar;
use crate::tree::{Edge, Germ, MetricTree, Point};

pub type TreeId = usize;

/// A point of a forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc {
    pub tree: TreeId,
    pub point: Point,
}

impl Loc {
    pub fn new(tree: TreeId, point: Point) -> Self {
        Loc { tree, point }
    }
}

/// A closed subtree of one component of a forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subtree {
    pub tree: TreeId,
    pub region: Region,
}

impl Subtree {
    pub fn contains(&self, x: &Loc) -> bool {
        x.tree == self.tree && self.region.contains(&x.point)
    }

    pub fn is_degenerate(&self) -> bool {
        self.region.is_degenerate()
    }

    pub fn is_subset(&self, other: &Subtree) -> bool {
        self.tree == other.tree && self.region.is_subset(&other.region)
    }

    pub fn intersect(&self, other: &Subtree) -> Option<Subtree> {
        if self.tree != other.tree {
            return None;
        }
        self.region.intersect(&other.region).map(|region| Subtree { tree: self.tree, region })
    }
}

/// A direction at a point: one component of the tree minus that point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub base: Loc,
    pub germ: Germ,
}

/// Description of one tree for [`build_forest`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSpec {
    pub name: String,
    pub vertices: Vec<String>,
    /// `(edge name, from vertex, to vertex, length)`
    pub edges: Vec<(String, String, String, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Forest {
    trees: Vec<MetricTree>,
}

impl Forest {
    pub fn new(trees: Vec<MetricTree>) -> Self {
        Forest { trees }
    }

    pub fn trees(&self) -> &[MetricTree] {
        &self.trees
    }

    pub fn tree(&self, id: TreeId) -> &MetricTree {
        &self.trees[id]
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn tree_by_name(&self, name: &str) -> Option<TreeId> {
        self.trees.iter().position(|t| t.name() == name)
    }

    pub fn contains(&self, x: &Loc) -> bool {
        self.trees.get(x.tree).is_some_and(|t| t.contains(&x.point))
    }

    /// Distance between two points, `None` across components.
    pub fn dist(&self, x: &Loc, y: &Loc) -> Option<Scalar> {
        (x.tree == y.tree).then(|| self.trees[x.tree].dist(&x.point, &y.point))
    }

    pub fn whole(&self, tree: TreeId) -> Subtree {
        Subtree { tree, region: Region::whole(&self.trees[tree]) }
    }

    pub fn max_diameter(&self) -> Scalar {
        self.trees.iter().fold(Scalar::zero(), |acc, t| acc.max(t.diameter()))
    }

    pub fn describe(&self, x: &Loc) -> String {
        format!("{}:{}", self.trees[x.tree].name(), self.trees[x.tree].describe_point(&x.point))
    }

    pub fn describe_subtree(&self, s: &Subtree) -> String {
        let t = &self.trees[s.tree];
        let pts: Vec<String> = s.region.extremal_points(t).iter().map(|p| t.describe_point(p)).collect();
        format!("{}[{}]", t.name(), pts.join(" "))
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.point {
            Point::Vertex(v) => write!(f, "T{}:v{}", self.tree, v),
            Point::Edge(e, t) => write!(f, "T{}:e{}@{}", self.tree, e, t),
        }
    }
}

/// Builds a forest, one tree per spec. Vertex names are resolved per tree.
pub fn build_forest(specs: &[TreeSpec]) -> Result<Forest, ForestError> {
    let mut names = std::collections::BTreeSet::new();
    let mut trees = Vec::with_capacity(specs.len());
    for spec in specs {
        if !names.insert(spec.name.as_str()) {
            return Err(ForestError::DuplicateName { tree: spec.name.clone(), name: spec.name.clone() });
        }
        let lookup = |v: &str| {
            spec.vertices.iter().position(|w| w == v).ok_or_else(|| ForestError::UnknownVertex {
                tree: spec.name.clone(),
                vertex: v.to_string(),
            })
        };
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (name, from, to, length) in &spec.edges {
            edges.push(Edge { name: name.clone(), from: lookup(from)?, to: lookup(to)?, length: length.clone() });
        }
        trees.push(MetricTree::new(spec.name.clone(), spec.vertices.clone(), edges)?);
    }
    Ok(Forest { trees })
}

/// Convex hull of points of one tree of the forest.
pub fn convex_hull(forest: &Forest, tree: TreeId, points: &[Point]) -> Result<Subtree, ForestError> {
    let t = forest.trees.get(tree).ok_or(ForestError::PointNotInTree)?;
    if points.iter().any(|p| !t.contains(p)) {
        return Err(ForestError::PointNotInTree);
    }
    let region = Region::hull(t, points).ok_or(ForestError::NoGenerators)?;
    Ok(Subtree { tree, region })
}

pub fn intersect_subtrees(a: &Subtree, b: &Subtree) -> Result<Option<Subtree>, ForestError> {
    if a.tree != b.tree {
        return Err(ForestError::HostMismatch);
    }
    Ok(a.intersect(b))
}

pub fn directions_at(forest: &Forest, x: &Loc) -> Result<Vec<Direction>, ForestError> {
    if !forest.contains(x) {
        return Err(ForestError::PointNotInTree);
    }
    Ok(forest.trees[x.tree]
        .germs_at(&x.point)
        .into_iter()
        .map(|germ| Direction { base: x.clone(), germ })
        .collect())
}

pub fn is_extremal(forest: &Forest, x: &Loc, s: &Subtree) -> Result<bool, ForestError> {
    if !s.contains(x) {
        return Err(ForestError::PointNotInSubtree);
    }
    Ok(s.region.is_extremal(&forest.trees[s.tree], &x.point))
}

/// Whether the subtree meets the direction `d` (contains a point of it).
pub fn meets_direction(forest: &Forest, s: &Subtree, d: &Direction) -> bool {
    if s.tree != d.base.tree {
        return false;
    }
    let t = &forest.trees[s.tree];
    if s.region.contains(&d.base.point) {
        return s.region.germs_at(t, &d.base.point).contains(&d.germ);
    }
    let p = s.region.project(t, &d.base.point);
    t.in_direction(&d.base.point, d.germ, &p)
}
