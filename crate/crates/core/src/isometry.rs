//! Partial isometries between closed subtrees of a forest.

use crate::forest::{Direction, Forest, Loc, Subtree};
use crate::region::Region;
use crate::tree::{Germ, MetricTree, Point};

/// An isometry from `domain` onto `image`, determined by the images of the
/// key points (extremal and branch points) of the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialIsometry {
    pub domain: Subtree,
    pub image: Subtree,
    /// Canonical anchors: every key point of the domain with its image,
    /// sorted by domain point.
    pub anchors: Vec<(Point, Point)>,
}

/// Why a list of anchor pairs fails to define an isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnchorFault {
    Empty,
    PointOutside(Loc),
    DistanceMismatch { a: Point, b: Point },
    NotDetermined(Point),
}

fn image_of(
    dtree: &MetricTree,
    itree: &MetricTree,
    anchors: &[(Point, Point)],
    y: &Point,
) -> Option<Point> {
    let (p0, q0) = anchors.first()?;
    if y == p0 {
        return Some(q0.clone());
    }
    let s = dtree.dist(p0, y);
    for (p, q) in anchors {
        if p == y {
            return Some(q.clone());
        }
        let d = dtree.dist(p0, p);
        if &s + &dtree.dist(y, p) == d {
            return itree.point_at(q0, q, &s);
        }
    }
    None
}

impl PartialIsometry {
    /// Builds the isometry determined by `pairs`; the domain is the hull of
    /// the first coordinates. Anchors are recanonicalized.
    pub fn from_pairs(
        forest: &Forest,
        dtree: usize,
        itree: usize,
        pairs: &[(Point, Point)],
    ) -> Result<PartialIsometry, AnchorFault> {
        if pairs.is_empty() {
            return Err(AnchorFault::Empty);
        }
        let (dt, it) = match (forest.trees().get(dtree), forest.trees().get(itree)) {
            (Some(d), Some(i)) => (d, i),
            (None, _) => return Err(AnchorFault::PointOutside(Loc::new(dtree, pairs[0].0.clone()))),
            (_, None) => return Err(AnchorFault::PointOutside(Loc::new(itree, pairs[0].1.clone()))),
        };
        for (p, q) in pairs {
            if !dt.contains(p) {
                return Err(AnchorFault::PointOutside(Loc::new(dtree, p.clone())));
            }
            if !it.contains(q) {
                return Err(AnchorFault::PointOutside(Loc::new(itree, q.clone())));
            }
        }
        for (i, (p1, q1)) in pairs.iter().enumerate() {
            for (p2, q2) in &pairs[i + 1..] {
                if dt.dist(p1, p2) != it.dist(q1, q2) {
                    return Err(AnchorFault::DistanceMismatch { a: p1.clone(), b: p2.clone() });
                }
            }
        }
        let dpts: Vec<Point> = pairs.iter().map(|(p, _)| p.clone()).collect();
        let region = Region::hull(dt, &dpts).expect("nonempty");
        let mut anchors = Vec::new();
        for y in region.key_points(dt) {
            let img = image_of(dt, it, pairs, &y).ok_or(AnchorFault::NotDetermined(y.clone()))?;
            anchors.push((y, img));
        }
        for (i, (p1, q1)) in anchors.iter().enumerate() {
            for (p2, q2) in &anchors[i + 1..] {
                if dt.dist(p1, p2) != it.dist(q1, q2) {
                    return Err(AnchorFault::DistanceMismatch { a: p1.clone(), b: p2.clone() });
                }
            }
        }
        anchors.sort();
        let ipts: Vec<Point> = anchors.iter().map(|(_, q)| q.clone()).collect();
        let image = Region::hull(it, &ipts).expect("nonempty");
        Ok(PartialIsometry {
            domain: Subtree { tree: dtree, region },
            image: Subtree { tree: itree, region: image },
            anchors,
        })
    }

    pub fn inverse(&self) -> PartialIsometry {
        let mut anchors: Vec<(Point, Point)> =
            self.anchors.iter().map(|(p, q)| (q.clone(), p.clone())).collect();
        anchors.sort();
        PartialIsometry { domain: self.image.clone(), image: self.domain.clone(), anchors }
    }

    pub fn is_degenerate(&self) -> bool {
        self.domain.is_degenerate()
    }

    /// Image of `y`, `None` outside the domain.
    pub fn apply(&self, forest: &Forest, y: &Loc) -> Option<Loc> {
        if !self.domain.contains(y) {
            return None;
        }
        let dt = forest.tree(self.domain.tree);
        let it = forest.tree(self.image.tree);
        image_of(dt, it, &self.anchors, &y.point).map(|p| Loc::new(self.image.tree, p))
    }

    /// Restriction to `sub ∩ domain`, `None` when that is empty.
    pub fn restrict(&self, forest: &Forest, sub: &Subtree) -> Option<PartialIsometry> {
        let j = self.domain.intersect(sub)?;
        let dt = forest.tree(self.domain.tree);
        let pairs: Vec<(Point, Point)> = j
            .region
            .key_points(dt)
            .into_iter()
            .map(|y| {
                let img = self.apply(forest, &Loc::new(j.tree, y.clone())).expect("in domain");
                (y, img.point)
            })
            .collect();
        Some(
            PartialIsometry::from_pairs(forest, self.domain.tree, self.image.tree, &pairs)
                .expect("restriction of an isometry"),
        )
    }

    /// Restriction to the preimage of `sub ∩ image`.
    pub fn corestrict(&self, forest: &Forest, sub: &Subtree) -> Option<PartialIsometry> {
        self.inverse().restrict(forest, sub).map(|m| m.inverse())
    }

    /// The composite `x -> next(self(x))` on its maximal domain.
    pub fn then(&self, forest: &Forest, next: &PartialIsometry) -> Option<PartialIsometry> {
        let j = self.image.intersect(&next.domain)?;
        let it = forest.tree(j.tree);
        let inv = self.inverse();
        let pairs: Vec<(Point, Point)> = j
            .region
            .key_points(it)
            .into_iter()
            .map(|y| {
                let loc = Loc::new(j.tree, y);
                let back = inv.apply(forest, &loc).expect("in image");
                let fwd = next.apply(forest, &loc).expect("in next domain");
                (back.point, fwd.point)
            })
            .collect();
        Some(
            PartialIsometry::from_pairs(forest, self.domain.tree, next.image.tree, &pairs)
                .expect("composition of isometries"),
        )
    }

    /// Whether the domain contains a point of the direction `d` next to its base
    /// (requires the base to lie in the domain).
    pub fn defined_in(&self, forest: &Forest, d: &Direction) -> bool {
        self.domain.tree == d.base.tree
            && self.domain.region.contains(&d.base.point)
            && self.domain.region.germs_at(forest.tree(d.base.tree), &d.base.point).contains(&d.germ)
    }

    /// The image direction `d·self` for a direction in which the map is defined.
    pub fn map_direction(&self, forest: &Forest, d: &Direction) -> Option<Direction> {
        if !self.defined_in(forest, d) {
            return None;
        }
        let dt = forest.tree(d.base.tree);
        let (lo, hi) = self.domain.region.segments().get(&d.germ.edge)?.clone();
        let far = if d.germ.up { hi } else { lo };
        let q = dt.point_on_edge(d.germ.edge, far)?;
        let base = self.apply(forest, &d.base)?;
        let qi = self.apply(forest, &Loc::new(d.base.tree, q))?;
        let it = forest.tree(base.tree);
        let germ: Germ = it.germ_toward(&base.point, &qi.point)?;
        Some(Direction { base, germ })
    }

    /// Re-checks that anchors preserve all pairwise distances.
    pub fn is_isometric(&self, forest: &Forest) -> bool {
        let dt = forest.tree(self.domain.tree);
        let it = forest.tree(self.image.tree);
        self.anchors.iter().enumerate().all(|(i, (p1, q1))| {
            self.anchors[i + 1..].iter().all(|(p2, q2)| dt.dist(p1, p2) == it.dist(q1, q2))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{build_forest, TreeSpec};
    use crate::scalar::Scalar;

    fn segment(len: i64) -> Forest {
        build_forest(&[TreeSpec {
            name: "I".into(),
            vertices: vec!["l".into(), "r".into()],
            edges: vec![("e".into(), "l".into(), "r".into(), Scalar::int(len))],
        }])
        .unwrap()
    }

    fn at(f: &Forest, x: i64) -> Point {
        f.tree(0).point_on_edge(0, Scalar::int(x)).unwrap()
    }

    #[test]
    fn translation_composes() {
        let f = segment(3);
        let a = PartialIsometry::from_pairs(&f, 0, 0, &[(at(&f, 0), at(&f, 1)), (at(&f, 2), at(&f, 3))]).unwrap();
        let aa = a.then(&f, &a).unwrap();
        let dom = Region::hull(f.tree(0), &[at(&f, 0), at(&f, 1)]).unwrap();
        let img = Region::hull(f.tree(0), &[at(&f, 2), at(&f, 3)]).unwrap();
        assert_eq!(aa.domain.region, dom);
        assert_eq!(aa.image.region, img);
        let inv = a.inverse();
        assert_eq!(inv.apply(&f, &Loc::new(0, at(&f, 3))), Some(Loc::new(0, at(&f, 2))));
    }

    #[test]
    fn rejects_contraction() {
        let f = segment(3);
        let bad = PartialIsometry::from_pairs(&f, 0, 0, &[(at(&f, 0), at(&f, 1)), (at(&f, 2), at(&f, 2))]);
        assert!(matches!(bad, Err(AnchorFault::DistanceMismatch { .. })));
    }

    #[test]
    fn reflection_maps_directions() {
        let f = segment(3);
        let r = PartialIsometry::from_pairs(&f, 0, 0, &[(at(&f, 0), at(&f, 1)), (at(&f, 1), at(&f, 0))]).unwrap();
        let mid = f.tree(0).point_on_edge(0, Scalar::frac(1, 2)).unwrap();
        assert_eq!(r.apply(&f, &Loc::new(0, mid.clone())), Some(Loc::new(0, mid.clone())));
        let d = Direction { base: Loc::new(0, mid), germ: Germ { edge: 0, up: true } };
        assert_eq!(r.map_direction(&f, &d).unwrap().germ, Germ { edge: 0, up: false });
    }
}
