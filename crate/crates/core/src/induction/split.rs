use std::collections::BTreeSet;

use crate::error::InductionError;
use crate::forest::{meets_direction, Direction, Loc, Subtree, TreeId};
use crate::graph::GraphMap;
use crate::isometry::PartialIsometry;
use crate::region::{restrict_tree, Embedding, Region};
use crate::system::{Letter, SystemOfIsometries, Sym, Word};
use crate::scalar::Scalar;
use crate::tree::{Germ, Point};

use super::{canonical_forest, Zip};

/// A point satisfying (S1)-(S4) together with its splitting direction and letters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SplittingPoint {
    pub x: Loc,
    pub a0: Sym,
    pub direction: Direction,
    pub a1: Sym,
}

impl SplittingPoint {
    pub fn describe(&self, s: &SystemOfIsometries) -> String {
        format!(
            "x={} dir={}{} a0={} a1={}",
            s.forest.describe(&self.x),
            s.forest.tree(self.x.tree).edge(self.direction.germ.edge).name,
            if self.direction.germ.up { "+" } else { "-" },
            s.sym_name(self.a0),
            s.sym_name(self.a1)
        )
    }
}

/// Which splitting points one step splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitPolicy {
    /// Every splitting point, sequentially in canonical order.
    #[default]
    All,
    /// The splitting point farthest from the first vertex among those whose
    /// direction points away from it; the
    /// cut-off component is then folded away when it is a relay (one full
    /// domain base and one full image base). On interval exchanges this is
    /// right Rauzy-Veech induction.
    Rightmost,
    /// Mirror image of `Rightmost`: the closest point with a direction toward the first vertex.
    Leftmost,
}

fn check_point(s: &SystemOfIsometries, a0: Sym, x: &Point) -> Option<SplittingPoint> {
    let base = s.dom(a0);
    let tree = s.forest.tree(base.tree);
    let xl = Loc::new(base.tree, x.clone());
    // (S1)
    if tree.germs_at(x).len() <= 1 {
        return None;
    }
    // (S2): x extremal in a nondegenerate base
    let germs = base.region.germs_at(tree, x);
    if germs.len() != 1 {
        return None;
    }
    let direction = Direction { base: xl.clone(), germ: germs[0] };
    // (S3)
    let others: Vec<Sym> = s
        .syms()
        .into_iter()
        .filter(|&b| b != a0 && s.map(b).defined_in(&s.forest, &direction))
        .collect();
    let [a1] = others[..] else { return None };
    // (S4)
    if s.dom(a1).region.is_extremal(tree, x) {
        return None;
    }
    Some(SplittingPoint { x: xl, a0, direction, a1 })
}

/// All splitting points, ordered by (component, point, a0).
pub fn find_splitting_points(s: &SystemOfIsometries) -> Vec<SplittingPoint> {
    let mut out = Vec::new();
    for a0 in s.syms() {
        let base = s.dom(a0);
        if base.is_degenerate() {
            continue;
        }
        let tree = s.forest.tree(base.tree);
        for x in base.region.extremal_points(tree) {
            if let Some(p) = check_point(s, a0, &x) {
                out.push(p);
            }
        }
    }
    out.sort_by(|p, q| (&p.x, p.a0).cmp(&(&q.x, q.a0)));
    out
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub system: SystemOfIsometries,
    pub map: GraphMap,
    pub zip: Zip,
    /// Points split, in the coordinates of the system they were split in.
    pub split: Vec<SplittingPoint>,
    /// Letters folded away after a split (composite name, first, second).
    pub folds: Vec<(String, String, String)>,
    /// Original splitting points that stopped being splitting points before their turn.
    pub interference: Vec<SplittingPoint>,
}

enum Side {
    Kept(TreeId),
    Outer,
    Inner,
}

/// Splits `s` at a splitting point.
pub fn split_at(s: &SystemOfIsometries, p: &SplittingPoint) -> Result<SplitOutcome, InductionError> {
    if !find_splitting_points(s).contains(p) {
        return Err(InductionError::NotASplittingPoint(p.describe(s)));
    }
    let kx = p.x.tree;
    let tree = s.forest.tree(kx);
    let x = &p.x.point;
    let (inside, outside): (Vec<Point>, Vec<Point>) = tree
        .leaves()
        .into_iter()
        .map(Point::Vertex)
        .filter(|v| v != x)
        .partition(|v| tree.in_direction(x, p.direction.germ, v));
    let with_x = |mut v: Vec<Point>| {
        v.push(x.clone());
        Region::hull(tree, &v).expect("nonempty")
    };
    let inner_region = with_x(inside);
    let outer_region = with_x(outside);
    let (outer_tree, outer_emb) = restrict_tree(tree, &outer_region, "outer");
    let (inner_tree, inner_emb) = restrict_tree(tree, &inner_region, "inner");
    let inner_id = s.forest.len();
    let mut trees: Vec<_> = s.forest.trees().to_vec();
    trees[kx] = outer_tree;
    trees.push(inner_tree);
    let forest = canonical_forest(trees);
    let mut parts: Vec<(TreeId, Embedding)> =
        s.forest.trees().iter().enumerate().map(|(i, t)| (i, Embedding::identity(t))).collect();
    parts[kx].1 = outer_emb.clone();
    parts.push((kx, inner_emb.clone()));
    let zip = Zip { parts };

    let side_of = |sub: &Subtree| -> Side {
        if sub.tree != kx {
            return Side::Kept(sub.tree);
        }
        if meets_direction(&s.forest, sub, &p.direction) {
            debug_assert!(sub.region.is_subset(&inner_region));
            Side::Inner
        } else {
            Side::Outer
        }
    };
    let relocate = |sub: &Subtree, pt: &Point| -> Loc {
        match side_of(sub) {
            Side::Kept(t) => Loc::new(t, pt.clone()),
            Side::Outer => Loc::new(kx, outer_emb.to_new(forest.tree(kx), pt).expect("in outer part")),
            Side::Inner => Loc::new(inner_id, inner_emb.to_new(forest.tree(inner_id), pt).expect("in inner part")),
        }
    };
    let rebuild = |m: &PartialIsometry| -> PartialIsometry {
        let mut pairs = Vec::new();
        let mut ends = (0, 0);
        for (a, b) in &m.anchors {
            let da = relocate(&m.domain, a);
            let ib = relocate(&m.image, b);
            ends = (da.tree, ib.tree);
            pairs.push((da.point, ib.point));
        }
        PartialIsometry::from_pairs(&forest, ends.0, ends.1, &pairs).expect("split piece is an isometry")
    };

    let mut letters = Vec::new();
    let mut edge_images = Vec::new();
    let mut extra = None;
    for (idx, l) in s.letters.iter().enumerate() {
        if idx == p.a1.index {
            let m = s.map(p.a1);
            let outer_sub = Subtree { tree: kx, region: outer_region.clone() };
            let inner_sub = Subtree { tree: kx, region: inner_region.clone() };
            let orient = |piece: PartialIsometry| if p.a1.inverse { piece.inverse() } else { piece };
            let m_out = orient(m.restrict(&s.forest, &outer_sub).expect("x lies in both parts"));
            let m_in = orient(m.restrict(&s.forest, &inner_sub).expect("x lies in both parts"));
            letters.push(Letter { name: l.name.clone(), map: rebuild(&m_out) });
            edge_images.push(Word(vec![Sym::pos(idx)]));
            let name = s.fresh_name(&l.name, &BTreeSet::new());
            extra = Some((Letter { name, map: rebuild(&m_in) }, Word(vec![Sym::pos(idx)])));
        } else {
            letters.push(Letter { name: l.name.clone(), map: rebuild(&l.map) });
            edge_images.push(Word(vec![Sym::pos(idx)]));
        }
    }
    let (l, w) = extra.expect("a1 is a letter");
    letters.push(l);
    edge_images.push(w);
    let map = GraphMap { vertex_images: zip.parts.iter().map(|(t, _)| *t).collect(), edge_images };
    let system = SystemOfIsometries::from_letters(s.field, forest, letters, s.rank_hint);
    Ok(SplitOutcome { system, map, zip, split: vec![p.clone()], folds: Vec::new(), interference: Vec::new() })
}

fn direction_key(zip: &Zip, p: &SplittingPoint) -> (Loc, Germ) {
    let d = zip.direction_to_old(&p.direction);
    (d.base, d.germ)
}

/// Splits every splitting point of `s`, sequentially in canonical order.
///
/// Each remaining point is re-validated in the partially split system; points
/// that stop being splitting points are reported as interference.
pub fn split_all(s: &SystemOfIsometries) -> Result<SplitOutcome, InductionError> {
    let original = find_splitting_points(s);
    let mut pending: Vec<(Loc, Germ)> = original
        .iter()
        .map(|p| (p.direction.base.clone(), p.direction.germ))
        .collect();
    let mut cur = s.clone();
    let mut zip = Zip::identity(&s.forest);
    let mut map = GraphMap::identity(&s.graph());
    let mut split = Vec::new();
    loop {
        let next = find_splitting_points(&cur)
            .into_iter()
            .find(|c| pending.contains(&direction_key(&zip, c)));
        let Some(c) = next else { break };
        let key = direction_key(&zip, &c);
        pending.retain(|k| *k != key);
        let out = split_at(&cur, &c)?;
        zip = out.zip.then(&zip);
        map = out.map.then(&map);
        split.push(c);
        cur = out.system;
    }
    let interference = original
        .into_iter()
        .filter(|p| pending.contains(&(p.direction.base.clone(), p.direction.germ)))
        .collect();
    Ok(SplitOutcome { system: cur, map, zip, split, folds: Vec::new(), interference })
}

/// Folds the component `t` away when it carries exactly one full domain base and
/// one full image base of two distinct letters; the composite takes the name of
/// `keep` (one of the two letters).
fn collapse_relay(
    out: SplitOutcome,
    t: TreeId,
    keep: usize,
) -> SplitOutcome {
    let s = &out.system;
    let whole = s.forest.whole(t);
    let dom_ends: Vec<usize> = (0..s.letters.len()).filter(|&i| s.letters[i].map.domain.tree == t).collect();
    let img_ends: Vec<usize> = (0..s.letters.len()).filter(|&i| s.letters[i].map.image.tree == t).collect();
    let ([q], [p]) = (&dom_ends[..], &img_ends[..]) else { return out };
    let (p, q) = (*p, *q);
    if p == q || s.letters[q].map.domain != whole || s.letters[p].map.image != whole || (keep != p && keep != q) {
        return out;
    }
    let drop = if keep == p { q } else { p };
    let composite = s.letters[p].map.then(&s.forest, &s.letters[q].map).expect("relay composes");
    let trees: Vec<_> = s.forest.trees().iter().enumerate().filter(|&(i, _)| i != t).map(|(_, tr)| tr.clone()).collect();
    let forest = canonical_forest(trees);
    let shift = |i: TreeId| if i > t { i - 1 } else { i };
    let move_map = |m: &PartialIsometry| -> PartialIsometry {
        let mut m = m.clone();
        m.domain.tree = shift(m.domain.tree);
        m.image.tree = shift(m.image.tree);
        m
    };
    let mut letters = Vec::new();
    let mut fold_images = Vec::new();
    for (i, l) in s.letters.iter().enumerate() {
        if i == drop {
            continue;
        }
        if i == keep {
            letters.push(Letter { name: l.name.clone(), map: move_map(&composite) });
            fold_images.push(Word(vec![Sym::pos(p), Sym::pos(q)]));
        } else {
            letters.push(Letter { name: l.name.clone(), map: move_map(&l.map) });
            fold_images.push(Word(vec![Sym::pos(i)]));
        }
    }
    let fold = GraphMap {
        vertex_images: (0..s.forest.len()).filter(|&i| i != t).collect(),
        edge_images: fold_images,
    };
    let name = s.letters[keep].name.clone();
    let first = s.letters[p].name.clone();
    let second = s.letters[q].name.clone();
    let zip = Zip { parts: out.zip.parts.iter().enumerate().filter(|&(i, _)| i != t).map(|(_, x)| x.clone()).collect() };
    let system = SystemOfIsometries::from_letters(s.field, forest, letters, s.rank_hint);
    let mut folds = out.folds.clone();
    folds.push((name, first, second));
    SplitOutcome { system, map: fold.then(&out.map), zip, split: out.split, folds, interference: out.interference }
}

/// Position of a candidate: its component, then the distance from that component's first vertex.
fn position(s: &SystemOfIsometries, c: &SplittingPoint) -> (TreeId, Scalar) {
    let t = c.x.tree;
    (t, s.forest.tree(t).dist(&Point::Vertex(0), &c.x.point))
}

/// `up` selects directions pointing away from the first vertex.
fn select<'a>(s: &SystemOfIsometries, cands: &'a [SplittingPoint], up: bool) -> Option<&'a SplittingPoint> {
    let away = |c: &SplittingPoint| {
        let tree = s.forest.tree(c.x.tree);
        !tree.in_direction(&c.x.point, c.direction.germ, &Point::Vertex(0))
    };
    let pick = cands.iter().filter(|c| away(c) == up);
    if up {
        pick.max_by_key(|c| position(s, c))
    } else {
        pick.min_by_key(|c| position(s, c))
    }
}

/// One splitting step under `policy`.
pub fn split_with_policy(s: &SystemOfIsometries, policy: SplitPolicy) -> Result<SplitOutcome, InductionError> {
    let up = match policy {
        SplitPolicy::All => return split_all(s),
        SplitPolicy::Rightmost => true,
        SplitPolicy::Leftmost => false,
    };
    let cands = find_splitting_points(s);
    let Some(c) = select(s, &cands, up) else {
        return Ok(SplitOutcome {
            system: s.clone(),
            map: GraphMap::identity(&s.graph()),
            zip: Zip::identity(&s.forest),
            split: Vec::new(),
            folds: Vec::new(),
            interference: Vec::new(),
        });
    };
    let out = split_at(s, c)?;
    let inner = out.system.forest.len() - 1;
    Ok(collapse_relay(out, inner, c.a0.index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{build_forest, TreeSpec};
    use crate::scalar::{Field, Scalar};
    use crate::system::{LetterSpec, SystemSpec};

    /// Tripod with unit legs; `a` maps the arc y-z onto x-y, `b` maps leg z onto leg x.
    fn tripod_system() -> SystemOfIsometries {
        let spec = TreeSpec {
            name: "T".into(),
            vertices: vec!["c".into(), "x".into(), "y".into(), "z".into()],
            edges: vec![
                ("ex".into(), "c".into(), "x".into(), Scalar::one()),
                ("ey".into(), "c".into(), "y".into(), Scalar::one()),
                ("ez".into(), "c".into(), "z".into(), Scalar::one()),
            ],
        };
        let f = build_forest(&[spec]).unwrap();
        let v = |i| Loc::new(0, Point::Vertex(i));
        let a = LetterSpec { name: "a".into(), anchors: vec![(v(2), v(1)), (v(3), v(2))] };
        let b = LetterSpec { name: "b".into(), anchors: vec![(v(0), v(0)), (v(3), v(1))] };
        SystemSpec { field: Field::Rational, forest: f, letters: vec![a, b], rank_hint: None }.build().unwrap()
    }

    #[test]
    fn tripod_center_split() {
        let s = tripod_system();
        let pts = find_splitting_points(&s);
        let at_center: Vec<_> = pts.iter().filter(|p| p.x.point == Point::Vertex(0)).collect();
        assert!(!at_center.is_empty());
        let p = at_center[0];
        let out = split_at(&s, p).unwrap();
        assert_eq!(out.system.forest.len(), 2);
        assert_eq!(out.system.graph().betti(), s.graph().betti());
        assert!(out.map.respects_incidence(&out.system.graph(), &s.graph()));
        let legs = out.system.forest.tree(1).total_length();
        assert_eq!(legs, Scalar::one());
    }

    #[test]
    fn degenerate_base_is_not_a_candidate() {
        let s = tripod_system();
        for p in find_splitting_points(&s) {
            assert!(!s.dom(p.a0).is_degenerate());
        }
    }
}
