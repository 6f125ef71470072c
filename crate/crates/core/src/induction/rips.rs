use std::collections::BTreeSet;

use crate::error::InductionError;
use crate::forest::{Loc, Subtree};
use crate::graph::GraphMap;
use crate::isometry::PartialIsometry;
use crate::region::{components_of_union, restrict_tree, Region};
use crate::system::{Letter, SystemOfIsometries, Sym, Word};
use crate::tree::Point;

use super::{canonical_forest, Zip};

#[derive(Clone, Debug)]
pub struct RipsOutcome {
    pub system: SystemOfIsometries,
    pub map: GraphMap,
    pub zip: Zip,
    /// `F' = F`: the machine has stopped.
    pub halted: bool,
    /// Letters with no surviving restriction.
    pub dropped: Vec<String>,
}

/// Points lying in at least two domains of distinct symbols, as subtrees per component.
pub fn multiply_covered(s: &SystemOfIsometries) -> Vec<Subtree> {
    let syms = s.syms();
    let mut out = Vec::new();
    for t in 0..s.forest.len() {
        let mut pieces = Vec::new();
        for (i, &a) in syms.iter().enumerate() {
            for &b in &syms[i + 1..] {
                if let Some(j) = s.dom(a).intersect(s.dom(b)) {
                    if j.tree == t {
                        pieces.push(j.region);
                    }
                }
            }
        }
        for region in components_of_union(s.forest.tree(t), &pieces) {
            out.push(Subtree { tree: t, region });
        }
    }
    out
}

/// One step of the Rips machine: restrict to multiply covered points and take
/// maximal restrictions of the letters between pairs of new components.
pub fn rips_step(s: &SystemOfIsometries) -> Result<RipsOutcome, InductionError> {
    let comps = multiply_covered(s);
    if comps.is_empty() {
        return Err(InductionError::EmptyOutput);
    }
    let halted = comps.len() == s.forest.len()
        && comps.iter().all(|c| c.region == Region::whole(s.forest.tree(c.tree)));
    if halted {
        return Ok(RipsOutcome {
            system: s.clone(),
            map: GraphMap::identity(&s.graph()),
            zip: Zip::identity(&s.forest),
            halted: true,
            dropped: Vec::new(),
        });
    }
    let mut trees = Vec::new();
    let mut parts = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let (t, emb) = restrict_tree(s.forest.tree(c.tree), &c.region, &format!("T{i}"));
        trees.push(t);
        parts.push((c.tree, emb));
    }
    let forest = canonical_forest(trees);
    let zip = Zip { parts };
    let locate = |sub: &Subtree, p: &Point| -> Option<Loc> {
        comps.iter().enumerate().find_map(|(i, c)| {
            (c.tree == sub.tree && c.region.contains(p))
                .then(|| zip.parts[i].1.to_new(forest.tree(i), p).map(|q| Loc::new(i, q)))
                .flatten()
        })
    };
    let mut pieces: Vec<(usize, PartialIsometry)> = Vec::new();
    let mut dropped = Vec::new();
    for (idx, l) in s.letters.iter().enumerate() {
        let mut found = 0;
        for c1 in comps.iter().filter(|c| c.tree == l.map.domain.tree) {
            let Some(m1) = l.map.restrict(&s.forest, c1) else { continue };
            for c2 in comps.iter().filter(|c| c.tree == l.map.image.tree) {
                let Some(m2) = m1.corestrict(&s.forest, c2) else { continue };
                let mut pairs = Vec::new();
                let mut trees = None;
                for (p, q) in &m2.anchors {
                    let dp = locate(&m2.domain, p).expect("domain lies in F'");
                    let iq = locate(&m2.image, q).expect("image lies in F'");
                    trees = Some((dp.tree, iq.tree));
                    pairs.push((dp.point, iq.point));
                }
                let (dt, it) = trees.expect("anchors");
                let m = PartialIsometry::from_pairs(&forest, dt, it, &pairs).expect("restricted isometry");
                pieces.push((idx, m));
                found += 1;
            }
        }
        if found == 0 {
            dropped.push(l.name.clone());
        }
    }
    let mut letters = Vec::new();
    let mut edge_images = Vec::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let counts: Vec<usize> = (0..s.letters.len()).map(|i| pieces.iter().filter(|(j, _)| *j == i).count()).collect();
    for (idx, m) in pieces {
        let name = if counts[idx] == 1 {
            s.letters[idx].name.clone()
        } else {
            s.fresh_name(&s.letters[idx].name, &taken)
        };
        taken.insert(name.clone());
        letters.push(Letter { name, map: m });
        edge_images.push(Word(vec![Sym::pos(idx)]));
    }
    let map = GraphMap { vertex_images: zip.parts.iter().map(|(t, _)| *t).collect(), edge_images };
    let system = SystemOfIsometries::from_letters(s.field, forest, letters, s.rank_hint);
    Ok(RipsOutcome { system, map, zip, halted: false, dropped })
}
