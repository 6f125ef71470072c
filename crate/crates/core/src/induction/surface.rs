use std::collections::BTreeSet;

use crate::forest::{directions_at, Direction, Loc};
use crate::system::{SystemOfIsometries, Sym};
use crate::tree::Point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionCount {
    pub direction: Direction,
    pub letters: Vec<Sym>,
}

/// Letters defined in each direction at branch points of `F` and extremal points of bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionReport {
    pub entries: Vec<DirectionCount>,
}

impl DirectionReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.letters.len() == 2)
    }

    pub fn witness(&self) -> Option<&DirectionCount> {
        self.entries.iter().find(|e| e.letters.len() != 2)
    }
}

/// Counts, for every examined direction, the symbols of `A^{±1}` defined in it.
pub fn check_surface_directions(s: &SystemOfIsometries) -> DirectionReport {
    let mut points: BTreeSet<Loc> = BTreeSet::new();
    for (t, tree) in s.forest.trees().iter().enumerate() {
        for v in 0..tree.vertex_count() {
            if tree.degree(v) >= 3 {
                points.insert(Loc::new(t, Point::Vertex(v)));
            }
        }
    }
    for sym in s.syms() {
        let d = s.dom(sym);
        for p in d.region.extremal_points(s.forest.tree(d.tree)) {
            points.insert(Loc::new(d.tree, p));
        }
    }
    let syms = s.syms();
    let mut entries = Vec::new();
    for x in points {
        for direction in directions_at(&s.forest, &x).expect("point of the forest") {
            let letters = syms.iter().copied().filter(|&a| s.map(a).defined_in(&s.forest, &direction)).collect();
            entries.push(DirectionCount { direction, letters });
        }
    }
    DirectionReport { entries }
}
