//! The Rips machine, generalized Rauzy-Veech splitting and induction runs.

mod rips;
mod run;
mod split;
mod surface;

pub use rips::{multiply_covered, rips_step, RipsOutcome};
pub use run::{
    run_induction, Budget, Classification, InductionHistory, InductionStep, StepKind, StopReason,
};
pub use split::{
    find_splitting_points, split_all, split_at, split_with_policy, SplitOutcome, SplitPolicy,
    SplittingPoint,
};
pub use surface::{check_surface_directions, DirectionCount, DirectionReport};

use crate::forest::{Direction, Forest, Loc, TreeId};
use crate::region::Embedding;
use crate::tree::Germ;

/// Isometric embedding of every component of a new forest into an old one:
/// the zipping map of a splitting, or the inclusion of a Rips step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zip {
    pub parts: Vec<(TreeId, Embedding)>,
}

impl Zip {
    pub fn identity(forest: &Forest) -> Zip {
        Zip { parts: forest.trees().iter().enumerate().map(|(i, t)| (i, Embedding::identity(t))).collect() }
    }

    pub fn to_old(&self, x: &Loc) -> Loc {
        let (tree, emb) = &self.parts[x.tree];
        Loc::new(*tree, emb.to_old(&x.point))
    }

    /// Germs keep their orientation under the embeddings.
    pub fn germ_to_old(&self, tree: TreeId, g: Germ) -> Germ {
        let (_, emb) = &self.parts[tree];
        Germ { edge: emb.edge_to_old[g.edge].0, up: g.up }
    }

    pub fn direction_to_old(&self, d: &Direction) -> Direction {
        Direction { base: self.to_old(&d.base), germ: self.germ_to_old(d.base.tree, d.germ) }
    }

    /// `self: C -> B` followed by `outer: B -> A`.
    pub fn then(&self, outer: &Zip) -> Zip {
        Zip {
            parts: self
                .parts
                .iter()
                .map(|(t, emb)| {
                    let (ot, oemb) = &outer.parts[*t];
                    (*ot, emb.then(oemb))
                })
                .collect(),
        }
    }
}

pub(crate) fn canonical_forest(trees: Vec<crate::tree::MetricTree>) -> Forest {
    Forest::new(trees.into_iter().enumerate().map(|(i, t)| t.canonically_named(format!("T{i}"))).collect())
}
