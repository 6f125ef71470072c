//! Systems of isometries on finite metric forests.
//!
//! The crate provides exact-arithmetic metric trees, partial isometries and
//! their admissible languages, the Rips machine and the generalized
//! Rauzy-Veech splitting, train-track and Whitehead-graph diagnostics, index
//! estimates, and an interval-exchange front end used as an independent oracle.

pub mod dot;
pub mod document;
pub mod error;
pub mod forest;
pub mod graph;
pub mod iet;
pub mod indices;
pub mod induction;
pub mod isometry;
pub mod lamination;
pub mod language;
pub mod par;
pub mod region;
pub mod report;
pub mod scalar;
pub mod system;
pub mod tree;

pub use error::*;
pub use forest::{Direction, Forest, Loc, Subtree, TreeId};
pub use graph::{GraphGamma, GraphMap};
pub use isometry::PartialIsometry;
pub use par::Exec;
pub use scalar::{Field, Scalar};
pub use system::{Composition, SystemOfIsometries, SystemSpec, Sym, Word};
pub use tree::{MetricTree, Point};
