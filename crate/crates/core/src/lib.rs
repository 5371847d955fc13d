//! Right-angled Coxeter groups, executable.
//!
//! A [`DefiningGraph`] presents the group: one involution per vertex, and
//! adjacent vertices commute. Everything else hangs off it — canonical
//! words ([`word`]), graph invariants ([`graph`]), subgroup classifiers and
//! scans ([`subgroup`]), dual van Kampen diagrams ([`vkd`]), Cayley-graph
//! geometry ([`geometry`]) and the named example families ([`families`]).
//!
//! ```
//! use racg_core::DefiningGraph;
//!
//! let g = DefiningGraph::load(r#"{"vertices":["a","b","c"],"edges":[["a","b"]]}"#).unwrap();
//! let x = g.element("b a b c c").unwrap();
//! assert_eq!(g.format(x.letters()), "a");
//! ```

pub mod error;
pub mod families;
pub mod geometry;
pub mod graph;
pub mod subgroup;
pub mod vkd;
pub mod word;

pub use error::{Error, Result};
pub use geometry::{CayleyBall, DivergenceEstimate, Hyperplane, Ratio, SubgroupTarget};
pub use graph::{DefiningGraph, FourCycle, FourCycleGraph, GraphDoc, JoinWitness, Vertex, VertexSet};
pub use subgroup::{FinGenSubgroup, ParabolicFlags, ParabolicSpec, ScanReport, SubgroupDoc, Verdict};
pub use vkd::{DualVanKampenDiagram, ReducingDiagram};
pub use word::{CyclicDecomposition, NormalForm, Word};
