//! Counting and sampling difficult rotation distance instances.
//!
//! Rooted binary trees of size `n` are dual to triangulations of the
//! `(n+2)`-gon, and rotations are dual to edge flips. A pair of trees is
//! *difficult* when it has neither a common edge nor an edge one rotation
//! away from being common. This crate enumerates and samples such pairs,
//! checks the standard reductions against an exact distance oracle, and fits
//! decay models to the resulting fractions.
//!
//! ```
//! use rotkit::{classify_pair, exact_distance, parse_tree, reduce_fully, PairClass, TreePairProblem};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let s = parse_tree("((LL)(LL))")?.to_triangulation();
//! let t = parse_tree("(L((LL)L))")?.to_triangulation();
//! let pair = TreePairProblem::new(s, t)?;
//! assert_eq!(classify_pair(&pair)?, PairClass::OneOff);
//! let r = reduce_fully(&pair);
//! assert_eq!(exact_distance(&pair, 13)?.distance, r.one_off_moves);
//! # Ok(())
//! # }
//! ```

pub mod census;
pub mod chords;
pub mod classify;
pub mod cli;
pub mod combinatorics;
pub mod distance;
pub mod stats;
pub mod tree;
pub mod triangulation;

pub use census::{exact_census, exact_census_naive, sample_census, CensusRow, SampleRow};
pub use classify::{classify_pair, reduce_fully, PairClass, TreePairProblem};
pub use combinatorics::{catalan, count_instances, dihedral_class_count, ExactCount};
pub use distance::{exact_distance, DistanceResult};
pub use tree::{parse_tree, remy_sample, BinaryTree, NodeAddress};
pub use triangulation::{parse_triangulation, Diagonal, Triangulation};
