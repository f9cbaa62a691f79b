//! Separation systems, tangles and trees of tangles on finite graphs, plus
//! finite-window evidence for limit separations and ends of layered graphs.

pub mod chains;
pub mod ends;
pub mod error;
pub mod graph_core;
pub mod limits;
pub mod separations;
pub mod tangles;
pub mod tree_of_tangles;
pub mod vset;

pub use error::{Error, Result};
pub use graph_core::Graph;
pub use vset::VSet;
