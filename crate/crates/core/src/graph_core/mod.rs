//! Finite graphs, components and tightness, disjoint paths, and layered
//! presentations of the generated families.

pub mod family;
pub mod flow;
pub mod graph;

pub use family::{
    generate_family, load_presentation, truncate, CliqueChain, DeclaredRay, FamilyParams,
    LayeredPresentation, PresentationSpec,
};
pub use flow::{disjoint_paths, SplitFlow};
pub use graph::{components, load_graph, tight_components, Graph};
