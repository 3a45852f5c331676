//! Generalized Baumslag–Solitar groups: labeled graphs, deformation moves,
//! Bass–Serre segment indices, branched coverings, depth profiles, lattice
//! certification for the complexes `X_{m,n}` and common Cayley graphs.

pub mod bass_serre;
pub mod cayley;
pub mod covering;
pub mod deform;
pub mod depth;
pub mod error;
pub mod graph_core;
pub mod lattice;
pub mod limits;
pub mod profiles;
pub mod repro;

pub use error::{GbsError, GbsResult};
pub use graph_core::{DirectedStructure, HalfEdge, LabeledGraph};
pub use limits::Limits;
