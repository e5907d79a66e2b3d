//! Strip planarity testing and certified drawing synthesis for plane graphs.
//!
//! Given a planar graph with a fixed plane embedding and an assignment of
//! vertices to horizontal strips, this crate decides whether the graph has a
//! planar drawing with y-monotone edges in which every vertex lies inside its
//! strip, and on YES builds such a drawing with exact rational coordinates,
//! checked by an independent geometric validator.
//!
//! The long-form guide lives in `book/`; its code snippets are compiled and
//! run as doc-tests of this crate.

pub mod cplanarity;
pub mod drawing;
pub mod generate;
pub mod geom;
pub mod plane;
pub mod draw;
pub mod reduce;
pub mod upward;
pub mod validate;
pub mod instance;
pub mod planarity;

pub use plane::{DartId, EdgeId, FaceId, PlaneMultigraph, VertexId};
