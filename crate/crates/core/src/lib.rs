//! Tait colorings, Euler characteristics of decoration moduli spaces, and the
//! sl3 web polynomial for planar trivalent graphs.
//!
//! Graphs are combinatorial maps (rotation systems). The [`reduce`] module
//! evaluates a graph by repeatedly removing free loops, bigons, triangles and
//! squares; instantiated over the integers it yields the Euler characteristic,
//! over [`laurent::LaurentPoly`] it yields `P3(q)`. The [`tait`] module is the
//! brute-force oracle both are checked against, and [`su3`] realizes
//! decorations as order-two elements of SU(3).

pub mod catalog;
pub mod cli;
pub mod laurent;
pub mod map;
pub mod reduce;
pub mod su3;
pub mod tait;
pub mod text;
pub mod verify;

pub use laurent::LaurentPoly;
pub use map::{CombinatorialMap, EdgeId, Face, FaceId, HalfEdgeId, MapError, VertexId};
pub use reduce::{euler_characteristic, reduce, MoveKind, ReduceError, RelationWeights};
pub use tait::{count_tait, enumerate_tait, TaitColoring};
