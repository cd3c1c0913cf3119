//! Exact arithmetic, Chow-ring calculus and finite classification for Fano
//! manifolds with two projective-bundle or conic-bundle contractions.

pub mod chow;
pub mod classify;
pub mod context_file;
pub mod dataset;
pub mod exact;
pub mod expr;
pub mod slope;
pub mod verify;

pub use chow::{BasisMap, ChowError, MapLabel, RingCtx, RingElem};
pub use dataset::{Dataset, DatasetError, FanoEntry};
pub use exact::{QuadNum, Rat};
pub use slope::{InvariantTuple, Kind, Status, TupleData};
