//! Generalized polygons over finite fields and their t-good structures.

pub mod constructions;
pub mod field;
pub mod geometry;
pub mod io;
pub mod permgroup;
pub mod polygon;
pub mod search;
pub mod spectral;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
