//! Exact rational tools for real phase retrieval: frames and the complement
//! property, the rank-one lifting, generators of exact phase-retrievable
//! frames, and phase-retrievable subspaces.

pub mod catalog;
pub mod construct;
pub mod error;
pub mod format;
pub mod frames;
pub mod lifting;
pub mod ratlin;
pub mod subspaces;

pub use error::{Error, Result};
pub use frames::{Frame, IndexSet};
pub use ratlin::{RatMatrix, Rational, Seed};
