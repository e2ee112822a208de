//! Exact generation and verification of vertex-to-vertex equipartitions of
//! the plane into pairwise incongruent convex polygons.

pub mod assembler;
pub mod document;
pub mod error;
pub mod geom;
pub mod scalar;
pub mod selector;
pub mod strip;
pub mod supertile;
pub mod svg;
pub mod tiling;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
