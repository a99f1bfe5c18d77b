//! Salt-dome boundary tracking through seismic volumes with tensor-based
//! subspace learning of boundary texture.

// `!(x > 0.0)` is used on purpose so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geom;
pub mod grid;
pub mod synth;
pub mod tensor;
pub mod texture;
pub mod tracker;
pub mod volume;

pub use error::{Error, Result};
pub use grid::{Grid2, Point};
