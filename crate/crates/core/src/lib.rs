//! Numerical laboratory for small area-constrained Willmore spheres in
//! normal-coordinate model metrics.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod background;
pub mod error;
pub mod fit;
pub mod immersion;
pub mod jet;
pub mod real;
pub mod solver;
pub mod sphharm;
pub mod willmore;

pub use error::{Error, Result};
