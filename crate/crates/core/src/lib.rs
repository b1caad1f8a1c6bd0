//! Compact Approximate Taylor (CAT) schemes for hyperbolic conservation
//! laws on uniform Cartesian grids, with a posteriori MOOD limiting and
//! a priori adaptive (ACAT) limiting.

pub mod acat;
pub mod cases;
pub mod cat;
pub mod driver;
pub mod error;
pub mod grid;
pub mod io;
pub mod models;
pub mod mood;
pub mod par;
pub mod riemann;
pub mod state;
pub mod stencil;
pub mod sweep;

pub use error::{Error, Result};
pub use state::{Conserved, Euler2, Scalar, State};
