//! Finite-volume and A-WENO finite-difference solvers for the 1-D and 2-D
//! Euler equations with HLL, HLLC, TV splitting, LDCU and LCDCU fluxes.

// index loops mirror the component formulas; `!(x > 0.0)` also rejects NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod characteristic;
pub mod driver;
pub mod error;
pub mod flux;
pub mod grid;
pub mod io;
pub mod problems;
pub mod reconstruct;
pub mod semidiscrete;
pub mod speeds;
pub mod state;
pub mod time;

pub use error::{Error, Result};
