//! Swap distance minimization analysis for orders of constituents.
//!
//! - [`permutation`]: orders, the permutahedron and the distance measures
//!   `d` (swap distance), `p` (head to end) and `c` (non-canonical).
//! - [`kendall`]: tau-a with ties and its attainable ranges.
//! - [`significance`]: exact permutation tests and Holm adjustment.
//! - [`monte_carlo`]: the global test over many conditions.
//! - [`dataset`]: conditions, bundled data and CSV input.
//! - [`cli`]: the `swapdist` command.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod kendall;
pub mod monte_carlo;
pub mod permutation;
pub mod report;
pub mod significance;

pub use error::{Error, Result};
