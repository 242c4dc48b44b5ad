//! Variable-exponent function-space numerics on periodic grids.

pub mod corpus;
pub mod decomposition;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod lebesgue;
pub mod littlewood_paley;
pub mod maximal;
pub mod mixed_norms;
pub mod profile;
pub mod run;
pub mod tolerances;
pub mod trace_ext;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Domain, Grid, GridFunction};
pub use num_complex::Complex64 as C64;
