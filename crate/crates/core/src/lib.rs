//! Right standard (Wiener–Hopf) factorization of elliptic homogeneous matrix
//! symbols on the real line.
//!
//! The pipeline runs limits → Jordan reduction → normalized symbol A*₀ →
//! block-Toeplitz factorization on the Cayley circle → assembly and
//! verification. Supporting pieces are the Wiener-algebra toolkit and the
//! cutoff/mollifier/Bernstein approximation chain.

#![allow(clippy::needless_range_loop)]

pub mod approx;
pub mod error;
pub mod factor;
pub mod fit;
pub mod grid;
pub mod jordan;
pub mod linalg;
pub mod symbol;
pub mod tolerances;
pub mod wiener;

pub use error::{Error, Result};
pub use grid::CayleyGrid;
pub use linalg::{CMat, C64};
pub use symbol::{builtin, parse_symbol_spec, HomogeneousSymbol};
pub use tolerances::Tolerances;
pub use wiener::{CircleFunction, MatrixCircle, Side};
