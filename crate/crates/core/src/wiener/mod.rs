//! Discrete Wiener-algebra toolkit on the Cayley circle.

pub mod circle;
pub mod norms;
pub mod projection;

pub use circle::{CircleFunction, MatrixCircle};
pub use norms::{line_norm, tail_mass, wr_membership_test, wr_norm, MembershipReport, WrDiagnostics};
pub use projection::{
    commutator_check, hilbert_transform, line_integral, line_plus_projection, riesz_project, split, CommutatorReport,
    Side,
};
