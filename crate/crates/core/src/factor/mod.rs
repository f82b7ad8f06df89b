//! Factorization of A*₀ on the Cayley circle, indices and assembly.

pub mod assemble;
pub mod canonical;
pub mod estimates;
pub mod partial;
pub mod pipeline;
pub mod toeplitz;
pub mod winding;

pub use assemble::{assemble_full, full_degree_form, log_cayley, middle_diagonal, Assembly, AssemblyReport};
pub use canonical::{section_condition, toeplitz_canonical_factorize, CanonicalFactors, CanonicalReport};
pub use estimates::{verify_estimates, EstimateReport, SlopeRecord};
pub use partial::{candidate_shifts, partial_index_resolve, PartialFactorization, ShiftVariant};
pub use pipeline::{factorize_symbol, AnalyticityReport, FactorizationResult, FactorizeOptions};
pub use toeplitz::BlockToeplitz;
pub use winding::{open_winding, total_index, winding_number, TotalIndex};
