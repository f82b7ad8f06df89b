//! Cutoff, mollifier and Bernstein approximation chain with rational Fourier images.

pub mod bernstein;
pub mod norms;
pub mod profile;
pub mod series;
pub mod transform;

pub use bernstein::{
    approximation_chain, bernstein_exp_sum, chain_rule_coefficients, psi_derivatives, ApproxChain, DerivativeError,
    StageRecord,
};
pub use norms::{sandwich_check, sobolev_norm, star_norm, SandwichReport};
pub use profile::{cutoff, cutoff_profile, mollifier_kernel, mollify, Bump, Mollified, Sampled, SmoothProfile, Zero};
pub use transform::{rational_transform, sampled_transform, RationalTransform};
