use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub tol_hom: f64,
    pub ell_floor: f64,
    pub tol_fft: f64,
    pub tol_tail: f64,
    pub slope_tol: f64,
    pub tol_comm: f64,
    pub tol_sim: f64,
    /// Relative to the norm of the reduced matrix.
    pub tau_cluster: f64,
    /// Relative to the norm of the reduced matrix.
    pub tau_merge: f64,
    pub rank_tol: f64,
    pub tol_limit: f64,
    pub tol_fact: f64,
    pub tol_int: f64,
    pub cond_max: f64,
    pub k_max: i64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_hom: 1e-8,
            ell_floor: 1e-6,
            tol_fft: 1e-10,
            tol_tail: 1e-8,
            slope_tol: 0.15,
            tol_comm: 1e-6,
            tol_sim: 1e-9,
            tau_cluster: 1e-7,
            tau_merge: 1e-3,
            rank_tol: 1e-9,
            tol_limit: 1e-6,
            tol_fact: 1e-8,
            tol_int: 1e-3,
            cond_max: 1e10,
            k_max: 3,
        }
    }
}
