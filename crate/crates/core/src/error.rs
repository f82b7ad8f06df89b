use thiserror::Error;

/// Errors raised by the factorization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("non-finite value in entry ({row},{col}) at t = {t}")]
    Evaluation { row: usize, col: usize, t: f64 },

    #[error("homogeneity defect {defect:.3e} exceeds tolerance {tol:.1e}")]
    Homogeneity { defect: f64, tol: f64 },

    #[error("symbol is not elliptic: min |det| = {min_det:.3e} below floor {floor:.1e} (t = {t})")]
    Ellipticity { min_det: f64, floor: f64, t: f64 },

    #[error("limit at {side} infinity does not exist: {reason}")]
    Limit { side: &'static str, reason: String },

    #[error("grid under-resolution: {0}")]
    UnderResolved(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("clustering ambiguity: {0}")]
    Clustering(String),

    #[error("jordan reduction failed: {0}")]
    Jordan(String),

    #[error("Toeplitz recursion broke down at step {step} (cond ~ {cond:.3e}); nonzero partial indices suspected")]
    Breakdown { step: usize, cond: f64 },

    #[error("Toeplitz section condition number {cond:.3e} exceeds {cond_max:.1e}; nonzero partial indices suspected")]
    IllConditioned { cond: f64, cond_max: f64 },

    #[error("factorization residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    Residual { residual: f64, tol: f64 },

    #[error("index mismatch: winding {winding:.6} vs partial-index sum {sum}")]
    IndexMismatch { winding: f64, sum: i64 },

    #[error("assembly residual {residual:.3e} exceeds tolerance {tol:.1e} at entry ({row},{col}), t = {t}")]
    Assembly {
        residual: f64,
        tol: f64,
        row: usize,
        col: usize,
        t: f64,
    },

    #[error("winding {winding:.6} minus sum of Re zeta {sum_re_zeta:.6} is {slack:.3e} away from an integer")]
    Integrality { winding: f64, sum_re_zeta: f64, slack: f64 },

    #[error("partial indices unresolved for total index {kappa_total} (searched |kappa_j| <= {k_max}, best cond {best_cond:.3e})")]
    UnresolvedIndices {
        kappa_total: i64,
        k_max: i64,
        best_cond: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
