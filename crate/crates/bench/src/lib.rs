//! Fixtures shared by the benchmarks.

use wh_core::factor::FactorizeOptions;
use wh_core::jordan::{build_a_star, reduce};
use wh_core::symbol::builtin;
use wh_core::{CayleyGrid, MatrixCircle, Tolerances};

pub const OMEGA: [f64; 2] = [1.0, 0.0];

/// Coefficients of the normalized jordan2 symbol A*₀ on a 2^log2 grid.
pub fn jordan2_a_star(log2: u32) -> MatrixCircle {
    let tol = Tolerances::default();
    let sym = builtin("jordan2").expect("built-in exists");
    let grid = CayleyGrid::new(log2).expect("valid grid size");
    let (ep, em) = sym.limits_epm(&tol).expect("limits exist");
    let jd = reduce(&ep, &em, &tol, None).expect("reduction succeeds");
    let a = build_a_star(&sym, &OMEGA, &jd, &grid, &tol).expect("A*0 builds");
    MatrixCircle::from_samples(&a.samples)
}

pub fn options(log2_grid: u32) -> FactorizeOptions {
    FactorizeOptions {
        log2_grid,
        ..FactorizeOptions::default()
    }
}
