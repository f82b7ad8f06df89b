//! End-to-end factorization of one slice A₀(ω, ·).

use serde::Serialize;

use crate::error::Result;
use crate::factor::assemble::{assemble_full, Assembly, AssemblyReport};
use crate::factor::canonical::CanonicalReport;
use crate::factor::estimates::{verify_estimates, EstimateReport};
use crate::factor::partial::{partial_index_resolve, ShiftVariant};
use crate::factor::winding::{total_index, TotalIndex};
use crate::grid::CayleyGrid;
use crate::jordan::{build_a_star, reduce, AStar, JordanData};
use crate::linalg::C64;
use crate::symbol::HomogeneousSymbol;
use crate::tolerances::Tolerances;
use crate::wiener::{tail_mass, MatrixCircle};

#[derive(Clone, Debug)]
pub struct FactorizeOptions {
    pub log2_grid: u32,
    /// Smoothness order of the estimate sums.
    pub r: usize,
    /// Toeplitz section order; defaults to a quarter of the grid size.
    pub order: Option<usize>,
    pub tol: Tolerances,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        Self {
            log2_grid: 12,
            r: 2,
            order: None,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticityReport {
    pub wrong_sign_minus: f64,
    pub wrong_sign_plus: f64,
    /// Largest relative coefficient mass of an A*₀ entry in the outer quarter of the FFT band.
    pub input_tail: f64,
    pub min_abs_det_minus: f64,
    pub min_abs_det_plus: f64,
    pub winding_det_minus: f64,
    pub winding_det_plus: f64,
}

/// Everything produced for one direction ω.
#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub grid: CayleyGrid,
    pub jordan: JordanData,
    pub a_star: AStar,
    /// Left factor M₋ of A*₀ = M₋ diag(z^κ) M₊, coefficients k ≤ 0.
    pub a_minus: MatrixCircle,
    /// Right factor M₊, coefficients k ≥ 0.
    pub a_plus: MatrixCircle,
    pub index: TotalIndex,
    /// Partial indices, sorted descending.
    pub kappa_partial: Vec<i64>,
    /// Middle-factor exponents in the order used by the factors.
    pub exponents: Vec<i64>,
    pub variant: ShiftVariant,
    pub trials: usize,
    pub canonical: CanonicalReport,
    pub assembly: Assembly,
    pub analyticity: AnalyticityReport,
    pub estimates: EstimateReport,
}

impl FactorizationResult {
    pub fn kappa_total(&self) -> i64 {
        self.index.kappa_total
    }

    /// max |A*₀ − M₋ diag(z^κ) M₊| on the grid.
    pub fn residual(&self) -> f64 {
        self.canonical.residual
    }

    pub fn assembly_report(&self) -> &AssemblyReport {
        &self.assembly.report
    }

    pub fn zeta(&self) -> &[C64] {
        &self.jordan.zeta
    }
}

/// Limits → Jordan reduction → A*₀ → index → factorization → assembly → estimates.
pub fn factorize_symbol(
    sym: &HomogeneousSymbol,
    omega: &[f64],
    opts: &FactorizeOptions,
) -> Result<FactorizationResult> {
    let tol = &opts.tol;
    let grid = CayleyGrid::new(opts.log2_grid)?;
    sym.validate(tol)?;
    let (ep, em) = sym.limits_epm(tol)?;
    let jordan = reduce(&ep, &em, tol, None)?;
    let a_star = build_a_star(sym, omega, &jordan, &grid, tol)?;
    let index = total_index(sym, omega, &jordan, &grid, tol)?;
    let b = MatrixCircle::from_samples(&a_star.samples);
    let input_tail = b.entries().iter().map(|e| tail_mass(e, grid.len())).fold(0.0, f64::max);
    let order = opts.order.unwrap_or(grid.len() / 4);
    let pf = partial_index_resolve(&b, index.kappa_total, order, &grid, tol)?;
    let assembly = assemble_full(
        sym,
        omega,
        &jordan,
        &pf.minus,
        &pf.plus,
        &pf.exponents,
        &grid,
        tol.tol_fact,
    )?;
    let estimates = verify_estimates(&pf.minus, &pf.plus, &jordan, &grid, opts.r);
    let analyticity = AnalyticityReport {
        wrong_sign_minus: pf.report.wrong_sign_minus,
        wrong_sign_plus: pf.report.wrong_sign_plus,
        input_tail,
        min_abs_det_minus: pf.report.min_abs_det_minus,
        min_abs_det_plus: pf.report.min_abs_det_plus,
        winding_det_minus: pf.report.winding_minus,
        winding_det_plus: pf.report.winding_plus,
    };
    Ok(FactorizationResult {
        grid,
        jordan,
        a_star,
        a_minus: pf.minus,
        a_plus: pf.plus,
        index,
        kappa_partial: pf.kappa,
        exponents: pf.exponents,
        variant: pf.variant,
        trials: pf.trials,
        canonical: pf.report,
        assembly,
        analyticity,
        estimates,
    })
}
