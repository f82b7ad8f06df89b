//! Report and plot-data writers.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use wh_core::approx::{ApproxChain, RationalTransform};
use wh_core::factor::{
    AnalyticityReport, AssemblyReport, CanonicalReport, EstimateReport, FactorizationResult, ShiftVariant,
};
use wh_core::linalg::{det, identity, max_abs};
use wh_core::{HomogeneousSymbol, MatrixCircle, C64};

use crate::config::Direction;
use crate::error::{CliError, Result};

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report values serialize");
    write_text(path, &(text + "\n"))
}

pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// One line per nonzero coefficient block entry: k,row,col,re,im.
pub fn factor_csv(f: &MatrixCircle) -> String {
    let mut out = String::from("k,row,col,re,im\n");
    for k in f.lo()..=f.hi() {
        for row in 0..f.dim() {
            for col in 0..f.dim() {
                let c = f.entry(row, col).coeff(k);
                if c != C64::new(0.0, 0.0) {
                    writeln!(out, "{k},{row},{col},{:e},{:e}", c.re, c.im).unwrap();
                }
            }
        }
    }
    out
}

/// t, continuous arg det A₀(ω, t), max |A*₀ − I| in increasing t.
pub fn plot_csv(sym: &HomogeneousSymbol, omega: &[f64], res: &FactorizationResult) -> Result<String> {
    let mut out = String::from("t,arg_det,a_star_dev\n");
    let n = sym.dim();
    let id = identity(n);
    let mut prev: Option<f64> = None;
    let mut acc = 0.0;
    for j in res.grid.line_order() {
        let t = res.grid.t()[j];
        let arg = det(&sym.eval_slice(omega, t)?).arg();
        if let Some(p) = prev {
            let mut d = arg - p;
            d -= (d / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
            acc += d;
        } else {
            acc = arg;
        }
        prev = Some(arg);
        let dev = max_abs(&(&res.a_star.samples[j] - &id));
        writeln!(out, "{t:e},{acc:e},{dev:e}").unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
pub struct Residuals {
    pub star_factorization: f64,
    pub assembly: f64,
    pub similarity: f64,
    pub integrality_slack: f64,
}

#[derive(Serialize)]
pub struct AStarSummary {
    pub limit_error: f64,
    pub decay_slope: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct FactorReport<'a> {
    pub generated_at: u64,
    pub symbol: &'a str,
    pub dim: usize,
    pub mu: f64,
    pub omega_index: usize,
    pub phi: Option<f64>,
    pub omega: &'a [f64],
    pub log2_grid: u32,
    pub r: usize,
    pub kappa_total: i64,
    pub kappa_partial: &'a [i64],
    pub exponents: &'a [i64],
    pub variant: ShiftVariant,
    pub winding: f64,
    pub sum_re_zeta: f64,
    pub zeta: &'a [C64],
    pub delta0: f64,
    pub residuals: Residuals,
    pub canonical: &'a CanonicalReport,
    pub analyticity: &'a AnalyticityReport,
    pub assembly: &'a AssemblyReport,
    pub a_star: AStarSummary,
    pub estimates: &'a EstimateReport,
}

pub fn factor_report<'a>(
    sym: &'a HomogeneousSymbol,
    dir: &'a Direction,
    r: usize,
    res: &'a FactorizationResult,
    generated_at: u64,
) -> FactorReport<'a> {
    FactorReport {
        generated_at,
        symbol: &sym.name,
        dim: sym.dim(),
        mu: sym.mu(),
        omega_index: dir.index,
        phi: dir.phi,
        omega: &dir.omega,
        log2_grid: res.grid.log2_size(),
        r,
        kappa_total: res.kappa_total(),
        kappa_partial: &res.kappa_partial,
        exponents: &res.exponents,
        variant: res.variant,
        winding: res.index.winding,
        sum_re_zeta: res.index.sum_re_zeta,
        zeta: res.zeta(),
        delta0: res.jordan.delta0,
        residuals: Residuals {
            star_factorization: res.residual(),
            assembly: res.assembly_report().residual,
            similarity: res.jordan.similarity_residual,
            integrality_slack: res.index.slack,
        },
        canonical: &res.canonical,
        analyticity: &res.analyticity,
        assembly: res.assembly_report(),
        a_star: AStarSummary {
            limit_error: res.a_star.limit_error,
            decay_slope: res.a_star.decay_slope,
            warnings: res.a_star.warnings.clone(),
        },
        estimates: &res.estimates,
    }
}

/// index,phi,omega,winding,sum_re_zeta,kappa_total,kappa_partial,residual,assembly_residual
pub fn sweep_csv(rows: &[(&Direction, &FactorizationResult)]) -> String {
    let mut out =
        String::from("index,phi,omega,winding,sum_re_zeta,kappa_total,kappa_partial,residual,assembly_residual\n");
    for (dir, res) in rows {
        let omega: Vec<String> = dir.omega.iter().map(|x| format!("{x:e}")).collect();
        let kappa: Vec<String> = res.kappa_partial.iter().map(|k| k.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{:e},{:e},{},{},{:e},{:e}",
            dir.index,
            dir.phi.map_or(String::new(), |p| format!("{p:e}")),
            omega.join(" "),
            res.index.winding,
            res.index.sum_re_zeta,
            res.kappa_total(),
            kappa.join(" "),
            res.residual(),
            res.assembly_report().residual,
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
pub struct ChainReport<'a> {
    pub generated_at: u64,
    pub support: Option<(f64, f64)>,
    #[serde(flatten)]
    pub chain: &'a ApproxChain,
    pub max_pole_imag: f64,
    pub transform_sup_error: Option<f64>,
}

/// k,pole_re,pole_im,residue_re,residue_im
pub fn poles_csv(rt: &RationalTransform) -> String {
    let mut out = String::from("k,pole_re,pole_im,residue_re,residue_im\n");
    for (k, (p, r)) in rt.poles.iter().zip(&rt.residues).enumerate() {
        writeln!(out, "{k},{:e},{:e},{:e},{:e}", p.re, p.im, r.re, r.im).unwrap();
    }
    out
}
