//! Factorization and validation jobs over a set of directions ω.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use wh_core::factor::{factorize_symbol, total_index, FactorizationResult, FactorizeOptions, TotalIndex};
use wh_core::jordan::{reduce, JordanExport};
use wh_core::symbol::ValidationReport;
use wh_core::CayleyGrid;

use crate::config::{Direction, JobConfig};
use crate::error::{CliError, Result};
use crate::report::{factor_csv, factor_report, plot_csv, sweep_csv, timestamp, write_json, write_text};

/// One factorized direction.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionSummary {
    pub index: usize,
    pub phi: Option<f64>,
    pub kappa_total: i64,
    pub kappa_partial: Vec<i64>,
    pub winding: f64,
    pub residual: f64,
    pub dir: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct JobSummary {
    pub symbol: String,
    pub directions: Vec<DirectionSummary>,
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Factorizes every direction in parallel, then writes all artifacts. Nothing is
/// written unless every direction succeeds.
pub fn run_job(cfg: &JobConfig) -> Result<JobSummary> {
    cfg.validate()?;
    let sym = cfg.load_symbol()?;
    let dirs = cfg.directions()?;
    let r = cfg.smoothness();
    let opts = FactorizeOptions {
        log2_grid: cfg.log2_grid,
        r,
        order: None,
        tol: cfg.tolerances.clone(),
    };
    let results: Vec<FactorizationResult> = dirs
        .par_iter()
        .map(|d| factorize_symbol(&sym, &d.omega, &opts).map_err(|source| CliError::Job { index: d.index, source }))
        .collect::<Result<_>>()?;

    create_dir(&cfg.out)?;
    let stamp = timestamp();
    write_json(&cfg.out.join("jordan.json"), &results[0].jordan.export())?;
    let mut summaries = Vec::with_capacity(dirs.len());
    for (d, res) in dirs.iter().zip(&results) {
        let dir = cfg.out.join(format!("omega_{:03}", d.index));
        create_dir(&dir)?;
        write_text(&dir.join("a_minus.csv"), &factor_csv(&res.a_minus))?;
        write_text(&dir.join("a_plus.csv"), &factor_csv(&res.a_plus))?;
        write_text(&dir.join("plot.csv"), &plot_csv(&sym, &d.omega, res)?)?;
        write_json(&dir.join("report.json"), &factor_report(&sym, d, r, res, stamp))?;
        summaries.push(DirectionSummary {
            index: d.index,
            phi: d.phi,
            kappa_total: res.kappa_total(),
            kappa_partial: res.kappa_partial.clone(),
            winding: res.index.winding,
            residual: res.residual(),
            dir,
        });
    }
    let rows: Vec<(&Direction, &FactorizationResult)> = dirs.iter().zip(&results).collect();
    write_text(&cfg.out.join("sweep.csv"), &sweep_csv(&rows))?;
    Ok(JobSummary {
        symbol: sym.name.clone(),
        directions: summaries,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexRecord {
    pub index: usize,
    pub omega: Vec<f64>,
    #[serde(flatten)]
    pub total: TotalIndex,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub generated_at: u64,
    pub symbol: String,
    pub validation: ValidationReport,
    pub jordan: JordanExport,
    pub indices: Vec<IndexRecord>,
}

/// Validation, Jordan reduction and total index per direction, without factorizing.
pub fn run_check(cfg: &JobConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let sym = cfg.load_symbol()?;
    let tol = &cfg.tolerances;
    let validation = sym.validate(tol)?;
    let (ep, em) = sym.limits_epm(tol)?;
    let jd = reduce(&ep, &em, tol, None)?;
    let grid = CayleyGrid::new(cfg.log2_grid)?;
    let indices = cfg
        .directions()?
        .into_iter()
        .map(|d| {
            let total = total_index(&sym, &d.omega, &jd, &grid, tol)
                .map_err(|source| CliError::Job { index: d.index, source })?;
            Ok(IndexRecord {
                index: d.index,
                omega: d.omega,
                total,
            })
        })
        .collect::<Result<_>>()?;
    let report = CheckReport {
        generated_at: timestamp(),
        symbol: sym.name.clone(),
        validation,
        jordan: jd.export(),
        indices,
    };
    create_dir(&cfg.out)?;
    write_json(&cfg.out.join("check.json"), &report)?;
    Ok(report)
}
