//! Approximation chains and W^r diagnostics.

use std::path::PathBuf;

use serde::Serialize;
use wh_core::approx::{
    approximation_chain, bernstein_exp_sum, rational_transform, sampled_transform, Bump, Sampled, SmoothProfile,
};
use wh_core::symbol::parse_rational;
use wh_core::wiener::{wr_membership_test, wr_norm, MembershipReport, WrDiagnostics};
use wh_core::{CayleyGrid, Tolerances, C64};

use crate::error::{CliError, Result};
use crate::report::{poles_csv, timestamp, write_json, write_text, ChainReport};

#[derive(Clone, Debug)]
pub enum ApproxInput {
    /// Bump supported on [a, b] ⊂ (0, ∞), approximated directly.
    Bump { a: f64, b: f64 },
    /// e^{−|x|} through cutoff and mollifier first.
    ExpDecay { eps: f64, delta: f64 },
}

#[derive(Clone, Debug)]
pub struct ApproxConfig {
    pub input: ApproxInput,
    pub degrees: Vec<usize>,
    pub r: usize,
    pub flip: bool,
    pub out: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxSummary {
    pub degree: usize,
    pub eps: f64,
    pub l1_error: f64,
    pub bounds_hold: bool,
}

/// Transform step on [0, 3/step] used to compare ĥ with the rational image.
const TRANSFORM_STEP: f64 = 1e-3;

pub fn run_approx(cfg: &ApproxConfig) -> Result<Vec<ApproxSummary>> {
    if cfg.degrees.is_empty() {
        return Err(CliError::Usage("no Bernstein degrees given".into()));
    }
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let stamp = timestamp();
    let mut out = Vec::new();
    for &m in &cfg.degrees {
        let (chain, support, sup) = match cfg.input {
            ApproxInput::Bump { a, b } => {
                if !(0.0 < a && a < b) {
                    return Err(CliError::Usage(format!("bump support [{a}, {b}] must lie in (0, ∞)")));
                }
                let h = Bump { a, b };
                let chain = bernstein_exp_sum(&h, m, cfg.r)?;
                let n = (b / TRANSFORM_STEP).ceil() as usize + 1;
                let vals: Vec<f64> = (0..n).map(|i| h.value(i as f64 * TRANSFORM_STEP)).collect();
                let rt = rational_transform(&chain);
                let sup = (-200..=200)
                    .map(|i| {
                        let t = 0.25 * i as f64;
                        (sampled_transform(0.0, TRANSFORM_STEP, &vals, t) - rt.eval(t)).norm()
                    })
                    .fold(0.0, f64::max);
                (chain, Some((a, b)), Some(sup))
            }
            ApproxInput::ExpDecay { eps, delta } => {
                let g = Sampled::from_fn(-3.0 / eps, 3.0 / eps, TRANSFORM_STEP, |x: f64| (-x.abs()).exp());
                (approximation_chain(&g, eps, delta, m, cfg.r, cfg.flip)?, None, None)
            }
        };
        let rt = rational_transform(&chain);
        let report = ChainReport {
            generated_at: stamp,
            support,
            chain: &chain,
            max_pole_imag: rt.max_pole_imag(),
            transform_sup_error: sup,
        };
        write_json(&cfg.out.join(format!("chain_m{m:03}.json")), &report)?;
        write_text(&cfg.out.join(format!("poles_m{m:03}.csv")), &poles_csv(&rt))?;
        out.push(ApproxSummary {
            degree: m,
            eps: chain.eps,
            l1_error: chain.derivative_errors.first().map_or(0.0, |d| d.measured),
            bounds_hold: chain.bounds_hold(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NormsConfig {
    /// Rational expression in t.
    pub expr: String,
    pub r: usize,
    pub delta: f64,
    pub log2_grid: u32,
    pub tolerances: Tolerances,
    pub out: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormsReport {
    pub generated_at: u64,
    pub expr: String,
    pub norms: WrDiagnostics,
    pub membership: MembershipReport,
}

pub fn run_norms(cfg: &NormsConfig) -> Result<NormsReport> {
    let f = parse_rational(&cfg.expr)?;
    let grid = CayleyGrid::new(cfg.log2_grid)?;
    let norms = wr_norm(|t| f.eval(C64::new(t, 0.0)), cfg.r, &grid, &cfg.tolerances)?;
    let membership = wr_membership_test(|z| f.eval(z), cfg.r, cfg.delta, &grid, &cfg.tolerances)?;
    let report = NormsReport {
        generated_at: timestamp(),
        expr: cfg.expr.clone(),
        norms,
        membership,
    };
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    write_json(&cfg.out.join("norms.json"), &report)?;
    Ok(report)
}
