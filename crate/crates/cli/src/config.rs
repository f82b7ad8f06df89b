//! Job configuration, loadable from JSON and overridable from the command line.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wh_core::{builtin, parse_symbol_spec, HomogeneousSymbol, Tolerances};

use crate::error::{CliError, Result};

pub const LOG2_GRID_RANGE: std::ops::RangeInclusive<u32> = 8..=20;
const UNIT_TOL: f64 = 1e-12;

/// Great circle ω(φ) = cos φ·u + sin φ·v on S^{n−2}, φ = 2πk/count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub count: usize,
    #[serde(default)]
    pub u: Option<Vec<f64>>,
    #[serde(default)]
    pub v: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    /// `builtin:NAME` or a path to a symbol spec file.
    pub symbol: String,
    /// Ambient dimension n; ω ranges over S^{n−2} ⊂ ℝ^{n−1}.
    pub space_dim: usize,
    /// Explicit directions; takes precedence over `sweep`.
    pub omega: Option<Vec<Vec<f64>>>,
    pub sweep: Option<Sweep>,
    pub log2_grid: u32,
    /// Defaults to ⌊n/2⌋ + 1.
    pub r: Option<usize>,
    pub tolerances: Tolerances,
    pub out: PathBuf,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            symbol: String::new(),
            space_dim: 3,
            omega: None,
            sweep: None,
            log2_grid: 12,
            r: None,
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
        }
    }
}

/// A direction with its sweep parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Direction {
    pub index: usize,
    pub phi: Option<f64>,
    pub omega: Vec<f64>,
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl JobConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn smoothness(&self) -> usize {
        self.r.unwrap_or(self.space_dim / 2 + 1)
    }

    pub fn load_symbol(&self) -> Result<HomogeneousSymbol> {
        load_symbol(&self.symbol)
    }

    pub fn validate(&self) -> Result<()> {
        if self.symbol.is_empty() {
            return Err(CliError::Usage("no symbol given".into()));
        }
        if !LOG2_GRID_RANGE.contains(&self.log2_grid) {
            return Err(CliError::Usage(format!(
                "log2_grid {} outside [{}, {}]",
                self.log2_grid,
                LOG2_GRID_RANGE.start(),
                LOG2_GRID_RANGE.end()
            )));
        }
        if self.space_dim < 2 {
            return Err(CliError::Usage("space_dim must be at least 2".into()));
        }
        self.directions().map(|_| ())
    }

    /// Directions to factorize, in output order.
    pub fn directions(&self) -> Result<Vec<Direction>> {
        let m = self.space_dim - 1;
        if let Some(list) = &self.omega {
            if list.is_empty() {
                return Err(CliError::Usage("empty omega list".into()));
            }
            return list
                .iter()
                .enumerate()
                .map(|(index, w)| {
                    if w.len() != m {
                        return Err(CliError::Usage(format!(
                            "omega #{index} has {} components, expected {m}",
                            w.len()
                        )));
                    }
                    if (norm(w) - 1.0).abs() > UNIT_TOL {
                        return Err(CliError::Usage(format!("omega #{index} is not a unit vector")));
                    }
                    Ok(Direction {
                        index,
                        phi: None,
                        omega: w.clone(),
                    })
                })
                .collect();
        }
        let count = self.sweep.as_ref().map_or(1, |s| s.count);
        if count == 0 {
            return Err(CliError::Usage("sweep count must be positive".into()));
        }
        if m == 1 {
            // S^0 = {±1}
            return Ok((0..count.min(2))
                .map(|index| Direction {
                    index,
                    phi: Some(PI * index as f64),
                    omega: vec![if index == 0 { 1.0 } else { -1.0 }],
                })
                .collect());
        }
        let sweep = self.sweep.clone().unwrap_or(Sweep {
            count,
            u: None,
            v: None,
        });
        let u = sweep.u.unwrap_or_else(|| unit(m, 0));
        let v = sweep.v.unwrap_or_else(|| unit(m, 1));
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        if u.len() != m
            || v.len() != m
            || (norm(&u) - 1.0).abs() > UNIT_TOL
            || (norm(&v) - 1.0).abs() > UNIT_TOL
            || dot.abs() > UNIT_TOL
        {
            return Err(CliError::Usage(format!("sweep plane needs orthonormal u, v in R^{m}")));
        }
        Ok((0..count)
            .map(|index| {
                let phi = 2.0 * PI * index as f64 / count as f64;
                let (s, c) = phi.sin_cos();
                let mut omega: Vec<f64> = u.iter().zip(&v).map(|(a, b)| c * a + s * b).collect();
                let n = norm(&omega);
                omega.iter_mut().for_each(|x| *x /= n);
                Direction {
                    index,
                    phi: Some(phi),
                    omega,
                }
            })
            .collect())
    }
}

/// `builtin:NAME` or a spec file path.
pub fn load_symbol(source: &str) -> Result<HomogeneousSymbol> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::io(source, e))?;
    Ok(parse_symbol_spec(&text)?)
}
