//! Winding numbers and the total index.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::CayleyGrid;
use crate::jordan::JordanData;
use crate::linalg::{det, C64};
use crate::symbol::HomogeneousSymbol;
use crate::tolerances::Tolerances;

/// Largest phase step accepted between neighbouring samples.
const MAX_STEP: f64 = 0.5 * PI;

fn accumulate<I: Iterator<Item = C64>>(mut path: I) -> Result<f64> {
    let Some(mut prev) = path.next() else {
        return Ok(0.0);
    };
    if prev.norm() == 0.0 {
        return Err(Error::Precondition("function vanishes on the contour".into()));
    }
    let mut total = 0.0;
    for cur in path {
        if cur.norm() == 0.0 || !cur.re.is_finite() || !cur.im.is_finite() {
            return Err(Error::Precondition(
                "function vanishes or is not finite on the contour".into(),
            ));
        }
        let step = (cur / prev).arg();
        if step.abs() >= MAX_STEP {
            return Err(Error::UnderResolved(format!(
                "phase jump of {step:.3} rad between adjacent nodes"
            )));
        }
        total += step;
        prev = cur;
    }
    Ok(total / (2.0 * PI))
}

/// (1/2π) Δarg f around the closed circle, i.e. t from −∞ to +∞ and back through z = 1.
pub fn winding_number(samples: &[C64], grid: &CayleyGrid) -> Result<f64> {
    let first = grid.line_order().next().map(|j| samples[j]);
    accumulate(grid.line_order().map(|j| samples[j]).chain(first))
}

/// (1/2π) Δarg along t from −∞ to +∞ with explicit endpoint values.
pub fn open_winding(samples: &[C64], grid: &CayleyGrid, at_minus_inf: C64, at_plus_inf: C64) -> Result<f64> {
    accumulate(
        std::iter::once(at_minus_inf)
            .chain(grid.line_order().map(|j| samples[j]))
            .chain(std::iter::once(at_plus_inf)),
    )
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct TotalIndex {
    pub kappa_total: i64,
    pub winding: f64,
    pub sum_re_zeta: f64,
    /// |winding − Σ Re ζ − κ|.
    pub slack: f64,
}

/// κ(ω) = round((1/2π) Δarg det A₀ − Σ Re ζ_k).
pub fn total_index(
    sym: &HomogeneousSymbol,
    omega: &[f64],
    jd: &JordanData,
    grid: &CayleyGrid,
    tol: &Tolerances,
) -> Result<TotalIndex> {
    let dets: Vec<C64> = grid
        .t()
        .iter()
        .map(|&t| Ok(det(&sym.eval_slice(omega, t)?)))
        .collect::<Result<_>>()?;
    let (ep, em) = sym.limits_epm(tol)?;
    let winding = open_winding(&dets, grid, det(&em), det(&ep))?;
    let sum_re_zeta: f64 = jd.zeta.iter().map(|z| z.re).sum();
    let raw = winding - sum_re_zeta;
    let kappa_total = raw.round() as i64;
    let slack = (raw - kappa_total as f64).abs();
    if slack > tol.tol_int {
        return Err(Error::Integrality {
            winding,
            sum_re_zeta,
            slack,
        });
    }
    Ok(TotalIndex {
        kappa_total,
        winding,
        sum_re_zeta,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cayley_sample;
    use crate::linalg::I;

    #[test]
    fn winding_examples() {
        let g = CayleyGrid::new(10).unwrap();
        let z = cayley_sample(|t| (C64::new(t, 0.0) - I) / (C64::new(t, 0.0) + I), &g).unwrap();
        assert!((winding_number(&z, &g).unwrap() - 1.0).abs() < 1e-12);
        let c = vec![C64::new(2.0, -1.0); g.len()];
        assert_eq!(winding_number(&c, &g).unwrap(), 0.0);
        let r = cayley_sample(|t| C64::new((t * t + 1.0) / (t * t + 4.0), 0.0), &g).unwrap();
        assert!(winding_number(&r, &g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn under_resolution_detected() {
        let g = CayleyGrid::new(4).unwrap();
        let z = g.z().iter().map(|z| z.powi(7)).collect::<Vec<_>>();
        assert!(matches!(winding_number(&z, &g), Err(Error::UnderResolved(_))));
    }
}
