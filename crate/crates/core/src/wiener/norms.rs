//! W^r norms on the Cayley circle, the Laguerre route to the line norm, and the
//! decay-based membership test.

use std::f64::consts::PI;

use serde::Serialize;

use super::circle::CircleFunction;
use crate::error::{Error, Result};
use crate::fit::two_sided_slope;
use crate::grid::CayleyGrid;
use crate::linalg::C64;
use crate::tolerances::Tolerances;

/// Coefficients below this fraction of the largest are treated as noise before
/// differentiating.
const CHOP: f64 = 1e-14;
/// Longest Laguerre expansion for which the line norm is attempted.
const MAX_LAGUERRE_TERMS: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct WrDiagnostics {
    pub r: usize,
    /// ℓ¹ coefficient sums of (1 − it)^k D^k f on the circle, k = 0..=r.
    pub norms: Vec<f64>,
    pub total: f64,
    /// ‖g‖_{L¹} + |c| for (1 − it)^k D^k f = ĝ + c, when the Laguerre expansion is short enough.
    pub line_norms: Option<Vec<f64>>,
    /// Fitted exponents of |D^k f(t)| against |t| on the outer decade.
    pub decay_slopes: Vec<Option<f64>>,
    /// Relative ℓ¹ mass in the outer quarter of the coefficient band.
    pub tail: f64,
}

/// Relative ℓ¹ mass of coefficients with |k| ≥ 3L/8.
pub fn tail_mass(f: &CircleFunction, len: usize) -> f64 {
    let total = f.l1_norm();
    if total == 0.0 {
        return 0.0;
    }
    let edge = (3 * len / 8) as i64;
    f.mass_where(|k| k.abs() >= edge) / total
}

pub fn wr_norm<F: Fn(f64) -> C64>(f: F, r: usize, grid: &CayleyGrid, tol: &Tolerances) -> Result<WrDiagnostics> {
    let samples: Vec<C64> = grid.t().iter().map(|&t| f(t)).collect();
    if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Precondition("f is not finite on the grid".into()));
    }
    let fc = CircleFunction::from_samples(&samples);
    let tail = tail_mass(&fc, grid.len());
    if tail > tol.tol_tail {
        return Err(Error::UnderResolved(format!(
            "coefficient tail {tail:.3e} exceeds {:.1e}; use a larger grid",
            tol.tol_tail
        )));
    }
    let fc = fc.chop(CHOP);
    let weighted = fc.weighted_derivatives(r);
    let norms: Vec<f64> = weighted.iter().map(|g| g.l1_norm()).collect();
    let line_norms = weighted.iter().map(line_norm).collect::<Option<Vec<f64>>>();

    let outer = grid.outer_decade();
    let ts: Vec<f64> = outer.iter().map(|&j| grid.t()[j]).collect();
    let mut decay_slopes = Vec::with_capacity(r + 1);
    let mut d = fc.sub(&CircleFunction::constant(fc.value_at_one()));
    for _ in 0..=r {
        let s = d.samples(grid.len());
        let mags: Vec<f64> = outer.iter().map(|&j| s[j].norm()).collect();
        decay_slopes.push(two_sided_slope(&ts, &mags, 1e-13 * fc.l1_norm().max(1e-300)));
        d = d.d_t();
    }
    Ok(WrDiagnostics {
        r,
        total: norms.iter().sum(),
        norms,
        line_norms,
        decay_slopes,
        tail,
    })
}

/// ‖g‖_{L¹} + |c| for a circle function f = ĝ + c, through the Laguerre pairs
/// F[θ⁺e^{−x}L_j(2x)] = (i/√2π)(t−i)^j/(t+i)^{j+1} and their mirror images.
pub fn line_norm(f: &CircleFunction) -> Option<f64> {
    let c = f.value_at_one();
    let lo = f.lo().min(0);
    let hi = f.hi().max(0);
    // q_j = Σ_{k>j} a_k and its mirror q̃_j = Σ_{m>j} a_{−m}
    let mut q = Vec::new();
    let mut acc = C64::new(0.0, 0.0);
    for k in (1..=hi).rev() {
        acc += f.coeff(k);
        q.push(acc);
    }
    q.reverse();
    let mut qm = Vec::new();
    acc = C64::new(0.0, 0.0);
    for m in (1..=-lo).rev() {
        acc += f.coeff(-m);
        qm.push(acc);
    }
    qm.reverse();
    let plus = laguerre_l1(&q)?;
    let minus = laguerre_l1(&qm)?;
    Some(2.0 * (2.0 * PI).sqrt() * (plus + minus) + c.norm())
}

/// ∫₀^∞ |Σ_j q_j e^{−x} L_j(2x)| dx by composite Simpson.
fn laguerre_l1(q: &[C64]) -> Option<f64> {
    let scale = q.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if scale == 0.0 {
        return Some(0.0);
    }
    let terms = q.iter().rposition(|v| v.norm() > CHOP * scale).map_or(0, |p| p + 1);
    if terms > MAX_LAGUERRE_TERMS {
        return None;
    }
    let q = &q[..terms];
    let x_max = 4.0 * terms as f64 + 60.0;
    let h = (0.01f64).min(0.05 / (terms as f64 + 1.0));
    let mut steps = (x_max / h).ceil() as usize;
    steps += steps % 2;
    let h = x_max / steps as f64;
    let eval = |x: f64| {
        let e = (-x).exp();
        let mut sum = q[0] * e;
        let mut l_prev = 0.0;
        let mut l_cur = e;
        for (j, &qj) in q.iter().enumerate().skip(1) {
            let jm = (j - 1) as f64;
            let l_next = ((2.0 * jm + 1.0 - 2.0 * x) * l_cur - jm * l_prev) / (jm + 1.0);
            l_prev = l_cur;
            l_cur = l_next;
            sum += qj * l_cur;
        }
        sum.norm()
    };
    let mut total = eval(0.0) + eval(x_max);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        total += w * eval(k as f64 * h);
    }
    Some(total * h / 3.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub pass: bool,
    pub r: usize,
    pub delta: f64,
    /// Estimated limit subtracted before fitting k = 0.
    pub limit: C64,
    /// Fitted slope per derivative order k = 0..=r+1; `None` marks a remainder at noise level.
    pub slopes: Vec<Option<f64>>,
    /// Acceptance thresholds −k − δ + slope_tol.
    pub thresholds: Vec<f64>,
}

/// Derivatives D^k f(t), k = 0..=kmax, by the Cauchy integral on |ζ − t| = |t|/2.
/// Also returns the largest |f| met on the contour.
fn cauchy_derivatives<F: Fn(C64) -> C64>(f: &F, t: f64, kmax: usize) -> (Vec<C64>, f64) {
    const P: usize = 64;
    let rho = 0.5 * t.abs();
    let vals: Vec<(C64, C64)> = (0..P)
        .map(|p| {
            let w = C64::from_polar(1.0, 2.0 * PI * p as f64 / P as f64);
            (w, f(C64::new(t, 0.0) + w * rho))
        })
        .collect();
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.1.norm()));
    let mut out = Vec::with_capacity(kmax + 1);
    let mut fact = 1.0;
    for k in 0..=kmax {
        if k > 0 {
            fact *= k as f64;
        }
        let s: C64 = vals.iter().map(|(w, v)| v * w.powi(-(k as i32))).sum();
        out.push(s / P as f64 * fact / rho.powi(k as i32));
    }
    (out, peak)
}

/// Passes iff the fitted decay exponent of D^k f is at most −k − δ + slope_tol for k ≤ r+1.
pub fn wr_membership_test<F: Fn(C64) -> C64>(
    f: F,
    r: usize,
    delta: f64,
    grid: &CayleyGrid,
    tol: &Tolerances,
) -> Result<MembershipReport> {
    let outer = grid.outer_decade();
    let ts: Vec<f64> = outer.iter().map(|&j| grid.t()[j]).collect();
    let pos = ts.iter().filter(|&&t| t > 0.0).count();
    if pos < 4 || ts.len() - pos < 4 {
        return Err(Error::Precondition(
            "fewer than four outer-decade samples per side".into(),
        ));
    }
    let limit = (f(C64::new(1e12, 0.0)) + f(C64::new(-1e12, 0.0))) * 0.5;
    let g = |z: C64| f(z) - limit;
    let kmax = r + 1;
    let mut mags = vec![Vec::with_capacity(ts.len()); kmax + 1];
    let mut floors = vec![Vec::with_capacity(ts.len()); kmax + 1];
    for &t in &ts {
        let (d, peak) = cauchy_derivatives(&g, t, kmax);
        let rho = 0.5 * t.abs();
        let mut fact = 1.0;
        let noise = 1e-13 * (peak + limit.norm());
        for k in 0..=kmax {
            if k > 0 {
                fact *= k as f64;
            }
            mags[k].push(d[k].norm());
            floors[k].push(noise * fact / rho.powi(k as i32));
        }
    }
    let mut slopes = Vec::with_capacity(kmax + 1);
    let mut thresholds = Vec::with_capacity(kmax + 1);
    let mut pass = true;
    for k in 0..=kmax {
        let threshold = -(k as f64) - delta + tol.slope_tol;
        thresholds.push(threshold);
        let keep: Vec<usize> = (0..ts.len()).filter(|&j| mags[k][j] > floors[k][j]).collect();
        let kt: Vec<f64> = keep.iter().map(|&j| ts[j]).collect();
        let km: Vec<f64> = keep.iter().map(|&j| mags[k][j]).collect();
        let slope = two_sided_slope(&kt, &km, 0.0);
        if let Some(s) = slope {
            if s > threshold {
                pass = false;
            }
        }
        slopes.push(slope);
    }
    Ok(MembershipReport {
        pass,
        r,
        delta,
        limit,
        slopes,
        thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn constant_has_norm_modulus() {
        let g = CayleyGrid::new(8).unwrap();
        let d = wr_norm(|_| C64::new(3.0, 4.0), 2, &g, &Tolerances::default()).unwrap();
        assert!((d.norms[0] - 5.0).abs() < 1e-12);
        assert!(d.norms[1..].iter().all(|&x| x < 1e-12));
        assert!((d.line_norms.unwrap()[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn laguerre_line_norm_of_exponential_pair() {
        let g = CayleyGrid::new(8).unwrap();
        let k = I / (2.0 * PI).sqrt();
        let d = wr_norm(|t| k / (C64::new(t, 0.0) + I), 1, &g, &Tolerances::default()).unwrap();
        let line = d.line_norms.unwrap();
        assert!((line[0] - 1.0).abs() < 1e-6);
        assert!((line[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn membership_of_lorentzian() {
        let g = CayleyGrid::new(12).unwrap();
        let rep = wr_membership_test(|t| 1.0 / (t * t + 1.0), 1, 1.0, &g, &Tolerances::default()).unwrap();
        assert!(rep.pass);
        assert!((rep.slopes[0].unwrap() + 2.0).abs() < 0.01);
        assert!((rep.slopes[1].unwrap() + 3.0).abs() < 0.01);
    }

    #[test]
    fn membership_of_constant_passes() {
        let g = CayleyGrid::new(12).unwrap();
        let rep = wr_membership_test(|_| C64::new(1.0, 0.0), 1, 1.0, &g, &Tolerances::default()).unwrap();
        assert!(rep.pass);
    }
}
