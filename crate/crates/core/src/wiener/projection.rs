//! Riesz projections, the splitting, the singular integral operator and the
//! commutator [tI, Π⁺].

use std::f64::consts::PI;

use serde::Serialize;

use super::circle::CircleFunction;
use crate::error::{Error, Result};
use crate::fit::two_sided_slope;
use crate::grid::CayleyGrid;
use crate::linalg::{C64, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Π⁺ keeps k ≥ 0 (constants ride with the plus side), Π⁻ keeps k ≤ −1.
pub fn riesz_project(f: &CircleFunction, side: Side) -> CircleFunction {
    match side {
        Side::Plus => f.restrict(0.max(f.lo()), f.hi()),
        Side::Minus => f.restrict(f.lo(), (-1).min(f.hi())),
    }
}

/// f = f₊ + f₋ with f₋ vanishing at z = ∞.
pub fn split(f: &CircleFunction) -> (CircleFunction, CircleFunction) {
    (riesz_project(f, Side::Plus), riesz_project(f, Side::Minus))
}

/// S = Π⁺ − Π⁻, so that Π± = ½(I ± S).
pub fn hilbert_transform(f: &CircleFunction) -> CircleFunction {
    let (p, m) = split(f);
    p.sub(&m)
}

/// Projection onto the plus side for functions vanishing at infinity on the line:
/// the circle projection minus its value at z = 1.
pub fn line_plus_projection(f: &CircleFunction) -> CircleFunction {
    let p = riesz_project(f, Side::Plus);
    let at_one = p.value_at_one();
    p.sub(&CircleFunction::constant(at_one))
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    /// Mean of [tI, Π⁺]f over the grid.
    pub value: C64,
    /// Largest deviation from the mean over the grid.
    pub spread: f64,
    /// Trapezoid quadrature of ∫f dt on the grid.
    pub integral: C64,
    /// −(2πi)⁻¹ ∫f, the value predicted by the Cauchy integral.
    pub predicted: C64,
    pub decay_slope: Option<f64>,
}

/// ∫f dt over the line as a trapezoid rule in θ (dt/dθ = 1/(1 − cos θ)).
pub fn line_integral(samples: &[C64], grid: &CayleyGrid) -> C64 {
    let w = 2.0 * PI / grid.len() as f64;
    samples
        .iter()
        .zip(grid.theta())
        .map(|(&f, &th)| f * (w / (1.0 - th.cos())))
        .sum()
}

/// Evaluates [tI, Π⁺]f = tΠ⁺f − Π⁺(tf) at every node.
pub fn commutator_check<F: Fn(f64) -> C64>(f: F, grid: &CayleyGrid) -> Result<CommutatorReport> {
    let fs: Vec<C64> = grid.t().iter().map(|&t| f(t)).collect();
    if fs.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Precondition("f is not finite on the grid".into()));
    }
    let outer = grid.outer_decade();
    let ts: Vec<f64> = outer.iter().map(|&j| grid.t()[j]).collect();
    let mags: Vec<f64> = outer.iter().map(|&j| fs[j].norm()).collect();
    let scale = fs.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let slope = two_sided_slope(&ts, &mags, 1e-14 * scale);
    let negligible = mags.iter().all(|&m| m <= 1e-14 * scale);
    if !negligible && slope.is_none_or(|s| s >= 0.0) {
        return Err(Error::Precondition(format!(
            "f does not decay at infinity (fitted slope {slope:?})"
        )));
    }
    let gs: Vec<C64> = fs.iter().zip(grid.t()).map(|(&v, &t)| v * t).collect();
    let pf = line_plus_projection(&CircleFunction::from_samples(&fs)).samples(grid.len());
    let pg = line_plus_projection(&CircleFunction::from_samples(&gs)).samples(grid.len());
    let comm: Vec<C64> = (0..grid.len()).map(|j| pf[j] * grid.t()[j] - pg[j]).collect();
    let value = comm.iter().sum::<C64>() / grid.len() as f64;
    let spread = comm.iter().fold(0.0f64, |m, c| m.max((c - value).norm()));
    let integral = line_integral(&fs, grid);
    Ok(CommutatorReport {
        value,
        spread,
        integral,
        predicted: -integral / (2.0 * PI * I),
        decay_slope: slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(lo: i64, v: &[f64]) -> CircleFunction {
        CircleFunction::new(lo, v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[test]
    fn projection_examples() {
        let f = cf(-1, &[1.0, 2.0, 3.0]);
        let m = riesz_project(&f, Side::Minus);
        assert_eq!(m, cf(-1, &[1.0]));
        assert_eq!(riesz_project(&f, Side::Plus), cf(0, &[2.0, 3.0]));
        let (p, m) = split(&cf(0, &[5.0]));
        assert_eq!(p, cf(0, &[5.0]));
        assert_eq!(m.l1_norm(), 0.0);
        let (p, m) = split(&cf(-2, &[1.0, 0.0, 1.0]));
        assert_eq!(p, cf(0, &[1.0]));
        assert_eq!(m, cf(-2, &[1.0]));
    }

    #[test]
    fn hilbert_signs() {
        let plus = cf(1, &[1.0, -2.0]);
        assert_eq!(hilbert_transform(&plus), plus);
        let minus = cf(-3, &[1.0, 0.5]);
        assert_eq!(hilbert_transform(&minus), minus.scale(C64::new(-1.0, 0.0)));
    }

    #[test]
    fn commutator_of_lorentzian() {
        let g = CayleyGrid::new(10).unwrap();
        let rep = commutator_check(|t| C64::new(1.0 / (t * t + 1.0), 0.0), &g).unwrap();
        assert!((rep.integral - C64::new(PI, 0.0)).norm() < 1e-12);
        assert!(rep.spread < 1e-10);
        assert!((rep.value - C64::new(0.0, 0.5)).norm() < 1e-10);
        assert!((rep.value - rep.predicted).norm() < 1e-10);
    }

    #[test]
    fn commutator_rejects_non_decaying() {
        let g = CayleyGrid::new(8).unwrap();
        assert!(commutator_check(|t| C64::new(t.atan(), 0.0), &g).is_err());
    }
}
