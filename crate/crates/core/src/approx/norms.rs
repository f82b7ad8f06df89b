//! The weighted norm ‖g‖_* = Σ_{0≤j≤k≤r} ‖x^k D^j g‖_{L¹} and the W^{r,1} comparison.

use serde::Serialize;

use super::profile::SmoothProfile;

const NORM_STEP: f64 = 1e-3;

fn integrate<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> f64 {
    let n = (((hi - lo) / NORM_STEP).ceil() as usize).max(2);
    let n = n + n % 2;
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// [‖x^k D^j g‖_{L¹}] indexed by (k, j) with j ≤ k ≤ r.
fn weighted_moments(g: &dyn SmoothProfile, r: usize) -> Vec<Vec<f64>> {
    let Some((lo, hi)) = g.support() else {
        return (0..=r).map(|k| vec![0.0; k + 1]).collect();
    };
    (0..=r)
        .map(|k| {
            (0..=k)
                .map(|j| integrate(lo, hi, |x| x.abs().powi(k as i32) * g.derivatives(x, j)[j].abs()))
                .collect()
        })
        .collect()
}

/// ‖g‖_* with unit constant.
pub fn star_norm(g: &dyn SmoothProfile, r: usize) -> f64 {
    weighted_moments(g, r).iter().flatten().sum()
}

/// ‖g‖_{W^{r,1}} = Σ_{j≤r} ‖D^j g‖_{L¹}.
pub fn sobolev_norm(g: &dyn SmoothProfile, r: usize) -> f64 {
    let Some((lo, hi)) = g.support() else {
        return 0.0;
    };
    (0..=r)
        .map(|j| integrate(lo, hi, |x| g.derivatives(x, j)[j].abs()))
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub r: usize,
    pub star: f64,
    pub sobolev: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

/// (ε/2)^r‖H‖_{W^{r,1}} ≤ ‖H‖_* ≤ (r+1)(R+1)^r‖H‖_{W^{r,1}} for H supported in ε/2 ≤ |x| ≤ R+1.
pub fn sandwich_check(h: &dyn SmoothProfile, r: usize, eps: f64, big_r: f64) -> SandwichReport {
    let star = star_norm(h, r);
    let sobolev = sobolev_norm(h, r);
    let lower = (eps / 2.0).powi(r as i32) * sobolev;
    let upper = (r + 1) as f64 * (big_r + 1.0).powi(r as i32) * sobolev;
    let slack = 1e-9 * sobolev.max(1e-300);
    SandwichReport {
        r,
        star,
        sobolev,
        lower,
        upper,
        holds: lower <= star + slack && star <= upper + slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::profile::{Bump, Zero};

    #[test]
    fn zero_norms() {
        assert_eq!(star_norm(&Zero, 2), 0.0);
        assert_eq!(sobolev_norm(&Zero, 2), 0.0);
    }

    #[test]
    fn r_zero_star_equals_l1() {
        let b = Bump { a: 1.0, b: 3.0 };
        assert!((star_norm(&b, 0) - sobolev_norm(&b, 0)).abs() < 1e-14);
    }

    #[test]
    fn bump_sandwich() {
        let b = Bump { a: 0.5, b: 3.0 };
        let rep = sandwich_check(&b, 2, 1.0, 2.0);
        assert!(rep.holds, "{rep:?}");
        assert!(rep.lower < rep.star && rep.star < rep.upper);
    }
}
