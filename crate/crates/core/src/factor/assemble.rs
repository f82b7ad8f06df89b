//! Assembly of A±₁, A±₂ and the lower triangular middle factor d(ω, t).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::CayleyGrid;
use crate::jordan::{b_correction, bm_inverse_blocks, zeta_power, JordanData};
use crate::linalg::{det, inverse, CMat, C64};
use crate::symbol::HomogeneousSymbol;
use crate::wiener::{MatrixCircle, Side};

/// Log((t−i)/(t+i)) on the sheet with argument in (−2π, 0), cut at z = 1.
pub fn log_cayley(t: f64) -> C64 {
    C64::new(t, -1.0).ln() - C64::new(t, 1.0).ln()
}

/// diag(((t−i)/(t+i))^{κ_q + ζ_q}).
pub fn middle_diagonal(t: f64, kappa: &[i64], zeta: &[C64]) -> Vec<C64> {
    let l = log_cayley(t);
    kappa
        .iter()
        .zip(zeta)
        .map(|(&k, &z)| ((z + k as f64) * l).exp())
        .collect()
}

/// Factors of c·A₀ = h (A₂⁻)⁻¹ d A₂⁺ h⁻¹ sampled on the grid (θ order).
#[derive(Clone, Debug)]
pub struct Assembly {
    pub a1_minus: Vec<CMat>,
    pub a1_plus: Vec<CMat>,
    pub a2_minus: Vec<CMat>,
    pub a2_plus: Vec<CMat>,
    pub d_middle: Vec<CMat>,
    pub report: AssemblyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssemblyReport {
    /// max |c·A₀ − h(A₂⁻)⁻¹ d A₂⁺ h⁻¹| over grid and entries.
    pub residual: f64,
    pub worst_entry: (usize, usize),
    pub worst_t: f64,
    /// Largest strictly upper entry of d.
    pub d_upper_max: f64,
    /// max |d_qq − ((t−i)/(t+i))^{κ_q+ζ_q}|.
    pub d_diagonal_error: f64,
    /// max |det d − Π_q ((t−i)/(t+i))^{κ_q+ζ_q}|.
    pub det_identity_error: f64,
    /// max_{j≠k} |(A₁±)_{jk}| at the two outermost nodes.
    pub a1_offdiag_outer: f64,
}

/// Builds A±₁, A±₂ and d from A*₀ = M₋ diag(z^κ) M₊ and verifies the reconstruction.
#[allow(clippy::too_many_arguments)]
pub fn assemble_full(
    sym: &HomogeneousSymbol,
    omega: &[f64],
    jd: &JordanData,
    minus: &MatrixCircle,
    plus: &MatrixCircle,
    exponents: &[i64],
    grid: &CayleyGrid,
    tol_fact: f64,
) -> Result<Assembly> {
    let len = grid.len();
    let n = sym.dim();
    let ms = minus.samples(len);
    let ps = plus.samples(len);
    let h_inv = inverse(&jd.h).ok_or_else(|| Error::Jordan("singular h".into()))?;
    let mut out = Assembly {
        a1_minus: Vec::with_capacity(len),
        a1_plus: Vec::with_capacity(len),
        a2_minus: Vec::with_capacity(len),
        a2_plus: Vec::with_capacity(len),
        d_middle: Vec::with_capacity(len),
        report: AssemblyReport {
            residual: 0.0,
            worst_entry: (0, 0),
            worst_t: 0.0,
            d_upper_max: 0.0,
            d_diagonal_error: 0.0,
            det_identity_error: 0.0,
            a1_offdiag_outer: 0.0,
        },
    };
    let singular = |what: &str, t: f64| Error::Jordan(format!("{what} is singular at t = {t}"));
    for j in 0..len {
        let t = grid.t()[j];
        let tc = C64::new(t, 0.0);
        let zm = zeta_power(tc, &jd.zeta, Side::Minus, 1.0);
        let zm_inv = zeta_power(tc, &jd.zeta, Side::Minus, -1.0);
        let zp = zeta_power(tc, &jd.zeta, Side::Plus, 1.0);
        let zp_inv = zeta_power(tc, &jd.zeta, Side::Plus, -1.0);
        let m_inv = inverse(&ms[j]).ok_or_else(|| singular("minus factor", t))?;
        let a1m = &zm * m_inv * &zm_inv;
        let a1p = &zp * &ps[j] * &zp_inv;
        let bm = b_correction(t, &jd.eigs, Side::Minus);
        let bm_inv = bm_inverse_blocks(t, &jd.eigs, Side::Minus);
        let bp = b_correction(t, &jd.eigs, Side::Plus);
        let bp_inv = bm_inverse_blocks(t, &jd.eigs, Side::Plus);
        let a2m = &bm_inv * &a1m * &bm;
        let a2p = &bp_inv * &a1p * &bp;
        let mid = middle_diagonal(t, exponents, &jd.zeta);
        let d = &bm_inv * crate::linalg::diag(&mid) * &bp;
        let a2m_inv = inverse(&a2m).ok_or_else(|| singular("A2-", t))?;
        let recon = &jd.h * a2m_inv * &d * &a2p * &h_inv;
        let target = &jd.c * sym.eval_slice(omega, t)?;
        let rep = &mut out.report;
        for r in 0..n {
            for c in 0..n {
                let e = (recon[(r, c)] - target[(r, c)]).norm();
                if e > rep.residual || !e.is_finite() {
                    rep.residual = if e.is_finite() { e } else { f64::INFINITY };
                    rep.worst_entry = (r, c);
                    rep.worst_t = t;
                }
                if c > r {
                    rep.d_upper_max = rep.d_upper_max.max(d[(r, c)].norm());
                }
            }
            rep.d_diagonal_error = rep.d_diagonal_error.max((d[(r, r)] - mid[r]).norm());
        }
        let prod: C64 = mid.iter().product();
        rep.det_identity_error = rep.det_identity_error.max((det(&d) - prod).norm());
        out.a1_minus.push(a1m);
        out.a1_plus.push(a1p);
        out.a2_minus.push(a2m);
        out.a2_plus.push(a2p);
        out.d_middle.push(d);
    }
    // nodes next to z = 1, where |t| is largest
    let edges = [len / 2 - 1, len / 2];
    let offdiag = |m: &CMat| {
        let mut v = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    v = v.max(m[(r, c)].norm());
                }
            }
        }
        v
    };
    out.report.a1_offdiag_outer = edges
        .iter()
        .map(|&j| offdiag(&out.a1_minus[j]).max(offdiag(&out.a1_plus[j])))
        .fold(0.0, f64::max);
    if out.report.residual > tol_fact {
        let r = &out.report;
        return Err(Error::Assembly {
            residual: r.residual,
            tol: tol_fact,
            row: r.worst_entry.0,
            col: r.worst_entry.1,
            t: r.worst_t,
        });
    }
    Ok(out)
}

/// A(ξ) = (ξₙ − i|ξ′|)^{μ/2} c⁻¹ h (A₂⁻)⁻¹ d A₂⁺ h⁻¹ (ξₙ + i|ξ′|)^{μ/2}, evaluated from
/// the factor values at t = ξₙ/|ξ′|.
pub fn full_degree_form(
    xi: &[f64],
    mu: f64,
    jd: &JordanData,
    a2_minus: &CMat,
    d: &CMat,
    a2_plus: &CMat,
) -> Result<CMat> {
    let (last, head) = xi.split_last().ok_or_else(|| Error::Precondition("empty ξ".into()))?;
    let rho = head.iter().map(|x| x * x).sum::<f64>().sqrt();
    if rho == 0.0 {
        return Err(Error::Precondition("full-degree form needs ξ′ ≠ 0".into()));
    }
    let c_inv = inverse(&jd.c).ok_or_else(|| Error::Jordan("singular c".into()))?;
    let h_inv = inverse(&jd.h).ok_or_else(|| Error::Jordan("singular h".into()))?;
    let a2m_inv = inverse(a2_minus).ok_or_else(|| Error::Jordan("singular A2-".into()))?;
    let w = |s: f64| (C64::new(*last, s * rho).ln() * (0.5 * mu)).exp();
    Ok(c_inv * &jd.h * a2m_inv * d * a2_plus * h_inv * (w(-1.0) * w(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, I};

    #[test]
    fn log_cayley_sheet() {
        for t in [-1e6, -3.0, 0.0, 2.0, 1e6] {
            let l = log_cayley(t);
            assert!(l.im < 0.0 && l.im > -2.0 * std::f64::consts::PI);
            let z = (C64::new(t, 0.0) - I) / (C64::new(t, 0.0) + I);
            assert!((l.exp() - z).norm() < 1e-12);
        }
        // arg z → −2π as t → −∞ and → 0 as t → +∞
        assert!(log_cayley(-1e9).im < -std::f64::consts::TAU + 1e-6);
        assert!(log_cayley(1e9).im > -1e-8);
    }

    #[test]
    fn half_power_middle_factor() {
        let t = 0.0;
        let m = middle_diagonal(t, &[0], &[C64::new(-0.5, 0.0)]);
        // z = −1 at t = 0 with arg −π, so z^{−1/2} = e^{iπ/2}
        assert!((m[0] - I).norm() < 1e-15);
        assert!(max_abs(&crate::linalg::diag(&m)) > 0.0);
    }
}
