//! Taylor jets of the assembled factors and the derivative estimate sums.

use std::f64::consts::PI;

use serde::Serialize;

use crate::fit::two_sided_slope;
use crate::grid::CayleyGrid;
use crate::jordan::JordanData;
use crate::linalg::{block_diag, diag, CMat, C64, I};
use crate::wiener::{MatrixCircle, Side};

/// Truncated Taylor expansion Σ_q c_q h^q of a matrix function at a point.
pub type MatJet = Vec<CMat>;

pub fn jet_mul(a: &MatJet, b: &MatJet) -> MatJet {
    let r = a.len().min(b.len());
    (0..r)
        .map(|q| {
            (0..=q).fold(CMat::zeros(a[0].nrows(), b[0].ncols()), |acc, i| {
                acc + &a[i] * &b[q - i]
            })
        })
        .collect()
}

/// Jet of the inverse; `None` when the value is singular.
pub fn jet_inv(a: &MatJet) -> Option<MatJet> {
    let a0_inv = a[0].clone().try_inverse()?;
    let mut out: MatJet = vec![a0_inv.clone()];
    for q in 1..a.len() {
        let s = (1..=q).fold(CMat::zeros(a[0].nrows(), a[0].ncols()), |acc, i| {
            acc + &a[i] * &out[q - i]
        });
        out.push(-&a0_inv * s);
    }
    Some(out)
}

fn scalar_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    (0..a.len()).map(|q| (0..=q).map(|i| a[i] * b[q - i]).sum()).collect()
}

fn shifted(t: f64, side: Side) -> C64 {
    match side {
        Side::Plus => C64::new(t, 1.0),
        Side::Minus => C64::new(t, -1.0),
    }
}

/// Jet of α±(t) = Log(t ± i)/(2πi).
pub fn alpha_jet(t: f64, side: Side, r: usize) -> Vec<C64> {
    let s = shifted(t, side);
    let k = 1.0 / (2.0 * PI * I);
    (0..=r)
        .map(|q| {
            if q == 0 {
                s.ln() * k
            } else {
                let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
                k * sign / (q as f64 * s.powi(q as i32))
            }
        })
        .collect()
}

/// Jet of (t ± i)^c with the principal branch.
pub fn power_jet(t: f64, side: Side, c: C64, r: usize) -> Vec<C64> {
    let s = shifted(t, side);
    let base = (c * s.ln()).exp();
    let mut binom = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(r + 1);
    for q in 0..=r {
        if q > 0 {
            binom = binom * (c - (q - 1) as f64) / q as f64;
        }
        out.push(binom * base / s.powi(q as i32));
    }
    out
}

fn diag_jet(entries: &[Vec<C64>], r: usize) -> MatJet {
    (0..=r)
        .map(|q| diag(&entries.iter().map(|e| e[q]).collect::<Vec<_>>()))
        .collect()
}

/// Jet of diag((t ± i)^{s·ζ_q}).
pub fn zeta_power_jet(t: f64, zeta: &[C64], side: Side, s: f64, r: usize) -> MatJet {
    let e: Vec<Vec<C64>> = zeta.iter().map(|z| power_jet(t, side, z * s, r)).collect();
    diag_jet(&e, r)
}

/// Jet of diag[B^{m_k}(s·α±(t))].
pub fn b_jet(t: f64, jd: &JordanData, side: Side, s: f64, r: usize) -> MatJet {
    let a: Vec<C64> = alpha_jet(t, side, r).into_iter().map(|v| v * s).collect();
    let max_m = jd.eigs.iter().map(|b| b.size).max().unwrap_or(1);
    // powers[d] = α^d/d!
    let mut powers = vec![{
        let mut one = vec![C64::new(0.0, 0.0); r + 1];
        one[0] = C64::new(1.0, 0.0);
        one
    }];
    for d in 1..max_m {
        let next: Vec<C64> = scalar_mul(&powers[d - 1], &a)
            .into_iter()
            .map(|v| v / d as f64)
            .collect();
        powers.push(next);
    }
    (0..=r)
        .map(|q| {
            let blocks: Vec<CMat> = jd
                .eigs
                .iter()
                .map(|b| {
                    CMat::from_fn(b.size, b.size, |j, k| {
                        if j >= k {
                            powers[j - k][q]
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                })
                .collect();
            block_diag(&blocks)
        })
        .collect()
}

/// Samples of D_t^q F for q = 0..=r, θ order.
pub fn derivative_samples(f: &MatrixCircle, r: usize, len: usize) -> Vec<Vec<CMat>> {
    let mut cur = f.map(|e| e.chop(1e-15));
    let mut out = Vec::with_capacity(r + 1);
    for q in 0..=r {
        if q > 0 {
            cur = cur.map(|e| e.d_t());
        }
        out.push(cur.samples(len));
    }
    out
}

/// Taylor jet at node j from derivative samples.
pub fn jet_from_derivatives(ds: &[Vec<CMat>], j: usize) -> MatJet {
    let mut fact = 1.0;
    ds.iter()
        .enumerate()
        .map(|(q, d)| {
            if q > 0 {
                fact *= q as f64;
            }
            &d[j] / C64::new(fact, 0.0)
        })
        .collect()
}

/// Jets of A₁± and A₂± at one node.
pub struct NodeJets {
    pub a1: MatJet,
    pub a2: MatJet,
}

/// A₁⁺ = Z₊M₊Z₊⁻¹, A₁⁻ = Z₋M₋⁻¹Z₋⁻¹ and A₂± = B±⁻¹A₁±B±, with Z± = diag((t ± i)^ζ).
pub fn node_jets(m_jet: &MatJet, t: f64, jd: &JordanData, side: Side) -> Option<NodeJets> {
    let r = m_jet.len() - 1;
    let m = match side {
        Side::Plus => m_jet.clone(),
        Side::Minus => jet_inv(m_jet)?,
    };
    let z = zeta_power_jet(t, &jd.zeta, side, 1.0, r);
    let z_inv = zeta_power_jet(t, &jd.zeta, side, -1.0, r);
    let a1 = jet_mul(&jet_mul(&z, &m), &z_inv);
    let b = b_jet(t, jd, side, 1.0, r);
    let b_inv = b_jet(t, jd, side, -1.0, r);
    let a2 = jet_mul(&jet_mul(&b_inv, &a1), &b);
    Some(NodeJets { a1, a2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeRecord {
    pub side: Side,
    pub q: usize,
    /// Fitted exponent of max_{j,k} |D^q (A₁)_{jk}| (off-diagonal entries only for q = 0).
    pub slope: Option<f64>,
    /// −σ − q with σ = δ₀.
    pub target: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub r: usize,
    /// Σ_{q≤r} sup_t |t^q D^q (A₂⁺)_{jk}| per entry.
    pub sums_plus: Vec<Vec<f64>>,
    pub sums_minus: Vec<Vec<f64>>,
    /// sup_t |t^q D^q (A₂±)_{jk}| maximized over entries and both sides, per q.
    pub sup_by_order: Vec<f64>,
    pub slopes: Vec<SlopeRecord>,
    pub all_finite: bool,
}

impl EstimateReport {
    pub fn max_sum(&self) -> f64 {
        self.sums_plus
            .iter()
            .chain(&self.sums_minus)
            .flatten()
            .fold(0.0, |m, &v| m.max(v))
    }
}

/// Σ_{q≤r} sup |t^q D^q (A₂±)_{jk}| over the grid, and decay slopes of D^q A₁±.
pub fn verify_estimates(
    minus: &MatrixCircle,
    plus: &MatrixCircle,
    jd: &JordanData,
    grid: &CayleyGrid,
    r: usize,
) -> EstimateReport {
    let n = minus.dim();
    let len = grid.len();
    let outer = grid.outer_decade();
    let mut sums = [vec![vec![0.0; n]; n], vec![vec![0.0; n]; n]];
    let mut sup_by_order = vec![0.0f64; r + 1];
    let mut slopes = Vec::new();
    let mut all_finite = true;
    for (si, (side, f)) in [(Side::Plus, plus), (Side::Minus, minus)].into_iter().enumerate() {
        let ds = derivative_samples(f, r, len);
        let mut sup = vec![vec![vec![0.0f64; n]; n]; r + 1];
        let mut a1_dev = vec![vec![0.0f64; outer.len()]; r + 1];
        for j in 0..len {
            let t = grid.t()[j];
            let Some(nj) = node_jets(&jet_from_derivatives(&ds, j), t, jd, side) else {
                all_finite = false;
                continue;
            };
            let mut fact = 1.0;
            for q in 0..=r {
                if q > 0 {
                    fact *= q as f64;
                }
                let w = t.abs().powi(q as i32) * fact;
                for a in 0..n {
                    for b in 0..n {
                        let v = nj.a2[q][(a, b)].norm() * w;
                        if !v.is_finite() {
                            all_finite = false;
                        } else {
                            sup[q][a][b] = sup[q][a][b].max(v);
                        }
                    }
                }
            }
            if let Ok(pos) = outer.binary_search(&j) {
                let mut fact = 1.0;
                for q in 0..=r {
                    if q > 0 {
                        fact *= q as f64;
                    }
                    let mut m = 0.0f64;
                    for a in 0..n {
                        for b in 0..n {
                            if q > 0 || a != b {
                                m = m.max(nj.a1[q][(a, b)].norm() * fact);
                            }
                        }
                    }
                    a1_dev[q][pos] = m;
                }
            }
        }
        for q in 0..=r {
            for a in 0..n {
                for b in 0..n {
                    sums[si][a][b] += sup[q][a][b];
                    sup_by_order[q] = sup_by_order[q].max(sup[q][a][b]);
                }
            }
        }
        let ts: Vec<f64> = outer.iter().map(|&j| grid.t()[j]).collect();
        for (q, dev) in a1_dev.iter().enumerate() {
            let peak = dev.iter().fold(0.0f64, |m, &v| m.max(v));
            slopes.push(SlopeRecord {
                side,
                q,
                slope: if peak < 1e-13 {
                    None
                } else {
                    two_sided_slope(&ts, dev, 1e-300)
                },
                target: -jd.delta0 - q as f64,
            });
        }
    }
    let [sums_plus, sums_minus] = sums;
    EstimateReport {
        r,
        sums_plus,
        sums_minus,
        sup_by_order,
        slopes,
        all_finite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{bm_matrix, JordanBlock};
    use crate::linalg::{c, identity, max_abs};
    use crate::wiener::CircleFunction;

    fn finite_difference_check(jet: &[C64], f: impl Fn(f64) -> C64, t: f64) {
        let h = 1e-3;
        let d1 = (f(t + h) - f(t - h)) / (2.0 * h);
        let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
        assert!((jet[0] - f(t)).norm() < 1e-12);
        assert!((jet[1] - d1).norm() < 1e-6);
        assert!((jet[2] - d2 / 2.0).norm() < 1e-5);
    }

    #[test]
    fn scalar_jets_match_finite_differences() {
        let t = 0.7;
        let zeta = c(-0.3, 0.2);
        finite_difference_check(
            &power_jet(t, Side::Plus, zeta, 2),
            |s| (zeta * C64::new(s, 1.0).ln()).exp(),
            t,
        );
        finite_difference_check(
            &alpha_jet(t, Side::Minus, 2),
            |s| C64::new(s, -1.0).ln() / (2.0 * PI * I),
            t,
        );
    }

    #[test]
    fn inverse_jet() {
        let a: MatJet = vec![
            CMat::from_row_slice(2, 2, &[c(2., 0.), c(1., 0.), c(0., 1.), c(3., 0.)]),
            CMat::from_row_slice(2, 2, &[c(0.5, 0.), c(0., 0.), c(1., 0.), c(0., -1.)]),
            CMat::from_row_slice(2, 2, &[c(0., 0.), c(0.2, 0.), c(0., 0.), c(0.1, 0.)]),
        ];
        let prod = jet_mul(&a, &jet_inv(&a).unwrap());
        assert!(max_abs(&(&prod[0] - identity(2))) < 1e-14);
        assert!(max_abs(&prod[1]) < 1e-14 && max_abs(&prod[2]) < 1e-14);
    }

    #[test]
    fn b_jet_value_matches_matrix() {
        let jd = JordanData {
            eigs: vec![JordanBlock {
                lambda: c(1., 0.),
                size: 3,
            }],
            e: identity(3),
            h: identity(3),
            k: identity(3),
            c: identity(3),
            zeta: vec![c(0., 0.); 3],
            delta0: 1.0,
            similarity_residual: 0.0,
            warnings: vec![],
        };
        let t = -2.5;
        let j = b_jet(t, &jd, Side::Plus, 1.0, 2);
        let want = bm_matrix(3, crate::jordan::alpha(c(t, 0.), Side::Plus));
        assert!(max_abs(&(&j[0] - want)) < 1e-15);
    }

    #[test]
    fn constant_factors_give_sup_only() {
        let g = CayleyGrid::new(8).unwrap();
        let k = c(0.5, 0.0);
        let f = MatrixCircle::new(1, vec![CircleFunction::constant(c(1., 0.) + k)]);
        let jd = JordanData {
            eigs: vec![JordanBlock {
                lambda: c(1., 0.),
                size: 1,
            }],
            e: identity(1),
            h: identity(1),
            k: identity(1),
            c: identity(1),
            zeta: vec![c(0., 0.)],
            delta0: 1.0,
            similarity_residual: 0.0,
            warnings: vec![],
        };
        let rep = verify_estimates(&f, &f, &jd, &g, 2);
        assert!((rep.sums_plus[0][0] - 1.5).abs() < 1e-14);
        assert!((rep.sums_minus[0][0] - 1.0 / 1.5).abs() < 1e-14);
        assert!(rep.sup_by_order[1] < 1e-13 && rep.sup_by_order[2] < 1e-13);
    }
}
