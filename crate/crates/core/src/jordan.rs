//! Jordan/K-form reduction of E = E₊⁻¹E₋, the exponents ζ, the B± corrections
//! and the normalized symbol A*₀.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::linalg::Schur;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::two_sided_slope;
use crate::grid::CayleyGrid;
use crate::linalg::{block_diag, diag, identity, inverse, null_space, op_norm, pow, rank, rows, CMat, C64, I};
use crate::symbol::HomogeneousSymbol;
use crate::tolerances::Tolerances;
use crate::wiener::Side;

/// B^m(z): lower triangular with entries z^{j−k}/(j−k)!.
pub fn bm_matrix(m: usize, z: C64) -> CMat {
    let mut out = CMat::zeros(m, m);
    for j in 0..m {
        let mut term = C64::new(1.0, 0.0);
        for d in 0..=j {
            out[(j, j - d)] = term;
            term = term * z / (d + 1) as f64;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JordanBlock {
    pub lambda: C64,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct JordanData {
    pub eigs: Vec<JordanBlock>,
    pub e: CMat,
    pub h: CMat,
    pub k: CMat,
    /// E₊⁻¹.
    pub c: CMat,
    pub zeta: Vec<C64>,
    pub delta0: f64,
    pub similarity_residual: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanExport {
    pub eigenvalues: Vec<C64>,
    pub block_sizes: Vec<usize>,
    pub h: Vec<Vec<C64>>,
    pub k: Vec<Vec<C64>>,
    pub c: Vec<Vec<C64>>,
    pub zeta: Vec<C64>,
    pub delta0: f64,
    pub similarity_residual: f64,
    pub warnings: Vec<String>,
}

impl JordanData {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn export(&self) -> JordanExport {
        JordanExport {
            eigenvalues: self.eigs.iter().map(|b| b.lambda).collect(),
            block_sizes: self.eigs.iter().map(|b| b.size).collect(),
            h: rows(&self.h),
            k: rows(&self.k),
            c: rows(&self.c),
            zeta: self.zeta.clone(),
            delta0: self.delta0,
            similarity_residual: self.similarity_residual,
            warnings: self.warnings.clone(),
        }
    }
}

/// K = diag[λ_k B^{m_k}(1)].
pub fn k_form(eigs: &[JordanBlock]) -> CMat {
    let blocks: Vec<CMat> = eigs
        .iter()
        .map(|b| bm_matrix(b.size, C64::new(1.0, 0.0)) * b.lambda)
        .collect();
    block_diag(&blocks)
}

fn eigenvalues(e: &CMat) -> Vec<C64> {
    let (_, t) = Schur::new(e.clone()).unpack();
    let mut v: Vec<C64> = (0..t.nrows()).map(|k| t[(k, k)]).collect();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Single-linkage clusters of a point set at distance `tau`.
fn single_linkage(vals: &[C64], tau: f64) -> Vec<Vec<C64>> {
    let n = vals.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (vals[i] - vals[j]).norm() <= tau {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    for l in label.iter_mut() {
                        if *l == a {
                            *l = b;
                        }
                    }
                }
            }
        }
    }
    let mut seen: Vec<usize> = Vec::new();
    let mut out: Vec<Vec<C64>> = Vec::new();
    for i in 0..n {
        match seen.iter().position(|&l| l == label[i]) {
            Some(p) => out[p].push(vals[i]),
            None => {
                seen.push(label[i]);
                out.push(vec![vals[i]]);
            }
        }
    }
    out
}

fn power_tol(tol: &Tolerances, e_norm: f64, q: usize) -> f64 {
    tol.rank_tol * e_norm.max(1.0).powi(q as i32)
}

/// dim ker (E − λI)^p equals p.
fn cluster_consistent(e: &CMat, lambda: C64, p: usize, tol: &Tolerances, e_norm: f64) -> bool {
    let n = e.nrows();
    let shifted = e - identity(n) * lambda;
    n - rank(&pow(&shifted, p), power_tol(tol, e_norm, p)) == p
}

/// Eigenvalue clusters (mean value, algebraic multiplicity).
fn clusters(e: &CMat, tol: &Tolerances, e_norm: f64) -> Result<Vec<(C64, usize)>> {
    let vals = eigenvalues(e);
    let mut out = Vec::new();
    for loose in single_linkage(&vals, tol.tau_merge * e_norm) {
        let mean = loose.iter().sum::<C64>() / loose.len() as f64;
        if cluster_consistent(e, mean, loose.len(), tol, e_norm) {
            out.push((mean, loose.len()));
            continue;
        }
        for strict in single_linkage(&loose, tol.tau_cluster * e_norm) {
            let mean = strict.iter().sum::<C64>() / strict.len() as f64;
            if !cluster_consistent(e, mean, strict.len(), tol, e_norm) {
                return Err(Error::Clustering(format!(
                    "eigenvalues near {mean} form a cluster of {} whose generalized eigenspace has a different dimension; \
                     supply the Jordan structure explicitly",
                    strict.len()
                )));
            }
            out.push((mean, strict.len()));
        }
    }
    Ok(out)
}

/// Residual of `v` after projecting out an orthonormal `basis` (twice, for stability).
fn residual_against(basis: &[nalgebra::DVector<C64>], v: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&r);
            r -= b * proj;
        }
    }
    r
}

/// Jordan chains of E for one eigenvalue: generators of maximal chains, longest first.
fn chains_for(
    e: &CMat,
    lambda: C64,
    p: usize,
    tol: &Tolerances,
    e_norm: f64,
) -> Result<Vec<Vec<nalgebra::DVector<C64>>>> {
    let n = e.nrows();
    let shifted = e - identity(n) * lambda;
    let q = null_space(&pow(&shifted, p), power_tol(tol, e_norm, p));
    if q.ncols() != p {
        return Err(Error::Jordan(format!(
            "generalized eigenspace of {lambda} has dimension {} instead of {p}",
            q.ncols()
        )));
    }
    let nq = q.adjoint() * &shifted * &q;
    // kernels of Nq^s, s = 0..=p
    let mut kernels: Vec<CMat> = vec![CMat::zeros(p, 0)];
    for s in 1..=p {
        kernels.push(null_space(&pow(&nq, s), power_tol(tol, e_norm, s)));
    }
    let dims: Vec<usize> = kernels.iter().map(|k| k.ncols()).collect();
    if dims[p] != p {
        return Err(Error::Jordan(format!("restriction at {lambda} is not nilpotent")));
    }
    let mut gens: Vec<(usize, nalgebra::DVector<C64>)> = Vec::new();
    for s in (1..=p).rev() {
        let above = if s < p { dims[s + 1] - dims[s] } else { 0 };
        let count = (dims[s] - dims[s - 1]).saturating_sub(above);
        if count == 0 {
            continue;
        }
        // span of K_{s−1} and level-s vectors of longer chains
        let mut span: Vec<nalgebra::DVector<C64>> = Vec::new();
        let push = |v: nalgebra::DVector<C64>, span: &mut Vec<nalgebra::DVector<C64>>| {
            let r = residual_against(span, &v);
            let nr = r.norm();
            if nr > 1e-10 {
                span.push(r / C64::new(nr, 0.0));
            }
        };
        for j in 0..kernels[s - 1].ncols() {
            push(kernels[s - 1].column(j).into_owned(), &mut span);
        }
        for (len, g) in &gens {
            let v = pow(&nq, len - s) * g;
            push(v, &mut span);
        }
        for _ in 0..count {
            let best = (0..kernels[s].ncols())
                .map(|j| residual_against(&span, &kernels[s].column(j).into_owned()))
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .ok_or_else(|| Error::Jordan("empty kernel".into()))?;
            let nb = best.norm();
            if nb < 1e-6 {
                return Err(Error::Jordan(format!("could not complete chains at {lambda}")));
            }
            let g = &best / C64::new(nb, 0.0);
            span.push(g.clone());
            gens.push((s, g));
        }
    }
    let mut out = Vec::new();
    for (len, g) in gens {
        let mut w = &q * g;
        let nw = w.norm();
        w /= C64::new(nw, 0.0);
        // deterministic phase: largest component real positive
        let (imax, _) = w.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, x)| if x.norm() > acc.1 + 1e-12 { (i, x.norm()) } else { acc },
        );
        let ph = w[imax] / w[imax].norm();
        w /= ph;
        let mut chain = vec![w.clone()];
        for _ in 1..len {
            let next = &shifted * chain.last().unwrap();
            chain.push(next);
        }
        out.push(chain);
    }
    Ok(out)
}

fn cmp_blocks(a: &JordanBlock, b: &JordanBlock, scale: f64) -> Ordering {
    let eps = 1e-10 * scale.max(1.0);
    let (ma, mb) = (a.lambda.norm(), b.lambda.norm());
    if (ma - mb).abs() > eps {
        return mb.total_cmp(&ma);
    }
    let (aa, ab) = (a.lambda.arg(), b.lambda.arg());
    if (aa - ab).abs() > 1e-10 {
        return aa.total_cmp(&ab);
    }
    b.size.cmp(&a.size)
}

/// Jordan structure of E with K = diag[λ_k B^{m_k}(1)] and E = hKh⁻¹.
///
/// `asserted` bypasses clustering with user-supplied (λ, algebraic multiplicity) pairs.
pub fn jordan_structure(e: &CMat, c: &CMat, tol: &Tolerances, asserted: Option<&[(C64, usize)]>) -> Result<JordanData> {
    let n = e.nrows();
    let e_norm = op_norm(e);
    if inverse(e).is_none() || e_norm == 0.0 {
        return Err(Error::Ellipticity {
            min_det: 0.0,
            floor: tol.ell_floor,
            t: f64::INFINITY,
        });
    }
    let groups = match asserted {
        Some(a) => a.to_vec(),
        None => clusters(e, tol, e_norm)?,
    };
    if groups.iter().map(|g| g.1).sum::<usize>() != n {
        return Err(Error::Jordan("multiplicities do not sum to N".into()));
    }
    let mut blocks: Vec<(JordanBlock, Vec<nalgebra::DVector<C64>>)> = Vec::new();
    for (lambda, p) in groups {
        for chain in chains_for(e, lambda, p, tol, e_norm)? {
            blocks.push((
                JordanBlock {
                    lambda,
                    size: chain.len(),
                },
                chain,
            ));
        }
    }
    blocks.sort_by(|a, b| cmp_blocks(&a.0, &b.0, e_norm));
    let eigs: Vec<JordanBlock> = blocks.iter().map(|b| b.0).collect();
    let k = k_form(&eigs);
    let mut w = CMat::zeros(n, n);
    let mut u = CMat::zeros(n, n);
    let mut col = 0;
    for (blk, chain) in &blocks {
        let mut v = nalgebra::DVector::<C64>::zeros(n);
        v[col] = C64::new(1.0, 0.0);
        let kl = &k - identity(n) * blk.lambda;
        for wj in chain {
            w.set_column(col, wj);
            u.set_column(col, &v);
            v = &kl * v;
            col += 1;
        }
    }
    let u_inv = inverse(&u).ok_or_else(|| Error::Jordan("singular K-chain matrix".into()))?;
    let h = w * u_inv;
    let h_inv = inverse(&h).ok_or_else(|| Error::Jordan("singular similarity h".into()))?;
    let similarity_residual = op_norm(&(e - &h * &k * &h_inv)) / e_norm;
    let mut warnings = Vec::new();
    let (zeta, delta0) = zeta_vector_with(&eigs, tol.tau_cluster * e_norm, &mut warnings)?;
    Ok(JordanData {
        eigs,
        e: e.clone(),
        h,
        k,
        c: c.clone(),
        zeta,
        delta0,
        similarity_residual,
        warnings,
    })
}

/// E = E₊⁻¹E₋ and c = E₊⁻¹, then the Jordan structure of E.
pub fn reduce(ep: &CMat, em: &CMat, tol: &Tolerances, asserted: Option<&[(C64, usize)]>) -> Result<JordanData> {
    let c = inverse(ep).ok_or(Error::Ellipticity {
        min_det: 0.0,
        floor: tol.ell_floor,
        t: f64::INFINITY,
    })?;
    let e = &c * em;
    let jd = jordan_structure(&e, &c, tol, asserted)?;
    if jd.similarity_residual > tol.tol_sim {
        return Err(Error::Jordan(format!(
            "similarity residual {:.3e} exceeds {:.1e}",
            jd.similarity_residual, tol.tol_sim
        )));
    }
    Ok(jd)
}

/// ζ_q = −Log λ/(2πi) per block, expanded over each block's index range, and δ₀.
pub fn zeta_vector(eigs: &[JordanBlock]) -> Result<(Vec<C64>, f64)> {
    zeta_vector_with(eigs, 0.0, &mut Vec::new())
}

fn zeta_vector_with(eigs: &[JordanBlock], branch_tau: f64, warnings: &mut Vec<String>) -> Result<(Vec<C64>, f64)> {
    let mut zeta = Vec::new();
    for b in eigs {
        let l = b.lambda;
        if l.norm() == 0.0 {
            return Err(Error::Ellipticity {
                min_det: 0.0,
                floor: 0.0,
                t: f64::INFINITY,
            });
        }
        let mut arg = l.arg();
        if l.re < 0.0 && l.im != 0.0 && l.im.abs() <= branch_tau {
            warnings.push(format!(
                "eigenvalue {l} lies within {branch_tau:.1e} of the branch cut; taking arg = π"
            ));
            arg = PI;
        }
        let log = C64::new(l.norm().ln(), arg);
        let z = -log / (2.0 * PI * I);
        zeta.extend(std::iter::repeat_n(z, b.size));
    }
    let (lo, hi) = zeta.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
        (lo.min(z.re), hi.max(z.re))
    });
    let delta0 = if zeta.is_empty() { 1.0 } else { 1.0 - (hi - lo) };
    Ok((zeta, delta0))
}

/// α±(t) = Log(t ± i)/(2πi).
pub fn alpha(t: C64, side: Side) -> C64 {
    let s = match side {
        Side::Plus => t + I,
        Side::Minus => t - I,
    };
    s.ln() / (2.0 * PI * I)
}

/// B±(t) = diag[B^{m_k}(α±(t))].
pub fn b_correction(t: f64, eigs: &[JordanBlock], side: Side) -> CMat {
    let a = alpha(C64::new(t, 0.0), side);
    let blocks: Vec<CMat> = eigs.iter().map(|b| bm_matrix(b.size, a)).collect();
    block_diag(&blocks)
}

/// diag((t ± i)^{s·ζ_q}) with the principal logarithm.
pub fn zeta_power(t: C64, zeta: &[C64], side: Side, s: f64) -> CMat {
    let base = match side {
        Side::Plus => t + I,
        Side::Minus => t - I,
    };
    let l = base.ln();
    diag(&zeta.iter().map(|z| (z * l * s).exp()).collect::<Vec<_>>())
}

#[derive(Clone, Debug)]
pub struct AStar {
    /// A*₀ at every grid node, θ order.
    pub samples: Vec<CMat>,
    /// Extrapolated limit as z → 1 from θ > 0 (t → −∞).
    pub limit_minus_inf: CMat,
    /// Extrapolated limit as z → 1 from θ < 0 (t → +∞).
    pub limit_plus_inf: CMat,
    pub limit_error: f64,
    /// Fitted exponent of ‖A*₀ − I‖ on the outer decade; `None` when A*₀ ≡ I.
    pub decay_slope: Option<f64>,
    pub warnings: Vec<String>,
}

/// A*₀ at real t.
pub fn a_star_at(a0: &CMat, t: f64, jd: &JordanData, h_inv: &CMat) -> CMat {
    let tc = C64::new(t, 0.0);
    let bm = b_correction(t, &jd.eigs, Side::Minus);
    let bp = bm_inverse_blocks(t, &jd.eigs, Side::Plus);
    zeta_power(tc, &jd.zeta, Side::Minus, -1.0)
        * bm
        * h_inv
        * &jd.c
        * a0
        * &jd.h
        * bp
        * zeta_power(tc, &jd.zeta, Side::Plus, 1.0)
}

/// B±(t)⁻¹ = diag[B^{m_k}(−α±(t))].
pub fn bm_inverse_blocks(t: f64, eigs: &[JordanBlock], side: Side) -> CMat {
    let a = -alpha(C64::new(t, 0.0), side);
    let blocks: Vec<CMat> = eigs.iter().map(|b| bm_matrix(b.size, a)).collect();
    block_diag(&blocks)
}

/// Neville extrapolation of (x_j, y_j) to x = 0.
fn neville_at_zero(xs: &[f64], ys: &[CMat]) -> CMat {
    let mut p: Vec<CMat> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xa, xb) = (xs[i], xs[i + level]);
            p[i] = (&p[i] * C64::new(-xb, 0.0) + &p[i + 1] * C64::new(xa, 0.0)) / C64::new(xa - xb, 0.0);
        }
    }
    p[0].clone()
}

/// Samples A*₀ on the grid, checks its limits at z → 1 and measures its decay.
pub fn build_a_star(
    sym: &HomogeneousSymbol,
    omega: &[f64],
    jd: &JordanData,
    grid: &CayleyGrid,
    tol: &Tolerances,
) -> Result<AStar> {
    let n = sym.dim();
    let h_inv = inverse(&jd.h).ok_or_else(|| Error::Jordan("singular h".into()))?;
    let samples: Vec<CMat> = grid
        .t()
        .iter()
        .map(|&t| Ok(a_star_at(&sym.eval_slice(omega, t)?, t, jd, &h_inv)))
        .collect::<Result<_>>()?;
    let id = identity(n);
    let len = grid.len();
    let half = len / 2;
    let npts = 6.min(half);
    // θ > 0 side: indices half, half+1, ...; θ < 0 side: half−1, half−2, ...
    let exponent = jd.delta0.clamp(1e-3, 1.0);
    let side_limit = |idx: Vec<usize>| {
        let xs: Vec<f64> = idx.iter().map(|&j| grid.theta()[j].abs().powf(exponent)).collect();
        let ys: Vec<CMat> = idx.iter().map(|&j| samples[j].clone()).collect();
        neville_at_zero(&xs, &ys)
    };
    let limit_minus_inf = side_limit((half..half + npts).collect());
    let limit_plus_inf = side_limit((half - npts..half).rev().collect());
    let limit_error =
        crate::linalg::max_abs(&(&limit_minus_inf - &id)).max(crate::linalg::max_abs(&(&limit_plus_inf - &id)));
    let edge = crate::linalg::max_abs(&(&samples[half] - &id)).max(crate::linalg::max_abs(&(&samples[half - 1] - &id)));
    let smooth = jd.delta0 >= 1.0 - 1e-12;
    let allowed = if smooth {
        tol.tol_limit
    } else {
        tol.tol_limit.max(0.1 * edge)
    };
    if limit_error > allowed {
        return Err(Error::Jordan(format!(
            "A*0 limits at t = ±inf deviate from I by {limit_error:.3e} (allowed {allowed:.1e})"
        )));
    }
    let outer = grid.outer_decade();
    let ts: Vec<f64> = outer.iter().map(|&j| grid.t()[j]).collect();
    let dev: Vec<f64> = outer.iter().map(|&j| op_norm(&(&samples[j] - &id))).collect();
    let peak = samples
        .iter()
        .fold(0.0f64, |m, s| m.max(crate::linalg::max_abs(&(s - &id))));
    let decay_slope = if peak < 1e-13 {
        None
    } else {
        two_sided_slope(&ts, &dev, 1e-14)
    };
    let mut warnings = Vec::new();
    if let Some(s) = decay_slope {
        if s > -jd.delta0 + tol.slope_tol {
            warnings.push(format!(
                "decay slope {s:.3} of |A*0 - I| is above -delta0 + slope_tol = {:.3}",
                -jd.delta0 + tol.slope_tol
            ));
        }
    }
    Ok(AStar {
        samples,
        limit_minus_inf,
        limit_plus_inf,
        limit_error,
        decay_slope,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs};

    #[test]
    fn bm_examples() {
        assert!(max_abs(&(bm_matrix(3, c(0.0, 0.0)) - identity(3))) == 0.0);
        let b = bm_matrix(3, c(2.0, 0.0));
        let want = CMat::from_row_slice(
            3,
            3,
            &[
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                c(2., 0.),
                c(1., 0.),
                c(0., 0.),
                c(2., 0.),
                c(2., 0.),
                c(1., 0.),
            ],
        );
        assert!(max_abs(&(b - want)) < 1e-15);
    }

    #[test]
    fn jordan_of_shear() {
        let e = CMat::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        let jd = jordan_structure(&e, &identity(2), &Tolerances::default(), None).unwrap();
        assert_eq!(
            jd.eigs,
            vec![JordanBlock {
                lambda: c(1.0, 0.0),
                size: 2
            }]
        );
        let swap = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert!(max_abs(&(&jd.h - swap)) < 1e-12);
        assert!(max_abs(&(&e * &jd.h - &jd.h * &jd.k)) < 1e-12);
        assert!(jd.similarity_residual < 1e-14);
    }

    #[test]
    fn jordan_of_diagonal() {
        let e = diag(&[c(2., 0.), c(3., 0.)]);
        let jd = jordan_structure(&e, &identity(2), &Tolerances::default(), None).unwrap();
        assert_eq!(jd.eigs.len(), 2);
        assert_eq!(jd.eigs[0].lambda, c(3.0, 0.0));
        assert!(jd.similarity_residual < 1e-14);
    }

    #[test]
    fn zeta_examples() {
        let (z, d) = zeta_vector(&[JordanBlock {
            lambda: c(1., 0.),
            size: 1,
        }])
        .unwrap();
        assert!(z[0].norm() < 1e-16 && (d - 1.0).abs() < 1e-16);
        let (z, d) = zeta_vector(&[
            JordanBlock {
                lambda: c(1., 0.),
                size: 1,
            },
            JordanBlock {
                lambda: c(-1., 0.),
                size: 1,
            },
        ])
        .unwrap();
        assert!((z[1] - c(-0.5, 0.0)).norm() < 1e-16);
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn near_branch_eigenvalue_warns() {
        let e = diag(&[c(-1.0, 1e-9)]);
        let jd = jordan_structure(&e, &identity(1), &Tolerances::default(), None).unwrap();
        assert!((jd.zeta[0].re + 0.5).abs() < 1e-15);
        assert_eq!(jd.warnings.len(), 1);
    }

    #[test]
    fn b_limits_for_single_block() {
        let eigs = [JordanBlock {
            lambda: c(1., 0.),
            size: 2,
        }];
        let t = 1e9;
        let r = b_correction(t, &eigs, Side::Minus) * bm_inverse_blocks(t, &eigs, Side::Plus);
        assert!(max_abs(&(r - identity(2))) < 1e-9);
        let t = -1e9;
        let r = b_correction(t, &eigs, Side::Plus) * bm_inverse_blocks(t, &eigs, Side::Minus);
        assert!(max_abs(&(r - bm_matrix(2, c(1., 0.)))) < 1e-9);
    }
}
