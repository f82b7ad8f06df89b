//! Bounded search for partial indices through diagonal shifts diag(z^{s_j}).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::canonical::{section_condition, toeplitz_canonical_factorize, CanonicalReport};
use crate::grid::CayleyGrid;
use crate::linalg::{max_abs, CMat, C64};
use crate::tolerances::Tolerances;
use crate::wiener::{CircleFunction, MatrixCircle};

/// Section order of the screening pass.
const SCREEN_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftVariant {
    /// diag(z^{−s})B = G₋G₊ and B₋ = D_s G₋ D_s⁻¹.
    Left,
    /// B diag(z^{−s}) = H₋H₊ and B₊ = D_s⁻¹ H₊ D_s.
    Right,
}

#[derive(Clone, Debug)]
pub struct PartialFactorization {
    /// Partial indices sorted κ₁ ≥ … ≥ κ_N.
    pub kappa: Vec<i64>,
    /// Exponents of the middle factor in the order used by `minus` and `plus`.
    pub exponents: Vec<i64>,
    pub minus: MatrixCircle,
    pub plus: MatrixCircle,
    pub variant: ShiftVariant,
    pub trials: usize,
    pub report: CanonicalReport,
}

fn shift(f: &CircleFunction, d: i64) -> CircleFunction {
    CircleFunction::new(f.lo() + d, f.coeffs().to_vec())
}

/// Entry (j,k) multiplied by z^{row[j] + col[k]}.
fn shift_entries(b: &MatrixCircle, row: &[i64], col: &[i64]) -> MatrixCircle {
    let n = b.dim();
    MatrixCircle::new(
        n,
        (0..n * n)
            .map(|e| shift(b.entry(e / n, e % n), row[e / n] + col[e % n]))
            .collect(),
    )
}

/// Integer vectors with entries in [−k_max, k_max] summing to `total`, most balanced first.
pub fn candidate_shifts(n: usize, total: i64, k_max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(pos: usize, rest: i64, k_max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = cur.len();
        if pos + 1 == n {
            if rest.abs() <= k_max {
                cur[pos] = rest;
                out.push(cur.clone());
            }
            return;
        }
        let left = (n - pos - 1) as i64;
        for v in -k_max..=k_max {
            let r = rest - v;
            if r.abs() <= left * k_max {
                cur[pos] = v;
                rec(pos + 1, r, k_max, cur, out);
            }
        }
    }
    if n > 0 {
        rec(0, total, k_max, &mut cur, &mut out);
    }
    let mean = total as f64 / n.max(1) as f64;
    let spread = |s: &Vec<i64>| s.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>();
    out.sort_by(|a, b| spread(a).total_cmp(&spread(b)).then_with(|| b.cmp(a)));
    out
}

fn middle_samples(grid: &CayleyGrid, s: &[i64]) -> Vec<Vec<C64>> {
    grid.z()
        .iter()
        .map(|z| s.iter().map(|&k| z.powi(k as i32)).collect())
        .collect()
}

/// max_j |B − B₋ diag(z^s) B₊| over grid nodes and entries.
pub fn shifted_residual(
    b: &MatrixCircle,
    minus: &MatrixCircle,
    plus: &MatrixCircle,
    s: &[i64],
    grid: &CayleyGrid,
) -> f64 {
    let len = grid.len();
    let (bs, ms, ps) = (b.samples(len), minus.samples(len), plus.samples(len));
    let mid = middle_samples(grid, s);
    (0..len)
        .map(|j| {
            let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(mid[j].clone()));
            max_abs(&(&bs[j] - &ms[j] * d * &ps[j]))
        })
        .fold(0.0, f64::max)
}

/// Orthonormal null-space basis of a (possibly wide) constraint matrix.
fn constraint_kernel(rows: &[Vec<C64>], n: usize, rel_tol: f64) -> CMat {
    if rows.is_empty() {
        return crate::linalg::identity(n);
    }
    let m = rows.len().max(n);
    let mut a = CMat::zeros(m, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let scale = crate::linalg::op_norm(&a).max(1.0);
    crate::linalg::null_space(&a, rel_tol * scale)
}

/// Vector of the kernel closest to e_k, or its column with the largest k-th component.
fn nearest_to_unit(kernel: &CMat, k: usize) -> Option<nalgebra::DVector<C64>> {
    if kernel.ncols() == 0 {
        return None;
    }
    let proj = kernel * kernel.row(k).adjoint();
    if proj.norm() > 1e-6 {
        return Some(proj);
    }
    (0..kernel.ncols())
        .max_by(|&a, &b| kernel[(k, a)].norm().total_cmp(&kernel[(k, b)].norm()))
        .map(|j| kernel.column(j).into_owned())
}

/// Kernel tolerance for the gauge constraints, relative to their norm.
const GAUGE_TOL: f64 = 1e-8;

/// Constant C with D_s G₋ C D_s⁻¹ minus-analytic: column k must annihilate the
/// coefficients of index p − (s_j − s_k), p = 1..=s_j − s_k, of every row j.
fn left_gauge(gm: &MatrixCircle, s: &[i64]) -> Option<CMat> {
    let n = gm.dim();
    let mut c = CMat::zeros(n, n);
    for k in 0..n {
        let mut rows = Vec::new();
        for j in 0..n {
            let d = s[j] - s[k];
            for p in 1..=d {
                rows.push((0..n).map(|l| gm.entry(j, l).coeff(p - d)).collect());
            }
        }
        let v = nearest_to_unit(&constraint_kernel(&rows, n, GAUGE_TOL), k)?;
        c.set_column(k, &v);
    }
    (crate::linalg::rcond(&c) > 1e-10).then_some(c)
}

/// Constant R with D_s⁻¹ R H₊ D_s plus-analytic: row j must annihilate the
/// coefficients of index p = 0..s_j − s_k of every column k.
fn right_gauge(hp: &MatrixCircle, s: &[i64]) -> Option<CMat> {
    let n = hp.dim();
    let mut r = CMat::zeros(n, n);
    for j in 0..n {
        let mut rows = Vec::new();
        for k in 0..n {
            let d = s[j] - s[k];
            for p in 0..d {
                rows.push((0..n).map(|l| hp.entry(l, k).coeff(p)).collect());
            }
        }
        let v = nearest_to_unit(&constraint_kernel(&rows, n, GAUGE_TOL), j)?;
        r.set_row(j, &v.transpose());
    }
    (crate::linalg::rcond(&r) > 1e-10).then_some(r)
}

fn try_shift(
    b: &MatrixCircle,
    s: &[i64],
    variant: ShiftVariant,
    order: usize,
    grid: &CayleyGrid,
    tol: &Tolerances,
    best_cond: &mut f64,
) -> Option<PartialFactorization> {
    let n = b.dim();
    let neg: Vec<i64> = s.iter().map(|v| -v).collect();
    let zero = vec![0i64; n];
    let g = match variant {
        ShiftVariant::Left => shift_entries(b, &neg, &zero),
        ShiftVariant::Right => shift_entries(b, &zero, &neg),
    };
    let cond = section_condition(&g, SCREEN_ORDER.min(order)).ok()?;
    *best_cond = best_cond.min(cond);
    if cond > tol.cond_max {
        return None;
    }
    let f = toeplitz_canonical_factorize(&g, order, grid, tol).ok()?;
    let balanced = s.iter().all(|&v| v == s[0]);
    let (minus, plus, extra) = match variant {
        ShiftVariant::Left => {
            let (gm, gp) = if balanced {
                (f.minus, f.plus)
            } else {
                let c = left_gauge(&f.minus, s)?;
                let c_inv = crate::linalg::inverse(&c)?;
                (f.minus.mul_const_right(&c), f.plus.mul_const_left(&c_inv))
            };
            let m = shift_entries(&gm, s, &neg);
            let wrong = m.mass_where(|k| k > 0);
            (m.map(|e| e.restrict(e.lo().min(0), 0)), gp, wrong)
        }
        ShiftVariant::Right => {
            let (hm, hp) = if balanced {
                (f.minus, f.plus)
            } else {
                let r = right_gauge(&f.plus, s)?;
                let r_inv = crate::linalg::inverse(&r)?;
                (f.minus.mul_const_right(&r_inv), f.plus.mul_const_left(&r))
            };
            let p = shift_entries(&hp, &neg, s);
            let wrong = p.mass_where(|k| k < 0);
            (hm, p.map(|e| e.restrict(0, e.hi().max(0))), wrong)
        }
    };
    let mut report = f.report;
    match variant {
        ShiftVariant::Left => report.wrong_sign_minus += extra,
        ShiftVariant::Right => report.wrong_sign_plus += extra,
    }
    report.residual = shifted_residual(b, &minus, &plus, s, grid);
    if report.defect() > tol.tol_fact {
        return None;
    }
    let mut kappa = s.to_vec();
    kappa.sort_by(|a, b| b.cmp(a));
    Some(PartialFactorization {
        kappa,
        exponents: s.to_vec(),
        minus,
        plus,
        variant,
        trials: 0,
        report,
    })
}

/// B = B₋ diag(z^{s}) B₊ with Σ s_j = κ_total, found by trying the balanced shifts first.
pub fn partial_index_resolve(
    b: &MatrixCircle,
    kappa_total: i64,
    order: usize,
    grid: &CayleyGrid,
    tol: &Tolerances,
) -> Result<PartialFactorization> {
    let k_max = tol.k_max;
    let mut best_cond = f64::INFINITY;
    let mut trials = 0;
    for s in candidate_shifts(b.dim(), kappa_total, k_max) {
        for variant in [ShiftVariant::Left, ShiftVariant::Right] {
            trials += 1;
            if let Some(mut pf) = try_shift(b, &s, variant, order, grid, tol, &mut best_cond) {
                pf.trials = trials;
                return Ok(pf);
            }
            if s.iter().all(|&v| v == s[0]) {
                // scalar shifts commute, the right variant repeats the left one
                break;
            }
        }
    }
    Err(Error::UnresolvedIndices {
        kappa_total,
        k_max,
        best_cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cayley_sample;
    use crate::linalg::{c, I};

    #[test]
    fn candidate_order() {
        let c0 = candidate_shifts(2, 0, 3);
        assert_eq!(c0[0], vec![0, 0]);
        assert_eq!(c0[1], vec![1, -1]);
        assert_eq!(c0[2], vec![-1, 1]);
        let c1 = candidate_shifts(3, 1, 2);
        assert_eq!(c1[0], vec![1, 0, 0]);
        assert!(c1.iter().all(|s| s.iter().sum::<i64>() == 1));
        assert!(candidate_shifts(2, 7, 3).is_empty());
    }

    #[test]
    fn scalar_index_equals_winding() {
        let g = CayleyGrid::new(10).unwrap();
        let s = cayley_sample(
            |t| {
                let tc = c(t, 0.0);
                (tc - I) / (tc + I) * (tc * tc + 1.0) / (tc * tc + 4.0)
            },
            &g,
        )
        .unwrap();
        let b = MatrixCircle::new(1, vec![CircleFunction::from_samples(&s)]);
        let pf = partial_index_resolve(&b, 1, 256, &g, &Tolerances::default()).unwrap();
        assert_eq!(pf.kappa, vec![1]);
        assert!(pf.report.defect() < 1e-10);
    }

    #[test]
    fn diagonal_indices_sorted() {
        let g = CayleyGrid::new(8).unwrap();
        let b = MatrixCircle::new(
            2,
            vec![
                CircleFunction::monomial(-1, c(1., 0.)),
                CircleFunction::zero(),
                CircleFunction::zero(),
                CircleFunction::monomial(1, c(1., 0.)),
            ],
        );
        let pf = partial_index_resolve(&b, 0, 64, &g, &Tolerances::default()).unwrap();
        assert_eq!(pf.kappa, vec![1, -1]);
        assert_eq!(pf.exponents, vec![-1, 1]);
        assert!(pf.report.residual < 1e-14);
    }

    #[test]
    fn exhausted_search_is_reported() {
        let g = CayleyGrid::new(8).unwrap();
        let b = MatrixCircle::new(1, vec![CircleFunction::monomial(5, c(1., 0.))]);
        let err = partial_index_resolve(&b, 5, 64, &g, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::UnresolvedIndices { kappa_total: 5, .. }));
    }
}
