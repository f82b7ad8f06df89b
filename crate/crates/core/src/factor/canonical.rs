//! Canonical (all indices zero) factorization B = B₋B₊ by block-Toeplitz finite sections.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::toeplitz::BlockToeplitz;
use crate::factor::winding::winding_number;
use crate::grid::CayleyGrid;
use crate::linalg::{det, identity, inverse, max_abs, CMat, C64};
use crate::tolerances::Tolerances;
use crate::wiener::{CircleFunction, MatrixCircle};

/// Largest column order of the section used for the condition number.
const COND_ORDER: usize = 96;

#[derive(Clone, Debug)]
pub struct CanonicalFactors {
    /// Minus-analytic factor (coefficients k ≤ 0), I at z = 1.
    pub minus: MatrixCircle,
    /// Plus-analytic factor (coefficients k ≥ 0), I at z = 1.
    pub plus: MatrixCircle,
    pub report: CanonicalReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalReport {
    pub order: usize,
    /// max over grid nodes and entries of |B − B₋B₊|.
    pub residual: f64,
    /// ℓ¹ mass of coefficients k > 0 discarded from the minus factor.
    pub wrong_sign_minus: f64,
    /// ℓ¹ mass of coefficients k < 0 discarded from the plus factor.
    pub wrong_sign_plus: f64,
    pub cond_estimate: f64,
    pub min_abs_det_plus: f64,
    pub min_abs_det_minus: f64,
    pub winding_plus: f64,
    pub winding_minus: f64,
}

impl CanonicalReport {
    /// Largest certificate defect: residual or wrong-sign mass.
    pub fn defect(&self) -> f64 {
        self.residual.max(self.wrong_sign_minus).max(self.wrong_sign_plus)
    }
}

fn det_samples(samples: &[CMat]) -> Vec<C64> {
    samples.iter().map(det).collect()
}

/// Block rows of the overdetermined section with `m` block columns.
fn section_rows(m: usize) -> usize {
    m + m / 2 + 1
}

/// Spectral condition number of the overdetermined section with min(order, 96) block
/// columns. Square sections can be singular for canonical symbols, the tall ones
/// track invertibility of the Toeplitz operator itself.
pub fn section_condition(b: &MatrixCircle, order: usize) -> Result<f64> {
    let m = order.min(COND_ORDER);
    let sv = crate::linalg::singular_values(&BlockToeplitz::from_symbol(b, section_rows(m)).dense_rect(m));
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        _ => Ok(f64::INFINITY),
    }
}

/// Coefficients of B₊⁻¹C: Levinson on the square section, or least squares on the
/// tall section when the recursion breaks down or `force_lsq` is set.
fn plus_inverse_coefficients(b: &MatrixCircle, order: usize, force_lsq: bool) -> Result<Vec<CMat>> {
    if !force_lsq {
        match BlockToeplitz::from_symbol(b, order).solve_unit() {
            Err(Error::Breakdown { .. }) => {}
            other => return other,
        }
    }
    BlockToeplitz::from_symbol(b, section_rows(order)).lsq_unit(order)
}

/// Factors B = B₋B₊ with both factors pinned to I at z = 1.
pub fn toeplitz_canonical_factorize(
    b: &MatrixCircle,
    order: usize,
    grid: &CayleyGrid,
    tol: &Tolerances,
) -> Result<CanonicalFactors> {
    let n = b.dim();
    let len = grid.len();
    let samples = b.samples(len);
    let w = winding_number(&det_samples(&samples), grid)?;
    if w.round() != 0.0 {
        return Err(Error::Precondition(format!("winding of det B is {w:.3}, expected 0")));
    }
    let at_one = b.value_at_one();
    let dev = max_abs(&(&at_one - identity(n)));
    if dev > tol.tol_limit {
        return Err(Error::Precondition(format!("B(1) deviates from I by {dev:.3e}")));
    }
    let cond = section_condition(b, order)?;
    if cond > tol.cond_max {
        return Err(Error::IllConditioned {
            cond,
            cond_max: tol.cond_max,
        });
    }
    let first = factor_from_section(b, &samples, order, grid, cond, false)?;
    if first.report.defect() <= tol.tol_fact {
        return Ok(first);
    }
    match factor_from_section(b, &samples, order, grid, cond, true) {
        Ok(second) if second.report.defect() < first.report.defect() => Ok(second),
        _ => Ok(first),
    }
}

fn factor_from_section(
    b: &MatrixCircle,
    samples: &[CMat],
    order: usize,
    grid: &CayleyGrid,
    cond: f64,
    force_lsq: bool,
) -> Result<CanonicalFactors> {
    let n = b.dim();
    let len = grid.len();
    let x = plus_inverse_coefficients(b, order, force_lsq)?;
    // X(z) = B₊(z)⁻¹ C, normalized to P(1) = I
    let p = MatrixCircle::new(
        n,
        (0..n * n)
            .map(|e| CircleFunction::new(0, x.iter().map(|blk| blk[(e / n, e % n)]).collect()))
            .collect(),
    );
    let p1_inv = inverse(&p.value_at_one()).ok_or(Error::Breakdown {
        step: order,
        cond: f64::INFINITY,
    })?;
    let p_samples: Vec<CMat> = p.samples(len).into_iter().map(|m| m * &p1_inv).collect();
    let plus_samples: Vec<CMat> = p_samples
        .iter()
        .map(|m| {
            inverse(m).ok_or(Error::Breakdown {
                step: order,
                cond: f64::INFINITY,
            })
        })
        .collect::<Result<_>>()?;
    let minus_samples: Vec<CMat> = samples.iter().zip(&p_samples).map(|(bb, pp)| bb * pp).collect();
    let plus_raw = MatrixCircle::from_samples(&plus_samples);
    let minus_raw = MatrixCircle::from_samples(&minus_samples);
    let wrong_sign_plus = plus_raw.mass_where(|k| k < 0);
    let wrong_sign_minus = minus_raw.mass_where(|k| k > 0);
    let plus = plus_raw.map(|f| f.restrict(0, f.hi().max(0)));
    let minus = minus_raw.map(|f| f.restrict(f.lo().min(0), 0));
    let plus_s = plus.samples(len);
    let minus_s = minus.samples(len);
    let residual = samples
        .iter()
        .zip(minus_s.iter().zip(&plus_s))
        .map(|(bb, (m, p))| max_abs(&(bb - m * p)))
        .fold(0.0, f64::max);
    let dp = det_samples(&plus_s);
    let dm = det_samples(&minus_s);
    let min_abs = |d: &[C64]| d.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let report = CanonicalReport {
        order,
        residual,
        wrong_sign_minus,
        wrong_sign_plus,
        cond_estimate: cond,
        min_abs_det_plus: min_abs(&dp),
        min_abs_det_minus: min_abs(&dm),
        winding_plus: winding_number(&dp, grid)?,
        winding_minus: winding_number(&dm, grid)?,
    };
    Ok(CanonicalFactors { minus, plus, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cayley_sample;
    use crate::linalg::{c, I};

    fn scalar(f: impl Fn(f64) -> C64, g: &CayleyGrid) -> MatrixCircle {
        MatrixCircle::new(1, vec![CircleFunction::from_samples(&cayley_sample(f, g).unwrap())])
    }

    #[test]
    fn identity_factors_trivially() {
        let g = CayleyGrid::new(8).unwrap();
        let b = MatrixCircle::new(
            2,
            vec![
                CircleFunction::constant(c(1., 0.)),
                CircleFunction::zero(),
                CircleFunction::zero(),
                CircleFunction::constant(c(1., 0.)),
            ],
        );
        let f = toeplitz_canonical_factorize(&b, 16, &g, &Tolerances::default()).unwrap();
        assert!(f.report.defect() < 1e-15);
        assert!(max_abs(&(f.plus.value_at_one() - identity(2))) < 1e-15);
    }

    #[test]
    fn rational_scalar_split() {
        let g = CayleyGrid::new(10).unwrap();
        let b = scalar(|t| c((t * t + 1.0) / (t * t + 4.0), 0.0), &g);
        let f = toeplitz_canonical_factorize(&b, 256, &g, &Tolerances::default()).unwrap();
        assert!(f.report.defect() < 1e-10, "{:?}", f.report);
        let plus = f.plus.entry(0, 0);
        for t in [-7.0, -0.3, 0.0, 1.5, 40.0] {
            let tc = c(t, 0.0);
            let z = (tc - I) / (tc + I);
            let want = (tc + I) / (tc + 2.0 * I);
            assert!((plus.eval(z) - want).norm() < 1e-10);
        }
    }

    #[test]
    fn plus_analytic_input_is_its_own_plus_factor() {
        let g = CayleyGrid::new(9).unwrap();
        let len = g.len();
        let samples: Vec<CMat> = g
            .t()
            .iter()
            .map(|&t| CMat::from_row_slice(2, 2, &[c(1., 0.), c(1.0, 0.0) / c(t, 1.0), c(0., 0.), c(1., 0.)]))
            .collect();
        let b = MatrixCircle::from_samples(&samples);
        let f = toeplitz_canonical_factorize(&b, 128, &g, &Tolerances::default()).unwrap();
        assert!(f.report.defect() < 1e-12);
        let m = f.minus.samples(len);
        assert!(m.iter().all(|x| max_abs(&(x - identity(2))) < 1e-12));
    }

    #[test]
    fn nonzero_winding_is_rejected() {
        let g = CayleyGrid::new(8).unwrap();
        let b = MatrixCircle::new(1, vec![CircleFunction::monomial(1, c(1., 0.))]);
        assert!(matches!(
            toeplitz_canonical_factorize(&b, 16, &g, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }
}
