//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(v: &[C64]) -> CMat {
    let n = v.len();
    let mut m = CMat::zeros(n, n);
    for (k, &x) in v.iter().enumerate() {
        m[(k, k)] = x;
    }
    m
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// Spectral norm.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with an absolute threshold.
pub fn rank(m: &CMat, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis (as columns) of the numerical null space of a square matrix.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    let svd = m.clone().svd(true, true);
    let vt = svd.v_t.expect("requested V^H");
    let cols: Vec<_> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= tol)
        .map(|k| vt.row(k).transpose().map(|x| x.conj()))
        .collect();
    let mut out = CMat::zeros(n, cols.len());
    for (j, v) in cols.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    let inv = m.clone().try_inverse()?;
    if inv.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

pub fn det(m: &CMat) -> C64 {
    m.clone().determinant()
}

pub fn pow(m: &CMat, p: usize) -> CMat {
    let mut out = identity(m.nrows());
    for _ in 0..p {
        out = &out * m;
    }
    out
}

/// Reciprocal condition number in the spectral norm.
pub fn rcond(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// Row-major nested vectors, for serialization.
pub fn rows(m: &CMat) -> Vec<Vec<C64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        out.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(b);
        o += b.nrows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_nilpotent() {
        let mut m = CMat::zeros(3, 3);
        m[(1, 0)] = c(1.0, 0.0);
        m[(2, 1)] = c(1.0, 0.0);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.ncols(), 1);
        assert!((ns[(2, 0)].norm() - 1.0).abs() < 1e-12);
        assert_eq!(rank(&pow(&m, 2), 1e-12), 1);
    }

    #[test]
    fn singular_values_descend() {
        let m = diag(&[c(1.0, 0.0), c(0.0, 3.0), c(2.0, 0.0)]);
        let s = singular_values(&m);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
        assert!((rcond(&m) - 1.0 / 3.0).abs() < 1e-14);
    }
}
