//! Truncated real Taylor series Σ a_q h^q.

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|q| (0..=q).map(|i| a[i] * b[q - i]).sum()).collect()
}

pub fn recip(a: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len());
    let inv = 1.0 / a[0];
    out.push(inv);
    for q in 1..a.len() {
        let s: f64 = (1..=q).map(|i| a[i] * out[q - i]).sum();
        out.push(-s * inv);
    }
    out
}

pub fn exp(a: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len());
    out.push(a[0].exp());
    for q in 1..a.len() {
        let s: f64 = (1..=q).map(|i| i as f64 * a[i] * out[q - i]).sum();
        out.push(s / q as f64);
    }
    out
}

/// Σ_j outer[j] δ^j with δ = inner − inner[0].
pub fn compose(outer: &[f64], inner: &[f64]) -> Vec<f64> {
    let n = outer.len().min(inner.len());
    let mut delta = inner[..n].to_vec();
    delta[0] = 0.0;
    let mut out = vec![0.0; n];
    let mut power = vec![0.0; n];
    power[0] = 1.0;
    for &c in outer.iter().take(n) {
        for (o, p) in out.iter_mut().zip(&power) {
            *o += c * p;
        }
        power = mul(&power, &delta);
    }
    out
}

/// Taylor coefficients to derivatives: a_q ↦ q!·a_q.
pub fn to_derivatives(a: &[f64]) -> Vec<f64> {
    let mut f = 1.0;
    a.iter()
        .enumerate()
        .map(|(q, &v)| {
            if q > 0 {
                f *= q as f64;
            }
            v * f
        })
        .collect()
}

/// Derivatives to Taylor coefficients.
pub fn from_derivatives(d: &[f64]) -> Vec<f64> {
    let mut f = 1.0;
    d.iter()
        .enumerate()
        .map(|(q, &v)| {
            if q > 0 {
                f *= q as f64;
            }
            v / f
        })
        .collect()
}

/// Taylor coefficients of exp(−1/(1 − u²)) at u, zero for |u| ≥ 1.
pub fn bump_taylor(u: f64, n: usize) -> Vec<f64> {
    let w0 = 1.0 - u * u;
    if w0 <= 0.0 || -1.0 / w0 < -700.0 {
        return vec![0.0; n];
    }
    let mut w = vec![0.0; n];
    w[0] = w0;
    if n > 1 {
        w[1] = -2.0 * u;
    }
    if n > 2 {
        w[2] = -1.0;
    }
    let g: Vec<f64> = recip(&w).into_iter().map(|v| -v).collect();
    exp(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_linear_is_exponential() {
        let e = exp(&[0.5, 2.0, 0.0, 0.0]);
        let base = 0.5f64.exp();
        for (q, &v) in e.iter().enumerate() {
            let want = base * 2f64.powi(q as i32) / (1..=q).product::<usize>().max(1) as f64;
            assert!((v - want).abs() < 1e-14);
        }
    }

    #[test]
    fn bump_derivative_matches_difference() {
        let u = 0.3;
        let d = to_derivatives(&bump_taylor(u, 3));
        let f = |u: f64| (-1.0 / (1.0 - u * u)).exp();
        let h = 1e-4;
        assert!((d[0] - f(u)).abs() < 1e-15);
        assert!((d[1] - (f(u + h) - f(u - h)) / (2.0 * h)).abs() < 1e-7);
        assert!((d[2] - (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h)).abs() < 1e-5);
        assert!(bump_taylor(1.0, 3).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn compose_log() {
        // exp(ln(1 + h)) = 1 + h
        let inner = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25];
        let outer = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        let c = compose(&outer, &inner);
        assert!((c[0] - 1.0).abs() < 1e-15 && (c[1] - 1.0).abs() < 1e-15);
        assert!(c[2..].iter().all(|v| v.abs() < 1e-15));
    }
}
