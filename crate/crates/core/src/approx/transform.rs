//! Fourier images of exponential sums: Σ b_k (i/√(2π)) / (t + i(k+1)).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::bernstein::ApproxChain;

#[derive(Clone, Debug, Serialize)]
pub struct RationalTransform {
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
    pub flip: bool,
    /// ψ(k/M) when the coefficients come from a Bernstein polynomial.
    #[serde(skip)]
    node_values: Vec<f64>,
}

/// Fourier transform convention ĝ(t) = (2π)^{−1/2} ∫ g(x) e^{ixt} dx.
pub fn rational_transform(chain: &ApproxChain) -> RationalTransform {
    let norm = 1.0 / (2.0 * PI).sqrt();
    let sign = if chain.flip { -1.0 } else { 1.0 };
    let poles = (0..chain.coefficients.len())
        .map(|k| Complex64::new(0.0, -sign * (k + 1) as f64))
        .collect();
    let residues = chain
        .coefficients
        .iter()
        .map(|&b| Complex64::new(0.0, sign * b * norm))
        .collect();
    RationalTransform {
        poles,
        residues,
        flip: chain.flip,
        node_values: chain.node_values.clone(),
    }
}

impl RationalTransform {
    pub fn degree(&self) -> usize {
        self.poles.len()
    }

    /// Largest pole imaginary part (≤ −1 for the θ⁺ side).
    pub fn max_pole_imag(&self) -> f64 {
        self.poles.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at real t. Bernstein chains use Beta-function weights on ψ(k/M), which
    /// avoids the cancellation in the alternating monomial coefficients.
    pub fn eval(&self, t: f64) -> Complex64 {
        let norm = 1.0 / (2.0 * PI).sqrt();
        if self.node_values.len() == self.poles.len() && !self.node_values.is_empty() {
            let s = if self.flip { -t } else { t };
            let m = self.node_values.len() - 1;
            let mut w = Complex64::new(1.0, 0.0) / Complex64::new((m + 1) as f64, -s);
            let mut acc = w * self.node_values[m];
            for k in (0..m).rev() {
                w *= (k + 1) as f64 / Complex64::new((k + 1) as f64, -s);
                acc += w * self.node_values[k];
            }
            acc * norm
        } else {
            self.poles.iter().zip(&self.residues).map(|(p, r)| r / (t - p)).sum()
        }
    }
}

/// ĝ(t) for samples of g by composite Simpson quadrature.
pub fn sampled_transform(x0: f64, hx: f64, values: &[f64], t: f64) -> Complex64 {
    let n = values.len();
    if n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let f = |i: usize| values[i] * Complex64::from_polar(1.0, (x0 + i as f64 * hx) * t);
    let odd = n % 2 == 1;
    let last = if odd { n - 1 } else { n - 2 };
    let mut s = f(0) + f(last);
    for i in 1..last {
        s += f(i) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let mut total = s * hx / 3.0;
    if !odd {
        total += (f(n - 2) + f(n - 1)) * hx / 2.0;
    }
    total / (2.0 * PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::bernstein::bernstein_exp_sum;
    use crate::approx::profile::Bump;

    #[test]
    fn single_exponential() {
        let rt = rational_transform(&ApproxChain::from_coefficients(vec![1.0]));
        for t in [-3.0, 0.0, 1.5] {
            let want = Complex64::new(0.0, 1.0 / (2.0 * PI).sqrt()) / Complex64::new(t, 1.0);
            assert!((rt.eval(t) - want).norm() < 1e-15);
        }
        assert_eq!(rt.max_pole_imag(), -1.0);
    }

    #[test]
    fn zero_chain_is_zero() {
        let rt = rational_transform(&ApproxChain::from_coefficients(vec![0.0; 5]));
        assert_eq!(rt.eval(0.7), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn stable_evaluation_matches_pole_sum_at_low_degree() {
        let c = bernstein_exp_sum(&Bump { a: 1.0, b: 2.0 }, 12, 0).unwrap();
        let stable = rational_transform(&c);
        let mut plain = c.clone();
        plain.node_values.clear();
        let direct = rational_transform(&plain);
        for t in [-5.0, -0.5, 0.0, 2.0, 9.0] {
            assert!((stable.eval(t) - direct.eval(t)).norm() < 1e-9);
        }
    }

    #[test]
    fn sampled_transform_of_exponential() {
        let h = 1e-3;
        let vals: Vec<f64> = (0..=40000).map(|i| (-(i as f64) * h).exp()).collect();
        for t in [0.0, 1.0, -2.0] {
            let want = Complex64::new(0.0, 1.0 / (2.0 * PI).sqrt()) / Complex64::new(t, 1.0);
            assert!((sampled_transform(0.0, h, &vals, t) - want).norm() < 1e-9);
        }
    }
}
