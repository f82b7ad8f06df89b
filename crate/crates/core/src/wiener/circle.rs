//! Laurent-coefficient representation of functions on the Cayley circle.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::linalg::{CMat, C64};

/// A Laurent polynomial Σ a_k z^k with k running over `lo..lo+coeffs.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFunction {
    lo: i64,
    coeffs: Vec<C64>,
}

fn phase(k: i64, n: usize) -> C64 {
    // (−1)^k e^{iπk/n}, the node offset factor of the half-step grid
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    C64::from_polar(sign, PI * k as f64 / n as f64)
}

impl CircleFunction {
    pub fn new(lo: i64, coeffs: Vec<C64>) -> Self {
        Self { lo, coeffs }
    }

    pub fn zero() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(k: i64, c: C64) -> Self {
        Self::new(k, vec![c])
    }

    /// Coefficients k ∈ [−L/2, L/2) from samples on the L-node offset grid.
    /// The Nyquist term is assigned entirely to k = −L/2.
    pub fn from_samples(samples: &[C64]) -> Self {
        let n = samples.len();
        assert!(n.is_power_of_two() && n >= 2, "sample count must be a power of two");
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let half = (n / 2) as i64;
        let scale = 1.0 / n as f64;
        let coeffs = (-half..half)
            .map(|k| {
                let idx = k.rem_euclid(n as i64) as usize;
                buf[idx] * phase(k, n).conj() * scale
            })
            .collect();
        Self::new(-half, coeffs)
    }

    /// Values at the L-node offset grid, folding aliased coefficients with z^L = −1.
    pub fn samples(&self, n: usize) -> Vec<C64> {
        assert!(n.is_power_of_two() && n >= 2, "sample count must be a power of two");
        let ni = n as i64;
        let half = ni / 2;
        let mut folded = vec![C64::new(0.0, 0.0); n];
        for (j, &a) in self.coeffs.iter().enumerate() {
            let k = self.lo + j as i64;
            let k0 = (k + half).rem_euclid(ni) - half;
            let wraps = (k - k0) / ni;
            let s = if wraps.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            folded[k0.rem_euclid(ni) as usize] += a * s;
        }
        for k0 in -half..half {
            let idx = k0.rem_euclid(ni) as usize;
            folded[idx] *= phase(k0, n);
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut folded);
        folded
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored index (inclusive); `lo − 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> C64 {
        if k < self.lo || k > self.hi() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, &a)| (self.lo + j as i64, a))
    }

    /// Σ a_k z^k at an arbitrary nonzero z.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc * z.powi(self.lo as i32)
    }

    /// Value at z = 1 (t = ±∞).
    pub fn value_at_one(&self) -> C64 {
        self.coeffs.iter().sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, a| m.max(a.norm()))
    }

    /// ℓ¹ mass of coefficients whose index satisfies `pred`.
    pub fn mass_where<P: Fn(i64) -> bool>(&self, pred: P) -> f64 {
        self.indexed().filter(|(k, _)| pred(*k)).map(|(_, a)| a.norm()).sum()
    }

    /// Zeroes coefficients below `rel` times the largest one.
    pub fn chop(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| if a.norm() <= cut { C64::new(0.0, 0.0) } else { a })
            .collect();
        Self::new(self.lo, coeffs).trim()
    }

    /// Drops exact zeros at both ends.
    pub fn trim(mut self) -> Self {
        let zero = C64::new(0.0, 0.0);
        while self.coeffs.last() == Some(&zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&a| a == zero).count();
        self.coeffs.drain(..lead);
        self.lo += lead as i64;
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
        self
    }

    /// Keeps only coefficients with lo ≤ k ≤ hi.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        if hi < lo {
            return Self::zero();
        }
        let coeffs = (lo..=hi).map(|k| self.coeff(k)).collect();
        Self::new(lo, coeffs).trim()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, s: f64) -> Self {
        if self.coeffs.is_empty() {
            return other.scale(C64::new(s, 0.0));
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k) * s).collect();
        Self::new(lo, coeffs)
    }

    /// Exact Laurent product by direct convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.lo + other.lo, out)
    }

    /// θ-derivative: a_k ↦ i k a_k.
    pub fn d_theta(&self) -> Self {
        let coeffs = self.indexed().map(|(k, a)| a * C64::new(0.0, k as f64)).collect();
        Self::new(self.lo, coeffs)
    }

    /// D_t = (1 − cos θ) D_θ, exact on coefficients.
    pub fn d_t(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::zero();
        }
        let c = self.d_theta();
        let coeffs = (self.lo - 1..=self.hi() + 1)
            .map(|k| c.coeff(k) - (c.coeff(k - 1) + c.coeff(k + 1)) * 0.5)
            .collect();
        Self::new(self.lo - 1, coeffs)
    }

    /// (1 − it) D_t = (1 − z⁻¹) D_θ, exact on coefficients.
    pub fn weighted_d_t(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::zero();
        }
        let c = self.d_theta();
        let coeffs = (self.lo - 1..=self.hi()).map(|k| c.coeff(k) - c.coeff(k + 1)).collect();
        Self::new(self.lo - 1, coeffs)
    }

    /// The sequence g_k = (1 − it)^k D^k f for k = 0..=r.
    pub fn weighted_derivatives(&self, r: usize) -> Vec<Self> {
        let mut out = vec![self.clone()];
        for k in 1..=r {
            let prev = &out[k - 1];
            let next = prev.weighted_d_t().add(&prev.scale(C64::new(0.0, (k - 1) as f64)));
            out.push(next);
        }
        out
    }
}

/// An N×N matrix of circle functions, row-major.
#[derive(Clone, Debug)]
pub struct MatrixCircle {
    n: usize,
    entries: Vec<CircleFunction>,
}

impl MatrixCircle {
    pub fn new(n: usize, entries: Vec<CircleFunction>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn from_samples(samples: &[CMat]) -> Self {
        let n = samples.first().map_or(0, |m| m.nrows());
        let entries = (0..n * n)
            .map(|e| {
                let s: Vec<C64> = samples.iter().map(|m| m[(e / n, e % n)]).collect();
                CircleFunction::from_samples(&s)
            })
            .collect();
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &CircleFunction {
        &self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[CircleFunction] {
        &self.entries
    }

    pub fn map<F: Fn(&CircleFunction) -> CircleFunction>(&self, f: F) -> Self {
        Self::new(self.n, self.entries.iter().map(f).collect())
    }

    pub fn samples(&self, len: usize) -> Vec<CMat> {
        let cols: Vec<Vec<C64>> = self.entries.iter().map(|e| e.samples(len)).collect();
        (0..len)
            .map(|j| CMat::from_fn(self.n, self.n, |r, c| cols[r * self.n + c][j]))
            .collect()
    }

    /// C·F for a constant matrix C.
    pub fn mul_const_left(&self, c: &CMat) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|e| {
                let (r, col) = (e / n, e % n);
                (0..n).fold(CircleFunction::zero(), |acc, l| {
                    acc.add(&self.entry(l, col).scale(c[(r, l)]))
                })
            })
            .collect();
        Self::new(n, entries)
    }

    /// F·C for a constant matrix C.
    pub fn mul_const_right(&self, c: &CMat) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|e| {
                let (r, col) = (e / n, e % n);
                (0..n).fold(CircleFunction::zero(), |acc, l| {
                    acc.add(&self.entry(r, l).scale(c[(l, col)]))
                })
            })
            .collect();
        Self::new(n, entries)
    }

    pub fn coeff_block(&self, k: i64) -> CMat {
        CMat::from_fn(self.n, self.n, |r, c| self.entry(r, c).coeff(k))
    }

    pub fn eval(&self, z: C64) -> CMat {
        CMat::from_fn(self.n, self.n, |r, c| self.entry(r, c).eval(z))
    }

    pub fn value_at_one(&self) -> CMat {
        CMat::from_fn(self.n, self.n, |r, c| self.entry(r, c).value_at_one())
    }

    /// Total ℓ¹ mass over all entries of coefficients with index satisfying `pred`.
    pub fn mass_where<P: Fn(i64) -> bool + Copy>(&self, pred: P) -> f64 {
        self.entries.iter().map(|e| e.mass_where(pred)).sum()
    }

    pub fn lo(&self) -> i64 {
        self.entries.iter().map(|e| e.lo()).min().unwrap_or(0)
    }

    pub fn hi(&self) -> i64 {
        self.entries.iter().map(|e| e.hi()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CayleyGrid;
    use crate::linalg::I;

    #[test]
    fn roundtrip_and_known_coefficients() {
        let g = CayleyGrid::new(6).unwrap();
        let s: Vec<C64> = g.t().iter().map(|&t| 1.0 / (C64::new(t, 0.0) + I)).collect();
        let f = CircleFunction::from_samples(&s);
        // 1/(t+i) = (1 − z)/(2i)
        assert!((f.coeff(0) - 1.0 / (2.0 * I)).norm() < 1e-14);
        assert!((f.coeff(1) + 1.0 / (2.0 * I)).norm() < 1e-14);
        assert!(f.mass_where(|k| k != 0 && k != 1) < 1e-13);
        let back = f.samples(g.len());
        for (a, b) in back.iter().zip(&s) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn folding_respects_node_sign() {
        let g = CayleyGrid::new(4).unwrap();
        let f = CircleFunction::monomial(19, C64::new(1.0, 0.0));
        for (v, z) in f.samples(g.len()).iter().zip(g.z()) {
            assert!((v - z.powi(19)).norm() < 1e-13);
        }
    }

    #[test]
    fn d_t_of_cayley_variable() {
        // z = (t−i)/(t+i): dz/dt = 2i/(t+i)² = −(1−z)²/2 · i
        let f = CircleFunction::monomial(1, C64::new(1.0, 0.0));
        let d = f.d_t();
        for th in [0.3, 1.7, -2.2] {
            let z = C64::from_polar(1.0, th);
            let want = -(1.0 - z) * (1.0 - z) * I * 0.5;
            assert!((d.eval(z) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn weighted_derivative_matches_product() {
        let f = CircleFunction::new(
            -2,
            vec![
                C64::new(0.3, 0.1),
                C64::new(-1.0, 0.0),
                C64::new(0.5, 0.2),
                C64::new(0.0, 1.0),
            ],
        );
        let w = f.weighted_d_t();
        for th in [0.4, 2.5] {
            let z = C64::from_polar(1.0, th);
            let t = crate::grid::z_to_t(z);
            let want = (1.0 - I * t) * f.d_t().eval(z);
            assert!((w.eval(z) - want).norm() < 1e-12);
        }
    }
}
