//! The half-step offset grid on the unit circle and its Cayley image on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, I};

/// Nodes z_j = exp(iθ_j), θ_j = π(2j+1−L)/L, together with t_j = −cot(θ_j/2).
///
/// No node sits at z = 1, so t = ±∞ is never evaluated.
#[derive(Clone, Debug)]
pub struct CayleyGrid {
    log2_size: u32,
    theta: Vec<f64>,
    t: Vec<f64>,
    z: Vec<C64>,
}

impl CayleyGrid {
    pub fn new(log2_size: u32) -> Result<Self> {
        if !(3..=24).contains(&log2_size) {
            return Err(Error::Precondition(format!(
                "grid log2 size {log2_size} outside [3, 24]"
            )));
        }
        let n = 1usize << log2_size;
        let nf = n as f64;
        let theta: Vec<f64> = (0..n).map(|j| PI * (2.0 * j as f64 + 1.0 - nf) / nf).collect();
        let t = theta.iter().map(|&th| -1.0 / (0.5 * th).tan()).collect();
        let z = theta.iter().map(|&th| C64::from_polar(1.0, th)).collect();
        Ok(Self { log2_size, theta, t, z })
    }

    pub fn log2_size(&self) -> u32 {
        self.log2_size
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn z(&self) -> &[C64] {
        &self.z
    }

    /// Node indices in increasing t, i.e. θ running from 0⁺ to 2π⁻.
    pub fn line_order(&self) -> impl Iterator<Item = usize> + '_ {
        let half = self.len() / 2;
        (half..self.len()).chain(0..half)
    }

    /// Largest |t_j| on the grid.
    pub fn t_max(&self) -> f64 {
        self.t.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Indices with |t_j| in [t_max/10, t_max].
    pub fn outer_decade(&self) -> Vec<usize> {
        let lo = self.t_max() / 10.0;
        (0..self.len()).filter(|&j| self.t[j].abs() >= lo).collect()
    }
}

/// Inverse Cayley map z ↦ t = i(1+z)/(1−z).
pub fn z_to_t(z: C64) -> C64 {
    I * (1.0 + z) / (1.0 - z)
}

/// Cayley map t ↦ z = (t−i)/(t+i).
pub fn t_to_z(t: C64) -> C64 {
    (t - I) / (t + I)
}

/// Samples a scalar function at every node, in θ order.
pub fn cayley_sample<F: Fn(f64) -> C64>(f: F, grid: &CayleyGrid) -> Result<Vec<C64>> {
    grid.t()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let v = f(t);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::UnderResolved(format!("non-finite sample at node {j} (t = {t})")))
            }
        })
        .collect()
}

/// Samples a matrix function at every node, in θ order.
pub fn cayley_sample_matrix<F: Fn(f64) -> Result<CMat>>(f: F, grid: &CayleyGrid) -> Result<Vec<CMat>> {
    grid.t().iter().map(|&t| f(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_avoid_one_and_match_cayley() {
        let g = CayleyGrid::new(10).unwrap();
        for j in 0..g.len() {
            assert!((g.z()[j] - 1.0).norm() > 1e-3);
            let zt = t_to_z(C64::new(g.t()[j], 0.0));
            assert!((zt - g.z()[j]).norm() < 1e-13);
            let back = z_to_t(g.z()[j]);
            assert!((back.re - g.t()[j]).abs() <= 1e-12 * (1.0 + g.t()[j].abs()));
        }
    }

    #[test]
    fn line_order_is_increasing() {
        let g = CayleyGrid::new(8).unwrap();
        let ts: Vec<f64> = g.line_order().map(|j| g.t()[j]).collect();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert!(ts[0] < -50.0 && *ts.last().unwrap() > 50.0);
    }

    #[test]
    fn samples_of_cayley_functions() {
        let g = CayleyGrid::new(6).unwrap();
        let s = cayley_sample(|t| t_to_z(C64::new(t, 0.0)), &g).unwrap();
        for (a, b) in s.iter().zip(g.z()) {
            assert!((a - b).norm() < 1e-14);
        }
        let s = cayley_sample(|t| 1.0 / (C64::new(t, 0.0) + I), &g).unwrap();
        for (a, z) in s.iter().zip(g.z()) {
            assert!((a - (1.0 - z) / (2.0 * I)).norm() < 1e-14);
        }
        assert!(cayley_sample(|_| C64::new(f64::NAN, 0.0), &g).is_err());
    }
}
