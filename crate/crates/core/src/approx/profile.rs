//! Smooth profiles, the cutoff φ_ε and the mollifier J_δ.

use super::series::{bump_taylor, to_derivatives};

/// A smooth real function on ℝ with derivatives on demand.
pub trait SmoothProfile: Sync {
    /// [h(x), h′(x), …, h^{(r)}(x)].
    fn derivatives(&self, x: f64, r: usize) -> Vec<f64>;

    /// Closed interval outside which the function vanishes; `None` when identically zero.
    fn support(&self) -> Option<(f64, f64)>;

    fn value(&self, x: f64) -> f64 {
        self.derivatives(x, 0)[0]
    }
}

/// exp(−1/(1 − u²)) with u = (2x − a − b)/(b − a), supported on [a, b].
#[derive(Clone, Copy, Debug)]
pub struct Bump {
    pub a: f64,
    pub b: f64,
}

impl SmoothProfile for Bump {
    fn derivatives(&self, x: f64, r: usize) -> Vec<f64> {
        let k = 2.0 / (self.b - self.a);
        let u = k * x - (self.a + self.b) / (self.b - self.a);
        let mut d = to_derivatives(&bump_taylor(u, r + 1));
        let mut s = 1.0;
        for v in d.iter_mut() {
            *v *= s;
            s *= k;
        }
        d
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.a, self.b))
    }
}

/// The zero function.
#[derive(Clone, Copy, Debug)]
pub struct Zero;

impl SmoothProfile for Zero {
    fn derivatives(&self, _x: f64, r: usize) -> Vec<f64> {
        vec![0.0; r + 1]
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}

/// Samples v_i = v(x0 + i·hx) on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    pub x0: f64,
    pub hx: f64,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn from_fn<F: Fn(f64) -> f64>(x0: f64, x1: f64, hx: f64, f: F) -> Self {
        let n = ((x1 - x0) / hx).round() as usize + 1;
        Self {
            x0,
            hx,
            values: (0..n).map(|i| f(x0 + i as f64 * hx)).collect(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid ℓ¹ norm.
    pub fn l1_norm(&self) -> f64 {
        trapezoid(self.values.iter().map(|v| v.abs()), self.hx)
    }

    /// ‖self − other‖_{L¹} on the union of both grids (same spacing and aligned nodes).
    pub fn l1_distance(&self, other: &Sampled) -> f64 {
        let lo = self.x0.min(other.x0);
        let hi = self
            .x(self.len().saturating_sub(1))
            .max(other.x(other.len().saturating_sub(1)));
        let n = ((hi - lo) / self.hx).round() as usize + 1;
        trapezoid(
            (0..n).map(|i| (self.at(lo + i as f64 * self.hx) - other.at(lo + i as f64 * self.hx)).abs()),
            self.hx,
        )
    }

    /// Value at a grid-aligned x, zero off the grid.
    pub fn at(&self, x: f64) -> f64 {
        let i = ((x - self.x0) / self.hx).round();
        if i < 0.0 || i as usize >= self.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    /// Index range of nonzero samples.
    pub fn nonzero_range(&self) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|&v| v != 0.0)?;
        let last = self.values.iter().rposition(|&v| v != 0.0)?;
        Some((first, last))
    }

    /// The reflection x ↦ −x.
    pub fn reflect(&self) -> Self {
        let n = self.len();
        Self {
            x0: -self.x(n.saturating_sub(1)),
            hx: self.hx,
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// Samples with x ≥ 0.
    pub fn positive_part(&self) -> Self {
        let start = (0..self.len())
            .find(|&i| self.x(i) >= -1e-12 * self.hx)
            .unwrap_or(self.len());
        Self {
            x0: self.x(start),
            hx: self.hx,
            values: self.values[start..].to_vec(),
        }
    }
}

fn trapezoid<I: Iterator<Item = f64>>(vals: I, h: f64) -> f64 {
    let v: Vec<f64> = vals.collect();
    match v.len() {
        0 | 1 => 0.0,
        n => h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1])),
    }
}

fn exp_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Smooth step S(s) = f(s)/(f(s) + f(1 − s)), f(s) = e^{−1/s}: 0 for s ≤ 0, 1 for s ≥ 1.
pub fn smooth_step(s: f64) -> f64 {
    let (a, b) = (exp_step(s), exp_step(1.0 - s));
    a / (a + b)
}

/// φ_ε(x) = α(x/ε)·β(εx): 1 on ε ≤ |x| ≤ 1/ε, 0 on |x| ≤ ε/2 and |x| ≥ 2/ε.
pub fn cutoff_profile(x: f64, eps: f64) -> f64 {
    let alpha = smooth_step((x / eps).abs() * 2.0 - 1.0);
    let beta = 1.0 - smooth_step((eps * x).abs() - 1.0);
    alpha * beta
}

/// φ_ε·g on the samples of g.
pub fn cutoff(g: &Sampled, eps: f64) -> Sampled {
    assert!(eps > 0.0 && eps < 1.0, "cutoff needs 0 < eps < 1");
    Sampled {
        x0: g.x0,
        hx: g.hx,
        values: (0..g.len())
            .map(|i| g.values[i] * cutoff_profile(g.x(i), eps))
            .collect(),
    }
}

/// ∫ exp(−1/(1 − u²)) du over (−1, 1).
fn bump_integral() -> f64 {
    static VALUE: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *VALUE.get_or_init(bump_integral_uncached)
}

fn bump_integral_uncached() -> f64 {
    let n = 20000;
    let h = 2.0 / n as f64;
    let f = |u: f64| bump_taylor(u, 1)[0];
    // Simpson; the integrand is flat at both ends
    let mut s = f(-1.0) + f(1.0);
    for i in 1..n {
        let u = -1.0 + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(u);
    }
    s * h / 3.0
}

/// J(x) = exp(−1/(1 − x²))/Z, a unit-mass bump on (−1, 1).
pub fn mollifier_kernel(x: f64) -> f64 {
    bump_taylor(x, 1)[0] / bump_integral()
}

/// Discrete weights of J_δ on a grid of spacing hx, normalized to unit sum.
fn mollifier_weights(hx: f64, delta: f64) -> Vec<f64> {
    let half = (delta / hx).floor() as usize;
    let raw: Vec<f64> = (0..=2 * half)
        .map(|m| bump_taylor((m as f64 - half as f64) * hx / delta, 1)[0])
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        let mut w = vec![0.0; 2 * half + 1];
        w[half] = 1.0;
        return w;
    }
    raw.into_iter().map(|v| v / total).collect()
}

/// J_δ∗v on a grid extended by δ at both ends.
pub fn mollify(v: &Sampled, delta: f64) -> Sampled {
    assert!(delta > 0.0, "mollify needs delta > 0");
    let w = mollifier_weights(v.hx, delta);
    let half = (w.len() - 1) / 2;
    let n = v.len() + 2 * half;
    let mut out = vec![0.0; n];
    for (i, &vi) in v.values.iter().enumerate() {
        if vi == 0.0 {
            continue;
        }
        for (m, &wm) in w.iter().enumerate() {
            out[i + m] += vi * wm;
        }
    }
    Sampled {
        x0: v.x0 - half as f64 * v.hx,
        hx: v.hx,
        values: out,
    }
}

/// J_δ∗v as a smooth function, derivatives from the kernel derivatives.
#[derive(Clone, Debug)]
pub struct Mollified {
    samples: Sampled,
    delta: f64,
    norm: f64,
}

impl Mollified {
    pub fn new(samples: Sampled, delta: f64) -> Self {
        assert!(delta > 0.0, "mollifier width must be positive");
        Self {
            samples,
            delta,
            norm: bump_integral(),
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl SmoothProfile for Mollified {
    fn derivatives(&self, x: f64, r: usize) -> Vec<f64> {
        let s = &self.samples;
        let mut out = vec![0.0; r + 1];
        let lo = ((x - self.delta - s.x0) / s.hx).ceil().max(0.0) as usize;
        let hi = (((x + self.delta - s.x0) / s.hx).floor()).min(s.len() as f64 - 1.0);
        if hi < 0.0 {
            return out;
        }
        let hi = hi as usize;
        let scale = s.hx / (self.norm * self.delta);
        for i in lo..=hi.min(s.len() - 1) {
            let vi = s.values[i];
            if vi == 0.0 {
                continue;
            }
            let u = (x - s.x(i)) / self.delta;
            let d = to_derivatives(&bump_taylor(u, r + 1));
            let mut k = 1.0;
            for (o, dj) in out.iter_mut().zip(&d) {
                *o += vi * dj * k * scale;
                k /= self.delta;
            }
        }
        out
    }

    fn support(&self) -> Option<(f64, f64)> {
        let (a, b) = self.samples.nonzero_range()?;
        Some((self.samples.x(a) - self.delta, self.samples.x(b) + self.delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_plateaus() {
        let eps = 0.2;
        assert_eq!(cutoff_profile(0.5 * (eps + 1.0 / eps), eps), 1.0);
        assert_eq!(cutoff_profile(-3.0, eps), 1.0);
        assert_eq!(cutoff_profile(eps / 4.0, eps), 0.0);
        assert_eq!(cutoff_profile(2.5 / eps, eps), 0.0);
        let v = cutoff_profile(0.7 * eps, eps);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn mollifier_has_unit_mass() {
        let s = Sampled::from_fn(-1.0, 1.0, 1e-3, mollifier_kernel);
        assert!((s.l1_norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mollify_contracts_and_commutes_with_differences() {
        let v = Sampled::from_fn(-1.0, 3.0, 1e-2, |x| if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 });
        let m = mollify(&v, 0.1);
        assert!(m.l1_norm() <= v.l1_norm() + 1e-12);
        let (a, b) = m.nonzero_range().unwrap();
        assert!(m.x(a) >= -0.1 - 1e-9 && m.x(b) <= 1.1 + 1e-9);
        let diff = |s: &Sampled| Sampled {
            x0: s.x0,
            hx: s.hx,
            values: s.values.windows(2).map(|w| (w[1] - w[0]) / s.hx).collect(),
        };
        let lhs = diff(&m);
        let rhs = mollify(&diff(&v), 0.1);
        assert!(lhs.values.iter().zip(&rhs.values).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn mollified_profile_matches_discrete_convolution() {
        let v = Sampled::from_fn(0.0, 2.0, 1e-3, |x| (x * 3.0).sin());
        let p = Mollified::new(v.clone(), 0.05);
        let m = mollify(&v, 0.05);
        let x = 1.0;
        assert!((p.value(x) - m.at(x)).abs() < 1e-6);
        let d = p.derivatives(x, 1);
        let h = 1e-4;
        assert!((d[1] - (p.value(x + h) - p.value(x - h)) / (2.0 * h)).abs() < 1e-5);
    }
}
