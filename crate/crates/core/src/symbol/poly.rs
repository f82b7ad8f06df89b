//! Complex polynomials and rational functions in t.

use crate::linalg::C64;

/// Coefficients below this fraction of the operands are treated as cancelled.
const CANCEL: f64 = 1e-14;

/// Polynomial with ascending complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial t.
    pub fn t() -> Self {
        Self::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, t: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[C64], k: usize| v.get(k).copied().unwrap_or_default();
        Self::new(
            (0..n)
                .map(|k| {
                    let (a, b) = (get(&self.coeffs, k), get(&other.coeffs, k));
                    let s = a + b;
                    if s.norm() <= CANCEL * a.norm().max(b.norm()) {
                        C64::new(0.0, 0.0)
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// All complex roots (Aberth–Ehrlich iteration with a Newton polish).
    pub fn roots(&self) -> Vec<C64> {
        let n = match self.degree() {
            Some(d) if d > 0 => d,
            _ => return Vec::new(),
        };
        let lead = self.leading();
        let monic = self.scale(1.0 / lead);
        let dp = monic.derivative();
        let radius = 1.0 + monic.coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut z: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let p = monic.eval(z[i]);
                let d = dp.eval(z[i]);
                if p == C64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = p / d;
                let s: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let w = ratio / (1.0 - ratio * s);
                if w.re.is_finite() && w.im.is_finite() {
                    z[i] -= w;
                    moved = moved.max(w.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        for zi in z.iter_mut() {
            let d = dp.eval(*zi);
            if d.norm() > 0.0 {
                let step = monic.eval(*zi) / d;
                if step.norm() < 1e-6 * (1.0 + zi.norm()) {
                    *zi -= step;
                }
            }
        }
        z
    }
}

/// Ratio p(t)/q(t) of complex polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        Self { num, den }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(Poly::constant(c), Poly::constant(C64::new(1.0, 0.0)))
    }

    pub fn t() -> Self {
        Self::new(Poly::t(), Poly::constant(C64::new(1.0, 0.0)))
    }

    pub fn eval(&self, t: C64) -> C64 {
        self.num.eval(t) / self.den.eval(t)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.num.scale(C64::new(-1.0, 0.0)), self.den.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `None` when the divisor is identically zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Some(Self::new(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    /// Integer power; `None` for a negative power of the zero function.
    pub fn powi(&self, n: i64) -> Option<Self> {
        let base = if n < 0 {
            Self::constant(C64::new(1.0, 0.0)).div(self)?
        } else {
            self.clone()
        };
        let mut out = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    /// deg p − deg q, `None` for the zero function.
    pub fn degree_gap(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree()? as i64)
    }

    /// Zeros and poles after cancelling common roots.
    pub fn zeros_and_poles(&self) -> (Vec<C64>, Vec<C64>) {
        let mut zeros = self.num.roots();
        let mut poles = self.den.roots();
        let mut k = 0;
        while k < zeros.len() {
            let hit = poles
                .iter()
                .position(|p| (p - zeros[k]).norm() <= 1e-6 * (1.0 + p.norm()));
            match hit {
                Some(j) => {
                    poles.swap_remove(j);
                    zeros.swap_remove(k);
                }
                None => k += 1,
            }
        }
        (zeros, poles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn roots_of_quadratics() {
        // t² + 1
        let p = Poly::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let mut r = p.roots();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] + I).norm() < 1e-14 && (r[1] - I).norm() < 1e-14);
    }

    #[test]
    fn cancellation_is_exact() {
        let t = RationalFn::t();
        let z = t.sub(&t);
        assert!(z.is_zero());
        assert!(RationalFn::constant(C64::new(1.0, 0.0)).div(&z).is_none());
    }

    #[test]
    fn common_roots_cancel() {
        let t = RationalFn::t();
        let a = t.add(&RationalFn::constant(I));
        let f = a.mul(&a).div(&a).unwrap();
        let (z, p) = f.zeros_and_poles();
        assert_eq!(p.len(), 0);
        assert_eq!(z.len(), 1);
        assert!((z[0] + I).norm() < 1e-6);
    }
}
