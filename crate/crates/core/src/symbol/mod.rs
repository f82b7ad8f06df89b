//! Homogeneous elliptic matrix symbols and their slice evaluation.

pub mod builtins;
pub mod expr;
pub mod poly;
pub mod spec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{t_to_z, CayleyGrid};
use crate::linalg::{det, CMat, C64};
use crate::tolerances::Tolerances;

pub use builtins::{builtin, BUILTIN_NAMES};
pub use expr::parse_rational;
pub use poly::{Poly, RationalFn};
pub use spec::parse_symbol_spec;

/// Closed-form slice entry used by built-ins that leave the rational class.
#[derive(Clone, Copy, Debug)]
pub struct ClosedEntry {
    pub eval: fn(C64) -> C64,
    pub at_plus_inf: C64,
    pub at_minus_inf: C64,
}

/// One entry S(t) of the slice at |ξ′| = 1, before the (1+t²)^{−μ/2} normalization.
#[derive(Clone, Debug)]
pub enum Entry {
    Rational(RationalFn),
    Closed(ClosedEntry),
}

impl Entry {
    pub fn eval(&self, t: C64) -> C64 {
        match self {
            Entry::Rational(f) => f.eval(t),
            Entry::Closed(c) => (c.eval)(t),
        }
    }

    /// lim (1+t²)^{−μ/2} S(t) as t → ±∞.
    fn limit(&self, mu: f64, plus: bool) -> Result<C64> {
        let side = if plus { "+" } else { "-" };
        match self {
            Entry::Closed(c) => Ok(if plus { c.at_plus_inf } else { c.at_minus_inf }),
            Entry::Rational(f) => {
                let Some(gap) = f.degree_gap() else {
                    return Ok(C64::new(0.0, 0.0));
                };
                let g = gap as f64;
                if g > mu + 1e-9 {
                    Err(Error::Limit {
                        side,
                        reason: format!("entry grows like |t|^{} against degree {mu}", g),
                    })
                } else if g < mu - 1e-9 {
                    Ok(C64::new(0.0, 0.0))
                } else {
                    let lead = f.num.leading() / f.den.leading();
                    let sign = if plus || gap.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    Ok(lead * sign)
                }
            }
        }
    }
}

/// A positively homogeneous N×N symbol of degree μ, isotropic in ξ′.
///
/// A(ξ) = |ξ′|^μ S(ξₙ/|ξ′|) and A₀ = |ξ|^{−μ} A.
#[derive(Clone, Debug)]
pub struct HomogeneousSymbol {
    pub name: String,
    dim: usize,
    mu: f64,
    r: usize,
    entries: Vec<Entry>,
    scale: C64,
    cayley_power: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub homogeneity_defect: f64,
    pub min_abs_det: f64,
    pub min_abs_det_t: f64,
}

impl HomogeneousSymbol {
    pub fn new(name: impl Into<String>, dim: usize, mu: f64, r: usize, entries: Vec<Entry>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidSymbol(format!(
                "expected {}×{} entries, found {}",
                dim,
                dim,
                entries.len()
            )));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidSymbol("degree must be finite".into()));
        }
        Ok(Self {
            name: name.into(),
            dim,
            mu,
            r,
            entries,
            scale: C64::new(1.0, 0.0),
            cayley_power: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// The symbol multiplied by a nonzero constant.
    pub fn with_scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.scale *= c;
        out
    }

    /// The symbol multiplied by ((t−i)/(t+i))^p · I on the slice.
    pub fn with_cayley_power(&self, p: i32) -> Self {
        let mut out = self.clone();
        out.cayley_power += p;
        out
    }

    /// A₀(t) at complex t, without validity checks.
    pub fn a0(&self, t: C64) -> CMat {
        let n = self.dim;
        let mut w = self.scale;
        if self.mu != 0.0 {
            w *= (1.0 + t * t).powf(-0.5 * self.mu);
        }
        if self.cayley_power != 0 {
            w *= t_to_z(t).powi(self.cayley_power);
        }
        CMat::from_fn(n, n, |r, c| self.entries[r * n + c].eval(t) * w)
    }

    /// A₀(ω, t); ω only needs to be a unit vector since the symbol is isotropic.
    pub fn eval_slice(&self, omega: &[f64], t: f64) -> Result<CMat> {
        let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!("|omega| = {norm}, expected 1")));
        }
        self.slice(t)
    }

    pub(crate) fn slice(&self, t: f64) -> Result<CMat> {
        let m = self.a0(C64::new(t, 0.0));
        for r in 0..self.dim {
            for c in 0..self.dim {
                let v = m[(r, c)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Evaluation { row: r, col: c, t });
                }
            }
        }
        Ok(m)
    }

    /// Slice samples A₀(t_j) in θ order.
    pub fn sample(&self, grid: &CayleyGrid) -> Result<Vec<CMat>> {
        grid.t().iter().map(|&t| self.slice(t)).collect()
    }

    /// E± = A₀(0, …, 0, ±1).
    pub fn limits_epm(&self, tol: &Tolerances) -> Result<(CMat, CMat)> {
        let n = self.dim;
        let build = |plus: bool| -> Result<CMat> {
            let mut m = CMat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = self.entries[r * n + c].limit(self.mu, plus)? * self.scale;
                }
            }
            Ok(m)
        };
        let (ep, em) = (build(true)?, build(false)?);
        for (m, t) in [(&ep, f64::INFINITY), (&em, f64::NEG_INFINITY)] {
            let d = det(m).norm();
            if d <= tol.ell_floor {
                return Err(Error::Ellipticity {
                    min_det: d,
                    floor: tol.ell_floor,
                    t,
                });
            }
        }
        Ok((ep, em))
    }

    /// A(ξ) for ξ = (ξ′, ξₙ) ∈ ℝⁿ∖{0}, reconstructed by homogeneity.
    pub fn eval_full(&self, xi: &[f64], tol: &Tolerances) -> Result<CMat> {
        let (last, head) = xi.split_last().ok_or_else(|| Error::Precondition("empty ξ".into()))?;
        let rho = head.iter().map(|x| x * x).sum::<f64>().sqrt();
        let len = (rho * rho + last * last).sqrt();
        if len == 0.0 {
            return Err(Error::Precondition("ξ = 0".into()));
        }
        let a0 = if rho > 0.0 {
            self.slice(last / rho)?
        } else {
            let (ep, em) = self.limits_epm(tol)?;
            if *last > 0.0 {
                ep
            } else {
                em
            }
        };
        Ok(a0 * C64::new(len.powf(self.mu), 0.0))
    }

    /// Golden-section search for the smallest |det A₀| on [a, b].
    fn refine_det_minimum(&self, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
        let g = 0.5 * (5.0f64.sqrt() - 1.0);
        let f = |t: f64| -> Result<f64> { Ok(det(&self.slice(t)?).norm()) };
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d)?;
            }
        }
        Ok(if fc < fd { (fc, c) } else { (fd, d) })
    }

    /// Homogeneity on deterministic rays and ellipticity over a fine slice grid.
    pub fn validate(&self, tol: &Tolerances) -> Result<ValidationReport> {
        let (ep, em) = self.limits_epm(tol)?;
        let mut defect = 0.0f64;
        let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
        for k in 0..32 {
            let zc = 1.0 - 2.0 * (k as f64 + 0.5) / 32.0;
            let rr = (1.0 - zc * zc).sqrt();
            let xi = [rr * (golden * k as f64).cos(), rr * (golden * k as f64).sin(), zc];
            let base = self.eval_full(&xi, tol)?;
            let bn = base.norm();
            for s in [0.5, 2.0, 10.0] {
                let scaled: Vec<f64> = xi.iter().map(|x| x * s).collect();
                let a = self.eval_full(&scaled, tol)?;
                let diff = (a - &base * C64::new(f64::powf(s, self.mu), 0.0)).norm();
                if bn > 0.0 {
                    defect = defect.max(diff / bn);
                }
            }
        }
        if defect > tol.tol_hom {
            return Err(Error::Homogeneity {
                defect,
                tol: tol.tol_hom,
            });
        }
        let grid = CayleyGrid::new(10)?;
        let mut min_det = det(&ep).norm().min(det(&em).norm());
        let mut at = if det(&ep).norm() <= det(&em).norm() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        let order: Vec<usize> = grid.line_order().collect();
        let dets: Vec<f64> = order
            .iter()
            .map(|&j| Ok(det(&self.slice(grid.t()[j])?).norm()))
            .collect::<Result<_>>()?;
        for (i, &d) in dets.iter().enumerate() {
            let mut best = (d, grid.t()[order[i]]);
            let interior = i > 0 && i + 1 < dets.len();
            if interior && d <= dets[i - 1] && d <= dets[i + 1] {
                let refined = self.refine_det_minimum(grid.t()[order[i - 1]], grid.t()[order[i + 1]])?;
                if refined.0 < best.0 {
                    best = refined;
                }
            }
            if best.0 < min_det {
                (min_det, at) = best;
            }
        }
        if min_det <= tol.ell_floor {
            return Err(Error::Ellipticity {
                min_det,
                floor: tol.ell_floor,
                t: at,
            });
        }
        Ok(ValidationReport {
            homogeneity_defect: defect,
            min_abs_det: min_det,
            min_abs_det_t: at,
        })
    }
}
