//! Bernstein approximation of ψ(y) = h(−ln y)/y and the exponential sum Σ b_k e^{−(k+1)x}.

use serde::Serialize;

use super::profile::{cutoff, mollify, Mollified, Sampled, SmoothProfile};
use super::series::{compose, from_derivatives, mul, to_derivatives};
use crate::error::{Error, Result};

/// Integration range and step of the L¹ error quadrature.
pub const QUAD_X_MAX: f64 = 40.0;
pub const QUAD_STEP: f64 = 1e-3;
/// Nodes of the y-grid on which sup-errors of ψ^{(l)} are measured.
const SUP_NODES: usize = 20001;

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub claimed: f64,
    pub measured: f64,
}

/// ‖θ⁺ x^k D^j (h − S e^{−x})‖_{L¹} against its bound.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeError {
    pub j: usize,
    pub k: usize,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxChain {
    pub eps_cutoff: Option<f64>,
    pub delta_mollify: Option<f64>,
    pub m_bernstein: usize,
    pub r: usize,
    /// Approximates the θ⁻ side through x ↦ −x.
    pub flip: bool,
    pub stages: Vec<StageRecord>,
    /// sup_y |ψ^{(l)} − (B_Mψ)^{(l)}| for l = 0..=r.
    pub sup_errors: Vec<f64>,
    /// max of `sup_errors`.
    pub eps: f64,
    pub derivative_errors: Vec<DerivativeError>,
    /// Monomial coefficients b_k of B_Mψ(y) = Σ b_k y^k.
    pub coefficients: Vec<f64>,
    /// ψ(k/M), k = 0..=M.
    pub node_values: Vec<f64>,
}

impl ApproxChain {
    /// A chain given directly by its exponential-sum coefficients.
    pub fn from_coefficients(b: Vec<f64>) -> Self {
        Self {
            eps_cutoff: None,
            delta_mollify: None,
            m_bernstein: b.len().saturating_sub(1),
            r: 0,
            flip: false,
            stages: Vec::new(),
            sup_errors: Vec::new(),
            eps: 0.0,
            derivative_errors: Vec::new(),
            coefficients: b,
            node_values: Vec::new(),
        }
    }

    /// Every measured derivative error within its bound.
    pub fn bounds_hold(&self) -> bool {
        self.derivative_errors.iter().all(|d| d.measured <= d.bound)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Σ_k c_k C(n,k) y^k (1−y)^{n−k}, summed term by term from the larger base.
pub fn bernstein_eval(c: &[f64], y: f64) -> f64 {
    let n = c.len() - 1;
    if n == 0 {
        return c[0];
    }
    if y <= 0.5 {
        let s = y / (1.0 - y);
        let mut term = (1.0 - y).powi(n as i32);
        let mut acc = c[0] * term;
        for (k, &ck) in c.iter().enumerate().skip(1) {
            term *= s * (n - k + 1) as f64 / k as f64;
            acc += ck * term;
        }
        acc
    } else {
        let s = (1.0 - y) / y;
        let mut term = y.powi(n as i32);
        let mut acc = c[n] * term;
        for k in (0..n).rev() {
            term *= s * (k + 1) as f64 / (n - k) as f64;
            acc += c[k] * term;
        }
        acc
    }
}

/// ψ^{(l)}(y) for l = 0..=r, with ψ(y) = h(−ln y)/y and ψ(0) = 0.
pub fn psi_derivatives(h: &dyn SmoothProfile, y: f64, r: usize) -> Vec<f64> {
    if y <= 0.0 {
        return vec![0.0; r + 1];
    }
    let n = r + 1;
    let x0 = -y.ln();
    let mut inner = vec![x0; n];
    let mut recip_y = vec![0.0; n];
    for q in 0..n {
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        if q > 0 {
            inner[q] = sign / (q as f64 * y.powi(q as i32));
        }
        recip_y[q] = sign / y.powi(q as i32 + 1);
    }
    let outer = from_derivatives(&h.derivatives(x0, r));
    to_derivatives(&mul(&compose(&outer, &inner), &recip_y))
}

/// Bernstein approximation data for fixed M.
struct Bernstein {
    m: usize,
    /// diffs[l][k] = Δ^l ψ(k/M), k = 0..=M−l.
    diffs: Vec<Vec<f64>>,
}

impl Bernstein {
    fn new(nodes: &[f64], r: usize) -> Self {
        let m = nodes.len() - 1;
        let mut diffs = vec![nodes.to_vec()];
        for l in 1..=r.min(m) {
            let prev = &diffs[l - 1];
            diffs.push(prev.windows(2).map(|w| w[1] - w[0]).collect());
        }
        Self { m, diffs }
    }

    /// (B_Mψ)^{(l)}(y) = M!/(M−l)! Σ_k Δ^lψ(k/M) C(M−l,k) y^k (1−y)^{M−l−k}.
    fn derivative(&self, l: usize, y: f64) -> f64 {
        if l > self.m {
            return 0.0;
        }
        let falling = (0..l).fold(1.0, |acc, i| acc * (self.m - i) as f64);
        falling * bernstein_eval(&self.diffs[l], y)
    }
}

/// c_{j,l} with D^j[e^{−x} φ(e^{−x})] = Σ_l c_{j,l} e^{−(l+1)x} φ^{(l)}(e^{−x}).
pub fn chain_rule_coefficients(j: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..j {
        let mut next = vec![0.0; c.len() + 1];
        for (l, &v) in c.iter().enumerate() {
            next[l] -= (l + 1) as f64 * v;
            next[l + 1] -= v;
        }
        c = next;
    }
    c
}

/// Stirling numbers of the second kind S(j, m), m = 0..=j.
fn stirling2(j: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for n in 1..=j {
        let mut next = vec![0.0; n + 1];
        for m in 1..=n {
            let a = if m < row.len() { m as f64 * row[m] } else { 0.0 };
            next[m] = a + row[m - 1];
        }
        row = next;
    }
    row
}

/// D_x^j of S(x)e^{−x} = y B(y), y = e^{−x}, for j = 0..=r.
fn approximant_derivatives(b: &Bernstein, x: f64, r: usize, stirling: &[Vec<f64>]) -> Vec<f64> {
    let y = (-x).exp();
    let bd: Vec<f64> = (0..=r).map(|l| b.derivative(l, y)).collect();
    // F(y) = y B(y): F^{(m)} = y B^{(m)} + m B^{(m−1)}
    let f: Vec<f64> = (0..=r)
        .map(|m| y * bd[m] + if m > 0 { m as f64 * bd[m - 1] } else { 0.0 })
        .collect();
    (0..=r)
        .map(|j| {
            if j == 0 {
                f[0]
            } else {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * (1..=j).map(|m| stirling[j][m] * y.powi(m as i32) * f[m]).sum::<f64>()
            }
        })
        .collect()
}

fn simpson(vals: &[f64], h: f64) -> f64 {
    let n = vals.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = vals[0] + vals[n - 1];
    for (i, v) in vals.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * v;
    }
    s * h / 3.0
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Quadrature nodes x_i = i·QUAD_STEP on [0, QUAD_X_MAX] (odd count for Simpson).
pub fn quadrature_nodes() -> Vec<f64> {
    let n = (QUAD_X_MAX / QUAD_STEP).round() as usize;
    let n = if n % 2 == 1 { n + 1 } else { n };
    (0..=n).map(|i| i as f64 * QUAD_STEP).collect()
}

/// B_Mψ for ψ(y) = h(−ln y)/y and the exponential sum it induces, with measured
/// sup-errors of ψ^{(l)} and L¹ errors of θ⁺x^k D^j(h − Se^{−x}) for 0 ≤ j ≤ k ≤ r.
pub fn bernstein_exp_sum(h: &dyn SmoothProfile, m: usize, r: usize) -> Result<ApproxChain> {
    if m == 0 {
        return Err(Error::Precondition("Bernstein degree must be positive".into()));
    }
    let mut chain = ApproxChain::from_coefficients(vec![0.0; m + 1]);
    chain.m_bernstein = m;
    chain.r = r;
    chain.node_values = vec![0.0; m + 1];
    chain.sup_errors = vec![0.0; r + 1];
    let Some((a, _)) = h.support() else {
        chain.derivative_errors = (0..=r)
            .flat_map(|k| {
                (0..=k).map(move |j| DerivativeError {
                    j,
                    k,
                    measured: 0.0,
                    bound: 0.0,
                })
            })
            .collect();
        chain.stages.push(StageRecord {
            stage: "bernstein".into(),
            claimed: 0.0,
            measured: 0.0,
        });
        return Ok(chain);
    };
    if a <= 0.0 {
        return Err(Error::Precondition(format!(
            "h must vanish near 0 (support starts at {a})"
        )));
    }
    let nodes: Vec<f64> = (0..=m).map(|k| psi_derivatives(h, k as f64 / m as f64, 0)[0]).collect();
    let bern = Bernstein::new(&nodes, r);
    // b_k = C(M,k) Δ^k ψ(0)
    let mut diff = nodes.clone();
    let mut coefficients = Vec::with_capacity(m + 1);
    for k in 0..=m {
        coefficients.push(binomial(m, k) * diff[0]);
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let mut sup_errors = vec![0.0f64; r + 1];
    for i in 0..SUP_NODES {
        let y = i as f64 / (SUP_NODES - 1) as f64;
        let p = psi_derivatives(h, y, r);
        for (l, e) in sup_errors.iter_mut().enumerate() {
            *e = e.max((p[l] - bern.derivative(l, y)).abs());
        }
    }
    let eps = sup_errors.iter().fold(0.0f64, |a, &b| a.max(b));
    let xs = quadrature_nodes();
    let stirling: Vec<Vec<f64>> = (0..=r).map(stirling2).collect();
    let errs: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            let hd = h.derivatives(x, r);
            let ad = approximant_derivatives(&bern, x, r, &stirling);
            hd.iter().zip(&ad).map(|(a, b)| (a - b).abs()).collect()
        })
        .collect();
    let mut derivative_errors = Vec::new();
    for k in 0..=r {
        for j in 0..=k {
            let vals: Vec<f64> = xs.iter().zip(&errs).map(|(&x, e)| x.powi(k as i32) * e[j]).collect();
            let measured = simpson(&vals, QUAD_STEP);
            let bound = if j == 0 {
                eps * factorial(k)
            } else {
                eps * chain_rule_coefficients(j)
                    .iter()
                    .enumerate()
                    .map(|(l, c)| c.abs() * factorial(k) / ((l + 1) as f64).powi(k as i32 + 1))
                    .sum::<f64>()
            };
            derivative_errors.push(DerivativeError { j, k, measured, bound });
        }
    }
    let base = derivative_errors[0].measured;
    chain.stages.push(StageRecord {
        stage: "bernstein".into(),
        claimed: eps,
        measured: base,
    });
    chain.sup_errors = sup_errors;
    chain.eps = eps;
    chain.derivative_errors = derivative_errors;
    chain.coefficients = coefficients;
    chain.node_values = nodes;
    Ok(chain)
}

/// The full chain for θ⁺g (θ⁻g when `flip`): cutoff φ_ε, mollifier J_δ, then Bernstein.
pub fn approximation_chain(g: &Sampled, eps: f64, delta: f64, m: usize, r: usize, flip: bool) -> Result<ApproxChain> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("cutoff parameter {eps} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < eps / 2.0) {
        return Err(Error::Precondition(format!(
            "mollifier width {delta} must lie in (0, eps/2)"
        )));
    }
    let side = if flip { g.reflect() } else { g.clone() };
    let g_plus = side.positive_part();
    let cut = cutoff(&g_plus, eps);
    let cut_claim = {
        let outside = Sampled {
            x0: g_plus.x0,
            hx: g_plus.hx,
            values: (0..g_plus.len())
                .map(|i| {
                    let x = g_plus.x(i).abs();
                    if x < eps || x > 1.0 / eps {
                        g_plus.values[i]
                    } else {
                        0.0
                    }
                })
                .collect(),
        };
        outside.l1_norm()
    };
    let cut_measured = cut.l1_distance(&g_plus);
    let moll = mollify(&cut, delta);
    let moll_measured = moll.l1_distance(&cut);
    let shifts = (delta / cut.hx).floor() as i64;
    let moll_claim = (-shifts..=shifts)
        .map(|s| {
            let shifted = Sampled {
                x0: cut.x0 + s as f64 * cut.hx,
                hx: cut.hx,
                values: cut.values.clone(),
            };
            shifted.l1_distance(&cut)
        })
        .fold(0.0, f64::max);
    let profile = Mollified::new(cut.clone(), delta);
    let mut chain = bernstein_exp_sum(&profile, m, r)?;
    let bern = chain.stages.pop().expect("bernstein stage");
    chain.eps_cutoff = Some(eps);
    chain.delta_mollify = Some(delta);
    chain.flip = flip;
    let total_claim = cut_claim + moll_claim + bern.claimed;
    let total_measured = {
        let xs = quadrature_nodes();
        let bern_nodes = Bernstein::new(&chain.node_values, 0);
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let y = (-x).exp();
                (g_plus.at(x) - y * bern_nodes.derivative(0, y)).abs()
            })
            .collect();
        simpson(&vals, QUAD_STEP)
    };
    chain.stages = vec![
        StageRecord {
            stage: "cutoff".into(),
            claimed: cut_claim,
            measured: cut_measured,
        },
        StageRecord {
            stage: "mollify".into(),
            claimed: moll_claim,
            measured: moll_measured,
        },
        bern,
        StageRecord {
            stage: "total".into(),
            claimed: total_claim,
            measured: total_measured,
        },
    ];
    Ok(chain)
}
