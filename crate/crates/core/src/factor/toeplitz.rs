//! Block-Toeplitz finite sections and the non-Hermitian block Levinson recursion.

use crate::error::{Error, Result};
use crate::linalg::{rcond, CMat, C64};
use rustfft::FftPlanner;

use crate::wiener::MatrixCircle;

/// Reciprocal condition below which a Levinson pivot counts as singular.
const PIVOT_RCOND: f64 = 1e-14;
/// Iteration cap and relative normal-equation residual target of CGLS.
const CGLS_MAX_ITER: usize = 4000;
const CGLS_TOL: f64 = 1e-13;
/// Least-squares residual above which the overdetermined system counts as inconsistent.
const LSQ_ACCEPT: f64 = 1e-9;

/// out (n×q) += a (n×p) · b (p×q), row-major slices.
#[inline]
fn mm_acc(out: &mut [C64], a: &[C64], b: &[C64], n: usize, p: usize, q: usize) {
    for i in 0..n {
        for k in 0..p {
            let aik = a[i * p + k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            let brow = &b[k * q..(k + 1) * q];
            let orow = &mut out[i * q..(i + 1) * q];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

fn to_mat(a: &[C64], n: usize) -> CMat {
    CMat::from_row_slice(n, n, a)
}

fn from_mat(m: &CMat) -> Vec<C64> {
    let n = m.nrows();
    (0..n * n).map(|e| m[(e / n, e % n)]).collect()
}

/// Inverse of a pivot block, or `None` when it is numerically singular.
fn pivot_inverse(a: &[C64], n: usize) -> Option<Vec<C64>> {
    let m = to_mat(a, n);
    if rcond(&m) < PIVOT_RCOND {
        return None;
    }
    m.try_inverse().map(|inv| from_mat(&inv))
}

/// T_M with blocks t_{j−k}, j,k = 0..=M, from the Fourier blocks of a matrix symbol.
#[derive(Clone, Debug)]
pub struct BlockToeplitz {
    n: usize,
    order: usize,
    /// Blocks t_k for k = −M..=M, row-major n×n each.
    blocks: Vec<C64>,
}

impl BlockToeplitz {
    pub fn from_symbol(b: &MatrixCircle, order: usize) -> Self {
        let n = b.dim();
        let mut blocks = Vec::with_capacity((2 * order + 1) * n * n);
        for k in -(order as i64)..=order as i64 {
            for r in 0..n {
                for c in 0..n {
                    blocks.push(b.entry(r, c).coeff(k));
                }
            }
        }
        Self { n, order, blocks }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn block(&self, k: i64) -> &[C64] {
        let nn = self.n * self.n;
        let idx = (k + self.order as i64) as usize;
        &self.blocks[idx * nn..(idx + 1) * nn]
    }

    /// T^H, again block Toeplitz with blocks s_k = t_{−k}^H.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for k in -(self.order as i64)..=self.order as i64 {
            let b = self.block(-k);
            for r in 0..n {
                for c in 0..n {
                    blocks.push(b[c * n + r].conj());
                }
            }
        }
        Self {
            n,
            order: self.order,
            blocks,
        }
    }

    /// Dense form, for tests.
    pub fn dense(&self) -> CMat {
        let n = self.n;
        let d = (self.order + 1) * n;
        CMat::from_fn(d, d, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            self.block(bi as i64 - bj as i64)[ri * n + rj]
        })
    }

    /// Solves T_M X = Y for `cols` right-hand sides by the block Levinson recursion.
    /// `rhs` holds M+1 blocks of n×cols, row-major; the solution has the same layout.
    /// Every leading section must be invertible, otherwise the recursion breaks down.
    pub fn solve(&self, rhs: &[C64], cols: usize) -> Result<Vec<C64>> {
        self.levinson(rhs, cols)
    }

    /// out_a = Σ_b u_{a−b} in_b for a ∈ [0, rows], b ∈ [0, cols], one column, by FFT.
    /// `adjoint` uses u_d = t_{−d}^H, otherwise u_d = t_d.
    fn conv_apply(
        &self,
        input: &[C64],
        rows: usize,
        cols: usize,
        adjoint: bool,
        planner: &mut FftPlanner<f64>,
    ) -> Vec<C64> {
        let n = self.n;
        let p = (rows + 2 * cols + 1).next_power_of_two();
        let fwd = planner.plan_fft_forward(p);
        let inv = planner.plan_fft_inverse(p);
        let zero = C64::new(0.0, 0.0);
        let ins: Vec<Vec<C64>> = (0..n)
            .map(|c| {
                let mut buf = vec![zero; p];
                for b in 0..=cols {
                    buf[b] = input[b * n + c];
                }
                fwd.process(&mut buf);
                buf
            })
            .collect();
        let mut out = vec![zero; (rows + 1) * n];
        for r in 0..n {
            let mut acc = vec![zero; p];
            for (c, xc) in ins.iter().enumerate() {
                let mut u = vec![zero; p];
                for (i, slot) in u.iter_mut().take(rows + cols + 1).enumerate() {
                    let d = i as i64 - cols as i64;
                    *slot = if adjoint {
                        self.block(-d)[c * n + r].conj()
                    } else {
                        self.block(d)[r * n + c]
                    };
                }
                fwd.process(&mut u);
                for ((a, uu), xx) in acc.iter_mut().zip(&u).zip(xc) {
                    *a += uu * xx;
                }
            }
            inv.process(&mut acc);
            for a in 0..=rows {
                out[a * n + r] = acc[a + cols] / p as f64;
            }
        }
        out
    }

    /// Least-squares solution of the overdetermined section with block rows 0..=order
    /// and block columns 0..=m against [I; 0; …], by CGLS with FFT products.
    pub fn lsq_unit(&self, m: usize) -> Result<Vec<CMat>> {
        let n = self.n;
        let rows = self.order;
        assert!(m <= rows);
        let d_in = (m + 1) * n;
        let d_out = (rows + 1) * n;
        let mut planner = FftPlanner::new();
        let norm2 = |v: &[C64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>();
        let mut sol = vec![C64::new(0.0, 0.0); d_in * n];
        for col in 0..n {
            let mut b = vec![C64::new(0.0, 0.0); d_out];
            b[col] = C64::new(1.0, 0.0);
            let mut x = vec![C64::new(0.0, 0.0); d_in];
            let mut r = b.clone();
            let mut s = self.conv_apply(&r, m, rows, true, &mut planner);
            let mut p = s.clone();
            let mut gamma = norm2(&s);
            let g0 = gamma;
            for _ in 0..CGLS_MAX_ITER {
                if gamma <= CGLS_TOL * CGLS_TOL * g0 {
                    break;
                }
                let q = self.conv_apply(&p, rows, m, false, &mut planner);
                let alpha = gamma / norm2(&q);
                for i in 0..d_in {
                    x[i] += p[i] * alpha;
                }
                for i in 0..d_out {
                    r[i] -= q[i] * alpha;
                }
                s = self.conv_apply(&r, m, rows, true, &mut planner);
                let g = norm2(&s);
                let beta = g / gamma;
                gamma = g;
                for i in 0..d_in {
                    p[i] = s[i] + p[i] * beta;
                }
            }
            let res = self.conv_apply(&x, rows, m, false, &mut planner);
            let err = res
                .iter()
                .zip(&b)
                .map(|(a, bb)| (a - bb).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if err.is_nan() || err > LSQ_ACCEPT {
                return Err(Error::Breakdown {
                    step: m,
                    cond: f64::INFINITY,
                });
            }
            for i in 0..d_in {
                sol[i * n + col] = x[i];
            }
        }
        Ok(sol.chunks(n * n).map(|blk| to_mat(blk, n)).collect())
    }

    /// Dense overdetermined section with block rows 0..=order and block columns 0..=m.
    pub fn dense_rect(&self, m: usize) -> CMat {
        let n = self.n;
        CMat::from_fn((self.order + 1) * n, (m + 1) * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            self.block(bi as i64 - bj as i64)[ri * n + rj]
        })
    }

    fn levinson(&self, rhs: &[C64], cols: usize) -> Result<Vec<C64>> {
        let n = self.n;
        let nn = n * n;
        let nc = n * cols;
        let m = self.order;
        assert_eq!(rhs.len(), (m + 1) * nc);
        let mut f = vec![C64::new(0.0, 0.0); (m + 1) * nn];
        let mut g = vec![C64::new(0.0, 0.0); (m + 1) * nn];
        let mut f_next = f.clone();
        let mut g_next = g.clone();
        for d in 0..n {
            f[d * n + d] = C64::new(1.0, 0.0);
            g[d * n + d] = C64::new(1.0, 0.0);
        }
        let mut ef = self.block(0).to_vec();
        let mut eg = ef.clone();
        let breakdown = |step: usize| Error::Breakdown {
            step,
            cond: f64::INFINITY,
        };
        let eg_inv0 = pivot_inverse(&eg, n).ok_or_else(|| breakdown(0))?;
        let mut x = vec![C64::new(0.0, 0.0); (m + 1) * nc];
        mm_acc(&mut x[..nc], &eg_inv0, &rhs[..nc], n, n, cols);

        let mut alpha = vec![C64::new(0.0, 0.0); nn];
        let mut beta = vec![C64::new(0.0, 0.0); nn];
        let mut gamma = vec![C64::new(0.0, 0.0); nn];
        let mut rho = vec![C64::new(0.0, 0.0); nn];
        let mut theta = vec![C64::new(0.0, 0.0); nc];
        for step in 0..m {
            alpha.fill(C64::new(0.0, 0.0));
            beta.fill(C64::new(0.0, 0.0));
            for k in 0..=step {
                mm_acc(
                    &mut alpha,
                    self.block((step + 1 - k) as i64),
                    &f[k * nn..(k + 1) * nn],
                    n,
                    n,
                    n,
                );
                mm_acc(&mut beta, self.block(-1 - k as i64), &g[k * nn..(k + 1) * nn], n, n, n);
            }
            let eg_inv = pivot_inverse(&eg, n).ok_or_else(|| breakdown(step + 1))?;
            let ef_inv = pivot_inverse(&ef, n).ok_or_else(|| breakdown(step + 1))?;
            gamma.fill(C64::new(0.0, 0.0));
            rho.fill(C64::new(0.0, 0.0));
            mm_acc(&mut gamma, &eg_inv, &alpha, n, n, n);
            mm_acc(&mut rho, &ef_inv, &beta, n, n, n);
            gamma.iter_mut().for_each(|v| *v = -*v);
            rho.iter_mut().for_each(|v| *v = -*v);
            // f' = [f; 0] + [0; g]γ,  g' = [0; g] + [f; 0]ρ
            f_next[..(step + 2) * nn].fill(C64::new(0.0, 0.0));
            g_next[..(step + 2) * nn].fill(C64::new(0.0, 0.0));
            for k in 0..=step + 1 {
                let dst_f = &mut f_next[k * nn..(k + 1) * nn];
                if k <= step {
                    dst_f.copy_from_slice(&f[k * nn..(k + 1) * nn]);
                }
                if k >= 1 {
                    mm_acc(dst_f, &g[(k - 1) * nn..k * nn], &gamma, n, n, n);
                }
                let dst_g = &mut g_next[k * nn..(k + 1) * nn];
                if k >= 1 {
                    dst_g.copy_from_slice(&g[(k - 1) * nn..k * nn]);
                }
                if k <= step {
                    mm_acc(dst_g, &f[k * nn..(k + 1) * nn], &rho, n, n, n);
                }
            }
            mm_acc(&mut ef, &beta, &gamma, n, n, n);
            mm_acc(&mut eg, &alpha, &rho, n, n, n);
            std::mem::swap(&mut f, &mut f_next);
            std::mem::swap(&mut g, &mut g_next);

            // x' = [x; 0] + g' (ε^g)⁻¹ (y_{step+1} − Σ t_{step+1−k} x_k)
            theta.copy_from_slice(&rhs[(step + 1) * nc..(step + 2) * nc]);
            theta.iter_mut().for_each(|v| *v = -*v);
            for k in 0..=step {
                mm_acc(
                    &mut theta,
                    self.block((step + 1 - k) as i64),
                    &x[k * nc..(k + 1) * nc],
                    n,
                    n,
                    cols,
                );
            }
            theta.iter_mut().for_each(|v| *v = -*v);
            let eg_inv = pivot_inverse(&eg, n).ok_or_else(|| breakdown(step + 1))?;
            let mut coef = vec![C64::new(0.0, 0.0); nc];
            mm_acc(&mut coef, &eg_inv, &theta, n, n, cols);
            for k in 0..=step + 1 {
                mm_acc(
                    &mut x[k * nc..(k + 1) * nc],
                    &g[k * nn..(k + 1) * nn],
                    &coef,
                    n,
                    n,
                    cols,
                );
            }
        }
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(breakdown(m));
        }
        Ok(x)
    }

    /// Solution of T_M X = [I; 0; …; 0] as M+1 blocks.
    pub fn solve_unit(&self) -> Result<Vec<CMat>> {
        let n = self.n;
        let mut rhs = vec![C64::new(0.0, 0.0); (self.order + 1) * n * n];
        for d in 0..n {
            rhs[d * n + d] = C64::new(1.0, 0.0);
        }
        let x = self.solve(&rhs, n)?;
        Ok(x.chunks(n * n).map(|b| to_mat(b, n)).collect())
    }

    /// ‖T_M‖₁ (largest column sum).
    pub fn norm1(&self) -> f64 {
        let n = self.n;
        let m = self.order as i64;
        // colsum[d][c] = Σ_r |t_d[r][c]|, prefix-summed over d
        let mut prefix = vec![vec![0.0; n]; (2 * m + 2) as usize];
        for d in -m..=m {
            let b = self.block(d);
            let i = (d + m) as usize;
            for c in 0..n {
                let s: f64 = (0..n).map(|r| b[r * n + c].norm()).sum();
                prefix[i + 1][c] = prefix[i][c] + s;
            }
        }
        let mut best = 0.0f64;
        for k in 0..=m {
            // blocks t_{j−k}, j = 0..=M → d ∈ [−k, M−k]
            let (lo, hi) = ((-k + m) as usize, (m - k + m) as usize);
            for c in 0..n {
                best = best.max(prefix[hi + 1][c] - prefix[lo][c]);
            }
        }
        best
    }

    /// Hager–Higham estimate of the 1-norm condition number.
    pub fn cond1_estimate(&self) -> Result<f64> {
        let d = (self.order + 1) * self.n;
        let adj = self.adjoint();
        let mut x = vec![C64::new(1.0 / d as f64, 0.0); d];
        let mut est = 0.0f64;
        let mut last_j = usize::MAX;
        for iter in 0..5 {
            let y = self.solve(&x, 1)?;
            est = est.max(y.iter().map(|v| v.norm()).sum());
            let xi: Vec<C64> = y
                .iter()
                .map(|v| {
                    if v.norm() > 0.0 {
                        v / v.norm()
                    } else {
                        C64::new(1.0, 0.0)
                    }
                })
                .collect();
            let z = adj.solve(&xi, 1)?;
            let (j, zmax) = z.iter().enumerate().fold(
                (0, 0.0f64),
                |acc, (i, v)| if v.norm() > acc.1 { (i, v.norm()) } else { acc },
            );
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if (iter > 0 && zmax <= ztx) || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            x[j] = C64::new(1.0, 0.0);
        }
        Ok(est * self.norm1())
    }
}
