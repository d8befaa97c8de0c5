//! Dense symmetric eigensolvers: Householder tridiagonalization, implicit QL,
//! tridiagonal inverse iteration, and cyclic Jacobi for small matrices.

use alloc::vec;
use alloc::vec::Vec;

use libm::{fabs, hypot, sqrt};

use crate::error::{Error, Result};

/// Orthogonal similarity `Qᵀ A Q = T` of a symmetric matrix.
pub(crate) struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples `i` and `i + 1`; `off[n-1] = 0`.
    pub off: Vec<f64>,
    reflectors: Vec<(usize, Vec<f64>, f64)>,
}

impl Tridiagonal {
    /// Reduces the row-major symmetric `a` (consumed) in place. Only the
    /// lower triangle is read or written. Each step's rank-2 update is fused
    /// with the next step's matrix-vector product, so the trailing block is
    /// streamed once per step.
    pub fn reduce(mut a: Vec<f64>, n: usize) -> Tridiagonal {
        let mut off = vec![0.0; n];
        let mut reflectors = Vec::new();
        // `(v, tau · A22 v)` for the reflector of column `k`, when the
        // previous pass already computed it.
        let mut pending: Option<(Vec<f64>, Vec<f64>)> = None;
        let mut col = vec![0.0; n];
        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1;
            let column: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
            let Some((v, tau, alpha)) = householder(column.clone()) else {
                off[k] = column[0];
                pending = None;
                continue;
            };
            let mut p = match pending.take() {
                Some((w, p)) if w == v => p,
                _ => {
                    let mut p = vec![0.0; m];
                    sym_lower_matvec(&a, n, k + 1, &v, &mut p);
                    p.iter_mut().for_each(|x| *x *= tau);
                    p
                }
            };
            let kk = 0.5 * tau * dot(&p, &v);
            for (pi, vi) in p.iter_mut().zip(&v) {
                *pi -= kk * vi;
            }
            // first column of the updated trailing block, for the next reflector
            for i in 0..m {
                // same expression as the update below, so the bits agree
                col[i] = a[(k + 1 + i) * n + k + 1] - (v[i] * p[0] + p[i] * v[0]);
            }
            let next = if m >= 3 { householder(col[1..m].to_vec()) } else { None };
            let mut q = vec![0.0; m.saturating_sub(1)];
            for i in 0..m {
                let row = (k + 1 + i) * n + k + 1;
                let (vi, pi) = (v[i], p[i]);
                let seg = &mut a[row..=row + i];
                for ((x, &vj), &pj) in seg.iter_mut().zip(&v).zip(&p) {
                    *x -= vi * pj + pi * vj;
                }
                if let (Some((w, _, _)), true) = (&next, i >= 1) {
                    // row i of the next block is seg[1..=i]; w is indexed from 1
                    let r = &seg[1..=i];
                    let wi = w[i - 1];
                    q[i - 1] += dot(&r[..i - 1], &w[..i - 1]) + r[i - 1] * wi;
                    for (qj, &x) in q[..i - 1].iter_mut().zip(&r[..i - 1]) {
                        *qj += x * wi;
                    }
                }
            }
            if let Some((w, tau2, _)) = next {
                q.iter_mut().for_each(|x| *x *= tau2);
                pending = Some((w, q));
            }
            off[k] = alpha;
            reflectors.push((k + 1, v, tau));
        }
        if n >= 2 {
            off[n - 2] = a[(n - 1) * n + n - 2];
        }
        let diag = (0..n).map(|i| a[i * n + i]).collect();
        Tridiagonal {
            diag,
            off,
            reflectors,
        }
    }

}

/// Householder vector `v` and `tau = 2/vᵀv` with `(I − tau v vᵀ) x = alpha e₁`,
/// or `None` when `x` is already a multiple of `e₁`.
fn householder(mut v: Vec<f64>) -> Option<(Vec<f64>, f64, f64)> {
    let tail: f64 = v[1..].iter().map(|x| x * x).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = sqrt(v[0] * v[0] + tail);
    let alpha = if v[0] > 0.0 { -norm } else { norm };
    v[0] -= alpha;
    let vtv: f64 = dot(&v, &v);
    Some((v, 2.0 / vtv, alpha))
}

/// `p = B v` for the trailing block `B` starting at `(s, s)`, read from the
/// lower triangle.
fn sym_lower_matvec(a: &[f64], n: usize, s: usize, v: &[f64], p: &mut [f64]) {
    p.iter_mut().for_each(|x| *x = 0.0);
    for i in 0..v.len() {
        let r = &a[(s + i) * n + s..=(s + i) * n + s + i];
        p[i] += dot(&r[..i], &v[..i]) + r[i] * v[i];
        for (pj, &x) in p[..i].iter_mut().zip(&r[..i]) {
            *pj += x * v[i];
        }
    }
}

/// Dot product with independent partial sums, which lets the compiler
/// vectorize the loop.
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let xs = x.chunks_exact(8);
    let ys = y.chunks_exact(8);
    let tail: f64 = xs.remainder().iter().zip(ys.remainder()).map(|(a, b)| a * b).sum();
    for (a, b) in xs.zip(ys) {
        for k in 0..8 {
            acc[k] += a[k] * b[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

impl Tridiagonal {
    /// Maps an eigenvector of `T` back to one of `A`.
    pub fn back_transform(&self, y: &mut [f64]) {
        for (start, v, tau) in self.reflectors.iter().rev() {
            let seg = &mut y[*start..*start + v.len()];
            let dot: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
            for (s, vi) in seg.iter_mut().zip(v) {
                *s -= tau * dot * vi;
            }
        }
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix (implicit QL with
/// Wilkinson shifts), ascending.
pub(crate) fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = fabs(d[m]) + fabs(d[m + 1]);
                if fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: fabs(e[l]),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvector of the tridiagonal `(diag, off)` for an eigenvalue estimate,
/// by inverse iteration with a partially pivoted LU.
pub(crate) fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64, seed: u64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag.iter().chain(off).fold(0.0f64, |m, x| m.max(fabs(*x))).max(1.0);
    let shift = lambda + 1e-13 * scale;
    let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    let mut du: Vec<f64> = off[..n.saturating_sub(1)].to_vec();
    let mut dl = du.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if fabs(d[i]) >= fabs(dl[i]) {
            if d[i] != 0.0 {
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    let tiny = f64::EPSILON * scale;
    for x in d.iter_mut() {
        if fabs(*x) < tiny {
            *x = tiny;
        }
    }

    let mut b = pseudo_random_vector(n, seed);
    for _ in 0..3 {
        for i in 0..n.saturating_sub(1) {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
        normalize(&mut b);
    }
    b
}

/// Eigen-decomposition of a small dense symmetric matrix by cyclic Jacobi.
/// Returns ascending eigenvalues and the matching eigenvectors as columns of
/// a row-major `m × m` matrix.
pub(crate) fn jacobi_eigen(mut a: Vec<f64>, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += a[p * m + q] * a[p * m + q];
            }
        }
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k * m + p], a[k * m + q]);
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p * m + k], a[q * m + k]);
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let (vkp, vkq) = (v[k * m + p], v[k * m + q]);
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i * m + i].total_cmp(&a[j * m + j]));
    let vals = order.iter().map(|&i| a[i * m + i]).collect();
    let mut vecs = vec![0.0; m * m];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..m {
            vecs[k * m + new] = v[k * m + old];
        }
    }
    (vals, vecs)
}

pub(crate) fn normalize(x: &mut [f64]) -> f64 {
    let norm = sqrt(x.iter().map(|v| v * v).sum());
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

/// Fixed pseudo-random vector in `[-0.5, 0.5)^n` (splitmix64); results are
/// reproducible run to run.
pub(crate) fn pseudo_random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}
