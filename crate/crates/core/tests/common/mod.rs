//! Reference implementations used as oracles. None of these call into the
//! crate's numerical code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = r.random::<f64>().max(1e-300);
    let u2: f64 = r.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(r))
}

/// `A Aᵀ / n + eps I`, well conditioned for `n ≥ dim`.
pub fn random_spd(r: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let a = random_matrix(r, dim, dim + 4);
    &a * a.transpose() / (dim + 4) as f64 + DMatrix::identity(dim, dim) * 0.1
}

/// Per-entry dot products of a channels × samples trial.
pub fn naive_covariance(trial: &DMatrix<f64>) -> DMatrix<f64> {
    let (c, s) = trial.shape();
    let mut out = DMatrix::zeros(c, c);
    for i in 0..c {
        for j in 0..c {
            let mut acc = 0.0;
            for t in 0..s {
                acc += trial[(i, t)] * trial[(j, t)];
            }
            out[(i, j)] = acc / s as f64;
        }
    }
    out
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues and eigenvectors as columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

pub fn jacobi_fn(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (vals, v) = jacobi_eigen(a);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(vals.len(), vals.into_iter().map(f)));
    let out = &v * d * v.transpose();
    (&out + out.transpose()) * 0.5
}

pub fn oracle_logm(a: &DMatrix<f64>) -> DMatrix<f64> {
    jacobi_fn(a, f64::ln)
}

pub fn oracle_sqrtm(a: &DMatrix<f64>) -> DMatrix<f64> {
    jacobi_fn(a, f64::sqrt)
}

pub fn oracle_invsqrtm(a: &DMatrix<f64>) -> DMatrix<f64> {
    jacobi_fn(a, |x| 1.0 / x.sqrt())
}

/// Taylor series with scaling and squaring; works for any square matrix.
pub fn series_expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * scale;
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &x / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Tangent projection written out with the Jacobi path.
pub fn oracle_tangent(c: &DMatrix<f64>, reference: &DMatrix<f64>) -> DMatrix<f64> {
    let half = oracle_sqrtm(reference);
    let inv_half = oracle_invsqrtm(reference);
    let inner = &inv_half * c * &inv_half;
    let inner = (&inner + inner.transpose()) * 0.5;
    &half * oracle_logm(&inner) * &half
}

pub fn oracle_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let ia = oracle_invsqrtm(a);
    let m = &ia * b * &ia;
    let (vals, _) = jacobi_eigen(&((&m + m.transpose()) * 0.5));
    vals.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt()
}

/// Fixed-point Riemannian mean via the Jacobi path.
pub fn oracle_riemann_mean(mats: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = mats[0].nrows();
    let mut m = mats.iter().fold(DMatrix::zeros(n, n), |acc, x| acc + x) / mats.len() as f64;
    for _ in 0..200 {
        let half = oracle_sqrtm(&m);
        let inv_half = oracle_invsqrtm(&m);
        let mut t = DMatrix::zeros(n, n);
        for x in mats {
            let inner = &inv_half * x * &inv_half;
            t += oracle_logm(&((&inner + inner.transpose()) * 0.5));
        }
        t /= mats.len() as f64;
        let step = jacobi_fn(&t, f64::exp);
        m = &half * step * &half;
        m = (&m + m.transpose()) * 0.5;
        if t.norm() < 1e-12 {
            break;
        }
    }
    m
}

/// Minimum distance to class Riemannian means, trained on `train`,
/// scored on `test`.
pub fn oracle_mdm_accuracy(covs: &[DMatrix<f64>], labels: &[usize], train: &[usize], test: &[usize]) -> f64 {
    let k = labels.iter().max().unwrap() + 1;
    let centroids: Vec<DMatrix<f64>> = (0..k)
        .map(|c| {
            let members: Vec<DMatrix<f64>> =
                train.iter().filter(|&&i| labels[i] == c).map(|&i| covs[i].clone()).collect();
            oracle_riemann_mean(&members)
        })
        .collect();
    let hits = test
        .iter()
        .filter(|&&i| {
            let d: Vec<f64> = centroids.iter().map(|m| oracle_distance(m, &covs[i])).collect();
            let best = (0..k).min_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap()).unwrap();
            best == labels[i]
        })
        .count();
    hits as f64 / test.len() as f64
}

pub fn count_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let mut hits = 0usize;
    for i in 0..pred.len() {
        if pred[i] == truth[i] {
            hits += 1;
        }
    }
    hits as f64 / pred.len() as f64
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Two-sided Student-t tail probability by quadrature of the unnormalized
/// density, normalized numerically over the whole line (x = tan θ).
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    let g = move |x: f64| (1.0 + x * x / df).powf(-(df + 1.0) / 2.0);
    let on_circle = move |th: f64| {
        let c = th.cos();
        if c <= 0.0 {
            0.0
        } else {
            g(th.tan()) / (c * c)
        }
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let total = adaptive_simpson(&on_circle, -half_pi, half_pi, 1e-14);
    let theta = t.abs().atan();
    let tails = 2.0 * adaptive_simpson(&on_circle, theta, half_pi, 1e-14);
    tails / total
}

/// Paired t statistic and quadrature p-value.
pub fn oracle_paired_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = mean / (var.sqrt() / n.sqrt());
    (t, t_two_sided_p(t, n - 1.0))
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}
