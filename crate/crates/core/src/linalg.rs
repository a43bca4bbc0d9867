//! Dense and matrix-free linear algebra shared by the operator modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation from the conjugate transpose.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn trace(m: &CMatrix) -> Result<Complex64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.trace())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Deterministic, generic start vector for Krylov iterations.
fn start_vector(n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = i as f64;
            Complex64::new(1.0 + 0.5 * (1.618_033_988 * x + 0.3).sin(), 0.4 * (2.414_213_56 * x).cos())
        })
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|z| *z /= s);
    v
}

/// Extreme eigenvalue estimates from a Lanczos run.
#[derive(Debug, Clone, Copy)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    pub iterations: usize,
}

/// Lanczos iteration with full reorthogonalisation for a Hermitian operator
/// given only by its action. Ritz values bracket the spectrum from inside.
pub fn lanczos_extremes<F>(n: usize, apply: F, max_iter: usize, rel_tol: f64) -> Extremes
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    lanczos(n, apply, max_iter, rel_tol, true)
}

/// Lanczos iteration keeping only the three-term recurrence. Orthogonality
/// decays once Ritz values converge, which duplicates them but leaves the
/// extreme ones inside the spectrum up to rounding; memory and work per step
/// are linear in `n`.
pub fn lanczos_extremes_short<F>(n: usize, apply: F, max_iter: usize, rel_tol: f64) -> Extremes
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    lanczos(n, apply, max_iter, rel_tol, false)
}

fn lanczos<F>(n: usize, apply: F, max_iter: usize, rel_tol: f64, full: bool) -> Extremes
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let max_iter = max_iter.min(n).max(1);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_iter);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = start_vector(n);
    let mut last = (f64::NAN, f64::NAN);
    let mut result = Extremes {
        min: 0.0,
        max: 0.0,
        iterations: 0,
    };
    for it in 0..max_iter {
        let mut w = apply(&q);
        let a = dot(&q, &w).re;
        alpha.push(a);
        if !full && basis.len() == 2 {
            basis.remove(0);
        }
        basis.push(q);
        // two passes of classical Gram-Schmidt against the retained basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        let converged_space = b <= 1e-13 * alpha.iter().map(|x| x.abs()).fold(1e-300, f64::max);

        if it % 5 == 4 || converged_space || it + 1 == max_iter {
            let (lo, hi) = tridiagonal_extremes(&alpha, &beta);
            result = Extremes {
                min: lo,
                max: hi,
                iterations: it + 1,
            };
            let scale = lo.abs().max(hi.abs()).max(1e-300);
            if converged_space
                || ((lo - last.0).abs() <= rel_tol * scale && (hi - last.1).abs() <= rel_tol * scale)
            {
                return result;
            }
            last = (lo, hi);
        }
        if converged_space {
            break;
        }
        beta.push(b);
        q = w.into_iter().map(|z| z / b).collect();
    }
    result
}

/// Smallest and largest eigenvalue of the symmetric tridiagonal matrix with
/// diagonal `alpha` and off-diagonal `beta`, by Sturm-count bisection.
fn tridiagonal_extremes(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let off = |i: usize| if i < beta.len() && i + 1 < alpha.len() { beta[i].abs() } else { 0.0 };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &a) in alpha.iter().enumerate() {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(a - r);
        hi = hi.max(a + r);
    }
    // number of eigenvalues strictly below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in alpha.iter().enumerate() {
            let b2 = if i > 0 { off(i - 1).powi(2) } else { 0.0 };
            d = a - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bisect = |target: usize| {
        let (mut a, mut b) = (lo, hi);
        while b - a > 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if below(mid) >= target {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    (bisect(1), bisect(alpha.len()))
}

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgSolution {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Conjugate gradient for a Hermitian positive-definite operator.
pub fn conjugate_gradient<F>(apply: F, rhs: &[Complex64], rel_tol: f64, max_iter: usize) -> CgSolution
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = rhs.len();
    let bnorm = norm(rhs);
    let mut x = vec![ZERO; n];
    if bnorm == 0.0 {
        return CgSolution {
            x,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    for it in 0..max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap).re;
        if pap <= 0.0 {
            return CgSolution {
                x,
                iterations: it,
                relative_residual: rr.sqrt() / bnorm,
                converged: false,
            };
        }
        let step = rr / pap;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= step * api);
        let rr_new = dot(&r, &r).re;
        if rr_new.sqrt() <= rel_tol * bnorm {
            // recompute the true residual to guard against drift
            let ax = apply(&x);
            let true_res = rhs.iter().zip(&ax).map(|(b, y)| (b - y).norm_sqr()).sum::<f64>().sqrt() / bnorm;
            if true_res <= rel_tol {
                return CgSolution {
                    x,
                    iterations: it + 1,
                    relative_residual: true_res,
                    converged: true,
                };
            }
            r = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
            p = r.clone();
            rr = dot(&r, &r).re;
            continue;
        }
        let ratio = rr_new / rr;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + ratio * *pi);
        rr = rr_new;
    }
    let ax = apply(&x);
    let res = rhs.iter().zip(&ax).map(|(b, y)| (b - y).norm_sqr()).sum::<f64>().sqrt() / bnorm;
    CgSolution {
        x,
        iterations: max_iter,
        relative_residual: res,
        converged: res <= rel_tol,
    }
}

/// Dense solve via LU; `None` if the matrix is singular.
pub fn dense_solve(m: &CMatrix, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let b = DVector::from_column_slice(rhs);
    m.clone().lu().solve(&b).map(|x| x.iter().copied().collect())
}

pub fn mat_vec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (m * DVector::from_column_slice(v)).iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> CMatrix {
        let n = values.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { ZERO })
    }

    #[test]
    fn lanczos_matches_dense_on_diagonal() {
        let values: Vec<f64> = (0..60).map(|i| 0.5 + (i as f64) * 0.1).collect();
        let m = diag(&values);
        let ext = lanczos_extremes(60, |v| mat_vec(&m, v), 60, 1e-12);
        assert!((ext.min - 0.5).abs() < 1e-9);
        assert!((ext.max - 6.4).abs() < 1e-9);
    }

    #[test]
    fn cg_solves_spd_system() {
        let n = 20;
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(4.0, 0.0)
            } else if i + 1 == j {
                Complex64::new(1.0, 0.5)
            } else if j + 1 == i {
                Complex64::new(1.0, -0.5)
            } else {
                ZERO
            }
        });
        let rhs: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let sol = conjugate_gradient(|v| mat_vec(&m, v), &rhs, 1e-13, 200);
        assert!(sol.converged);
        let back = mat_vec(&m, &sol.x);
        let err = back.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-11);
    }

    #[test]
    fn trace_rejects_rectangular() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(trace(&m), Err(Error::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn tridiagonal_bisection_matches_dense_eigenvalues() {
        for k in [1usize, 2, 7, 40] {
            let alpha: Vec<f64> = (0..k).map(|i| (1.3 * i as f64).sin() * 3.0).collect();
            let beta: Vec<f64> = (0..k.saturating_sub(1)).map(|i| 0.5 + (0.7 * i as f64).cos()).collect();
            let mut t = DMatrix::<f64>::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = alpha[i];
                if i + 1 < k {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let ev = t.symmetric_eigenvalues();
            let (lo, hi) = tridiagonal_extremes(&alpha, &beta);
            assert!((lo - ev.min()).abs() <= 1e-13 * ev.amax().max(1.0), "k {k}");
            assert!((hi - ev.max()).abs() <= 1e-13 * ev.amax().max(1.0), "k {k}");
        }
    }
}
