//! Small dense symmetric eigenproblems (cyclic Jacobi) and helpers.

use crate::scalar::Real;

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix.
pub(crate) fn sym_eig<T: Real>(a: &[Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag + m[i][i] * m[i][i];
            for j in (i + 1)..n {
                off = off + m[i][j] * m[i][j];
            }
        }
        if off <= T::epsilon() * T::epsilon() * diag.max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (T::lit(2.0) * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[i][i]).collect();
    let vecs = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (vals, vecs)
}

/// Solves a tridiagonal system with sub-diagonal `a` (a[0] unused),
/// diagonal `b`, super-diagonal `c` (c[n-1] unused). Thomas algorithm.
pub(crate) fn solve_tridiagonal<T: Real>(a: &[T], b: &[T], c: &[T], d: &[T]) -> Vec<T> {
    let n = b.len();
    let mut cp = vec![T::zero(); n];
    let mut dp = vec![T::zero(); n];
    let tiny = T::min_positive_value().sqrt();
    let guard = |x: T| if x.abs() < tiny { if x < T::zero() { -tiny } else { tiny } } else { x };
    let mut den = guard(b[0]);
    if n > 1 {
        cp[0] = c[0] / den;
    }
    dp[0] = d[0] / den;
    for i in 1..n {
        den = guard(b[i] - a[i] * cp[i - 1]);
        if i + 1 < n {
            cp[i] = c[i] / den;
        }
        dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    let mut x = dp;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = x[i + 1];
        x[i] = x[i] - cp[i] * next;
    }
    x
}

/// Solves a cyclic tridiagonal system: as [`solve_tridiagonal`] plus the
/// corner entries `alpha = A[n-1][0]` and `beta = A[0][n-1]`
/// (Sherman–Morrison).
pub(crate) fn solve_cyclic_tridiagonal<T: Real>(
    a: &[T],
    b: &[T],
    c: &[T],
    alpha: T,
    beta: T,
    d: &[T],
) -> Vec<T> {
    let n = b.len();
    if n < 3 {
        let mut bb = b.to_vec();
        let mut cc = c.to_vec();
        let mut aa = a.to_vec();
        if n == 2 {
            cc[0] = cc[0] + beta;
            aa[1] = aa[1] + alpha;
        } else {
            bb[0] = bb[0] + alpha + beta;
        }
        return solve_tridiagonal(&aa, &bb, &cc, d);
    }
    let gamma = if b[0] != T::zero() { -b[0] } else { -T::one() };
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(a, &bb, c, d);
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(a, &bb, c, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (T::one() + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes() {
        let a = vec![
            vec![4.0f64, 1.0, -2.0],
            vec![1.0, 2.0, 0.5],
            vec![-2.0, 0.5, -3.0],
        ];
        let (vals, vecs) = sym_eig(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (l, v) in vals.iter().zip(&vecs) {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * v[j]).sum();
                assert!((av - l * v[i]).abs() < 1e-12);
            }
        }
        let tr: f64 = vals.iter().sum();
        assert!((tr - 3.0).abs() < 1e-12);
    }

    fn apply(a: &[f64], b: &[f64], c: &[f64], alpha: f64, beta: f64, x: &[f64]) -> Vec<f64> {
        let n = b.len();
        (0..n)
            .map(|i| {
                let mut s = b[i] * x[i];
                if i > 0 {
                    s += a[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += c[i] * x[i + 1];
                }
                if i == 0 {
                    s += beta * x[n - 1];
                }
                if i == n - 1 {
                    s += alpha * x[0];
                }
                s
            })
            .collect()
    }

    #[test]
    fn tridiagonal_solvers_invert() {
        let n = 9;
        let a: Vec<f64> = (0..n).map(|i| 0.3 + 0.1 * i as f64).collect();
        let b: Vec<f64> = (0..n).map(|i| 3.0 + (i as f64).sin()).collect();
        let c: Vec<f64> = (0..n).map(|i| -0.7 + 0.05 * i as f64).collect();
        let d: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).cos()).collect();
        let x = solve_tridiagonal(&a, &b, &c, &d);
        let r = apply(&a, &b, &c, 0.0, 0.0, &x);
        assert!(r.iter().zip(&d).all(|(u, v)| (u - v).abs() < 1e-12));
        let x = solve_cyclic_tridiagonal(&a, &b, &c, 0.4, -0.6, &d);
        let r = apply(&a, &b, &c, 0.4, -0.6, &x);
        assert!(r.iter().zip(&d).all(|(u, v)| (u - v).abs() < 1e-12));
    }
}
