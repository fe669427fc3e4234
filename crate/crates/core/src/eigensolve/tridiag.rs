//! Symmetric (optionally cyclic) tridiagonal eigenproblems: Sturm-count
//! bisection for eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};
use crate::linalg::solve_cyclic_tridiagonal;
use crate::scalar::Real;

/// Symmetric matrix with diagonal `diag`, off-diagonal `off[i] = A[i][i+1]`
/// and corner `A[0][n-1] = A[n-1][0] = corner` (zero for open chains).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
    pub corner: T,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>, corner: T) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        Self { diag, off, corner }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`, from the inertia of the
    /// LDLᵀ factorization of `A − x I`. The corner entry contributes fill in
    /// the last column only, so the count stays O(n).
    pub fn sturm_count(&self, x: T) -> usize {
        let n = self.len();
        let tiny = T::min_positive_value() / T::epsilon();
        let fix = |d: T| if d == T::zero() { -tiny } else { d };
        if n == 1 {
            return usize::from(self.diag[0] + self.corner * T::lit(2.0) - x < T::zero());
        }
        if n == 2 {
            let a = self.diag[0] - x;
            let b = self.off[0] + self.corner;
            let c = self.diag[1] - x;
            let d0 = fix(a);
            let d1 = c - b * b / d0;
            return usize::from(d0 < T::zero()) + usize::from(d1 < T::zero());
        }
        let mut count = 0;
        let mut d = fix(self.diag[0] - x);
        let mut f = self.corner;
        let mut last = self.diag[n - 1] - x;
        for i in 0..n - 2 {
            if d < T::zero() {
                count += 1;
            }
            let e = self.off[i];
            let next_f0 = if i + 1 == n - 2 { self.off[n - 2] } else { T::zero() };
            let nd = fix(self.diag[i + 1] - x - e * e / d);
            let nf = next_f0 - e * f / d;
            last = last - f * f / d;
            d = nd;
            f = nf;
        }
        if d < T::zero() {
            count += 1;
        }
        last = last - f * f / d;
        if last < T::zero() {
            count += 1;
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut rad = T::zero();
            if i > 0 {
                rad = rad + self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad = rad + self.off[i].abs();
            }
            if n > 2 && (i == 0 || i == n - 1) {
                rad = rad + self.corner.abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        let pad = (hi - lo).abs() * T::lit(1e-12) + T::lit(1e-12);
        (lo - pad, hi + pad)
    }

    /// The `j`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, j: usize) -> Result<T> {
        if j >= self.len() {
            return Err(Error::Convergence(format!("eigenvalue {j} of a {}×{} matrix", self.len(), self.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..400 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            let scale = lo.abs().max(hi.abs()).max(T::one());
            if hi - lo <= T::epsilon() * T::lit(2.0) * scale {
                return Ok((lo + hi) * T::lit(0.5));
            }
        }
        Err(Error::Convergence(format!("bisection for eigenvalue {j} did not settle")))
    }

    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<T>> {
        if k > self.len() {
            return Err(Error::Convergence(format!(
                "requested {k} eigenvalues of a {}×{} matrix",
                self.len(),
                self.len()
            )));
        }
        (0..k).map(|j| self.eigenvalue(j)).collect()
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s = s + self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s = s + self.off[i] * v[i + 1];
                }
                if n > 2 && i == 0 {
                    s = s + self.corner * v[n - 1];
                }
                if n > 2 && i == n - 1 {
                    s = s + self.corner * v[0];
                }
                s
            })
            .collect()
    }

    /// Unit eigenvectors for the given (ascending) eigenvalues. Vectors in a
    /// cluster `|λ_i − λ_j| ≤ cluster_tol·(1 + |λ|)` are orthogonalized
    /// against each other.
    pub fn eigenvectors(&self, values: &[T], cluster_tol: T) -> Result<Vec<Vec<T>>> {
        let n = self.len();
        let mut out: Vec<Vec<T>> = Vec::with_capacity(values.len());
        let a: Vec<T> = std::iter::once(T::zero()).chain(self.off.iter().copied()).collect();
        let mut c: Vec<T> = self.off.clone();
        c.push(T::zero());
        let corner = if n > 2 { self.corner } else { T::zero() };
        let mut a2 = a.clone();
        if n == 2 {
            a2[1] = a2[1] + self.corner;
            c[0] = c[0] + self.corner;
        }
        let mut cluster_start = 0;
        for (idx, &lam) in values.iter().enumerate() {
            if idx > 0 && (lam - values[idx - 1]).abs() > cluster_tol * (T::one() + lam.abs()) {
                cluster_start = idx;
            }
            let shift = lam + T::epsilon() * T::lit(64.0) * (T::one() + lam.abs());
            let b: Vec<T> = self.diag.iter().map(|&d| d - shift).collect();
            // Deterministic, non-symmetric start vector.
            let mut v: Vec<T> = (0..n)
                .map(|i| T::one() + T::lit(0.5) * (T::lit(0.7) * T::of(i + 1) + T::of(idx)).sin())
                .collect();
            let scale = self.diag.iter().fold(T::zero(), |m, d| m.max(d.abs())) + T::one();
            for _ in 0..4 {
                let mut w = solve_cyclic_tridiagonal(&a2, &b, &c, corner, corner, &v);
                for prev in &out[cluster_start..idx] {
                    let d: T = dot(&w, prev);
                    for (wi, pi) in w.iter_mut().zip(prev) {
                        *wi = *wi - d * *pi;
                    }
                }
                let nw = dot(&w, &w).sqrt();
                if !(nw.is_finite() && nw > T::zero()) {
                    return Err(Error::Convergence(format!("inverse iteration broke down at λ = {lam}")));
                }
                for wi in w.iter_mut() {
                    *wi = *wi / nw;
                }
                v = w;
            }
            let av = self.mul_vec(&v);
            let res = av.iter().zip(&v).map(|(&x, &y)| (x - lam * y).abs()).fold(T::zero(), |m, t| m.max(t));
            if res > T::epsilon().sqrt() * scale {
                return Err(Error::Convergence(format!("inverse iteration residual {res} at λ = {lam}")));
            }
            // Fix the sign for reproducibility: largest component positive.
            let (mut best, mut best_abs) = (0, T::zero());
            for (i, x) in v.iter().enumerate() {
                if x.abs() > best_abs + T::epsilon() * best_abs {
                    best = i;
                    best_abs = x.abs();
                }
            }
            if v[best] < T::zero() {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn second_difference_spectrum() {
        let n = 50;
        let m = SymTridiagonal::new(vec![2.0f64; n], vec![-1.0; n - 1], 0.0);
        let vals = m.lowest_eigenvalues(5).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (j + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn periodic_second_difference_spectrum() {
        let n = 40;
        let m = SymTridiagonal::new(vec![2.0f64; n], vec![-1.0; n - 1], -1.0);
        let vals = m.lowest_eigenvalues(5).unwrap();
        let mut exact: Vec<f64> = (0..n).map(|j| 2.0 - 2.0 * (2.0 * PI * j as f64 / n as f64).cos()).collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, e) in vals.iter().zip(&exact) {
            assert!((v - e).abs() < 1e-9, "{v} vs {e}");
        }
        let vecs = m.eigenvectors(&vals, 1e-9).unwrap();
        for i in 0..vecs.len() {
            for j in 0..vecs.len() {
                let d = dot(&vecs[i], &vecs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-8, "({i},{j}) {d}");
            }
            let av = m.mul_vec(&vecs[i]);
            for (x, y) in av.iter().zip(&vecs[i]) {
                assert!((x - vals[i] * y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sturm_count_matches_dense() {
        // Bisected eigenvalues of a random-ish cyclic matrix against Jacobi.
        let n = 7;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).sin() * 3.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + (i as f64).cos()).collect();
        let m = SymTridiagonal::new(diag.clone(), off.clone(), 0.8);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
        }
        for i in 0..n - 1 {
            dense[i][i + 1] = off[i];
            dense[i + 1][i] = off[i];
        }
        dense[0][n - 1] = 0.8;
        dense[n - 1][0] = 0.8;
        let (vals, _) = crate::linalg::sym_eig(&dense);
        let got = m.lowest_eigenvalues(n).unwrap();
        for (a, b) in got.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
