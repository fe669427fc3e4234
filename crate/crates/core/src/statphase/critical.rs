//! Critical set of `Φ_{x,y}(ω, g) = ⟨x − g·y, ω⟩` on `S² × S¹`, `g` a
//! rotation about the z-axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{tangent_pair, unit3};
use crate::error::{Error, Result};
use crate::linalg::sym_eig;
use crate::scalar::{dot3, norm3, rotate_z, Real, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_g: usize,
    /// Newton stops once `|∇Φ|` is at or below this value.
    pub tol: f64,
    pub max_iter: usize,
    /// Converged points closer than this are merged.
    pub dedup_radius: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { n_theta: 32, n_phi: 64, n_g: 64, tol: 1e-10, max_iter: 50, dedup_radius: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint<T> {
    pub omega: Vec3<T>,
    pub g: T,
    pub gradient_norm: T,
    /// Product of the nonzero Hessian eigenvalues.
    pub transversal_det: T,
    /// Rank of the Hessian (codimension of the critical set through here).
    pub transversal_dim: usize,
    /// Index into [`CriticalScanResult::components`].
    pub component: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanComponent {
    /// Dimension of the component (Hessian null count).
    pub dimension: usize,
    pub points: usize,
    /// Point with the smallest gradient norm.
    pub representative: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// `y ∈ G·x`: the critical set carries a great circle in `ω`.
    OnOrbit,
    OffOrbit,
    Empty,
    /// `x` or `y` lies on the rotation axis; the orbit is a point and the
    /// clean-intersection count does not apply.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalScanResult<T> {
    pub points: Vec<CriticalPoint<T>>,
    pub components: Vec<ScanComponent>,
    pub classification: Classification,
    pub seeds: usize,
    pub converged: usize,
}

impl<T: Real> CriticalScanResult<T> {
    pub fn max_gradient(&self) -> T {
        self.points.iter().map(|p| p.gradient_norm).fold(T::zero(), T::max)
    }

    /// Smallest `|transversal_det|` among the isolated points.
    pub fn min_isolated_det(&self) -> Option<T> {
        self.points
            .iter()
            .filter(|p| p.transversal_dim == 3)
            .map(|p| p.transversal_det.abs())
            .fold(None, |a: Option<T>, d| Some(a.map_or(d, |a| a.min(d))))
    }
}

struct Phase<T> {
    x: Vec3<T>,
    y: Vec3<T>,
}

impl<T: Real> Phase<T> {
    /// Chart gradient `(⟨v, e₁⟩, ⟨v, e₂⟩, ∂_g Φ)` and Hessian at `(ω, g)`.
    fn derivatives(&self, w: &Vec3<T>, g: T) -> ([T; 3], Vec<Vec<T>>) {
        let gy = rotate_z(g, &self.y);
        let v = [self.x[0] - gy[0], self.x[1] - gy[1], self.x[2] - gy[2]];
        // ∂_g v = −ẑ × (g·y)
        let dv = [gy[1], -gy[0], T::zero()];
        let (e1, e2) = tangent_pair(w);
        let grad = [dot3(&v, &e1), dot3(&v, &e2), dot3(&dv, w)];
        let vw = dot3(&v, w);
        let m1 = dot3(&dv, &e1);
        let m2 = dot3(&dv, &e2);
        let gg = gy[0] * w[0] + gy[1] * w[1];
        let h = vec![vec![-vw, T::zero(), m1], vec![T::zero(), -vw, m2], vec![m1, m2, gg]];
        (grad, h)
    }

    fn gradient_norm(&self, w: &Vec3<T>, g: T) -> T {
        let gy = rotate_z(g, &self.y);
        let v = [self.x[0] - gy[0], self.x[1] - gy[1], self.x[2] - gy[2]];
        let vw = dot3(&v, w);
        let t = [v[0] - vw * w[0], v[1] - vw * w[1], v[2] - vw * w[2]];
        let dg = gy[1] * w[0] - gy[0] * w[1];
        (dot3(&t, &t) + dg * dg).sqrt()
    }
}

fn step<T: Real>(w: &Vec3<T>, g: T, d: &[T; 3], alpha: T) -> (Vec3<T>, T) {
    let (e1, e2) = tangent_pair(w);
    let p = [
        w[0] + alpha * (d[0] * e1[0] + d[1] * e2[0]),
        w[1] + alpha * (d[0] * e1[1] + d[1] * e2[1]),
        w[2] + alpha * (d[0] * e1[2] + d[1] * e2[2]),
    ];
    (unit3(&p), g + alpha * d[2])
}

fn pinv_apply<T: Real>(h: &[Vec<T>], b: &[T; 3]) -> [T; 3] {
    let (vals, vecs) = sym_eig(h);
    let scale = vals.iter().map(|v| v.abs()).fold(T::one(), T::max);
    let thr = T::lit(1e-8) * scale;
    let mut out = [T::zero(); 3];
    for (lam, v) in vals.iter().zip(&vecs) {
        if lam.abs() > thr {
            let c = (v[0] * b[0] + v[1] * b[1] + v[2] * b[2]) / *lam;
            for k in 0..3 {
                out[k] = out[k] + c * v[k];
            }
        }
    }
    out
}

fn newton<T: Real>(ph: &Phase<T>, mut w: Vec3<T>, mut g: T, tol: T, max_iter: usize) -> Option<(Vec3<T>, T, T)> {
    let mut gn = ph.gradient_norm(&w, g);
    for _ in 0..max_iter {
        if gn <= tol {
            break;
        }
        let (grad, h) = ph.derivatives(&w, g);
        let d = pinv_apply(&h, &grad);
        let d = [-d[0], -d[1], -d[2]];
        let mut alpha = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let (w2, g2) = step(&w, g, &d, alpha);
            let gn2 = ph.gradient_norm(&w2, g2);
            if gn2 < gn {
                w = w2;
                g = g2;
                gn = gn2;
                accepted = true;
                break;
            }
            alpha = alpha * T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    (gn <= tol).then(|| (w, wrap_angle(g), gn))
}

fn wrap_angle<T: Real>(g: T) -> T {
    let r = g % T::TAU();
    if r < T::zero() {
        r + T::TAU()
    } else {
        r
    }
}

fn angle_gap<T: Real>(a: T, b: T) -> T {
    let d = wrap_angle(a - b);
    d.min(T::TAU() - d)
}

fn distance<T: Real>(a: &(Vec3<T>, T), b: &(Vec3<T>, T)) -> T {
    let dw = [a.0[0] - b.0[0], a.0[1] - b.0[1], a.0[2] - b.0[2]];
    let dg = angle_gap(a.1, b.1);
    (dot3(&dw, &dw) + dg * dg).sqrt()
}

/// `dist(y, G·x)` for rotations about the z-axis.
pub(crate) fn orbit_distance3<T: Real>(x: &Vec3<T>, y: &Vec3<T>) -> T {
    let rx = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let ry = (y[0] * y[0] + y[1] * y[1]).sqrt();
    ((ry - rx) * (ry - rx) + (y[2] - x[2]) * (y[2] - x[2])).sqrt()
}

/// Dense grid scan of `|∇Φ_{x,y}|` on `S² × S¹` followed by Newton
/// refinement from every grid local minimum.
pub fn critical_set_scan<T: Real>(x: Vec3<T>, y: Vec3<T>, config: &ScanConfig) -> Result<CriticalScanResult<T>> {
    if !(norm3(&x) > T::zero() && norm3(&y) > T::zero()) {
        return Err(Error::InvalidPoint("critical scan needs x, y != 0".into()));
    }
    if x.iter().chain(&y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint("non-finite input".into()));
    }
    let (nt, np, ng) = (config.n_theta.max(4), config.n_phi.max(4), config.n_g.max(4));
    let ph = Phase { x, y };
    let node = |i: usize, j: usize, k: usize| -> (Vec3<T>, T) {
        let th = T::PI() * (T::of(i) + T::lit(0.5)) / T::of(nt);
        let phi = T::TAU() * T::of(j) / T::of(np);
        let (st, ct) = th.sin_cos();
        let (sp, cp) = phi.sin_cos();
        ([st * cp, st * sp, ct], T::TAU() * T::of(k) / T::of(ng))
    };
    let idx = |i: usize, j: usize, k: usize| (i * np + j) * ng + k;
    let values: Vec<T> = (0..nt * np * ng)
        .into_par_iter()
        .map(|c| {
            let (i, rem) = (c / (np * ng), c % (np * ng));
            let (w, g) = node(i, rem / ng, rem % ng);
            ph.gradient_norm(&w, g)
        })
        .collect();
    let mut seeds = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            for k in 0..ng {
                let v = values[idx(i, j, k)];
                let mut is_min = true;
                'nb: for di in -1i64..=1 {
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= nt as i64 {
                        continue;
                    }
                    for dj in -1i64..=1 {
                        for dk in -1i64..=1 {
                            if di == 0 && dj == 0 && dk == 0 {
                                continue;
                            }
                            let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                            let kk = (k as i64 + dk).rem_euclid(ng as i64) as usize;
                            if values[idx(ii as usize, jj, kk)] < v {
                                is_min = false;
                                break 'nb;
                            }
                        }
                    }
                }
                if is_min {
                    seeds.push(node(i, j, k));
                }
            }
        }
    }
    let tol = T::lit(config.tol).max(T::epsilon() * T::lit(100.0));
    let refined: Vec<Option<(Vec3<T>, T, T)>> =
        seeds.par_iter().map(|&(w, g)| newton(&ph, w, g, tol, config.max_iter)).collect();
    let converged = refined.iter().filter(|r| r.is_some()).count();
    if converged == 0 {
        return Err(Error::Scan(format!(
            "Newton failed from all {} seeds within {} iterations",
            seeds.len(),
            config.max_iter
        )));
    }
    let radius = T::lit(config.dedup_radius);
    let mut unique: Vec<(Vec3<T>, T, T)> = Vec::new();
    for r in refined.into_iter().flatten() {
        if !unique.iter().any(|u| distance(&(u.0, u.1), &(r.0, r.1)) <= radius) {
            unique.push(r);
        }
    }
    // Connectivity clustering with a link length of a few grid cells.
    let cell = (T::PI() / T::of(nt)).max(T::TAU() / T::of(np)).max(T::TAU() / T::of(ng));
    let link = cell * T::lit(3.0);
    let n = unique.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if distance(&(unique[a].0, unique[a].1), &(unique[b].0, unique[b].1)) <= link {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb.max(ra)] = ra.min(rb);
                }
            }
        }
    }
    let mut comp_of_root: Vec<Option<usize>> = vec![None; n];
    let mut components: Vec<ScanComponent> = Vec::new();
    let mut null_votes: Vec<Vec<usize>> = Vec::new();
    let mut points = Vec::with_capacity(n);
    for (i, &(w, g, gn)) in unique.iter().enumerate() {
        let (_, h) = ph.derivatives(&w, g);
        let (vals, _) = sym_eig(&h);
        let scale = vals.iter().map(|v| v.abs()).fold(T::one(), T::max);
        let nonzero: Vec<T> = vals.iter().copied().filter(|v| v.abs() > T::lit(1e-7) * scale).collect();
        let det = nonzero.iter().fold(T::one(), |a, &b| a * b);
        let root = find(&mut parent, i);
        let c = match comp_of_root[root] {
            Some(c) => c,
            None => {
                components.push(ScanComponent { dimension: 0, points: 0, representative: points.len() });
                null_votes.push(vec![0; 4]);
                comp_of_root[root] = Some(components.len() - 1);
                components.len() - 1
            }
        };
        components[c].points += 1;
        null_votes[c][3 - nonzero.len()] += 1;
        points.push(CriticalPoint { omega: w, g, gradient_norm: gn, transversal_det: det, transversal_dim: nonzero.len(), component: c });
    }
    for (i, p) in points.iter().enumerate() {
        let c = &mut components[p.component];
        if p.gradient_norm < points[c.representative].gradient_norm {
            c.representative = i;
        }
    }
    for (c, votes) in components.iter_mut().zip(&null_votes) {
        c.dimension = (0..4).max_by_key(|&k| (votes[k], k)).unwrap_or(0);
    }
    let scale = T::one() + norm3(&x) + norm3(&y);
    let on_axis = |p: &Vec3<T>| (p[0] * p[0] + p[1] * p[1]).sqrt() <= T::lit(1e-12) * scale;
    let classification = if on_axis(&x) || on_axis(&y) {
        Classification::Degenerate
    } else if points.is_empty() {
        Classification::Empty
    } else if orbit_distance3(&x, &y) <= T::lit(1e-9) * scale {
        Classification::OnOrbit
    } else {
        Classification::OffOrbit
    };
    Ok(CriticalScanResult { points, components, classification, seeds: seeds.len(), converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_orbit_great_circle() {
        let r = critical_set_scan([1.0f64, 0.0, 0.0], [1.0, 0.0, 0.0], &ScanConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::OnOrbit);
        assert!(r.max_gradient() <= 1e-10);
        let circle: Vec<&ScanComponent> = r.components.iter().filter(|c| c.dimension == 1).collect();
        assert_eq!(circle.len(), 1, "{:?}", r.components);
        let c = r.components.iter().position(|c| c.dimension == 1).unwrap();
        for p in r.points.iter().filter(|p| p.component == c) {
            assert!(p.omega[1].abs() < 1e-9 && angle_gap(p.g, 0.0) < 1e-9);
            assert_eq!(p.transversal_dim, 2);
        }
        // g = π contributes the isolated pair ω = ±x.
        let isolated = r.components.iter().filter(|c| c.dimension == 0).count();
        assert_eq!(isolated, 2);
    }

    #[test]
    fn off_orbit_points_and_determinant_scaling() {
        let deltas = [0.02f64, 0.04, 0.08, 0.15, 0.3];
        let dets: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                let r = critical_set_scan([1.0, 0.0, 0.0], [d.cos(), 0.0, d.sin()], &ScanConfig::default()).unwrap();
                assert_eq!(r.classification, Classification::OffOrbit);
                assert!(r.components.iter().all(|c| c.dimension == 0));
                assert_eq!(r.points.len(), 4);
                r.min_isolated_det().unwrap()
            })
            .collect();
        let fit = crate::fit::fit_power_law(&deltas, &dets).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn fixed_point_is_degenerate() {
        let r = critical_set_scan([0.3f64, 0.5, 0.2], [0.0, 0.0, 1.0], &ScanConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::Degenerate);
        assert!(critical_set_scan([0.0f64; 3], [1.0, 0.0, 0.0], &ScanConfig::default()).is_err());
    }
}
