//! Reduced spectral functions, equivariant counting functions, cluster sums,
//! Kuznecov orbit periods and L^p norms computed from a truncated basis.
//!
//! Every sum runs over modes in basis order (ascending eigenvalue, then
//! label) and is reduced pairwise, so results do not depend on threading.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{EigenBasis, EigenMode, ModeShape};
use crate::error::{Error, Result};
use crate::geometry::{IsotypicLabel, ModelManifold, Point};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre, pairwise_sum, pairwise_sum_complex, periodic_trapezoid, Rule};
use crate::scalar::{Complex, Real};
use crate::specfun;

/// `e_γ(x, y, λ)` restricted to one isotypic component of a basis.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSpectralFunction<'a, T> {
    pub basis: &'a EigenBasis<T>,
    pub label: IsotypicLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSum<T> {
    pub lambda: T,
    pub value: T,
    pub mode_count: usize,
}

impl<'a, T: Real> ReducedSpectralFunction<'a, T> {
    pub fn new(basis: &'a EigenBasis<T>, label: IsotypicLabel) -> Self {
        Self { basis, label }
    }

    fn check(&self, lambda: T) -> Result<()> {
        if lambda > self.basis.lambda_max {
            return Err(Error::Truncation { requested: lambda.as_f64(), limit: self.basis.lambda_max.as_f64() });
        }
        Ok(())
    }

    fn select(&self, lo: Option<T>, hi: T) -> Vec<&'a EigenMode<T>> {
        self.basis
            .modes
            .iter()
            .filter(|md| md.label == self.label && md.eigenvalue <= hi && lo.is_none_or(|l| md.eigenvalue > l))
            .collect()
    }

    /// `Σ_{λ_j ≤ λ} |e_j(x)|²` over the component.
    pub fn diag(&self, x: &Point<T>, lambda: T) -> Result<T> {
        self.check(lambda)?;
        self.basis.manifold.validate(x)?;
        Ok(sum_sq(&self.select(None, lambda), x))
    }

    /// Number of modes with `λ_j ≤ λ` in the component.
    pub fn counting(&self, lambda: T) -> Result<u64> {
        self.check(lambda)?;
        Ok(self.select(None, lambda).len() as u64)
    }

    /// Sum of `|e_j(x)|²` over `λ_j ∈ (λ, λ+1]`.
    pub fn cluster(&self, x: &Point<T>, lambda: T) -> Result<ClusterSum<T>> {
        self.check(lambda + T::one())?;
        self.basis.manifold.validate(x)?;
        let modes = self.select(Some(lambda), lambda + T::one());
        Ok(ClusterSum { lambda, value: sum_sq(&modes, x), mode_count: modes.len() })
    }
}

/// Sum of squared magnitudes in mode order; spherical harmonics of a common
/// order share one Legendre column.
fn sum_sq<T: Real>(modes: &[&EigenMode<T>], x: &Point<T>) -> T {
    if modes.is_empty() {
        return T::zero();
    }
    let all_sph = modes.iter().all(|m| matches!(m.shape, ModeShape::SphericalHarmonic { .. }));
    let terms: Vec<T> = if all_sph {
        let alpha = x.a.cos().max(-T::one()).min(T::one());
        let mut cache: Vec<(i32, Vec<T>)> = Vec::new();
        let k_top = modes
            .iter()
            .map(|m| match m.shape {
                ModeShape::SphericalHarmonic { k, .. } => k,
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        modes
            .iter()
            .map(|md| {
                let ModeShape::SphericalHarmonic { k, m } = md.shape else { unreachable!() };
                let pos = match cache.iter().position(|(mm, _)| *mm == m) {
                    Some(p) => p,
                    None => {
                        let col = specfun::assoc_legendre_normalized_column(m, k_top, alpha).unwrap_or_default();
                        cache.push((m, col));
                        cache.len() - 1
                    }
                };
                let p = cache[pos].1[(k - m.unsigned_abs()) as usize];
                p * p
            })
            .collect()
    } else {
        modes.iter().map(|md| md.eval(x).norm_sqr()).collect()
    };
    pairwise_sum(&terms)
}

pub fn reduced_spectral_diag<T: Real>(rsf: &ReducedSpectralFunction<'_, T>, x: &Point<T>, lambda: T) -> Result<T> {
    rsf.diag(x, lambda)
}

pub fn counting_function<T: Real>(rsf: &ReducedSpectralFunction<'_, T>, lambda: T) -> Result<u64> {
    rsf.counting(lambda)
}

pub fn cluster_sum<T: Real>(rsf: &ReducedSpectralFunction<'_, T>, x: &Point<T>, lambda: T) -> Result<ClusterSum<T>> {
    rsf.cluster(x, lambda)
}

/// The full (all labels) spectral function on the diagonal.
pub fn full_spectral_diag<T: Real>(basis: &EigenBasis<T>, x: &Point<T>, lambda: T) -> Result<T> {
    if lambda > basis.lambda_max {
        return Err(Error::Truncation { requested: lambda.as_f64(), limit: basis.lambda_max.as_f64() });
    }
    let modes: Vec<&EigenMode<T>> = basis.modes.iter().filter(|m| m.eigenvalue <= lambda).collect();
    let vals = basis_values(basis, &modes, x);
    Ok(pairwise_sum(&vals.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>()))
}

fn basis_values<T: Real>(basis: &EigenBasis<T>, modes: &[&EigenMode<T>], x: &Point<T>) -> Vec<Complex<T>> {
    if let ModelManifold::RoundSphere2 = basis.manifold {
        let alpha = x.a.cos().max(-T::one()).min(T::one());
        let k_top = modes
            .iter()
            .filter_map(|m| match m.shape {
                ModeShape::SphericalHarmonic { k, .. } => Some(k),
                _ => None,
            })
            .max()
            .unwrap_or(0) as i32;
        let cols: Vec<Vec<T>> = (-k_top..=k_top)
            .map(|m| specfun::assoc_legendre_normalized_column(m, k_top as u32, alpha).unwrap_or_default())
            .collect();
        return modes
            .iter()
            .map(|md| match md.shape {
                ModeShape::SphericalHarmonic { k, m } => {
                    let p = cols[(m + k_top) as usize][(k - m.unsigned_abs()) as usize];
                    specfun::harmonic_from_legendre(p, m, x.b).value
                }
                _ => md.eval(x),
            })
            .collect();
    }
    modes.iter().map(|m| m.eval(x)).collect()
}

/// Group elements used to average over the orbit: the trapezoid nodes
/// `2πj/n_g` with `n_g = 2·m_max + 1` for the circle (exact for every
/// Fourier index up to `m_max`), the `N` elements for `ℤ/N`.
fn averaging_angles<T: Real>(manifold: &ModelManifold<T>, m_max: i64) -> Vec<T> {
    let n = match manifold.finite_group_order() {
        Some(order) => order as usize,
        None => 2 * m_max.unsigned_abs() as usize + 1,
    };
    periodic_trapezoid(T::zero(), T::TAU(), n).nodes
}

/// `Σ_{λ_j ≤ λ} |∫_G e_j(g⁻¹·x) dg|²` with normalized Haar measure.
pub fn kuznecov_sum<T: Real>(basis: &EigenBasis<T>, x: &Point<T>, lambda: T) -> Result<T> {
    if lambda > basis.lambda_max {
        return Err(Error::Truncation { requested: lambda.as_f64(), limit: basis.lambda_max.as_f64() });
    }
    basis.manifold.validate(x)?;
    let modes: Vec<&EigenMode<T>> = basis.modes.iter().filter(|m| m.eigenvalue <= lambda).collect();
    let m_max = modes.iter().map(|m| m.fourier_index().abs()).max().unwrap_or(0);
    let angles = averaging_angles(&basis.manifold, m_max);
    let ng = T::of(angles.len());
    let orbit: Vec<Point<T>> = angles.iter().map(|&t| basis.manifold.act(-t, x)).collect();
    let sphere = matches!(basis.manifold, ModelManifold::RoundSphere2);
    let alpha = x.a.cos().max(-T::one()).min(T::one());
    let mut columns: Vec<(i32, Vec<T>)> = Vec::new();
    let k_top = modes
        .iter()
        .filter_map(|m| match m.shape {
            ModeShape::SphericalHarmonic { k, .. } => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let terms: Vec<T> = modes
        .iter()
        .map(|md| {
            let vals: Vec<Complex<T>> = match md.shape {
                // The colatitude is constant along the orbit, so one
                // Legendre column serves every group element.
                ModeShape::SphericalHarmonic { k, m } if sphere => {
                    let pos = match columns.iter().position(|(mm, _)| *mm == m) {
                        Some(p) => p,
                        None => {
                            let col = specfun::assoc_legendre_normalized_column(m, k_top, alpha).unwrap_or_default();
                            columns.push((m, col));
                            columns.len() - 1
                        }
                    };
                    let p = columns[pos].1[(k - m.unsigned_abs()) as usize];
                    orbit.iter().map(|g| specfun::harmonic_from_legendre(p, m, g.b).value).collect()
                }
                _ => orbit.iter().map(|g| md.eval(g)).collect(),
            };
            let avg = pairwise_sum_complex(&vals) / ng;
            avg.norm_sqr()
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Node counts for L^p quadrature; `None` selects the resolution rule
/// (azimuth `max(64, 4k+8)`, polar `max(64, 2k+8)`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LpQuadrature {
    pub polar: Option<usize>,
    pub azimuth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpNorm<T> {
    pub value: T,
    /// Eigenvalue of the mode whose norm is reported.
    pub eigenvalue: T,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
}

fn resolve(requested: Option<usize>, rule: usize, what: &str) -> Result<usize> {
    match requested {
        None => Ok(rule),
        Some(n) if n >= rule => Ok(n),
        Some(n) => Err(Error::Resolution(format!("{n} {what} nodes, the mode needs at least {rule}"))),
    }
}

/// L^p norm (`p ∈ [2, ∞]`, `p = f64::INFINITY` for the sup norm) of the
/// normalized mode of largest eigenvalue in `(λ, λ+1]`.
///
/// The sup norm is a grid maximum that includes the poles and is refined
/// fourfold around the largest grid value.
pub fn cluster_lp_norm<T: Real>(
    rsf: &ReducedSpectralFunction<'_, T>,
    lambda: T,
    p: f64,
    quad: LpQuadrature,
) -> Result<LpNorm<T>> {
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("p = {p} outside [2, ∞]")));
    }
    rsf.check(lambda + T::one())?;
    let modes = rsf.select(Some(lambda), lambda + T::one());
    let md = *modes
        .last()
        .ok_or_else(|| Error::Domain(format!("no {} mode in ({lambda}, {}]", rsf.label, lambda + T::one())))?;
    mode_lp_norm(&rsf.basis.manifold, md, p, quad)
}

pub fn mode_lp_norm<T: Real>(manifold: &ModelManifold<T>, md: &EigenMode<T>, p: f64, quad: LpQuadrature) -> Result<LpNorm<T>> {
    let pt = T::lit(p);
    let inf = p.is_infinite();
    match (manifold, &md.shape) {
        (ModelManifold::RoundSphere2, ModeShape::SphericalHarmonic { k, m }) => {
            let k = *k;
            let m = *m;
            // |P|^p is a polynomial of degree p·k in cos θ for even p, so
            // ⌈p·k/2⌉ + 1 Gauss nodes are exact there.
            let order = if inf { 2.0 } else { p.min(16.0) };
            let n_pol = resolve(quad.polar, ((order * k as f64 / 2.0).ceil() as usize + 8).max(64), "polar")?;
            let n_az = resolve(quad.azimuth, (4 * k as usize + 8).max(64), "azimuth")?;
            let rule = gauss_legendre::<T>(n_pol);
            let az = periodic_trapezoid(T::zero(), T::TAU(), n_az);
            let legendre = |t: T| -> T {
                let col = specfun::assoc_legendre_normalized_column(m, k, t.max(-T::one()).min(T::one())).unwrap_or_default();
                col.last().copied().unwrap_or(T::zero())
            };
            let row_abs = |pv: T| -> Vec<T> {
                az.nodes.iter().map(|&phi| specfun::harmonic_from_legendre(pv, m, phi).value.norm()).collect()
            };
            let value = if inf {
                let mut ts: Vec<T> = rule.nodes.clone();
                ts.insert(0, -T::one());
                ts.push(T::one());
                let grid_max = |ts: &[T]| -> (usize, T) {
                    let mut best = (0, T::zero());
                    for (i, &t) in ts.iter().enumerate() {
                        let row = row_abs(legendre(t));
                        let v = row.iter().fold(T::zero(), |a, &b| a.max(b));
                        if v > best.1 {
                            best = (i, v);
                        }
                    }
                    best
                };
                let (i, v) = grid_max(&ts);
                let lo = ts[i.saturating_sub(1)];
                let hi = ts[(i + 1).min(ts.len() - 1)];
                let fine: Vec<T> = (0..=8).map(|j| lo + (hi - lo) * T::of(j) / T::lit(8.0)).collect();
                v.max(grid_max(&fine).1)
            } else {
                let terms: Vec<T> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&t, &w)| {
                        let row = row_abs(legendre(t));
                        let s = pairwise_sum(&row.iter().map(|&a| a.powf(pt) * az.weights[0]).collect::<Vec<_>>());
                        w * s
                    })
                    .collect();
                pairwise_sum(&terms).powf(T::one() / pt)
            };
            Ok(LpNorm { value, eigenvalue: md.eigenvalue, polar_nodes: n_pol, azimuth_nodes: n_az })
        }
        (ModelManifold::FlatTorus2 | ModelManifold::FlatTorus2FiniteCyclic { .. }, ModeShape::TorusExponential { k1, k2 }) => {
            let kk = k1.unsigned_abs().max(k2.unsigned_abs()) as usize;
            let n_a = resolve(quad.azimuth, (4 * kk + 8).max(64), "x1")?;
            let n_b = resolve(quad.polar, (4 * kk + 8).max(64), "x2")?;
            let ra = periodic_trapezoid(T::zero(), T::one(), n_a);
            let rb = periodic_trapezoid(T::zero(), T::one(), n_b);
            let value = grid_norm(&ra, &rb, |a, b| md.eval(&Point::new(a, b)).norm(), |_| T::one(), pt, inf);
            Ok(LpNorm { value, eigenvalue: md.eigenvalue, polar_nodes: n_b, azimuth_nodes: n_a })
        }
        (ModelManifold::SurfaceOfRevolution(profile), ModeShape::Radial { m, .. }) => {
            let l = profile.length();
            let osc = (md.mu * l / T::PI()).ceil().to_usize().unwrap_or(0);
            let n_s = resolve(quad.polar, (2 * osc + 8).max(64), "meridian")?;
            let n_az = resolve(quad.azimuth, (4 * m.unsigned_abs() as usize + 8).max(64), "azimuth")?;
            let rs = composite_gl_count::<T>(n_s).mapped(T::zero(), T::one());
            let rs = rs.mapped_affine(l);
            let az = periodic_trapezoid(T::zero(), T::TAU(), n_az);
            let value = grid_norm(&rs, &az, |s, phi| md.eval(&Point::new(s, phi)).norm(), |s| profile.r(s), pt, inf);
            Ok(LpNorm { value, eigenvalue: md.eigenvalue, polar_nodes: n_s, azimuth_nodes: n_az })
        }
        _ => Err(Error::Domain("mode does not belong to this manifold".into())),
    }
}

fn grid_norm<T: Real>(
    ra: &Rule<T>,
    rb: &Rule<T>,
    f: impl Fn(T, T) -> T,
    jac: impl Fn(T) -> T,
    p: T,
    inf: bool,
) -> T {
    if inf {
        let mut best = T::zero();
        for &a in &ra.nodes {
            for &b in &rb.nodes {
                best = best.max(f(a, b));
            }
        }
        return best;
    }
    let terms: Vec<T> = ra
        .nodes
        .iter()
        .zip(&ra.weights)
        .map(|(&a, &wa)| {
            let row: Vec<T> = rb.nodes.iter().zip(&rb.weights).map(|(&b, &wb)| wb * f(a, b).powf(p)).collect();
            wa * jac(a) * pairwise_sum(&row)
        })
        .collect();
    pairwise_sum(&terms).powf(T::one() / p)
}

/// Composite 16-point Gauss–Legendre rule on `[-1, 1]` with at least `n`
/// nodes.
fn composite_gl_count<T: Real>(n: usize) -> Rule<T> {
    let panels = n.div_ceil(16).max(1);
    composite_gauss_legendre(-T::one(), T::one(), panels, 16)
}

impl<T: Real> Rule<T> {
    /// Image of a rule on `[0, 1]` under `x ↦ l·x`.
    fn mapped_affine(&self, l: T) -> Rule<T> {
        Rule { nodes: self.nodes.iter().map(|&x| x * l).collect(), weights: self.weights.iter().map(|&w| w * l).collect() }
    }
}

/// `δ_{n−κ}(q) = max((n−κ)|1/2 − 1/q| − 1/2, 0)`.
pub fn exponent_delta(n: u32, kappa: u32, q: f64) -> f64 {
    let d = n.saturating_sub(kappa) as f64;
    let inv = if q.is_infinite() { 0.0 } else { 1.0 / q };
    (d * (0.5 - inv).abs() - 0.5).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Diag,
    Cluster,
    Counting,
    Kuznecov,
    Lp,
}

impl RecordKind {
    fn as_str(&self) -> &'static str {
        match self {
            Self::Diag => "diag",
            Self::Cluster => "cluster",
            Self::Counting => "counting",
            Self::Kuznecov => "kuznecov",
            Self::Lp => "lp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub lambda: f64,
    pub label: i64,
    pub x: [f64; 2],
    pub value: f64,
    pub kind: RecordKind,
}

/// CSV with columns `lambda,label,x_a,x_b,value,kind`.
pub fn records_to_csv(records: &[SpectralRecord]) -> String {
    let mut out = String::from("lambda,label,x_a,x_b,value,kind\n");
    for r in records {
        out.push_str(&format!(
            "{:?},{},{:?},{:?},{:?},{}\n",
            r.lambda,
            r.label,
            r.x[0],
            r.x[1],
            r.value,
            r.kind.as_str()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{sphere_basis, torus_basis, TorusGroup};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn sphere_pole_diag() {
        let b = sphere_basis(110.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        let v = rsf.diag(&Point::new(0.0, 0.0), 110.0).unwrap();
        assert!((v - 121.0 / (4.0 * PI)).abs() < 1e-12);
        assert_eq!(rsf.diag(&Point::new(0.3, 0.0), -1.0).unwrap(), 0.0);
        assert!(matches!(rsf.diag(&Point::new(0.3, 0.0), 111.0), Err(Error::Truncation { .. })));
    }

    #[test]
    fn torus_examples() {
        let lam = 4.0 * PI * PI;
        let b = torus_basis(lam + 1.0, TorusGroup::Circle).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        let v = rsf.diag(&Point::new(0.3, 0.7), lam).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert_eq!(rsf.counting(lam).unwrap(), 3);
        let rsf1 = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(1));
        let c = rsf1.cluster(&Point::new(0.1, 0.2), lam - 0.5).unwrap();
        assert_eq!(c.mode_count, 1);
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!((kuznecov_sum(&b, &Point::new(0.4, 0.1), lam).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_counting_examples() {
        let b = sphere_basis(30.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(5));
        assert_eq!(rsf.counting(30.0).unwrap(), 1);
    }

    #[test]
    fn cluster_examples() {
        let b = sphere_basis(111.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        let c = rsf.cluster(&Point::new(0.0, 0.0), 109.5).unwrap();
        assert!((c.value - 21.0 / (4.0 * PI)).abs() < 1e-12);
        let c = rsf.cluster(&Point::new(0.0, 0.0), 100.5).unwrap();
        assert_eq!(c.value, 0.0);
        assert_eq!(c.mode_count, 0);
        // An eigenvalue exactly at λ belongs to the lower window.
        let c = rsf.cluster(&Point::new(0.0, 0.0), 110.0).unwrap();
        assert_eq!(c.mode_count, 0);
    }

    #[test]
    fn kuznecov_equals_trivial_component() {
        let b = sphere_basis(420.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        for &(th, ph) in &[(0.0, 0.0), (0.4, 1.0), (FRAC_PI_2, 2.0), (2.9, -0.5)] {
            let x = Point::new(th, ph);
            let k = kuznecov_sum(&b, &x, 420.0).unwrap();
            let d = rsf.diag(&x, 420.0).unwrap();
            assert!((k - d).abs() <= 1e-10 * d.max(1.0), "{k} vs {d}");
        }
    }

    #[test]
    fn lp_norm_examples() {
        let b = sphere_basis(3.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        let n2 = cluster_lp_norm(&rsf, 1.5, 2.0, LpQuadrature::default()).unwrap();
        assert!((n2.value - 1.0).abs() < 1e-12);
        let b = sphere_basis(2551.0f64).unwrap();
        let rsf = ReducedSpectralFunction::new(&b, IsotypicLabel::Circle(0));
        let ninf = cluster_lp_norm(&rsf, 2549.5, f64::INFINITY, LpQuadrature::default()).unwrap();
        assert!((ninf.value - (101.0 / (4.0 * PI)).sqrt()).abs() < 1e-10);
        let bad = LpQuadrature { polar: Some(10), azimuth: None };
        assert!(matches!(cluster_lp_norm(&rsf, 2549.5, 4.0, bad), Err(Error::Resolution(_))));
        let t = torus_basis(4.0 * PI * PI * 10.0 + 1.0, TorusGroup::Circle).unwrap();
        let rsf = ReducedSpectralFunction::new(&t, IsotypicLabel::Circle(3));
        let lam = 4.0 * PI * PI * 10.0 - 0.5;
        let n = cluster_lp_norm(&rsf, lam, f64::INFINITY, LpQuadrature::default()).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_delta_examples() {
        assert_eq!(exponent_delta(2, 0, f64::INFINITY), 0.5);
        assert_eq!(exponent_delta(2, 1, f64::INFINITY), 0.0);
        assert_eq!(exponent_delta(3, 0, 2.0), 0.0);
    }

    #[test]
    fn csv_layout() {
        let rec = SpectralRecord { lambda: 1.0, label: 0, x: [0.5, 0.25], value: 2.0, kind: RecordKind::Diag };
        let csv = records_to_csv(&[rec]);
        assert_eq!(csv, "lambda,label,x_a,x_b,value,kind\n1.0,0,0.5,0.25,2.0,diag\n");
    }
}
