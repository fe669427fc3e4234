//! Truncated Laplace–Beltrami eigenbases adapted to the isotypic
//! decomposition: analytic bases on the sphere and flat tori, and a
//! finite-difference Sturm–Liouville solver per Fourier mode on surfaces of
//! revolution.

mod io;
mod tridiag;

pub use io::{export_basis, import_basis};
pub use tridiag::SymTridiagonal;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{IsotypicLabel, ModelManifold, Point, Profile};
use crate::scalar::{Complex, Real};
use crate::specfun::{self, HarmonicIndex, MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Analytic,
    Discrete { grid_n: usize },
}

/// Sampled radial factor `u(s)` of a separated mode `u(s) e^{imφ}`, given at
/// the cell centers `(i + ½)h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples<T> {
    pub h: T,
    pub closed: bool,
    pub axis_start: bool,
    pub axis_end: bool,
    pub values: Vec<T>,
}

impl<T: Real> RadialSamples<T> {
    fn eval(&self, s: T, m: i32) -> T {
        let n = self.values.len();
        let l = self.h * T::of(n);
        let half = T::lit(0.5);
        if self.closed {
            let w = s - (s / l).floor() * l;
            let x = w / self.h - half;
            let xf = x.floor();
            let t = x - xf;
            let i0 = ((xf.to_i64().unwrap_or(0)).rem_euclid(n as i64)) as usize;
            let i1 = (i0 + 1) % n;
            return self.values[i0] * (T::one() - t) + self.values[i1] * t;
        }
        let x = s / self.h - half;
        if x <= T::zero() {
            // Between the axis and the first center.
            let v0 = self.values[0];
            if self.axis_start && m != 0 {
                return v0 * (s / (self.h * half)).max(T::zero());
            }
            return v0;
        }
        let last = T::of(n - 1);
        if x >= last {
            let v1 = self.values[n - 1];
            if self.axis_end && m != 0 {
                return v1 * ((l - s) / (self.h * half)).max(T::zero());
            }
            return v1;
        }
        let xf = x.floor();
        let t = x - xf;
        let i0 = xf.to_usize().unwrap_or(0).min(n - 2);
        self.values[i0] * (T::one() - t) + self.values[i0 + 1] * t
    }
}

/// How a mode is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeShape<T> {
    SphericalHarmonic { k: u32, m: i32 },
    TorusExponential { k1: i64, k2: i64 },
    Radial { m: i32, samples: Arc<RadialSamples<T>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode<T> {
    pub eigenvalue: T,
    pub mu: T,
    pub label: IsotypicLabel,
    pub source: Source,
    pub shape: ModeShape<T>,
}

impl<T: Real> EigenMode<T> {
    /// Value of the normalized eigenfunction at `x` (chart coordinates).
    pub fn eval(&self, x: &Point<T>) -> Complex<T> {
        match &self.shape {
            ModeShape::SphericalHarmonic { k, m } => {
                let idx = HarmonicIndex { k: *k, m: *m };
                let alpha = x.a.cos().max(-T::one()).min(T::one());
                let p = specfun::assoc_legendre_normalized(idx, alpha).unwrap_or(T::zero());
                specfun::harmonic_from_legendre(p, *m, x.b).value
            }
            ModeShape::TorusExponential { k1, k2 } => {
                let arg = T::TAU() * (T::of_i(*k1) * frac(x.a) + T::of_i(*k2) * frac(x.b));
                Complex::new(arg.cos(), arg.sin())
            }
            ModeShape::Radial { m, samples } => {
                let u = samples.eval(x.a, *m);
                let (s, c) = (T::of_i(*m as i64) * x.b).sin_cos();
                Complex::new(u * c, u * s)
            }
        }
    }

    /// Fourier index along the orbit direction.
    pub fn fourier_index(&self) -> i64 {
        match &self.shape {
            ModeShape::SphericalHarmonic { m, .. } => *m as i64,
            ModeShape::TorusExponential { k1, .. } => *k1,
            ModeShape::Radial { m, .. } => *m as i64,
        }
    }
}

fn frac<T: Real>(x: T) -> T {
    x - x.floor()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis<T> {
    pub manifold: ModelManifold<T>,
    /// Every eigenvalue `≤ lambda_max` is present.
    pub lambda_max: T,
    pub modes: Vec<EigenMode<T>>,
}

impl<T: Real> EigenBasis<T> {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Values of all modes at `x`, in basis order. Spherical harmonics
    /// sharing an order `m` reuse one Legendre column.
    pub fn eval_at(&self, x: &Point<T>) -> Vec<Complex<T>> {
        if let ModelManifold::RoundSphere2 = self.manifold {
            let k_top = self
                .modes
                .iter()
                .filter_map(|md| match md.shape {
                    ModeShape::SphericalHarmonic { k, .. } => Some(k),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
            let alpha = x.a.cos().max(-T::one()).min(T::one());
            let cols: Vec<Vec<T>> = (-(k_top as i32)..=(k_top as i32))
                .map(|m| specfun::assoc_legendre_normalized_column(m, k_top, alpha).unwrap_or_default())
                .collect();
            return self
                .modes
                .iter()
                .map(|md| match md.shape {
                    ModeShape::SphericalHarmonic { k, m } => {
                        let col = &cols[(m + k_top as i32) as usize];
                        let p = col[(k - m.unsigned_abs()) as usize];
                        specfun::harmonic_from_legendre(p, m, x.b).value
                    }
                    _ => md.eval(x),
                })
                .collect();
        }
        self.modes.iter().map(|md| md.eval(x)).collect()
    }

    /// Distinct labels present in the basis, in ascending index order.
    pub fn labels(&self) -> Vec<IsotypicLabel> {
        let mut out: Vec<IsotypicLabel> = Vec::new();
        for md in &self.modes {
            if !out.contains(&md.label) {
                out.push(md.label);
            }
        }
        out.sort_by_key(|l| l.index());
        out
    }
}

/// Largest `k` with `k(k+1) ≤ λ`, or `None` for `λ < 0`.
pub fn sphere_k_max(lambda: f64) -> Option<u32> {
    if lambda < 0.0 {
        return None;
    }
    let mut k = (((4.0 * lambda + 1.0).sqrt() - 1.0) / 2.0).floor().max(0.0) as u64;
    while ((k + 1) * (k + 2)) as f64 <= lambda {
        k += 1;
    }
    while k > 0 && (k * (k + 1)) as f64 > lambda {
        k -= 1;
    }
    Some(k as u32)
}

/// All `Y_{k,m}` with `k(k+1) ≤ lambda_max`, labelled by `m`.
pub fn sphere_basis<T: Real>(lambda_max: T) -> Result<EigenBasis<T>> {
    if !(lambda_max >= T::zero()) {
        return Err(Error::Domain(format!("lambda_max = {lambda_max} < 0")));
    }
    let k_max = sphere_k_max(lambda_max.as_f64()).unwrap_or(0);
    if k_max > MAX_DEGREE {
        return Err(Error::Resource(format!("sphere basis would need degree {k_max} > {MAX_DEGREE}")));
    }
    let mut modes = Vec::with_capacity(((k_max + 1) * (k_max + 1)) as usize);
    for k in 0..=k_max {
        let ev = T::lit(specfun::sphere_eigenvalue(k));
        for m in -(k as i32)..=(k as i32) {
            modes.push(EigenMode {
                eigenvalue: ev,
                mu: ev.sqrt(),
                label: IsotypicLabel::Circle(m),
                source: Source::Analytic,
                shape: ModeShape::SphericalHarmonic { k, m },
            });
        }
    }
    Ok(EigenBasis { manifold: ModelManifold::RoundSphere2, lambda_max, modes })
}

/// Acting group on the flat torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusGroup {
    Circle,
    Cyclic(u32),
}

/// `4π²(k₁² + k₂²)`.
pub fn torus_eigenvalue<T: Real>(k1: i64, k2: i64) -> T {
    T::lit(4.0) * T::PI() * T::PI() * T::of_i(k1 * k1 + k2 * k2)
}

/// All lattice exponentials `e^{2πi(k₁x₁ + k₂x₂)}` with eigenvalue
/// `≤ lambda_max`.
pub fn torus_basis<T: Real>(lambda_max: T, group: TorusGroup) -> Result<EigenBasis<T>> {
    if !(lambda_max >= T::zero()) {
        return Err(Error::Domain(format!("lambda_max = {lambda_max} < 0")));
    }
    let manifold = match group {
        TorusGroup::Circle => ModelManifold::FlatTorus2,
        TorusGroup::Cyclic(n) => {
            if n == 0 {
                return Err(Error::Domain("cyclic group of order 0".into()));
            }
            ModelManifold::FlatTorus2FiniteCyclic { order: n }
        }
    };
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let r = (lambda_max / four_pi2).sqrt().floor().to_i64().unwrap_or(0) + 1;
    let mut lattice = Vec::new();
    for k1 in -r..=r {
        for k2 in -r..=r {
            if torus_eigenvalue::<T>(k1, k2) <= lambda_max {
                lattice.push((k1 * k1 + k2 * k2, k1, k2));
            }
        }
    }
    lattice.sort();
    let modes = lattice
        .into_iter()
        .map(|(_, k1, k2)| {
            let ev = torus_eigenvalue::<T>(k1, k2);
            let label = match group {
                TorusGroup::Circle => IsotypicLabel::Circle(k1 as i32),
                TorusGroup::Cyclic(n) => IsotypicLabel::cyclic(k1, n),
            };
            EigenMode { eigenvalue: ev, mu: ev.sqrt(), label, source: Source::Analytic, shape: ModeShape::TorusExponential { k1, k2 } }
        })
        .collect();
    Ok(EigenBasis { manifold, lambda_max, modes })
}

/// Symmetrized finite-difference matrix of `−(1/r)(r u')' + (m²/r²) u` on
/// `grid_n` cells, acting on `v = √r·u`.
pub fn radial_operator<T: Real>(profile: &Profile<T>, m: i32, grid_n: usize) -> Result<SymTridiagonal<T>> {
    let n = grid_n;
    let l = profile.length();
    let h = l / T::of(n);
    let half = T::lit(0.5);
    let rc: Vec<T> = (0..n).map(|i| profile.r((T::of(i) + half) * h)).collect();
    if let Some((i, r)) = rc.iter().enumerate().find(|(_, r)| !(**r > T::zero())) {
        return Err(Error::SingularProfile(format!("r = {r} at cell {i}")));
    }
    let closed = profile.is_closed();
    // Face radii r_{i+½} for i = 0..n-1 (face i+1 at s = (i+1)h).
    let rf: Vec<T> = (0..n)
        .map(|i| {
            if !closed && i == n - 1 {
                T::zero()
            } else {
                profile.r(T::of(i + 1) * h)
            }
        })
        .collect();
    let r_lo = |i: usize| -> T {
        if i == 0 {
            if closed {
                profile.r(T::zero())
            } else {
                T::zero()
            }
        } else {
            rf[i - 1]
        }
    };
    let h2 = h * h;
    let m2 = T::of_i((m as i64) * (m as i64));
    let diag: Vec<T> = (0..n).map(|i| (rf[i] + r_lo(i)) / (h2 * rc[i]) + m2 / (rc[i] * rc[i])).collect();
    let off: Vec<T> = (0..n - 1).map(|i| -rf[i] / (h2 * (rc[i] * rc[i + 1]).sqrt())).collect();
    let corner = if closed { -profile.r(T::zero()) / (h2 * (rc[0] * rc[n - 1]).sqrt()) } else { T::zero() };
    Ok(SymTridiagonal::new(diag, off, corner))
}

/// Lowest `modes_per_m` eigenpairs of the radial problem for every
/// `|m| ≤ m_max`, assembled into a basis of `u(s) e^{imφ}`.
pub fn surface_of_revolution_basis<T: Real>(
    profile: &Profile<T>,
    m_max: u32,
    modes_per_m: usize,
    grid_n: usize,
) -> Result<EigenBasis<T>> {
    if grid_n < 100 {
        return Err(Error::Domain(format!("grid_n = {grid_n} < 100")));
    }
    if modes_per_m == 0 || modes_per_m > grid_n {
        return Err(Error::Convergence(format!("cannot isolate {modes_per_m} eigenvalues on {grid_n} cells")));
    }
    let blocks: Vec<Result<(i32, Vec<T>, Vec<Vec<T>>)>> = (0..=m_max as i32)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&m| {
            let op = radial_operator(profile, m, grid_n)?;
            let vals = op.lowest_eigenvalues(modes_per_m)?;
            let vecs = op.eigenvectors(&vals, T::lit(1e-9))?;
            Ok((m, vals, vecs))
        })
        .collect();
    let h = profile.length() / T::of(grid_n);
    let half = T::lit(0.5);
    let rc: Vec<T> = (0..grid_n).map(|i| profile.r((T::of(i) + half) * h)).collect();
    let norm = (T::TAU() * h).sqrt();
    let mut modes = Vec::new();
    let mut complete_below = T::infinity();
    let r_max = rc.iter().fold(T::zero(), |a, &b| a.max(b));
    for block in blocks {
        let (m, vals, vecs) = block?;
        if let Some(top) = vals.last() {
            complete_below = complete_below.min(*top);
        }
        for (lam, v) in vals.into_iter().zip(vecs) {
            let values: Vec<T> = v.iter().zip(&rc).map(|(&vi, &ri)| vi / (ri.sqrt() * norm)).collect();
            let samples = Arc::new(RadialSamples {
                h,
                closed: profile.is_closed(),
                axis_start: profile.endpoint_on_axis(false),
                axis_end: profile.endpoint_on_axis(true),
                values,
            });
            let lam = lam.max(T::zero());
            for mm in if m == 0 { vec![0] } else { vec![-m, m] } {
                modes.push(EigenMode {
                    eigenvalue: lam,
                    mu: lam.sqrt(),
                    label: IsotypicLabel::Circle(mm),
                    source: Source::Discrete { grid_n },
                    shape: ModeShape::Radial { m: mm, samples: samples.clone() },
                });
            }
        }
    }
    // Orders beyond m_max have eigenvalues ≥ (m_max+1)²/max r².
    let next_m = T::of((m_max as usize + 1) * (m_max as usize + 1));
    complete_below = complete_below.min(next_m / (r_max * r_max));
    modes.sort_by(|a, b| {
        a.eigenvalue
            .partial_cmp(&b.eigenvalue)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.label.index().cmp(&b.label.index()))
    });
    Ok(EigenBasis {
        manifold: ModelManifold::SurfaceOfRevolution(profile.clone()),
        lambda_max: complete_below,
        modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_basis_counts() {
        let b = sphere_basis(110.0f64).unwrap();
        assert_eq!(b.len(), 121);
        assert_eq!(b.modes.last().unwrap().eigenvalue, 110.0);
        let b = sphere_basis(0.0f64).unwrap();
        assert_eq!(b.len(), 1);
        let v = b.modes[0].eval(&Point::new(0.4, 1.0));
        assert!((v.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(matches!(sphere_basis(2001.0f64 * 2002.0), Err(Error::Resource(_))));
        assert_eq!(specfun::sphere_eigenvalue(10), 110.0);
    }

    #[test]
    fn sphere_k_max_boundaries() {
        assert_eq!(sphere_k_max(110.0), Some(10));
        assert_eq!(sphere_k_max(109.999), Some(9));
        assert_eq!(sphere_k_max(1e6), Some(999));
        assert_eq!(sphere_k_max(-1.0), None);
    }

    #[test]
    fn torus_basis_examples() {
        let ev: f64 = torus_eigenvalue(1, 2);
        assert!((ev - 4.0 * PI * PI * 5.0).abs() < 1e-12);
        let b = torus_basis(4.0 * PI * PI, TorusGroup::Circle).unwrap();
        assert_eq!(b.len(), 5);
        let b = torus_basis(4.0 * PI * PI * 16.0, TorusGroup::Cyclic(3)).unwrap();
        let md = b.modes.iter().find(|m| m.shape == ModeShape::TorusExponential { k1: 4, k2: 0 }).unwrap();
        assert_eq!(md.label, IsotypicLabel::Cyclic { residue: 1, order: 3 });
    }

    #[test]
    fn eval_at_matches_per_mode() {
        let b = sphere_basis(56.0f64).unwrap();
        let x = Point::new(0.9, 2.1);
        let all = b.eval_at(&x);
        for (md, v) in b.modes.iter().zip(&all) {
            assert!((md.eval(&x) - v).norm() < 1e-13);
        }
    }

    #[test]
    fn sphere_profile_low_eigenvalues() {
        let p = Profile::<f64>::unit_sphere();
        let b = surface_of_revolution_basis(&p, 2, 3, 4000).unwrap();
        let m0: Vec<f64> = b.modes.iter().filter(|m| m.label == IsotypicLabel::Circle(0)).map(|m| m.eigenvalue).collect();
        assert!(m0[0].abs() < 1e-6);
        assert!((m0[1] - 2.0).abs() / 2.0 < 1e-4);
        assert!((m0[2] - 6.0).abs() / 6.0 < 1e-4);
        let m2 = b.modes.iter().find(|m| m.label == IsotypicLabel::Circle(2)).unwrap();
        assert!((m2.eigenvalue - 6.0).abs() / 6.0 < 1e-4);
    }

    #[test]
    fn torus_profile_constant_ground_state() {
        let p = Profile::<f64>::torus(2.0, 0.5).unwrap();
        let b = surface_of_revolution_basis(&p, 0, 2, 400).unwrap();
        let g = &b.modes[0];
        assert!(g.eigenvalue.abs() < 1e-9);
        let ModeShape::Radial { samples, .. } = &g.shape else { panic!() };
        let v0 = samples.values[0];
        assert!(samples.values.iter().all(|v| (v - v0).abs() < 1e-6 * v0.abs()));
    }

    #[test]
    fn rejects_coarse_grid() {
        let p = Profile::<f64>::unit_sphere();
        assert!(surface_of_revolution_basis(&p, 1, 2, 50).is_err());
    }
}
