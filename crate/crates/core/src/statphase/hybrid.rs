//! Decay of `I_{x,y}(μ) = ∫_{S¹}∫_{S²} e^{iμ⟨x − g·y, ω⟩} a(g) dω dg` on and off
//! the orbit `G·x`, and the finite-group analogue.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::critical::orbit_distance3;
use super::{oscillatory_integral, AmplitudeFn, Domain, Grid, StationaryPhaseProblem};
use crate::error::{Error, Result};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::scalar::{norm3, rotate_z, Complex, Real, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridOptions {
    /// Minimum node counts in `(g, t, φ)`.
    pub min_nodes: Vec<usize>,
    pub per_wavelength: f64,
    /// Ladder density relative to the oscillation half period `π/dist`.
    pub samples_per_half_period: usize,
    /// Ladder density floor on a logarithmic scale.
    pub min_per_octave: usize,
}

impl Default for HybridOptions {
    fn default() -> Self {
        HybridOptions { min_nodes: vec![64, 40, 8], per_wavelength: 6.0, samples_per_half_period: 4, min_per_octave: 8 }
    }
}

/// `dist(y, G·x)` for the rotation group about the z-axis.
pub fn orbit_distance<T: Real>(x: &Vec3<T>, y: &Vec3<T>) -> T {
    orbit_distance3(x, y)
}

/// The integral as a [`StationaryPhaseProblem`]: amplitude
/// `a(g) = (1 + cos g)/(4π)` (the normalized circle measure times a factor
/// vanishing to second order at `g = π`), sphere axis along `x − g·y`.
pub fn hybrid_problem<T: Real>(x: Vec3<T>, y: Vec3<T>, opts: &HybridOptions) -> StationaryPhaseProblem<T> {
    let axis = Arc::new(move |g: T| {
        let gy = rotate_z(g, &y);
        [x[0] - gy[0], x[1] - gy[1], x[2] - gy[2]]
    });
    let (rx, ry) = ((x[0] * x[0] + x[1] * x[1]).sqrt(), (y[0] * y[0] + y[1] * y[1]).sqrt());
    let vmax = ((rx + ry) * (rx + ry) + (x[2] - y[2]) * (x[2] - y[2])).sqrt();
    let norm = T::one() / (T::lit(4.0) * T::PI());
    StationaryPhaseProblem::new(
        move |p: &[T]| {
            let gy = rotate_z(p[3], &y);
            (x[0] - gy[0]) * p[0] + (x[1] - gy[1]) * p[1] + (x[2] - gy[2]) * p[2]
        },
        move |p: &[T]| Complex::new((T::one() + p[3].cos()) * norm, T::zero()),
        Domain::SphereCircle { axis: Some(axis) },
    )
    .with_grid(Grid::Auto { per_wavelength: opts.per_wavelength, min_nodes: opts.min_nodes.clone() })
    // In the aligned frame ψ = |x − g·y| t, so |∂_g ψ| ≤ |y_xy| and ∂_φ ψ = 0.
    .with_lipschitz(vec![ry, vmax, T::zero()])
}

pub fn hybrid_integral<T: Real>(x: Vec3<T>, y: Vec3<T>, mu: T, opts: &HybridOptions) -> Result<Complex<T>> {
    oscillatory_integral(&hybrid_problem(x, y, opts), mu)
}

/// Sample points on `[lo, hi]` spaced at most `π/(dist·s)` and at most
/// `2^{1/m}` apart multiplicatively.
pub fn envelope_ladder(lo: f64, hi: f64, dist: f64, samples_per_half_period: usize, min_per_octave: usize) -> Vec<f64> {
    let ratio = 2f64.powf(1.0 / min_per_octave.max(1) as f64) - 1.0;
    let lin = if dist > 0.0 { std::f64::consts::PI / (dist * samples_per_half_period.max(1) as f64) } else { f64::INFINITY };
    let mut out = vec![lo];
    let mut mu = lo;
    while mu < hi {
        mu = (mu + lin.min(mu * ratio)).min(hi);
        out.push(mu);
    }
    out
}

/// Maxima of `values` over the trailing octaves `[μ/2, μ]` of each grid
/// point. The ladder should start at `grid[0]/2`.
pub fn octave_envelope(grid: &[f64], ladder: &[f64], values: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&m| {
            ladder
                .iter()
                .zip(values)
                .filter(|(l, _)| **l >= m / 2.0 * (1.0 - 1e-12) && **l <= m * (1.0 + 1e-12))
                .map(|(_, v)| *v)
                .fold(0.0, f64::max)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridDecay {
    pub dist: f64,
    pub on_orbit: bool,
    pub fit: PowerLawFit,
    /// `−κ = −1` on the orbit, `−(n − 1 + κ)/2 = −3/2` off it.
    pub expected_slope: f64,
    /// Off-orbit fit with `μ_min · dist < 3`: mixed regime.
    pub regime_warning: bool,
    pub mu_grid: Vec<f64>,
    pub envelope: Vec<f64>,
    pub ladder: Vec<f64>,
    pub ladder_abs: Vec<f64>,
}

fn check_geometric(grid: &[f64]) -> Result<()> {
    if grid.len() < 8 {
        return Err(Error::Domain(format!("mu grid has {} points, need at least 8", grid.len())));
    }
    if grid.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
        return Err(Error::Domain("mu grid must be positive".into()));
    }
    let r = grid[1] / grid[0];
    if !(r > 1.0) || grid.windows(2).any(|w| ((w[1] / w[0]) / r - 1.0).abs() > 1e-6) {
        return Err(Error::Domain("mu grid must be geometric and increasing".into()));
    }
    Ok(())
}

fn ladder_values<T: Real>(x: Vec3<T>, y: Vec3<T>, ladder: &[f64], opts: &HybridOptions) -> Result<Vec<f64>> {
    let vals: Vec<Result<f64>> =
        ladder.par_iter().map(|&m| hybrid_integral(x, y, T::lit(m), opts).map(|v| v.norm().as_f64())).collect();
    vals.into_iter().collect()
}

/// Envelope power law of `|I_{x,y}(μ)|` over a geometric `mu_grid`.
pub fn hybrid_decay_fit<T: Real>(x: Vec3<T>, y: Vec3<T>, mu_grid: &[f64], opts: &HybridOptions) -> Result<HybridDecay> {
    check_geometric(mu_grid)?;
    let dist = orbit_distance(&x, &y).as_f64();
    let scale = 1.0 + norm3(&x).as_f64() + norm3(&y).as_f64();
    let on_orbit = dist <= 1e-9 * scale;
    let (lo, hi) = (mu_grid[0], mu_grid[mu_grid.len() - 1]);
    let ladder = envelope_ladder(lo / 2.0, hi, if on_orbit { 0.0 } else { dist }, opts.samples_per_half_period, opts.min_per_octave);
    let ladder_abs = ladder_values(x, y, &ladder, opts)?;
    let envelope = octave_envelope(mu_grid, &ladder, &ladder_abs);
    let fit = fit_power_law(mu_grid, &envelope)?;
    let regime_warning = !on_orbit && lo * dist < 3.0;
    if regime_warning {
        log::warn!("off-orbit decay fit in the mixed regime: mu_min * dist = {}", lo * dist);
    }
    Ok(HybridDecay {
        dist,
        on_orbit,
        fit,
        expected_slope: if on_orbit { -1.0 } else { -1.5 },
        regime_warning,
        mu_grid: mu_grid.to_vec(),
        envelope,
        ladder,
        ladder_abs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandSeries {
    pub dist: f64,
    pub mu_grid: Vec<f64>,
    /// Octave maxima of `|I| μ (μ d + 1)^{1/2}`.
    pub normalized: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationBand {
    pub series: Vec<BandSeries>,
    pub min: f64,
    pub max: f64,
    /// `max / min` over all distances and grid points.
    pub band: f64,
}

/// Normalized envelopes `|I| μ^κ (μd + 1)^{(n−1−κ)/2}` (κ = 1, n = 3) for
/// `y = x + d ẑ`, each restricted to `μ ∈ mu_range` with `μd ∈ mud_range`.
pub fn interpolation_band<T: Real>(
    x: Vec3<T>,
    dists: &[f64],
    mu_range: (f64, f64),
    mud_range: (f64, f64),
    opts: &HybridOptions,
) -> Result<InterpolationBand> {
    let mut series = Vec::with_capacity(dists.len());
    for &d in dists {
        let lo = mu_range.0.max(mud_range.0 / d);
        let hi = mu_range.1.min(mud_range.1 / d);
        if !(hi > lo) {
            return Err(Error::Domain(format!("empty mu range for dist {d}")));
        }
        let n = ((hi / lo).log2() * 2.0).floor() as usize + 1;
        let grid = crate::fit::geometric_grid(lo, lo * 2f64.sqrt().powi(n as i32 - 1), n.max(2));
        let y = [x[0], x[1], x[2] + T::lit(d)];
        let ladder = envelope_ladder(lo / 2.0, hi, d, opts.samples_per_half_period, opts.min_per_octave);
        let abs = ladder_values(x, y, &ladder, opts)?;
        let norm: Vec<f64> = ladder.iter().zip(&abs).map(|(m, a)| a * m * (m * d + 1.0).sqrt()).collect();
        let normalized = octave_envelope(&grid, &ladder, &norm);
        series.push(BandSeries { dist: d, mu_grid: grid, normalized });
    }
    let all = series.iter().flat_map(|s| s.normalized.iter().copied());
    let (min, max) = all.fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    Ok(InterpolationBand { series, min, max, band: max / min })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGroupIntegral<T> {
    /// `Σ_g` of the per-element integrals.
    pub total: Complex<T>,
    /// `∫_{S²} e^{iμ⟨x − g_j y, ω⟩} a dω` for `g_j` the rotation by `2πj/N`.
    pub terms: Vec<Complex<T>>,
    /// `|x − g_j y|`.
    pub separations: Vec<T>,
}

/// Sum over the cyclic group of order `order` acting by rotations about
/// the z-axis. `amplitude` defaults to 1.
pub fn finite_group_integral<T: Real>(
    x: Vec3<T>,
    y: Vec3<T>,
    order: u32,
    mu: T,
    amplitude: Option<AmplitudeFn<T>>,
) -> Result<FiniteGroupIntegral<T>> {
    if order == 0 {
        return Err(Error::Domain("group order must be positive".into()));
    }
    let amp: AmplitudeFn<T> = amplitude.unwrap_or_else(|| Arc::new(|_: &[T]| Complex::new(T::one(), T::zero())));
    let parts: Vec<Result<(Complex<T>, T)>> = (0..order)
        .into_par_iter()
        .map(|j| {
            let g = T::TAU() * T::of(j as usize) / T::of(order as usize);
            let gy = rotate_z(g, &y);
            let v = [x[0] - gy[0], x[1] - gy[1], x[2] - gy[2]];
            let sep = norm3(&v);
            let axis = if sep > T::zero() { Some(v) } else { None };
            let mut p = StationaryPhaseProblem::new(
                move |w: &[T]| v[0] * w[0] + v[1] * w[1] + v[2] * w[2],
                |_: &[T]| Complex::new(T::one(), T::zero()),
                Domain::Sphere { axis },
            );
            p.amplitude = amp.clone();
            Ok((oscillatory_integral(&p, mu)?, sep))
        })
        .collect();
    let mut terms = Vec::with_capacity(order as usize);
    let mut separations = Vec::with_capacity(order as usize);
    for r in parts {
        let (t, s) = r?;
        terms.push(t);
        separations.push(s);
    }
    let total = crate::quadrature::pairwise_sum_complex(&terms);
    Ok(FiniteGroupIntegral { total, terms, separations })
}
