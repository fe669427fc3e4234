//! Stationary-phase, hybrid-decay, critical-set and caustic experiments.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Comparison, ExperimentReport, Statistic};
use crate::error::{Error, Result};
use crate::fit::geometric_grid;
use crate::scalar::{Complex, Vec3};
use crate::statphase::{
    caustic_interpolation, critical_set_scan, envelope_ladder, hybrid_decay_fit, interpolation_band, octave_envelope,
    oscillatory_integral, stationary_expansion, HybridOptions, ScanConfig, StationaryPhaseProblem,
};

type C64 = Complex<f64>;

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

fn check_mu_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 5 || grid.iter().any(|m| !(m.is_finite() && *m > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("mu grid needs at least 5 positive increasing points".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatphasePreset {
    /// `ψ = x²/2`, `a = e^{−x²/2}` on `[−12, 12]`; `I(μ) = (2π/(1 − iμ))^{1/2}`.
    Gaussian,
    /// `ψ = ⟨v, ω⟩` on `S²`; `I(μ) = 4π sin(μ|v|)/(μ|v|)`.
    SpherePlaneWave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatphaseOptions {
    pub preset: StatphasePreset,
    pub mu_grid: Vec<f64>,
    pub plane_wave: [f64; 3],
    pub rel_tol: f64,
    pub remainder_slope_tol: f64,
    pub decay_slope_tol: f64,
    /// Bound on `|numeric − exact|` along the plane-wave ladder.
    pub quadrature_tol: f64,
    pub samples_per_half_period: usize,
}

impl Default for StatphaseOptions {
    fn default() -> Self {
        StatphaseOptions {
            preset: StatphasePreset::Gaussian,
            mu_grid: geometric_grid(20.0, 400.0, 12),
            plane_wave: [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
            rel_tol: 1e-6,
            remainder_slope_tol: 0.1,
            decay_slope_tol: 0.05,
            quadrature_tol: 1e-8,
            samples_per_half_period: 4,
        }
    }
}

/// Numeric oscillatory integrals against closed forms and the leading
/// stationary-phase term.
pub fn run_statphase_experiment(opts: &StatphaseOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_mu_grid(&opts.mu_grid)?;
    let grid = opts.mu_grid.clone();
    let id = match opts.preset {
        StatphasePreset::Gaussian => "statphase-gaussian",
        StatphasePreset::SpherePlaneWave => "statphase-sphere",
    };
    let mut r = ExperimentReport::new(id, opts);
    match opts.preset {
        StatphasePreset::Gaussian => {
            let problem = StationaryPhaseProblem::<f64>::gaussian();
            let exp = stationary_expansion(&problem)?;
            let numeric = collect(grid.par_iter().map(|&m| oscillatory_integral(&problem, m)).collect())?;
            let exact: Vec<C64> = grid.iter().map(|&m| (C64::new(2.0 * PI, 0.0) / C64::new(1.0, -m)).sqrt()).collect();
            let pred: Vec<C64> = grid.iter().map(|&m| exp.predict(m)).collect();
            r.prediction = serde_json::to_value(&exp).unwrap_or_default();
            r.tolerance("rel", opts.rel_tol);
            r.tolerance("remainder_slope", opts.remainder_slope_tol);
            r.add_series("numeric_abs", "mu", grid.clone(), numeric.iter().map(|z| z.norm()).collect());
            r.add_series("exact_abs", "mu", grid.clone(), exact.iter().map(|z| z.norm()).collect());
            r.add_series("predicted_abs", "mu", grid.clone(), pred.iter().map(|z| z.norm()).collect());
            r.add_series(
                "rel_err",
                "mu",
                grid.clone(),
                numeric.iter().zip(&exact).map(|(n, e)| (n - e).norm() / e.norm()).collect(),
            );
            r.add_series(
                "scaled_remainder",
                "mu",
                grid.clone(),
                numeric.iter().zip(&pred).zip(&grid).map(|((n, p), m)| (n - p).norm() * m.powf(1.5)).collect(),
            );
            r.check("exact_vs_numeric", &["rel_err"], Statistic::Max, Comparison::AtMost { bound: opts.rel_tol });
            r.check(
                "remainder_bounded",
                &["scaled_remainder"],
                Statistic::Slope,
                Comparison::Within { target: 0.0, tol: opts.remainder_slope_tol },
            );
            if let Some(t) = exp.terms.first() {
                r.derived.insert("signature".into(), t.signature as f64);
            }
        }
        StatphasePreset::SpherePlaneWave => {
            let v: Vec3<f64> = opts.plane_wave;
            let vn = crate::scalar::norm3(&v);
            let problem = StationaryPhaseProblem::<f64>::sphere_plane_wave(v)?;
            let exp = stationary_expansion(&problem)?;
            let (lo, hi) = (grid[0], grid[grid.len() - 1]);
            let ladder = envelope_ladder(lo / 2.0, hi, vn, opts.samples_per_half_period, 8);
            let numeric = collect(ladder.par_iter().map(|&m| oscillatory_integral(&problem, m)).collect())?;
            let abs: Vec<f64> = numeric.iter().map(|z| z.norm()).collect();
            let exact: Vec<f64> = ladder.iter().map(|&m| (4.0 * PI * (m * vn).sin() / (m * vn)).abs()).collect();
            let err: Vec<f64> = numeric
                .iter()
                .zip(&ladder)
                .map(|(z, &m)| (z - C64::new(4.0 * PI * (m * vn).sin() / (m * vn), 0.0)).norm())
                .collect();
            let envelope = octave_envelope(&grid, &ladder, &abs);
            r.prediction = serde_json::to_value(&exp).unwrap_or_default();
            r.tolerance("decay_slope", opts.decay_slope_tol);
            r.tolerance("quadrature", opts.quadrature_tol);
            r.add_series("ladder_abs", "mu", ladder.clone(), abs);
            r.add_series("exact_abs", "mu", ladder.clone(), exact);
            r.add_series("abs_err", "mu", ladder, err);
            r.add_series("envelope", "mu", grid.clone(), envelope.clone());
            r.add_series("predicted_envelope", "mu", grid.clone(), grid.iter().map(|&m| exp.envelope(m)).collect());
            r.check(
                "decay_order",
                &["envelope"],
                Statistic::Slope,
                Comparison::Within { target: -1.0, tol: opts.decay_slope_tol },
            );
            r.check("quadrature_vs_closed_form", &["abs_err"], Statistic::Max, Comparison::AtMost {
                bound: opts.quadrature_tol,
            });
            r.fit = crate::fit::fit_power_law(&grid, &envelope).ok();
            for (i, t) in exp.terms.iter().enumerate() {
                r.derived.insert(format!("signature_{i}"), t.signature as f64);
            }
        }
    }
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridExperimentOptions {
    pub x: [f64; 3],
    /// `y = x + d ẑ` for the off-orbit fit.
    pub off_dist: f64,
    pub mu_grid: Vec<f64>,
    pub slope_tol: f64,
    pub options: HybridOptions,
}

impl Default for HybridExperimentOptions {
    fn default() -> Self {
        HybridExperimentOptions {
            x: [1.0, 0.0, 0.0],
            off_dist: 0.5,
            mu_grid: geometric_grid(50.0, 400.0, 8),
            slope_tol: 0.1,
            options: HybridOptions::default(),
        }
    }
}

pub fn run_hybrid_experiment(opts: &HybridExperimentOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let x = opts.x;
    let y = [x[0], x[1], x[2] + opts.off_dist];
    let on = hybrid_decay_fit(x, x, &opts.mu_grid, &opts.options)?;
    let off = hybrid_decay_fit(x, y, &opts.mu_grid, &opts.options)?;
    let mut r = ExperimentReport::new("hybrid", opts);
    r.prediction = serde_json::json!({ "on_orbit_slope": on.expected_slope, "off_orbit_slope": off.expected_slope });
    r.tolerance("slope", opts.slope_tol);
    r.add_series("on_envelope", "mu", on.mu_grid.clone(), on.envelope.clone());
    r.add_series("off_envelope", "mu", off.mu_grid.clone(), off.envelope.clone());
    r.add_series("on_abs", "mu", on.ladder.clone(), on.ladder_abs.clone());
    r.add_series("off_abs", "mu", off.ladder.clone(), off.ladder_abs.clone());
    r.check(
        "on_orbit_slope",
        &["on_envelope"],
        Statistic::Slope,
        Comparison::Within { target: on.expected_slope, tol: opts.slope_tol },
    );
    r.check(
        "off_orbit_slope",
        &["off_envelope"],
        Statistic::Slope,
        Comparison::Within { target: off.expected_slope, tol: opts.slope_tol },
    );
    r.derived.insert("off_dist".into(), off.dist);
    r.derived.insert("on_r_squared".into(), on.fit.r_squared);
    r.derived.insert("off_r_squared".into(), off.fit.r_squared);
    if off.regime_warning {
        r.warn(format!("off-orbit fit in the mixed regime: mu_min·dist = {}", opts.mu_grid[0] * off.dist));
    }
    r.fit = Some(on.fit);
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterpolationOptions {
    pub x: [f64; 3],
    pub dists: Vec<f64>,
    pub mu_range: (f64, f64),
    pub mud_range: (f64, f64),
    pub band_factor: f64,
    pub options: HybridOptions,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        InterpolationOptions {
            x: [1.0, 0.0, 0.0],
            dists: vec![0.02, 0.05, 0.1, 0.2, 0.5],
            mu_range: (5.0, 400.0),
            mud_range: (0.1, 100.0),
            band_factor: 2.0,
            options: HybridOptions::default(),
        }
    }
}

/// The envelope `|I|·μ·(μd + 1)^{1/2}` across the transition from the
/// orbit to the off-orbit regime.
pub fn run_interpolation_experiment(opts: &InterpolationOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let band = interpolation_band(opts.x, &opts.dists, opts.mu_range, opts.mud_range, &opts.options)?;
    let mut r = ExperimentReport::new("interp", opts);
    r.prediction = serde_json::json!({ "normalization": "|I| mu (mu d + 1)^(1/2)" });
    r.tolerance("band", opts.band_factor);
    let mut names = Vec::new();
    for s in &band.series {
        let name = format!("normalized_d{}", s.dist);
        r.add_series(&name, "mu", s.mu_grid.clone(), s.normalized.clone());
        names.push(name);
    }
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    r.check("band", &refs, Statistic::Band, Comparison::AtMost { bound: opts.band_factor });
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CritscanOptions {
    pub x: [f64; 3],
    /// Off-orbit separations: `y = (cos δ, 0, sin δ)`.
    pub deltas: Vec<f64>,
    pub scan: ScanConfig,
    pub gradient_tol: f64,
    pub det_slope_tol: f64,
}

impl Default for CritscanOptions {
    fn default() -> Self {
        CritscanOptions {
            x: [1.0, 0.0, 0.0],
            deltas: vec![0.02, 0.04, 0.08, 0.15, 0.3],
            scan: ScanConfig::default(),
            gradient_tol: 1e-10,
            det_slope_tol: 0.1,
        }
    }
}

pub fn run_critscan_experiment(opts: &CritscanOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    if opts.deltas.len() < 5 {
        return Err(Error::Domain("critscan needs at least 5 separations".into()));
    }
    let x = opts.x;
    let on = critical_set_scan(x, x, &opts.scan)?;
    let off = collect(
        opts.deltas
            .iter()
            .map(|&d| critical_set_scan(x, [d.cos(), 0.0, d.sin()], &opts.scan))
            .collect(),
    )?;
    let mut r = ExperimentReport::new("critscan", opts);
    r.prediction = serde_json::json!({
        "on_orbit": { "curve_components": 1, "dimension": 1, "codimension": 2 },
        "det_slope": 1.0,
    });
    r.tolerance("gradient", opts.gradient_tol);
    r.tolerance("det_slope", opts.det_slope_tol);
    let idx = |n: usize| (0..n).map(|i| i as f64).collect::<Vec<f64>>();
    r.add_series("on_gradient", "point", idx(on.points.len()), on.points.iter().map(|p| p.gradient_norm).collect());
    let curves: Vec<usize> = (0..on.components.len()).filter(|&c| on.components[c].dimension == 1).collect();
    r.add_series("curve_dimension", "component", idx(curves.len()), curves.iter().map(|&c| on.components[c].dimension as f64).collect());
    let codims: Vec<f64> =
        on.points.iter().filter(|p| curves.contains(&p.component)).map(|p| p.transversal_dim as f64).collect();
    r.add_series("curve_codimension", "point", idx(codims.len()), codims);
    let dets: Vec<f64> = off.iter().map(|s| s.min_isolated_det().unwrap_or(f64::NAN)).collect();
    r.add_series("off_det", "delta", opts.deltas.clone(), dets);
    let off_grad: Vec<f64> = off.iter().map(|s| s.max_gradient()).collect();
    r.add_series("off_gradient", "delta", opts.deltas.clone(), off_grad);
    r.check("on_gradient", &["on_gradient"], Statistic::Max, Comparison::AtMost { bound: opts.gradient_tol });
    r.check("curve_components", &["curve_dimension"], Statistic::Count, Comparison::Within { target: 1.0, tol: 0.0 });
    r.check("curve_codimension_max", &["curve_codimension"], Statistic::Max, Comparison::Within { target: 2.0, tol: 0.0 });
    r.check("curve_codimension_min", &["curve_codimension"], Statistic::Min, Comparison::Within { target: 2.0, tol: 0.0 });
    r.check("off_gradient", &["off_gradient"], Statistic::Max, Comparison::AtMost { bound: opts.gradient_tol });
    r.check("det_slope", &["off_det"], Statistic::Slope, Comparison::Within { target: 1.0, tol: opts.det_slope_tol });
    r.derived.insert("on_points".into(), on.points.len() as f64);
    r.derived.insert("on_components".into(), on.components.len() as f64);
    if !off.iter().all(|s| s.classification == crate::statphase::Classification::OffOrbit) {
        r.warn("an off-orbit scan was not classified off-orbit");
    }
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CausticOptions {
    pub mutau_grid: Vec<f64>,
    pub epsilon: f64,
    /// The two frequencies compared for product invariance.
    pub mu_pair: (f64, f64),
    pub rel_tol: f64,
    pub invariance_tol: f64,
    pub tau_zero_tol: f64,
}

impl Default for CausticOptions {
    fn default() -> Self {
        CausticOptions {
            mutau_grid: geometric_grid(2.0, 100.0, 12),
            epsilon: 1.0,
            mu_pair: (10.0, 40.0),
            rel_tol: 0.35,
            invariance_tol: 1e-10,
            tau_zero_tol: 1e-12,
        }
    }
}

/// The ε-shifted expansion on the Gaussian problem as `μτ` varies.
pub fn run_caustic_experiment(opts: &CausticOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_mu_grid(&opts.mutau_grid)?;
    let problem = StationaryPhaseProblem::<f64>::gaussian();
    let (m1, m2) = opts.mu_pair;
    let vals = collect(
        opts.mutau_grid
            .par_iter()
            .map(|&s| {
                let a = caustic_interpolation(&problem, m1, s / m1, opts.epsilon)?;
                let b = caustic_interpolation(&problem, m2, s / m2, opts.epsilon)?;
                Ok((a, b))
            })
            .collect(),
    )?;
    let zero = caustic_interpolation(&problem, m1, 0.0, opts.epsilon)?;
    let integral = (2.0 * PI).sqrt();
    let grid = opts.mutau_grid.clone();
    let mut r = ExperimentReport::new("caustic", opts);
    r.prediction = serde_json::json!({ "tau_zero": integral, "epsilon": opts.epsilon });
    r.tolerance("rel", opts.rel_tol);
    r.tolerance("invariance", opts.invariance_tol);
    r.tolerance("tau_zero", opts.tau_zero_tol);
    r.add_series("numeric_abs", "mu_tau", grid.clone(), vals.iter().map(|(a, _)| a.numeric.norm()).collect());
    r.add_series("predicted_abs", "mu_tau", grid.clone(), vals.iter().map(|(a, _)| a.prediction.norm()).collect());
    r.add_series(
        "rel_err",
        "mu_tau",
        grid.clone(),
        vals.iter().map(|(a, _)| (a.prediction - a.numeric).norm() / a.numeric.norm()).collect(),
    );
    r.add_series("invariance", "mu_tau", grid, vals.iter().map(|(a, b)| (a.numeric - b.numeric).norm()).collect());
    r.add_series("tau_zero_err", "tau", vec![0.0], vec![(zero.numeric - C64::new(integral, 0.0)).norm()]);
    r.check("prediction_rel_err", &["rel_err"], Statistic::Max, Comparison::AtMost { bound: opts.rel_tol });
    r.check("product_invariance", &["invariance"], Statistic::Max, Comparison::AtMost { bound: opts.invariance_tol });
    r.check("tau_zero", &["tau_zero_err"], Statistic::Max, Comparison::AtMost { bound: opts.tau_zero_tol });
    // Reported only: the prediction carries no meaning at μτ + ε ≤ 1.
    r.derived.insert("tau_zero_prediction_abs".into(), zero.prediction.norm());
    if zero.regime_warning {
        r.warn("tau = 0 prediction lies outside the asymptotic regime and is not asserted");
    }
    Ok(r.finish(start))
}
