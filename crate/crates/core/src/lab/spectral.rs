//! Spectral experiments on truncated eigenbases.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{window_mean, Comparison, ExperimentReport, Statistic};
use crate::eigensolve::{sphere_basis, sphere_k_max, surface_of_revolution_basis, torus_basis, EigenBasis, TorusGroup};
use crate::error::{Error, Result};
use crate::fit::fit_power_law;
use crate::geometry::{IsotypicLabel, ModelManifold, Point, Profile};
use crate::spectral::{cluster_lp_norm, exponent_delta, kuznecov_sum, LpQuadrature, ReducedSpectralFunction};
use crate::weylcoef::{global_leading_coefficient, local_leading_coefficient, OrbitMeasure};

/// Truncation of the surface-of-revolution solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisOptions {
    pub m_max: u32,
    pub modes_per_m: usize,
    pub grid_n: usize,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions { m_max: 20, modes_per_m: 60, grid_n: 4000 }
    }
}

/// A basis complete up to `lambda_max`.
pub fn build_basis(manifold: &ModelManifold<f64>, lambda_max: f64, opts: &BasisOptions) -> Result<EigenBasis<f64>> {
    let basis = match manifold {
        ModelManifold::RoundSphere2 => sphere_basis(lambda_max)?,
        ModelManifold::FlatTorus2 => torus_basis(lambda_max, TorusGroup::Circle)?,
        ModelManifold::FlatTorus2FiniteCyclic { order } => torus_basis(lambda_max, TorusGroup::Cyclic(*order))?,
        ModelManifold::SurfaceOfRevolution(p) => surface_of_revolution_basis(p, opts.m_max, opts.modes_per_m, opts.grid_n)?,
    };
    if basis.lambda_max < lambda_max {
        return Err(Error::Truncation { requested: lambda_max, limit: basis.lambda_max });
    }
    Ok(basis)
}

fn component(basis: &EigenBasis<f64>, label: IsotypicLabel) -> EigenBasis<f64> {
    EigenBasis {
        manifold: basis.manifold.clone(),
        lambda_max: basis.lambda_max,
        modes: basis.modes.iter().filter(|m| m.label == label).cloned().collect(),
    }
}

/// `n` points ending at `hi` with ratio `√2`.
pub fn sqrt2_grid(hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| hi * 2f64.powf(-((n - 1 - i) as f64) / 2.0)).collect()
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain(format!("{name} is empty")));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!("{name} must be positive and strictly increasing")));
    }
    Ok(())
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylOptions {
    pub measure: OrbitMeasure,
    pub fiber_nodes: usize,
    /// Number of consecutive unit windows averaged.
    pub window: usize,
    pub rel_tol: f64,
    pub slope_tol: f64,
    /// Assert the fitted exponent; otherwise it is only reported. Off for
    /// torus components with `m ≠ 0`, whose exact count carries the factor
    /// `(1 − 4π²m²/λ)^{1/2}` and so steepens at small λ.
    pub check_exponent: bool,
    pub basis: BasisOptions,
}

impl Default for WeylOptions {
    fn default() -> Self {
        WeylOptions {
            measure: OrbitMeasure::default(),
            fiber_nodes: 512,
            window: 5,
            rel_tol: 0.05,
            slope_tol: 0.02,
            check_exponent: true,
            basis: BasisOptions::default(),
        }
    }
}

/// `e_γ(x, x, λ)` after window averaging against the local Weyl prediction.
pub fn run_local_weyl_experiment(
    manifold: &ModelManifold<f64>,
    x: Point<f64>,
    label: IsotypicLabel,
    lambda_grid: &[f64],
    opts: &WeylOptions,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_grid("lambda grid", lambda_grid)?;
    let basis = build_basis(manifold, lambda_grid[lambda_grid.len() - 1], &opts.basis)?;
    let comp = component(&basis, label);
    let rsf = ReducedSpectralFunction::new(&comp, label);
    let pred = local_leading_coefficient(manifold, &x, label, opts.fiber_nodes, opts.measure)?;
    let measured = collect(
        lambda_grid
            .par_iter()
            .map(|&l| window_mean(l, opts.window, |v| rsf.diag(&x, v)))
            .collect(),
    )?;
    let predicted: Vec<f64> = lambda_grid
        .iter()
        .map(|&l| window_mean(l, opts.window, |v| Ok(pred.predict(v))).unwrap_or(f64::NAN))
        .collect();

    let mut r = ExperimentReport::new(
        "weyl",
        serde_json::json!({
            "manifold": manifold.name(),
            "x": [x.a, x.b],
            "label": label,
            "lambda_grid": lambda_grid,
            "options": opts,
        }),
    );
    r.prediction = serde_json::json!({
        "coefficient": pred.coefficient,
        "exponent": pred.exponent,
        "measure": opts.measure,
    });
    r.tolerance("rel", opts.rel_tol);
    r.tolerance("slope", opts.slope_tol);
    let grid = lambda_grid.to_vec();
    r.add_series("measured", "lambda", grid.clone(), measured.clone());
    r.add_series("predicted", "lambda", grid.clone(), predicted.clone());
    r.derived.insert("coefficient".into(), pred.coefficient);
    r.derived.insert("exponent".into(), pred.exponent);
    if pred.coefficient == 0.0 {
        r.check("vanishes", &["measured"], Statistic::MaxAbs, Comparison::AtMost { bound: 0.0 });
    } else {
        let ratio: Vec<f64> = measured.iter().zip(&predicted).map(|(m, p)| m / p).collect();
        let rem: Vec<f64> = measured.iter().zip(&predicted).map(|(m, p)| (m - p).abs()).collect();
        r.add_series("ratio", "lambda", grid.clone(), ratio);
        let ratio_last = r.check(
            "ratio_at_max_lambda",
            &["ratio"],
            Statistic::Last,
            Comparison::Relative { target: 1.0, tol: opts.rel_tol },
        );
        r.derived.insert("measured_coefficient".into(), ratio_last * pred.coefficient);
        if grid.len() >= 5 {
            if opts.check_exponent {
                if measured.iter().any(|v| *v <= 0.0) {
                    r.warn("measured counts vanish on part of the grid; the exponent fit is undefined");
                }
                r.check(
                    "exponent",
                    &["measured"],
                    Statistic::Slope,
                    Comparison::Within { target: pred.exponent, tol: opts.slope_tol },
                );
            }
            r.fit = fit_power_law(&grid, &measured).ok();
            if let Some(f) = &r.fit {
                r.derived.insert("fitted_exponent".into(), f.slope);
            }
            if let Ok(f) = fit_power_law(&grid, &rem) {
                r.derived.insert("remainder_slope".into(), f.slope);
            }
        }
        r.add_series("remainder", "lambda", grid, rem);
    }
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConcentrationOptions {
    /// Degrees `k` averaged for the θ-profile, inclusive.
    pub k_window: (u32, u32),
    pub theta_grid: Vec<f64>,
    pub pole_k: Vec<u32>,
    /// Samples of the local maximum over one oscillation `2π/(k+½)`.
    pub samples: usize,
    pub slope_tol: f64,
    pub pole_slope_tol: f64,
}

impl Default for ConcentrationOptions {
    fn default() -> Self {
        ConcentrationOptions {
            k_window: (490, 510),
            theta_grid: crate::fit::geometric_grid(0.05, 1.0, 16),
            pole_k: crate::fit::geometric_grid(100.0, 800.0, 10).iter().map(|k| k.round() as u32).collect(),
            samples: 16,
            slope_tol: 0.15,
            pole_slope_tol: 0.01,
        }
    }
}

/// Zonal cluster sums: the θ-envelope against `sin θ` and the pole value
/// against `k`.
pub fn run_concentration_experiment(opts: &ConcentrationOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (k_lo, k_hi) = opts.k_window;
    if k_hi < k_lo || k_lo == 0 {
        return Err(Error::Domain(format!("bad k window ({k_lo}, {k_hi})")));
    }
    check_grid("theta grid", &opts.theta_grid)?;
    if opts.theta_grid.iter().any(|t| *t >= PI) || opts.pole_k.is_empty() {
        return Err(Error::Domain("theta grid must lie in (0, π) and pole_k must be nonempty".into()));
    }
    let k_top = k_hi.max(*opts.pole_k.iter().max().unwrap_or(&0)) as f64;
    let basis = sphere_basis(k_top * (k_top + 1.0) + 1.0)?;
    let zonal = component(&basis, IsotypicLabel::Circle(0));
    let first = component(&basis, IsotypicLabel::Circle(1));
    let rsf0 = ReducedSpectralFunction::new(&zonal, IsotypicLabel::Circle(0));
    let rsf1 = ReducedSpectralFunction::new(&first, IsotypicLabel::Circle(1));
    let window = |k: u32| (k as f64) * (k as f64 + 1.0) - 0.5;
    let samples = opts.samples.max(2);

    let envelope = collect(
        opts.theta_grid
            .par_iter()
            .map(|&theta| {
                let mut acc = 0.0;
                for k in k_lo..=k_hi {
                    let width = 2.0 * PI / (k as f64 + 0.5);
                    let mut best = 0.0f64;
                    for j in 0..samples {
                        let t = theta + (j as f64 / (samples - 1) as f64 - 0.5) * width;
                        let v = rsf0.cluster(&Point::new(t.clamp(0.0, PI), 0.0), window(k))?.value;
                        best = best.max(v);
                    }
                    acc += best;
                }
                Ok(acc / (k_hi - k_lo + 1) as f64)
            })
            .collect(),
    )?;
    let pole = Point::new(0.0, 0.0);
    let mut pole_vals = Vec::with_capacity(opts.pole_k.len());
    let mut pole_m1 = Vec::with_capacity(opts.pole_k.len());
    for &k in &opts.pole_k {
        pole_vals.push(rsf0.cluster(&pole, window(k))?.value);
        pole_m1.push(rsf1.cluster(&pole, window(k))?.value);
    }

    let mut r = ExperimentReport::new("concentration", opts);
    r.prediction = serde_json::json!({ "envelope_exponent": -1.0, "pole_exponent": 1.0, "pole_m1": 0.0 });
    r.tolerance("slope", opts.slope_tol);
    r.tolerance("pole_slope", opts.pole_slope_tol);
    for &t in &opts.theta_grid {
        if (k_lo as f64) * t.sin() <= 1.0 {
            r.warn(format!("k·sinθ ≤ 1 at θ = {t}: outside the concentration regime"));
        }
    }
    let sin: Vec<f64> = opts.theta_grid.iter().map(|t| t.sin()).collect();
    let ks: Vec<f64> = opts.pole_k.iter().map(|&k| k as f64).collect();
    r.add_series("envelope", "sin_theta", sin.clone(), envelope.clone());
    r.add_series("pole", "k", ks.clone(), pole_vals);
    r.add_series("pole_m1", "k", ks, pole_m1);
    r.check("envelope_slope", &["envelope"], Statistic::Slope, Comparison::Within { target: -1.0, tol: opts.slope_tol });
    r.check("pole_slope", &["pole"], Statistic::Slope, Comparison::Within { target: 1.0, tol: opts.pole_slope_tol });
    r.check("pole_m1_vanishes", &["pole_m1"], Statistic::MaxAbs, Comparison::AtMost { bound: 0.0 });
    r.fit = fit_power_law(&sin, &envelope).ok();
    Ok(r.finish(start))
}

mod p_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum P {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(ps: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<P> = ps.iter().map(|&p| if p.is_infinite() { P::Text("inf".into()) } else { P::Num(p) }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<P>::deserialize(d)?
            .into_iter()
            .map(|p| match p {
                P::Num(v) => Ok(v),
                P::Text(t) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
                P::Text(t) => Err(serde::de::Error::custom(format!("bad exponent {t:?}"))),
            })
            .collect()
    }
}

fn p_name(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LpOptions {
    /// Exponents in `[2, ∞]`; `"inf"` in JSON.
    #[serde(with = "p_serde")]
    pub p_list: Vec<f64>,
    /// Degrees `k` (sphere) or second lattice index `k₂` (torus).
    pub k_grid: Vec<u32>,
    pub slope_tol: f64,
    pub exact_tol: f64,
    pub sup_tol: f64,
    pub quadrature: LpQuadrature,
    pub basis: BasisOptions,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            p_list: vec![2.0, 4.0, 6.0, f64::INFINITY],
            k_grid: vec![25, 35, 50, 71, 100, 141, 200, 283, 400],
            slope_tol: 0.02,
            exact_tol: 1e-6,
            sup_tol: 1e-12,
            quadrature: LpQuadrature::default(),
            basis: BasisOptions::default(),
        }
    }
}

/// `‖e_λ‖_p` of one mode per grid eigenvalue against `λ`.
pub fn run_lp_experiment(manifold: &ModelManifold<f64>, label: IsotypicLabel, opts: &LpOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    if opts.p_list.is_empty() || opts.p_list.iter().any(|p| !(*p >= 2.0)) {
        return Err(Error::Domain("p_list must be nonempty with every p in [2, ∞]".into()));
    }
    let m = label.index();
    let lambdas: Vec<f64> = match manifold {
        ModelManifold::RoundSphere2 => opts
            .k_grid
            .iter()
            .filter(|&&k| k as i64 >= m.abs())
            .map(|&k| k as f64 * (k as f64 + 1.0))
            .collect(),
        ModelManifold::FlatTorus2 | ModelManifold::FlatTorus2FiniteCyclic { .. } => opts
            .k_grid
            .iter()
            .map(|&k| crate::eigensolve::torus_eigenvalue::<f64>(m, k as i64))
            .collect(),
        ModelManifold::SurfaceOfRevolution(_) => {
            let b = build_basis(manifold, 0.0, &opts.basis)?;
            let mut ev: Vec<f64> = b.modes.iter().filter(|md| md.label == label).map(|md| md.eigenvalue).collect();
            ev.dedup_by(|a, b| (*a - *b).abs() < 1.0);
            opts.k_grid.iter().filter_map(|&k| ev.get(k as usize).copied()).filter(|&l| l + 1.0 <= b.lambda_max).collect()
        }
    };
    check_grid("eigenvalue grid", &lambdas)?;
    let basis = build_basis(manifold, lambdas[lambdas.len() - 1] + 1.0, &opts.basis)?;
    let comp = component(&basis, label);
    let rsf = ReducedSpectralFunction::new(&comp, label);

    let mut r = ExperimentReport::new(
        "lpnorms",
        serde_json::json!({ "manifold": manifold.name(), "label": label, "options": opts }),
    );
    r.tolerance("slope", opts.slope_tol);
    r.tolerance("exact", opts.exact_tol);
    r.tolerance("sup", opts.sup_tol);
    let torus = matches!(manifold, ModelManifold::FlatTorus2 | ModelManifold::FlatTorus2FiniteCyclic { .. });
    let sphere = matches!(manifold, ModelManifold::RoundSphere2);
    let mut expected = serde_json::Map::new();
    for &p in &opts.p_list {
        let vals = collect(
            lambdas
                .par_iter()
                .map(|&l| cluster_lp_norm(&rsf, l - 0.5, p, opts.quadrature).map(|n| n.value))
                .collect(),
        )?;
        let name = format!("lp_{}", p_name(p));
        r.add_series(&name, "lambda", lambdas.clone(), vals.clone());
        // Zonal harmonics saturate δ(p) for the full group action (κ = 0).
        let exp = if torus { 0.0 } else { exponent_delta(2, 0, p) / 2.0 };
        expected.insert(p_name(p), serde_json::json!(exp));
        if let Ok(f) = fit_power_law(&lambdas, &vals) {
            r.derived.insert(format!("slope_{}", p_name(p)), f.slope);
            if p.is_infinite() {
                r.fit = Some(f);
            }
        }
        if lambdas.len() < 5 {
            continue;
        }
        if p == 2.0 && (sphere || torus) {
            r.check("p2_slope", &[&name], Statistic::Slope, Comparison::Within { target: 0.0, tol: opts.exact_tol });
        }
        if p.is_infinite() && sphere && m == 0 {
            r.check("sup_slope", &[&name], Statistic::Slope, Comparison::Within { target: exp, tol: opts.slope_tol });
        }
        if p.is_infinite() && torus {
            r.check("sup_max", &[&name], Statistic::Max, Comparison::Within { target: 1.0, tol: opts.sup_tol });
            r.check("sup_min", &[&name], Statistic::Min, Comparison::Within { target: 1.0, tol: opts.sup_tol });
            r.check("sup_slope", &[&name], Statistic::Slope, Comparison::Within { target: 0.0, tol: opts.exact_tol });
        }
    }
    r.prediction = serde_json::json!({ "slopes": expected });
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountingOptions {
    pub window: usize,
    /// Relative deviation allowed at the largest λ.
    pub rel_tol: f64,
    pub x_nodes: usize,
    pub fiber_nodes: usize,
    pub basis: BasisOptions,
}

impl Default for CountingOptions {
    fn default() -> Self {
        CountingOptions { window: 5, rel_tol: 0.01, x_nodes: 16, fiber_nodes: 256, basis: BasisOptions::default() }
    }
}

/// `N_γ(λ)` against `√λ − |m|` on the sphere and against the global Weyl
/// coefficient elsewhere.
pub fn run_counting_experiment(
    manifold: &ModelManifold<f64>,
    label: IsotypicLabel,
    lambda_grid: &[f64],
    opts: &CountingOptions,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_grid("lambda grid", lambda_grid)?;
    let basis = build_basis(manifold, lambda_grid[lambda_grid.len() - 1], &opts.basis)?;
    let comp = component(&basis, label);
    let rsf = ReducedSpectralFunction::new(&comp, label);
    let counts = collect(lambda_grid.iter().map(|&l| rsf.counting(l).map(|c| c as f64)).collect())?;
    let grid = lambda_grid.to_vec();
    let mut r = ExperimentReport::new(
        "counting",
        serde_json::json!({ "manifold": manifold.name(), "label": label, "lambda_grid": lambda_grid, "options": opts }),
    );
    r.tolerance("rel", opts.rel_tol);
    r.add_series("count", "lambda", grid.clone(), counts.clone());
    let predicted: Vec<f64> = if let ModelManifold::RoundSphere2 = manifold {
        let m = label.index().unsigned_abs() as f64;
        let closed: Vec<f64> = grid
            .iter()
            .map(|&l| (sphere_k_max(l).map(|k| k as f64 + 1.0).unwrap_or(0.0) - m).max(0.0))
            .collect();
        r.add_series("closed_form", "lambda", grid.clone(), closed);
        r.check("closed_form", &["count"], Statistic::MaxAbsDiff { reference: "closed_form".into() }, Comparison::AtMost {
            bound: 0.0,
        });
        r.prediction = serde_json::json!({ "model": "sqrt(lambda) - |m|" });
        grid.iter().map(|&l| (l.sqrt() - m).max(0.0)).collect()
    } else {
        let gp = global_leading_coefficient(manifold, label, opts.x_nodes, opts.fiber_nodes, OrbitMeasure::BaseOrbit)?;
        let averaged = collect(
            grid.iter()
                .map(|&l| window_mean(l, opts.window, |v| rsf.counting(v).map(|c| c as f64)).map(|n| n / l.powf(gp.exponent)))
                .collect(),
        )?;
        r.add_series("coefficient", "lambda", grid.clone(), averaged);
        r.check(
            "coefficient_at_max_lambda",
            &["coefficient"],
            Statistic::Last,
            Comparison::Relative { target: gp.coefficient, tol: opts.rel_tol },
        );
        r.prediction = serde_json::json!({
            "coefficient": gp.coefficient,
            "exponent": gp.exponent,
            "refinement_change": gp.refinement_change,
        });
        r.derived.insert("coefficient".into(), gp.coefficient);
        grid.iter().map(|&l| gp.coefficient * l.powf(gp.exponent)).collect()
    };
    let dev: Vec<f64> = counts
        .iter()
        .zip(&predicted)
        .map(|(c, p)| if *p > 0.0 { (c - p).abs() / p } else { c.abs() })
        .collect();
    r.derived.insert("max_deviation".into(), dev.iter().copied().fold(0.0, f64::max));
    r.add_series("predicted", "lambda", grid.clone(), predicted);
    r.add_series("deviation", "lambda", grid, dev);
    if r.prediction.get("model").is_some() {
        r.check("deviation_at_max_lambda", &["deviation"], Statistic::Last, Comparison::AtMost { bound: opts.rel_tol });
    }
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KuznecovOptions {
    pub n_points: usize,
    pub lambda: f64,
    pub seed: u64,
    pub growth_grid: Vec<f64>,
    pub window: usize,
    pub abs_tol: f64,
    pub growth_tol: f64,
}

impl Default for KuznecovOptions {
    fn default() -> Self {
        KuznecovOptions {
            n_points: 20,
            lambda: 1e4,
            seed: 0,
            growth_grid: sqrt2_grid(1e4, 7),
            window: 5,
            abs_tol: 1e-10,
            growth_tol: 0.05,
        }
    }
}

/// Orbit periods on the sphere against the trivial-isotypic spectral
/// function at random points, and their growth at the equator.
pub fn run_kuznecov_experiment(opts: &KuznecovOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_grid("growth grid", &opts.growth_grid)?;
    if opts.n_points == 0 || !(opts.lambda > 0.0) {
        return Err(Error::Domain("kuznecov needs n_points > 0 and lambda > 0".into()));
    }
    let top = opts.lambda.max(opts.growth_grid[opts.growth_grid.len() - 1]);
    let basis = sphere_basis(top)?;
    let trivial = IsotypicLabel::Circle(0);
    let comp = component(&basis, trivial);
    let rsf = ReducedSpectralFunction::new(&comp, trivial);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let points: Vec<Point<f64>> = (0..opts.n_points)
        .map(|_| {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            Point::new((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(), 2.0 * PI * v)
        })
        .collect();
    let pairs = collect(
        points
            .par_iter()
            .map(|x| Ok((kuznecov_sum(&basis, x, opts.lambda)?, rsf.diag(x, opts.lambda)?)))
            .collect(),
    )?;
    let equator = Point::new(FRAC_PI_2, 0.0);
    let growth = collect(
        opts.growth_grid
            .par_iter()
            .map(|&l| window_mean(l, opts.window, |v| kuznecov_sum(&basis, &equator, v)).map(|s| s / l.sqrt()))
            .collect(),
    )?;
    let pred = local_leading_coefficient(&ModelManifold::RoundSphere2, &equator, trivial, 512, OrbitMeasure::BaseOrbit)?;

    let mut r = ExperimentReport::new("kuznecov", opts);
    r.prediction = serde_json::json!({ "equator_coefficient": pred.coefficient, "exponent": pred.exponent });
    r.tolerance("abs", opts.abs_tol);
    r.tolerance("growth", opts.growth_tol);
    let idx: Vec<f64> = (0..points.len()).map(|i| i as f64).collect();
    r.add_series("theta", "point", idx.clone(), points.iter().map(|p| p.a).collect());
    r.add_series("phi", "point", idx.clone(), points.iter().map(|p| p.b).collect());
    r.add_series("kuznecov", "point", idx.clone(), pairs.iter().map(|p| p.0).collect());
    r.add_series("trivial_diag", "point", idx, pairs.iter().map(|p| p.1).collect());
    r.add_series("growth_ratio", "lambda", opts.growth_grid.clone(), growth);
    r.check(
        "matches_trivial_diag",
        &["kuznecov"],
        Statistic::MaxAbsDiff { reference: "trivial_diag".into() },
        Comparison::AtMost { bound: opts.abs_tol },
    );
    r.check(
        "equator_growth",
        &["growth_ratio"],
        Statistic::Last,
        Comparison::Relative { target: pred.coefficient, tol: opts.growth_tol },
    );
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigensolverOptions {
    pub m_max: u32,
    pub per_m: usize,
    pub grid_n: usize,
    pub rel_tol: f64,
}

impl Default for EigensolverOptions {
    fn default() -> Self {
        EigensolverOptions { m_max: 5, per_m: 20, grid_n: 4000, rel_tol: 1e-4 }
    }
}

/// The sphere as a surface of revolution: discrete eigenvalues against
/// `k(k+1)`.
pub fn run_eigensolver_experiment(opts: &EigensolverOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let basis = surface_of_revolution_basis(&Profile::unit_sphere(), opts.m_max, opts.per_m, opts.grid_n)?;
    let mut r = ExperimentReport::new("eigensolver", opts);
    r.prediction = serde_json::json!({ "model": "k(k+1), k = |m| + j" });
    r.tolerance("rel", opts.rel_tol);
    let mut names = Vec::new();
    for m in 0..=opts.m_max as i32 {
        let ev: Vec<f64> =
            basis.modes.iter().filter(|md| md.label == IsotypicLabel::Circle(m)).map(|md| md.eigenvalue).take(opts.per_m).collect();
        let ks: Vec<f64> = (0..ev.len()).map(|j| (m as usize + j) as f64).collect();
        let err: Vec<f64> = ev.iter().zip(&ks).map(|(l, k)| (l / (k * (k + 1.0)) - 1.0).abs()).collect();
        let err: Vec<f64> = err.into_iter().map(|e| if e.is_finite() { e } else { 0.0 }).collect();
        let name = format!("rel_err_m{m}");
        r.add_series(&format!("eigenvalue_m{m}"), "k", ks.clone(), ev);
        r.add_series(&name, "k", ks, err);
        names.push(name);
    }
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    r.check("max_rel_err", &refs, Statistic::MaxAbs, Comparison::AtMost { bound: opts.rel_tol });
    r.check("mode_count", &refs, Statistic::Count, Comparison::Within {
        target: ((opts.m_max as usize + 1) * opts.per_m) as f64,
        tol: 0.0,
    });
    Ok(r.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdditionOptions {
    pub k_max: u32,
    pub n_points: usize,
    pub seed: u64,
    pub rel_tol: f64,
}

impl Default for AdditionOptions {
    fn default() -> Self {
        AdditionOptions { k_max: 200, n_points: 100, seed: 0, rel_tol: 1e-10 }
    }
}

/// `Σ_m |Y_{k,m}|² = (2k+1)/(4π)` at random points for every `k ≤ k_max`.
pub fn run_addition_experiment(opts: &AdditionOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let kf = opts.k_max as f64;
    let basis = sphere_basis(kf * (kf + 1.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let points: Vec<Point<f64>> =
        (0..opts.n_points).map(|_| Point::new(rng.gen::<f64>() * PI, rng.gen::<f64>() * 2.0 * PI)).collect();
    let worst: Vec<f64> = points
        .par_iter()
        .map(|x| {
            let vals = basis.eval_at(x);
            let mut sums = vec![0.0f64; opts.k_max as usize + 1];
            for (md, v) in basis.modes.iter().zip(&vals) {
                if let crate::eigensolve::ModeShape::SphericalHarmonic { k, .. } = md.shape {
                    sums[k as usize] += v.norm_sqr();
                }
            }
            sums.iter()
                .enumerate()
                .map(|(k, s)| (s / ((2 * k + 1) as f64 / (4.0 * PI)) - 1.0).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut r = ExperimentReport::new("addition", opts);
    r.prediction = serde_json::json!({ "model": "(2k+1)/(4π)" });
    r.tolerance("rel", opts.rel_tol);
    let idx: Vec<f64> = (0..points.len()).map(|i| i as f64).collect();
    r.add_series("theta", "point", idx.clone(), points.iter().map(|p| p.a).collect());
    r.add_series("phi", "point", idx.clone(), points.iter().map(|p| p.b).collect());
    r.add_series("max_rel_err", "point", idx, worst);
    r.check("max_rel_err", &["max_rel_err"], Statistic::Max, Comparison::AtMost { bound: opts.rel_tol });
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Verdict;

    #[test]
    fn torus_weyl_small() {
        let grid = sqrt2_grid(1e5, 6);
        let r = run_local_weyl_experiment(
            &ModelManifold::FlatTorus2,
            Point::new(0.2, 0.7),
            IsotypicLabel::Circle(3),
            &grid,
            &WeylOptions { rel_tol: 0.02, slope_tol: 0.05, ..Default::default() },
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
        assert!((r.derived["coefficient"] - 1.0 / PI).abs() < 1e-12);
        assert!(r.is_consistent());
    }

    #[test]
    fn pole_m1_vanishes() {
        let r = run_local_weyl_experiment(
            &ModelManifold::RoundSphere2,
            Point::new(0.0, 0.0),
            IsotypicLabel::Circle(1),
            &sqrt2_grid(1e4, 6),
            &WeylOptions::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.checks.len(), 1);
    }

    #[test]
    fn sphere_counting_closed_form() {
        let r = run_counting_experiment(
            &ModelManifold::RoundSphere2,
            IsotypicLabel::Circle(7),
            &[2500.0, 1e4],
            &CountingOptions::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
        assert_eq!(r.series("count").unwrap().y, vec![43.0, 93.0]);
    }

    #[test]
    fn torus_lp_is_flat() {
        let opts = LpOptions { k_grid: vec![1, 2, 3, 5, 8, 13], ..Default::default() };
        let r = run_lp_experiment(&ModelManifold::FlatTorus2, IsotypicLabel::Circle(2), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
    }

    #[test]
    fn addition_small() {
        let r = run_addition_experiment(&AdditionOptions { k_max: 30, n_points: 5, ..Default::default() }).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary_line());
    }

    #[test]
    fn options_reject_unknown_keys() {
        assert!(serde_json::from_str::<LpOptions>(r#"{"p_list": [2, "inf"], "k_grid": [3]}"#).unwrap().p_list[1].is_infinite());
        assert!(serde_json::from_str::<LpOptions>(r#"{"q": 1}"#).is_err());
        let s = serde_json::to_string(&LpOptions::default()).unwrap();
        assert!(s.contains("\"inf\""));
    }

    #[test]
    fn rejects_bad_grids() {
        let o = WeylOptions::default();
        let m = ModelManifold::RoundSphere2;
        assert!(run_local_weyl_experiment(&m, Point::new(1.0, 0.0), IsotypicLabel::Circle(0), &[], &o).is_err());
        assert!(run_local_weyl_experiment(&m, Point::new(1.0, 0.0), IsotypicLabel::Circle(0), &[10.0, 5.0], &o).is_err());
    }
}
