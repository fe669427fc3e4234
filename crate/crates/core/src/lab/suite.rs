//! Named experiment jobs and the suite runner.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oscillatory::*;
use super::spectral::*;
use super::{ExperimentReport, Tolerances};
use crate::error::{Error, Result};
use crate::fit::geometric_grid;
use crate::geometry::{IsotypicLabel, ModelManifold, Point, Profile};

/// Serializable description of a model manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ManifoldSpec {
    Sphere,
    Torus,
    TorusCyclic { order: u32 },
    /// The unit sphere through the discrete surface-of-revolution solver.
    SphereProfile,
    TorusProfile { major: f64, minor: f64 },
    /// Two-column `s r` profile samples.
    ProfileFile { path: String, closed: bool },
}

impl ManifoldSpec {
    pub fn build(&self) -> Result<ModelManifold<f64>> {
        Ok(match self {
            ManifoldSpec::Sphere => ModelManifold::RoundSphere2,
            ManifoldSpec::Torus => ModelManifold::FlatTorus2,
            ManifoldSpec::TorusCyclic { order } => ModelManifold::FlatTorus2FiniteCyclic { order: *order },
            ManifoldSpec::SphereProfile => ModelManifold::SurfaceOfRevolution(Profile::unit_sphere()),
            ManifoldSpec::TorusProfile { major, minor } => {
                ModelManifold::SurfaceOfRevolution(Profile::torus(*major, *minor)?)
            }
            ManifoldSpec::ProfileFile { path, closed } => ModelManifold::SurfaceOfRevolution(Profile::load(path, *closed)?),
        })
    }

    /// The isotypic label with Fourier index `m` for this group.
    pub fn label(&self, m: i64) -> IsotypicLabel {
        match self {
            ManifoldSpec::TorusCyclic { order } => IsotypicLabel::cyclic(m, *order),
            _ => IsotypicLabel::Circle(m as i32),
        }
    }
}

/// One experiment with its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Addition(AdditionOptions),
    Weyl { manifold: ManifoldSpec, x: [f64; 2], m: i64, lambda_grid: Vec<f64>, options: WeylOptions },
    Counting { manifold: ManifoldSpec, m: i64, lambda_grid: Vec<f64>, options: CountingOptions },
    Concentration(ConcentrationOptions),
    Lpnorms { manifold: ManifoldSpec, m: i64, options: LpOptions },
    Kuznecov(KuznecovOptions),
    Statphase(StatphaseOptions),
    Hybrid(HybridExperimentOptions),
    Interp(InterpolationOptions),
    Critscan(CritscanOptions),
    Caustic(CausticOptions),
    Eigensolver(EigensolverOptions),
}

impl Experiment {
    pub fn run(&self) -> Result<ExperimentReport> {
        match self {
            Experiment::Addition(o) => run_addition_experiment(o),
            Experiment::Weyl { manifold, x, m, lambda_grid, options } => {
                run_local_weyl_experiment(&manifold.build()?, Point::new(x[0], x[1]), manifold.label(*m), lambda_grid, options)
            }
            Experiment::Counting { manifold, m, lambda_grid, options } => {
                run_counting_experiment(&manifold.build()?, manifold.label(*m), lambda_grid, options)
            }
            Experiment::Concentration(o) => run_concentration_experiment(o),
            Experiment::Lpnorms { manifold, m, options } => run_lp_experiment(&manifold.build()?, manifold.label(*m), options),
            Experiment::Kuznecov(o) => run_kuznecov_experiment(o),
            Experiment::Statphase(o) => run_statphase_experiment(o),
            Experiment::Hybrid(o) => run_hybrid_experiment(o),
            Experiment::Interp(o) => run_interpolation_experiment(o),
            Experiment::Critscan(o) => run_critscan_experiment(o),
            Experiment::Caustic(o) => run_caustic_experiment(o),
            Experiment::Eigensolver(o) => run_eigensolver_experiment(o),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    #[serde(flatten)]
    pub experiment: Experiment,
}

impl Job {
    pub fn new(id: &str, experiment: Experiment) -> Self {
        Job { id: id.into(), experiment }
    }

    pub fn run(&self) -> Result<ExperimentReport> {
        let mut r = self.experiment.run()?;
        r.experiment = self.id.clone();
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub jobs: Vec<Job>,
}

impl SuiteConfig {
    /// The acceptance-scale suite with the given tolerances.
    pub fn acceptance(t: &Tolerances) -> Self {
        let lam = sqrt2_grid(1e6, 21);
        let weyl = |rel: f64| WeylOptions { rel_tol: rel, slope_tol: t.weyl_slope, ..Default::default() };
        let mut jobs = vec![Job::new(
            "addition",
            Experiment::Addition(AdditionOptions { rel_tol: t.addition_rel, ..Default::default() }),
        )];
        for m in [0, 3, 10] {
            jobs.push(Job::new(
                &format!("weyl-torus-m{m}"),
                Experiment::Weyl {
                    manifold: ManifoldSpec::Torus,
                    x: [0.3, 0.6],
                    m,
                    lambda_grid: lam.clone(),
                    options: WeylOptions { check_exponent: m == 0, ..weyl(t.torus_weyl_rel) },
                },
            ));
        }
        for (id, x, m) in [("weyl-sphere-equator", [FRAC_PI_2, 0.0], 0), ("weyl-sphere-pole", [0.0, 0.0], 0), ("weyl-sphere-pole-m1", [0.0, 0.0], 1)] {
            jobs.push(Job::new(
                id,
                Experiment::Weyl {
                    manifold: ManifoldSpec::Sphere,
                    x,
                    m,
                    lambda_grid: lam.clone(),
                    options: weyl(t.sphere_weyl_rel),
                },
            ));
        }
        jobs.push(Job::new(
            "concentration",
            Experiment::Concentration(ConcentrationOptions {
                slope_tol: t.concentration_slope,
                pole_slope_tol: t.pole_slope,
                ..Default::default()
            }),
        ));
        let counting = CountingOptions { rel_tol: t.counting_rel, ..Default::default() };
        for m in [0, 100] {
            jobs.push(Job::new(
                &format!("counting-sphere-m{m}"),
                Experiment::Counting {
                    manifold: ManifoldSpec::Sphere,
                    m,
                    lambda_grid: sqrt2_grid(1e6, 9),
                    options: counting.clone(),
                },
            ));
        }
        jobs.push(Job::new(
            "counting-torus-m2",
            Experiment::Counting {
                manifold: ManifoldSpec::Torus,
                m: 2,
                lambda_grid: lam.clone(),
                options: CountingOptions { rel_tol: t.torus_counting_rel, ..Default::default() },
            },
        ));
        let lp = LpOptions { slope_tol: t.lp_slope, exact_tol: t.lp_exact, sup_tol: t.torus_sup, ..Default::default() };
        jobs.push(Job::new("lpnorms-sphere-zonal", Experiment::Lpnorms { manifold: ManifoldSpec::Sphere, m: 0, options: lp.clone() }));
        jobs.push(Job::new(
            "lpnorms-torus",
            Experiment::Lpnorms {
                manifold: ManifoldSpec::Torus,
                m: 3,
                options: LpOptions { k_grid: vec![1, 2, 4, 8, 16, 32, 64, 128], ..lp },
            },
        ));
        jobs.push(Job::new(
            "kuznecov",
            Experiment::Kuznecov(KuznecovOptions {
                abs_tol: t.kuznecov_abs,
                growth_tol: t.kuznecov_growth_rel,
                ..Default::default()
            }),
        ));
        let sp = StatphaseOptions {
            rel_tol: t.gaussian_rel,
            remainder_slope_tol: t.remainder_slope,
            decay_slope_tol: t.plane_wave_slope,
            ..Default::default()
        };
        jobs.push(Job::new("statphase-gaussian", Experiment::Statphase(sp.clone())));
        jobs.push(Job::new(
            "statphase-sphere",
            Experiment::Statphase(StatphaseOptions { preset: StatphasePreset::SpherePlaneWave, ..sp }),
        ));
        jobs.push(Job::new(
            "hybrid",
            Experiment::Hybrid(HybridExperimentOptions { slope_tol: t.hybrid_slope, ..Default::default() }),
        ));
        jobs.push(Job::new(
            "interp",
            Experiment::Interp(InterpolationOptions { band_factor: t.band_factor, ..Default::default() }),
        ));
        jobs.push(Job::new(
            "critscan",
            Experiment::Critscan(CritscanOptions {
                gradient_tol: t.critical_gradient,
                det_slope_tol: t.det_slope,
                ..Default::default()
            }),
        ));
        jobs.push(Job::new(
            "caustic",
            Experiment::Caustic(CausticOptions {
                rel_tol: t.caustic_rel,
                invariance_tol: t.product_invariance,
                tau_zero_tol: t.tau_zero,
                ..Default::default()
            }),
        ));
        jobs.push(Job::new(
            "eigensolver",
            Experiment::Eigensolver(EigensolverOptions { rel_tol: t.eigen_rel, ..Default::default() }),
        ));
        SuiteConfig { jobs }
    }

    /// A small suite covering every experiment kind at reduced scale.
    pub fn quick() -> Self {
        let lam = sqrt2_grid(1e4, 8);
        let weyl = WeylOptions { rel_tol: 0.05, slope_tol: 0.05, ..Default::default() };
        let jobs = vec![
            Job::new("addition", Experiment::Addition(AdditionOptions { k_max: 40, n_points: 10, ..Default::default() })),
            Job::new(
                "weyl-torus-m3",
                Experiment::Weyl {
                    manifold: ManifoldSpec::Torus,
                    x: [0.3, 0.6],
                    m: 3,
                    lambda_grid: sqrt2_grid(1e5, 8),
                    options: weyl.clone(),
                },
            ),
            Job::new(
                "weyl-sphere-equator",
                Experiment::Weyl { manifold: ManifoldSpec::Sphere, x: [FRAC_PI_2, 0.0], m: 0, lambda_grid: lam.clone(), options: weyl },
            ),
            Job::new(
                "counting-sphere-m5",
                Experiment::Counting { manifold: ManifoldSpec::Sphere, m: 5, lambda_grid: lam.clone(), options: CountingOptions::default() },
            ),
            Job::new(
                "concentration",
                Experiment::Concentration(ConcentrationOptions {
                    k_window: (95, 100),
                    theta_grid: geometric_grid(0.1, 1.0, 6),
                    pole_k: vec![20, 30, 40, 60, 80],
                    samples: 6,
                    slope_tol: 0.3,
                    pole_slope_tol: 0.05,
                }),
            ),
            Job::new(
                "lpnorms-sphere-zonal",
                Experiment::Lpnorms {
                    manifold: ManifoldSpec::Sphere,
                    m: 0,
                    options: LpOptions { k_grid: vec![10, 14, 20, 28, 40], slope_tol: 0.05, ..Default::default() },
                },
            ),
            Job::new(
                "kuznecov",
                Experiment::Kuznecov(KuznecovOptions {
                    n_points: 4,
                    lambda: 400.0,
                    growth_grid: sqrt2_grid(400.0, 3),
                    growth_tol: 0.2,
                    ..Default::default()
                }),
            ),
            Job::new(
                "statphase-gaussian",
                Experiment::Statphase(StatphaseOptions { mu_grid: geometric_grid(20.0, 80.0, 5), ..Default::default() }),
            ),
            Job::new(
                "hybrid",
                Experiment::Hybrid(HybridExperimentOptions {
                    mu_grid: geometric_grid(10.0, 40.0, 8),
                    off_dist: 1.0,
                    slope_tol: 0.5,
                    ..Default::default()
                }),
            ),
            Job::new(
                "critscan",
                Experiment::Critscan(CritscanOptions {
                    scan: crate::statphase::ScanConfig { n_theta: 12, n_phi: 24, n_g: 24, ..Default::default() },
                    det_slope_tol: 0.3,
                    ..Default::default()
                }),
            ),
            Job::new(
                "caustic",
                Experiment::Caustic(CausticOptions { mutau_grid: geometric_grid(2.0, 20.0, 5), ..Default::default() }),
            ),
            Job::new(
                "eigensolver",
                Experiment::Eigensolver(EigensolverOptions { m_max: 2, per_m: 5, grid_n: 400, rel_tol: 1e-2 }),
            ),
        ];
        SuiteConfig { jobs }
    }

    pub fn select(&self, ids: &[String]) -> Result<SuiteConfig> {
        let mut jobs = Vec::new();
        for id in ids {
            let j = self.jobs.iter().find(|j| &j.id == id).ok_or_else(|| Error::Domain(format!("no job named {id:?}")))?;
            jobs.push(j.clone());
        }
        Ok(SuiteConfig { jobs })
    }
}

/// Runs every job on a pool of `threads` workers (`0` = rayon default).
/// Reports come back in job order; each job sees only its own inputs.
pub fn run_suite(config: &SuiteConfig, threads: usize) -> Result<Vec<Result<ExperimentReport>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    Ok(pool.install(|| config.jobs.par_iter().map(|j| j.run()).collect()))
}
