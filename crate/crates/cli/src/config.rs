//! Run configuration: JSON file keys and command-line flags share one
//! schema; flags override file keys.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use equiweyl::fit::geometric_grid;
use equiweyl::lab::{
    sqrt2_grid, AdditionOptions, BasisOptions, ConcentrationOptions, CountingOptions, CritscanOptions, Experiment, HybridExperimentOptions, InterpolationOptions, Job, KuznecovOptions, LpOptions,
    ManifoldSpec, StatphaseOptions, StatphasePreset, SuiteConfig, Tolerances, WeylOptions,
};
use equiweyl::statphase::ScanConfig;
use equiweyl::weylcoef::OrbitMeasure;
use serde::{Deserialize, Serialize};

/// A list of numbers: a JSON array, `a:b:n` (geometric, `n` points from `a`
/// to `b`) or comma separated values. `inf` is accepted where it makes sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ListSpec {
    Text(String),
    Values(Vec<NumberOrText>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberOrText {
    Number(f64),
    Text(String),
}

impl FromStr for ListSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(ListSpec::Text(s.to_string()))
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    match t {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => t.parse::<f64>().map_err(|_| format!("{t:?} is not a number")),
    }
}

impl ListSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            ListSpec::Values(v) => v
                .iter()
                .map(|x| match x {
                    NumberOrText::Number(n) => Ok(*n),
                    NumberOrText::Text(t) => parse_number(t),
                })
                .collect(),
            ListSpec::Text(t) => {
                let parts: Vec<&str> = t.split(':').collect();
                match parts.len() {
                    1 => t.split(',').filter(|p| !p.trim().is_empty()).map(parse_number).collect(),
                    3 => {
                        let a = parse_number(parts[0])?;
                        let b = parse_number(parts[1])?;
                        let n: usize = parts[2].trim().parse().map_err(|_| format!("{:?} is not a point count", parts[2]))?;
                        if !(a > 0.0 && b > a && b.is_finite()) || n < 2 {
                            return Err(format!("geometric grid {t:?} needs 0 < a < b and n ≥ 2"));
                        }
                        Ok(geometric_grid(a, b, n))
                    }
                    _ => Err(format!("{t:?} is neither a:b:n nor a comma list")),
                }
            }
        }
    }
}

/// A pair `a:b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct Pair(pub f64, pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum PairRepr {
    Text(String),
    Values([f64; 2]),
}

impl TryFrom<PairRepr> for Pair {
    type Error = String;
    fn try_from(p: PairRepr) -> Result<Self, String> {
        match p {
            PairRepr::Values([a, b]) => Ok(Pair(a, b)),
            PairRepr::Text(t) => t.parse(),
        }
    }
}

impl From<Pair> for PairRepr {
    fn from(p: Pair) -> Self {
        PairRepr::Values([p.0, p.1])
    }
}

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("{s:?} is not a:b"))?;
        Ok(Pair(parse_number(a)?, parse_number(b)?))
    }
}

/// Every key of the schema. In a file they are snake_case JSON keys; as
/// flags they are `--kebab-case`.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Experiment name; must match the subcommand when given in a file.
    #[arg(skip)]
    pub experiment: Option<String>,
    /// sphere | torus | torus-cyclic | sphere-profile | torus-profile | profile [default: sphere]
    #[arg(long)]
    pub manifold: Option<String>,
    /// Order of the cyclic group for torus-cyclic.
    #[arg(long)]
    pub order: Option<u32>,
    /// Torus-profile radii [default: 2 and 1].
    #[arg(long, allow_hyphen_values = true)]
    pub major: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub minor: Option<f64>,
    /// Two-column `s r` profile file for manifold = profile.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// The profile is closed (torus-like) [default: false].
    #[arg(long)]
    pub closed: Option<bool>,
    /// Fourier index of the isotypic component [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// First chart coordinate of the point (colatitude on the sphere) [default: π/2].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Second chart coordinate [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Single eigenvalue cutoff (counting, kuznecov) [default: 1e6 counting, 1e4 kuznecov].
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Top of the default √2-ratio λ grid [default: 1e6].
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_max: Option<f64>,
    /// Explicit λ grid (a:b:n or list).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_grid: Option<ListSpec>,
    /// μ grid [default: 20:400:12 statphase, 50:400:8 hybrid].
    #[arg(long, allow_hyphen_values = true)]
    pub mu_grid: Option<ListSpec>,
    /// θ grid for concentration [default: 0.05:1:16].
    #[arg(long, allow_hyphen_values = true)]
    pub theta_grid: Option<ListSpec>,
    /// Degrees: pole degrees (concentration) or mode degrees (lpnorms).
    #[arg(long, allow_hyphen_values = true)]
    pub k_grid: Option<ListSpec>,
    /// Degrees averaged for the concentration profile [default: 490:510].
    #[arg(long, allow_hyphen_values = true)]
    pub k_window: Option<Pair>,
    /// Exponents for lpnorms [default: 2,4,6,inf].
    #[arg(long, allow_hyphen_values = true)]
    pub p_list: Option<ListSpec>,
    /// gaussian | sphere [default: gaussian].
    #[arg(long)]
    pub preset: Option<String>,
    /// Off-orbit distance for hybrid [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    pub dist: Option<f64>,
    /// Distances for interp [default: 0.02,0.05,0.1,0.2,0.5].
    #[arg(long, allow_hyphen_values = true)]
    pub dists: Option<ListSpec>,
    /// Separations δ for critscan [default: 0.02,0.04,0.08,0.15,0.3].
    #[arg(long, allow_hyphen_values = true)]
    pub deltas: Option<ListSpec>,
    /// μ range for interp [default: 5:400].
    #[arg(long, allow_hyphen_values = true)]
    pub mu_range: Option<Pair>,
    /// μd range for interp [default: 0.1:100].
    #[arg(long, allow_hyphen_values = true)]
    pub mud_range: Option<Pair>,
    /// base-orbit | lifted [default: base-orbit].
    #[arg(long)]
    pub measure: Option<String>,
    /// Random points for kuznecov [default: 20].
    #[arg(long)]
    pub points: Option<usize>,
    /// Co-sphere fiber nodes [default: 512].
    #[arg(long)]
    pub fiber_nodes: Option<usize>,
    /// Radial cells of the surface-of-revolution solver [default: 4000].
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Largest |m| of the surface-of-revolution solver [default: 20].
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Eigenpairs per |m| [default: 60].
    #[arg(long)]
    pub modes_per_m: Option<usize>,
    /// Critical scan seed grid nθ,nφ,ng [default: 32,64,64].
    #[arg(long, allow_hyphen_values = true)]
    pub scan_nodes: Option<ListSpec>,
    /// Acceptance tolerances (file only).
    #[arg(skip)]
    pub tolerances: Option<Tolerances>,
    /// Report directory [default: reports].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; falls back to EQUIWEYL_THREADS, then all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed of the random point sampling [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Custom suite jobs (file only).
    #[arg(skip)]
    pub jobs: Option<Vec<Job>>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        RunConfig { $($f: $hi.$f.clone().or_else(|| $lo.$f.clone()),)* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Vec<String>> {
        let text = std::fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
        serde_json::from_str(&text).map_err(|e| vec![format!("{}: {e}", path.display())])
    }

    /// `self` with unset keys taken from `file`.
    pub fn over(&self, file: &RunConfig) -> RunConfig {
        overlay!(self, file; experiment, manifold, order, major, minor, profile, closed, m, theta, phi, lambda,
            lambda_max, lambda_grid, mu_grid, theta_grid, k_grid, k_window, p_list, preset, dist, dists, deltas,
            mu_range, mud_range, measure, points, fiber_nodes, grid_n, m_max, modes_per_m, scan_nodes, tolerances,
            out, threads, seed, jobs)
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let v = serde_json::to_value(self).unwrap_or_default();
        let mut out = Vec::new();
        if let serde_json::Value::Object(map) = v {
            for (k, val) in map {
                if !val.is_null() {
                    if let Some(name) = KEYS.iter().find(|n| **n == k) {
                        out.push(*name);
                    }
                }
            }
        }
        out
    }
}

const KEYS: &[&str] = &[
    "experiment", "manifold", "order", "major", "minor", "profile", "closed", "m", "theta", "phi", "lambda",
    "lambda_max", "lambda_grid", "mu_grid", "theta_grid", "k_grid", "k_window", "p_list", "preset", "dist", "dists",
    "deltas", "mu_range", "mud_range", "measure", "points", "fiber_nodes", "grid_n", "m_max", "modes_per_m",
    "scan_nodes", "tolerances", "out", "threads", "seed", "jobs",
];

const COMMON: &[&str] = &["experiment", "tolerances", "out", "threads", "seed"];
const MANIFOLD: &[&str] = &["manifold", "order", "major", "minor", "profile", "closed", "m", "grid_n", "m_max", "modes_per_m"];

fn keys_for(experiment: &str) -> Vec<&'static str> {
    let own: &[&str] = match experiment {
        "weyl" => &["theta", "phi", "lambda_max", "lambda_grid", "measure", "fiber_nodes"],
        "counting" => &["lambda", "lambda_max", "lambda_grid", "fiber_nodes"],
        "concentration" => &["theta_grid", "k_grid", "k_window"],
        "lpnorms" => &["k_grid", "p_list"],
        "kuznecov" => &["lambda", "lambda_grid", "points"],
        "statphase" => &["preset", "mu_grid"],
        "hybrid" => &["mu_grid", "dist"],
        "interp" => &["dists", "mu_range", "mud_range"],
        "critscan" => &["deltas", "scan_nodes"],
        "suite" => &["jobs"],
        _ => &[],
    };
    let mut v: Vec<&str> = COMMON.iter().chain(own).copied().collect();
    if matches!(experiment, "weyl" | "counting" | "lpnorms") {
        v.extend_from_slice(MANIFOLD);
    }
    v
}

/// The validated plan: jobs to run and where to put the reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub suite: SuiteConfig,
    pub out: PathBuf,
    pub threads: usize,
    /// Print the counting line `count=… predicted=… dev=…`.
    pub counting_line: bool,
}

struct V {
    errors: Vec<String>,
}

impl V {
    fn err(&mut self, key: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{key}: {msg}"));
    }

    fn list(&mut self, key: &str, spec: &Option<ListSpec>) -> Option<Vec<f64>> {
        let spec = spec.as_ref()?;
        match spec.values() {
            Ok(v) if v.is_empty() => {
                self.err(key, "empty list");
                None
            }
            Ok(v) => Some(v),
            Err(e) => {
                self.err(key, e);
                None
            }
        }
    }

    fn increasing(&mut self, key: &str, v: &[f64], min_len: usize) {
        if v.len() < min_len {
            self.err(key, format!("needs at least {min_len} points, got {}", v.len()));
        }
        if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            self.err(key, "values must be positive and finite");
        } else if v.windows(2).any(|w| w[1] <= w[0]) {
            self.err(key, "values must be strictly increasing");
        }
    }

    fn positive(&mut self, key: &str, v: Option<f64>) {
        if let Some(x) = v {
            if !(x.is_finite() && x > 0.0) {
                self.err(key, format!("must be positive (got {x})"));
            }
        }
    }

    fn geometric(&mut self, key: &str, v: &[f64]) {
        if v.len() >= 2 {
            let r = v[1] / v[0];
            if v.windows(2).any(|w| ((w[1] / w[0]) / r - 1.0).abs() > 1e-6) {
                self.err(key, "grid must be geometric");
            }
        }
    }
}

fn manifold_spec(c: &RunConfig, v: &mut V) -> ManifoldSpec {
    match c.manifold.as_deref().unwrap_or("sphere") {
        "sphere" => ManifoldSpec::Sphere,
        "torus" => ManifoldSpec::Torus,
        "torus-cyclic" => match c.order {
            Some(n) if n > 0 => ManifoldSpec::TorusCyclic { order: n },
            _ => {
                v.err("order", "torus-cyclic needs a positive order");
                ManifoldSpec::TorusCyclic { order: 1 }
            }
        },
        "sphere-profile" => ManifoldSpec::SphereProfile,
        "torus-profile" => {
            let (major, minor) = (c.major.unwrap_or(2.0), c.minor.unwrap_or(1.0));
            if !(minor > 0.0 && major > minor) {
                v.err("major", format!("torus profile needs major > minor > 0 (got {major}, {minor})"));
            }
            ManifoldSpec::TorusProfile { major, minor }
        }
        "profile" => match &c.profile {
            Some(p) => ManifoldSpec::ProfileFile { path: p.display().to_string(), closed: c.closed.unwrap_or(false) },
            None => {
                v.err("profile", "manifold = profile needs a profile file");
                ManifoldSpec::Sphere
            }
        },
        other => {
            v.err("manifold", format!("unknown manifold {other:?}"));
            ManifoldSpec::Sphere
        }
    }
}

fn basis_options(c: &RunConfig, v: &mut V) -> BasisOptions {
    let d = BasisOptions::default();
    let b = BasisOptions {
        m_max: c.m_max.unwrap_or(d.m_max),
        modes_per_m: c.modes_per_m.unwrap_or(d.modes_per_m),
        grid_n: c.grid_n.unwrap_or(d.grid_n),
    };
    if b.grid_n < 100 {
        v.err("grid_n", format!("must be at least 100 (got {})", b.grid_n));
    }
    if b.modes_per_m == 0 || b.modes_per_m > b.grid_n {
        v.err("modes_per_m", format!("must lie in 1..=grid_n (got {})", b.modes_per_m));
    }
    b
}

fn is_sphere(m: &ManifoldSpec) -> bool {
    matches!(m, ManifoldSpec::Sphere)
}

/// Validates the merged configuration and builds the jobs for `experiment`.
/// Every violated constraint is reported.
pub fn plan(experiment: &str, c: &RunConfig) -> Result<Plan, Vec<String>> {
    let mut v = V { errors: Vec::new() };
    if let Some(e) = &c.experiment {
        if e != experiment {
            v.err("experiment", format!("config names {e:?} but the subcommand is {experiment:?}"));
        }
    }
    let allowed = keys_for(experiment);
    for k in c.set_keys() {
        if !allowed.contains(&k) {
            v.err(k, format!("not used by {experiment}"));
        }
    }
    let t = c.tolerances.clone().unwrap_or_default();
    let threads = c
        .threads
        .or_else(|| std::env::var("EQUIWEYL_THREADS").ok().and_then(|s| s.trim().parse().ok()))
        .unwrap_or(0);
    if threads > 4096 {
        v.err("threads", format!("{threads} is not a sensible thread count"));
    }
    let seed = c.seed.unwrap_or(0);
    let out = c.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
    let m = c.m.unwrap_or(0);
    let mut counting_line = false;

    let jobs: Vec<Job> = match experiment {
        "weyl" => {
            let manifold = manifold_spec(c, &mut v);
            v.positive("lambda_max", c.lambda_max);
            let grid = v.list("lambda_grid", &c.lambda_grid).unwrap_or_else(|| sqrt2_grid(c.lambda_max.unwrap_or(1e6).abs(), 21));
            v.increasing("lambda_grid", &grid, 1);
            let theta = c.theta.unwrap_or(FRAC_PI_2);
            let phi = c.phi.unwrap_or(0.0);
            if is_sphere(&manifold) && !(0.0..=std::f64::consts::PI).contains(&theta) {
                v.err("theta", format!("colatitude must lie in [0, π] (got {theta})"));
            }
            if !phi.is_finite() {
                v.err("phi", "must be finite");
            }
            let measure = match c.measure.as_deref().unwrap_or("base-orbit") {
                "base-orbit" => OrbitMeasure::BaseOrbit,
                "lifted" => OrbitMeasure::Lifted,
                other => {
                    v.err("measure", format!("unknown measure {other:?}"));
                    OrbitMeasure::BaseOrbit
                }
            };
            let rel_tol = if is_sphere(&manifold) { t.sphere_weyl_rel } else { t.torus_weyl_rel };
            let options = WeylOptions {
                measure,
                fiber_nodes: c.fiber_nodes.unwrap_or(512),
                window: 5,
                rel_tol,
                slope_tol: t.weyl_slope,
                check_exponent: !matches!(manifold, ManifoldSpec::Torus | ManifoldSpec::TorusCyclic { .. }) || m == 0,
                basis: basis_options(c, &mut v),
            };
            vec![Job::new("weyl", Experiment::Weyl { manifold, x: [theta, phi], m, lambda_grid: grid, options })]
        }
        "counting" => {
            let manifold = manifold_spec(c, &mut v);
            v.positive("lambda", c.lambda);
            v.positive("lambda_max", c.lambda_max);
            if c.lambda.is_some() && (c.lambda_grid.is_some() || c.lambda_max.is_some()) {
                v.err("lambda", "give either lambda or a lambda grid, not both");
            }
            let grid = match (c.lambda, v.list("lambda_grid", &c.lambda_grid)) {
                (Some(l), _) => vec![l],
                (None, Some(g)) => g,
                (None, None) => match c.lambda_max {
                    Some(l) => sqrt2_grid(l.abs(), 21),
                    None => vec![1e6],
                },
            };
            v.increasing("lambda_grid", &grid, 1);
            counting_line = true;
            let rel_tol = if is_sphere(&manifold) { t.counting_rel } else { t.torus_counting_rel };
            let options = CountingOptions {
                rel_tol,
                fiber_nodes: c.fiber_nodes.unwrap_or(256),
                basis: basis_options(c, &mut v),
                ..Default::default()
            };
            vec![Job::new("counting", Experiment::Counting { manifold, m, lambda_grid: grid, options })]
        }
        "concentration" => {
            let d = ConcentrationOptions::default();
            let theta_grid = v.list("theta_grid", &c.theta_grid).unwrap_or(d.theta_grid.clone());
            v.increasing("theta_grid", &theta_grid, 5);
            if theta_grid.iter().any(|t| *t >= std::f64::consts::PI) {
                v.err("theta_grid", "values must lie in (0, π)");
            }
            let pole = v.list("k_grid", &c.k_grid).map(|g| degrees(&g)).unwrap_or(d.pole_k.clone());
            v.increasing("k_grid", &pole.iter().map(|&k| k as f64).collect::<Vec<_>>(), 5);
            let k_window = match c.k_window {
                Some(Pair(a, b)) => {
                    if !(a >= 1.0 && b >= a && a.fract() == 0.0 && b.fract() == 0.0) {
                        v.err("k_window", format!("needs integers 1 ≤ a ≤ b (got {a}:{b})"));
                    }
                    (a.max(1.0) as u32, b.max(1.0) as u32)
                }
                None => d.k_window,
            };
            let options = ConcentrationOptions {
                k_window,
                theta_grid,
                pole_k: pole,
                slope_tol: t.concentration_slope,
                pole_slope_tol: t.pole_slope,
                ..d
            };
            vec![Job::new("concentration", Experiment::Concentration(options))]
        }
        "lpnorms" => {
            let manifold = manifold_spec(c, &mut v);
            let d = LpOptions::default();
            let p_list = v.list("p_list", &c.p_list).unwrap_or(d.p_list.clone());
            if p_list.iter().any(|p| !(*p >= 2.0)) {
                v.err("p_list", "every p must lie in [2, ∞]");
            }
            let k_grid = v.list("k_grid", &c.k_grid).map(|g| degrees(&g)).unwrap_or(d.k_grid.clone());
            let kf: Vec<f64> = k_grid.iter().map(|&k| k as f64).collect();
            v.increasing("k_grid", &kf, 5);
            let options = LpOptions {
                p_list,
                k_grid,
                slope_tol: t.lp_slope,
                exact_tol: t.lp_exact,
                sup_tol: t.torus_sup,
                basis: basis_options(c, &mut v),
                ..d
            };
            vec![Job::new("lpnorms", Experiment::Lpnorms { manifold, m, options })]
        }
        "kuznecov" => {
            let d = KuznecovOptions::default();
            v.positive("lambda", c.lambda);
            let lambda = c.lambda.unwrap_or(d.lambda);
            let growth_grid = v.list("lambda_grid", &c.lambda_grid).unwrap_or_else(|| sqrt2_grid(lambda.abs(), 7));
            v.increasing("lambda_grid", &growth_grid, 1);
            let points = c.points.unwrap_or(d.n_points);
            if points == 0 {
                v.err("points", "must be positive");
            }
            let options = KuznecovOptions {
                n_points: points,
                lambda,
                seed,
                growth_grid,
                abs_tol: t.kuznecov_abs,
                growth_tol: t.kuznecov_growth_rel,
                ..d
            };
            vec![Job::new("kuznecov", Experiment::Kuznecov(options))]
        }
        "statphase" => {
            let d = StatphaseOptions::default();
            let preset = match c.preset.as_deref().unwrap_or("gaussian") {
                "gaussian" => StatphasePreset::Gaussian,
                "sphere" | "sphere-plane-wave" => StatphasePreset::SpherePlaneWave,
                other => {
                    v.err("preset", format!("unknown preset {other:?}"));
                    StatphasePreset::Gaussian
                }
            };
            let mu_grid = v.list("mu_grid", &c.mu_grid).unwrap_or(d.mu_grid.clone());
            v.increasing("mu_grid", &mu_grid, 5);
            let options = StatphaseOptions {
                preset,
                mu_grid,
                rel_tol: t.gaussian_rel,
                remainder_slope_tol: t.remainder_slope,
                decay_slope_tol: t.plane_wave_slope,
                ..d
            };
            vec![Job::new("statphase", Experiment::Statphase(options))]
        }
        "hybrid" => {
            let d = HybridExperimentOptions::default();
            let mu_grid = v.list("mu_grid", &c.mu_grid).unwrap_or(d.mu_grid.clone());
            v.increasing("mu_grid", &mu_grid, 8);
            v.geometric("mu_grid", &mu_grid);
            v.positive("dist", c.dist);
            let options = HybridExperimentOptions {
                off_dist: c.dist.unwrap_or(d.off_dist),
                mu_grid,
                slope_tol: t.hybrid_slope,
                ..d
            };
            vec![Job::new("hybrid", Experiment::Hybrid(options))]
        }
        "interp" => {
            let d = InterpolationOptions::default();
            let dists = v.list("dists", &c.dists).unwrap_or(d.dists.clone());
            v.increasing("dists", &dists, 1);
            let mu_range = c.mu_range.map(|p| (p.0, p.1)).unwrap_or(d.mu_range);
            let mud_range = c.mud_range.map(|p| (p.0, p.1)).unwrap_or(d.mud_range);
            for (key, (a, b)) in [("mu_range", mu_range), ("mud_range", mud_range)] {
                if !(a > 0.0 && b > a && b.is_finite()) {
                    v.err(key, format!("needs 0 < a < b (got {a}:{b})"));
                }
            }
            let options = InterpolationOptions { dists, mu_range, mud_range, band_factor: t.band_factor, ..d };
            vec![Job::new("interp", Experiment::Interp(options))]
        }
        "critscan" => {
            let d = CritscanOptions::default();
            let deltas = v.list("deltas", &c.deltas).unwrap_or(d.deltas.clone());
            v.increasing("deltas", &deltas, 5);
            let mut scan = ScanConfig::default();
            if let Some(n) = v.list("scan_nodes", &c.scan_nodes) {
                if n.len() != 3 || n.iter().any(|x| !(x.fract() == 0.0 && *x >= 4.0)) {
                    v.err("scan_nodes", "needs three integers ≥ 4 (nθ, nφ, ng)");
                } else {
                    scan.n_theta = n[0] as usize;
                    scan.n_phi = n[1] as usize;
                    scan.n_g = n[2] as usize;
                }
            }
            let options =
                CritscanOptions { deltas, scan, gradient_tol: t.critical_gradient, det_slope_tol: t.det_slope, ..d };
            vec![Job::new("critscan", Experiment::Critscan(options))]
        }
        other => {
            v.err("experiment", format!("unknown experiment {other:?}"));
            Vec::new()
        }
    };
    if v.errors.is_empty() {
        Ok(Plan { suite: SuiteConfig { jobs }, out, threads, counting_line })
    } else {
        Err(v.errors)
    }
}

fn degrees(v: &[f64]) -> Vec<u32> {
    let mut k: Vec<u32> = v.iter().map(|x| x.round().max(0.0) as u32).collect();
    k.dedup();
    k
}

/// The suite plan: the acceptance jobs (or the quick ones), a file's
/// `jobs`, optionally restricted to `only`.
pub fn suite_plan(c: &RunConfig, quick: bool, only: &[String]) -> Result<Plan, Vec<String>> {
    let mut errors = Vec::new();
    let allowed = keys_for("suite");
    for k in c.set_keys() {
        if !allowed.contains(&k) {
            errors.push(format!("{k}: not used by suite"));
        }
    }
    if let Some(e) = &c.experiment {
        if e != "suite" {
            errors.push(format!("experiment: config names {e:?} but the subcommand is \"suite\""));
        }
    }
    let t = c.tolerances.clone().unwrap_or_default();
    let mut suite = match (&c.jobs, quick) {
        (Some(jobs), _) => SuiteConfig { jobs: jobs.clone() },
        (None, true) => SuiteConfig::quick(),
        (None, false) => SuiteConfig::acceptance(&t),
    };
    if let Some(seed) = c.seed {
        for j in &mut suite.jobs {
            match &mut j.experiment {
                Experiment::Kuznecov(o) => o.seed = seed,
                Experiment::Addition(AdditionOptions { seed: s, .. }) => *s = seed,
                _ => {}
            }
        }
    }
    let mut ids: Vec<&str> = suite.jobs.iter().map(|j| j.id.as_str()).collect();
    ids.sort();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        errors.push("jobs: job ids must be unique".into());
    }
    if !only.is_empty() {
        match suite.select(only) {
            Ok(s) => suite = s,
            Err(e) => errors.push(format!("jobs: {e}")),
        }
    }
    let threads = c
        .threads
        .or_else(|| std::env::var("EQUIWEYL_THREADS").ok().and_then(|s| s.trim().parse().ok()))
        .unwrap_or(0);
    if errors.is_empty() {
        Ok(Plan { suite, out: c.out.clone().unwrap_or_else(|| PathBuf::from("reports")), threads, counting_line: false })
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(ListSpec::Text("1:4:3".into()).values().unwrap(), vec![1.0, 2.0, 4.0]);
        assert_eq!(ListSpec::Text("2, 4,inf".into()).values().unwrap(), vec![2.0, 4.0, f64::INFINITY]);
        assert!(ListSpec::Text("4:1:3".into()).values().is_err());
        assert!(ListSpec::Text("1:2".into()).values().is_err());
        let j: ListSpec = serde_json::from_str(r#"[1, "inf"]"#).unwrap();
        assert_eq!(j.values().unwrap(), vec![1.0, f64::INFINITY]);
    }

    #[test]
    fn every_violation_is_listed() {
        let c = RunConfig {
            lambda_max: Some(-1.0),
            measure: Some("nope".into()),
            mu_grid: Some(ListSpec::Text("1,2".into())),
            ..Default::default()
        };
        let e = plan("weyl", &c).unwrap_err();
        assert!(e.iter().any(|s| s.starts_with("lambda_max")), "{e:?}");
        assert!(e.iter().any(|s| s.starts_with("measure")), "{e:?}");
        assert!(e.iter().any(|s| s.starts_with("mu_grid: not used")), "{e:?}");
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig { m: Some(4), lambda: Some(100.0), ..Default::default() };
        let flags = RunConfig { m: Some(2), ..Default::default() };
        let c = flags.over(&file);
        assert_eq!(c.m, Some(2));
        assert_eq!(c.lambda, Some(100.0));
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"lambda_maximum": 3}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"lambda_max": 3, "tolerances": {"band_factor": 3}}"#).is_ok());
        assert!(serde_json::from_str::<RunConfig>(r#"{"tolerances": {"band": 3}}"#).is_err());
    }
}
