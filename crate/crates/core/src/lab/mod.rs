//! Experiment orchestration: sweeps over λ- and μ-grids, comparison of
//! measured series against predictions, and self-contained reports.
//!
//! A report stores its series and a list of [`Check`]s. Each check names a
//! statistic of one or more series and a comparison with a recorded target
//! and tolerance, so [`ExperimentReport::replay`] recomputes the verdict from
//! the file alone.

mod oscillatory;
mod spectral;
mod suite;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_power_law, PowerLawFit};

pub use oscillatory::{
    run_caustic_experiment, run_critscan_experiment, run_hybrid_experiment, run_interpolation_experiment,
    run_statphase_experiment, CausticOptions, CritscanOptions, HybridExperimentOptions, InterpolationOptions,
    StatphaseOptions, StatphasePreset,
};
pub use spectral::{
    build_basis, run_addition_experiment, run_concentration_experiment, run_counting_experiment,
    run_eigensolver_experiment, run_kuznecov_experiment, run_local_weyl_experiment, run_lp_experiment,
    sqrt2_grid, AdditionOptions, BasisOptions, ConcentrationOptions, CountingOptions, EigensolverOptions,
    KuznecovOptions, LpOptions, WeylOptions,
};
pub use suite::{run_suite, Experiment, Job, ManifoldSpec, SuiteConfig};

/// Acceptance tolerances; every experiment records the ones it used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub addition_rel: f64,
    pub torus_weyl_rel: f64,
    pub sphere_weyl_rel: f64,
    pub weyl_slope: f64,
    pub concentration_slope: f64,
    pub pole_slope: f64,
    pub counting_rel: f64,
    pub torus_counting_rel: f64,
    pub lp_slope: f64,
    pub lp_exact: f64,
    pub torus_sup: f64,
    pub kuznecov_abs: f64,
    pub kuznecov_growth_rel: f64,
    pub gaussian_rel: f64,
    pub remainder_slope: f64,
    pub plane_wave_slope: f64,
    pub hybrid_slope: f64,
    pub band_factor: f64,
    pub critical_gradient: f64,
    pub det_slope: f64,
    pub product_invariance: f64,
    pub caustic_rel: f64,
    pub tau_zero: f64,
    pub eigen_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            addition_rel: 1e-10,
            torus_weyl_rel: 0.01,
            sphere_weyl_rel: 0.05,
            weyl_slope: 0.02,
            concentration_slope: 0.15,
            pole_slope: 0.01,
            counting_rel: 0.01,
            torus_counting_rel: 0.01,
            lp_slope: 0.02,
            lp_exact: 1e-6,
            torus_sup: 1e-12,
            kuznecov_abs: 1e-10,
            kuznecov_growth_rel: 0.05,
            gaussian_rel: 1e-6,
            remainder_slope: 0.1,
            plane_wave_slope: 0.05,
            hybrid_slope: 0.1,
            band_factor: 2.0,
            critical_gradient: 1e-10,
            det_slope: 0.1,
            product_invariance: 1e-10,
            caustic_rel: 0.35,
            tau_zero: 1e-12,
            eigen_rel: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// A scalar summary of the named series (concatenated in order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Statistic {
    Last,
    Max,
    Min,
    MaxAbs,
    Count,
    /// Log-log slope of `y` against `x`.
    Slope,
    /// `max / min` of `y`.
    Band,
    /// `max |y − y_ref|` against the series `reference`, pointwise.
    MaxAbsDiff { reference: String },
    /// `max |y/y_ref − 1|`.
    MaxRelDiff { reference: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Comparison {
    /// `|value − target| ≤ tol`.
    Within { target: f64, tol: f64 },
    /// `|value/target − 1| ≤ tol`.
    Relative { target: f64, tol: f64 },
    AtMost { bound: f64 },
    AtLeast { bound: f64 },
}

impl Comparison {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Comparison::Within { target, tol } => (v - target).abs() <= tol,
            Comparison::Relative { target, tol } => (v / target - 1.0).abs() <= tol,
            Comparison::AtMost { bound } => v <= bound,
            Comparison::AtLeast { bound } => v >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub series: Vec<String>,
    pub statistic: Statistic,
    pub comparison: Comparison,
    /// Undefined statistics are stored as `null`.
    #[serde(with = "nan_as_null")]
    pub value: f64,
    pub passed: bool,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: serde_json::Value,
    pub series: Vec<Series>,
    pub prediction: serde_json::Value,
    pub fit: Option<PowerLawFit>,
    /// Scalars derived from the series that carry no verdict.
    pub derived: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub tolerances: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    /// Wall-clock time; the only field excluded from reproducibility checks.
    pub runtime_s: f64,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, params: impl Serialize) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            params: serde_json::to_value(params).unwrap_or(serde_json::Value::Null),
            series: Vec::new(),
            prediction: serde_json::Value::Null,
            fit: None,
            derived: BTreeMap::new(),
            checks: Vec::new(),
            verdict: Verdict::Inconclusive,
            tolerances: BTreeMap::new(),
            warnings: Vec::new(),
            runtime_s: 0.0,
        }
    }

    pub fn add_series(&mut self, name: &str, x_label: &str, x: Vec<f64>, y: Vec<f64>) {
        self.series.push(Series { name: name.into(), x_label: x_label.into(), x, y });
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn tolerance(&mut self, name: &str, v: f64) {
        self.tolerances.insert(name.into(), v);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("{}: {msg}", self.experiment);
        self.warnings.push(msg);
    }

    /// Evaluates and records a check; returns its value.
    pub fn check(&mut self, name: &str, series: &[&str], statistic: Statistic, comparison: Comparison) -> f64 {
        let names: Vec<String> = series.iter().map(|s| s.to_string()).collect();
        let value = self.statistic(&names, &statistic);
        let passed = value.is_finite() && comparison.holds(value);
        self.checks.push(Check { name: name.into(), series: names, statistic, comparison, value, passed });
        value
    }

    fn gather(&self, names: &[String]) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for n in names {
            let s = self.series(n)?;
            x.extend_from_slice(&s.x);
            y.extend_from_slice(&s.y);
        }
        Some((x, y))
    }

    /// The statistic over the stored series; NaN when it is undefined.
    pub fn statistic(&self, names: &[String], statistic: &Statistic) -> f64 {
        let Some((x, y)) = self.gather(names) else { return f64::NAN };
        let fold = |init: f64, f: fn(f64, f64) -> f64, ys: &[f64]| {
            if ys.is_empty() {
                f64::NAN
            } else {
                ys.iter().copied().fold(init, f)
            }
        };
        match statistic {
            Statistic::Last => y.last().copied().unwrap_or(f64::NAN),
            Statistic::Max => fold(f64::NEG_INFINITY, f64::max, &y),
            Statistic::Min => fold(f64::INFINITY, f64::min, &y),
            Statistic::MaxAbs => fold(0.0, |a, b| a.max(b.abs()), &y),
            Statistic::Count => y.len() as f64,
            Statistic::Slope => fit_power_law(&x, &y).map(|f| f.slope).unwrap_or(f64::NAN),
            Statistic::Band => {
                let hi = fold(f64::NEG_INFINITY, f64::max, &y);
                let lo = fold(f64::INFINITY, f64::min, &y);
                if lo > 0.0 {
                    hi / lo
                } else {
                    f64::NAN
                }
            }
            Statistic::MaxAbsDiff { reference } | Statistic::MaxRelDiff { reference } => {
                let Some((_, r)) = self.gather(std::slice::from_ref(reference)) else { return f64::NAN };
                if r.len() != y.len() || y.is_empty() {
                    return f64::NAN;
                }
                let rel = matches!(statistic, Statistic::MaxRelDiff { .. });
                y.iter()
                    .zip(&r)
                    .map(|(a, b)| if rel { (a / b - 1.0).abs() } else { (a - b).abs() })
                    .fold(0.0, f64::max)
            }
        }
    }

    fn verdict_of(checks: &[Check]) -> Verdict {
        if checks.is_empty() {
            Verdict::Inconclusive
        } else if checks.iter().any(|c| c.value.is_finite() && !c.passed) {
            Verdict::Fail
        } else if checks.iter().any(|c| !c.value.is_finite()) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    /// Sets the verdict and runtime.
    pub fn finish(mut self, start: std::time::Instant) -> Self {
        self.verdict = Self::verdict_of(&self.checks);
        self.runtime_s = start.elapsed().as_secs_f64();
        self
    }

    /// Recomputes every check from the stored series and returns the verdict.
    pub fn replay(&self) -> Verdict {
        let checks: Vec<Check> = self
            .checks
            .iter()
            .map(|c| {
                let value = self.statistic(&c.series, &c.statistic);
                Check { value, passed: value.is_finite() && c.comparison.holds(value), ..c.clone() }
            })
            .collect();
        Self::verdict_of(&checks)
    }

    /// The replayed verdict and check values agree with the stored ones.
    pub fn is_consistent(&self) -> bool {
        self.replay() == self.verdict
            && self.checks.iter().all(|c| {
                let v = self.statistic(&c.series, &c.statistic);
                v.to_bits() == c.value.to_bits() || (v.is_nan() && c.value.is_nan())
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// JSON with the runtime zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.runtime_s = 0.0;
        r.to_json()
    }

    /// Long-format CSV `series,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for s in &self.series {
            for (x, y) in s.x.iter().zip(&s.y) {
                out.push_str(&format!("{},{:?},{:?}\n", s.name, x, y));
            }
        }
        out
    }

    /// `experiment: verdict` with each check's value.
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}={}{}", c.name, c.value, if c.passed { "" } else { "(!)" }))
            .collect();
        format!("{}: {} [{}] {:.2}s", self.experiment, self.verdict, parts.join(", "), self.runtime_s)
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("report");
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes `<experiment>.json` and `<experiment>.csv` into `dir`.
pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let json = dir.join(format!("{}.json", report.experiment));
    let csv = dir.join(format!("{}.csv", report.experiment));
    write_atomic(&json, &report.to_json())?;
    write_atomic(&csv, &report.to_csv())?;
    Ok((json, csv))
}

/// Mean of `f(λ − j)` for `j = 0, …, window − 1`.
pub(crate) fn window_mean(lambda: f64, window: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let w = window.max(1);
    let mut s = 0.0;
    for j in 0..w {
        s += f((lambda - j as f64).max(0.0))?;
    }
    Ok(s / w as f64)
}
