//! Log-log least-squares regression.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub grid: Vec<f64>,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Fits `log y = intercept + slope · log x`.
///
/// The abscissae must be positive and strictly increasing with at least
/// five points; the ordinates must be positive. When the data lie exactly
/// on a line (including constant `y`) the coefficient of determination is 1.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DegenerateData(format!(
            "length mismatch: {} abscissae, {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 5 {
        return Err(Error::DegenerateData(format!("{} points, need at least 5", xs.len())));
    }
    if let Some(v) = xs.iter().chain(ys).find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::DegenerateData(format!("nonpositive or non-finite value {v}")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DegenerateData("abscissae not strictly increasing".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateData("constant abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(PowerLawFit { slope, intercept, r_squared, grid: xs.to_vec() })
}

/// Geometric grid `a, a·r, …` with `n` points ending at `b`.
pub fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let r = (b / a).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a * (r * i as f64).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_inverse_laws() {
        let xs: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let f = fit_power_law(&xs, &xs).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 / x).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_ordinates_fit_flat() {
        let xs = geometric_grid(1.0, 100.0, 6);
        let f = fit_power_law(&xs, &[2.0; 6]).unwrap();
        assert!(f.slope.abs() < 1e-15);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0; 4]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 2.0, -1.0, 4.0, 5.0]).is_err());
        assert!(fit_power_law(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]).is_err());
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(1.0, 1024.0, 21);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[20], 1024.0);
        assert!((g[2] - 2.0).abs() < 1e-12);
    }
}
