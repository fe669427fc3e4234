//! Legendre polynomials, fully normalized associated Legendre functions and
//! spherical harmonics, stable up to degree 2000.
//!
//! Normalization is folded into the recurrences, so no factorial is ever
//! formed. The Condon–Shortley phase `(-1)^m` is included:
//! `Y_{k,m}(θ, φ) = N_{k,m} P_{k,m}(cos θ) e^{imφ}` with
//! `P_{k,m}(α) = (-1)^m (1-α²)^{m/2} d^m/dα^m P_k(α)`.

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use serde::{Deserialize, Serialize};

/// Largest supported degree.
pub const MAX_DEGREE: u32 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub k: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(k: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > k {
            return Err(Error::Index(format!("|m| = {} exceeds degree k = {k}", m.abs())));
        }
        Ok(Self { k, m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluatedHarmonic<T> {
    pub value: Complex<T>,
    pub magnitude_sq: T,
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha.abs() <= T::one()) {
        return Err(Error::Domain(format!("|cos θ| = {} > 1", alpha.abs())));
    }
    Ok(())
}

/// `P_k(α)` by the three-term recurrence.
pub fn legendre_p<T: Real>(k: u32, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let mut p0 = T::one();
    if k == 0 {
        return Ok(p0);
    }
    let mut p1 = alpha;
    for j in 1..k {
        let jf = T::of(j as usize);
        let p2 = ((jf + jf + T::one()) * alpha * p1 - jf * p0) / (jf + T::one());
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

/// All of `P_0(α), …, P_{k_max}(α)`.
pub fn legendre_p_all<T: Real>(k_max: u32, alpha: T) -> Result<Vec<T>> {
    check_alpha(alpha)?;
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(T::one());
    if k_max >= 1 {
        out.push(alpha);
    }
    for j in 1..k_max as usize {
        let jf = T::of(j);
        let p = ((jf + jf + T::one()) * alpha * out[j] - jf * out[j - 1]) / (jf + T::one());
        out.push(p);
    }
    Ok(out)
}

/// Fully normalized `N_{k,m} P_{k,m}(α)` for `k = |m|, …, k_max` (the
/// returned vector is indexed by `k − |m|`). Negative orders follow from
/// `N_{k,−m} P_{k,−m} = (−1)^m N_{k,m} P_{k,m}`.
pub fn assoc_legendre_normalized_column<T: Real>(m: i32, k_max: u32, alpha: T) -> Result<Vec<T>> {
    check_alpha(alpha)?;
    let ma = m.unsigned_abs();
    if ma > k_max {
        return Ok(Vec::new());
    }
    if k_max > MAX_DEGREE {
        return Err(Error::Resource(format!("degree {k_max} exceeds {MAX_DEGREE}")));
    }
    let sin_t = (T::one() - alpha * alpha).max(T::zero()).sqrt();
    let four_pi = T::lit(4.0) * T::PI();
    // Sectoral seed: P̄_m^m = (−1)^m sqrt((2m+1)/(4π) · (2m−1)!!/(2m)!!) sin^m θ.
    let mut pmm = (T::one() / four_pi).sqrt();
    for i in 1..=ma as usize {
        let fi = T::of(i);
        pmm = -pmm * ((fi + fi + T::one()) / (fi + fi)).sqrt() * sin_t;
    }
    let mut col = Vec::with_capacity((k_max - ma) as usize + 1);
    col.push(pmm);
    if k_max > ma {
        let mf = T::of(ma as usize);
        col.push((mf + mf + T::lit(3.0)).sqrt() * alpha * pmm);
    }
    let m2 = T::of((ma as usize) * (ma as usize));
    for k in (ma as usize + 2)..=(k_max as usize) {
        let kf = T::of(k);
        let km1 = kf - T::one();
        let a_k = ((T::lit(4.0) * kf * kf - T::one()) / (kf * kf - m2)).sqrt();
        let a_km1 = ((T::lit(4.0) * km1 * km1 - T::one()) / (km1 * km1 - m2)).sqrt();
        let j = k - ma as usize;
        let p = a_k * (alpha * col[j - 1] - col[j - 2] / a_km1);
        col.push(p);
    }
    if m < 0 && ma % 2 == 1 {
        for v in col.iter_mut() {
            *v = -*v;
        }
    }
    Ok(col)
}

/// `sqrt((2k+1)/(4π) · (k−m)!/(k+m)!) · P_{k,m}(α)`.
pub fn assoc_legendre_normalized<T: Real>(idx: HarmonicIndex, alpha: T) -> Result<T> {
    HarmonicIndex::new(idx.k, idx.m)?;
    let col = assoc_legendre_normalized_column(idx.m, idx.k, alpha)?;
    Ok(*col.last().expect("non-empty column"))
}

pub fn spherical_harmonic<T: Real>(idx: HarmonicIndex, theta: T, phi: T) -> Result<EvaluatedHarmonic<T>> {
    if !(theta >= T::zero() && theta <= T::PI() + T::epsilon() * T::lit(4.0)) {
        return Err(Error::Domain(format!("colatitude {theta} outside [0, π]")));
    }
    let p = assoc_legendre_normalized(idx, theta.cos())?;
    Ok(harmonic_from_legendre(p, idx.m, phi))
}

pub(crate) fn harmonic_from_legendre<T: Real>(p: T, m: i32, phi: T) -> EvaluatedHarmonic<T> {
    let (s, c) = (T::of_i(m as i64) * phi).sin_cos();
    let value = Complex::new(p * c, p * s);
    EvaluatedHarmonic { value, magnitude_sq: p * p }
}

/// Leading term `sqrt(2/(π k sin θ)) cos((k+½)θ − π/4)` of `P_k(cos θ)`.
pub fn zonal_asymptotic<T: Real>(k: u32, theta: T) -> Result<T> {
    let kf = T::of(k as usize);
    let ks = kf * theta.sin();
    if !(ks > T::one()) {
        return Err(Error::Domain(format!("k sin θ = {ks} ≤ 1: outside the asymptotic regime")));
    }
    let amp = (T::lit(2.0) / (T::PI() * ks)).sqrt();
    Ok(amp * ((kf + T::lit(0.5)) * theta - T::FRAC_PI_4()).cos())
}

/// Eigenvalue `k(k+1)` of the round 2-sphere.
pub fn sphere_eigenvalue(k: u32) -> f64 {
    let k = k as f64;
    k * (k + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_p(5, 1.0f64).unwrap(), 1.0);
        assert_eq!(legendre_p(0, 0.37f64).unwrap(), 1.0);
        assert!((legendre_p(2, 0.0f64).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(legendre_p(3, 1.0001f64), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_all_matches_single() {
        let all = legendre_p_all(40, 0.3f64).unwrap();
        for k in [0u32, 1, 7, 40] {
            assert_eq!(all[k as usize], legendre_p(k, 0.3).unwrap());
        }
    }

    #[test]
    fn normalized_examples() {
        let v = assoc_legendre_normalized(HarmonicIndex::new(0, 0).unwrap(), 0.5f64).unwrap();
        assert!((v - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        let v = assoc_legendre_normalized(HarmonicIndex::new(10, 0).unwrap(), 1.0f64).unwrap();
        assert!((v - (21.0 / (4.0 * PI)).sqrt()).abs() < 1e-13);
        let v = assoc_legendre_normalized(HarmonicIndex::new(1, 1).unwrap(), 0.0f64).unwrap();
        assert!((v + (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn index_and_domain_errors() {
        assert!(matches!(HarmonicIndex::new(2, 3), Err(Error::Index(_))));
        let idx = HarmonicIndex { k: 2, m: -3 };
        assert!(matches!(assoc_legendre_normalized(idx, 0.1f64), Err(Error::Index(_))));
        let idx = HarmonicIndex::new(2, 1).unwrap();
        assert!(matches!(assoc_legendre_normalized(idx, -1.5f64), Err(Error::Domain(_))));
    }

    #[test]
    fn low_degree_closed_forms() {
        // Y_{2,1}: −sqrt(15/(8π)) sinθ cosθ, Y_{3,2}: sqrt(105/(32π)) sin²θ cosθ.
        let th = 0.7f64;
        let (s, c) = th.sin_cos();
        let v = assoc_legendre_normalized(HarmonicIndex::new(2, 1).unwrap(), c).unwrap();
        assert!((v + (15.0 / (8.0 * PI)).sqrt() * s * c).abs() < 1e-14);
        let v = assoc_legendre_normalized(HarmonicIndex::new(3, 2).unwrap(), c).unwrap();
        assert!((v - (105.0 / (32.0 * PI)).sqrt() * s * s * c).abs() < 1e-14);
        let v = assoc_legendre_normalized(HarmonicIndex::new(3, -2).unwrap(), c).unwrap();
        assert!((v - (105.0 / (32.0 * PI)).sqrt() * s * s * c).abs() < 1e-14);
        let v = assoc_legendre_normalized(HarmonicIndex::new(2, -1).unwrap(), c).unwrap();
        assert!((v - (15.0 / (8.0 * PI)).sqrt() * s * c).abs() < 1e-14);
    }

    #[test]
    fn spherical_harmonic_examples() {
        let y = spherical_harmonic(HarmonicIndex::new(0, 0).unwrap(), 1.0f64, 2.0).unwrap();
        assert!((y.value.re - 0.28209479177387814).abs() < 1e-15 && y.value.im == 0.0);
        let y = spherical_harmonic(HarmonicIndex::new(10, 0).unwrap(), 0.0f64, 0.0).unwrap();
        assert!((y.magnitude_sq - 21.0 / (4.0 * PI)).abs() < 1e-12);
        let idx = HarmonicIndex::new(3, 2).unwrap();
        let y = spherical_harmonic(idx, PI / 2.0, PI / 4.0).unwrap();
        let p = assoc_legendre_normalized(idx, (PI / 2.0).cos()).unwrap();
        assert!((y.magnitude_sq - p * p).abs() < 1e-15);
        assert!((y.magnitude_sq - y.value.norm_sqr()).abs() <= 1e-14 * y.magnitude_sq.max(1e-300));
    }

    #[test]
    fn conjugation_symmetry() {
        let (th, ph) = (1.1f64, 0.4);
        for k in 0..8u32 {
            for m in 1..=k as i32 {
                let a = spherical_harmonic(HarmonicIndex::new(k, m).unwrap(), th, ph).unwrap().value;
                let b = spherical_harmonic(HarmonicIndex::new(k, -m).unwrap(), th, ph).unwrap().value;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - a.conj() * sign).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zonal_asymptotic_examples() {
        let z = zonal_asymptotic(100, PI / 2.0).unwrap();
        assert!((z - (2.0 / (100.0 * PI)).sqrt()).abs() < 1e-12);
        // P_100(0) = 99!!/100!!, built as a running product.
        let mut oracle = 1.0f64;
        for j in 1..=50 {
            oracle *= (2 * j - 1) as f64 / (2 * j) as f64;
        }
        let p = legendre_p(100, 0.0f64).unwrap();
        assert!((p - oracle).abs() < 1e-14);
        assert!((p - z).abs() < 3e-4);
        let (k, th) = (400u32, 1.0f64);
        let diff = (legendre_p(k, th.cos()).unwrap() - zonal_asymptotic(k, th).unwrap()).abs();
        assert!(diff < 10.0 * (k as f64 * th.sin()).powf(-1.5));
        assert!(matches!(zonal_asymptotic(1, 0.5f64), Err(Error::Domain(_))));
    }

    #[test]
    fn no_overflow_at_degree_two_thousand() {
        for &alpha in &[0.999f64, 0.5, 0.0, -0.3] {
            for &m in &[0i32, 1, 500, 1999, 2000] {
                let col = assoc_legendre_normalized_column(m, 2000, alpha).unwrap();
                assert!(col.iter().all(|v| v.is_finite() && v.abs() < 1e3));
            }
        }
    }

    #[test]
    fn single_precision_agrees() {
        let a = assoc_legendre_normalized(HarmonicIndex::new(50, 7).unwrap(), 0.3f32).unwrap();
        let b = assoc_legendre_normalized(HarmonicIndex::new(50, 7).unwrap(), 0.3f64).unwrap();
        assert!((a as f64 - b).abs() < 1e-4);
    }
}
