//! Leading coefficients of the equivariant local and global Weyl laws.
//!
//! The local coefficient at `x` for the label `γ` is
//!
//! ```text
//! d_γ [π_γ|G_x : 1] / (2π)^{n−κ_x} · ∫_{ξ ∈ Ann(T_x G·x), |ξ| < 1} dξ / vol(ξ)
//! ```
//!
//! multiplying `λ^{(n−κ_x)/2}`. Two volume functions are available, see
//! [`OrbitMeasure`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{IsotypicLabel, ModelManifold, Point};
use crate::quadrature::{gauss_legendre, pairwise_sum, periodic_trapezoid};
use crate::scalar::Real;

/// Volume function in the fiber integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitMeasure {
    /// Riemannian volume of the base orbit `G·x` (a point counts as 1, a
    /// finite orbit as its cardinality). This matches the measured
    /// asymptotics of the exact spectral functions on the models.
    #[default]
    BaseOrbit,
    /// Length of the lifted orbit `G·(x, ξ)` in the embedding metric of the
    /// tangent bundle.
    Lifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylPrediction<T> {
    pub coefficient: T,
    pub exponent: T,
    pub x: Point<T>,
    pub label: IsotypicLabel,
    pub n_nodes: usize,
}

impl<T: Real> WeylPrediction<T> {
    /// `coefficient · λ^{exponent}`.
    pub fn predict(&self, lambda: T) -> T {
        self.coefficient * lambda.powf(self.exponent)
    }
}

pub fn local_leading_coefficient<T: Real>(
    manifold: &ModelManifold<T>,
    x: &Point<T>,
    label: IsotypicLabel,
    n_nodes: usize,
    measure: OrbitMeasure,
) -> Result<WeylPrediction<T>> {
    let n_nodes = n_nodes.max(8);
    let od = manifold.orbit_data(x)?;
    let codim = manifold.dim() - od.kappa_x;
    let exponent = T::of(codim as usize) / T::of(manifold.operator_degree() as usize);
    let mult = od.trivial_multiplicity(label) * T::of(label.d_gamma() as usize);
    if mult == T::zero() {
        return Ok(WeylPrediction { coefficient: T::zero(), exponent, x: *x, label, n_nodes });
    }
    let nodes = manifold.cosphere_fiber_slice(x, n_nodes)?;
    let base_volume = if od.kappa_x == 0 {
        match manifold.finite_group_order() {
            Some(n) => T::of(n as usize),
            None => T::one(),
        }
    } else {
        od.orbit_length
    };
    let terms: Vec<T> = nodes
        .iter()
        .map(|nd| {
            let vol = match measure {
                OrbitMeasure::BaseOrbit => base_volume,
                OrbitMeasure::Lifted => manifold.lifted_orbit_volume(&nd.point),
            };
            nd.weight / vol
        })
        .collect();
    let integral = pairwise_sum(&terms);
    let coefficient = mult * integral / T::TAU().powi(codim as i32);
    Ok(WeylPrediction { coefficient, exponent, x: *x, label, n_nodes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalPrediction<T> {
    pub coefficient: T,
    pub exponent: T,
    /// Relative change of the coefficient when the x-grid is doubled; large
    /// values flag a non-negligible contribution from singular strata.
    pub refinement_change: T,
}

/// `∫_M` of the local coefficient over the principal stratum: the
/// `λ^{(n−κ)/2}` coefficient of `N_γ(λ)` (with `κ` the principal orbit
/// dimension). Gauss–Legendre nodes in the orbit-normal chart direction never
/// touch the singular strata; the orbit direction uses the trapezoid rule.
pub fn global_leading_coefficient<T: Real>(
    manifold: &ModelManifold<T>,
    label: IsotypicLabel,
    n_x_nodes: usize,
    n_fiber_nodes: usize,
    measure: OrbitMeasure,
) -> Result<GlobalPrediction<T>> {
    let n_x = n_x_nodes.max(4);
    let coarse = integrate_over_m(manifold, label, n_x, n_fiber_nodes, measure)?;
    let fine = integrate_over_m(manifold, label, 2 * n_x, n_fiber_nodes, measure)?;
    let change = if fine.0 == T::zero() { (fine.0 - coarse.0).abs() } else { ((fine.0 - coarse.0) / fine.0).abs() };
    if change > T::lit(1e-3) {
        log::warn!("global Weyl coefficient moved by {change} under refinement: singular strata may contribute");
    }
    Ok(GlobalPrediction { coefficient: fine.0, exponent: fine.1, refinement_change: change })
}

fn integrate_over_m<T: Real>(
    manifold: &ModelManifold<T>,
    label: IsotypicLabel,
    n_x: usize,
    n_fiber: usize,
    measure: OrbitMeasure,
) -> Result<(T, T)> {
    // (chart a-range, area density at a); the b direction is periodic.
    let (a_lo, a_hi, b_period) = match manifold {
        ModelManifold::RoundSphere2 => (T::zero(), T::PI(), T::TAU()),
        ModelManifold::SurfaceOfRevolution(p) => (T::zero(), p.length(), T::TAU()),
        _ => (T::zero(), T::one(), T::one()),
    };
    let density = |a: T| -> T {
        match manifold {
            ModelManifold::RoundSphere2 => a.sin(),
            ModelManifold::SurfaceOfRevolution(p) => p.r(a),
            _ => T::one(),
        }
    };
    let ra = gauss_legendre::<T>(n_x).mapped(a_lo, a_hi);
    let rb = periodic_trapezoid(T::zero(), b_period, n_x);
    let rows: Vec<Result<(T, T)>> = ra
        .nodes
        .par_iter()
        .zip(ra.weights.par_iter())
        .map(|(&a, &wa)| {
            let mut exponent = T::zero();
            let mut cells = Vec::with_capacity(rb.len());
            for (&b, &wb) in rb.nodes.iter().zip(&rb.weights) {
                let pred = local_leading_coefficient(manifold, &Point::new(a, b), label, n_fiber, measure)?;
                exponent = pred.exponent;
                cells.push(wb * pred.coefficient);
            }
            Ok((wa * density(a) * pairwise_sum(&cells), exponent))
        })
        .collect();
    let mut vals = Vec::with_capacity(rows.len());
    let mut exponent = T::zero();
    for r in rows {
        let (v, e) = r?;
        vals.push(v);
        exponent = e;
    }
    Ok((pairwise_sum(&vals), exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Profile;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn torus_coefficient() {
        let t = ModelManifold::<f64>::FlatTorus2;
        for m in [0, 3, -7] {
            let p = local_leading_coefficient(&t, &Point::new(0.2, 0.6), IsotypicLabel::Circle(m), 16, OrbitMeasure::BaseOrbit).unwrap();
            assert!((p.coefficient - 1.0 / PI).abs() < 1e-14);
            assert_eq!(p.exponent, 0.5);
        }
        let g = global_leading_coefficient(&t, IsotypicLabel::Circle(2), 8, 16, OrbitMeasure::BaseOrbit).unwrap();
        assert!((g.coefficient - 1.0 / PI).abs() < 1e-13);
    }

    #[test]
    fn sphere_equator_both_measures() {
        let s = ModelManifold::<f64>::RoundSphere2;
        for measure in [OrbitMeasure::BaseOrbit, OrbitMeasure::Lifted] {
            let p = local_leading_coefficient(&s, &Point::new(FRAC_PI_2, 0.0), IsotypicLabel::Circle(0), 32, measure).unwrap();
            assert!((p.coefficient - 1.0 / (2.0 * PI * PI)).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_pole_measures() {
        let s = ModelManifold::<f64>::RoundSphere2;
        let pole = Point::new(0.0, 0.0);
        let lifted = local_leading_coefficient(&s, &pole, IsotypicLabel::Circle(0), 16, OrbitMeasure::Lifted).unwrap();
        assert_eq!(lifted.exponent, 1.0);
        assert!((lifted.coefficient - 1.0 / (4.0 * PI * PI)).abs() < 1e-12);
        let base = local_leading_coefficient(&s, &pole, IsotypicLabel::Circle(0), 16, OrbitMeasure::BaseOrbit).unwrap();
        assert!((base.coefficient - 1.0 / (4.0 * PI)).abs() < 1e-12);
        let zero = local_leading_coefficient(&s, &pole, IsotypicLabel::Circle(1), 16, OrbitMeasure::BaseOrbit).unwrap();
        assert_eq!(zero.coefficient, 0.0);
    }

    #[test]
    fn sphere_global_is_one() {
        let s = ModelManifold::<f64>::RoundSphere2;
        let g = global_leading_coefficient(&s, IsotypicLabel::Circle(4), 32, 16, OrbitMeasure::BaseOrbit).unwrap();
        assert!((g.coefficient - 1.0).abs() < 1e-10);
        assert_eq!(g.exponent, 0.5);
        let rev = ModelManifold::SurfaceOfRevolution(Profile::<f64>::unit_sphere());
        let g = global_leading_coefficient(&rev, IsotypicLabel::Circle(0), 32, 16, OrbitMeasure::BaseOrbit).unwrap();
        assert!((g.coefficient - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cyclic_torus_coefficient() {
        let c = ModelManifold::<f64>::FlatTorus2FiniteCyclic { order: 3 };
        let p = local_leading_coefficient(&c, &Point::new(0.1, 0.2), IsotypicLabel::cyclic(2, 3), 16, OrbitMeasure::BaseOrbit).unwrap();
        assert_eq!(p.exponent, 1.0);
        assert!((p.coefficient - 1.0 / (12.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn quadrature_converges() {
        let s = ModelManifold::<f64>::RoundSphere2;
        for measure in [OrbitMeasure::BaseOrbit, OrbitMeasure::Lifted] {
            let a = local_leading_coefficient(&s, &Point::new(0.7, 0.0), IsotypicLabel::Circle(0), 64, measure).unwrap();
            let b = local_leading_coefficient(&s, &Point::new(0.7, 0.0), IsotypicLabel::Circle(0), 128, measure).unwrap();
            assert!((a.coefficient - b.coefficient).abs() < 1e-8);
        }
    }

    #[test]
    fn blow_up_toward_the_pole() {
        let s = ModelManifold::<f64>::RoundSphere2;
        let thetas: Vec<f64> = (0..8).map(|i| 0.01 * 1.6f64.powi(i)).collect();
        let cs: Vec<f64> = thetas
            .iter()
            .map(|&t| local_leading_coefficient(&s, &Point::new(t, 0.0), IsotypicLabel::Circle(0), 32, OrbitMeasure::BaseOrbit).unwrap().coefficient)
            .collect();
        assert!(cs.windows(2).all(|w| w[1] < w[0]));
        let fit = crate::fit::fit_power_law(&thetas, &cs).unwrap();
        assert!((fit.slope + 1.0).abs() < 0.05, "slope {}", fit.slope);
    }
}
