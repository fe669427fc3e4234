//! Model manifolds with isometric circle or finite cyclic actions: orbit
//! geometry, the momentum pairing, lifted-orbit volumes and discretized
//! cosphere fibers of the momentum zero level.
//!
//! Points are given in chart coordinates `(a, b)`:
//! `(θ, φ)` colatitude/azimuth on the sphere, `(s, φ)` arclength/azimuth on a
//! surface of revolution and `(x₁, x₂)` on the unit flat tori. Covectors are
//! stored as ambient 3-vectors via the metric; on the tori the ambient space
//! is the chart plane `(x₁, x₂, 0)`.

mod profile;

pub use profile::Profile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_periodic_trapezoid, gauss_legendre, periodic_trapezoid};
use crate::scalar::{cross3, dot3, norm3, rotate_z, Real, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelManifold<T> {
    /// Unit sphere in ℝ³, rotations about the z-axis.
    RoundSphere2,
    /// ℝ²/ℤ², the circle translating the first coordinate.
    FlatTorus2,
    /// Rotation surface of an arclength profile.
    SurfaceOfRevolution(Profile<T>),
    /// ℝ²/ℤ² with the cyclic group of order `order` acting by `x₁ ↦ x₁ + 1/order`.
    FlatTorus2FiniteCyclic { order: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point<T> {
    pub a: T,
    pub b: T,
}

impl<T> Point<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b }
    }
}

/// An irreducible character of the acting group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsotypicLabel {
    /// `e^{imt}` of the circle.
    Circle(i32),
    /// `j ↦ e^{2πi·residue·j/order}` of ℤ/order.
    Cyclic { residue: u32, order: u32 },
}

impl IsotypicLabel {
    pub fn cyclic(k: i64, order: u32) -> Self {
        let n = order.max(1) as i64;
        Self::Cyclic { residue: k.rem_euclid(n) as u32, order }
    }

    pub fn d_gamma(&self) -> u32 {
        1
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Circle(0) | Self::Cyclic { residue: 0, .. })
    }

    /// Integer index used for ordering and output: `m` or the residue.
    pub fn index(&self) -> i64 {
        match *self {
            Self::Circle(m) => m as i64,
            Self::Cyclic { residue, .. } => residue as i64,
        }
    }

    /// Character value at the group element of angle `t` (for ℤ/N the
    /// elements are `t = 2πj/N`).
    pub fn character<T: Real>(&self, t: T) -> crate::Complex<T> {
        let arg = match *self {
            Self::Circle(m) => T::of_i(m as i64) * t,
            Self::Cyclic { residue, .. } => T::of(residue as usize) * t,
        };
        crate::Complex::new(arg.cos(), arg.sin())
    }
}

impl std::fmt::Display for IsotypicLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Circle(m) => write!(f, "m={m}"),
            Self::Cyclic { residue, order } => write!(f, "r={residue} mod {order}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Isotropy {
    Full,
    Trivial,
    FiniteCyclic(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitData<T> {
    pub kappa_x: u32,
    pub isotropy: Isotropy,
    /// Geodesic distance to the singular stratum; `+∞` when there is none.
    pub stratum_distance: T,
    /// Riemannian volume of `G·x`: its length for circle orbits and the
    /// number of points for finite orbits of a finite group.
    pub orbit_length: T,
}

impl<T: Real> OrbitData<T> {
    /// `[π_γ|G_x : 1]`, the multiplicity of the trivial representation of the
    /// isotropy group in `γ`.
    pub fn trivial_multiplicity(&self, label: IsotypicLabel) -> T {
        match (self.isotropy, label) {
            (Isotropy::Trivial, _) => T::one(),
            (Isotropy::Full, l) => {
                if l.is_trivial() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            (Isotropy::FiniteCyclic(c), IsotypicLabel::Cyclic { residue, order }) => {
                // Isotropy of order c inside ℤ/order is generated by order/c.
                let step = (order / c.max(1)) as u64;
                if (residue as u64 * step) % order as u64 == 0 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            (Isotropy::FiniteCyclic(_), IsotypicLabel::Circle(m)) => {
                if m == 0 {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }
}

/// A covector at `x`, stored as an ambient vector through the metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentPoint<T> {
    pub x: Point<T>,
    pub xi: Vec3<T>,
    /// Principal symbol `|ξ|²_x`.
    pub p_value: T,
}

/// One node of a discretized cosphere fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberNode<T> {
    pub point: CotangentPoint<T>,
    pub weight: T,
}

impl<T: Real> ModelManifold<T> {
    pub fn dim(&self) -> u32 {
        2
    }

    pub fn operator_degree(&self) -> u32 {
        2
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::RoundSphere2 => "sphere",
            Self::FlatTorus2 => "torus",
            Self::SurfaceOfRevolution(_) => "revolution",
            Self::FlatTorus2FiniteCyclic { .. } => "torus-cyclic",
        }
    }

    /// Order of the acting group if finite.
    pub fn finite_group_order(&self) -> Option<u32> {
        match self {
            Self::FlatTorus2FiniteCyclic { order } => Some(*order),
            _ => None,
        }
    }

    /// Total Riemannian area.
    pub fn area(&self) -> T {
        match self {
            Self::RoundSphere2 => T::lit(4.0) * T::PI(),
            Self::FlatTorus2 | Self::FlatTorus2FiniteCyclic { .. } => T::one(),
            Self::SurfaceOfRevolution(p) => {
                let gl = gauss_legendre::<T>(64);
                let panels = 32;
                let h = p.length() / T::of(panels);
                let mut total = T::zero();
                for i in 0..panels {
                    let lo = h * T::of(i);
                    total = total + gl.mapped(lo, lo + h).integrate(|s| p.r(s));
                }
                T::TAU() * total
            }
        }
    }

    pub fn validate(&self, x: &Point<T>) -> Result<()> {
        if !(x.a.is_finite() && x.b.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite chart coordinates ({}, {})", x.a, x.b)));
        }
        let slack = T::epsilon() * T::lit(16.0);
        match self {
            Self::RoundSphere2 => {
                if x.a < -slack || x.a > T::PI() + slack {
                    return Err(Error::InvalidPoint(format!("colatitude {} outside [0, π]", x.a)));
                }
            }
            Self::SurfaceOfRevolution(p) => {
                if !p.is_closed() && (x.a < -slack || x.a > p.length() + slack) {
                    return Err(Error::InvalidPoint(format!(
                        "arclength {} outside [0, {}]",
                        x.a,
                        p.length()
                    )));
                }
            }
            Self::FlatTorus2 => {}
            Self::FlatTorus2FiniteCyclic { order } => {
                if *order == 0 {
                    return Err(Error::InvalidPoint("cyclic group of order 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Ambient position of `x`.
    pub fn embed(&self, x: &Point<T>) -> Vec3<T> {
        match self {
            Self::RoundSphere2 => {
                let (st, ct) = x.a.sin_cos();
                let (sp, cp) = x.b.sin_cos();
                [st * cp, st * sp, ct]
            }
            Self::SurfaceOfRevolution(p) => {
                let r = p.r(x.a);
                let (sp, cp) = x.b.sin_cos();
                [r * cp, r * sp, p.z(x.a)]
            }
            Self::FlatTorus2 | Self::FlatTorus2FiniteCyclic { .. } => {
                [x.a - x.a.floor(), x.b - x.b.floor(), T::zero()]
            }
        }
    }

    /// Group element of angle `t` applied to `x`. On the tori the circle of
    /// angle `t` translates by `t/(2π)`; the cyclic elements are `t = 2πj/N`.
    pub fn act(&self, t: T, x: &Point<T>) -> Point<T> {
        match self {
            Self::RoundSphere2 | Self::SurfaceOfRevolution(_) => Point::new(x.a, x.b + t),
            Self::FlatTorus2 | Self::FlatTorus2FiniteCyclic { .. } => Point::new(x.a + t / T::TAU(), x.b),
        }
    }

    pub fn act_covector(&self, t: T, pt: &CotangentPoint<T>) -> CotangentPoint<T> {
        let xi = match self {
            Self::RoundSphere2 | Self::SurfaceOfRevolution(_) => rotate_z(t, &pt.xi),
            _ => pt.xi,
        };
        CotangentPoint { x: self.act(t, &pt.x), xi, p_value: pt.p_value }
    }

    fn on_axis(&self, x: &Point<T>) -> bool {
        match self {
            Self::RoundSphere2 => x.a.sin().abs() <= T::epsilon() * T::lit(4.0),
            Self::SurfaceOfRevolution(p) => {
                let tol = T::epsilon() * T::lit(16.0) * (T::one() + p.length());
                (x.a.abs() <= tol && p.endpoint_on_axis(false))
                    || ((x.a - p.length()).abs() <= tol && p.endpoint_on_axis(true))
            }
            _ => false,
        }
    }

    /// Unit tangent frame `(e_a, e_b)` at `x` in ambient coordinates. Away
    /// from the axis `e_a` is normal to the orbit and `e_b` tangent to it;
    /// on the axis both span the horizontal tangent plane.
    pub fn tangent_frame(&self, x: &Point<T>) -> (Vec3<T>, Vec3<T>) {
        let z = T::zero();
        let o = T::one();
        match self {
            Self::RoundSphere2 | Self::SurfaceOfRevolution(_) if self.on_axis(x) => ([o, z, z], [z, o, z]),
            Self::RoundSphere2 => {
                let (st, ct) = x.a.sin_cos();
                let (sp, cp) = x.b.sin_cos();
                ([ct * cp, ct * sp, -st], [-sp, cp, z])
            }
            Self::SurfaceOfRevolution(p) => {
                let (sp, cp) = x.b.sin_cos();
                let dr = p.dr(x.a);
                ([dr * cp, dr * sp, p.dz(x.a)], [-sp, cp, z])
            }
            Self::FlatTorus2 | Self::FlatTorus2FiniteCyclic { .. } => ([z, o, z], [o, z, z]),
        }
    }

    /// Scale factors `(|∂_a|, |∂_b|)` of the chart at `x`.
    fn chart_scales(&self, x: &Point<T>) -> (T, T) {
        match self {
            Self::RoundSphere2 => (T::one(), x.a.sin()),
            Self::SurfaceOfRevolution(p) => (T::one(), p.r(x.a)),
            _ => (T::one(), T::one()),
        }
    }

    /// Ambient images of the coordinate vectors `∂_a, ∂_b`.
    fn chart_vectors(&self, x: &Point<T>) -> (Vec3<T>, Vec3<T>) {
        match self {
            Self::FlatTorus2 | Self::FlatTorus2FiniteCyclic { .. } => {
                ([T::one(), T::zero(), T::zero()], [T::zero(), T::one(), T::zero()])
            }
            _ => {
                let (sa, sb) = self.chart_scales(x);
                let z = T::zero();
                let (sp, cp) = x.b.sin_cos();
                let ea = match self {
                    Self::RoundSphere2 => {
                        let (st, ct) = x.a.sin_cos();
                        [ct * cp, ct * sp, -st]
                    }
                    Self::SurfaceOfRevolution(p) => {
                        let dr = p.dr(x.a);
                        [dr * cp, dr * sp, p.dz(x.a)]
                    }
                    _ => unreachable!(),
                };
                let eb = [-sp, cp, z];
                ([ea[0] * sa, ea[1] * sa, ea[2] * sa], [eb[0] * sb, eb[1] * sb, eb[2] * sb])
            }
        }
    }

    pub fn orbit_data(&self, x: &Point<T>) -> Result<OrbitData<T>> {
        self.validate(x)?;
        let inf = T::infinity();
        Ok(match self {
            Self::RoundSphere2 => {
                let d = x.a.min(T::PI() - x.a).max(T::zero());
                if self.on_axis(x) {
                    OrbitData { kappa_x: 0, isotropy: Isotropy::Full, stratum_distance: T::zero(), orbit_length: T::zero() }
                } else {
                    OrbitData { kappa_x: 1, isotropy: Isotropy::Trivial, stratum_distance: d, orbit_length: T::TAU() * x.a.sin() }
                }
            }
            Self::SurfaceOfRevolution(p) => {
                if self.on_axis(x) {
                    OrbitData { kappa_x: 0, isotropy: Isotropy::Full, stratum_distance: T::zero(), orbit_length: T::zero() }
                } else {
                    let mut d = inf;
                    if p.endpoint_on_axis(false) {
                        d = d.min(x.a);
                    }
                    if p.endpoint_on_axis(true) {
                        d = d.min(p.length() - x.a);
                    }
                    OrbitData { kappa_x: 1, isotropy: Isotropy::Trivial, stratum_distance: d, orbit_length: T::TAU() * p.r(x.a) }
                }
            }
            Self::FlatTorus2 => {
                OrbitData { kappa_x: 1, isotropy: Isotropy::Trivial, stratum_distance: inf, orbit_length: T::one() }
            }
            Self::FlatTorus2FiniteCyclic { order } => OrbitData {
                kappa_x: 0,
                isotropy: Isotropy::Trivial,
                stratum_distance: inf,
                orbit_length: T::of(*order as usize),
            },
        })
    }

    /// Covector with ambient representative `xi` (projected onto `T_xM`).
    pub fn cotangent(&self, x: Point<T>, xi: Vec3<T>) -> Result<CotangentPoint<T>> {
        self.validate(&x)?;
        let (ea, eb) = self.tangent_frame(&x);
        let (ca, cb) = (dot3(&xi, &ea), dot3(&xi, &eb));
        let proj = [ca * ea[0] + cb * eb[0], ca * ea[1] + cb * eb[1], ca * ea[2] + cb * eb[2]];
        Ok(CotangentPoint { x, xi: proj, p_value: ca * ca + cb * cb })
    }

    /// Covector `ξ_a da + ξ_b db` in chart components.
    pub fn cotangent_from_chart_covector(&self, x: Point<T>, xi: [T; 2]) -> Result<CotangentPoint<T>> {
        self.validate(&x)?;
        let (sa, sb) = self.chart_scales(&x);
        if sb == T::zero() && xi[1] != T::zero() {
            return Err(Error::InvalidPoint("azimuthal covector component on the axis".into()));
        }
        let (va, vb) = self.chart_vectors(&x);
        let ca = xi[0] / (sa * sa);
        let cb = if sb == T::zero() { T::zero() } else { xi[1] / (sb * sb) };
        let amb = [ca * va[0] + cb * vb[0], ca * va[1] + cb * vb[1], ca * va[2] + cb * vb[2]];
        self.cotangent(x, amb)
    }

    /// Metric dual `v♭` of the tangent vector `v_a ∂_a + v_b ∂_b`.
    pub fn cotangent_from_chart_vector(&self, x: Point<T>, v: [T; 2]) -> Result<CotangentPoint<T>> {
        self.validate(&x)?;
        let (va, vb) = self.chart_vectors(&x);
        let amb = [
            v[0] * va[0] + v[1] * vb[0],
            v[0] * va[1] + v[1] * vb[1],
            v[0] * va[2] + v[1] * vb[2],
        ];
        self.cotangent(x, amb)
    }

    /// Fundamental vector field of the circle generator at `x`.
    pub fn fundamental_field(&self, x: &Point<T>) -> Vec3<T> {
        match self {
            Self::RoundSphere2 | Self::SurfaceOfRevolution(_) => {
                let p = self.embed(x);
                cross3(&[T::zero(), T::zero(), T::one()], &p)
            }
            Self::FlatTorus2 => [T::one() / T::TAU(), T::zero(), T::zero()],
            Self::FlatTorus2FiniteCyclic { .. } => [T::zero(); 3],
        }
    }

    /// `⟨ξ, X̃_x⟩`. The torus generator is normalized to the unit speed
    /// translation `∂x₁` so that the pairing is `ξ₁`.
    pub fn momentum_pairing(&self, pt: &CotangentPoint<T>) -> T {
        match self {
            Self::FlatTorus2 => pt.xi[0],
            Self::FlatTorus2FiniteCyclic { .. } => T::zero(),
            _ => dot3(&pt.xi, &self.fundamental_field(&pt.x)),
        }
    }

    /// Length of the lifted orbit `t ↦ (g_t·x, g_t·ξ)` in the embedding
    /// metric of the tangent bundle (a count of points for finite groups).
    pub fn lifted_orbit_volume(&self, pt: &CotangentPoint<T>) -> T {
        match self {
            Self::RoundSphere2 => {
                let p = self.embed(&pt.x);
                let h = p[0] * p[0] + p[1] * p[1] + pt.xi[0] * pt.xi[0] + pt.xi[1] * pt.xi[1];
                T::TAU() * h.sqrt()
            }
            Self::FlatTorus2 => T::one(),
            Self::FlatTorus2FiniteCyclic { order } => T::of(*order as usize),
            Self::SurfaceOfRevolution(_) => {
                let p = self.embed(&pt.x);
                let zhat = [T::zero(), T::zero(), T::one()];
                let speed = |t: T| {
                    let dx = cross3(&zhat, &rotate_z(t, &p));
                    let dxi = cross3(&zhat, &rotate_z(t, &pt.xi));
                    (dot3(&dx, &dx) + dot3(&dxi, &dxi)).sqrt()
                };
                adaptive_periodic_trapezoid(speed, T::zero(), T::TAU(), T::lit(1e-8))
            }
        }
    }

    /// Quadrature of `{ξ ∈ Ann(T_x(G·x)) : |ξ| < 1}`: a Gauss–Legendre segment
    /// when the orbit is one-dimensional, a polar disc otherwise.
    pub fn cosphere_fiber_slice(&self, x: &Point<T>, n_nodes: usize) -> Result<Vec<FiberNode<T>>> {
        if n_nodes < 2 {
            return Err(Error::Domain(format!("cosphere slice needs at least 2 nodes, got {n_nodes}")));
        }
        let od = self.orbit_data(x)?;
        let (ea, eb) = self.tangent_frame(x);
        let gl = gauss_legendre::<T>(n_nodes);
        let mut out = Vec::new();
        if od.kappa_x == 1 {
            for (&c, &w) in gl.nodes.iter().zip(&gl.weights) {
                let xi = [c * ea[0], c * ea[1], c * ea[2]];
                out.push(FiberNode { point: CotangentPoint { x: *x, xi, p_value: c * c }, weight: w });
            }
        } else {
            let radial = gl.mapped(T::zero(), T::one());
            let angular = periodic_trapezoid(T::zero(), T::TAU(), 2 * n_nodes);
            for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                for (&a, &wa) in angular.nodes.iter().zip(&angular.weights) {
                    let (s, c) = a.sin_cos();
                    let xi = [
                        r * (c * ea[0] + s * eb[0]),
                        r * (c * ea[1] + s * eb[1]),
                        r * (c * ea[2] + s * eb[2]),
                    ];
                    out.push(FiberNode {
                        point: CotangentPoint { x: *x, xi, p_value: r * r },
                        weight: wr * wa * r,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Euclidean norm of the ambient representative.
    pub fn covector_norm(&self, pt: &CotangentPoint<T>) -> T {
        norm3(&pt.xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

    type M = ModelManifold<f64>;

    #[test]
    fn sphere_orbit_data() {
        let s = M::RoundSphere2;
        let pole = s.orbit_data(&Point::new(0.0, 0.0)).unwrap();
        assert_eq!(pole.kappa_x, 0);
        assert_eq!(pole.isotropy, Isotropy::Full);
        assert_eq!(pole.trivial_multiplicity(IsotypicLabel::Circle(0)), 1.0);
        assert_eq!(pole.trivial_multiplicity(IsotypicLabel::Circle(3)), 0.0);
        let eq = s.orbit_data(&Point::new(FRAC_PI_2, 1.0)).unwrap();
        assert_eq!(eq.kappa_x, 1);
        assert_eq!(eq.isotropy, Isotropy::Trivial);
        assert!((eq.stratum_distance - FRAC_PI_2).abs() < 1e-15);
        assert!((eq.orbit_length - TAU).abs() < 1e-15);
        assert!(matches!(s.orbit_data(&Point::new(3.5, 0.0)), Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn torus_orbit_data() {
        let t = M::FlatTorus2;
        let od = t.orbit_data(&Point::new(0.3, 0.9)).unwrap();
        assert_eq!(od.kappa_x, 1);
        assert!(od.stratum_distance.is_infinite());
        assert_eq!(od.orbit_length, 1.0);
        let c = M::FlatTorus2FiniteCyclic { order: 3 };
        let od = c.orbit_data(&Point::new(0.3, 0.9)).unwrap();
        assert_eq!(od.kappa_x, 0);
        assert_eq!(od.orbit_length, 3.0);
    }

    #[test]
    fn momentum_pairing_examples() {
        let s = M::RoundSphere2;
        let pt = s.cotangent_from_chart_covector(Point::new(FRAC_PI_2, 0.4), [0.7, 0.0]).unwrap();
        assert!(s.momentum_pairing(&pt).abs() < 1e-15);
        let t = M::FlatTorus2;
        let pt = t.cotangent_from_chart_covector(Point::new(0.2, 0.1), [0.3, -0.8]).unwrap();
        assert!((t.momentum_pairing(&pt) - 0.3).abs() < 1e-15);
        // The metric dual of ∂φ pairs to |∂φ|² = sin²θ.
        let pt = s.cotangent_from_chart_vector(Point::new(FRAC_PI_4, 0.0), [0.0, 1.0]).unwrap();
        assert!((s.momentum_pairing(&pt) - 0.5).abs() < 1e-15);
        // The covector dφ itself pairs to 1.
        let pt = s.cotangent_from_chart_covector(Point::new(FRAC_PI_4, 0.0), [0.0, 1.0]).unwrap();
        assert!((s.momentum_pairing(&pt) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lifted_orbit_volume_examples() {
        let t = M::FlatTorus2;
        let pt = t.cotangent(Point::new(0.5, 0.5), [0.3, 0.2, 0.0]).unwrap();
        assert_eq!(t.lifted_orbit_volume(&pt), 1.0);
        let s = M::RoundSphere2;
        let pt = s.cotangent(Point::new(FRAC_PI_2, 0.0), [0.0, 0.0, -1.0]).unwrap();
        assert!((s.lifted_orbit_volume(&pt) - TAU).abs() < 1e-14);
        let pt = s.cotangent(Point::new(0.0, 0.0), [0.6, 0.8, 0.0]).unwrap();
        assert!((s.lifted_orbit_volume(&pt) - TAU).abs() < 1e-14);
    }

    #[test]
    fn fiber_slice_weights() {
        let s = M::RoundSphere2;
        let nodes = s.cosphere_fiber_slice(&Point::new(FRAC_PI_2, 0.0), 16).unwrap();
        assert_eq!(nodes.len(), 16);
        let w: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((w - 2.0).abs() < 1e-13);
        for n in &nodes {
            assert!(s.momentum_pairing(&n.point).abs() < 1e-15);
            assert!(n.point.p_value < 1.0);
        }
        let nodes = s.cosphere_fiber_slice(&Point::new(0.0, 0.0), 12).unwrap();
        let w: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((w - PI).abs() < 1e-12);
        let t = M::FlatTorus2;
        let nodes = t.cosphere_fiber_slice(&Point::new(0.1, 0.2), 16).unwrap();
        assert!(nodes.iter().all(|n| n.point.xi[0] == 0.0));
        let w: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((w - 2.0).abs() < 1e-13);
        assert!(t.cosphere_fiber_slice(&Point::new(0.1, 0.2), 1).is_err());
    }

    #[test]
    fn sphere_profile_agrees_with_round_sphere() {
        let rev = M::SurfaceOfRevolution(Profile::unit_sphere());
        let s = M::RoundSphere2;
        for &th in &[0.2, 1.0, FRAC_PI_2, 2.5] {
            let (a, b) = (rev.orbit_data(&Point::new(th, 0.3)).unwrap(), s.orbit_data(&Point::new(PI - th, 0.3)).unwrap());
            assert_eq!(a.kappa_x, b.kappa_x);
            assert!((a.orbit_length - b.orbit_length).abs() < 1e-12);
            assert!((a.stratum_distance - b.stratum_distance).abs() < 1e-12);
            let p = rev.cotangent_from_chart_covector(Point::new(th, 0.3), [0.4, 0.2]).unwrap();
            let q = s.cotangent(Point::new(PI - th, 0.3), p.xi).unwrap();
            assert!((rev.lifted_orbit_volume(&p) - s.lifted_orbit_volume(&q)).abs() < 1e-8);
        }
        let pole = rev.orbit_data(&Point::new(0.0, 0.0)).unwrap();
        assert_eq!(pole.kappa_x, 0);
    }

    #[test]
    fn orbit_length_tracks_stratum_distance() {
        let s = M::RoundSphere2;
        for i in 1..50 {
            let th = PI * i as f64 / 50.0;
            let od = s.orbit_data(&Point::new(th, 0.0)).unwrap();
            assert!((od.orbit_length - TAU * od.stratum_distance.sin()).abs() < 1e-14);
        }
    }
}
