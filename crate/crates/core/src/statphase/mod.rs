//! Oscillatory integrals `I(μ) = ∫ e^{iμψ} a dM` and their stationary-phase
//! asymptotics.
//!
//! Three domains are supported: boxes in `ℝ^d`, the unit sphere `S²` and the
//! product `S² × S¹` (the circle acting by rotation about the z-axis). Phase
//! and amplitude are closures over point coordinates: `x ∈ ℝ^d` for a box,
//! `ω ∈ ℝ³` with `|ω| = 1` for the sphere and `[ω₀, ω₁, ω₂, g]` for the
//! product.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre, pairwise_sum_complex, periodic_trapezoid, Rule};
use crate::scalar::{cross3, norm3, Complex, Real, Vec3};

mod critical;
mod expansion;
mod hybrid;

pub use critical::{critical_set_scan, Classification, CriticalPoint, CriticalScanResult, ScanComponent, ScanConfig};
pub use expansion::{caustic_interpolation, stationary_expansion, CausticValue, SPExpansion, SPTerm};
pub use hybrid::{
    envelope_ladder, finite_group_integral, hybrid_decay_fit, hybrid_integral, interpolation_band, octave_envelope,
    hybrid_problem, orbit_distance, BandSeries, FiniteGroupIntegral, HybridDecay, HybridOptions, InterpolationBand,
};

pub type PhaseFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
pub type AmplitudeFn<T> = Arc<dyn Fn(&[T]) -> Complex<T> + Send + Sync>;
/// Polar axis of the sphere factor as a function of the circle angle `g`.
pub type AxisFn<T> = Arc<dyn Fn(T) -> Vec3<T> + Send + Sync>;
pub type CurveFn<T> = Arc<dyn Fn(T) -> Vec<T> + Send + Sync>;

/// Minimum nodes per wavelength accepted by the resolution check.
pub const MIN_NODES_PER_WAVELENGTH: f64 = 6.0;
const DEFAULT_MIN_NODES: usize = 128;
const PANEL_ORDER: usize = 20;

#[derive(Clone)]
pub enum Domain<T> {
    /// Axis-aligned box `Π [lo_i, hi_i]`.
    Box { lo: Vec<T>, hi: Vec<T> },
    /// Unit sphere in polar coordinates `t = ⟨ω, axis⟩ ∈ [−1, 1]` and an
    /// azimuth. The default axis is `ẑ`.
    Sphere { axis: Option<Vec3<T>> },
    /// `S² × S¹` with measure `dω dg`; the sphere axis may depend on `g`.
    SphereCircle { axis: Option<AxisFn<T>> },
}

impl<T: Real> Domain<T> {
    /// Dimension of the integration manifold.
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Sphere { .. } => 2,
            Domain::SphereCircle { .. } => 3,
        }
    }

    /// Length of the point coordinate vectors handed to phase and amplitude.
    pub fn coord_len(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Sphere { .. } => 3,
            Domain::SphereCircle { .. } => 4,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Domain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Box { lo, hi } => f.debug_struct("Box").field("lo", lo).field("hi", hi).finish(),
            Domain::Sphere { axis } => f.debug_struct("Sphere").field("axis", axis).finish(),
            Domain::SphereCircle { axis } => {
                f.debug_struct("SphereCircle").field("axis", &axis.as_ref().map(|_| "<fn>")).finish()
            }
        }
    }
}

/// Node counts per integration direction.
///
/// Box directions use composite Gauss–Legendre, the polar direction of the
/// sphere uses Gauss–Legendre in `t`, azimuth and circle use the periodic
/// trapezoid. Direction order: box axes; `(t, φ)` on the sphere;
/// `(g, t, φ)` on `S² × S¹`.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// Counts derived from the phase variation: `per_wavelength` nodes per
    /// wavelength of `e^{iμψ}` (at least 6) and at least `min_nodes[i]`
    /// nodes (128 where not given).
    Auto { per_wavelength: f64, min_nodes: Vec<usize> },
    /// Explicit counts; rejected if they under-resolve the phase.
    Fixed(Vec<usize>),
}

impl Default for Grid {
    fn default() -> Self {
        Grid::Auto { per_wavelength: 8.0, min_nodes: Vec::new() }
    }
}

/// One component of a declared critical manifold, in point coordinates.
#[derive(Clone)]
pub enum CriticalComponent<T> {
    Point(Vec<T>),
    /// Closed curve `s ↦ param(s)`, `s ∈ [0, period)`, integrated with
    /// `nodes` trapezoid nodes.
    Curve { param: CurveFn<T>, period: T, nodes: usize },
}

impl<T: fmt::Debug> fmt::Debug for CriticalComponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalComponent::Point(p) => f.debug_tuple("Point").field(p).finish(),
            CriticalComponent::Curve { period, nodes, .. } => {
                f.debug_struct("Curve").field("period", period).field("nodes", nodes).finish()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum CriticalManifold<T> {
    Declared(Vec<CriticalComponent<T>>),
    /// Not declared; only [`critical_set_scan`] can locate it.
    Scan,
}

#[derive(Clone)]
pub struct StationaryPhaseProblem<T> {
    pub phase: PhaseFn<T>,
    pub amplitude: AmplitudeFn<T>,
    /// Bounding box of the amplitude support (box domains only).
    pub support: Option<(Vec<T>, Vec<T>)>,
    pub domain: Domain<T>,
    pub grid: Grid,
    pub critical: CriticalManifold<T>,
    /// Per-direction bounds on `|∂ψ|` in the integration coordinates;
    /// estimated by sampling when absent.
    pub lipschitz: Option<Vec<T>>,
}

impl<T: fmt::Debug> fmt::Debug for StationaryPhaseProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StationaryPhaseProblem")
            .field("domain", &self.domain)
            .field("grid", &self.grid)
            .field("support", &self.support)
            .field("critical", &self.critical)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl<T: Real> StationaryPhaseProblem<T> {
    pub fn new<P, A>(phase: P, amplitude: A, domain: Domain<T>) -> Self
    where
        P: Fn(&[T]) -> T + Send + Sync + 'static,
        A: Fn(&[T]) -> Complex<T> + Send + Sync + 'static,
    {
        StationaryPhaseProblem {
            phase: Arc::new(phase),
            amplitude: Arc::new(amplitude),
            support: None,
            domain,
            grid: Grid::default(),
            critical: CriticalManifold::Scan,
            lipschitz: None,
        }
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_critical(mut self, components: Vec<CriticalComponent<T>>) -> Self {
        self.critical = CriticalManifold::Declared(components);
        self
    }

    pub fn with_support(mut self, lo: Vec<T>, hi: Vec<T>) -> Self {
        self.support = Some((lo, hi));
        self
    }

    pub fn with_lipschitz(mut self, bounds: Vec<T>) -> Self {
        self.lipschitz = Some(bounds);
        self
    }

    /// `ψ = x²/2`, `a = e^{−x²/2}` on `[−12, 12]`, critical point 0. The
    /// exact integral is `√(2π/(1 − iμ))`.
    pub fn gaussian() -> Self {
        let h = T::lit(0.5);
        Self::new(
            move |x: &[T]| h * x[0] * x[0],
            move |x: &[T]| Complex::new((-h * x[0] * x[0]).exp(), T::zero()),
            Domain::Box { lo: vec![T::lit(-12.0)], hi: vec![T::lit(12.0)] },
        )
        .with_critical(vec![CriticalComponent::Point(vec![T::zero()])])
    }

    /// Plane wave `ψ = ⟨v, ω⟩` on `S²` with amplitude 1 and the polar axis
    /// along `v`. The exact integral is `4π sin(μ|v|)/(μ|v|)`; the critical
    /// points are `±v/|v|`.
    pub fn sphere_plane_wave(v: Vec3<T>) -> Result<Self> {
        let r = norm3(&v);
        if !(r > T::zero()) {
            return Err(Error::Domain("plane wave needs v != 0".into()));
        }
        let u = [v[0] / r, v[1] / r, v[2] / r];
        let neg = [-u[0], -u[1], -u[2]];
        Ok(Self::new(
            move |w: &[T]| v[0] * w[0] + v[1] * w[1] + v[2] * w[2],
            |_: &[T]| Complex::new(T::one(), T::zero()),
            Domain::Sphere { axis: Some(u) },
        )
        .with_critical(vec![CriticalComponent::Point(u.to_vec()), CriticalComponent::Point(neg.to_vec())]))
    }

    fn validate(&self) -> Result<()> {
        match &self.domain {
            Domain::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::Domain("box bounds must be nonempty and of equal length".into()));
                }
                if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] < hi[i])) {
                    return Err(Error::Domain(format!("box direction {i}: lo must be below hi")));
                }
                if let Some((slo, shi)) = &self.support {
                    if slo.len() != lo.len() || shi.len() != lo.len() {
                        return Err(Error::Domain("support box has the wrong dimension".into()));
                    }
                    if (0..lo.len()).any(|i| !(slo[i] > lo[i] && shi[i] < hi[i])) {
                        return Err(Error::Domain("amplitude support must lie strictly inside the box".into()));
                    }
                }
            }
            Domain::Sphere { axis: Some(a) } if !(norm3(a) > T::zero()) => {
                return Err(Error::Domain("sphere axis must be nonzero".into()));
            }
            _ => {}
        }
        let d = self.domain.dim();
        let bad_len = match &self.grid {
            Grid::Fixed(n) => n.len() != d || n.contains(&0),
            Grid::Auto { per_wavelength, min_nodes } => {
                if !(*per_wavelength >= MIN_NODES_PER_WAVELENGTH) {
                    return Err(Error::Domain(format!(
                        "per_wavelength {per_wavelength} below the minimum {MIN_NODES_PER_WAVELENGTH}"
                    )));
                }
                !min_nodes.is_empty() && min_nodes.len() != d
            }
        };
        if bad_len {
            return Err(Error::Domain(format!("grid must give {d} positive node counts")));
        }
        if let Some(l) = &self.lipschitz {
            if l.len() != d {
                return Err(Error::Domain(format!("lipschitz bounds must have {d} entries")));
            }
        }
        Ok(())
    }

    fn directions(&self) -> Vec<Direction<T>> {
        let gl = |lo: T, hi: T| Direction { lo, extent: hi - lo, periodic: false };
        let per = Direction { lo: T::zero(), extent: T::TAU(), periodic: true };
        match &self.domain {
            Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(&a, &b)| gl(a, b)).collect(),
            Domain::Sphere { .. } => vec![gl(-T::one(), T::one()), per],
            Domain::SphereCircle { .. } => vec![per, gl(-T::one(), T::one()), per],
        }
    }

    /// Point coordinates from integration parameters.
    fn point(&self, params: &[T]) -> Vec<T> {
        match &self.domain {
            Domain::Box { .. } => params.to_vec(),
            Domain::Sphere { axis } => {
                let f = Frame::new(axis.unwrap_or([T::zero(), T::zero(), T::one()]));
                f.omega(params[0], params[1]).to_vec()
            }
            Domain::SphereCircle { axis } => {
                let g = params[0];
                let f = Frame::new(circle_axis(axis, g));
                let w = f.omega(params[1], params[2]);
                vec![w[0], w[1], w[2], g]
            }
        }
    }

    /// Per-direction variation rate of the phase in integration parameters.
    fn rates(&self) -> Vec<T> {
        if let Some(l) = &self.lipschitz {
            return l.iter().map(|v| v.abs()).collect();
        }
        let dirs = self.directions();
        let d = dirs.len();
        const ALONG: usize = 33;
        let across: usize = if d <= 3 { 9 } else { 5 };
        let sample = |dir: &Direction<T>, j: usize, n: usize, cell_centred: bool| -> T {
            let fj = if cell_centred || dir.periodic { T::of(j) + T::lit(0.5) } else { T::of(j) };
            let denom = if cell_centred || dir.periodic { T::of(n) } else { T::of(n - 1) };
            dir.lo + dir.extent * fj / denom
        };
        (0..d)
            .map(|i| {
                let others: Vec<usize> = (0..d).filter(|&k| k != i).collect();
                let combos = across.pow(others.len() as u32);
                let mut best = T::zero();
                let mut params = vec![T::zero(); d];
                for c in 0..combos {
                    let mut rem = c;
                    for &k in &others {
                        params[k] = sample(&dirs[k], rem % across, across, true);
                        rem /= across;
                    }
                    let n = if dirs[i].periodic { ALONG - 1 } else { ALONG };
                    let values: Vec<T> = (0..n)
                        .map(|j| {
                            params[i] = sample(&dirs[i], j, n, false);
                            (self.phase)(&self.point(&params))
                        })
                        .collect();
                    let step = if dirs[i].periodic { dirs[i].extent / T::of(n) } else { dirs[i].extent / T::of(n - 1) };
                    let pairs = if dirs[i].periodic { n } else { n - 1 };
                    for j in 0..pairs {
                        let diff = (values[(j + 1) % n] - values[j]).abs() / step;
                        if diff > best {
                            best = diff;
                        }
                    }
                }
                best * T::lit(1.1)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Direction<T> {
    lo: T,
    extent: T,
    periodic: bool,
}

fn circle_axis<T: Real>(axis: &Option<AxisFn<T>>, g: T) -> Vec3<T> {
    let z = [T::zero(), T::zero(), T::one()];
    match axis {
        Some(f) => {
            let a = f(g);
            if norm3(&a) > T::lit(1e-300).max(T::min_positive_value()) {
                a
            } else {
                z
            }
        }
        None => z,
    }
}

/// Orthonormal frame `(a, b, c)` with `a` along the polar axis.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame<T> {
    pub a: Vec3<T>,
    pub b: Vec3<T>,
    pub c: Vec3<T>,
}

impl<T: Real> Frame<T> {
    pub(crate) fn new(axis: Vec3<T>) -> Self {
        let r = norm3(&axis);
        let a = [axis[0] / r, axis[1] / r, axis[2] / r];
        let (b, c) = tangent_pair(&a);
        Frame { a, b, c }
    }

    #[inline]
    fn omega(&self, t: T, phi: T) -> Vec3<T> {
        let s = (T::one() - t * t).max(T::zero()).sqrt();
        let (sp, cp) = phi.sin_cos();
        self.at(t, s, cp, sp)
    }

    #[inline]
    fn at(&self, t: T, s: T, cp: T, sp: T) -> Vec3<T> {
        [
            t * self.a[0] + s * (cp * self.b[0] + sp * self.c[0]),
            t * self.a[1] + s * (cp * self.b[1] + sp * self.c[1]),
            t * self.a[2] + s * (cp * self.b[2] + sp * self.c[2]),
        ]
    }
}

/// Orthonormal basis of the plane orthogonal to the unit vector `a`.
pub(crate) fn tangent_pair<T: Real>(a: &Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    let k = (0..3)
        .min_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let mut e = [T::zero(); 3];
    e[k] = T::one();
    let b = cross3(a, &e);
    let nb = norm3(&b);
    let b = [b[0] / nb, b[1] / nb, b[2] / nb];
    let c = cross3(a, &b);
    (b, c)
}

/// Node counts used by [`oscillatory_integral`] at frequency `mu`.
pub fn resolve_grid<T: Real>(problem: &StationaryPhaseProblem<T>, mu: T) -> Result<Vec<usize>> {
    problem.validate()?;
    let dirs = problem.directions();
    let rates = problem.rates();
    let mu = mu.abs().as_f64();
    let wavelengths: Vec<f64> = dirs
        .iter()
        .zip(&rates)
        .map(|(d, r)| mu * r.as_f64() * d.extent.as_f64() / std::f64::consts::TAU)
        .collect();
    match &problem.grid {
        Grid::Fixed(n) => {
            for (i, (&ni, &w)) in n.iter().zip(&wavelengths).enumerate() {
                let need = (MIN_NODES_PER_WAVELENGTH * w).ceil() as usize;
                if ni < need {
                    return Err(Error::Resolution(format!(
                        "direction {i}: {ni} nodes for {w:.1} wavelengths at mu={mu}, need at least {need}"
                    )));
                }
            }
            Ok(n.clone())
        }
        Grid::Auto { per_wavelength, min_nodes } => Ok(dirs
            .iter()
            .zip(&wavelengths)
            .enumerate()
            .map(|(i, (d, &w))| {
                let floor = min_nodes.get(i).copied().unwrap_or(DEFAULT_MIN_NODES).max(1);
                let want = ((per_wavelength * w).ceil() as usize).max(floor);
                if d.periodic {
                    want + want % 2
                } else if want > 64 {
                    want.div_ceil(PANEL_ORDER) * PANEL_ORDER
                } else {
                    want
                }
            })
            .collect()),
    }
}

fn rule_for<T: Real>(d: &Direction<T>, n: usize) -> Rule<T> {
    if d.periodic {
        periodic_trapezoid(d.lo, d.extent, n)
    } else if n <= 64 {
        gauss_legendre::<T>(n).mapped(d.lo, d.lo + d.extent)
    } else {
        let panels = n.div_ceil(PANEL_ORDER);
        composite_gauss_legendre(d.lo, d.lo + d.extent, panels, n.div_ceil(panels))
    }
}

/// `∫ e^{iμψ} a dM` by product quadrature. Fails with a resolution error if
/// a fixed grid has fewer than six nodes per wavelength in some direction.
pub fn oscillatory_integral<T: Real>(problem: &StationaryPhaseProblem<T>, mu: T) -> Result<Complex<T>> {
    let counts = resolve_grid(problem, mu)?;
    let dirs = problem.directions();
    let rules: Vec<Rule<T>> = dirs.iter().zip(&counts).map(|(d, &n)| rule_for(d, n)).collect();
    let phase = &problem.phase;
    let amp = &problem.amplitude;
    let term = |p: &[T], w: T| -> Complex<T> {
        let (s, c) = (mu * phase(p)).sin_cos();
        Complex::new(c, s) * amp(p) * w
    };
    let slabs: Vec<Complex<T>> = match &problem.domain {
        Domain::Box { .. } => {
            let d = rules.len();
            rules[0]
                .nodes
                .par_iter()
                .zip(rules[0].weights.par_iter())
                .map(|(&x0, &w0)| {
                    let mut coords = vec![T::zero(); d];
                    coords[0] = x0;
                    box_sum(&rules, 1, &mut coords, w0, &term)
                })
                .collect()
        }
        Domain::Sphere { axis } => {
            let frame = Frame::new(axis.unwrap_or([T::zero(), T::zero(), T::one()]));
            let trig = azimuth_table(&rules[1]);
            rules[0]
                .nodes
                .par_iter()
                .zip(rules[0].weights.par_iter())
                .map(|(&t, &wt)| {
                    let s = (T::one() - t * t).max(T::zero()).sqrt();
                    let row: Vec<Complex<T>> = trig
                        .iter()
                        .map(|&(cp, sp, wp)| term(&frame.at(t, s, cp, sp), wt * wp))
                        .collect();
                    pairwise_sum_complex(&row)
                })
                .collect()
        }
        Domain::SphereCircle { axis } => {
            let trig = azimuth_table(&rules[2]);
            let polar = &rules[1];
            rules[0]
                .nodes
                .par_iter()
                .zip(rules[0].weights.par_iter())
                .map(|(&g, &wg)| {
                    let frame = Frame::new(circle_axis(axis, g));
                    let mut rows = Vec::with_capacity(polar.len());
                    let mut row = Vec::with_capacity(trig.len());
                    for (&t, &wt) in polar.nodes.iter().zip(&polar.weights) {
                        let s = (T::one() - t * t).max(T::zero()).sqrt();
                        row.clear();
                        for &(cp, sp, wp) in &trig {
                            let w = frame.at(t, s, cp, sp);
                            row.push(term(&[w[0], w[1], w[2], g], wg * wt * wp));
                        }
                        rows.push(pairwise_sum_complex(&row));
                    }
                    pairwise_sum_complex(&rows)
                })
                .collect()
        }
    };
    Ok(pairwise_sum_complex(&slabs))
}

fn azimuth_table<T: Real>(rule: &Rule<T>) -> Vec<(T, T, T)> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&p, &w)| {
            let (s, c) = p.sin_cos();
            (c, s, w)
        })
        .collect()
}

fn box_sum<T: Real, F: Fn(&[T], T) -> Complex<T>>(
    rules: &[Rule<T>],
    depth: usize,
    coords: &mut Vec<T>,
    weight: T,
    term: &F,
) -> Complex<T> {
    if depth == rules.len() {
        return term(coords, weight);
    }
    let r = &rules[depth];
    let mut parts = Vec::with_capacity(r.len());
    for (&x, &w) in r.nodes.iter().zip(&r.weights) {
        coords[depth] = x;
        parts.push(box_sum(rules, depth + 1, coords, weight * w, term));
    }
    pairwise_sum_complex(&parts)
}

/// Tangent basis of the domain at `p`, in point coordinates.
pub(crate) fn tangent_basis<T: Real>(domain: &Domain<T>, p: &[T]) -> Vec<Vec<T>> {
    match domain {
        Domain::Box { lo, .. } => (0..lo.len())
            .map(|i| (0..lo.len()).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect(),
        Domain::Sphere { .. } => {
            let w = unit3(&[p[0], p[1], p[2]]);
            let (b, c) = tangent_pair(&w);
            vec![b.to_vec(), c.to_vec()]
        }
        Domain::SphereCircle { .. } => {
            let w = unit3(&[p[0], p[1], p[2]]);
            let (b, c) = tangent_pair(&w);
            let z = T::zero();
            vec![vec![b[0], b[1], b[2], z], vec![c[0], c[1], c[2], z], vec![z, z, z, T::one()]]
        }
    }
}

/// Projects a perturbed point back onto the domain.
pub(crate) fn retract<T: Real>(domain: &Domain<T>, p: &mut [T]) {
    if !matches!(domain, Domain::Box { .. }) {
        let w = unit3(&[p[0], p[1], p[2]]);
        p[..3].copy_from_slice(&w);
    }
}

pub(crate) fn unit3<T: Real>(a: &Vec3<T>) -> Vec3<T> {
    let r = norm3(a);
    [a[0] / r, a[1] / r, a[2] / r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian_exact(mu: f64) -> Complex<f64> {
        (Complex::new(2.0 * PI, 0.0) / Complex::new(1.0, -mu)).sqrt()
    }

    #[test]
    fn gaussian_matches_closed_form() {
        let p = StationaryPhaseProblem::<f64>::gaussian();
        for mu in [0.0, 1.0, 10.0, 100.0] {
            let got = oscillatory_integral(&p, mu).unwrap();
            let want = gaussian_exact(mu);
            assert!((got - want).norm() <= 1e-9 * want.norm(), "mu={mu} got={got} want={want}");
        }
        assert!((oscillatory_integral(&p, 10.0).unwrap().norm() - 0.790696).abs() < 1e-6);
    }

    #[test]
    fn sphere_plane_wave_matches_sinc() {
        for v in [[0.0, 0.0, 1.0], [0.6, -0.8, 0.0], [0.3, 0.4, 1.2]] {
            let p = StationaryPhaseProblem::<f64>::sphere_plane_wave(v).unwrap();
            let r = norm3(&v);
            for mu in [1.0, 50.0, 300.0] {
                let got = oscillatory_integral(&p, mu).unwrap();
                let want = 4.0 * PI * (mu * r).sin() / (mu * r);
                assert!((got.re - want).abs() < 1e-10 && got.im.abs() < 1e-10, "{v:?} mu={mu} {got} {want}");
            }
        }
    }

    #[test]
    fn unaligned_sphere_axis() {
        let v = [0.6, -0.8, 0.0];
        let mut p = StationaryPhaseProblem::<f64>::sphere_plane_wave(v).unwrap();
        p.domain = Domain::Sphere { axis: None };
        let got = oscillatory_integral(&p, 50.0).unwrap();
        let want = 4.0 * PI * 50f64.sin() / 50.0;
        assert!((got.re - want).abs() < 1e-9, "{got} {want}");
    }

    #[test]
    fn fixed_grid_under_resolution_is_an_error() {
        let p = StationaryPhaseProblem::<f64>::gaussian().with_grid(Grid::Fixed(vec![100]));
        assert!(matches!(oscillatory_integral(&p, 100.0), Err(Error::Resolution(_))));
        assert!(oscillatory_integral(&p, 0.2).is_ok());
    }

    #[test]
    fn refinement_is_stable() {
        let p = StationaryPhaseProblem::<f64>::gaussian();
        let n = resolve_grid(&p, 10.0).unwrap()[0];
        let a = oscillatory_integral(&p.clone().with_grid(Grid::Fixed(vec![n])), 10.0).unwrap();
        let b = oscillatory_integral(&p.with_grid(Grid::Fixed(vec![2 * n])), 10.0).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn support_must_be_interior() {
        let p = StationaryPhaseProblem::<f64>::gaussian().with_support(vec![-12.0], vec![3.0]);
        assert!(matches!(oscillatory_integral(&p, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn two_dimensional_box() {
        let p = StationaryPhaseProblem::<f64>::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] - x[1] * x[1]),
            |x: &[f64]| Complex::new((-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0),
            Domain::Box { lo: vec![-10.0, -10.0], hi: vec![10.0, 10.0] },
        );
        let mu = 3.0;
        let want = gaussian_exact(mu) * gaussian_exact(-mu);
        let got = oscillatory_integral(&p, mu).unwrap();
        assert!((got - want).norm() < 1e-9 * want.norm(), "{got} {want}");
    }

    #[test]
    fn single_precision() {
        let p = StationaryPhaseProblem::<f32>::gaussian();
        let got = oscillatory_integral(&p, 10.0f32).unwrap();
        assert!((got.norm() - 0.790696).abs() < 1e-3);
    }
}
