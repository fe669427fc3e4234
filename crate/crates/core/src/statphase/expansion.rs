//! Leading stationary-phase term over a declared clean critical manifold.

use serde::Serialize;

use super::{
    oscillatory_integral, retract, tangent_basis, CriticalComponent, CriticalManifold, Domain, StationaryPhaseProblem,
};
use crate::error::{Error, Result};
use crate::linalg::sym_eig;
use crate::scalar::{Complex, Real};

/// Transversal eigenvalues below this magnitude count as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Contribution of one connected critical component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SPTerm<T> {
    pub psi0: T,
    /// Dimension of the component.
    pub p: usize,
    /// Signature of the transversal Hessian.
    pub signature: i32,
    /// `∫_C a/|det ψ''_N|^{1/2} dσ · e^{iπσ/4}`.
    pub q0: Complex<T>,
    /// Smallest transversal eigenvalue magnitude seen on the component.
    pub min_eigenvalue: T,
}

impl<T: Real> SPTerm<T> {
    pub fn predict(&self, n: usize, mu: T) -> Complex<T> {
        let (s, c) = (mu * self.psi0).sin_cos();
        let k = T::of(n - self.p) / T::lit(2.0);
        Complex::new(c, s) * self.q0 * (T::TAU() / mu).powf(k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SPExpansion<T> {
    /// Dimension of the integration manifold.
    pub n: usize,
    pub terms: Vec<SPTerm<T>>,
}

impl<T: Real> SPExpansion<T> {
    /// `Σ e^{iμψ₀}(2π/μ)^{(n−p)/2} q0` over the components.
    pub fn predict(&self, mu: T) -> Complex<T> {
        self.terms.iter().fold(Complex::new(T::zero(), T::zero()), |s, t| s + t.predict(self.n, mu))
    }

    /// `Σ |term|`: the decay envelope of the leading asymptotics.
    pub fn envelope(&self, mu: T) -> T {
        self.terms.iter().map(|t| t.predict(self.n, mu).norm()).fold(T::zero(), |a, b| a + b)
    }

    /// Slowest decay exponent `−(n−p)/2` among components with `q0 ≠ 0`.
    pub fn decay_exponent(&self) -> Option<T> {
        self.terms
            .iter()
            .filter(|t| t.q0.norm() > T::zero())
            .map(|t| -T::of(self.n - t.p) / T::lit(2.0))
            .fold(None, |acc: Option<T>, e| Some(acc.map_or(e, |a| a.max(e))))
    }
}

/// Leading term of the generalized stationary phase expansion.
pub fn stationary_expansion<T: Real>(problem: &StationaryPhaseProblem<T>) -> Result<SPExpansion<T>> {
    let comps = match &problem.critical {
        CriticalManifold::Declared(c) => c,
        CriticalManifold::Scan => {
            return Err(Error::Domain(
                "stationary_expansion needs a declared critical manifold; use critical_set_scan to locate it".into(),
            ))
        }
    };
    let n = problem.domain.dim();
    let width = problem.domain.coord_len();
    let mut terms = Vec::with_capacity(comps.len());
    for comp in comps {
        match comp {
            CriticalComponent::Point(p) => {
                check_len(p, width)?;
                let b = tangent_basis(&problem.domain, p);
                check_critical(problem, p, &b)?;
                let h = transversal(problem, p, &b)?;
                let wt = (problem.amplitude)(p) / h.det.abs().sqrt();
                terms.push(SPTerm {
                    psi0: (problem.phase)(p),
                    p: 0,
                    signature: h.signature,
                    q0: wt * phase_factor(h.signature),
                    min_eigenvalue: h.min_abs,
                });
            }
            CriticalComponent::Curve { param, period, nodes } => {
                let nodes = (*nodes).max(4);
                let ds = *period / T::of(nodes);
                let hstep = *period * T::lit(1e-5);
                let mut acc = Complex::new(T::zero(), T::zero());
                let mut signature = None;
                let mut min_abs = T::infinity();
                let mut psi0 = T::zero();
                for j in 0..nodes {
                    let s = ds * T::of(j);
                    let p = param(s);
                    check_len(&p, width)?;
                    let fwd = param(s + hstep);
                    let bwd = param(s - hstep);
                    let tangent: Vec<T> = fwd.iter().zip(&bwd).map(|(a, b)| (*a - *b) / (hstep + hstep)).collect();
                    let speed = norm_n(&tangent);
                    let b = tangent_basis(&problem.domain, &p);
                    check_critical(problem, &p, &b)?;
                    let normal = complement(&b, &tangent);
                    let h = transversal(problem, &p, &normal)?;
                    match signature {
                        None => signature = Some(h.signature),
                        Some(sg) if sg != h.signature => {
                            return Err(Error::Degeneracy("transversal signature varies along the component".into()))
                        }
                        _ => {}
                    }
                    min_abs = min_abs.min(h.min_abs);
                    if j == 0 {
                        psi0 = (problem.phase)(&p);
                    }
                    acc = acc + (problem.amplitude)(&p) * (ds * speed / h.det.abs().sqrt());
                }
                let sg = signature.unwrap_or(0);
                terms.push(SPTerm { psi0, p: 1, signature: sg, q0: acc * phase_factor(sg), min_eigenvalue: min_abs });
            }
        }
    }
    Ok(SPExpansion { n, terms })
}

/// Numeric `I(μ, τ) = ∫ e^{iμτψ} a` together with the ε-shifted leading-term
/// prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausticValue<T> {
    pub numeric: Complex<T>,
    pub prediction: Complex<T>,
    /// `μτ + ε ≤ 1`: the prediction carries no asymptotic meaning.
    pub regime_warning: bool,
}

pub fn caustic_interpolation<T: Real>(
    problem: &StationaryPhaseProblem<T>,
    mu: T,
    tau: T,
    epsilon: T,
) -> Result<CausticValue<T>> {
    let numeric = oscillatory_integral(problem, mu * tau)?;
    let big = mu * tau + epsilon;
    let regime_warning = big <= T::one();
    if regime_warning {
        log::warn!("caustic interpolation outside its regime: mu*tau + epsilon = {big}");
    }
    let mut shifted = problem.clone();
    let phase = problem.phase.clone();
    let amp = problem.amplitude.clone();
    shifted.amplitude = std::sync::Arc::new(move |x: &[T]| {
        let (s, c) = (-epsilon * phase(x)).sin_cos();
        amp(x) * Complex::new(c, s)
    });
    let exp = stationary_expansion(&shifted)?;
    Ok(CausticValue { numeric, prediction: exp.predict(big), regime_warning })
}

fn phase_factor<T: Real>(signature: i32) -> Complex<T> {
    let (s, c) = (T::PI() * T::of_i(signature as i64) / T::lit(4.0)).sin_cos();
    Complex::new(c, s)
}

fn check_len<T>(p: &[T], width: usize) -> Result<()> {
    if p.len() != width {
        return Err(Error::Domain(format!("critical point has {} coordinates, expected {width}", p.len())));
    }
    Ok(())
}

struct Transversal<T> {
    det: T,
    signature: i32,
    min_abs: T,
}

fn shifted<T: Real>(domain: &Domain<T>, p: &[T], dirs: &[Vec<T>], steps: &[(usize, T)]) -> Vec<T> {
    let mut q = p.to_vec();
    for &(k, h) in steps {
        for (qi, di) in q.iter_mut().zip(&dirs[k]) {
            *qi = *qi + h * *di;
        }
    }
    retract(domain, &mut q);
    q
}

fn loc_scale<T: Real>(p: &[T]) -> T {
    T::one() + norm_n(p)
}

/// Declared points must satisfy `|∇ψ| ≤ 1e−10 (1 + |ψ|)`. Richardson-
/// extrapolated central differences.
fn check_critical<T: Real>(problem: &StationaryPhaseProblem<T>, p: &[T], basis: &[Vec<T>]) -> Result<()> {
    let f = |q: Vec<T>| (problem.phase)(&q);
    let h = T::lit(1e-3) * loc_scale(p);
    let mut g2 = T::zero();
    for k in 0..basis.len() {
        let d = |h: T| {
            (f(shifted(&problem.domain, p, basis, &[(k, h)])) - f(shifted(&problem.domain, p, basis, &[(k, -h)])))
                / (h + h)
        };
        let half = h * T::lit(0.5);
        let g = (T::lit(4.0) * d(half) - d(h)) / T::lit(3.0);
        g2 = g2 + g * g;
    }
    let psi = (problem.phase)(p).abs();
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) * (T::one() + psi);
    if g2.sqrt() > tol {
        return Err(Error::InvalidPoint(format!(
            "declared critical point has |grad psi| = {:e} > {:e}",
            g2.sqrt().as_f64(),
            tol.as_f64()
        )));
    }
    Ok(())
}

/// Hessian of `ψ∘retract` in the orthonormal frame `dirs` by central
/// differences with step `1e−4 (1 + |p|)`.
fn transversal<T: Real>(problem: &StationaryPhaseProblem<T>, p: &[T], dirs: &[Vec<T>]) -> Result<Transversal<T>> {
    let k = dirs.len();
    if k == 0 {
        return Ok(Transversal { det: T::one(), signature: 0, min_abs: T::infinity() });
    }
    let h = T::lit(1e-4) * loc_scale(p);
    if T::epsilon() > T::lit(1e-10) {
        // Single precision: larger step keeps the rounding error of the
        // second difference in check.
        return transversal_with_step(problem, p, dirs, T::lit(3e-2) * loc_scale(p));
    }
    transversal_with_step(problem, p, dirs, h)
}

fn transversal_with_step<T: Real>(
    problem: &StationaryPhaseProblem<T>,
    p: &[T],
    dirs: &[Vec<T>],
    h: T,
) -> Result<Transversal<T>> {
    let k = dirs.len();
    let f = |steps: &[(usize, T)]| (problem.phase)(&shifted(&problem.domain, p, dirs, steps));
    let f0 = (problem.phase)(p);
    let mut hess = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        hess[i][i] = (f(&[(i, h)]) - f0 - f0 + f(&[(i, -h)])) / (h * h);
        for j in (i + 1)..k {
            let v = (f(&[(i, h), (j, h)]) - f(&[(i, h), (j, -h)]) - f(&[(i, -h), (j, h)]) + f(&[(i, -h), (j, -h)]))
                / (T::lit(4.0) * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    let (vals, _) = sym_eig(&hess);
    let min_abs = vals.iter().map(|v| v.abs()).fold(T::infinity(), T::min);
    if min_abs < T::lit(DEGENERACY_THRESHOLD) {
        return Err(Error::Degeneracy(format!(
            "transversal eigenvalue {:e} below {DEGENERACY_THRESHOLD:e}",
            min_abs.as_f64()
        )));
    }
    let signature = vals.iter().map(|v| if *v > T::zero() { 1 } else { -1 }).sum();
    let det = vals.iter().fold(T::one(), |a, &b| a * b);
    Ok(Transversal { det, signature, min_abs })
}

fn norm_n<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |s, &x| s + x * x).sqrt()
}

/// Orthonormal completion of `tangent` inside `span(basis)`, minus `tangent`.
fn complement<T: Real>(basis: &[Vec<T>], tangent: &[T]) -> Vec<Vec<T>> {
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y);
    let mut t: Vec<T> = vec![T::zero(); tangent.len()];
    for b in basis {
        let c = dot(b, tangent);
        for (ti, bi) in t.iter_mut().zip(b) {
            *ti = *ti + c * *bi;
        }
    }
    let nt = norm_n(&t);
    let mut out: Vec<Vec<T>> = vec![t.iter().map(|&x| x / nt).collect()];
    for b in basis {
        let mut v = b.clone();
        for q in &out {
            let c = dot(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi = *vi - c * *qi;
            }
        }
        let nv = norm_n(&v);
        if nv > T::lit(1e-6) {
            out.push(v.iter().map(|&x| x / nv).collect());
        }
        if out.len() == basis.len() {
            break;
        }
    }
    out.remove(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statphase::{oscillatory_integral, Domain};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn gaussian_leading_term() {
        let p = StationaryPhaseProblem::<f64>::gaussian();
        let e = stationary_expansion(&p).unwrap();
        assert_eq!(e.terms.len(), 1);
        let t = e.terms[0];
        assert_eq!((t.p, t.signature), (0, 1));
        assert!(t.psi0.abs() < 1e-15);
        assert!((e.predict(10.0).norm() - 0.79267).abs() < 1e-5);
        assert!((e.predict(10.0).norm() - (2.0 * PI / 10.0).sqrt()).abs() < 1e-7);
        assert_eq!(e.decay_exponent(), Some(-0.5));
    }

    #[test]
    fn sphere_plane_wave_terms_sum_to_exact() {
        let v = [0.0, 0.6, 0.8];
        let p = StationaryPhaseProblem::<f64>::sphere_plane_wave(v).unwrap();
        let e = stationary_expansion(&p).unwrap();
        let sig: Vec<i32> = e.terms.iter().map(|t| t.signature).collect();
        assert_eq!(sig, vec![-2, 2]);
        for mu in [20.0f64, 77.0, 400.0] {
            let exact = 4.0 * PI * mu.sin() / mu;
            assert!((e.predict(mu).re - exact).abs() < 1e-6 / mu);
            assert!((e.envelope(mu) - 4.0 * PI / mu).abs() < 1e-6 / mu);
        }
    }

    #[test]
    fn zero_amplitude() {
        let mut p = StationaryPhaseProblem::<f64>::gaussian();
        p.amplitude = Arc::new(|_: &[f64]| Complex::new(0.0, 0.0));
        let e = stationary_expansion(&p).unwrap();
        assert_eq!(e.terms[0].q0, Complex::new(0.0, 0.0));
        assert_eq!(e.decay_exponent(), None);
    }

    #[test]
    fn rejects_non_critical_and_degenerate() {
        let p = StationaryPhaseProblem::<f64>::gaussian().with_critical(vec![CriticalComponent::Point(vec![0.1])]);
        assert!(matches!(stationary_expansion(&p), Err(Error::InvalidPoint(_))));
        let cubic = StationaryPhaseProblem::<f64>::new(
            |x: &[f64]| x[0].powi(3),
            |_: &[f64]| Complex::new(1.0, 0.0),
            Domain::Box { lo: vec![-1.0], hi: vec![1.0] },
        )
        .with_critical(vec![CriticalComponent::Point(vec![0.0])]);
        assert!(matches!(stationary_expansion(&cubic), Err(Error::Degeneracy(_))));
        let undeclared = StationaryPhaseProblem::<f64>::new(
            |x: &[f64]| x[0],
            |_: &[f64]| Complex::new(1.0, 0.0),
            Domain::Box { lo: vec![-1.0], hi: vec![1.0] },
        );
        assert!(stationary_expansion(&undeclared).is_err());
    }

    #[test]
    fn curve_component_on_an_annulus() {
        // ψ = (|x|² − 1)²/4 vanishes on the unit circle with normal Hessian 2.
        let p = StationaryPhaseProblem::<f64>::new(
            |x: &[f64]| {
                let r2 = x[0] * x[0] + x[1] * x[1] - 1.0;
                0.25 * r2 * r2
            },
            |x: &[f64]| Complex::new((-(x[0] * x[0] + x[1] * x[1] - 1.0).powi(2) * 4.0).exp(), 0.0),
            Domain::Box { lo: vec![-1.8, -1.8], hi: vec![1.8, 1.8] },
        )
        .with_critical(vec![CriticalComponent::Curve {
            param: Arc::new(|s: f64| vec![s.cos(), s.sin()]),
            period: 2.0 * PI,
            nodes: 64,
        }]);
        let e = stationary_expansion(&p).unwrap();
        let t = e.terms[0];
        assert_eq!((t.p, t.signature), (1, 1));
        let want = 2.0 * PI / 2f64.sqrt();
        assert!((t.q0 - Complex::from_polar(want, PI / 4.0)).norm() < 1e-6, "{:?}", t.q0);
        let err = |mu: f64| (oscillatory_integral(&p, mu).unwrap() - e.predict(mu)).norm();
        let ratio = err(50.0) / err(100.0);
        assert!((1.5..3.0).contains(&ratio), "first correction should be O(1/mu): ratio {ratio}");
    }

    #[test]
    fn caustic_branch() {
        let p = StationaryPhaseProblem::<f64>::gaussian();
        let a = caustic_interpolation(&p, 20.0, 1.0, 1.0).unwrap();
        let b = caustic_interpolation(&p, 2000.0, 0.01, 1.0).unwrap();
        assert!((a.numeric - b.numeric).norm() < 1e-10);
        let zero = caustic_interpolation(&p, 5.0, 0.0, 1.0).unwrap();
        assert!(zero.regime_warning);
        assert!((zero.numeric.re - (2.0 * PI).sqrt()).abs() < 1e-12 && zero.numeric.im.abs() < 1e-12);
        let exact = (Complex::new(2.0 * PI, 0.0) / Complex::new(1.0, -20.0)).sqrt();
        assert!((a.numeric - exact).norm() < 1e-9);
        assert!(!a.regime_warning);
    }
}
