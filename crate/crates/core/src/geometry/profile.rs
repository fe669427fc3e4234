//! Arclength meridian profiles `s ↦ (r(s), z(s))` of surfaces of revolution.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{solve_cyclic_tridiagonal, solve_tridiagonal};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
enum Shape<T> {
    UnitSphere,
    Torus { major: T, minor: T },
    Sampled(Spline<T>),
}

/// Meridian profile parametrized by arclength on `[0, L]`.
///
/// Open profiles meet the rotation axis where `r = 0` (endpoints only);
/// closed profiles are periodic in `s` and produce a torus of revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    shape: Shape<T>,
    length: T,
    closed: bool,
}

impl<T: Real> Profile<T> {
    /// `r = sin s`, `z = −cos s` on `[0, π]`: the unit sphere.
    pub fn unit_sphere() -> Self {
        Self { shape: Shape::UnitSphere, length: T::PI(), closed: false }
    }

    /// `r = R + a·cos(s/a)`, `z = a·sin(s/a)` on `[0, 2πa]`.
    pub fn torus(major: T, minor: T) -> Result<Self> {
        if !(minor > T::zero() && major > minor) {
            return Err(Error::SingularProfile(format!(
                "torus needs R > a > 0, got R = {major}, a = {minor}"
            )));
        }
        Ok(Self { shape: Shape::Torus { major, minor }, length: T::TAU() * minor, closed: true })
    }

    /// Cubic-spline profile through `(s_i, r_i)`; `z` follows from
    /// `z' = sqrt(1 − r'²)`. Closed profiles use a periodic spline and require
    /// `r_0 = r_last`.
    pub fn from_samples(s: &[T], r: &[T], closed: bool) -> Result<Self> {
        if s.len() != r.len() || s.len() < 4 {
            return Err(Error::Parse(format!(
                "profile needs at least 4 (s, r) samples of equal length, got {} and {}",
                s.len(),
                r.len()
            )));
        }
        if s[0] != T::zero() {
            return Err(Error::Parse("profile arclength must start at s = 0".into()));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parse("profile arclength not strictly increasing".into()));
        }
        let n = r.len();
        let interior_end = if closed { n } else { n - 1 };
        for (i, &ri) in r.iter().enumerate().take(interior_end).skip(if closed { 0 } else { 1 }) {
            if !(ri > T::zero()) {
                return Err(Error::SingularProfile(format!("r = {ri} at interior sample {i}")));
            }
        }
        if r[0] < T::zero() || r[n - 1] < T::zero() {
            return Err(Error::SingularProfile("negative endpoint radius".into()));
        }
        if closed && (r[0] - r[n - 1]).abs() > T::lit(1e-9) * (T::one() + r[0].abs()) {
            return Err(Error::SingularProfile("closed profile with r(0) ≠ r(L)".into()));
        }
        let spline = Spline::new(s, r, closed);
        if let Some(bad) = spline.max_abs_slope_exceeding_one() {
            return Err(Error::SingularProfile(format!(
                "|dr/ds| = {bad} > 1: samples are not an arclength parametrization"
            )));
        }
        let length = s[n - 1];
        Ok(Self { shape: Shape::Sampled(spline), length, closed })
    }

    /// Reads a two-column `s r` text file. The first non-blank line is a
    /// header and is skipped; `#` starts a comment.
    pub fn load(path: impl AsRef<Path>, closed: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text, closed)
    }

    pub fn parse(text: &str, closed: bool) -> Result<Self> {
        let mut s = Vec::new();
        let mut r = Vec::new();
        let mut header_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !header_seen {
                header_seen = true;
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|c| !c.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected 2 columns, got {}", lineno + 1, cols.len())));
            }
            let parse = |c: &str| {
                c.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {c:?}: {e}", lineno + 1)))
            };
            s.push(T::lit(parse(cols[0])?));
            r.push(T::lit(parse(cols[1])?));
        }
        Self::from_samples(&s, &r, closed)
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn wrap(&self, s: T) -> T {
        if self.closed {
            let l = self.length;
            let w = s - (s / l).floor() * l;
            if w >= l { w - l } else { w }
        } else {
            s
        }
    }

    pub fn r(&self, s: T) -> T {
        let s = self.wrap(s);
        match &self.shape {
            Shape::UnitSphere => s.sin().max(T::zero()),
            Shape::Torus { major, minor } => *major + *minor * (s / *minor).cos(),
            Shape::Sampled(sp) => sp.eval(s).0,
        }
    }

    pub fn dr(&self, s: T) -> T {
        let s = self.wrap(s);
        match &self.shape {
            Shape::UnitSphere => s.cos(),
            Shape::Torus { minor, .. } => -(s / *minor).sin(),
            Shape::Sampled(sp) => sp.eval(s).1,
        }
    }

    pub fn z(&self, s: T) -> T {
        let s = self.wrap(s);
        match &self.shape {
            Shape::UnitSphere => -s.cos(),
            Shape::Torus { minor, .. } => *minor * (s / *minor).sin(),
            Shape::Sampled(sp) => sp.z(s),
        }
    }

    pub fn dz(&self, s: T) -> T {
        let s = self.wrap(s);
        match &self.shape {
            Shape::UnitSphere => s.sin(),
            Shape::Torus { minor, .. } => (s / *minor).cos(),
            Shape::Sampled(sp) => {
                let d = sp.eval(s).1;
                (T::one() - d * d).max(T::zero()).sqrt()
            }
        }
    }

    /// Whether the endpoint `s` (0 or `L`) lies on the rotation axis.
    pub fn endpoint_on_axis(&self, at_end: bool) -> bool {
        if self.closed {
            return false;
        }
        let s = if at_end { self.length } else { T::zero() };
        self.r(s).abs() <= T::lit(1e-12)
    }
}

/// Cubic interpolating spline with z recovered by integrating
/// `sqrt(1 − r'²)` knot by knot.
#[derive(Debug, Clone, PartialEq)]
struct Spline<T> {
    knots: Vec<T>,
    values: Vec<T>,
    second: Vec<T>,
    z_at_knots: Vec<T>,
}

impl<T: Real> Spline<T> {
    fn new(s: &[T], r: &[T], closed: bool) -> Self {
        let n = s.len();
        let h: Vec<T> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let six = T::lit(6.0);
        let second = if closed {
            // Periodic: unknowns M_0..M_{n-2}, M_{n-1} = M_0.
            let m = n - 1;
            let mut a = vec![T::zero(); m];
            let mut b = vec![T::zero(); m];
            let mut c = vec![T::zero(); m];
            let mut d = vec![T::zero(); m];
            for i in 0..m {
                let hp = h[(i + m - 1) % m];
                let hn = h[i];
                let rp = r[(i + m - 1) % m];
                let rn = r[i + 1];
                a[i] = hp;
                b[i] = T::lit(2.0) * (hp + hn);
                c[i] = hn;
                d[i] = six * ((rn - r[i]) / hn - (r[i] - rp) / hp);
            }
            let (alpha, beta) = (c[m - 1], a[0]);
            let mut sol = solve_cyclic_tridiagonal(&a, &b, &c, alpha, beta, &d);
            sol.push(sol[0]);
            sol
        } else {
            let mut a = vec![T::zero(); n];
            let mut b = vec![T::one(); n];
            let mut c = vec![T::zero(); n];
            let mut d = vec![T::zero(); n];
            for i in 1..n - 1 {
                a[i] = h[i - 1];
                b[i] = T::lit(2.0) * (h[i - 1] + h[i]);
                c[i] = h[i];
                d[i] = six * ((r[i + 1] - r[i]) / h[i] - (r[i] - r[i - 1]) / h[i - 1]);
            }
            solve_tridiagonal(&a, &b, &c, &d)
        };
        let mut sp = Self { knots: s.to_vec(), values: r.to_vec(), second, z_at_knots: vec![T::zero(); n] };
        let gl = gauss_legendre::<T>(12);
        for i in 0..n - 1 {
            let seg = gl.mapped(s[i], s[i + 1]);
            let dz = seg.integrate(|t| {
                let d = sp.eval(t).1;
                (T::one() - d * d).max(T::zero()).sqrt()
            });
            sp.z_at_knots[i + 1] = sp.z_at_knots[i] + dz;
        }
        sp
    }

    fn segment(&self, s: T) -> usize {
        let n = self.knots.len();
        match self.knots.binary_search_by(|k| k.partial_cmp(&s).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// `(r, r')` at `s`.
    fn eval(&self, s: T) -> (T, T) {
        let i = self.segment(s);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - s) / h;
        let b = (s - x0) / h;
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let six = T::lit(6.0);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six;
        let d = (y1 - y0) / h - (T::lit(3.0) * a * a - T::one()) / six * h * m0
            + (T::lit(3.0) * b * b - T::one()) / six * h * m1;
        (v, d)
    }

    fn z(&self, s: T) -> T {
        let i = self.segment(s);
        let gl = gauss_legendre::<T>(12).mapped(self.knots[i], s);
        self.z_at_knots[i]
            + gl.integrate(|t| {
                let d = self.eval(t).1;
                (T::one() - d * d).max(T::zero()).sqrt()
            })
    }

    fn max_abs_slope_exceeding_one(&self) -> Option<T> {
        let tol = T::lit(1e-6);
        for w in self.knots.windows(2) {
            for j in 0..=8 {
                let t = w[0] + (w[1] - w[0]) * T::of(j) / T::lit(8.0);
                let d = self.eval(t).1.abs();
                if d > T::one() + tol {
                    return Some(d);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn builtin_profiles_are_arclength() {
        let sph = Profile::<f64>::unit_sphere();
        let tor = Profile::<f64>::torus(2.0, 0.5).unwrap();
        for p in [&sph, &tor] {
            for i in 0..=50 {
                let s = p.length() * i as f64 / 50.0;
                let e = p.dr(s).powi(2) + p.dz(s).powi(2) - 1.0;
                assert!(e.abs() < 1e-12);
            }
        }
        assert!(sph.endpoint_on_axis(false) && sph.endpoint_on_axis(true));
        assert!(!tor.endpoint_on_axis(false));
        assert!((tor.r(tor.length() + 0.3) - tor.r(0.3)).abs() < 1e-12);
    }

    #[test]
    fn sampled_sphere_matches_closed_form() {
        let n = 801;
        let s: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
        let r: Vec<f64> = s.iter().map(|t| t.sin().abs()).collect();
        let mut r = r;
        r[n - 1] = 0.0;
        let p = Profile::from_samples(&s, &r, false).unwrap();
        for &t in &[0.3, 1.0, 2.2] {
            assert!((p.r(t) - t.sin()).abs() < 1e-9);
            assert!((p.dr(t) - t.cos()).abs() < 1e-6);
            assert!((p.z(t) + t.cos() - (p.z(0.0) + 1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn periodic_spline_sampled_torus() {
        let (big, a) = (2.0f64, 0.5);
        let n = 401;
        let l = 2.0 * PI * a;
        let s: Vec<f64> = (0..n).map(|i| l * i as f64 / (n - 1) as f64).collect();
        let r: Vec<f64> = s.iter().map(|t| big + a * (t / a).cos()).collect();
        let p = Profile::from_samples(&s, &r, true).unwrap();
        assert!(p.is_closed());
        for &t in &[0.0, 0.7, 2.9] {
            assert!((p.r(t) - (big + a * (t / a).cos())).abs() < 1e-8);
            assert!((p.dr(t) + (t / a).sin()).abs() < 1e-5);
        }
    }

    #[test]
    fn rejects_bad_profiles() {
        let s = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            Profile::from_samples(&s, &[0.0, 0.5, 0.0, 0.5, 0.0], false),
            Err(Error::SingularProfile(_))
        ));
        assert!(matches!(
            Profile::from_samples(&s, &[0.0, 3.0, 6.0, 3.0, 0.0], false),
            Err(Error::SingularProfile(_))
        ));
        assert!(Profile::<f64>::torus(0.5, 1.0).is_err());
    }

    #[test]
    fn parses_text_with_header() {
        let mut text = String::from("s r\n");
        for i in 0..=200 {
            let s = PI * i as f64 / 200.0;
            let r = if i == 200 { 0.0 } else { s.sin() };
            text.push_str(&format!("{s} {r}\n"));
        }
        let p = Profile::<f64>::parse(&text, false).unwrap();
        assert!((p.r(1.0) - 1.0f64.sin()).abs() < 1e-7);
        assert!(matches!(Profile::<f64>::parse("s r\n1 2 3\n", false), Err(Error::Parse(_))));
    }
}
