//! Quadrature rules: Gauss–Legendre (single and composite panels), periodic
//! trapezoid, and a deterministic pairwise summation used by every reduction.

use crate::scalar::{Complex, Real};

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        let terms: Vec<T> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    /// Affine image of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> Rule<T> {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
///
/// Newton iteration on the three-term recurrence, carried out in `f64`
/// regardless of `T`. Cost is O(n²); use [`composite_gauss_legendre`] for
/// very large node counts.
pub fn gauss_legendre<T: Real>(n: usize) -> Rule<T> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let (x, w) = gauss_legendre_f64(n);
    Rule {
        nodes: x.into_iter().map(T::lit).collect(),
        weights: w.into_iter().map(T::lit).collect(),
    }
}

fn gauss_legendre_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th largest root.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on `[a, b]`: `panels` equal panels with an
/// `order`-point rule on each.
pub fn composite_gauss_legendre<T: Real>(a: T, b: T, panels: usize, order: usize) -> Rule<T> {
    let base = gauss_legendre::<T>(order);
    composite_from_base(&base, a, b, panels)
}

pub(crate) fn composite_from_base<T: Real>(base: &Rule<T>, a: T, b: T, panels: usize) -> Rule<T> {
    let panels = panels.max(1);
    let h = (b - a) / T::of(panels);
    let mut nodes = Vec::with_capacity(panels * base.len());
    let mut weights = Vec::with_capacity(panels * base.len());
    for p in 0..panels {
        let lo = a + h * T::of(p);
        let r = base.mapped(lo, lo + h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule { nodes, weights }
}

/// Periodic trapezoid rule on `[a, a + period)` with `n` equally spaced nodes.
pub fn periodic_trapezoid<T: Real>(a: T, period: T, n: usize) -> Rule<T> {
    let n = n.max(1);
    let h = period / T::of(n);
    Rule {
        nodes: (0..n).map(|i| a + h * T::of(i)).collect(),
        weights: vec![h; n],
    }
}

/// Deterministic pairwise (tree) summation; the result depends only on the
/// order of `xs`, never on how the terms were produced.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut s = T::zero();
        for &x in xs {
            s = s + x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut s = Complex::new(T::zero(), T::zero());
        for &x in xs {
            s = s + x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Adaptive trapezoid on a periodic integrand: doubles the node count until
/// the relative change drops below `rel_tol`.
pub fn adaptive_periodic_trapezoid<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    period: T,
    rel_tol: T,
) -> T {
    let mut n = 8usize;
    let mut prev = periodic_trapezoid(a, period, n).integrate(&f);
    loop {
        n *= 2;
        let cur = periodic_trapezoid(a, period, n).integrate(&f);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(T::min_positive_value()) || n >= 1 << 20 {
            return cur;
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 33] {
            let r = gauss_legendre::<f64>(n);
            for deg in 0..(2 * n) {
                let got = r.integrate(|x| x.powi(deg as i32));
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn nodes_ascending_and_weights_sum_to_two() {
        let r = gauss_legendre::<f64>(200);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
    }

    #[test]
    fn composite_rule_covers_interval() {
        let r = composite_gauss_legendre(0.0f64, 3.0, 7, 10);
        assert_eq!(r.len(), 70);
        let got = r.integrate(|x| x.exp());
        assert!((got - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_exact_for_trig_polynomials() {
        let r = periodic_trapezoid(0.0f64, std::f64::consts::TAU, 9);
        for k in 1..9 {
            let got = r.integrate(|t| (k as f64 * t).cos());
            assert!(got.abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn pairwise_sum_is_accurate() {
        let xs: Vec<f64> = (0..100_000).map(|i| 1.0 / ((i + 1) as f64).powi(2)).collect();
        let s = pairwise_sum(&xs);
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.0 / 100_000.5;
        assert!((s - exact).abs() < 1e-10);
    }
}
