use std::f64::consts::PI;

use equiweyl::eigensolve::{sphere_basis, torus_basis, TorusGroup};
use equiweyl::lab::{Comparison, ExperimentReport, Statistic};
use equiweyl::quadrature::pairwise_sum;
use equiweyl::spectral::ReducedSpectralFunction;
use equiweyl::specfun::{legendre_p, spherical_harmonic};
use equiweyl::statphase::{caustic_interpolation, StationaryPhaseProblem};
use equiweyl::{fit_power_law, HarmonicIndex, IsotypicLabel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_theorem(k in 0u32..120, theta in 0.0f64..PI, phi in -PI..PI) {
        let k_i = k as i32;
        let sum: f64 = (-k_i..=k_i)
            .map(|m| spherical_harmonic(HarmonicIndex::new(k, m).unwrap(), theta, phi).unwrap().magnitude_sq)
            .sum();
        let exact = (2 * k + 1) as f64 / (4.0 * PI);
        prop_assert!((sum / exact - 1.0).abs() < 1e-11, "k={k} sum={sum} exact={exact}");
    }

    #[test]
    fn harmonic_magnitude_is_rotation_invariant(k in 0u32..300, m in -300i32..300, theta in 0.0f64..PI, phi in -PI..PI, t in -PI..PI) {
        prop_assume!(m.unsigned_abs() <= k);
        let idx = HarmonicIndex::new(k, m).unwrap();
        let a = spherical_harmonic(idx, theta, phi).unwrap();
        let b = spherical_harmonic(idx, theta, phi + t).unwrap();
        prop_assert!((a.magnitude_sq - b.magnitude_sq).abs() <= 1e-13 * (1.0 + a.magnitude_sq));
        let phase = a.value.conj() * b.value;
        let expected = (m as f64 * t).cos() * a.magnitude_sq;
        prop_assert!((phase.re - expected).abs() <= 1e-12 * (1.0 + a.magnitude_sq));
    }

    #[test]
    fn legendre_matches_closed_forms(x in -1.0f64..1.0) {
        let closed = [
            1.0,
            x,
            (3.0 * x * x - 1.0) / 2.0,
            (5.0 * x.powi(3) - 3.0 * x) / 2.0,
            (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0,
            (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0,
        ];
        for (k, c) in closed.iter().enumerate() {
            prop_assert!((legendre_p(k as u32, x).unwrap() - c).abs() < 1e-14);
        }
    }

    #[test]
    fn legendre_parity(k in 0u32..800, x in -1.0f64..1.0) {
        let a = legendre_p(k, x).unwrap();
        let b = legendre_p(k, -x).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-13);
        prop_assert!(a.abs() <= 1.0 + 1e-13);
    }

    #[test]
    fn fit_recovers_exact_power_laws(c in 1e-3f64..1e3, s in -3.0f64..3.0, a in 1e-2f64..1e2, n in 5usize..40) {
        let xs: Vec<f64> = (0..n).map(|i| a * 2f64.powf(i as f64 / 2.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(s)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        prop_assert!((f.slope - s).abs() < 1e-12, "slope {} vs {s}", f.slope);
        prop_assert!((f.predict(xs[0]) / ys[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers(xs in prop::collection::vec(-1_000_000i64..1_000_000, 0..500)) {
        let f: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
        prop_assert_eq!(pairwise_sum(&f), xs.iter().sum::<i64>() as f64);
    }

    #[test]
    fn sphere_counting_closed_form(lambda in 0.0f64..3e4, m in -60i32..60) {
        let basis = sphere_basis(3e4).unwrap();
        let rsf = ReducedSpectralFunction::new(&basis, IsotypicLabel::Circle(m));
        let mut expected = 0u64;
        let mut k = m.unsigned_abs() as u64;
        while (k * (k + 1)) as f64 <= lambda {
            expected += 1;
            k += 1;
        }
        prop_assert_eq!(rsf.counting(lambda).unwrap(), expected);
    }

    #[test]
    fn torus_counting_is_a_lattice_count(lambda in 0.0f64..2e4, m in -25i32..25) {
        let basis = torus_basis(2e4, TorusGroup::Circle).unwrap();
        let rsf = ReducedSpectralFunction::new(&basis, IsotypicLabel::Circle(m));
        let unit = 4.0 * PI * PI;
        let expected = (-100i64..=100).filter(|k2| unit * ((m as i64).pow(2) + k2 * k2) as f64 <= lambda).count() as u64;
        prop_assert_eq!(rsf.counting(lambda).unwrap(), expected);
    }

    #[test]
    fn reports_replay_after_round_trip(ys in prop::collection::vec(1e-3f64..1e3, 5..30), bound in 0.0f64..2e3) {
        let xs: Vec<f64> = (1..=ys.len()).map(|i| i as f64).collect();
        let mut r = ExperimentReport::new("prop", serde_json::json!({ "n": ys.len() }));
        r.add_series("y", "x", xs, ys.clone());
        r.check("max", &["y"], Statistic::Max, Comparison::AtMost { bound });
        r.check("slope", &["y"], Statistic::Slope, Comparison::Within { target: 0.0, tol: 1.0 });
        let r = r.finish(std::time::Instant::now());
        let back = ExperimentReport::from_json(&r.to_json()).unwrap();
        prop_assert!(back.is_consistent());
        prop_assert_eq!(back.canonical_json(), r.canonical_json());
        let max = ys.iter().copied().fold(f64::MIN, f64::max);
        prop_assert_eq!(back.checks[0].passed, max <= bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn caustic_values_depend_on_the_product(e in -3i32..4, j in 1u32..40) {
        let problem = StationaryPhaseProblem::<f64>::gaussian();
        let product = j as f64;
        let s = 2f64.powi(e);
        let a = caustic_interpolation(&problem, product * s, 1.0 / s, 1.0).unwrap();
        let b = caustic_interpolation(&problem, product, 1.0, 1.0).unwrap();
        prop_assert_eq!(a.numeric, b.numeric);
        prop_assert_eq!(a.prediction, b.prediction);
    }
}
