//! Plain-text basis exchange.
//!
//! ```text
//! # equiweyl-basis 1
//! # manifold <sphere|torus|torus-cyclic N|revolution>
//! # lambda_max <value>
//! # columns: eigenvalue label kind params...
//! <eigenvalue> <label> Y <k> <m>
//! <eigenvalue> <label> E <k1> <k2>
//! <eigenvalue> <label> U <m> <h> <closed> <axis_start> <axis_end> <n> <u_0> ... <u_{n-1}>
//! ```
//!
//! `label` is `m` for circle actions and the residue for cyclic ones.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{EigenBasis, EigenMode, ModeShape, RadialSamples, Source};
use crate::error::{Error, Result};
use crate::geometry::{IsotypicLabel, ModelManifold};
use crate::scalar::Real;

pub fn export_basis<T: Real>(basis: &EigenBasis<T>) -> String {
    let mut out = String::new();
    let manifold = match &basis.manifold {
        ModelManifold::FlatTorus2FiniteCyclic { order } => format!("torus-cyclic {order}"),
        m => m.name().to_string(),
    };
    let _ = writeln!(out, "# equiweyl-basis 1");
    let _ = writeln!(out, "# manifold {manifold}");
    let _ = writeln!(out, "# lambda_max {:?}", basis.lambda_max.as_f64());
    let _ = writeln!(out, "# columns: eigenvalue label kind params...");
    for md in &basis.modes {
        let _ = write!(out, "{:?} {}", md.eigenvalue.as_f64(), md.label.index());
        match &md.shape {
            ModeShape::SphericalHarmonic { k, m } => {
                let _ = write!(out, " Y {k} {m}");
            }
            ModeShape::TorusExponential { k1, k2 } => {
                let _ = write!(out, " E {k1} {k2}");
            }
            ModeShape::Radial { m, samples } => {
                let _ = write!(
                    out,
                    " U {m} {:?} {} {} {} {}",
                    samples.h.as_f64(),
                    u8::from(samples.closed),
                    u8::from(samples.axis_start),
                    u8::from(samples.axis_end),
                    samples.values.len()
                );
                for v in &samples.values {
                    let _ = write!(out, " {:?}", v.as_f64());
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a basis written by [`export_basis`]. The manifold is supplied by
/// the caller because profiles are not serialized.
pub fn import_basis<T: Real>(text: &str, manifold: ModelManifold<T>) -> Result<EigenBasis<T>> {
    let mut lambda_max = None;
    let mut modes = Vec::new();
    let order = manifold.finite_group_order();
    for (lineno, line) in text.lines().enumerate() {
        let ln = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("lambda_max") {
                lambda_max = Some(num::<f64>(v.trim(), ln)?);
            }
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 5 {
            return Err(Error::Parse(format!("line {ln}: too few fields")));
        }
        let ev = T::lit(num::<f64>(tok[0], ln)?);
        let label_idx: i64 = num(tok[1], ln)?;
        let label = match order {
            Some(n) => IsotypicLabel::cyclic(label_idx, n),
            None => IsotypicLabel::Circle(label_idx as i32),
        };
        let (shape, source) = match tok[2] {
            "Y" => (ModeShape::SphericalHarmonic { k: num(tok[3], ln)?, m: num(tok[4], ln)? }, Source::Analytic),
            "E" => (ModeShape::TorusExponential { k1: num(tok[3], ln)?, k2: num(tok[4], ln)? }, Source::Analytic),
            "U" => {
                if tok.len() < 9 {
                    return Err(Error::Parse(format!("line {ln}: truncated radial record")));
                }
                let m: i32 = num(tok[3], ln)?;
                let h = T::lit(num::<f64>(tok[4], ln)?);
                let flag = |s: &str| -> Result<bool> { Ok(num::<u8>(s, ln)? != 0) };
                let n: usize = num(tok[8], ln)?;
                if tok.len() != 9 + n {
                    return Err(Error::Parse(format!("line {ln}: expected {n} samples, found {}", tok.len() - 9)));
                }
                let values = tok[9..].iter().map(|t| num::<f64>(t, ln).map(T::lit)).collect::<Result<Vec<T>>>()?;
                let samples = RadialSamples { h, closed: flag(tok[5])?, axis_start: flag(tok[6])?, axis_end: flag(tok[7])?, values };
                (ModeShape::Radial { m, samples: Arc::new(samples) }, Source::Discrete { grid_n: n })
            }
            other => return Err(Error::Parse(format!("line {ln}: unknown mode kind {other:?}"))),
        };
        modes.push(EigenMode { eigenvalue: ev, mu: ev.sqrt(), label, source, shape });
    }
    let lambda_max = lambda_max.ok_or_else(|| Error::Parse("missing '# lambda_max' header".into()))?;
    Ok(EigenBasis { manifold, lambda_max: T::lit(lambda_max), modes })
}

fn num<N: std::str::FromStr>(s: &str, ln: usize) -> Result<N>
where
    N::Err: std::fmt::Display,
{
    s.parse::<N>().map_err(|e| Error::Parse(format!("line {ln}: {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{sphere_basis, surface_of_revolution_basis, torus_basis, TorusGroup};
    use crate::geometry::{Point, Profile};

    #[test]
    fn roundtrip_analytic() {
        let b = sphere_basis(30.0f64).unwrap();
        let back = import_basis(&export_basis(&b), ModelManifold::RoundSphere2).unwrap();
        assert_eq!(back, b);
        let b = torus_basis(400.0f64, TorusGroup::Cyclic(4)).unwrap();
        let back = import_basis(&export_basis(&b), b.manifold.clone()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn roundtrip_discrete() {
        let p = Profile::<f64>::unit_sphere();
        let b = surface_of_revolution_basis(&p, 1, 2, 120).unwrap();
        let back = import_basis(&export_basis(&b), b.manifold.clone()).unwrap();
        assert_eq!(back.len(), b.len());
        let x = Point::new(0.7, 0.3);
        for (u, v) in back.modes.iter().zip(&b.modes) {
            assert_eq!(u.eigenvalue, v.eigenvalue);
            assert_eq!(u.eval(&x), v.eval(&x));
        }
    }

    #[test]
    fn malformed_input() {
        assert!(import_basis::<f64>("# lambda_max 1\n1.0 0 Q 1 2\n", ModelManifold::RoundSphere2).is_err());
        assert!(import_basis::<f64>("0 0 Y 0 0\n", ModelManifold::RoundSphere2).is_err());
    }
}
