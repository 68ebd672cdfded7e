//! Spherical images of the Frenet vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::AnalyticCurve;
use crate::error::{Error, Result};
use crate::frenet::frenet_at_with;
use crate::tolerance::Tolerances;
use crate::vec3::Vec3;

/// Default number of grid points for an indicatrix.
pub const DEFAULT_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Tangent,
    Normal,
    Binormal,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Tangent => "tangent",
            Which::Normal => "normal",
            Which::Binormal => "binormal",
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "tangent" => Ok(Which::Tangent),
            "n" | "normal" => Ok(Which::Normal),
            "b" | "binormal" => Ok(Which::Binormal),
            other => Err(Error::InvalidParams(format!(
                "unknown indicatrix '{other}' (expected tangent, normal or binormal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub s: f64,
    pub point: Vec3,
}

/// A Frenet vector traced over the base curve's arc-length grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalTrace {
    pub which: Which,
    pub points: Vec<TracePoint>,
}

impl SphericalTrace {
    /// Largest `| |p| − 1 |` over the trace.
    pub fn max_norm_defect(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.point.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn indicatrix(curve: &AnalyticCurve, which: Which, grid: &[f64]) -> Result<SphericalTrace> {
    let eps = Tolerances::default().eps_kappa;
    let points = grid
        .iter()
        .map(|&s| {
            let f = frenet_at_with(curve, s, eps)?;
            let point = match which {
                Which::Tangent => f.t,
                Which::Normal => f.n,
                Which::Binormal => f.b,
            };
            Ok(TracePoint { s, point })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SphericalTrace { which, points })
}

/// Indicatrix over [`DEFAULT_POINTS`] uniform points spanning the curve's domain.
pub fn indicatrix_default(curve: &AnalyticCurve, which: Which) -> Result<SphericalTrace> {
    indicatrix(curve, which, &curve.domain().grid(DEFAULT_POINTS))
}

/// Mean of `dot(p, axis)` over the trace and the largest deviation from that mean.
pub fn latitude_check(trace: &SphericalTrace, axis: Vec3) -> Result<(f64, f64)> {
    if trace.points.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let dots: Vec<f64> = trace.points.iter().map(|p| p.point.dot(axis)).collect();
    let mean = dots.iter().sum::<f64>() / dots.len() as f64;
    let dev = dots.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
    Ok((mean, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{uniform_grid, Domain};
    use crate::family::{make_rs_helix, FamilyParams};
    use crate::jet::{Jet, JetVec};

    #[test]
    fn example1_normal_on_latitude() {
        let c = make_rs_helix(&FamilyParams::from_cos_theta(1.0, 0.0, 1.0 / 3.0).unwrap());
        let tr = indicatrix(&c, Which::Normal, &uniform_grid(-3.0, 3.0, 101)).unwrap();
        let (mean, dev) = latitude_check(&tr, Vec3::E3).unwrap();
        assert!((mean - 1.0 / 3.0).abs() < 1e-12);
        assert!(dev < 1e-12);
        assert!(tr.max_norm_defect() < 1e-12);
    }

    #[test]
    fn tangent_trace_is_not_a_latitude() {
        let c = make_rs_helix(&FamilyParams::from_cos_theta(1.0, 0.0, 1.0 / 3.0).unwrap());
        let tr = indicatrix(&c, Which::Tangent, &uniform_grid(-3.0, 3.0, 101)).unwrap();
        let (_, dev) = latitude_check(&tr, Vec3::E3).unwrap();
        assert!(dev > 0.1);
    }

    #[test]
    fn circular_helix_tangent_is_a_latitude() {
        let c = AnalyticCurve::closed_form(Domain::new(-5.0, 5.0).unwrap(), |s: Jet| {
            let k = 0.5f64.sqrt();
            let (sn, cs) = (s * k).sin_cos();
            JetVec::new(cs, sn, s * k)
        });
        let tr = indicatrix_default(&c, Which::Tangent).unwrap();
        assert_eq!(tr.points.len(), DEFAULT_POINTS);
        let (mean, dev) = latitude_check(&tr, Vec3::E3).unwrap();
        assert!((mean - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(dev < 1e-14);
    }

    #[test]
    fn empty_and_single_point_traces() {
        let empty = SphericalTrace {
            which: Which::Normal,
            points: vec![],
        };
        assert_eq!(latitude_check(&empty, Vec3::E3), Err(Error::EmptyTrace));
        let one = SphericalTrace {
            which: Which::Normal,
            points: vec![TracePoint {
                s: 0.0,
                point: Vec3::E1,
            }; 4],
        };
        assert_eq!(latitude_check(&one, Vec3::E1).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn parses_names() {
        assert_eq!("Binormal".parse::<Which>().unwrap(), Which::Binormal);
        assert_eq!("n".parse::<Which>().unwrap(), Which::Normal);
        assert!("x".parse::<Which>().is_err());
    }
}
