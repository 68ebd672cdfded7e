//! Sampled curves and per-sample Frenet data.

use serde::{Deserialize, Serialize};

use crate::curve::{AnalyticCurve, Backend};
use crate::diff::{smoothed_derivatives, smoothed_slopes};
use crate::error::{Error, Result};
use crate::frenet::{frame_from_derivatives, frenet_at_with, sigma_from, FrenetApparatus};
use crate::vec3::Vec3;

/// Smallest number of samples accepted by [`frames_from_samples`].
pub const SAMPLED_STENCIL_WIDTH: usize = 7;

/// Local least-squares windows used on sampled data.
///
/// Positions are differentiated over `position_width` nodes with a polynomial of degree
/// `position_degree`; `(τ/κ)′` uses `ratio_width` and `ratio_degree`. Windows shrink to
/// the available samples on short inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledStencils {
    pub position_width: usize,
    pub position_degree: usize,
    pub ratio_width: usize,
    pub ratio_degree: usize,
}

impl Default for SampledStencils {
    fn default() -> Self {
        Self {
            position_width: 25,
            position_degree: 8,
            ratio_width: 41,
            ratio_degree: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub position: Vec3,
}

/// Ordered `(s, position)` samples of a curve, with `s` strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSamples {
    points: Vec<Sample>,
}

impl CurveSamples {
    pub fn new(points: Vec<Sample>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(p.s.is_finite() && p.position.is_finite()) {
                return Err(Error::InvalidSamples(format!("row {i} is not finite")));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].s <= w[0].s) {
            return Err(Error::InvalidSamples(format!(
                "s must be strictly increasing (rows {i} and {})",
                i + 1
            )));
        }
        Ok(Self { points })
    }

    pub fn from_curve(curve: &AnalyticCurve, grid: &[f64]) -> Result<Self> {
        let points = grid
            .iter()
            .map(|&s| {
                Ok(Sample {
                    s,
                    position: curve.position(s)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Sample] {
        &self.points
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.s).collect()
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.points.iter().map(|p| p.position).collect()
    }

    /// Worst ratio `chord / Δs` between consecutive samples. A unit-speed curve never
    /// exceeds 1.
    pub fn max_chord_ratio(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[0].position.distance(w[1].position) / (w[1].s - w[0].s))
            .fold(0.0, f64::max)
    }

    /// Checks that no chord is longer than the arc between its ends, up to `tol`.
    pub fn check_unit_speed(&self, tol: f64) -> Result<()> {
        let r = self.max_chord_ratio();
        if r > 1.0 + tol {
            return Err(Error::InvalidSamples(format!(
                "chord/arc ratio {r} exceeds 1 + {tol}: samples are not unit speed"
            )));
        }
        Ok(())
    }
}

/// Where a sample's Frenet data came from; selects the matching tolerances downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameSource {
    ClosedForm,
    FiniteDifference,
    Sampled,
}

impl FrameSource {
    pub fn is_exact(self) -> bool {
        self == FrameSource::ClosedForm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSample {
    pub s: f64,
    pub position: Vec3,
    pub frame: FrenetApparatus,
}

/// Samples together with their Frenet apparatus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramedSamples {
    pub source: FrameSource,
    pub samples: Vec<FrameSample>,
    /// Number of samples at each end whose `σ` depends on off-centre windows.
    #[serde(default)]
    pub edge: usize,
}

impl FramedSamples {
    /// Samples whose `σ` comes from centred windows only. Falls back to every sample when
    /// fewer than three would remain.
    pub fn interior(&self) -> &[FrameSample] {
        let n = self.samples.len();
        if n >= 2 * self.edge + 3 {
            &self.samples[self.edge..n - self.edge]
        } else {
            &self.samples
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Evaluates the Frenet apparatus of `curve` over `grid`.
pub fn sample_curve(curve: &AnalyticCurve, grid: &[f64], eps_kappa: f64) -> Result<FramedSamples> {
    let source = match curve.backend() {
        Backend::ClosedForm => FrameSource::ClosedForm,
        Backend::FiniteDifference(_) => FrameSource::FiniteDifference,
    };
    let samples = grid
        .iter()
        .map(|&s| {
            Ok(FrameSample {
                s,
                position: curve.position(s)?,
                frame: frenet_at_with(curve, s, eps_kappa)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FramedSamples {
        source,
        samples,
        edge: 0,
    })
}

/// Frenet apparatus estimated directly from positional samples.
///
/// Derivatives come from local least-squares polynomials over windows that are centred
/// where possible (see [`SampledStencils`]), so non-uniform spacing is fine. Samples whose curvature falls at or below `eps_kappa` get no frame and
/// are left out; `(τ/κ)′` is then taken over the remaining samples. Near the ends the
/// windows cannot be centred and `σ` is much noisier there; [`FramedSamples::interior`]
/// excludes those samples.
pub fn frames_from_samples(samples: &CurveSamples, eps_kappa: f64) -> Result<FramedSamples> {
    frames_from_samples_with(samples, eps_kappa, &SampledStencils::default())
}

pub fn frames_from_samples_with(
    samples: &CurveSamples,
    eps_kappa: f64,
    stencils: &SampledStencils,
) -> Result<FramedSamples> {
    if samples.len() < SAMPLED_STENCIL_WIDTH {
        return Err(Error::InsufficientSamples {
            needed: SAMPLED_STENCIL_WIDTH,
            got: samples.len(),
        });
    }
    let s = samples.parameters();
    let pos = samples.positions();
    let width = stencils.position_width.clamp(4, samples.len());
    let degree = stencils.position_degree.clamp(3, width - 1);
    let d = smoothed_derivatives(&s, &pos, 3, width, degree)?;

    let mut kept = Vec::with_capacity(s.len());
    for (i, di) in d.iter().enumerate() {
        if let Ok(f) = frame_from_derivatives(s[i], di[0], di[1], di[2], eps_kappa) {
            kept.push((i, f));
        }
    }
    if kept.len() < 3 {
        let (i, _) = d
            .iter()
            .enumerate()
            .find(|(_, di)| di[1].norm() <= eps_kappa)
            .unwrap_or((0, &d[0]));
        return Err(Error::CurvatureVanishes {
            s: s[i],
            kappa: d[i][1].norm(),
            floor: eps_kappa,
        });
    }

    let ks: Vec<f64> = kept.iter().map(|(i, _)| s[*i]).collect();
    let ratios: Vec<f64> = kept.iter().map(|(_, f)| f.4 / f.3).collect();
    let ratio_width = stencils.ratio_width.clamp(2, kept.len());
    let ratio_degree = stencils.ratio_degree.clamp(1, ratio_width - 1);
    let dr = smoothed_slopes(&ks, &ratios, ratio_width, ratio_degree)?;

    let out = kept
        .iter()
        .zip(dr)
        .map(|((i, (t, n, b, kappa, tau)), drk)| FrameSample {
            s: s[*i],
            position: pos[*i],
            frame: FrenetApparatus {
                t: *t,
                n: *n,
                b: *b,
                kappa: *kappa,
                tau: *tau,
                sigma: sigma_from(*kappa, *tau, drk),
            },
        })
        .collect();
    Ok(FramedSamples {
        source: FrameSource::Sampled,
        samples: out,
        edge: width / 2 + ratio_width / 2,
    })
}
