//! Decide whether a curve is a rectifying curve, a slant helix, or both, and measure how
//! well it satisfies the second-order ODE for `v = n′/κ`.

use serde::{Deserialize, Serialize};

use crate::curve::{AnalyticCurve, Backend};
use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::frenet::{frame_jet, frenet_at_with, FrenetApparatus};
use crate::jet::Jet;
use crate::samples::FramedSamples;
use crate::tolerance::Tolerances;
use crate::vec3::Vec3;

/// Least-squares line `τ/κ ≈ c₁s + c₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectifyingFit {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub rms_residual: f64,
    pub is_rectifying: bool,
    /// Samples used in the fit; samples with κ at or below the floor are excluded.
    pub used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlantVerdict {
    pub sigma_mean: f64,
    pub sigma_max_dev: f64,
    pub is_slant: bool,
    /// `arccot(sigma_mean) ∈ (0, π)`, reported only for slant helices.
    pub implied_theta: Option<f64>,
}

impl SlantVerdict {
    pub fn implied_cos_theta(&self) -> Option<f64> {
        self.implied_theta.map(f64::cos)
    }
}

/// Components of the position vector along `t`, `b` and (the leak) along `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectifyingDecomposition {
    pub lambda: f64,
    pub mu: f64,
    pub normal_leak: f64,
}

impl RectifyingDecomposition {
    pub fn of(position: Vec3, frame: &FrenetApparatus) -> Self {
        Self {
            lambda: position.dot(frame.t),
            mu: position.dot(frame.b),
            normal_leak: position.dot(frame.n),
        }
    }

    pub fn reconstruct(&self, frame: &FrenetApparatus) -> Vec3 {
        frame.t * self.lambda + frame.b * self.mu + frame.n * self.normal_leak
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeCheck {
    /// `v = n′/κ`.
    pub v: Vec3,
    /// `v″ + (c₁ tan θ)²/(1 + f²)²·v`.
    pub residual: Vec3,
    pub residual_norm: f64,
}

/// How `v″` is obtained in [`ode_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OdeMethod {
    /// Differentiate the jet of `v` (closed-form curves only).
    Jet,
    /// 5-point stencil on `v` with step `relative_step·(1 + |s|)`.
    Stencil { relative_step: f64 },
}

impl OdeMethod {
    pub const DEFAULT_STENCIL: OdeMethod = OdeMethod::Stencil {
        relative_step: 1e-4,
    };
}

/// Aggregate verdict for one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub rectifying_fit: RectifyingFit,
    pub slant: SlantVerdict,
    pub normal_leak_max: f64,
    /// Whether the position vector itself stays in the rectifying plane.
    pub in_rectifying_plane: bool,
    /// Rectifying slant helix: slant, rectifying by the τ/κ law, and in the rectifying plane.
    pub verdict: bool,
}

fn tolerance_pick(exact: bool, closed: f64, sampled: f64) -> f64 {
    if exact {
        closed
    } else {
        sampled
    }
}

/// Unweighted least-squares line through `(s, τ/κ)`.
pub fn rectifying_fit(samples: &FramedSamples, tol: &Tolerances) -> Result<RectifyingFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let pts: Vec<(f64, f64)> = samples
        .samples
        .iter()
        .filter(|p| p.frame.kappa > tol.eps_kappa)
        .map(|p| (p.s, p.frame.ratio()))
        .collect();
    if pts.len() < 3 {
        let worst = samples
            .samples
            .iter()
            .find(|p| !(p.frame.kappa > tol.eps_kappa))
            .expect("at least one sample was excluded");
        return Err(Error::CurvatureVanishes {
            s: worst.s,
            kappa: worst.frame.kappa,
            floor: tol.eps_kappa,
        });
    }
    let n = pts.len() as f64;
    let s_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let r_mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(s, r) in &pts {
        sxx += (s - s_mean) * (s - s_mean);
        sxy += (s - s_mean) * (r - r_mean);
    }
    let c1_hat = sxy / sxx;
    let c2_hat = r_mean - c1_hat * s_mean;
    let rms_residual = (pts
        .iter()
        .map(|&(s, r)| (r - c1_hat * s - c2_hat).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let tol_fit = tolerance_pick(samples.source.is_exact(), tol.fit_closed, tol.fit_sampled);
    Ok(RectifyingFit {
        c1_hat,
        c2_hat,
        rms_residual,
        is_rectifying: rms_residual <= tol_fit && c1_hat.abs() > tol.eps_slope,
        used: pts.len(),
    })
}

/// Constancy test for σ using the max absolute deviation from the mean, over the samples
/// whose `σ` comes from centred windows.
///
/// The tolerance is relative once `|σ|` exceeds 1, since `σ = cot θ` grows without bound
/// as `θ → 0`.
pub fn slant_verdict(samples: &FramedSamples, tol: &Tolerances) -> Result<SlantVerdict> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let sig: Vec<f64> = samples.interior().iter().map(|p| p.frame.sigma).collect();
    let sigma_mean = sig.iter().sum::<f64>() / sig.len() as f64;
    let sigma_max_dev = sig
        .iter()
        .map(|x| (x - sigma_mean).abs())
        .fold(0.0, f64::max);
    let tol_sigma = tolerance_pick(samples.source.is_exact(), tol.sigma_closed, tol.sigma_sampled);
    let is_slant = sig.iter().all(|x| x.is_finite())
        && sigma_max_dev <= tol_sigma * sigma_mean.abs().max(1.0);
    Ok(SlantVerdict {
        sigma_mean,
        sigma_max_dev,
        is_slant,
        implied_theta: is_slant.then(|| 1f64.atan2(sigma_mean)),
    })
}

pub fn rectifying_decomposition(curve: &AnalyticCurve, s: f64) -> Result<RectifyingDecomposition> {
    let frame = frenet_at_with(curve, s, Tolerances::default().eps_kappa)?;
    Ok(RectifyingDecomposition::of(curve.position(s)?, &frame))
}

pub fn classify_full(samples: &FramedSamples, tol: &Tolerances) -> Result<Classification> {
    let rectifying_fit = rectifying_fit(samples, tol)?;
    let slant = slant_verdict(samples, tol)?;
    let normal_leak_max = samples
        .samples
        .iter()
        .map(|p| p.position.dot(p.frame.n).abs())
        .fold(0.0, f64::max);
    let tol_leak = tolerance_pick(samples.source.is_exact(), tol.leak_closed, tol.leak_sampled);
    let in_rectifying_plane = normal_leak_max <= tol_leak;
    Ok(Classification {
        rectifying_fit,
        slant,
        normal_leak_max,
        in_rectifying_plane,
        verdict: rectifying_fit.is_rectifying && slant.is_slant && in_rectifying_plane,
    })
}

/// `(c₁ tan θ)²/(1 + f²)²`, the coefficient of the ODE satisfied by `v`.
pub fn ode_coefficient(params: &FamilyParams, s: f64) -> f64 {
    let f = params.f(s);
    (params.c1() * params.tan_theta()).powi(2) / (1.0 + f * f).powi(2)
}

/// `v = n′/κ` at `s`.
///
/// On closed-form curves this uses the Frenet identity `n′/κ = −t + (τ/κ)b`, which only
/// needs the values of the frame and is accurate to rounding; that matters when `v` is
/// differenced again.
pub fn v_at(curve: &AnalyticCurve, s: f64, eps_kappa: f64) -> Result<Vec3> {
    match curve.backend() {
        Backend::ClosedForm => {
            let f = frame_jet(curve, s, eps_kappa)?.apparatus();
            Ok(f.b * f.ratio() - f.t)
        }
        Backend::FiniteDifference(policy) => {
            let h = policy.field_step(s);
            curve.domain().require_stencil(s, 2.0 * h)?;
            let kappa = frenet_at_with(curve, s, eps_kappa)?.kappa;
            let n = stencil_values(s, h, |x| Ok(frenet_at_with(curve, x, eps_kappa)?.n))?;
            Ok((n[0] - n[1] * 8.0 + n[3] * 8.0 - n[4]) / (12.0 * h * kappa))
        }
    }
}

/// `g` at `s − 2h, s − h, s, s + h, s + 2h`.
fn stencil_values<G>(s: f64, h: f64, g: G) -> Result<[Vec3; 5]>
where
    G: Fn(f64) -> Result<Vec3>,
{
    Ok([
        g(s - 2.0 * h)?,
        g(s - h)?,
        g(s)?,
        g(s + h)?,
        g(s + 2.0 * h)?,
    ])
}

/// Residual of `v″ + (c₁ tan θ)²/(1 + (c₁s + c₂)²)²·v = 0` at `s`.
///
/// `params` is taken as given rather than fitted, so the check does not depend on the
/// fitting code.
pub fn ode_residual(
    curve: &AnalyticCurve,
    params: &FamilyParams,
    s: f64,
    method: OdeMethod,
) -> Result<OdeCheck> {
    let eps = Tolerances::default().eps_kappa;
    match method {
        OdeMethod::Jet => {
            if !curve.has_closed_form() {
                return Err(Error::InvalidParams(
                    "jet ODE residual needs a closed-form curve".into(),
                ));
            }
            let closed = curve.with_backend(Backend::ClosedForm)?;
            let vj = frame_jet(&closed, s, eps)?.v();
            Ok(ode_check(params, s, vj.value(), vj.derivative(2)))
        }
        OdeMethod::Stencil { relative_step } => {
            curve
                .domain()
                .require_stencil(s, 2.0 * relative_step * (1.0 + s.abs()))?;
            ode_residual_of(|x| v_at(curve, x, eps), params, s, relative_step)
        }
    }
}

/// [`ode_residual`] for an arbitrary field `v`, with `v″` from a 5-point stencil of step
/// `relative_step·(1 + |s|)`.
pub fn ode_residual_of<V>(v: V, params: &FamilyParams, s: f64, relative_step: f64) -> Result<OdeCheck>
where
    V: Fn(f64) -> Result<Vec3>,
{
    let h = relative_step * (1.0 + s.abs());
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep(h));
    }
    let w = stencil_values(s, h, v)?;
    let v2 = (w[1] * 16.0 + w[3] * 16.0 - w[0] - w[4] - w[2] * 30.0) / (12.0 * h * h);
    Ok(ode_check(params, s, w[2], v2))
}

fn ode_check(params: &FamilyParams, s: f64, v: Vec3, v2: Vec3) -> OdeCheck {
    let residual = v2 + v * ode_coefficient(params, s);
    OdeCheck {
        v,
        residual,
        residual_norm: residual.norm(),
    }
}

/// Intermediate identities behind the ODE, evaluated exactly on a closed-form curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeWitnesses {
    /// `ε c₁ b − (v′ + κ(1 + f²)n)`.
    pub first_derivative: Vec3,
    /// `v″ + κ(1 + f²)n′`.
    pub second_derivative: Vec3,
    /// `(κ(1 + f²))′ + c₁fκ`.
    pub amplitude: f64,
}

pub fn ode_witnesses(curve: &AnalyticCurve, params: &FamilyParams, s: f64) -> Result<OdeWitnesses> {
    let fj = frame_jet(curve, s, Tolerances::default().eps_kappa)?;
    let f = params.f(s);
    let fj_f = Jet::variable(s) * params.c1() + params.c2();
    let w = fj.kappa * (fj_f * fj_f + 1.0);
    let v = fj.v();
    let b = fj.b.value();
    let n = fj.n.value();
    let dn = fj.n.derivative(1);
    Ok(OdeWitnesses {
        first_derivative: b * (params.orientation() * params.c1())
            - (v.derivative(1) + n * w.value()),
        second_derivative: v.derivative(2) + dn * w.value(),
        amplitude: w.derivative(1) + params.c1() * f * fj.kappa.value(),
    })
}
