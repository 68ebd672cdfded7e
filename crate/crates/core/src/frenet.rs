//! The Frenet apparatus `{t, n, b, κ, τ}` and the slant-helix invariant
//! `σ = κ²/(κ²+τ²)^{3/2} · (τ/κ)′`.

use serde::{Deserialize, Serialize};

use crate::curve::{AnalyticCurve, Backend, StepPolicy};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec};
use crate::tolerance::Tolerances;
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetApparatus {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
}

impl FrenetApparatus {
    /// Largest deviation of `{t, n, b}` from an orthonormal frame.
    pub fn orthonormality_residual(&self) -> f64 {
        let (t, n, b) = (self.t, self.n, self.b);
        [
            t.dot(n).abs(),
            t.dot(b).abs(),
            n.dot(b).abs(),
            (t.norm() - 1.0).abs(),
            (n.norm() - 1.0).abs(),
            (b.norm() - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn is_right_handed(&self) -> bool {
        self.t.cross(self.n).dot(self.b) > 0.0
    }

    /// `τ/κ`, the quantity that is linear in `s` for rectifying curves.
    pub fn ratio(&self) -> f64 {
        self.tau / self.kappa
    }
}

/// `σ` from curvature, torsion and the derivative of their ratio.
pub fn sigma_from(kappa: f64, tau: f64, ratio_derivative: f64) -> f64 {
    let k2 = kappa * kappa;
    k2 / (k2 + tau * tau).powf(1.5) * ratio_derivative
}

/// Frenet fields as jets, for closed-form curves. Carries enough orders for `v = n′/κ`
/// and its second derivative.
#[derive(Debug, Clone, Copy)]
pub struct FrameJet {
    pub t: JetVec,
    pub n: JetVec,
    pub b: JetVec,
    pub kappa: Jet,
    pub tau: Jet,
}

impl FrameJet {
    /// Multiplies the curvature by a constant while keeping everything else, including the
    /// torsion and the frame. Used to inject a known defect into verification runs.
    pub fn scale_curvature(mut self, factor: f64) -> Self {
        self.kappa = self.kappa * factor;
        self
    }

    pub fn ratio(&self) -> Jet {
        self.tau / self.kappa
    }

    pub fn apparatus(&self) -> FrenetApparatus {
        let kappa = self.kappa.value();
        let tau = self.tau.value();
        FrenetApparatus {
            t: self.t.value(),
            n: self.n.value(),
            b: self.b.value(),
            kappa,
            tau,
            sigma: sigma_from(kappa, tau, self.ratio().derivative(1)),
        }
    }

    /// `v = n′/κ` as a jet.
    pub fn v(&self) -> JetVec {
        self.n.differentiate().scale(self.kappa.recip())
    }
}

/// Frenet fields as jets at `s`. Requires a closed-form source.
pub fn frame_jet(curve: &AnalyticCurve, s: f64, eps_kappa: f64) -> Result<FrameJet> {
    let alpha = curve.jet(s)?;
    let d1 = alpha.differentiate();
    let d2 = d1.differentiate();
    let d3 = d2.differentiate();
    let kappa = d2.norm();
    if !(kappa.value() > eps_kappa) {
        return Err(Error::CurvatureVanishes {
            s,
            kappa: kappa.value(),
            floor: eps_kappa,
        });
    }
    let n = d2.scale(kappa.recip());
    let b = d1.cross(&n);
    let tau = d1.cross(&d2).dot(&d3) / (kappa * kappa);
    Ok(FrameJet {
        t: d1,
        n,
        b,
        kappa,
        tau,
    })
}

/// Frenet apparatus at `s` using the default curvature floor.
pub fn frenet_at(curve: &AnalyticCurve, s: f64) -> Result<FrenetApparatus> {
    frenet_at_with(curve, s, Tolerances::default().eps_kappa)
}

/// Frenet apparatus at `s` with an explicit curvature floor.
///
/// The closed-form backend takes every quantity, including `(τ/κ)′`, from the curve's jet.
/// The finite-difference backend estimates `α′, α″, α‴` with 5-point stencils and `(τ/κ)′`
/// with a 5-point stencil on the ratio.
pub fn frenet_at_with(curve: &AnalyticCurve, s: f64, eps_kappa: f64) -> Result<FrenetApparatus> {
    curve.domain().require(s)?;
    match curve.backend() {
        Backend::ClosedForm => Ok(frame_jet(curve, s, eps_kappa)?.apparatus()),
        Backend::FiniteDifference(policy) => fd_apparatus(curve, s, eps_kappa, &policy),
    }
}

struct PointFrame {
    t: Vec3,
    n: Vec3,
    b: Vec3,
    kappa: f64,
    tau: f64,
}

fn fd_point(curve: &AnalyticCurve, s: f64, eps_kappa: f64) -> Result<PointFrame> {
    let d1 = curve.derivative(s, 1)?;
    let d2 = curve.derivative(s, 2)?;
    let d3 = curve.derivative(s, 3)?;
    frame_from_derivatives(s, d1, d2, d3, eps_kappa).map(|(t, n, b, kappa, tau)| PointFrame {
        t,
        n,
        b,
        kappa,
        tau,
    })
}

/// `(t, n, b, κ, τ)` from the first three derivatives of a unit-speed curve.
pub(crate) fn frame_from_derivatives(
    s: f64,
    d1: Vec3,
    d2: Vec3,
    d3: Vec3,
    eps_kappa: f64,
) -> Result<(Vec3, Vec3, Vec3, f64, f64)> {
    let kappa = d2.norm();
    if !(kappa > eps_kappa) {
        return Err(Error::CurvatureVanishes {
            s,
            kappa,
            floor: eps_kappa,
        });
    }
    let n = d2 / kappa;
    let b = d1.cross(n);
    let tau = d1.cross(d2).dot(d3) / (kappa * kappa);
    Ok((d1, n, b, kappa, tau))
}

fn fd_apparatus(
    curve: &AnalyticCurve,
    s: f64,
    eps_kappa: f64,
    policy: &StepPolicy,
) -> Result<FrenetApparatus> {
    let centre = fd_point(curve, s, eps_kappa)?;
    let h = policy.field_step(s);
    curve.domain().require_stencil(s, 2.0 * h)?;
    let ratio = |x: f64| -> Result<f64> {
        let p = fd_point(curve, x, eps_kappa)?;
        Ok(p.tau / p.kappa)
    };
    let r = [
        ratio(s - 2.0 * h)?,
        ratio(s - h)?,
        ratio(s + h)?,
        ratio(s + 2.0 * h)?,
    ];
    let ratio_derivative = (r[0] - 8.0 * r[1] + 8.0 * r[2] - r[3]) / (12.0 * h);
    Ok(FrenetApparatus {
        t: centre.t,
        n: centre.n,
        b: centre.b,
        kappa: centre.kappa,
        tau: centre.tau,
        sigma: sigma_from(centre.kappa, centre.tau, ratio_derivative),
    })
}
