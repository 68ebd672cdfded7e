//! The closed-form family of rectifying slant helices lying on the cone
//! `tan²θ·(x² + y²) = z²`, and its closed-form companions.
//!
//! A member is fixed by `(c₁, c₂, θ)` with `f(s) = c₁s + c₂` and `h(s) = sec θ·arctan f(s)`:
//!
//! ```text
//! α(s) = −√(1 + f²)/c₁ · (cos θ·cos h, cos θ·sin h, −sin θ)
//! ```
//!
//! The Frenet frame of `α` is oriented by `ε = sign(c₁·tan θ)`: the principal normal is
//! `ε·(sin θ·cos h, sin θ·sin h, cos θ)` and `τ/κ = ε·f`. For `c₁ > 0` and `0 < θ < π/2`
//! (`ε = 1`) these reduce to the familiar `n₃ = cos θ` and `τ/κ = c₁s + c₂`.

use serde::{Deserialize, Serialize};

use crate::curve::{AnalyticCurve, Domain};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec};
use crate::vec3::Vec3;

/// Default parameter domain of generated members.
pub const DEFAULT_DOMAIN: (f64, f64) = (-10.0, 10.0);

/// Angles whose sine or cosine falls below this are treated as multiples of π/2.
const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    c1: f64,
    c2: f64,
    theta: f64,
}

impl FamilyParams {
    pub fn new(c1: f64, c2: f64, theta: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidParams("c1, c2 and theta must be finite".into()));
        }
        if c1 == 0.0 {
            return Err(Error::InvalidParams("c1 must be nonzero".into()));
        }
        let (sin, cos) = theta.sin_cos();
        if sin.abs() < ANGLE_EPS || cos.abs() < ANGLE_EPS {
            return Err(Error::InvalidParams(format!(
                "theta = {theta} is a multiple of pi/2; tan(theta) must be finite and nonzero"
            )));
        }
        Ok(Self { c1, c2, theta })
    }

    /// Parameters with `θ = arccos(cos_theta) ∈ (0, π)`.
    pub fn from_cos_theta(c1: f64, c2: f64, cos_theta: f64) -> Result<Self> {
        if !(cos_theta.is_finite() && cos_theta.abs() < 1.0 && cos_theta != 0.0) {
            return Err(Error::InvalidParams(format!(
                "cos(theta) = {cos_theta} must lie in (-1, 1) and be nonzero; \
                 theta may not be a multiple of pi/2"
            )));
        }
        Self::new(c1, c2, cos_theta.acos())
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }

    pub fn sin_theta(&self) -> f64 {
        self.theta.sin()
    }

    pub fn tan_theta(&self) -> f64 {
        self.theta.tan()
    }

    /// `c₃ = |c₁·tan θ|`, the curvature amplitude.
    pub fn c3(&self) -> f64 {
        (self.c1 * self.tan_theta()).abs()
    }

    /// `ε = sign(c₁·tan θ)`: orientation of the generated curve's Frenet frame relative to
    /// the closed-form normal and the `e₃` axis.
    pub fn orientation(&self) -> f64 {
        (self.c1 * self.tan_theta()).signum()
    }

    /// `f(s) = c₁s + c₂`.
    pub fn f(&self, s: f64) -> f64 {
        self.c1 * s + self.c2
    }

    /// `h(s) = sec θ·arctan f(s)`.
    pub fn h(&self, s: f64) -> f64 {
        self.f(s).atan() / self.cos_theta()
    }

    /// The value of the slant-helix invariant σ on every member, `cot θ`.
    pub fn sigma(&self) -> f64 {
        self.cos_theta() / self.sin_theta()
    }

    /// Parameter at which the torsion changes sign.
    pub fn inflection(&self) -> f64 {
        -self.c2 / self.c1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyEvaluation {
    pub s: f64,
    pub f_value: f64,
    pub h_value: f64,
    pub kappa: f64,
    pub tau: f64,
}

pub fn evaluate(params: &FamilyParams, s: f64) -> FamilyEvaluation {
    let (kappa, tau) = closed_form_kappa_tau(params, s);
    FamilyEvaluation {
        s,
        f_value: params.f(s),
        h_value: params.h(s),
        kappa,
        tau,
    }
}

/// The family member as a closed-form curve on [`DEFAULT_DOMAIN`].
pub fn make_rs_helix(params: &FamilyParams) -> AnalyticCurve {
    let (a, b) = DEFAULT_DOMAIN;
    make_rs_helix_on(params, Domain { min: a, max: b })
}

pub fn make_rs_helix_on(params: &FamilyParams, domain: Domain) -> AnalyticCurve {
    let p = *params;
    AnalyticCurve::closed_form(domain, move |s: Jet| position_jet(&p, s))
}

fn position_jet(p: &FamilyParams, s: Jet) -> JetVec {
    let (sin_t, cos_t) = p.theta.sin_cos();
    let f = s * p.c1 + p.c2;
    let radius = (f * f + 1.0).sqrt() * (-1.0 / p.c1);
    let (sh, ch) = (f.atan() / cos_t).sin_cos();
    JetVec::new(
        radius * ch * cos_t,
        radius * sh * cos_t,
        radius * (-sin_t),
    )
}

/// Position of the member at `s` (no domain restriction).
pub fn position(params: &FamilyParams, s: f64) -> Vec3 {
    position_jet(params, Jet::constant(s)).value()
}

/// Curvature and torsion laws `κ = c₃/(1+f²)^{3/2}` and `τ = ε·κ·f`.
pub fn closed_form_kappa_tau(params: &FamilyParams, s: f64) -> (f64, f64) {
    let f = params.f(s);
    let kappa = params.c3() / (1.0 + f * f).powf(1.5);
    (kappa, params.orientation() * kappa * f)
}

/// The general curvature/torsion pair `c₃/(1+f²)^{3/2}`, `c₃·f/(1+f²)^{3/2}` for an
/// arbitrary positive amplitude `c₃`.
pub fn kappa_tau_with_amplitude(c1: f64, c2: f64, c3: f64, s: f64) -> (f64, f64) {
    let f = c1 * s + c2;
    let w = (1.0 + f * f).powf(-1.5);
    (c3 * w, c3 * f * w)
}

/// Closed-form principal normal `(sin θ·cos h, sin θ·sin h, cos θ)`.
///
/// Its angle with `e₃` is `θ` at every `s`. The Frenet normal of the generated curve is
/// this vector times [`FamilyParams::orientation`]; see [`frenet_normal`].
pub fn closed_form_normal(params: &FamilyParams, s: f64) -> Vec3 {
    let (sin_t, cos_t) = params.theta.sin_cos();
    let (sh, ch) = params.h(s).sin_cos();
    Vec3::new(sin_t * ch, sin_t * sh, cos_t)
}

/// The principal normal in the orientation of the generated curve's Frenet frame.
pub fn frenet_normal(params: &FamilyParams, s: f64) -> Vec3 {
    closed_form_normal(params, s) * params.orientation()
}

/// Frenet frame of the member written out in closed form, without derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFrame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

impl ClosedFrame {
    /// `v = n′/κ = −t + (τ/κ)b`.
    pub fn v(&self, params: &FamilyParams, s: f64) -> Vec3 {
        self.b * (params.orientation() * params.f(s)) - self.t
    }
}

/// `t = −(f cos θ cos h − sin h, f cos θ sin h + cos h, −f sin θ)/√(1+f²)`, with `n` from
/// [`frenet_normal`] and `b = t × n`. Every term is of order one, so the frame is accurate
/// to rounding even where the jet of `α` suffers cancellation.
pub fn closed_form_frame(params: &FamilyParams, s: f64) -> ClosedFrame {
    let f = params.f(s);
    let r = (1.0 + f * f).sqrt();
    let (sin_t, cos_t) = params.theta.sin_cos();
    let (sh, ch) = params.h(s).sin_cos();
    let t = Vec3::new(f * cos_t * ch - sh, f * cos_t * sh + ch, -f * sin_t) * (-1.0 / r);
    let n = frenet_normal(params, s);
    ClosedFrame { t, n, b: t.cross(n) }
}

/// Coordinates of the fixed axis `u = e₃` in the moving frame `{t, n, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisComponents {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl AxisComponents {
    pub fn norm_squared(&self) -> f64 {
        self.lambda1.powi(2) + self.lambda2.powi(2) + self.lambda3.powi(2)
    }

    /// `λ₁t + λ₂n + λ₃b`.
    pub fn reconstruct(&self, t: Vec3, n: Vec3, b: Vec3) -> Vec3 {
        t * self.lambda1 + n * self.lambda2 + b * self.lambda3
    }
}

/// `λ₁ = f sin θ/√(1+f²)`, `λ₂ = ε cos θ`, `λ₃ = ε sin θ/√(1+f²)`, so that
/// `λ₁t + λ₂n + λ₃b = e₃` along the generated curve and `λ₁ = (τ/κ)·λ₃`.
pub fn axis_components(params: &FamilyParams, s: f64) -> AxisComponents {
    let f = params.f(s);
    let r = (1.0 + f * f).sqrt();
    let (sin_t, cos_t) = params.theta.sin_cos();
    let eps = params.orientation();
    AxisComponents {
        lambda1: f * sin_t / r,
        lambda2: eps * cos_t,
        lambda3: eps * sin_t / r,
    }
}

/// The cone `slope_sq·(x² + y²) = z²` with apex at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub slope_sq: f64,
}

impl ConeParams {
    pub fn new(slope_sq: f64) -> Result<Self> {
        if !(slope_sq > 0.0 && slope_sq.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "cone slope² must be positive and finite, got {slope_sq}"
            )));
        }
        Ok(Self { slope_sq })
    }
}

pub fn cone_of(params: &FamilyParams) -> ConeParams {
    ConeParams {
        slope_sq: params.tan_theta().powi(2),
    }
}

/// `slope_sq·(x² + y²) − z²`; zero on the cone.
pub fn cone_residual(p: Vec3, cone: &ConeParams) -> f64 {
    cone.slope_sq * (p.x * p.x + p.y * p.y) - p.z * p.z
}

/// `|α(s)|² = s² + 2c₂s/c₁ + (1 + c₂²)/c₁²`.
pub fn position_norm_squared_law(params: &FamilyParams, s: f64) -> f64 {
    let (c1, c2) = (params.c1, params.c2);
    s * s + 2.0 * c2 * s / c1 + (1.0 + c2 * c2) / (c1 * c1)
}
