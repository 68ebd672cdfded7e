//! Arc-length parametrized curves with a derivative oracle.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diff::{self, MAX_STENCIL_ORDER};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec, JET_ORDER};
use crate::vec3::Vec3;

/// Closed parameter interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(Error::InvalidParams(format!(
                "domain [{min}, {max}] is not a finite interval"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.min && s <= self.max
    }

    pub fn require(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                s,
                min: self.min,
                max: self.max,
            })
        }
    }

    /// Checks that `[s − reach, s + reach]` lies inside the domain.
    pub fn require_stencil(&self, s: f64, reach: f64) -> Result<()> {
        self.require(s)?;
        let (lo, hi) = (s - reach, s + reach);
        if lo < self.min || hi > self.max {
            return Err(Error::StencilOutOfDomain {
                s,
                lo,
                hi,
                min: self.min,
                max: self.max,
            });
        }
        Ok(())
    }

    /// `n` uniformly spaced parameters from `min` to `max` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.min, self.max, n)
    }

    /// Shrinks the interval by `margin` on both sides.
    pub fn shrink(&self, margin: f64) -> Result<Self> {
        Domain::new(self.min + margin, self.max - margin)
    }
}

/// `n` uniformly spaced values from `a` to `b`; the endpoints are hit exactly.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + i as f64 * step })
                .collect()
        }
    }
}

/// A curve given by a formula that can be evaluated on [`Jet`]s, which yields exact
/// derivatives of every order up to [`JET_ORDER`].
pub trait ClosedForm: Send + Sync {
    fn eval(&self, s: Jet) -> JetVec;
}

impl<F> ClosedForm for F
where
    F: Fn(Jet) -> JetVec + Send + Sync,
{
    fn eval(&self, s: Jet) -> JetVec {
        self(s)
    }
}

/// Step sizes used by the finite-difference backend.
///
/// The base scale at parameter `s` is `length·(1 + |s|/length)` when `grow_with_s` is set and
/// `length` otherwise; each derivative family multiplies that scale by its relative step.
/// With the defaults, first and second derivatives use `h = 1e-4·(1 + |s|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub length: f64,
    pub grow_with_s: bool,
    /// Relative step for derivative orders 1 and 2.
    pub low_order: f64,
    /// Relative step for derivative orders 3 and 4.
    pub high_order: f64,
    /// Relative step of the 5-point stencil applied to τ/κ (for σ) and to frame fields.
    pub ratio: f64,
    /// Richardson levels for orders 1 and 2.
    pub richardson_low: u32,
    /// Richardson levels for orders 3 and 4.
    pub richardson_high: u32,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            length: 1.0,
            grow_with_s: true,
            low_order: 1e-4,
            high_order: 1e-3,
            ratio: 1e-2,
            richardson_low: 0,
            richardson_high: 1,
        }
    }
}

impl StepPolicy {
    /// Policy for a curve whose geometry varies on the length scale `length`, with steps
    /// that do not grow with `|s|`. Suited to near-straight or fast-turning curves far from
    /// the origin, where the default absolute steps are either swamped by rounding or too
    /// coarse.
    pub fn for_length_scale(length: f64) -> Self {
        Self {
            length,
            grow_with_s: false,
            low_order: 1e-2,
            high_order: 4e-2,
            ratio: 0.3,
            richardson_low: 1,
            richardson_high: 3,
        }
    }

    fn scale(&self, s: f64) -> f64 {
        if self.grow_with_s {
            self.length + s.abs()
        } else {
            self.length
        }
    }

    /// Base step and Richardson levels for a derivative order.
    pub fn derivative_step(&self, s: f64, order: usize) -> (f64, u32) {
        if order <= 2 {
            (self.low_order * self.scale(s), self.richardson_low)
        } else {
            (self.high_order * self.scale(s), self.richardson_high)
        }
    }

    /// Step of the outer stencil applied to derived scalar or frame fields.
    pub fn field_step(&self, s: f64) -> f64 {
        self.ratio * self.scale(s)
    }

    /// Half-width of the parameter interval touched when computing derivatives up to
    /// `max_order` at `s`.
    pub fn reach(&self, s: f64, max_order: usize) -> f64 {
        (1..=max_order)
            .map(|k| {
                let (h, lev) = self.derivative_step(s, k);
                diff::richardson_reach(h, lev)
            })
            .fold(0.0, f64::max)
    }
}

/// Which derivative oracle a curve uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    FiniteDifference(StepPolicy),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::ClosedForm => "closed-form",
            Backend::FiniteDifference(_) => "finite-difference",
        }
    }
}

type PositionFn = dyn Fn(f64) -> Vec3 + Send + Sync;

#[derive(Clone)]
enum Source {
    Closed(Arc<dyn ClosedForm>),
    Position(Arc<PositionFn>),
}

/// A unit-speed curve on a parameter domain together with its derivative oracle.
///
/// Cloning is cheap; the underlying formula is shared.
#[derive(Clone)]
pub struct AnalyticCurve {
    domain: Domain,
    source: Source,
    backend: Backend,
}

impl fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticCurve")
            .field("domain", &self.domain)
            .field("backend", &self.backend)
            .finish_non_exhaustive()
    }
}

impl AnalyticCurve {
    /// A closed-form curve using the exact (jet) backend.
    pub fn closed_form<C: ClosedForm + 'static>(domain: Domain, formula: C) -> Self {
        Self {
            domain,
            source: Source::Closed(Arc::new(formula)),
            backend: Backend::ClosedForm,
        }
    }

    /// A curve known only through its position, differentiated numerically.
    pub fn from_position<F>(domain: Domain, position: F, policy: StepPolicy) -> Self
    where
        F: Fn(f64) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            domain,
            source: Source::Position(Arc::new(position)),
            backend: Backend::FiniteDifference(policy),
        }
    }

    /// Same curve, different oracle. A position-only curve cannot switch to the closed form.
    pub fn with_backend(&self, backend: Backend) -> Result<Self> {
        if matches!(backend, Backend::ClosedForm) && matches!(self.source, Source::Position(_)) {
            return Err(Error::InvalidParams(
                "curve has no closed form; only the finite-difference backend is available".into(),
            ));
        }
        Ok(Self {
            backend,
            ..self.clone()
        })
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        Self {
            domain,
            ..self.clone()
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(self.source, Source::Closed(_))
    }

    fn raw_position(&self, s: f64) -> Vec3 {
        match &self.source {
            Source::Closed(c) => c.eval(Jet::constant(s)).value(),
            Source::Position(p) => p(s),
        }
    }

    pub fn position(&self, s: f64) -> Result<Vec3> {
        self.domain.require(s)?;
        Ok(self.raw_position(s))
    }

    /// Taylor jet of the position at `s`. Only available for closed-form sources.
    pub fn jet(&self, s: f64) -> Result<JetVec> {
        self.domain.require(s)?;
        match &self.source {
            Source::Closed(c) => Ok(c.eval(Jet::variable(s))),
            Source::Position(_) => Err(Error::InvalidParams(
                "curve has no closed form; jets are unavailable".into(),
            )),
        }
    }

    /// The `order`-th derivative of the position at `s` through the active backend.
    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        match self.backend {
            Backend::ClosedForm => {
                if order > JET_ORDER {
                    return Err(Error::UnsupportedOrder {
                        order,
                        max: JET_ORDER,
                    });
                }
                Ok(self.jet(s)?.derivative(order))
            }
            Backend::FiniteDifference(policy) => {
                if order > MAX_STENCIL_ORDER {
                    return Err(Error::UnsupportedOrder {
                        order,
                        max: MAX_STENCIL_ORDER,
                    });
                }
                if order == 0 {
                    return self.position(s);
                }
                let (h, levels) = policy.derivative_step(s, order);
                self.domain
                    .require_stencil(s, diff::richardson_reach(h, levels))?;
                diff::richardson(|x| self.raw_position(x), s, order, h, levels)
            }
        }
    }

    /// Plain 5-point central difference of the position with an explicit step, independent
    /// of the curve's backend.
    pub fn finite_difference(&self, s: f64, order: usize, step: f64) -> Result<Vec3> {
        diff::finite_difference(|x| self.raw_position(x), self.domain, s, order, step)
    }
}

/// Norm of the velocity; equals 1 for an arc-length parametrization.
pub fn speed(curve: &AnalyticCurve, s: f64) -> Result<f64> {
    Ok(curve.derivative(s, 1)?.norm())
}
