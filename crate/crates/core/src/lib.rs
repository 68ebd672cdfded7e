//! Rectifying slant helices in Euclidean 3-space.
//!
//! The crate builds the closed-form family of rectifying slant helices, computes Frenet
//! data for arbitrary unit-speed curves (closed form through jets, or finite differences),
//! and classifies curves as rectifying curves and slant helices.

pub mod classify;
pub mod cli;
pub mod curve;
pub mod diff;
pub mod error;
pub mod family;
pub mod frenet;
pub mod indicatrix;
pub mod io;
pub mod jet;
pub mod samples;
pub mod tolerance;
pub mod vec3;
pub mod verify;

pub use classify::{classify_full, Classification, RectifyingFit, SlantVerdict};
pub use curve::{AnalyticCurve, Backend, Domain, StepPolicy};
pub use error::{Error, Result};
pub use family::{make_rs_helix, FamilyParams};
pub use frenet::{frenet_at, FrenetApparatus};
pub use indicatrix::{indicatrix, latitude_check, SphericalTrace, Which};
pub use samples::{CurveSamples, FramedSamples, Sample};
pub use tolerance::Tolerances;
pub use vec3::Vec3;
pub use verify::{verify_family, VerificationReport, VerifyOptions};
