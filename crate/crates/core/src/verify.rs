//! The closed-form verification suite for a family member.

use serde::{Deserialize, Serialize};

use crate::curve::{uniform_grid, AnalyticCurve, Domain};
use crate::error::{Error, Result};
use crate::family::{
    axis_components, closed_form_kappa_tau, cone_of, cone_residual, make_rs_helix_on,
    FamilyParams,
};
use crate::frenet::{frame_jet, FrameJet};
use crate::tolerance::Tolerances;
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("grid needs at least 2 points, got {n}")));
        }
        Domain::new(s_min, s_max)?;
        if s_min >= s_max {
            return Err(Error::InvalidParams(format!(
                "grid needs s_min < s_max, got [{s_min}, {s_max}]"
            )));
        }
        Ok(Self { s_min, s_max, n })
    }

    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.s_min, self.s_max, self.n)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            s_min: -3.0,
            s_max: 3.0,
            n: 1001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    /// Multiplies the computed curvature before any check runs. `1.0` in normal use; other
    /// values inject a known defect that the suite has to catch.
    pub kappa_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            tolerances: Tolerances::default(),
            kappa_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            // NaN residuals fail.
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub c1: f64,
    pub c2: f64,
    pub cos_theta: f64,
    pub theta: f64,
}

impl From<&FamilyParams> for ParamsRecord {
    fn from(p: &FamilyParams) -> Self {
        Self {
            c1: p.c1(),
            c2: p.c2(),
            cos_theta: p.cos_theta(),
            theta: p.theta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: Option<ParamsRecord>,
    pub grid: Option<GridSpec>,
    pub backend: String,
    pub tool_version: String,
}

impl Provenance {
    pub fn new(params: Option<ParamsRecord>, grid: Option<GridSpec>, backend: &str) -> Self {
        Self {
            params,
            grid,
            backend: backend.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
    pub provenance: Provenance,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>, provenance: Provenance) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        Self {
            checks,
            overall,
            provenance,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Running maximum that lets NaN win, so a NaN anywhere fails the check.
fn worst(acc: f64, x: f64) -> f64 {
    if x.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

struct PointData {
    s: f64,
    position: Vec3,
    speed: f64,
    frame: FrameJet,
}

/// Runs every closed-form check on the member `params` and collects the residuals.
///
/// The ODE check uses the measured coefficient `κ² + τ²`, which equals
/// `(c₁ tan θ)²/(1 + f²)²` on the family, so a defect in the computed curvature shows up
/// there even though `v″ + q·v = 0` is linear in `v`.
pub fn verify_family(params: &FamilyParams, options: &VerifyOptions) -> Result<VerificationReport> {
    let grid = options.grid;
    GridSpec::new(grid.s_min, grid.s_max, grid.n)?;
    if !(options.kappa_scale.is_finite() && options.kappa_scale > 0.0) {
        return Err(Error::InvalidParams(format!(
            "curvature scale must be positive, got {}",
            options.kappa_scale
        )));
    }
    let tol = options.tolerances;
    let st = tol.suite;
    let curve = make_rs_helix_on(params, Domain::new(grid.s_min, grid.s_max)?);
    let data = collect(&curve, &grid.points(), options.kappa_scale, tol.eps_kappa)?;

    let eps = params.orientation();
    let cone = cone_of(params);
    let target_lambda2 = eps * params.cos_theta();

    let mut unit_speed = 0.0;
    let mut kappa_tau = 0.0;
    let mut ratio_line = 0.0;
    let mut sigma_sum = 0.0;
    let mut sigmas = Vec::with_capacity(data.len());
    let mut cone_max = 0.0;
    let mut ode = 0.0;
    let mut axis = 0.0;
    let mut lambda2 = 0.0;
    let mut leak = 0.0;
    let mut latitudes = Vec::with_capacity(data.len());

    for p in &data {
        let fr = p.frame.apparatus();
        let (k_cf, t_cf) = closed_form_kappa_tau(params, p.s);
        unit_speed = worst(unit_speed, (p.speed - 1.0).abs());
        kappa_tau = worst(kappa_tau, (fr.kappa - k_cf).abs().max((fr.tau - t_cf).abs()));
        ratio_line = worst(ratio_line, (fr.ratio() - eps * params.f(p.s)).abs());
        sigma_sum += fr.sigma;
        sigmas.push(fr.sigma);
        cone_max = worst(cone_max, cone_residual(p.position, &cone).abs());

        let v = p.frame.v();
        let q = fr.kappa * fr.kappa + fr.tau * fr.tau;
        ode = worst(ode, (v.derivative(2) + v.value() * q).norm());

        let lam = axis_components(params, p.s);
        axis = worst(axis, (lam.reconstruct(fr.t, fr.n, fr.b) - Vec3::E3).norm());
        let n3 = fr.n.dot(Vec3::E3);
        lambda2 = worst(lambda2, (n3 - target_lambda2).abs());
        latitudes.push(n3);
        leak = worst(leak, p.position.dot(fr.n).abs());
    }

    let sigma_mean = sigma_sum / sigmas.len() as f64;
    let sigma_dev = sigmas.iter().map(|x| (x - sigma_mean).abs()).fold(0.0, worst);
    let lat_mean = latitudes.iter().sum::<f64>() / latitudes.len() as f64;
    let lat_dev = latitudes.iter().map(|x| (x - lat_mean).abs()).fold(0.0, worst);

    let checks = vec![
        Check::new("unit_speed", unit_speed, st.unit_speed),
        Check::new("kappa_tau_law", kappa_tau, st.kappa_tau_law),
        Check::new("ratio_line", ratio_line, st.ratio_line),
        Check::new("sigma_constancy", sigma_dev, st.sigma),
        Check::new("sigma_cot_theta", (sigma_mean - params.sigma()).abs(), st.sigma),
        Check::new("cone_residual", cone_max, st.cone),
        Check::new("ode_residual", ode, st.ode),
        Check::new("axis_reconstruction", axis, st.axis),
        Check::new("lambda2", lambda2, st.lambda2),
        Check::new(
            "normal_latitude",
            lat_dev.max((lat_mean - target_lambda2).abs()),
            st.latitude,
        ),
        Check::new("normal_leak", leak, st.normal_leak),
    ];
    Ok(VerificationReport::new(
        checks,
        Provenance::new(Some(params.into()), Some(grid), "closed-form"),
    ))
}

fn collect(
    curve: &AnalyticCurve,
    grid: &[f64],
    kappa_scale: f64,
    eps_kappa: f64,
) -> Result<Vec<PointData>> {
    grid.iter()
        .map(|&s| {
            let jet = curve.jet(s)?;
            let mut frame = frame_jet(curve, s, eps_kappa)?;
            if kappa_scale != 1.0 {
                frame = frame.scale_curvature(kappa_scale);
            }
            Ok(PointData {
                s,
                position: jet.value(),
                speed: jet.derivative(1).norm(),
                frame,
            })
        })
        .collect()
}
