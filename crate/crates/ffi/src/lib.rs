//! C interface to `rsh-core`.
//!
//! Every function returns an [`RshStatus`]. On failure a description is stored per thread
//! and can be read with [`rsh_last_error_message`]. Panics never cross the boundary; they
//! are reported as [`RshStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rsh_core::curve::Domain;
use rsh_core::family::make_rs_helix_on;
use rsh_core::frenet::frenet_at_with;
use rsh_core::samples::frames_from_samples;
use rsh_core::verify::GridSpec;
use rsh_core::{
    classify_full, verify_family, AnalyticCurve, CurveSamples, Error, FamilyParams, Sample,
    Tolerances, Vec3, VerifyOptions,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RshStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    OutOfDomain = 3,
    CurvatureVanishes = 4,
    InsufficientSamples = 5,
    InvalidSamples = 6,
    Numerical = 7,
    Internal = 8,
}

impl From<&Error> for RshStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::OutOfDomain { .. } | Error::StencilOutOfDomain { .. } => RshStatus::OutOfDomain,
            Error::CurvatureVanishes { .. } => RshStatus::CurvatureVanishes,
            Error::InvalidParams(_) | Error::Parse(_) => RshStatus::InvalidParams,
            Error::InsufficientSamples { .. } => RshStatus::InsufficientSamples,
            Error::InvalidSamples(_) => RshStatus::InvalidSamples,
            Error::EmptyTrace | Error::UnsupportedOrder { .. } | Error::InvalidStep(_) => {
                RshStatus::Numerical
            }
            Error::Io(_) => RshStatus::Internal,
        }
    }
}

/// Opaque handle to one family member and the parameter interval it is defined on.
pub struct RshHelix {
    params: FamilyParams,
    curve: AnalyticCurve,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RshFrenet {
    pub t: [f64; 3],
    pub n: [f64; 3],
    pub b: [f64; 3],
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RshAnalysis {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub rms_residual: f64,
    pub is_rectifying: bool,
    pub sigma_mean: f64,
    pub sigma_max_dev: f64,
    pub is_slant: bool,
    pub normal_leak_max: f64,
    pub in_rectifying_plane: bool,
    pub verdict: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard<F: FnOnce() -> Result<(), (RshStatus, String)>>(f: F) -> RshStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RshStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RshStatus::Internal
        }
    }
}

fn lib(e: Error) -> (RshStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (RshStatus, String) {
    (RshStatus::NullPointer, format!("{what} is null"))
}

/// Creates a family member on `[s_min, s_max]`. `*out` receives a handle to release with
/// [`rsh_helix_free`], and is set to null on failure.
///
/// # Safety
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rsh_helix_new(
    c1: f64,
    c2: f64,
    cos_theta: f64,
    s_min: f64,
    s_max: f64,
    out: *mut *mut RshHelix,
) -> RshStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let params = FamilyParams::from_cos_theta(c1, c2, cos_theta).map_err(lib)?;
        let domain = Domain::new(s_min, s_max).map_err(lib)?;
        let curve = make_rs_helix_on(&params, domain);
        *out = Box::into_raw(Box::new(RshHelix { params, curve }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `helix` must be null or a handle from [`rsh_helix_new`] that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn rsh_helix_free(helix: *mut RshHelix) {
    if !helix.is_null() {
        drop(Box::from_raw(helix));
    }
}

/// Writes `α(s)` as three doubles.
///
/// # Safety
/// `helix` must be a live handle; `out` must point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rsh_helix_position(
    helix: *const RshHelix,
    s: f64,
    out: *mut f64,
) -> RshStatus {
    guard(|| {
        let h = helix.as_ref().ok_or_else(|| null("helix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = h.curve.position(s).map_err(lib)?;
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&p.to_array());
        Ok(())
    })
}

/// Frenet frame, curvature, torsion and `σ` at `s`.
///
/// # Safety
/// `helix` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rsh_helix_frenet(
    helix: *const RshHelix,
    s: f64,
    out: *mut RshFrenet,
) -> RshStatus {
    guard(|| {
        let h = helix.as_ref().ok_or_else(|| null("helix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let fr = frenet_at_with(&h.curve, s, Tolerances::default().eps_kappa).map_err(lib)?;
        *out = RshFrenet {
            t: fr.t.to_array(),
            n: fr.n.to_array(),
            b: fr.b.to_array(),
            kappa: fr.kappa,
            tau: fr.tau,
            sigma: fr.sigma,
        };
        Ok(())
    })
}

/// Runs the closed-form verification suite on `n` uniform points of `[s_min, s_max]`.
/// `*overall` receives the combined verdict. When `report_json` is not null it receives a
/// JSON report to release with [`rsh_string_free`].
///
/// # Safety
/// `helix` must be a live handle; `overall` must be valid for a write; `report_json` must be
/// null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rsh_helix_verify(
    helix: *const RshHelix,
    s_min: f64,
    s_max: f64,
    n: usize,
    overall: *mut bool,
    report_json: *mut *mut c_char,
) -> RshStatus {
    guard(|| {
        let h = helix.as_ref().ok_or_else(|| null("helix"))?;
        let overall = overall.as_mut().ok_or_else(|| null("overall"))?;
        if let Some(r) = report_json.as_mut() {
            *r = ptr::null_mut();
        }
        let opts = VerifyOptions {
            grid: GridSpec::new(s_min, s_max, n).map_err(lib)?,
            ..Default::default()
        };
        let report = verify_family(&h.params, &opts).map_err(lib)?;
        *overall = report.overall;
        if let Some(r) = report_json.as_mut() {
            let text = serde_json::to_string(&report)
                .map_err(|e| (RshStatus::Internal, e.to_string()))?;
            *r = CString::new(text)
                .map_err(|e| (RshStatus::Internal, e.to_string()))?
                .into_raw();
        }
        Ok(())
    })
}

/// Classifies `len` unit-speed samples. `s` holds the parameters (strictly increasing) and
/// `xyz` the positions as `len` consecutive triples.
///
/// # Safety
/// `s` must point to `len` doubles, `xyz` to `3·len` doubles, and `out` must be valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn rsh_analyze_samples(
    s: *const f64,
    xyz: *const f64,
    len: usize,
    out: *mut RshAnalysis,
) -> RshStatus {
    guard(|| {
        if s.is_null() {
            return Err(null("s"));
        }
        if xyz.is_null() {
            return Err(null("xyz"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = std::slice::from_raw_parts(s, len);
        let xyz = std::slice::from_raw_parts(xyz, 3 * len);
        let points = s
            .iter()
            .zip(xyz.chunks_exact(3))
            .map(|(&s, p)| Sample {
                s,
                position: Vec3::new(p[0], p[1], p[2]),
            })
            .collect();
        let tol = Tolerances::default();
        let samples = CurveSamples::new(points).map_err(lib)?;
        samples.check_unit_speed(tol.chord).map_err(lib)?;
        let framed = frames_from_samples(&samples, tol.eps_kappa).map_err(lib)?;
        let c = classify_full(&framed, &tol).map_err(lib)?;
        *out = RshAnalysis {
            c1_hat: c.rectifying_fit.c1_hat,
            c2_hat: c.rectifying_fit.c2_hat,
            rms_residual: c.rectifying_fit.rms_residual,
            is_rectifying: c.rectifying_fit.is_rectifying,
            sigma_mean: c.slant.sigma_mean,
            sigma_max_dev: c.slant.sigma_max_dev,
            is_slant: c.slant.is_slant,
            normal_leak_max: c.normal_leak_max,
            in_rectifying_plane: c.in_rectifying_plane,
            verdict: c.verdict,
        };
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or null after a success. The
/// pointer stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn rsh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must be null or a string from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn rsh_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rsh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
