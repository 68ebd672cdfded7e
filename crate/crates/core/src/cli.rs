//! The `rsh` command line.
//!
//! Exit codes: 0 when everything checked out, 1 when a check or verdict failed, 2 for any
//! input problem. `RSH_TOL` scales every pass/fail tolerance.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_full, Classification};
use crate::curve::Domain;
use crate::error::{Error, Result};
use crate::family::{make_rs_helix_on, position, ConeParams, FamilyParams};
use crate::indicatrix::{indicatrix, Which};
use crate::io::{
    parse_real, read_points, read_samples, render_svg, write_points, Projection, POSITION_HEADER,
    TRACE_HEADER,
};
use crate::samples::frames_from_samples;
use crate::tolerance::Tolerances;
use crate::verify::{verify_family, GridSpec, Provenance, VerificationReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Name of the tolerance scale environment variable.
pub const TOLERANCE_ENV: &str = "RSH_TOL";

fn real(text: &str) -> std::result::Result<f64, String> {
    parse_real(text).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "rsh",
    version,
    about = "Generate, analyze and verify rectifying slant helices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ThetaArg {
    /// cos θ; fractions such as 1/3 are accepted
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub cos_theta: Option<f64>,
    /// θ in degrees
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub theta_deg: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "0")]
    pub c2: f64,
    #[command(flatten)]
    pub theta: ThetaArg,
}

impl FamilyArgs {
    pub fn params(&self) -> Result<FamilyParams> {
        match (self.theta.cos_theta, self.theta.theta_deg) {
            (Some(ct), None) => FamilyParams::from_cos_theta(self.c1, self.c2, ct),
            (None, Some(deg)) => FamilyParams::new(self.c1, self.c2, deg.to_radians()),
            _ => Err(Error::InvalidParams(
                "give exactly one of --cos-theta and --theta-deg".into(),
            )),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a family member as `s,x,y,z` rows on a uniform grid
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "-3")]
        s_min: f64,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "3")]
        s_max: f64,
        #[arg(long, default_value_t = 1001)]
        n: usize,
        /// Output file (standard output when omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Classify a sampled unit-speed curve given as `s,x,y,z` rows
    Analyze {
        /// Input CSV, or `-` for standard input
        input: PathBuf,
        /// JSON report file (standard output when omitted)
        #[arg(short, long)]
        report: Option<PathBuf>,
    },
    /// Run the closed-form verification suite on a family member
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "-3")]
        s_min: f64,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "3")]
        s_max: f64,
        #[arg(long, default_value_t = 1001)]
        n: usize,
        /// JSON report file (standard output when omitted)
        #[arg(short, long)]
        report: Option<PathBuf>,
        #[arg(long, value_parser = real, default_value = "1", hide = true)]
        kappa_scale: f64,
    },
    /// Write the tangent, normal or binormal indicatrix as `s,ux,uy,uz` rows
    Indicatrix {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "normal")]
        which: Which,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "-3")]
        s_min: f64,
        #[arg(long, value_parser = real, allow_hyphen_values = true, default_value = "3")]
        s_max: f64,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Project a CSV trace onto a coordinate plane as SVG
    Plot {
        /// Input CSV (`s,x,y,z` or `s,ux,uy,uz`), or `-` for standard input
        input: PathBuf,
        #[arg(long, default_value = "xz")]
        projection: String,
        /// Add the silhouette lines of the cone `m(x² + y²) = z²`
        #[arg(long, value_parser = real)]
        cone: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub c1: f64,
    pub c2: f64,
    pub rms: f64,
    pub is_rectifying: bool,
    pub used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlantRecord {
    pub sigma_mean: f64,
    pub max_dev: f64,
    pub is_slant: bool,
    pub implied_theta: Option<f64>,
    pub implied_cos_theta: Option<f64>,
}

/// The JSON document written by `rsh analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub rectifying_fit: FitRecord,
    pub slant: SlantRecord,
    pub normal_leak_max: f64,
    pub in_rectifying_plane: bool,
    pub verdict: bool,
    pub samples: usize,
    pub frames: usize,
    pub provenance: Provenance,
}

impl AnalysisReport {
    fn new(c: &Classification, samples: usize, frames: usize) -> Self {
        let f = c.rectifying_fit;
        let s = c.slant;
        Self {
            rectifying_fit: FitRecord {
                c1: f.c1_hat,
                c2: f.c2_hat,
                rms: f.rms_residual,
                is_rectifying: f.is_rectifying,
                used: f.used,
            },
            slant: SlantRecord {
                sigma_mean: s.sigma_mean,
                max_dev: s.sigma_max_dev,
                is_slant: s.is_slant,
                implied_theta: s.implied_theta,
                implied_cos_theta: s.implied_cos_theta(),
            },
            normal_leak_max: c.normal_leak_max,
            in_rectifying_plane: c.in_rectifying_plane,
            verdict: c.verdict,
            samples,
            frames,
            provenance: Provenance::new(None, None, "sampled"),
        }
    }
}

/// Tolerances scaled by the value of `RSH_TOL`, if set.
pub fn tolerances_from(scale: Option<&str>) -> Result<Tolerances> {
    match scale {
        None => Ok(Tolerances::default()),
        Some(text) => {
            let k = parse_real(text)
                .ok()
                .filter(|k| *k > 0.0)
                .ok_or_else(|| {
                    Error::Parse(format!("{TOLERANCE_ENV} must be a positive real, got '{text}'"))
                })?;
            Ok(Tolerances::default().scaled(k))
        }
    }
}

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(std::io::stdin()))
    } else {
        let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn emit(path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            w.write_all(body)?;
            w.flush()?;
        }
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn grid(s_min: f64, s_max: f64, n: usize) -> Result<(GridSpec, Domain)> {
    let g = GridSpec::new(s_min, s_max, n)?;
    Ok((g, Domain::new(s_min, s_max)?))
}

/// Runs a parsed command and returns its exit code.
pub fn execute(cmd: &Command, tol: &Tolerances, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Generate {
            family,
            s_min,
            s_max,
            n,
            out,
        } => {
            let p = family.params()?;
            let (g, _) = grid(*s_min, *s_max, *n)?;
            let rows: Vec<_> = g.points().into_iter().map(|s| (s, position(&p, s))).collect();
            let mut buf = Vec::new();
            write_points(&mut buf, POSITION_HEADER, &rows)?;
            emit(out.as_deref(), stdout, &buf)?;
            Ok(EXIT_OK)
        }
        Command::Analyze { input, report } => {
            let samples = read_samples(open_input(input)?)?;
            samples.check_unit_speed(tol.chord)?;
            let framed = frames_from_samples(&samples, tol.eps_kappa)?;
            let c = classify_full(&framed, tol)?;
            let r = AnalysisReport::new(&c, samples.len(), framed.len());
            emit(report.as_deref(), stdout, &to_json(&r)?)?;
            writeln!(
                stderr,
                "verdict: {} (rectifying: {}, slant: {}, in rectifying plane: {})",
                r.verdict, c.rectifying_fit.is_rectifying, c.slant.is_slant, c.in_rectifying_plane
            )?;
            Ok(if r.verdict { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Verify {
            family,
            s_min,
            s_max,
            n,
            report,
            kappa_scale,
        } => {
            let p = family.params()?;
            let (g, _) = grid(*s_min, *s_max, *n)?;
            let opts = VerifyOptions {
                grid: g,
                tolerances: *tol,
                kappa_scale: *kappa_scale,
            };
            let r = verify_family(&p, &opts)?;
            emit(report.as_deref(), stdout, &to_json(&r)?)?;
            write_summary(&r, stderr)?;
            Ok(if r.overall { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Indicatrix {
            family,
            which,
            s_min,
            s_max,
            n,
            out,
        } => {
            let p = family.params()?;
            let (g, dom) = grid(*s_min, *s_max, *n)?;
            let trace = indicatrix(&make_rs_helix_on(&p, dom), *which, &g.points())?;
            let rows: Vec<_> = trace.points.iter().map(|t| (t.s, t.point)).collect();
            let mut buf = Vec::new();
            write_points(&mut buf, TRACE_HEADER, &rows)?;
            emit(out.as_deref(), stdout, &buf)?;
            Ok(EXIT_OK)
        }
        Command::Plot {
            input,
            projection,
            cone,
            out,
        } => {
            let projection = Projection::parse(projection)?;
            let cone = cone.map(ConeParams::new).transpose()?;
            let rows = read_points(open_input(input)?)?;
            let pts: Vec<_> = rows.into_iter().map(|(_, p)| p).collect();
            let svg = render_svg(&pts, projection, cone)?;
            emit(out.as_deref(), stdout, svg.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn write_summary(r: &VerificationReport, stderr: &mut dyn Write) -> Result<()> {
    for c in &r.checks {
        writeln!(
            stderr,
            "{} {:<20} residual {:e} tolerance {:e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        )?;
    }
    writeln!(stderr, "overall: {}", if r.overall { "PASS" } else { "FAIL" })?;
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
/// Nothing in here panics on bad input; every problem becomes a message on `stderr`.
pub fn run<I, T>(args: I, tol_scale: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = tolerances_from(tol_scale).and_then(|tol| execute(&cli.command, &tol, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Entry point used by the `rsh` binary.
pub fn main_with_env() -> i32 {
    let scale = std::env::var(TOLERANCE_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), scale.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    code
}
