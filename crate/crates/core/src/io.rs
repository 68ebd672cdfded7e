//! CSV and SVG encoding of curves, traces and projections.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::family::ConeParams;
use crate::samples::{CurveSamples, Sample};
use crate::vec3::Vec3;

/// Shortest decimal that parses back to the same `f64`, with `-0` written as `0`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Parses a real number, also accepting a fraction `p/q`.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Parse(format!("'{text}' is not a real number"));
    let value = match t.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Parse(format!("'{text}' is not a finite real number")))
    }
}

/// Writes `(s, point)` rows under a four-column header.
pub fn write_points<W: Write>(out: W, header: [&str; 4], rows: &[(f64, Vec3)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for (s, p) in rows {
        w.write_record([
            format_float(*s),
            format_float(p.x),
            format_float(p.y),
            format_float(p.z),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Column layouts accepted by [`read_points`].
pub const POSITION_HEADER: [&str; 4] = ["s", "x", "y", "z"];
pub const TRACE_HEADER: [&str; 4] = ["s", "ux", "uy", "uz"];

/// Reads `(s, point)` rows written by [`write_points`] with either the position or the
/// trace header.
pub fn read_points<R: Read>(input: R) -> Result<Vec<(f64, Vec3)>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = r
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse("input is empty".into()));
    }
    let names: Vec<&str> = header.iter().collect();
    if names != POSITION_HEADER && names != TRACE_HEADER {
        return Err(Error::Parse(format!(
            "expected header 's,x,y,z' or 's,ux,uy,uz', got '{}'",
            names.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        if rec.len() != 4 {
            return Err(Error::Parse(format!(
                "line {line}: expected 4 fields, got {}",
                rec.len()
            )));
        }
        let v = |k: usize| parse_real(&rec[k]).map_err(|e| Error::Parse(format!("line {line}: {e}")));
        rows.push((v(0)?, Vec3::new(v(1)?, v(2)?, v(3)?)));
    }
    Ok(rows)
}

/// Reads a position CSV into validated samples.
pub fn read_samples<R: Read>(input: R) -> Result<CurveSamples> {
    let rows = read_points(input)?;
    CurveSamples::new(
        rows.into_iter()
            .map(|(s, position)| Sample { s, position })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Xy,
    Xz,
    Yz,
}

impl Projection {
    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "xy" => Ok(Projection::Xy),
            "xz" => Ok(Projection::Xz),
            "yz" => Ok(Projection::Yz),
            _ => Err(Error::Parse(format!(
                "unknown projection '{text}' (expected xy, xz or yz)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Projection::Xy => "xy",
            Projection::Xz => "xz",
            Projection::Yz => "yz",
        }
    }

    /// `(horizontal, vertical)` plot coordinates of `p`.
    pub fn apply(self, p: Vec3) -> (f64, f64) {
        match self {
            Projection::Xy => (p.x, p.y),
            Projection::Xz => (p.x, p.z),
            Projection::Yz => (p.y, p.z),
        }
    }
}

/// A minimal SVG 1.1 picture of a projected trace.
///
/// Coordinates stay in data units: the vertical axis is flipped by negating it and the
/// view box is fitted to the data, so every `polyline` point is the exact projected value.
/// The optional cone adds the silhouette lines `v = ±√slope_sq·u`, which only make sense
/// for projections containing the z axis.
pub fn render_svg(points: &[Vec3], projection: Projection, cone: Option<ConeParams>) -> Result<String> {
    if points.is_empty() {
        return Err(Error::Parse("nothing to plot: no data rows".into()));
    }
    if cone.is_some() && projection == Projection::Xy {
        return Err(Error::Parse(
            "cone silhouettes need an xz or yz projection".into(),
        ));
    }
    let uv: Vec<(f64, f64)> = points.iter().map(|&p| projection.apply(p)).collect();
    let (mut umin, mut umax, mut vmin, mut vmax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(u, v) in &uv {
        umin = umin.min(u);
        umax = umax.max(u);
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    let extent = (umax - umin).max(vmax - vmin);
    let margin = if extent > 0.0 { 0.05 * extent } else { 1.0 };
    let (x0, x1) = (umin - margin, umax + margin);
    let (y0, y1) = (-vmax - margin, -vmin + margin);
    let f = format_float;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"600\" preserveAspectRatio=\"xMidYMid meet\">\n",
        f(x0),
        f(y0),
        f(x1 - x0),
        f(y1 - y0)
    ));
    let (hu, hv) = match projection {
        Projection::Xy => ("x", "y"),
        Projection::Xz => ("x", "z"),
        Projection::Yz => ("y", "z"),
    };
    svg.push_str(&format!("<title>{hu}{hv} projection</title>\n"));
    svg.push_str("<g fill=\"none\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\">\n");
    svg.push_str(&format!(
        "<line class=\"axis\" x1=\"{}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"#999999\" vector-effect=\"non-scaling-stroke\"/>\n",
        f(x0),
        f(x1)
    ));
    svg.push_str(&format!(
        "<line class=\"axis\" x1=\"0\" y1=\"{}\" x2=\"0\" y2=\"{}\" stroke=\"#999999\" vector-effect=\"non-scaling-stroke\"/>\n",
        f(y0),
        f(y1)
    ));
    if let Some(c) = cone {
        let k = c.slope_sq.sqrt();
        for sign in [1.0, -1.0] {
            svg.push_str(&format!(
                "<line class=\"cone\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cc3333\" stroke-dasharray=\"4 3\" vector-effect=\"non-scaling-stroke\"/>\n",
                f(x0),
                f(-sign * k * x0),
                f(x1),
                f(-sign * k * x1)
            ));
        }
    }
    let pts: Vec<String> = uv
        .iter()
        .map(|&(u, v)| format!("{},{}", f(u), f(-v)))
        .collect();
    svg.push_str(&format!(
        "<polyline class=\"trace\" stroke=\"#1f4e9a\" vector-effect=\"non-scaling-stroke\" points=\"{}\"/>\n",
        pts.join(" ")
    ));
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// Extracts the `(u, v)` data coordinates of the first `polyline` in an SVG written by
/// [`render_svg`], undoing the vertical flip.
pub fn polyline_points(svg: &str) -> Result<Vec<(f64, f64)>> {
    let start = svg
        .find("<polyline")
        .ok_or_else(|| Error::Parse("no polyline element".into()))?;
    let rest = &svg[start..];
    let key = "points=\"";
    let a = rest
        .find(key)
        .ok_or_else(|| Error::Parse("polyline has no points".into()))?
        + key.len();
    let b = rest[a..]
        .find('"')
        .ok_or_else(|| Error::Parse("unterminated points attribute".into()))?;
    rest[a..a + b]
        .split_whitespace()
        .map(|pair| {
            let (u, v) = pair
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad point '{pair}'")))?;
            Ok((parse_real(u)?, -parse_real(v)?))
        })
        .collect()
}
