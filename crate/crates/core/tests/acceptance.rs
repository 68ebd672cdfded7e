//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

mod common;

use std::path::Path;
use std::process::Command;

use common::{example1, example2, sweep, Member};
use rsh_core::classify::{ode_residual, ode_residual_of, OdeMethod};
use rsh_core::curve::{uniform_grid, Backend, Domain, StepPolicy};
use rsh_core::family::{
    axis_components, closed_form_frame, cone_residual, kappa_tau_with_amplitude, make_rs_helix_on, ConeParams,
};
use rsh_core::frenet::frenet_at;
use rsh_core::io::polyline_points;
use rsh_core::samples::sample_curve;
use rsh_core::{make_rs_helix, FamilyParams, Vec3};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_rsh");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rsh(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN)
        .args(args)
        .env_remove("RSH_TOL")
        .output()
        .expect("rsh runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a, x| if x.is_nan() { f64::NAN } else { a.max(x) })
}

fn check_value(report: &Value, name: &str) -> Option<(f64, bool)> {
    report["checks"].as_array()?.iter().find_map(|c| {
        (c["name"] == name).then(|| (c["residual"].as_f64().unwrap_or(f64::NAN), c["pass"] == true))
    })
}

fn criterion_1() -> Outcome {
    let (code, json) = rsh(&["verify", "--c1", "1", "--c2", "0", "--cos-theta", "1/3"]);
    let report: Value = serde_json::from_str(&json).unwrap_or(Value::Null);
    let p = example1();
    let curve = make_rs_helix(&p);
    let f0 = frenet_at(&curve, 0.0).unwrap();
    let kappa_err = (f0.kappa - 2.0 * 2f64.sqrt()).abs();
    let tau_err = f0.tau.abs();
    let cone = ConeParams::new(8.0).unwrap();
    let grid = uniform_grid(-3.0, 3.0, 1001);
    let cone_max = max_over(grid.iter().map(|&s| cone_residual(curve.position(s).unwrap(), &cone).abs()));
    let sigma_err = max_over(
        grid.iter()
            .map(|&s| (frenet_at(&curve, s).unwrap().sigma - 1.0 / (2.0 * 2f64.sqrt())).abs()),
    );
    let all_pass = report["overall"] == true;
    let pass = code == 0
        && all_pass
        && kappa_err <= 1e-9
        && tau_err <= 1e-9
        && cone_max < 1e-10
        && sigma_err <= 1e-9;
    outcome(
        pass,
        format!(
            "verify exit {code}, |kappa(0)-2sqrt2| {kappa_err:.1e}, |tau(0)| {tau_err:.1e}, cone max {cone_max:.1e}, |sigma-1/(2sqrt2)| max {sigma_err:.1e}"
        ),
    )
}

fn criterion_2() -> Outcome {
    let (code, _) = rsh(&["verify", "--c1", "1/2", "--c2", "-1/5", "--cos-theta", "1/10"]);
    let p = example2();
    let curve = make_rs_helix(&p);
    let kappa0 = frenet_at(&curve, 0.0).unwrap().kappa;
    let printed = 1500.0 * 11f64.sqrt() / 104f64.powf(1.5);
    let amplitude_form = kappa_tau_with_amplitude(0.5, -0.2, 0.5 * 99f64.sqrt(), 0.0).0;
    let grid = uniform_grid(-3.0, 3.0, 1001);
    let kappa_law = max_over(grid.iter().map(|&s| {
        let printed = 1500.0 * 11f64.sqrt() / (5.0 * s * (5.0 * s - 4.0) + 104.0).powf(1.5);
        (frenet_at(&curve, s).unwrap().kappa - printed).abs()
    }));
    let cone = ConeParams::new(99.0).unwrap();
    let cone_max = max_over(grid.iter().map(|&s| cone_residual(curve.position(s).unwrap(), &cone).abs()));
    let e1 = (kappa0 - printed).abs();
    let e2 = (kappa0 - amplitude_form).abs();
    let pass = code == 0 && e1 <= 1e-9 && e2 <= 1e-12 && kappa_law <= 1e-9 && cone_max < 1e-10;
    outcome(
        pass,
        format!(
            "verify exit {code}, kappa(0) vs printed {e1:.1e}, vs amplitude form {e2:.1e}, kappa law max {kappa_law:.1e}, cone max {cone_max:.1e}"
        ),
    )
}

fn criterion_3(members: &[Member]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let csv = dir.path().join(format!("m{i}.csv"));
        let json = dir.path().join(format!("m{i}.json"));
        let p = &m.params;
        let (c1, c2, ct) = (p.c1().to_string(), p.c2().to_string(), p.cos_theta().to_string());
        let (a, b) = (m.s_min.to_string(), m.s_max.to_string());
        let (gcode, _) = rsh(&[
            "generate", "--c1", &c1, "--c2", &c2, "--cos-theta", &ct, "--s-min", &a, "--s-max",
            &b, "--n", "1001", "--out", path_str(&csv),
        ]);
        let (acode, _) = rsh(&["analyze", path_str(&csv), "--report", path_str(&json)]);
        let report: Value = std::fs::read_to_string(&json)
            .ok()
            .and_then(|t| serde_json::from_str(&t).ok())
            .unwrap_or(Value::Null);
        let fit = &report["rectifying_fit"];
        let (e1, e2) = m.oriented_line();
        let err = (fit["c1"].as_f64().unwrap_or(f64::NAN) - e1)
            .abs()
            .max((fit["c2"].as_f64().unwrap_or(f64::NAN) - e2).abs());
        worst = if err.is_nan() { f64::NAN } else { worst.max(err) };
        if gcode != 0 || acode == 2 || !(err <= 1e-5) {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} members, worst |(c1,c2) fit error| {worst:.1e}, failing members {failures:?}",
            members.len()
        ),
    )
}

fn fd_curve(p: &FamilyParams, m: &Member) -> rsh_core::AnalyticCurve {
    let length = 1.0 / p.c1().abs();
    let pad = 4.0 * length;
    make_rs_helix_on(p, Domain::new(m.s_min - pad, m.s_max + pad).unwrap())
        .with_backend(Backend::FiniteDifference(StepPolicy::for_length_scale(length)))
        .unwrap()
}

fn criterion_4(members: &[Member]) -> Outcome {
    let (mut closed_dev, mut fd_dev, mut cot_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let p = &m.params;
        let grid = m.grid(1001);
        let closed = make_rs_helix_on(p, Domain::new(m.s_min, m.s_max).unwrap());
        let cs = sample_curve(&closed, &grid, 1e-9).unwrap();
        let fs = sample_curve(&fd_curve(p, m), &grid, 1e-9).unwrap();
        let stats = |v: Vec<f64>| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            (mean, max_over(v.iter().map(|x| (x - mean).abs())))
        };
        let (cmean, cdev) = stats(cs.samples.iter().map(|x| x.frame.sigma).collect());
        let (fmean, fdev) = stats(fs.samples.iter().map(|x| x.frame.sigma).collect());
        let cot = 1.0 / p.theta().tan();
        let cerr = (cmean - cot).abs().max((fmean - cot).abs());
        closed_dev = closed_dev.max(cdev);
        fd_dev = fd_dev.max(fdev);
        cot_err = cot_err.max(cerr);
        if !(cdev < 1e-9 && fdev < 1e-4 && cerr <= 1e-6) {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "sigma max dev closed {closed_dev:.1e}, finite-difference {fd_dev:.1e}, implied cot(theta) error {cot_err:.1e}, failing members {failures:?}"
        ),
    )
}

fn criterion_5(members: &[Member]) -> Outcome {
    let (mut jet_max, mut fd_max) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let p = &m.params;
        let pad = 1.0;
        let curve = make_rs_helix_on(p, Domain::new(m.s_min - pad, m.s_max + pad).unwrap());
        let mut ok = true;
        for s in m.interior(101) {
            let j = ode_residual(&curve, p, s, OdeMethod::Jet).unwrap().residual_norm;
            let f = ode_residual_of(|x| Ok(closed_form_frame(p, x).v(p, x)), p, s, 1e-4)
                .unwrap()
                .residual_norm;
            jet_max = jet_max.max(j);
            fd_max = fd_max.max(f);
            ok &= j < 1e-9 && f < 1e-6;
        }
        if !ok {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!("ODE residual max closed {jet_max:.1e}, stencil {fd_max:.1e}, failing members {failures:?}"),
    )
}

fn criterion_6(members: &[Member]) -> Outcome {
    let mut worst = 0.0f64;
    for m in members {
        let curve = make_rs_helix_on(&m.params, Domain::new(m.s_min, m.s_max).unwrap());
        let fs = sample_curve(&curve, &m.grid(1001), 1e-9).unwrap();
        worst = worst.max(max_over(fs.samples.iter().map(|x| x.position.dot(x.frame.n).abs())));
    }
    outcome(worst < 1e-9, format!("max |<alpha, n>| {worst:.1e}"))
}

fn criterion_7(members: &[Member]) -> Outcome {
    let (mut axis, mut lambda2) = (0.0f64, 0.0f64);
    let mut flipped = 0;
    for m in members {
        let p = &m.params;
        // With c1 tan(theta) < 0 the measured normal makes the angle pi - theta with the axis.
        if p.orientation() < 0.0 {
            flipped += 1;
        }
        let curve = make_rs_helix_on(p, Domain::new(m.s_min, m.s_max).unwrap());
        for s in m.grid(100) {
            let f = frenet_at(&curve, s).unwrap();
            let lam = axis_components(p, s);
            axis = axis.max((lam.reconstruct(f.t, f.n, f.b) - Vec3::E3).norm());
            // The component of the axis along the measured normal.
            let measured = f.n.dot(Vec3::E3);
            lambda2 = lambda2.max((measured - p.orientation() * p.cos_theta()).abs());
        }
    }
    outcome(
        axis <= 1e-8 && lambda2 <= 1e-10,
        format!(
            "axis reconstruction max {axis:.1e}, |lambda2 - eps cos(theta)| max {lambda2:.1e} \
             (eps = -1 on {flipped} of {} members)",
            members.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let (code, json) = rsh(&[
        "verify", "--c1", "1", "--c2", "0", "--cos-theta", "1/3", "--kappa-scale", "1.01",
    ]);
    let report: Value = serde_json::from_str(&json).unwrap_or(Value::Null);
    let ode = check_value(&report, "ode_residual");
    let sigma = check_value(&report, "sigma_constancy");
    let named = matches!(ode, Some((_, false))) || matches!(sigma, Some((_, false)));
    outcome(
        code == 1 && named,
        format!(
            "verify exit {code}, ode_residual {:?}, sigma_constancy {:?}",
            ode.map(|c| c.0),
            sigma.map(|c| c.0)
        ),
    )
}

fn criterion_9() -> Outcome {
    let p = example1();
    let closed = make_rs_helix(&p);
    let fd = closed
        .with_backend(Backend::FiniteDifference(StepPolicy::default()))
        .unwrap();
    let (mut kt, mut frame) = (0.0f64, 0.0f64);
    for s in uniform_grid(-3.0, 3.0, 1001) {
        let a = frenet_at(&closed, s).unwrap();
        let b = frenet_at(&fd, s).unwrap();
        kt = kt.max((a.kappa - b.kappa).abs()).max((a.tau - b.tau).abs());
        frame = frame
            .max((a.t - b.t).max_abs())
            .max((a.n - b.n).max_abs())
            .max((a.b - b.b).max_abs());
    }
    outcome(
        kt <= 1e-5 && frame <= 1e-6,
        format!("kappa/tau max diff {kt:.1e}, frame max diff {frame:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ex1.csv");
    let svg = dir.path().join("ex1.svg");
    let (g, _) = rsh(&["generate", "--c1", "1", "--c2", "0", "--cos-theta", "1/3", "--out", path_str(&csv)]);
    let (c, _) = rsh(&["plot", path_str(&csv), "--projection", "xz", "--cone", "8", "--out", path_str(&svg)]);
    let text = std::fs::read_to_string(&svg).unwrap_or_default();
    let pts = polyline_points(&text).unwrap_or_default();
    let k = 8f64.sqrt();
    let excess = max_over(pts.iter().map(|&(x, z)| (k * x.abs() - z.abs()).max(0.0)));
    let polylines = text.matches("<polyline").count();
    outcome(
        g == 0 && c == 0 && polylines == 1 && pts.len() == 1001 && excess <= 1e-9,
        format!(
            "generate/plot exit {g}/{c}, {} polyline points, worst excess over cone bound {excess:.1e}",
            pts.len()
        ),
    )
}

fn main() {
    let members = sweep();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Example 1 reproduction", Box::new(criterion_1)),
        ("Example 2 reproduction", Box::new(criterion_2)),
        ("generate/analyze round trip", Box::new(|| criterion_3(&members))),
        ("sigma constancy", Box::new(|| criterion_4(&members))),
        ("ODE residual", Box::new(|| criterion_5(&members))),
        ("rectifying position", Box::new(|| criterion_6(&members))),
        ("axis reconstruction", Box::new(|| criterion_7(&members))),
        ("mutation sensitivity", Box::new(criterion_8)),
        ("oracle equivalence", Box::new(criterion_9)),
        ("figure data", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
