use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use rsh_ffi::*;

fn last_error() -> Option<String> {
    let p = rsh_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn example1() -> *mut RshHelix {
    let mut h = ptr::null_mut();
    let st = unsafe { rsh_helix_new(1.0, 0.0, 1.0 / 3.0, -3.0, 3.0, &mut h) };
    assert_eq!(st, RshStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn position_and_frame_of_example1() {
    let h = example1();
    let mut p = [0.0; 3];
    assert_eq!(unsafe { rsh_helix_position(h, 0.0, p.as_mut_ptr()) }, RshStatus::Ok);
    assert!((p[0] + 1.0 / 3.0).abs() < 1e-15);
    assert!((p[2] - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);

    let mut fr = RshFrenet::default();
    assert_eq!(unsafe { rsh_helix_frenet(h, 0.0, &mut fr) }, RshStatus::Ok);
    assert!((fr.kappa - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert!(fr.tau.abs() < 1e-12);
    assert!((fr.sigma - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!((fr.n[2] - 1.0 / 3.0).abs() < 1e-12);
    assert!(last_error().is_none());
    unsafe { rsh_helix_free(h) };
}

#[test]
fn verify_reports_json() {
    let h = example1();
    let mut ok = false;
    let mut json = ptr::null_mut();
    let st = unsafe { rsh_helix_verify(h, -3.0, 3.0, 201, &mut ok, &mut json) };
    assert_eq!(st, RshStatus::Ok);
    assert!(ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["overall"], true);
    unsafe { rsh_string_free(json) };

    let st = unsafe { rsh_helix_verify(h, -3.0, 3.0, 201, &mut ok, ptr::null_mut()) };
    assert_eq!(st, RshStatus::Ok);
    let st = unsafe { rsh_helix_verify(h, -3.0, 3.0, 1, &mut ok, ptr::null_mut()) };
    assert_eq!(st, RshStatus::InvalidParams);
    unsafe { rsh_helix_free(h) };
}

#[test]
fn analyze_samples_of_example1() {
    let h = example1();
    let n = 1001;
    let s: Vec<f64> = (0..n).map(|i| -3.0 + 6.0 * i as f64 / (n - 1) as f64).collect();
    let mut xyz = vec![0.0; 3 * n];
    for (i, &si) in s.iter().enumerate() {
        let st = unsafe { rsh_helix_position(h, si, xyz[3 * i..].as_mut_ptr()) };
        assert_eq!(st, RshStatus::Ok);
    }
    let mut a = RshAnalysis::default();
    assert_eq!(unsafe { rsh_analyze_samples(s.as_ptr(), xyz.as_ptr(), n, &mut a) }, RshStatus::Ok);
    assert!(a.verdict && a.is_rectifying && a.is_slant && a.in_rectifying_plane);
    assert!((a.c1_hat - 1.0).abs() < 1e-5);
    assert!((a.sigma_mean - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-5);

    let st = unsafe { rsh_analyze_samples(s.as_ptr(), xyz.as_ptr(), 4, &mut a) };
    assert_eq!(st, RshStatus::InsufficientSamples);
    unsafe { rsh_helix_free(h) };
}

#[test]
fn failures_map_to_status_codes() {
    let mut h = ptr::null_mut();
    let st = unsafe { rsh_helix_new(1.0, 0.0, 1.0, -3.0, 3.0, &mut h) };
    assert_eq!(st, RshStatus::InvalidParams);
    assert!(h.is_null());
    assert!(last_error().unwrap().contains("cos"));

    assert_eq!(
        unsafe { rsh_helix_new(1.0, 0.0, 0.5, 0.0, 1.0, ptr::null_mut()) },
        RshStatus::NullPointer
    );

    let h = example1();
    let mut p = [0.0; 3];
    assert_eq!(unsafe { rsh_helix_position(h, 5.0, p.as_mut_ptr()) }, RshStatus::OutOfDomain);
    assert!(last_error().is_some());
    assert_eq!(unsafe { rsh_helix_position(h, 0.0, ptr::null_mut()) }, RshStatus::NullPointer);
    assert_eq!(
        unsafe { rsh_helix_frenet(ptr::null(), 0.0, &mut RshFrenet::default()) },
        RshStatus::NullPointer
    );

    let s = [0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let xyz = [0.0; 24];
    let mut a = RshAnalysis::default();
    assert_eq!(
        unsafe { rsh_analyze_samples(s.as_ptr(), xyz.as_ptr(), 8, &mut a) },
        RshStatus::InvalidSamples
    );
    assert_eq!(
        unsafe { rsh_analyze_samples(ptr::null(), xyz.as_ptr(), 8, &mut a) },
        RshStatus::NullPointer
    );

    assert_eq!(unsafe { rsh_helix_position(h, 0.0, p.as_mut_ptr()) }, RshStatus::Ok);
    assert!(last_error().is_none());
    unsafe {
        rsh_helix_free(h);
        rsh_helix_free(ptr::null_mut());
        rsh_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rsh_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("rsh.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "rsh_helix_new",
        "rsh_helix_free",
        "rsh_helix_position",
        "rsh_helix_frenet",
        "rsh_helix_verify",
        "rsh_analyze_samples",
        "rsh_last_error_message",
        "rsh_string_free",
        "typedef struct RshHelix RshHelix;",
        "RSH_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"rsh.h\"\nint main(void) { RshHelix *h = 0; RshStatus s = rsh_helix_new(1, 0, 0.5, -1, 1, &h); rsh_helix_free(h); return (int)s; }\n",
    )
    .unwrap();
    let include = header.parent().unwrap();
    for (compiler, extra) in [("cc", &["-std=c11"][..]), ("c++", &["-x", "c++", "-std=c++17"][..])] {
        let Ok(out) = Command::new(compiler)
            .args(extra)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(include)
            .arg(&src)
            .output()
        else {
            eprintln!("{compiler} not available; skipping");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_and_runs() {
    // target/<profile>/deps/<test binary> -> target/<profile>/librsh_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().parent().unwrap().join("librsh_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(
        &src,
        r#"#include <math.h>
#include <stdio.h>
#include "rsh.h"
int main(void) {
    RshHelix *h = NULL;
    if (rsh_helix_new(1.0, 0.0, 1.0 / 3.0, -3.0, 3.0, &h) != RSH_STATUS_OK) return 1;
    RshFrenet f;
    if (rsh_helix_frenet(h, 1.0, &f) != RSH_STATUS_OK) return 2;
    if (fabs(f.kappa - 1.0) > 1e-12 || fabs(f.tau - 1.0) > 1e-12) return 3;
    bool ok = false;
    if (rsh_helix_verify(h, -3.0, 3.0, 101, &ok, NULL) != RSH_STATUS_OK || !ok) return 4;
    double p[3];
    if (rsh_helix_position(h, 9.0, p) != RSH_STATUS_OUT_OF_DOMAIN) return 5;
    if (rsh_last_error_message() == NULL) return 6;
    rsh_helix_free(h);
    printf("%s\n", rsh_version());
    return 0;
}
"#,
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
    else {
        eprintln!("cc not available; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
