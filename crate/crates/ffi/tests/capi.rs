use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qtraj_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qt_last_error()) }.to_string_lossy().into_owned()
}

fn atom() -> QtMonitoredAtom {
    QtMonitoredAtom { x: 0.2, c: 0.0, gamma: 1.0, rabi: 0.1, delta: 0.0, p_excited: 1.0, phase: 0.0 }
}

#[test]
fn scalar_functions_match_the_library() {
    let mut a = QtComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { qt_amplitude_lorentzian(1.0, 10.0, 1.0, 0.0, &mut a) }, QtStatus::Ok);
    assert!((a.re - 0.624_670_978_347_549_8).abs() < 1e-13);
    assert_eq!(last_error(), "");

    let mut r = 0.0;
    assert_eq!(unsafe { qt_effective_rate_scaled(0.2, 0.0, 1.0, &mut r) }, QtStatus::Ok);
    assert!((r - 0.093_653_765_389_909_29).abs() < 1e-15);

    let mut s = QtComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { qt_amplitude_scaled(2.0, 0.2, 0.0, 1.0, &mut s) }, QtStatus::Ok);
    let mut log_rate = 0.0;
    assert_eq!(
        unsafe { qt_effective_rate_empirical(s, 2.0, QtRateFlavor::Log, &mut log_rate) },
        QtStatus::Ok
    );
    assert!((log_rate - r).abs() < 1e-14);

    let mut rep = QtComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { qt_survival_repeated(0.1, 3, 10.0, 1.0, 0.0, &mut rep) }, QtStatus::Ok);
    let mut p = 0.0;
    let half = QtComplex { re: std::f64::consts::FRAC_1_SQRT_2, im: 0.0 };
    assert_eq!(unsafe { qt_null_probability(rep, half, half, &mut p) }, QtStatus::Ok);
    assert!(p > 0.5 && p < 1.0);
}

#[test]
fn errors_set_status_and_message() {
    let mut a = QtComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { qt_amplitude_lorentzian(1.0, -1.0, 1.0, 0.0, &mut a) }, QtStatus::InvalidParameter);
    assert!(last_error().contains("lambda"), "{}", last_error());

    assert_eq!(unsafe { qt_amplitude_lorentzian(1.0, 1.0, 1.0, 0.0, ptr::null_mut()) }, QtStatus::NullPointer);

    let mut r = 0.0;
    let zero = QtComplex { re: 0.0, im: 0.0 };
    assert_eq!(
        unsafe { qt_effective_rate_empirical(zero, 1.0, QtRateFlavor::Log, &mut r) },
        QtStatus::OutOfDomain
    );

    let mut traj = ptr::null_mut();
    let mut fast = atom();
    fast.x = 1e3;
    assert_eq!(unsafe { qt_mcwf_trajectory(&fast, 0.5, 1.0, 1, &mut traj) }, QtStatus::StepGuard);
    assert!(traj.is_null());

    // success clears the message
    assert_eq!(unsafe { qt_amplitude_lorentzian(1.0, 1.0, 1.0, 0.0, &mut a) }, QtStatus::Ok);
    assert_eq!(last_error(), "");
}

#[test]
fn volterra_handle_round_trip() {
    let (gamma, omega0, lambda, e_g) = (1.0, 400.0, 10.0, 0.0);
    let e_e = e_g + omega0;
    let mut series = ptr::null_mut();
    let status = unsafe { qt_volterra_lorentzian(gamma, omega0, lambda, e_g, e_e, 1e-3, 0.1, 21, &mut series) };
    assert_eq!(status, QtStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { qt_series_len(series) }, 21);
    for k in [0usize, 7, 20] {
        let (mut t, mut v) = (0.0, QtComplex { re: 0.0, im: 0.0 });
        assert_eq!(unsafe { qt_series_get(series, k, &mut t, &mut v) }, QtStatus::Ok);
        let mut exact = QtComplex { re: 0.0, im: 0.0 };
        unsafe { qt_amplitude_lorentzian(t, lambda, gamma, 0.0, &mut exact) };
        // lab frame -> rotating frame
        let (c, s) = ((e_e * t).cos(), (e_e * t).sin());
        let rot = (v.re * c - v.im * s, v.re * s + v.im * c);
        assert!((rot.0 - exact.re).abs() < 1e-4 && (rot.1 - exact.im).abs() < 1e-4);
    }
    let (mut t, mut v) = (0.0, QtComplex { re: 0.0, im: 0.0 });
    assert_eq!(unsafe { qt_series_get(series, 21, &mut t, &mut v) }, QtStatus::IndexOutOfRange);
    unsafe { qt_series_free(series) };

    let mut bad = ptr::null_mut();
    let status = unsafe { qt_volterra_lorentzian(gamma, omega0, lambda, e_g, e_e, 3e-3, 0.01, 5, &mut bad) };
    assert_eq!(status, QtStatus::GridMismatch);
}

#[test]
fn trajectories_are_seeded_and_freed() {
    let a = atom();
    let run = |seed| {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { qt_mcwf_trajectory(&a, 0.01, 20.0, seed, &mut h) }, QtStatus::Ok);
        let n = unsafe { qt_trajectory_len(h) };
        let rows: Vec<[f64; 3]> = (0..n)
            .map(|k| {
                let mut r = [0.0; 3];
                let [t, p, e] = &mut r;
                assert_eq!(unsafe { qt_trajectory_get(h, k, t, p, e) }, QtStatus::Ok);
                r
            })
            .collect();
        unsafe { qt_trajectory_free(h) };
        rows
    };
    let first = run(7);
    assert_eq!(first.len(), 2001);
    assert!(first[0][2].is_nan());
    let second = run(7);
    let same = first.iter().zip(&second).all(|(a, b)| {
        a[0].to_bits() == b[0].to_bits() && a[1].to_bits() == b[1].to_bits() && (a[2].is_nan() || a[2] == b[2])
    });
    assert!(same);
    // a jump lands the atom in the ground state
    for r in &first[1..] {
        if r[2] == 1.0 {
            assert_eq!(r[1], 0.0);
        }
    }

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { qt_homodyne_trajectory(&a, 0.0, 0.001, 1.0, 3, &mut h) }, QtStatus::Ok);
    assert_eq!(unsafe { qt_trajectory_len(h) }, 1001);
    let _ = unsafe { qt_trajectory_clamp_count(h) };
    unsafe { qt_trajectory_free(h) };
    unsafe { qt_trajectory_free(ptr::null_mut()) };
}

#[test]
fn ensemble_handle_matches_serial_and_parallel() {
    let a = atom();
    let collect = |parallel| {
        let mut h = ptr::null_mut();
        let status = unsafe { qt_ensemble_run(&a, QtKind::Mcwf, 0.0, 0.01, 10.0, 200, 10, 5, parallel, &mut h) };
        assert_eq!(status, QtStatus::Ok, "{}", last_error());
        let rows: Vec<[f64; 4]> = (0..unsafe { qt_ensemble_len(h) })
            .map(|k| {
                let mut r = [0.0; 4];
                let [t, m, s, ms] = &mut r;
                assert_eq!(unsafe { qt_ensemble_get(h, k, t, m, s, ms) }, QtStatus::Ok);
                r
            })
            .collect();
        unsafe { qt_ensemble_free(h) };
        rows
    };
    let serial = collect(false);
    assert_eq!(serial.len(), 10);
    assert_eq!(serial, collect(true));
    assert_eq!(serial[9][0], 10.0);
    for r in &serial {
        assert!(r[2] > 0.0 && ((r[1] - r[3]) / r[2]).abs() < 5.0);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(qt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles and runs a small C program against the generated header and the
/// static library, when both a C compiler and the archive are present.
#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let archive = profile_dir.join("libqtraj_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C toolchain or {} missing", archive.display());
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("capi_smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "qtraj.h"
int main(void) {
    struct QtComplex a;
    if (qt_amplitude_lorentzian(1.0, 10.0, 1.0, 0.0, &a) != QT_STATUS_OK) return 1;
    if (qt_amplitude_lorentzian(1.0, -1.0, 1.0, 0.0, &a) != QT_STATUS_INVALID_PARAMETER) return 2;
    QtMonitoredAtom atom = {0.2, 0.0, 1.0, 0.1, 0.0, 1.0, 0.0};
    QtTrajectory *traj = NULL;
    if (qt_mcwf_trajectory(&atom, 0.01, 1.0, 1, &traj) != QT_STATUS_OK) return 3;
    size_t n = qt_trajectory_len(traj);
    qt_trajectory_free(traj);
    printf("%.17g %zu\n", a.re, n);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("capi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut fields = text.split_whitespace();
    let re: f64 = fields.next().unwrap().parse().unwrap();
    assert!((re - 0.624_670_978_347_549_8).abs() < 1e-13);
    assert_eq!(fields.next(), Some("101"));
}
