use rotorsym_ffi::*;
use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn last_error() -> String {
    let p = rs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn merry_go_round(c0: f64, sin: &[f64]) -> *mut RsProblem {
    let mut p = ptr::null_mut();
    let status = unsafe { rs_problem_merry_go_round(c0, ptr::null(), 0, sin.as_ptr(), sin.len(), &mut p) };
    assert_eq!(status, RsStatus::Ok);
    p
}

fn from_json(json: &str) -> Result<*mut RsProblem, RsStatus> {
    let text = CString::new(json).unwrap();
    let mut p = ptr::null_mut();
    match unsafe { rs_problem_from_json(text.as_ptr(), &mut p) } {
        RsStatus::Ok => Ok(p),
        s => Err(s),
    }
}

fn circle(n: usize) -> Vec<f64> {
    (0..n)
        .flat_map(|i| {
            let s = 2.0 * PI * i as f64 / n as f64;
            [s.cos(), s.sin()]
        })
        .collect()
}

#[test]
fn free_particle_time_one_map_is_a_translation() {
    let p = from_json(r#"{"preset": "free-particle"}"#).unwrap();
    let z0 = [0.3, -0.2, 1.5, 0.25];
    let mut z1 = [0.0; 4];
    assert_eq!(unsafe { rs_time_one_map(p, RsPicture::Canonical, z0.as_ptr(), 64, z1.as_mut_ptr()) }, RsStatus::Ok);
    let expected = [1.8, 0.05, 1.5, 0.25];
    for (a, b) in z1.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12, "{z1:?}");
    }
    unsafe { rs_problem_free(p) };
}

#[test]
fn rotating_frame_force_matches_closed_form() {
    // q̈ = −2ω J₀ q̇ + ω² q for constant ω; at q̇ = 0 only the centrifugal term remains.
    let w = 1.5;
    let p = merry_go_round(w, &[]);
    let q = [0.4, -0.7];
    let mut acc = [0.0; 2];
    let status = unsafe { rs_force(p, 0.3, q.as_ptr(), [0.0, 0.0].as_ptr(), acc.as_mut_ptr()) };
    assert_eq!(status, RsStatus::Ok);
    assert!((acc[0] - w * w * q[0]).abs() < 1e-12 && (acc[1] - w * w * q[1]).abs() < 1e-12, "{acc:?}");
    unsafe { rs_problem_free(p) };
}

#[test]
fn rhs_force_picture_agrees_with_force() {
    let p = merry_go_round(2.0 * PI, &[1.0]);
    let z = [0.2, 0.1, -0.3, 0.8];
    let (mut rhs, mut acc) = ([0.0; 4], [0.0; 2]);
    unsafe {
        assert_eq!(rs_rhs(p, RsPicture::Force, 0.4, z.as_ptr(), rhs.as_mut_ptr()), RsStatus::Ok);
        assert_eq!(rs_force(p, 0.4, z.as_ptr(), z[2..].as_ptr(), acc.as_mut_ptr()), RsStatus::Ok);
        rs_problem_free(p);
    }
    assert_eq!(&rhs[..2], &z[2..]);
    assert!((rhs[2] - acc[0]).abs() < 1e-14 && (rhs[3] - acc[1]).abs() < 1e-14);
}

#[test]
fn trajectory_rows_and_bounds() {
    let p = merry_go_round(0.0, &[]);
    let z0 = [0.0, 0.0, 1.0, 2.0];
    let mut tr = ptr::null_mut();
    unsafe {
        assert_eq!(rs_integrate(p, RsPicture::Canonical, z0.as_ptr(), 0.0, 1.0, 10, &mut tr), RsStatus::Ok);
        assert_eq!(rs_trajectory_len(tr), 11);
        let mut row = [0.0; 5];
        assert_eq!(rs_trajectory_row(tr, 5, row.as_mut_ptr()), RsStatus::Ok);
        assert!((row[0] - 0.5).abs() < 1e-15 && (row[1] - 0.5).abs() < 1e-12 && (row[2] - 1.0).abs() < 1e-12);
        assert_eq!(rs_trajectory_row(tr, 11, row.as_mut_ptr()), RsStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        rs_trajectory_free(tr);
        assert_eq!(rs_trajectory_len(ptr::null()), 0);
        rs_problem_free(p);
    }
}

#[test]
fn zero_steps_is_invalid() {
    let p = merry_go_round(1.0, &[]);
    let mut tr = ptr::null_mut();
    let status = unsafe { rs_integrate(p, RsPicture::Twisted, [0.0; 4].as_ptr(), 0.0, 1.0, 0, &mut tr) };
    assert_eq!(status, RsStatus::InvalidArgument);
    assert!(tr.is_null());
    assert!(last_error().contains("n_steps"));
    unsafe { rs_problem_free(p) };
}

#[test]
fn divergence_is_reported() {
    let p = merry_go_round(1.0, &[]);
    let mut z1 = [0.0; 4];
    let z0 = [f64::NAN, 0.0, 0.0, 0.0];
    let status = unsafe { rs_time_one_map(p, RsPicture::Canonical, z0.as_ptr(), 16, z1.as_mut_ptr()) };
    assert_eq!(status, RsStatus::Divergence);
    unsafe { rs_problem_free(p) };
}

#[test]
fn null_pointers_are_rejected() {
    let mut z1 = [0.0; 4];
    let status = unsafe { rs_time_one_map(ptr::null(), RsPicture::Canonical, [0.0; 4].as_ptr(), 8, z1.as_mut_ptr()) };
    assert_eq!(status, RsStatus::NullPointer);
    assert!(last_error().contains("problem"));
    let p = merry_go_round(1.0, &[]);
    let status = unsafe { rs_time_one_map(p, RsPicture::Canonical, ptr::null(), 8, z1.as_mut_ptr()) };
    assert_eq!(status, RsStatus::NullPointer);
    assert_eq!(unsafe { rs_problem_from_json(ptr::null(), ptr::null_mut()) }, RsStatus::NullPointer);
    unsafe {
        rs_problem_free(p);
        rs_problem_free(ptr::null_mut());
        rs_trajectory_free(ptr::null_mut());
    }
}

#[test]
fn bad_config_reports_path() {
    assert_eq!(from_json("not json").unwrap_err(), RsStatus::Config);
    assert_eq!(from_json(r#"{"preset": "no-such-thing"}"#).unwrap_err(), RsStatus::Config);
    assert!(last_error().contains("no-such-thing"));
}

#[test]
fn non_finite_coefficient_is_invalid() {
    let mut p = ptr::null_mut();
    let status = unsafe { rs_problem_merry_go_round(f64::INFINITY, ptr::null(), 0, ptr::null(), 0, &mut p) };
    assert_eq!(status, RsStatus::InvalidArgument);
    assert!(p.is_null());
}

#[test]
fn classical_action_of_free_circle() {
    // ½∫|q̇|² on the unit circle is 2π²; the midpoint rule is within 1e-4 at n = 1024.
    let p = merry_go_round(0.0, &[]);
    let n = 1024;
    let mut s = 0.0;
    assert_eq!(unsafe { rs_classical_action(p, circle(n).as_ptr(), n, &mut s) }, RsStatus::Ok);
    assert!((s - 2.0 * PI * PI).abs() < 1e-4, "{s}");
    unsafe { rs_problem_free(p) };
}

#[test]
fn symplectic_action_of_resting_loop_vanishes() {
    // q on the circle with p ≡ 0 and no potentials: only −∫p·q̇ + ½|p|² remains, which is zero.
    let p = merry_go_round(0.0, &[]);
    let n = 512;
    let mom = vec![0.0; 2 * n];
    let mut s = f64::NAN;
    assert_eq!(unsafe { rs_symplectic_action(p, circle(n).as_ptr(), mom.as_ptr(), n, &mut s) }, RsStatus::Ok);
    assert!(s.abs() < 1e-12, "{s}");
    unsafe { rs_problem_free(p) };
}

#[test]
fn short_loop_is_a_loop_error() {
    let p = merry_go_round(1.0, &[]);
    let mut s = 0.0;
    assert_eq!(unsafe { rs_classical_action(p, circle(2).as_ptr(), 2, &mut s) }, RsStatus::LoopFormat);
    unsafe { rs_problem_free(p) };
}

#[test]
fn eliminated_problem_has_same_force_dynamics() {
    let p = merry_go_round(2.0 * PI, &[1.0]);
    let mut e = ptr::null_mut();
    let z0 = [0.4, -0.1, 0.3, 0.2];
    let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
    unsafe {
        assert_eq!(rs_problem_eliminate_scalar(p, &mut e), RsStatus::Ok);
        assert_eq!(rs_time_one_map(p, RsPicture::Force, z0.as_ptr(), 2048, a.as_mut_ptr()), RsStatus::Ok);
        assert_eq!(rs_time_one_map(e, RsPicture::Force, z0.as_ptr(), 2048, b.as_mut_ptr()), RsStatus::Ok);
        rs_problem_free(e);
        rs_problem_free(p);
    }
    for k in 0..4 {
        assert!((a[k] - b[k]).abs() < 1e-9, "{a:?} vs {b:?}");
    }
}

#[test]
fn shooting_finds_the_origin_for_unit_rotation() {
    let p = merry_go_round(1.0, &[]);
    let guess = [0.1, 0.2, 0.0, 0.1];
    let mut summary = RsOrbitSummary::default();
    let status = unsafe { rs_find_orbit_shooting(p, RsPicture::Canonical, guess.as_ptr(), 1e-10, 50, &mut summary) };
    assert_eq!(status, RsStatus::Ok);
    assert_eq!(summary.converged, 1);
    assert!(summary.fixed_point_defect < 1e-10);
    assert!(summary.state.iter().all(|v| v.abs() < 1e-8), "{:?}", summary.state);
    unsafe { rs_problem_free(p) };
}

#[test]
fn errors_are_thread_local() {
    assert_eq!(from_json("{").unwrap_err(), RsStatus::Config);
    let here = last_error();
    let other = std::thread::spawn(|| rs_last_error_message().is_null()).join().unwrap();
    assert!(other);
    assert_eq!(last_error(), here);
}

#[test]
fn version_matches_manifest() {
    let v = unsafe { CStr::from_ptr(rs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

fn have(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().is_ok()
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    for (tool, args) in [("cc", &["-std=c99", "-x", "c"][..]), ("c++", &["-std=c++11", "-x", "c++"][..])] {
        if !have(tool) {
            eprintln!("skipping {tool}: not installed");
            continue;
        }
        let out = Command::new(tool)
            .args(args)
            .args(["-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
            .arg(&include)
            .arg(include.join("rotorsym.h"))
            .output()
            .unwrap();
        assert!(out.status.success(), "{tool}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_against_static_library() {
    if !have("cc") {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("librotorsym_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "link failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok"));
}
