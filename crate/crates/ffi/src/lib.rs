//! C ABI over `rotorsym`.
//!
//! Every fallible function returns an [`RsStatus`]. On failure the message is
//! kept per thread and can be read with [`rs_last_error_message`]. Problems
//! and trajectories are opaque handles owned by the caller and released with
//! their `_free` functions. Arrays are passed as flat `double` buffers in
//! `(q1, q2, p1, p2)` order.

use nalgebra::{Vector2, Vector4};
use rotorsym::action::{classical_action, symplectic_action};
use rotorsym::domain::{parse_config, DiscreteLoop, FourierProfile, ProblemSpec};
use rotorsym::error::Error;
use rotorsym::fields::force_rhs;
use rotorsym::integrate::{self, Picture, Trajectory};
use rotorsym::orbits::{find_orbit_shooting, SearchOptions};
use rotorsym::transforms::{eliminate_scalar, make_merry_go_round};
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

/// Result codes. `RS_STATUS_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Divergence = 4,
    LoopFormat = 5,
    Unsupported = 6,
    Io = 7,
    Panic = 8,
}

/// Equations of motion to integrate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsPicture {
    Canonical = 0,
    Twisted = 1,
    Force = 2,
    EulerFlow = 3,
}

impl From<RsPicture> for Picture {
    fn from(p: RsPicture) -> Self {
        match p {
            RsPicture::Canonical => Picture::Canonical,
            RsPicture::Twisted => Picture::Twisted,
            RsPicture::Force => Picture::Force,
            RsPicture::EulerFlow => Picture::EulerFlow,
        }
    }
}

/// Opaque problem handle.
pub struct RsProblem {
    spec: ProblemSpec,
}

/// Opaque trajectory handle.
pub struct RsTrajectory {
    inner: Trajectory,
}

/// Outcome of an orbit search.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RsOrbitSummary {
    pub converged: c_int,
    pub iterations: usize,
    pub fixed_point_defect: f64,
    pub force_defect: f64,
    pub gradient_defect: f64,
    /// Initial state of the orbit in picture coordinates.
    pub state: [f64; 4],
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RsStatus {
    match err {
        Error::Config { .. } | Error::UnknownPreset { .. } => RsStatus::Config,
        Error::Divergence { .. } => RsStatus::Divergence,
        Error::LoopTooShort { .. } | Error::LoopKind(_) | Error::Format { .. } => RsStatus::LoopFormat,
        Error::UnsupportedFamily(_) => RsStatus::Unsupported,
        Error::InvalidArgument(_) => RsStatus::InvalidArgument,
        Error::Io(_) => RsStatus::Io,
    }
}

struct Failure(RsStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RsStatus::NullPointer, format!("null pointer: {what}"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside rotorsym".into());
            RsStatus::Panic
        }
    }
}

unsafe fn problem<'a>(p: *const RsProblem) -> Result<&'a ProblemSpec, Failure> {
    p.as_ref().map(|p| &p.spec).ok_or_else(|| null("problem"))
}

unsafe fn array<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn state4(p: *const f64, what: &str) -> Result<Vector4<f64>, Failure> {
    Ok(Vector4::from_column_slice(array(p, 4, what)?))
}

unsafe fn write_out(dst: *mut f64, src: &[f64], what: &str) -> Result<(), Failure> {
    if dst.is_null() {
        return Err(null(what));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn points(flat: &[f64]) -> Vec<Vector2<f64>> {
    flat.chunks_exact(2).map(|c| Vector2::new(c[0], c[1])).collect()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a JSON problem description (same format as the CLI `--config`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_problem` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_problem_from_json(json: *const c_char, out_problem: *mut *mut RsProblem) -> RsStatus {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(RsStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        *slot = boxed(RsProblem { spec: parse_config(text)? });
        Ok(())
    })
}

/// Rotating frame with `ω(t) = c0 + Σ a_k cos 2πkt + Σ b_k sin 2πkt`.
///
/// # Safety
/// `cos_coeffs` and `sin_coeffs` must hold `n_cos` and `n_sin` doubles (or
/// be NULL when the count is zero).
#[no_mangle]
pub unsafe extern "C" fn rs_problem_merry_go_round(
    c0: f64,
    cos_coeffs: *const f64,
    n_cos: usize,
    sin_coeffs: *const f64,
    n_sin: usize,
    out_problem: *mut *mut RsProblem,
) -> RsStatus {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        let cos = array(cos_coeffs, n_cos, "cos_coeffs")?.to_vec();
        let sin = array(sin_coeffs, n_sin, "sin_coeffs")?.to_vec();
        if !c0.is_finite() || cos.iter().chain(&sin).any(|v| !v.is_finite()) {
            return Err(Failure(RsStatus::InvalidArgument, "non-finite Fourier coefficient".into()));
        }
        *slot = boxed(RsProblem { spec: make_merry_go_round(FourierProfile::new(c0, cos, sin)) });
        Ok(())
    })
}

/// New problem with the scalar potential folded into the vector potential.
///
/// # Safety
/// `problem_in` must be a live handle and `out_problem` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_problem_eliminate_scalar(
    problem_in: *const RsProblem,
    out_problem: *mut *mut RsProblem,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let slot = out(out_problem, "out_problem")?;
        *slot = boxed(RsProblem { spec: eliminate_scalar(spec)? });
        Ok(())
    })
}

/// Release a problem. NULL is ignored.
///
/// # Safety
/// `problem` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rs_problem_free(problem: *mut RsProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Vector field of `picture` at `(t, z)`, written to `out_rhs[4]`.
///
/// # Safety
/// `z` and `out_rhs` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn rs_rhs(
    problem_in: *const RsProblem,
    picture: RsPicture,
    t: f64,
    z: *const f64,
    out_rhs: *mut f64,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let z = state4(z, "z")?;
        write_out(out_rhs, integrate::rhs(spec, picture.into(), t, &z).as_slice(), "out")
    })
}

/// Acceleration `q̈` of the force equation at `(t, q, q̇)`, written to `out_acc[2]`.
///
/// # Safety
/// `q` and `qdot` must point to 2 doubles, `out_acc` to 2 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rs_force(
    problem_in: *const RsProblem,
    t: f64,
    q: *const f64,
    qdot: *const f64,
    out_acc: *mut f64,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let q = Vector2::from_column_slice(array(q, 2, "q")?);
        let qdot = Vector2::from_column_slice(array(qdot, 2, "qdot")?);
        write_out(out_acc, force_rhs(spec, t, &q, &qdot).as_slice(), "out")
    })
}

/// RK4 over `[t0, t1]` with `steps` steps.
///
/// # Safety
/// `z0` must point to 4 doubles and `out_trajectory` be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_integrate(
    problem_in: *const RsProblem,
    picture: RsPicture,
    z0: *const f64,
    t0: f64,
    t1: f64,
    steps: usize,
    out_trajectory: *mut *mut RsTrajectory,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let z0 = state4(z0, "z0")?;
        let slot = out(out_trajectory, "out_trajectory")?;
        let inner = integrate::integrate(spec, picture.into(), &z0, t0, t1, steps)?;
        *slot = boxed(RsTrajectory { inner });
        Ok(())
    })
}

/// State after one unit of time from `t = 0`, written to `out_state[4]`.
///
/// # Safety
/// `z0` and `out_state` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn rs_time_one_map(
    problem_in: *const RsProblem,
    picture: RsPicture,
    z0: *const f64,
    steps: usize,
    out_state: *mut f64,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let z0 = state4(z0, "z0")?;
        let z1 = integrate::time_one_map(spec, picture.into(), &z0, steps)?;
        write_out(out_state, z1.as_slice(), "out")
    })
}

/// Number of stored states, `steps + 1`. Zero for NULL.
///
/// # Safety
/// `trajectory` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_trajectory_len(trajectory: *const RsTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |tr| tr.inner.states.len())
}

/// Row `k` as `(t, q1, q2, p1, p2)` in `out_row[5]`.
///
/// # Safety
/// `trajectory` must be a live handle and `out_row` point to 5 doubles.
#[no_mangle]
pub unsafe extern "C" fn rs_trajectory_row(trajectory: *const RsTrajectory, k: usize, out_row: *mut f64) -> RsStatus {
    guard(|| {
        let tr = &trajectory.as_ref().ok_or_else(|| null("trajectory"))?.inner;
        let z = tr.states.get(k).ok_or_else(|| {
            Failure(RsStatus::InvalidArgument, format!("row {k} out of range (len {})", tr.states.len()))
        })?;
        write_out(out_row, &[tr.time(k), z[0], z[1], z[2], z[3]], "out")
    })
}

/// Release a trajectory. NULL is ignored.
///
/// # Safety
/// `trajectory` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rs_trajectory_free(trajectory: *mut RsTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Discrete classical action of a loop sampled at `t = i/n`; `q` holds `2n`
/// doubles `(q1, q2)` per sample.
///
/// # Safety
/// `q` must point to `2 * n` doubles and `out_value` be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_classical_action(
    problem_in: *const RsProblem,
    q: *const f64,
    n: usize,
    out_value: *mut f64,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let q = points(array(q, 2 * n, "q")?);
        let slot = out(out_value, "out")?;
        *slot = classical_action(spec, &DiscreteLoop::configuration(q)?)?;
        Ok(())
    })
}

/// Discrete symplectic action of a phase loop; `q` and `p` hold `2n`
/// doubles each.
///
/// # Safety
/// `q` and `p` must point to `2 * n` doubles and `out_value` be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_symplectic_action(
    problem_in: *const RsProblem,
    q: *const f64,
    p: *const f64,
    n: usize,
    out_value: *mut f64,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let q = points(array(q, 2 * n, "q")?);
        let p = points(array(p, 2 * n, "p")?);
        let slot = out(out_value, "out")?;
        *slot = symplectic_action(spec, &DiscreteLoop::phase(q, p)?)?;
        Ok(())
    })
}

/// Shooting search for a 1-periodic orbit from `guess[4]`. Non-convergence
/// is not an error: check `summary.converged`.
///
/// # Safety
/// `guess` must point to 4 doubles and `summary` be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_find_orbit_shooting(
    problem_in: *const RsProblem,
    picture: RsPicture,
    guess: *const f64,
    tol: f64,
    max_iter: usize,
    summary: *mut RsOrbitSummary,
) -> RsStatus {
    guard(|| {
        let spec = problem(problem_in)?;
        let guess = state4(guess, "guess")?;
        let slot = out(summary, "summary")?;
        let r = find_orbit_shooting(spec, picture.into(), &guess, &SearchOptions::new(tol, max_iter))?;
        let z = r.initial_state;
        *slot = RsOrbitSummary {
            converged: r.converged as c_int,
            iterations: r.iterations,
            fixed_point_defect: r.defects.fixed_point,
            force_defect: r.defects.force,
            gradient_defect: r.defects.gradient,
            state: [z[0], z[1], z[2], z[3]],
        };
        Ok(())
    })
}
