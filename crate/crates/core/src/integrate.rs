//! Fixed-step RK4 integration of the four dynamical pictures, flow
//! Jacobians through the variational equation, and the symplecticity check
//! of the Euler flow.

use crate::domain::{split, PhaseState, ProblemSpec};
use crate::error::{Error, Result};
use crate::fields::{canonical_rhs, euler_vf_y, force_rhs, hamiltonian_vf_x, omega_matrix};
use nalgebra::{Matrix4, SVector, Vector2, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_STEPS: usize = 4096;

/// Which first-order system is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Picture {
    /// `(q, p)` under `H = ½|p − A|² + φ` and `ω_can`.
    Canonical,
    /// `(q, p)` under `H = ½|p|² + φ` and the twisted form: `v̇ = X + Y`.
    Twisted,
    /// `(q, q̇)` for the second-order force equation.
    Force,
    /// `(q, p)` under the Euler vector field `Y` alone.
    EulerFlow,
}

impl Picture {
    pub const ALL: [Picture; 4] = [Picture::Canonical, Picture::Twisted, Picture::Force, Picture::EulerFlow];

    pub fn as_str(&self) -> &'static str {
        match self {
            Picture::Canonical => "canonical",
            Picture::Twisted => "twisted",
            Picture::Force => "force",
            Picture::EulerFlow => "euler-flow",
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Picture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Picture::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown picture `{s}`")))
    }
}

/// Right-hand side of the chosen picture at `(t, z)`.
pub fn rhs(spec: &ProblemSpec, picture: Picture, t: f64, z: &Vector4<f64>) -> Vector4<f64> {
    let state = PhaseState::from_vector(t, z);
    match picture {
        Picture::Canonical => canonical_rhs(spec, &state),
        Picture::Twisted => hamiltonian_vf_x(spec, &state) + euler_vf_y(spec, &state),
        Picture::Force => {
            let (q, qdot) = split(z);
            let acc = force_rhs(spec, t, &q, &qdot);
            Vector4::new(qdot.x, qdot.y, acc.x, acc.y)
        }
        Picture::EulerFlow => euler_vf_y(spec, &state),
    }
}

/// Samples of one integration, `states[k]` at `t0 + k·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub picture: Picture,
    pub t0: f64,
    pub dt: f64,
    pub states: Vec<Vector4<f64>>,
}

impl Trajectory {
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn last(&self) -> &Vector4<f64> {
        self.states.last().expect("trajectories are nonempty")
    }

    pub fn positions(&self) -> impl Iterator<Item = Vector2<f64>> + '_ {
        self.states.iter().map(|z| Vector2::new(z[0], z[1]))
    }
}

fn rk4_step<const D: usize>(
    f: &impl Fn(f64, &SVector<f64, D>) -> SVector<f64, D>,
    t: f64,
    y: &SVector<f64, D>,
    h: f64,
) -> SVector<f64, D> {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &(y + k1 * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y + k2 * (0.5 * h)));
    let k4 = f(t + h, &(y + k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn check_steps(t0: f64, t1: f64, n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    Ok(())
}

fn march<const D: usize>(
    f: impl Fn(f64, &SVector<f64, D>) -> SVector<f64, D>,
    y0: SVector<f64, D>,
    t0: f64,
    t1: f64,
    n_steps: usize,
    mut visit: impl FnMut(&SVector<f64, D>),
) -> Result<SVector<f64, D>> {
    let h = (t1 - t0) / n_steps as f64;
    let mut y = y0;
    visit(&y);
    for k in 0..n_steps {
        let t = t0 + k as f64 * h;
        y = rk4_step(&f, t, &y, h);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step: k + 1, t: t + h });
        }
        visit(&y);
    }
    Ok(y)
}

/// Classical RK4 with step `(t1 − t0)/n_steps`.
pub fn integrate(
    spec: &ProblemSpec,
    picture: Picture,
    z0: &Vector4<f64>,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    check_steps(t0, t1, n_steps)?;
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { step: 0, t: t0 });
    }
    let mut states = Vec::with_capacity(n_steps + 1);
    march(|t, z| rhs(spec, picture, t, z), *z0, t0, t1, n_steps, |z| states.push(*z))?;
    Ok(Trajectory { picture, t0, dt: (t1 - t0) / n_steps as f64, states })
}

/// State after one unit of time from `t = 0`.
pub fn time_one_map(spec: &ProblemSpec, picture: Picture, z0: &Vector4<f64>, n_steps: usize) -> Result<Vector4<f64>> {
    check_steps(0.0, 1.0, n_steps)?;
    march(|t, z| rhs(spec, picture, t, z), *z0, 0.0, 1.0, n_steps, |_| {})
}

/// Jacobian of the right-hand side by central differences,
/// `h = 1e-6·(1 + |z|)`.
pub fn rhs_jacobian(spec: &ProblemSpec, picture: Picture, t: f64, z: &Vector4<f64>) -> Matrix4<f64> {
    let h = 1e-6 * (1.0 + z.norm());
    let mut jac = Matrix4::zeros();
    for k in 0..4 {
        let mut e = Vector4::zeros();
        e[k] = h;
        let col = (rhs(spec, picture, t, &(z + e)) - rhs(spec, picture, t, &(z - e))) / (2.0 * h);
        jac.set_column(k, &col);
    }
    jac
}

/// Final state and flow Jacobian over `[t0, t1]` from the augmented
/// 4 + 16 dimensional variational system.
pub fn flow_with_jacobian(
    spec: &ProblemSpec,
    picture: Picture,
    z0: &Vector4<f64>,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<(Vector4<f64>, Matrix4<f64>)> {
    if t1 == t0 {
        return Ok((*z0, Matrix4::identity()));
    }
    check_steps(t0, t1, n_steps)?;
    let mut y0 = SVector::<f64, 20>::zeros();
    y0.fixed_rows_mut::<4>(0).copy_from(z0);
    for k in 0..4 {
        y0[4 + 5 * k] = 1.0;
    }
    let f = |t: f64, y: &SVector<f64, 20>| {
        let z: Vector4<f64> = y.fixed_rows::<4>(0).into_owned();
        let phi = Matrix4::from_column_slice(&y.as_slice()[4..]);
        let mut out = SVector::<f64, 20>::zeros();
        out.fixed_rows_mut::<4>(0).copy_from(&rhs(spec, picture, t, &z));
        let dphi = rhs_jacobian(spec, picture, t, &z) * phi;
        out.as_mut_slice()[4..].copy_from_slice(dphi.as_slice());
        out
    };
    let y = march(f, y0, t0, t1, n_steps, |_| {})?;
    Ok((y.fixed_rows::<4>(0).into_owned(), Matrix4::from_column_slice(&y.as_slice()[4..])))
}

/// Jacobian of the time-`t1` flow map (from `t = 0`) at `z0`.
pub fn flow_jacobian(
    spec: &ProblemSpec,
    picture: Picture,
    z0: &Vector4<f64>,
    t1: f64,
    n_steps: usize,
) -> Result<Matrix4<f64>> {
    flow_with_jacobian(spec, picture, z0, 0.0, t1, n_steps).map(|(_, j)| j)
}

fn probe_points(z0: &Vector4<f64>, probe_count: usize) -> Vec<Vector4<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![*z0];
    while out.len() < probe_count.max(1) {
        let offset = Vector4::from_fn(|_, _| rng.gen_range(-0.5..0.5));
        out.push(z0 + offset);
    }
    out
}

/// `‖Dᵀ Ω₀(φ^t_Y z) D − Ω_t(z)‖∞` for the Euler flow `φ^t_Y` with `D` its
/// Jacobian at `z`, i.e. the defect of `(φ^t_Y)*ω₀ = ω_t`.
///
/// Evaluated at `z0` and `probe_count − 1` further deterministic points in a
/// box of half-width 0.5 around it; the maximum is returned.
pub fn euler_flow_symplecticity_defect(
    spec: &ProblemSpec,
    t: f64,
    z0: &Vector4<f64>,
    n_steps: usize,
    probe_count: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in probe_points(z0, probe_count) {
        let (zt, d) = flow_with_jacobian(spec, Picture::EulerFlow, &z, 0.0, t, n_steps)?;
        let pulled = d.transpose() * omega_matrix(spec, 0.0, &Vector2::new(zt[0], zt[1])) * d;
        worst = worst.max((pulled - omega_matrix(spec, t, &Vector2::new(z[0], z[1]))).amax());
    }
    Ok(worst)
}

/// `‖Dᵀ Ω_t(φ^t_Y z) D − Ω₀(z)‖∞`, the defect of `(φ^t_Y)*ω_t = ω₀`.
///
/// This is the identity the Euler flow satisfies when `ω_t` itself varies
/// in time; it coincides with [`euler_flow_symplecticity_defect`] whenever
/// `ω_t = ω₀`.
pub fn euler_flow_pullback_defect(
    spec: &ProblemSpec,
    t: f64,
    z0: &Vector4<f64>,
    n_steps: usize,
    probe_count: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in probe_points(z0, probe_count) {
        let (zt, d) = flow_with_jacobian(spec, Picture::EulerFlow, &z, 0.0, t, n_steps)?;
        let pulled = d.transpose() * omega_matrix(spec, t, &Vector2::new(zt[0], zt[1])) * d;
        worst = worst.max((pulled - omega_matrix(spec, 0.0, &Vector2::new(z[0], z[1]))).amax());
    }
    Ok(worst)
}
