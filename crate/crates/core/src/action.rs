//! Midpoint discretizations of the classical and symplectic actions on
//! uniformly sampled loops, their exact gradients, the window-shift value
//! and the force-equation residual.

use crate::domain::{DiscreteLoop, ProblemSpec, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::fields::force_rhs;
use nalgebra::Vector2;
use std::fmt;
use std::str::FromStr;

/// Which action functional a loop is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// Configuration loops, `∫ ½|q̇|² + A·q̇ − φ`.
    Classical,
    /// Phase loops, `∫ (p + A)·q̇ − ½|p|² − φ`.
    Symplectic,
}

impl Functional {
    pub fn as_str(&self) -> &'static str {
        match self {
            Functional::Classical => "classical",
            Functional::Symplectic => "symplectic",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Functional {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Functional::Classical),
            "symplectic" => Ok(Functional::Symplectic),
            _ => Err(Error::InvalidArgument(format!("unknown functional `{s}`"))),
        }
    }
}

/// Per-panel midpoint data shared by both functionals.
struct Panel {
    t: f64,
    mid: Vector2<f64>,
    delta: Vector2<f64>,
}

fn panels(lp: &DiscreteLoop) -> impl Iterator<Item = Panel> + '_ {
    let q = lp.q();
    let n = lp.n();
    (0..n).map(move |i| {
        let (a, b) = (q[i], q[(i + 1) % n]);
        Panel { t: (i as f64 + 0.5) / n as f64, mid: 0.5 * (a + b), delta: b - a }
    })
}

/// `Σ (n/2)|Δq|² + A(t̄, q̄)·Δq − φ(t̄, q̄)/n` over the `n` panels.
pub fn classical_action(spec: &ProblemSpec, lp: &DiscreteLoop) -> Result<f64> {
    lp.require_configuration()?;
    let n = lp.n() as f64;
    Ok(panels(lp)
        .map(|c| {
            0.5 * n * c.delta.norm_squared() + spec.potential.value(c.t, &c.mid).dot(&c.delta)
                - spec.scalar.value(c.t, &c.mid) / n
        })
        .sum())
}

/// Exact partial derivatives of [`classical_action`] with respect to each `q_i`.
pub fn classical_action_gradient(spec: &ProblemSpec, lp: &DiscreteLoop) -> Result<Vec<Vector2<f64>>> {
    lp.require_configuration()?;
    let n = lp.n();
    let nf = n as f64;
    let mut grad = vec![Vector2::zeros(); n];
    for (i, c) in panels(lp).enumerate() {
        let a = spec.potential.jet(c.t, &c.mid);
        let phi = spec.scalar.jet(c.t, &c.mid);
        let d_delta = nf * c.delta + a.value;
        let d_mid = a.jacobian.transpose() * c.delta - phi.gradient / nf;
        grad[i] += 0.5 * d_mid - d_delta;
        grad[(i + 1) % n] += 0.5 * d_mid + d_delta;
    }
    Ok(grad)
}

/// `Σ (p̄ + A(t̄, q̄))·Δq − (½|p̄|² + φ(t̄, q̄))/n` over the `n` panels.
pub fn symplectic_action(spec: &ProblemSpec, lp: &DiscreteLoop) -> Result<f64> {
    let p = lp.require_phase()?;
    let n = lp.n();
    let nf = n as f64;
    Ok(panels(lp)
        .enumerate()
        .map(|(i, c)| {
            let pm = 0.5 * (p[i] + p[(i + 1) % n]);
            (pm + spec.potential.value(c.t, &c.mid)).dot(&c.delta)
                - (0.5 * pm.norm_squared() + spec.scalar.value(c.t, &c.mid)) / nf
        })
        .sum())
}

/// Exact partials of [`symplectic_action`], `(∂/∂q_i, ∂/∂p_i)` per sample.
pub fn symplectic_action_gradient(
    spec: &ProblemSpec,
    lp: &DiscreteLoop,
) -> Result<Vec<(Vector2<f64>, Vector2<f64>)>> {
    let p = lp.require_phase()?;
    let n = lp.n();
    let nf = n as f64;
    let mut grad = vec![(Vector2::zeros(), Vector2::zeros()); n];
    for (i, c) in panels(lp).enumerate() {
        let j = (i + 1) % n;
        let pm = 0.5 * (p[i] + p[j]);
        let a = spec.potential.jet(c.t, &c.mid);
        let phi = spec.scalar.jet(c.t, &c.mid);
        let d_delta = pm + a.value;
        let d_mid = a.jacobian.transpose() * c.delta - phi.gradient / nf;
        let d_pm = c.delta - pm / nf;
        grad[i].0 += 0.5 * d_mid - d_delta;
        grad[j].0 += 0.5 * d_mid + d_delta;
        grad[i].1 += 0.5 * d_pm;
        grad[j].1 += 0.5 * d_pm;
    }
    Ok(grad)
}

/// Gradient of the chosen functional flattened like [`DiscreteLoop::to_flat`].
pub fn action_gradient_flat(spec: &ProblemSpec, functional: Functional, lp: &DiscreteLoop) -> Result<Vec<f64>> {
    Ok(match functional {
        Functional::Classical => classical_action_gradient(spec, lp)?
            .into_iter()
            .flat_map(|g| [g.x, g.y])
            .collect(),
        Functional::Symplectic => symplectic_action_gradient(spec, lp)?
            .into_iter()
            .flat_map(|(gq, gp)| [gq.x, gq.y, gp.x, gp.y])
            .collect(),
    })
}

pub fn action_value(spec: &ProblemSpec, functional: Functional, lp: &DiscreteLoop) -> Result<f64> {
    match functional {
        Functional::Classical => classical_action(spec, lp),
        Functional::Symplectic => symplectic_action(spec, lp),
    }
}

/// `Σ A(t̄ + k, q̄)·Δq`, the magnetic term over the window `[k, k + 1]`.
pub fn window_shift_value(spec: &ProblemSpec, lp: &DiscreteLoop, k: i32) -> f64 {
    let shift = k as f64;
    panels(lp).map(|c| spec.potential.value(c.t + shift, &c.mid).dot(&c.delta)).sum()
}

/// `max_i |n²(q_{i+1} − 2q_i + q_{i−1}) − F(t_i, q_i, n(q_{i+1} − q_{i−1})/2)|`.
pub fn force_residual(spec: &ProblemSpec, lp: &DiscreteLoop) -> f64 {
    let q = lp.q();
    let n = lp.n();
    let nf = n as f64;
    (0..n)
        .map(|i| {
            let (prev, next) = (q[lp.wrap(i, -1)], q[lp.wrap(i, 1)]);
            let acc = nf * nf * (next - 2.0 * q[i] + prev);
            let vel = 0.5 * nf * (next - prev);
            (acc - force_rhs(spec, lp.time(i), &q[i], &vel)).norm()
        })
        .fold(0.0, f64::max)
}
