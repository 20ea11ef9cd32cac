//! Periodic orbits: Newton shooting on the time-one map and
//! Levenberg-Marquardt root finding on discrete action gradients.

use crate::action::{action_gradient_flat, force_residual, Functional};
use crate::domain::{DiscreteLoop, ProblemSpec};
use crate::error::{Error, Result};
use crate::integrate::{flow_with_jacobian, integrate, time_one_map, Picture, DEFAULT_STEPS};
use nalgebra::{DMatrix, DVector, Matrix4, Vector2, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_LOOP_SAMPLES: usize = 256;
const SVD_CUTOFF: f64 = 1e-8;
const MAX_LINE_SEARCH_HALVINGS: usize = 10;
const MAX_DAMPING_RETRIES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Shooting,
    Variational,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Shooting => "shooting",
            Method::Variational => "variational",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shooting" => Ok(Method::Shooting),
            "variational" => Ok(Method::Variational),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defects {
    /// `‖time_one_map(z*) − z*‖∞`
    pub fixed_point: f64,
    /// [`force_residual`] of the configuration loop.
    pub force: f64,
    /// Sup-norm of the action gradient on the loop.
    pub gradient: f64,
}

impl Defects {
    pub fn max_abs_diff(&self, other: &Defects) -> f64 {
        (self.fixed_point - other.fixed_point)
            .abs()
            .max((self.force - other.force).abs())
            .max((self.gradient - other.gradient).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub method: Method,
    pub picture: Picture,
    /// Functional whose gradient is reported in `defects.gradient`.
    pub functional: Functional,
    /// Initial state of the orbit in `picture` coordinates.
    pub initial_state: Vector4<f64>,
    pub orbit: DiscreteLoop,
    pub defects: Defects,
    pub iterations: usize,
    pub converged: bool,
}

/// Tuning shared by both finders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// RK4 steps per unit time.
    pub steps: usize,
    /// Samples of the loop attached to shooting results.
    pub loop_samples: usize,
}

impl SearchOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self { tol, max_iter, steps: DEFAULT_STEPS, loop_samples: DEFAULT_LOOP_SAMPLES }
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.steps == 0 || self.loop_samples == 0 {
            return Err(Error::InvalidArgument("steps and loop samples must be positive".into()));
        }
        Ok(())
    }
}

/// Functional naturally attached to orbits of a picture: the classical
/// action for configuration-velocity pictures, the symplectic action for
/// the twisted ones.
pub fn functional_for(picture: Picture) -> Functional {
    match picture {
        Picture::Canonical | Picture::Force => Functional::Classical,
        Picture::Twisted | Picture::EulerFlow => Functional::Symplectic,
    }
}

/// Picture in which a variational orbit of `functional` is checked as a
/// fixed point.
pub fn picture_for(functional: Functional) -> Picture {
    match functional {
        Functional::Classical => Picture::Canonical,
        Functional::Symplectic => Picture::Twisted,
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Velocities `q̇(t_i)` of the trigonometric interpolant of the loop.
pub fn spectral_velocity(q: &[Vector2<f64>]) -> Vec<Vector2<f64>> {
    let n = q.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<f64>> = q.iter().map(|v| Complex::new(v.x, v.y)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex::new(0.0, std::f64::consts::TAU * freq / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| Vector2::new(c.re, c.im)).collect()
}

/// Initial state of a loop in the fixed-point picture of `functional`:
/// `(q₀, q̇₀ + A₀(q₀))` canonical for the classical action, `(q₀, q̇₀)`
/// twisted for the symplectic one, with `q̇₀` spectral.
pub fn loop_initial_state(spec: &ProblemSpec, functional: Functional, lp: &DiscreteLoop) -> Vector4<f64> {
    let q0 = lp.q()[0];
    let v0 = spectral_velocity(lp.q())[0];
    let p0 = match functional {
        Functional::Classical => v0 + spec.potential.value(0.0, &q0),
        Functional::Symplectic => v0,
    };
    Vector4::new(q0.x, q0.y, p0.x, p0.y)
}

/// Loop of `loop_samples` points along the orbit through `z0`.
pub fn sample_orbit(
    spec: &ProblemSpec,
    picture: Picture,
    z0: &Vector4<f64>,
    steps: usize,
    loop_samples: usize,
) -> Result<DiscreteLoop> {
    let per = steps.div_ceil(loop_samples).max(1);
    let traj = integrate(spec, picture, z0, 0.0, 1.0, per * loop_samples)?;
    let pick = |i: usize| traj.states[i * per];
    let q = (0..loop_samples).map(|i| Vector2::new(pick(i)[0], pick(i)[1])).collect();
    match functional_for(picture) {
        Functional::Classical => DiscreteLoop::configuration(q),
        Functional::Symplectic => {
            DiscreteLoop::phase(q, (0..loop_samples).map(|i| Vector2::new(pick(i)[2], pick(i)[3])).collect())
        }
    }
}

fn fixed_point_defect(spec: &ProblemSpec, picture: Picture, z: &Vector4<f64>, steps: usize) -> Result<f64> {
    Ok((time_one_map(spec, picture, z, steps)? - z).amax())
}

fn loop_defects(
    spec: &ProblemSpec,
    picture: Picture,
    functional: Functional,
    z: &Vector4<f64>,
    lp: &DiscreteLoop,
    steps: usize,
) -> Result<Defects> {
    Ok(Defects {
        fixed_point: fixed_point_defect(spec, picture, z, steps)?,
        force: force_residual(spec, lp),
        gradient: sup(&action_gradient_flat(spec, functional, lp)?),
    })
}

impl OrbitResult {
    /// Recompute every defect from the stored state and loop.
    pub fn recertify(&self, spec: &ProblemSpec, steps: usize) -> Result<Defects> {
        let z = match self.method {
            Method::Shooting => self.initial_state,
            Method::Variational => loop_initial_state(spec, self.functional, &self.orbit),
        };
        loop_defects(spec, self.picture, self.functional, &z, &self.orbit, steps)
    }
}

/// Damped Newton on `F(z) = Φ¹(z) − z` with SVD pseudo-inverse steps.
pub fn find_orbit_shooting(
    spec: &ProblemSpec,
    picture: Picture,
    z_guess: &Vector4<f64>,
    opts: &SearchOptions,
) -> Result<OrbitResult> {
    opts.check()?;
    let mut z = *z_guess;
    let mut iterations = 0;
    let (mut image, mut jac) = flow_with_jacobian(spec, picture, &z, 0.0, 1.0, opts.steps)?;
    let mut residual = image - z;
    while residual.amax() >= opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let svd = (jac - Matrix4::identity()).svd(true, true);
        let cutoff = SVD_CUTOFF * svd.singular_values.max();
        let step = svd.solve(&(-residual), cutoff).map_err(|e| Error::InvalidArgument(e.to_string()))?;

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_LINE_SEARCH_HALVINGS {
            let trial = z + step * alpha;
            let r = time_one_map(spec, picture, &trial, opts.steps)? - trial;
            if r.amax() < residual.amax() {
                accepted = Some(trial);
                break;
            }
            alpha *= 0.5;
        }
        let Some(next) = accepted else { break };
        z = next;
        (image, jac) = flow_with_jacobian(spec, picture, &z, 0.0, 1.0, opts.steps)?;
        residual = image - z;
    }

    let orbit = sample_orbit(spec, picture, &z, opts.steps, opts.loop_samples)?;
    let functional = functional_for(picture);
    let defects = loop_defects(spec, picture, functional, &z, &orbit, opts.steps)?;
    Ok(OrbitResult {
        method: Method::Shooting,
        picture,
        functional,
        initial_state: z,
        orbit,
        converged: defects.fixed_point < opts.tol,
        defects,
        iterations,
    })
}

fn gradient_at(spec: &ProblemSpec, functional: Functional, template: &DiscreteLoop, x: &[f64]) -> Result<DVector<f64>> {
    Ok(DVector::from_vec(action_gradient_flat(spec, functional, &template.with_flat(x))?))
}

/// Levenberg-Marquardt on `G(loop) = ∇S(loop)`, minimizing `‖G‖²`.
pub fn find_orbit_variational(
    spec: &ProblemSpec,
    functional: Functional,
    loop_guess: &DiscreteLoop,
    opts: &SearchOptions,
) -> Result<OrbitResult> {
    opts.check()?;
    match functional {
        Functional::Classical => loop_guess.require_configuration()?,
        Functional::Symplectic => {
            loop_guess.require_phase()?;
        }
    }
    let mut x = loop_guess.to_flat();
    let dim = x.len();
    let mut g = gradient_at(spec, functional, loop_guess, &x)?;
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while g.amax() >= opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let mut jac = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x.clone();
            xp[k] += h;
            jac.set_column(k, &((gradient_at(spec, functional, loop_guess, &xp)? - &g) / h));
        }
        let jtj = jac.tr_mul(&jac);
        let jtg = jac.tr_mul(&g);
        let mut improved = false;
        for _ in 0..MAX_DAMPING_RETRIES {
            let mut lhs = jtj.clone();
            for d in 0..dim {
                lhs[(d, d)] += lambda;
            }
            let Some(chol) = lhs.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&jtg));
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let g_trial = gradient_at(spec, functional, loop_guess, &trial)?;
            if g_trial.norm() < g.norm() {
                x = trial;
                g = g_trial;
                lambda *= 0.5;
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }

    let orbit = loop_guess.with_flat(&x);
    let picture = picture_for(functional);
    let z = loop_initial_state(spec, functional, &orbit);
    let defects = loop_defects(spec, picture, functional, &z, &orbit, opts.steps)?;
    Ok(OrbitResult {
        method: Method::Variational,
        picture,
        functional,
        initial_state: z,
        orbit,
        converged: g.amax() < opts.tol,
        defects,
        iterations,
    })
}

/// `base` followed by `count − 1` copies with independent uniform
/// perturbations of relative size `scale` (seeded per index).
pub fn seeded_guesses(base: &Vector4<f64>, count: usize, scale: f64, seed: u64) -> Vec<Vector4<f64>> {
    (0..count.max(1))
        .map(|i| {
            if i == 0 {
                return *base;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let size = scale * base.amax().max(1.0);
            base + Vector4::from_fn(|_, _| rng.gen_range(-size..size))
        })
        .collect()
}

/// `base` followed by `count − 1` noisy copies, relative noise `scale`.
pub fn seeded_loops(base: &DiscreteLoop, count: usize, scale: f64, seed: u64) -> Vec<DiscreteLoop> {
    let flat = base.to_flat();
    let size = scale * sup(&flat).max(1.0);
    (0..count.max(1))
        .map(|i| {
            if i == 0 {
                return base.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let noisy: Vec<f64> = flat.iter().map(|v| v + rng.gen_range(-size..size)).collect();
            base.with_flat(&noisy)
        })
        .collect()
}

/// Independent shooting runs, results in input order.
pub fn multi_start_shooting(
    spec: &ProblemSpec,
    picture: Picture,
    guesses: &[Vector4<f64>],
    opts: &SearchOptions,
) -> Result<Vec<OrbitResult>> {
    guesses.par_iter().map(|z| find_orbit_shooting(spec, picture, z, opts)).collect()
}

/// Independent variational runs, results in input order.
pub fn multi_start_variational(
    spec: &ProblemSpec,
    functional: Functional,
    guesses: &[DiscreteLoop],
    opts: &SearchOptions,
) -> Result<Vec<OrbitResult>> {
    guesses.par_iter().map(|lp| find_orbit_variational(spec, functional, lp, opts)).collect()
}

/// The best result: converged before non-converged, then smallest
/// gradient defect, then lowest index.
pub fn best_result(results: Vec<OrbitResult>) -> Option<OrbitResult> {
    let key = |r: &OrbitResult| {
        let primary = match r.method {
            Method::Shooting => r.defects.fixed_point,
            Method::Variational => r.defects.gradient,
        };
        (!r.converged, primary)
    };
    results.into_iter().reduce(|best, r| {
        let (kb, kr) = (key(&best), key(&r));
        if kr.0 < kb.0 || (kr.0 == kb.0 && kr.1 < kb.1) {
            r
        } else {
            best
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{j0, FourierProfile};
    use crate::transforms::{eliminate_scalar, make_merry_go_round};
    use std::f64::consts::TAU;

    fn mgr(omega: f64) -> ProblemSpec {
        make_merry_go_round(FourierProfile::constant(omega))
    }

    fn noisy_circle(n: usize, scale: f64, seed: u64) -> DiscreteLoop {
        seeded_loops(&DiscreteLoop::clockwise_circle(n).unwrap(), 2, scale, seed).pop().unwrap()
    }

    #[test]
    fn names_roundtrip() {
        assert_eq!("shooting".parse::<Method>().unwrap(), Method::Shooting);
        assert_eq!("variational".parse::<Method>().unwrap(), Method::Variational);
        assert!("bisection".parse::<Method>().is_err());
    }

    #[test]
    fn spectral_velocity_of_circle() {
        let lp = DiscreteLoop::clockwise_circle(64).unwrap();
        let v = spectral_velocity(lp.q());
        for (i, q) in lp.q().iter().enumerate() {
            let exact = -TAU * (j0() * q);
            assert!((v[i] - exact).amax() < 1e-12, "{i}");
        }
    }

    #[test]
    fn shooting_on_degenerate_family() {
        let r = find_orbit_shooting(
            &mgr(TAU),
            Picture::Canonical,
            &Vector4::new(0.9, 0.1, 0.05, -0.05),
            &SearchOptions::new(1e-10, 20),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.defects.fixed_point < 1e-9);
        assert!(r.initial_state[2].abs() < 1e-9 && r.initial_state[3].abs() < 1e-9);
        assert!(r.defects.gradient < 1e-6, "{:?}", r.defects);
    }

    #[test]
    fn shooting_free_particle_stops_drift() {
        let r = find_orbit_shooting(
            &ProblemSpec::free_particle(),
            Picture::Canonical,
            &Vector4::new(0.0, 0.0, 0.1, 0.0),
            &SearchOptions::new(1e-10, 20),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.initial_state.fixed_rows::<2>(2).amax() < 1e-10);
    }

    #[test]
    fn shooting_nonresonant_rotation_finds_origin() {
        let r = find_orbit_shooting(
            &mgr(1.0),
            Picture::Canonical,
            &Vector4::new(0.1, -0.05, 0.02, 0.03),
            &SearchOptions::new(1e-10, 20),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.initial_state.amax() < 1e-9, "{}", r.initial_state);
    }

    #[test]
    fn shooting_reports_non_convergence() {
        let r = find_orbit_shooting(
            &mgr(1.0),
            Picture::Canonical,
            &Vector4::new(5.0, -3.0, 2.0, 1.0),
            &SearchOptions::new(1e-12, 0),
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn variational_classical_from_noisy_circle() {
        let spec = mgr(TAU);
        let r = find_orbit_variational(&spec, Functional::Classical, &noisy_circle(256, 0.01, 7), &SearchOptions::new(1e-8, 50))
            .unwrap();
        assert!(r.converged, "{:?}", r.defects);
        assert!(r.defects.gradient < 1e-8);
        assert!(r.defects.force < 1e-2, "{:?}", r.defects);
        // cross-method: the loop's initial state is a canonical fixed point
        assert!(r.defects.fixed_point < 1e-6, "{:?}", r.defects);
        let again = r.recertify(&spec, DEFAULT_STEPS).unwrap();
        assert!(again.max_abs_diff(&r.defects) <= 1e-12);
    }

    #[test]
    fn variational_free_constant_loop_is_immediate() {
        let lp = DiscreteLoop::sample(16, |_| Vector2::new(0.4, 0.1)).unwrap();
        let r = find_orbit_variational(&ProblemSpec::free_particle(), Functional::Classical, &lp, &SearchOptions::new(1e-8, 5))
            .unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn variational_symplectic_recovers_velocity() {
        let spec = mgr(TAU);
        let guess = DiscreteLoop::sample_phase(128, |t| {
            let q = Vector2::new((TAU * t).cos(), -(TAU * t).sin());
            (q, -TAU * (j0() * q))
        })
        .unwrap();
        let guess = seeded_loops(&guess, 2, 0.01, 5).pop().unwrap();
        let r = find_orbit_variational(&spec, Functional::Symplectic, &guess, &SearchOptions::new(1e-8, 50)).unwrap();
        assert!(r.converged, "{:?}", r.defects);
        let q = r.orbit.q();
        let p = r.orbit.p().unwrap();
        let n = q.len() as f64;
        for i in 0..q.len() {
            let central = 0.5 * n * (q[r.orbit.wrap(i, 1)] - q[r.orbit.wrap(i, -1)]);
            assert!((p[i] - central).amax() < 1e-2, "{i}");
        }
    }

    #[test]
    fn variational_rejects_wrong_loop_kind() {
        let lp = DiscreteLoop::clockwise_circle(16).unwrap();
        assert!(matches!(
            find_orbit_variational(&mgr(TAU), Functional::Symplectic, &lp, &SearchOptions::new(1e-8, 5)),
            Err(Error::LoopKind(_))
        ));
    }

    #[test]
    fn shooting_certificate_and_cross_method() {
        let spec = mgr(TAU);
        let opts = SearchOptions::new(1e-10, 20);
        let r = find_orbit_shooting(&spec, Picture::Canonical, &Vector4::new(0.9, 0.1, 0.05, -0.05), &opts).unwrap();
        assert!(r.recertify(&spec, opts.steps).unwrap().max_abs_diff(&r.defects) <= 1e-12);
        // the shooting loop is a near-critical point of the classical action
        let v = find_orbit_variational(&spec, Functional::Classical, &r.orbit, &SearchOptions::new(1e-8, 20)).unwrap();
        assert!(v.converged);
        let drift = v.orbit.q().iter().zip(r.orbit.q()).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
        assert!(drift < 1e-6, "{drift}");
    }

    #[test]
    fn gauge_robust_shooting() {
        let spec = make_merry_go_round(FourierProfile::constant(TAU));
        let elim = eliminate_scalar(&spec).unwrap();
        let opts = SearchOptions::new(1e-10, 20);
        let guess = Vector4::new(0.9, 0.1, 0.5, -5.0);
        let a = find_orbit_shooting(&spec, Picture::Force, &guess, &opts).unwrap();
        let b = find_orbit_shooting(&elim, Picture::Force, &guess, &opts).unwrap();
        assert!(a.converged && b.converged);
        let drift = a.orbit.q().iter().zip(b.orbit.q()).map(|(x, y)| (x - y).amax()).fold(0.0, f64::max);
        assert!(drift < 1e-6, "{drift}");
    }

    #[test]
    fn multi_start_is_ordered_and_deterministic() {
        let spec = mgr(TAU);
        let guesses = seeded_guesses(&Vector4::new(0.9, 0.1, 0.05, -0.05), 4, 0.1, 42);
        assert_eq!(guesses.len(), 4);
        let opts = SearchOptions::new(1e-10, 20);
        let a = multi_start_shooting(&spec, Picture::Canonical, &guesses, &opts).unwrap();
        let b = multi_start_shooting(&spec, Picture::Canonical, &guesses, &opts).unwrap();
        assert_eq!(a, b);
        let best = best_result(a).unwrap();
        assert!(best.converged);
    }
}
