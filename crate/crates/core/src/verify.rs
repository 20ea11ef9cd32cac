//! Verification suite: per-spec invariant checks and the ten acceptance
//! criteria, reported as rows of measured value against tolerance.

use crate::action::{
    action_gradient_flat, classical_action, symplectic_action, window_shift_value, Functional,
};
use crate::domain::{
    j0, parse_config, BoundingBox, DiscreteLoop, FourierProfile, PhaseOneForm, PhaseState, ProblemSpec,
    ScalarField, TwistedPrimitive,
};
use crate::error::Result;
use crate::fields::{
    euler_vf_y, flat, hamiltonian_differential, hamiltonian_vf_x, lambda_dot, rot_a, twist_defect,
};
use crate::integrate::{
    euler_flow_pullback_defect, euler_flow_symplecticity_defect, integrate, time_one_map, Picture, DEFAULT_STEPS,
};
use crate::io::{fmt_f64, read_loop};
use crate::orbits::{find_orbit_shooting, find_orbit_variational, seeded_guesses, seeded_loops, SearchOptions};
use crate::transforms::{eliminate_hamiltonian, eliminate_scalar, make_merry_go_round, verify_yh_identity};
use nalgebra::{Vector2, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Shipped presets as `(name, config JSON)`.
pub const SHIPPED_PRESETS: &[(&str, &str)] = &[
    ("merry-go-round", include_str!("../presets/merry-go-round.json")),
    ("modulated-merry-go-round", include_str!("../presets/modulated-merry-go-round.json")),
    ("eliminated-merry-go-round", include_str!("../presets/eliminated-merry-go-round.json")),
    ("free-particle", include_str!("../presets/free-particle.json")),
];

const REGRESSION_LOOP: &str = include_str!("../data/regression-loop.csv");
const REGRESSION_ACTION: &str = include_str!("../data/regression-action.txt");

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Below,
    AtMost,
    AtLeast,
}

impl Comparison {
    pub fn symbol(&self) -> &'static str {
        match self {
            Comparison::Below => "<",
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        }
    }

    fn holds(&self, measured: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Below => measured < tolerance,
            Comparison::AtMost => measured <= tolerance,
            Comparison::AtLeast => measured >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(name: impl Into<String>, measured: f64, comparison: Comparison, tolerance: f64) -> Self {
        Self { name: name.into(), measured, comparison, tolerance, pass: comparison.holds(measured, tolerance) }
    }

    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Comparison::Below, tolerance)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Comparison::AtLeast, tolerance)
    }

    /// A row that failed because the computation itself errored.
    pub fn errored(name: impl Into<String>, err: &crate::Error) -> Self {
        Self {
            name: format!("{} ({err})", name.into()),
            measured: f64::NAN,
            comparison: Comparison::Below,
            tolerance: 0.0,
            pass: false,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Rows in a fixed order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// CSV with header `check,measured,comparison,tolerance,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,measured,comparison,tolerance,status\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "\"{}\",{},{},{},{}",
                r.name.replace('"', "'"),
                fmt_f64(r.measured),
                r.comparison.symbol(),
                fmt_f64(r.tolerance),
                r.status()
            );
        }
        out
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        for r in &self.rows {
            let pad = width - r.name.chars().count();
            let _ = writeln!(
                out,
                "{}  {}{}  {} {} {}",
                r.status(),
                r.name,
                " ".repeat(pad),
                fmt_f64(r.measured),
                r.comparison.symbol(),
                fmt_f64(r.tolerance)
            );
        }
        out
    }
}

fn guarded(name: &str, f: impl FnOnce() -> Result<Vec<CheckRow>>) -> Vec<CheckRow> {
    f().unwrap_or_else(|e| vec![CheckRow::errored(name, &e)])
}

fn unit_ball_point<const D: usize>(rng: &mut ChaCha8Rng) -> nalgebra::SVector<f64, D> {
    loop {
        let v = nalgebra::SVector::<f64, D>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Smooth loop with `harmonics` random Fourier modes of amplitude ≤ `amp`.
fn fourier_loop(rng: &mut ChaCha8Rng, n: usize, harmonics: usize, amp: f64) -> Result<DiscreteLoop> {
    let c: Vec<[f64; 4]> = (0..=harmonics)
        .map(|_| [0; 4].map(|_| rng.gen_range(-amp..amp)))
        .collect();
    DiscreteLoop::sample(n, |t| {
        c.iter().enumerate().fold(Vector2::zeros(), |acc, (k, ck)| {
            let (s, co) = (TAU * k as f64 * t).sin_cos();
            acc + Vector2::new(ck[0] * co + ck[1] * s, ck[2] * co + ck[3] * s)
        })
    })
}

fn random_profile(rng: &mut ChaCha8Rng) -> FourierProfile {
    let k = rng.gen_range(0..=3);
    let mut draw = || rng.gen_range(-3.0..3.0);
    let c0 = draw();
    let cos: Vec<f64> = (0..k).map(|_| draw()).collect();
    let sin: Vec<f64> = (0..k).map(|_| draw()).collect();
    FourierProfile::new(c0, cos, sin)
}

fn modulated_merry_go_round() -> ProblemSpec {
    make_merry_go_round(FourierProfile::new(TAU, vec![], vec![1.0]))
}

fn constant_merry_go_round() -> ProblemSpec {
    make_merry_go_round(FourierProfile::constant(TAU))
}

fn mixed_spec() -> ProblemSpec {
    parse_config(
        r#"{"vector_potential":{"rotational":{"c0":1.3,"sin_coeffs":[0.4]},
                                "radial_drift":{"linear":-0.7,"rate":{"cos_coeffs":[0.5]}},
                                "uniform_drift":{"direction":[0.6,-0.8],"linear":0.3}},
            "scalar_potential":{"quadratic_isotropic":{"c0":2.0,"cos_coeffs":[0.3]},
                                "polynomial":[{"powers":[3,1],"coeff":{"c0":0.2,"sin_coeffs":[0.1]}}]}}"#,
    )
    .expect("built-in spec parses")
}

fn sup_q_difference(a: &crate::integrate::Trajectory, b: &crate::integrate::Trajectory) -> f64 {
    a.positions().zip(b.positions()).map(|(x, y)| (x - y).amax()).fold(0.0, f64::max)
}

/// Sup over samples of the two defining-identity residuals and of `|Y_q|`.
fn vector_field_residuals(spec: &ProblemSpec, rng: &mut ChaCha8Rng, count: usize) -> (f64, f64, f64) {
    let dom = spec.domain();
    let (mut rx, mut ry, mut vert) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..count {
        let t = rng.gen_range(-1.0..2.0);
        let q = Vector2::new(rng.gen_range(dom.min[0]..dom.max[0]), rng.gen_range(dom.min[1]..dom.max[1]));
        let p = Vector2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let z = PhaseState::new(t, q, p);
        let rot = rot_a(spec, t, &q);
        let x = hamiltonian_vf_x(spec, &z);
        let y = euler_vf_y(spec, &z);
        rx = rx.max((hamiltonian_differential(spec, &z) - flat(rot, &x)).amax());
        ry = ry.max((lambda_dot(spec, &z) - flat(rot, &y)).amax());
        vert = vert.max(y[0].abs()).max(y[1].abs());
    }
    (rx, ry, vert)
}

fn hamiltonian_elimination_defects(spec: &ProblemSpec, rng: &mut ChaCha8Rng, count: usize) -> Result<(f64, f64)> {
    let form = eliminate_hamiltonian(spec)?;
    let twisted = TwistedPrimitive::new(spec.clone());
    let (mut yh, mut d) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let t = rng.gen_range(-1.0..2.0);
        let z = Vector4::from_fn(|_, _| rng.gen_range(-1.5..1.5));
        yh = yh.max(verify_yh_identity(spec, t, &z)?);
        d = d.max((form.exterior_derivative(t, &z) - twisted.exterior_derivative(t, &z)).amax());
    }
    Ok((yh, d))
}

/// Invariant checks for one problem specification.
pub fn spec_checks(label: &str, spec: &ProblemSpec) -> Vec<CheckRow> {
    let name = |s: &str| format!("[{label}] {s}");
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let grid = spec.domain().grid(20);

    let twist = twist_defect(spec, &[0.0, 0.25, 0.5, 0.75], &grid);
    rows.push(CheckRow::below(name("twist defect, 20x20 grid"), twist.max(), 1e-10));

    let (rx, ry, vert) = vector_field_residuals(spec, &mut rng, 100);
    rows.push(CheckRow::below(name("dH = w(., X) residual"), rx, 1e-10));
    rows.push(CheckRow::below(name("dot(lambda) = w(., Y) residual"), ry, 1e-10));
    rows.push(CheckRow::new(name("Y verticality"), vert, Comparison::AtMost, 0.0));

    if spec.scalar.has_time_integral() || spec.scalar.is_zero() {
        rows.extend(guarded(&name("Hamiltonian elimination"), || {
            let (yh, d) = hamiltonian_elimination_defects(spec, &mut rng, 100)?;
            Ok(vec![
                CheckRow::below(name("Y^H = Y + X defect"), yh, 1e-10),
                CheckRow::below(name("d lambda^H = d lambda defect"), d, 1e-10),
            ])
        }));
    }

    rows.extend(guarded(&name("picture equivalence"), || {
        let mut worst_force = 0.0f64;
        let mut worst_twisted = 0.0f64;
        for _ in 0..3 {
            let z = unit_ball_point::<4>(&mut rng);
            let q = Vector2::new(z[0], z[1]);
            let a0 = spec.potential.value(0.0, &q);
            let can = integrate(spec, Picture::Canonical, &z, 0.0, 1.0, DEFAULT_STEPS)?;
            let force =
                integrate(spec, Picture::Force, &Vector4::new(z[0], z[1], z[2] - a0.x, z[3] - a0.y), 0.0, 1.0, DEFAULT_STEPS)?;
            let tw = integrate(spec, Picture::Twisted, &Vector4::new(z[0], z[1], z[2] - a0.x, z[3] - a0.y), 0.0, 1.0, DEFAULT_STEPS)?;
            worst_force = worst_force.max(sup_q_difference(&can, &force));
            worst_twisted = worst_twisted.max(sup_q_difference(&can, &tw));
        }
        Ok(vec![
            CheckRow::below(name("canonical vs force, sup |dq|"), worst_force, 1e-7),
            CheckRow::below(name("canonical vs twisted, sup |dq|"), worst_twisted, 1e-7),
        ])
    }));

    rows.extend(guarded(&name("euler-flow pullback"), || {
        let z0 = Vector4::new(1.0, 0.0, 0.0, 0.0);
        let mut worst = 0.0f64;
        for t in [0.25, 0.5, 1.0] {
            worst = worst.max(euler_flow_pullback_defect(spec, t, &z0, DEFAULT_STEPS, 4)?);
        }
        Ok(vec![CheckRow::below(name("euler-flow pullback of w_t to w_0"), worst, 1e-6)])
    }));

    rows.extend(guarded(&name("window shift"), || {
        let mut spread = 0.0f64;
        for _ in 0..3 {
            let lp = fourier_loop(&mut rng, 256, 3, 0.5)?;
            let vals: Vec<f64> = (0..=5).map(|k| window_shift_value(spec, &lp, k)).collect();
            let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
            let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
            spread = spread.max(hi - lo);
        }
        Ok(vec![CheckRow::below(name("window-shift spread over k = 0..5"), spread, 1e-9)])
    }));
    rows
}

/// Acceptance criterion `k` (1 to [`CRITERIA`]).
pub fn criterion(k: usize) -> Vec<CheckRow> {
    let label = format!("criterion {k}");
    match k {
        1 => guarded(&label, criterion_1),
        2 => guarded(&label, criterion_2),
        3 => guarded(&label, criterion_3),
        4 => guarded(&label, criterion_4),
        5 => guarded(&label, criterion_5),
        6 => guarded(&label, criterion_6),
        7 => guarded(&label, criterion_7),
        8 => guarded(&label, criterion_8),
        9 => guarded(&label, criterion_9),
        10 => guarded(&label, criterion_10),
        _ => panic!("no acceptance criterion {k}"),
    }
}

fn criterion_1() -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let spec = make_merry_go_round(random_profile(&mut rng));
        for _ in 0..10 {
            let z = unit_ball_point::<4>(&mut rng);
            let a0 = spec.potential.value(0.0, &Vector2::new(z[0], z[1]));
            let can = integrate(&spec, Picture::Canonical, &z, 0.0, 1.0, DEFAULT_STEPS)?;
            let force =
                integrate(&spec, Picture::Force, &Vector4::new(z[0], z[1], z[2] - a0.x, z[3] - a0.y), 0.0, 1.0, DEFAULT_STEPS)?;
            worst = worst.max(sup_q_difference(&can, &force));
        }
    }
    Ok(vec![CheckRow::below("criterion 1: canonical vs force, 10 specs x 10 states", worst, 1e-7)])
}

fn criterion_2() -> Result<Vec<CheckRow>> {
    let spec = constant_merry_go_round();
    let z0 = Vector4::new(1.0, 0.0, 0.0, 0.0);
    let tr = integrate(&spec, Picture::Canonical, &z0, 0.0, 1.0, DEFAULT_STEPS)?;
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 1.0] {
        let k = (t * DEFAULT_STEPS as f64).round() as usize;
        let exact = Vector4::new((TAU * t).cos(), -(TAU * t).sin(), 0.0, 0.0);
        worst = worst.max((tr.states[k] - exact).amax());
    }
    let err = |n| -> Result<f64> { Ok((time_one_map(&spec, Picture::Canonical, &z0, n)? - z0).amax()) };
    let ratio = err(128)? / err(256)?;
    Ok(vec![
        CheckRow::below("criterion 2: closed-form orbit at t = 0.25, 0.5, 1", worst, 1e-8),
        CheckRow::at_least("criterion 2: RK4 error ratio, 128 -> 256 steps", ratio, 12.0),
    ])
}

fn criterion_3() -> Result<Vec<CheckRow>> {
    let spec = modulated_merry_go_round();
    let elim = eliminate_scalar(&spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let z = unit_ball_point::<4>(&mut rng);
        let a = integrate(&spec, Picture::Force, &z, 0.0, 1.0, DEFAULT_STEPS)?;
        let b = integrate(&elim, Picture::Force, &z, 0.0, 1.0, DEFAULT_STEPS)?;
        worst = worst.max(sup_q_difference(&a, &b));
    }
    let twist = twist_defect(&elim, &[0.0, 0.2, 0.5, 0.8], &BoundingBox::unit().grid(20));
    Ok(vec![
        CheckRow::below("criterion 3: (A, phi) vs (A^phi, 0) force trajectories", worst, 1e-7),
        CheckRow::below("criterion 3: twist defect of A^phi, 20x20 grid", twist.max(), 1e-10),
    ])
}

fn criterion_4() -> Result<Vec<CheckRow>> {
    let spec = eliminate_scalar(&constant_merry_go_round())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut spread = 0.0f64;
    for _ in 0..5 {
        let lp = fourier_loop(&mut rng, 512, 3, 0.5)?;
        let vals: Vec<f64> = (0..=5).map(|k| window_shift_value(&spec, &lp, k)).collect();
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        spread = spread.max(hi - lo);
    }
    Ok(vec![CheckRow::below("criterion 4: window-shift spread, 5 loops, k = 0..5", spread, 1e-9)])
}

fn criterion_5() -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut rx, mut ry, mut vert) = (0.0f64, 0.0f64, 0.0f64);
    for spec in [modulated_merry_go_round(), mixed_spec()] {
        let (a, b, c) = vector_field_residuals(&spec, &mut rng, 100);
        rx = rx.max(a);
        ry = ry.max(b);
        vert = vert.max(c);
    }
    Ok(vec![
        CheckRow::below("criterion 5: dH = w(., X) residual, 100 points", rx, 1e-10),
        CheckRow::below("criterion 5: dot(lambda) = w(., Y) residual, 100 points", ry, 1e-10),
        CheckRow::new("criterion 5: Y verticality", vert, Comparison::AtMost, 0.0),
    ])
}

fn criterion_6() -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut yh, mut d) = (0.0f64, 0.0f64);
    for spec in [modulated_merry_go_round(), mixed_spec()] {
        let (a, b) = hamiltonian_elimination_defects(&spec, &mut rng, 100)?;
        yh = yh.max(a);
        d = d.max(b);
    }
    Ok(vec![
        CheckRow::below("criterion 6: Y^H = Y + X defect, 100 points", yh, 1e-10),
        CheckRow::below("criterion 6: d lambda^H = d lambda, 100 points", d, 1e-10),
    ])
}

fn criterion_7() -> Result<Vec<CheckRow>> {
    let z0 = Vector4::new(1.0, 0.0, 0.0, 0.0);
    let specs = [
        ("omega = 2pi + sin 2pi t", modulated_merry_go_round()),
        ("eliminated preset", eliminate_scalar(&constant_merry_go_round())?),
    ];
    let mut rows = Vec::new();
    for (label, spec) in &specs {
        for t in [0.25, 0.5, 1.0] {
            let d = euler_flow_symplecticity_defect(spec, t, &z0, DEFAULT_STEPS, 4)?;
            rows.push(CheckRow::below(format!("criterion 7: |D^T W_0 D - W_t|, {label}, t = {t}"), d, 1e-6));
        }
    }
    Ok(rows)
}

fn circle(n: usize) -> Result<DiscreteLoop> {
    DiscreteLoop::clockwise_circle(n)
}

fn twisted_circle(n: usize) -> Result<DiscreteLoop> {
    DiscreteLoop::sample_phase(n, |t| {
        let q = Vector2::new((TAU * t).cos(), -(TAU * t).sin());
        (q, -TAU * (j0() * q))
    })
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn fd_mismatch(spec: &ProblemSpec, functional: Functional, lp: &DiscreteLoop) -> Result<f64> {
    let analytic = action_gradient_flat(spec, functional, lp)?;
    let base = lp.to_flat();
    let h = 1e-6;
    let value = |x: &[f64]| -> Result<f64> {
        let l = lp.with_flat(x);
        match functional {
            Functional::Classical => classical_action(spec, &l),
            Functional::Symplectic => symplectic_action(spec, &l),
        }
    };
    let mut worst = 0.0f64;
    for k in 0..base.len() {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[k] += h;
        minus[k] -= h;
        let fd = (value(&plus)? - value(&minus)?) / (2.0 * h);
        worst = worst.max((fd - analytic[k]).abs() / (1.0 + fd.abs()));
    }
    Ok(worst)
}

fn criterion_8() -> Result<Vec<CheckRow>> {
    let spec = constant_merry_go_round();
    let gc = |n| -> Result<f64> { Ok(sup(&action_gradient_flat(&spec, Functional::Classical, &circle(n)?)?)) };
    let gs = |n| -> Result<f64> { Ok(sup(&action_gradient_flat(&spec, Functional::Symplectic, &twisted_circle(n)?)?)) };
    let (c512, c1024) = (gc(512)?, gc(1024)?);
    let (s512, s1024) = (gs(512)?, gs(1024)?);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut fd = 0.0f64;
    for spec in [spec.clone(), mixed_spec()] {
        for _ in 0..3 {
            let lp = fourier_loop(&mut rng, 16, 2, 1.0)?;
            fd = fd.max(fd_mismatch(&spec, Functional::Classical, &lp)?);
            let p = fourier_loop(&mut rng, 16, 2, 1.0)?;
            let ph = DiscreteLoop::phase(lp.q().to_vec(), p.q().to_vec())?;
            fd = fd.max(fd_mismatch(&spec, Functional::Symplectic, &ph)?);
        }
    }
    Ok(vec![
        CheckRow::below("criterion 8: classical gradient on closed-form orbit, n = 512", c512, 1e-3),
        CheckRow::at_least("criterion 8: classical gradient shrink, n = 512 -> 1024", c512 / c1024, 3.5),
        CheckRow::below("criterion 8: symplectic gradient on closed-form orbit, n = 512", s512, 1e-3),
        CheckRow::at_least("criterion 8: symplectic gradient shrink, n = 512 -> 1024", s512 / s1024, 3.5),
        CheckRow::below("criterion 8: analytic vs finite-difference gradients", fd, 1e-5),
    ])
}

fn criterion_9() -> Result<Vec<CheckRow>> {
    let spec = constant_merry_go_round();
    let guess = seeded_guesses(&Vector4::new(1.0, 0.0, 0.0, 0.0), 2, 0.1, 9)[1];
    let shot = find_orbit_shooting(&spec, Picture::Canonical, &guess, &SearchOptions::new(1e-10, 50))?;
    let shot_defect = if shot.converged { shot.defects.fixed_point } else { f64::INFINITY };

    let noisy = seeded_loops(&circle(256)?, 2, 0.01, 9).pop().expect("two loops");
    let var = find_orbit_variational(&spec, Functional::Classical, &noisy, &SearchOptions::new(1e-8, 50))?;
    let var_defect = if var.converged { var.defects.gradient } else { f64::INFINITY };

    let back = find_orbit_variational(&spec, Functional::Classical, &shot.orbit, &SearchOptions::new(1e-8, 50))?;
    let drift = if back.converged {
        back.orbit.q().iter().zip(shot.orbit.q()).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(vec![
        CheckRow::below("criterion 9: shooting fixed-point defect, 10% guess", shot_defect, 1e-9),
        CheckRow::below("criterion 9: variational gradient defect, 1% circle", var_defect, 1e-8),
        CheckRow::below("criterion 9: variational orbit as canonical fixed point", var.defects.fixed_point, 1e-6),
        CheckRow::below("criterion 9: shooting orbit drift under variational refinement", drift, 1e-6),
    ])
}

/// Symplectic action of the stored regression loop on the eliminated
/// preset, formatted to 17 significant digits.
pub fn regression_action() -> Result<String> {
    let spec = eliminate_scalar(&constant_merry_go_round())?;
    let lp = read_loop(REGRESSION_LOOP.as_bytes(), "regression-loop.csv")?;
    Ok(fmt_f64(symplectic_action(&spec, &lp)?))
}

fn criterion_10() -> Result<Vec<CheckRow>> {
    let runs: Vec<String> = (0..4).into_par_iter().map(|_| regression_action()).collect::<Result<_>>()?;
    let stored = REGRESSION_ACTION.trim();
    let mismatches = runs.iter().filter(|r| r.as_str() != stored).count();
    Ok(vec![CheckRow::new(
        "criterion 10: stored-loop symplectic action, byte mismatches over 4 runs",
        mismatches as f64,
        Comparison::AtMost,
        0.0,
    )])
}

/// All acceptance criteria, run concurrently, rows in criterion order.
pub fn acceptance_report() -> Report {
    let rows: Vec<Vec<CheckRow>> = (1..=CRITERIA).into_par_iter().map(criterion).collect();
    Report { rows: rows.into_iter().flatten().collect() }
}

/// Spec checks for the named shipped presets followed by every acceptance
/// criterion.
pub fn preset_report(names: &[&str]) -> Result<Report> {
    let specs: Vec<(&str, ProblemSpec)> = names
        .iter()
        .map(|name| {
            let text = SHIPPED_PRESETS
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| *t)
                .ok_or_else(|| crate::Error::UnknownPreset {
                    name: name.to_string(),
                    known: SHIPPED_PRESETS.iter().map(|(n, _)| n.to_string()).collect(),
                })?;
            Ok((*name, parse_config(text)?))
        })
        .collect::<Result<_>>()?;
    let per_spec: Vec<Vec<CheckRow>> = specs.par_iter().map(|(n, s)| spec_checks(n, s)).collect();
    let mut report = Report { rows: per_spec.into_iter().flatten().collect() };
    report.rows.extend(acceptance_report().rows);
    Ok(report)
}

/// Spec checks for one configuration.
pub fn config_report(label: &str, spec: &ProblemSpec) -> Report {
    Report { rows: spec_checks(label, spec) }
}
