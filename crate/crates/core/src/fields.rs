//! Pointwise vector fields and 1-form data.
//!
//! Phase-space vectors and covectors are ordered `(q₁, q₂, p₁, p₂)`. The
//! symplectic form is `ω_t = dp₁∧dq₁ + dp₂∧dq₂ + rot A_t(q) dq₁∧dq₂`, so that
//! `ω_t(u, v) = uᵀ Ω v` with `Ω = [[rot·J̄₀, −I], [I, 0]]`.

use crate::domain::{
    j0, j0_bar, join, split, PhaseOneForm, PhaseState, ProblemSpec, VectorField,
    VectorPotential,
};
use nalgebra::{Matrix2, Matrix4, SVector, Vector2, Vector4};

pub const RECOVER_F_PANELS: usize = 256;

pub fn rot_a(spec: &ProblemSpec, t: f64, q: &Vector2<f64>) -> f64 {
    spec.potential.rot(t, q)
}

pub fn a_dot(spec: &ProblemSpec, t: f64, q: &Vector2<f64>) -> Vector2<f64> {
    spec.potential.time_derivative(t, q)
}

pub fn grad_phi(spec: &ProblemSpec, t: f64, q: &Vector2<f64>) -> Vector2<f64> {
    spec.scalar.gradient(t, q)
}

/// Right-hand side of the `(A, φ)`-equation,
/// `q̈ = −(rot A_t) J₀ q̇ − Ȧ_t − ∇φ_t`.
pub fn force_rhs(spec: &ProblemSpec, t: f64, q: &Vector2<f64>, qdot: &Vector2<f64>) -> Vector2<f64> {
    let a = spec.potential.jet(t, q);
    -a.rot() * (j0() * qdot) - a.time_derivative - spec.scalar.gradient(t, q)
}

/// `H(t, q, p) = ½|p − A_t(q)|² + φ_t(q)`, the Hamiltonian for the canonical form.
pub fn canonical_hamiltonian(spec: &ProblemSpec, t: f64, q: &Vector2<f64>, p: &Vector2<f64>) -> f64 {
    0.5 * (p - spec.potential.value(t, q)).norm_squared() + spec.scalar.value(t, q)
}

/// Hamilton's equations for [`canonical_hamiltonian`] against `ω_can`.
pub fn canonical_rhs(spec: &ProblemSpec, z: &PhaseState) -> Vector4<f64> {
    let a = spec.potential.jet(z.t, &z.q);
    let v = z.p - a.value;
    let pdot = a.jacobian.transpose() * v - spec.scalar.gradient(z.t, &z.q);
    join(&v, &pdot)
}

/// `H(t, q, p) = ½|p|² + φ_t(q)`, the Hamiltonian for the twisted form.
pub fn twisted_hamiltonian(spec: &ProblemSpec, z: &PhaseState) -> f64 {
    0.5 * z.p.norm_squared() + spec.scalar.value(z.t, &z.q)
}

/// The covector `dH_t` of [`twisted_hamiltonian`].
pub fn hamiltonian_differential(spec: &ProblemSpec, z: &PhaseState) -> Vector4<f64> {
    join(&spec.scalar.gradient(z.t, &z.q), &z.p)
}

/// The covector `λ̇_t = Ȧ¹ dq₁ + Ȧ² dq₂`.
pub fn lambda_dot(spec: &ProblemSpec, z: &PhaseState) -> Vector4<f64> {
    join(&spec.potential.time_derivative(z.t, &z.q), &Vector2::zeros())
}

/// Matrix of `ω_t` at a point where the magnetic field is `rot`.
pub fn symplectic_matrix(rot: f64) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(j0_bar() * rot));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&-Matrix2::identity());
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&Matrix2::identity());
    m
}

pub fn omega_matrix(spec: &ProblemSpec, t: f64, q: &Vector2<f64>) -> Matrix4<f64> {
    symplectic_matrix(rot_a(spec, t, q))
}

/// Hamiltonian vector field `X_t` with `dH_t = ω_t(·, X_t)`:
/// `q̇ = p`, `ṗ = −(rot A_t) J₀ p − ∇φ_t`.
pub fn hamiltonian_vf_x(spec: &ProblemSpec, z: &PhaseState) -> Vector4<f64> {
    let rot = rot_a(spec, z.t, &z.q);
    let pdot = -rot * (j0() * z.p) - grad_phi(spec, z.t, &z.q);
    join(&z.p, &pdot)
}

/// Euler vector field `Y_t = −Ȧ¹ ∂/∂p₁ − Ȧ² ∂/∂p₂`, vertical by construction.
pub fn euler_vf_y(spec: &ProblemSpec, z: &PhaseState) -> Vector4<f64> {
    join(&Vector2::zeros(), &-a_dot(spec, z.t, &z.q))
}

/// Solve `covector = ω(·, Y)` for `Y` with the block inverse of `Ω`.
///
/// `Ω⁻¹ = [[0, I], [−I, rot·J̄₀]]`.
pub fn general_euler_vf(rot: f64, covector: &Vector4<f64>) -> Vector4<f64> {
    let (cq, cp) = split(covector);
    let yq = cp;
    let yp = -cq + rot * (j0_bar() * cp);
    join(&yq, &yp)
}

/// `ω(·, v)` as a covector.
pub fn flat(rot: f64, v: &Vector4<f64>) -> Vector4<f64> {
    symplectic_matrix(rot) * v
}

/// Sup-norm defects of the three twisted-periodicity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwistDefectReport {
    pub max_adot_defect: f64,
    pub max_rot_defect: f64,
    pub max_curl_of_difference: f64,
}

impl TwistDefectReport {
    pub fn max(&self) -> f64 {
        self.max_adot_defect.max(self.max_rot_defect).max(self.max_curl_of_difference)
    }
}

/// Check `Ȧ_{t+1} = Ȧ_t`, `rot A_{t+1} = rot A_t` and that `A_{t+1} − A_t`
/// is curl-free on the given samples.
///
/// The curl of the difference field is taken from the difference of the
/// closed-form spatial Jacobians.
pub fn twist_defect(spec: &ProblemSpec, t_samples: &[f64], q_samples: &[Vector2<f64>]) -> TwistDefectReport {
    let mut report = TwistDefectReport::default();
    for &t in t_samples {
        for q in q_samples {
            let now = spec.potential.jet(t, q);
            let next = spec.potential.jet(t + 1.0, q);
            report.max_adot_defect =
                report.max_adot_defect.max((next.time_derivative - now.time_derivative).amax());
            report.max_rot_defect = report.max_rot_defect.max((next.rot() - now.rot()).abs());
            let dj = next.jacobian - now.jacobian;
            report.max_curl_of_difference =
                report.max_curl_of_difference.max((dj[(1, 0)] - dj[(0, 1)]).abs());
        }
    }
    report
}

/// Composite Simpson integral of `covector(γ(s))·γ'(s)` along a polyline.
fn polyline_integral<const D: usize>(
    waypoints: &[SVector<f64, D>],
    panels_per_leg: usize,
    covector: impl Fn(&SVector<f64, D>) -> SVector<f64, D>,
) -> f64 {
    let panels = (panels_per_leg.max(2) + 1) & !1;
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for leg in waypoints.windows(2) {
        let (a, b) = (leg[0], leg[1]);
        let tangent = b - a;
        let mut acc = 0.0;
        for k in 0..=panels {
            let w = if k == 0 || k == panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let x = a + tangent * (k as f64 * h);
            acc += w * covector(&x).dot(&tangent);
        }
        total += acc * h / 3.0;
    }
    total
}

/// Reconstruct the twist witness `f_t(x) − f_t(x₀)` of a phase-space 1-form,
/// `f_t(x) = ∫ (λ_{t+1} − λ_t)` along the segment from `x₀` to `x`.
pub fn recover_f(
    form: &dyn PhaseOneForm,
    t: f64,
    x: &Vector4<f64>,
    x0: &Vector4<f64>,
    n_steps: usize,
) -> f64 {
    recover_f_along(form, t, &[*x0, *x], n_steps)
}

/// As [`recover_f`], along an arbitrary polyline from its first to last point.
pub fn recover_f_along(form: &dyn PhaseOneForm, t: f64, waypoints: &[Vector4<f64>], n_steps: usize) -> f64 {
    polyline_integral(waypoints, n_steps, |x| form.coefficients(t + 1.0, x) - form.coefficients(t, x))
}

/// Twist witness of the configuration-space 1-form `θ_t = A_t·dq`.
pub fn recover_f_theta(
    potential: &VectorPotential,
    t: f64,
    x: &Vector2<f64>,
    x0: &Vector2<f64>,
    n_steps: usize,
) -> f64 {
    recover_f_theta_along(potential, t, &[*x0, *x], n_steps)
}

pub fn recover_f_theta_along(
    potential: &VectorPotential,
    t: f64,
    waypoints: &[Vector2<f64>],
    n_steps: usize,
) -> f64 {
    polyline_integral(waypoints, n_steps, |q| potential.value(t + 1.0, q) - potential.value(t, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DriftCoefficient, FourierProfile, TwistedPrimitive};
    use crate::transforms::{eliminate_scalar, make_merry_go_round};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const TAU: f64 = 2.0 * PI;

    fn constant_mgr() -> ProblemSpec {
        make_merry_go_round(FourierProfile::constant(TAU))
    }

    fn pulsed_mgr() -> ProblemSpec {
        make_merry_go_round(FourierProfile::new(TAU, vec![], vec![1.0]))
    }

    fn random_state(rng: &mut ChaCha8Rng) -> PhaseState {
        PhaseState::new(
            rng.gen_range(-2.0..2.0),
            Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Vector2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
        )
    }

    #[test]
    fn rot_of_merry_go_round() {
        assert!((rot_a(&constant_mgr(), 0.3, &Vector2::new(0.2, 5.0)) - 4.0 * PI).abs() < 1e-12);
        assert_eq!(rot_a(&ProblemSpec::free_particle(), 0.3, &Vector2::new(1.0, 1.0)), 0.0);
    }

    #[test]
    fn a_dot_of_pulsed_rotation() {
        let v = a_dot(&pulsed_mgr(), 0.0, &Vector2::new(1.0, 0.0));
        assert!((v - Vector2::new(0.0, TAU)).norm() < 1e-12);
        assert_eq!(a_dot(&constant_mgr(), 0.7, &Vector2::new(0.3, 0.1)), Vector2::zeros());
    }

    #[test]
    fn grad_phi_of_merry_go_round() {
        let g = grad_phi(&constant_mgr(), 0.0, &Vector2::new(1.0, 0.0));
        assert!((g - Vector2::new(-4.0 * PI * PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn force_rhs_on_circular_orbit() {
        let f = force_rhs(&constant_mgr(), 0.0, &Vector2::new(1.0, 0.0), &Vector2::new(0.0, -TAU));
        assert!((f - Vector2::new(-4.0 * PI * PI, 0.0)).norm() < 1e-11);
        let free = force_rhs(&ProblemSpec::free_particle(), 0.4, &Vector2::new(1.0, 2.0), &Vector2::new(3.0, 4.0));
        assert_eq!(free, Vector2::zeros());
    }

    #[test]
    fn force_decomposition_into_fictitious_forces() {
        let omega = FourierProfile::new(1.2, vec![0.4, -0.3], vec![0.9]);
        let spec = make_merry_go_round(omega.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let z = random_state(&mut rng);
            let w = omega.eval(z.t);
            let wd = omega.derivative(z.t);
            let coriolis = 2.0 * w * (j0_bar() * z.p);
            let euler = wd * (j0_bar() * z.q);
            let centrifugal = w * w * z.q;
            let f = force_rhs(&spec, z.t, &z.q, &z.p);
            assert!((f - (coriolis + euler + centrifugal)).amax() < 1e-12 * (1.0 + f.amax()));
        }
    }

    #[test]
    fn canonical_hamiltonian_values() {
        let h = canonical_hamiltonian(&constant_mgr(), 0.0, &Vector2::new(1.0, 0.0), &Vector2::zeros());
        assert!(h.abs() < 1e-12);
        let free = canonical_hamiltonian(&ProblemSpec::free_particle(), 0.0, &Vector2::zeros(), &Vector2::new(3.0, 4.0));
        assert_eq!(free, 12.5);
    }

    #[test]
    fn canonical_hamiltonian_is_kinetic_minus_angular_momentum() {
        let omega = FourierProfile::new(0.5, vec![1.0], vec![-2.0]);
        let spec = make_merry_go_round(omega.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let z = random_state(&mut rng);
            let expect = 0.5 * z.p.norm_squared() - omega.eval(z.t) * (z.q.x * z.p.y - z.q.y * z.p.x);
            let h = canonical_hamiltonian(&spec, z.t, &z.q, &z.p);
            assert!((h - expect).abs() < 1e-11 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn canonical_rhs_values() {
        let r = canonical_rhs(&constant_mgr(), &PhaseState::new(0.0, Vector2::new(1.0, 0.0), Vector2::zeros()));
        assert!((r - Vector4::new(0.0, -TAU, 0.0, 0.0)).amax() < 1e-11);
        let z = PhaseState::new(0.0, Vector2::new(0.3, 0.4), Vector2::new(1.0, 2.0));
        assert_eq!(canonical_rhs(&ProblemSpec::free_particle(), &z), Vector4::new(1.0, 2.0, 0.0, 0.0));
    }

    #[test]
    fn canonical_rhs_is_symplectic_gradient() {
        let spec = pulsed_mgr();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let z = random_state(&mut rng);
            let x = z.to_vector();
            let h = 1e-5 * (1.0 + x.norm());
            let mut grad = Vector4::zeros();
            for k in 0..4 {
                let mut e = Vector4::zeros();
                e[k] = h;
                let (up, dn) = (PhaseState::from_vector(z.t, &(x + e)), PhaseState::from_vector(z.t, &(x - e)));
                grad[k] = (canonical_hamiltonian(&spec, z.t, &up.q, &up.p)
                    - canonical_hamiltonian(&spec, z.t, &dn.q, &dn.p))
                    / (2.0 * h);
            }
            let expect = Vector4::new(grad[2], grad[3], -grad[0], -grad[1]);
            let r = canonical_rhs(&spec, &z);
            assert!((r - expect).amax() < 1e-6 * (1.0 + r.amax()));
        }
    }

    #[test]
    fn x_field_values() {
        let x = hamiltonian_vf_x(&constant_mgr(), &PhaseState::new(0.0, Vector2::new(1.0, 0.0), Vector2::zeros()));
        assert!((x - Vector4::new(0.0, 0.0, 4.0 * PI * PI, 0.0)).amax() < 1e-11);
        let free = hamiltonian_vf_x(&ProblemSpec::free_particle(), &PhaseState::new(0.0, Vector2::zeros(), Vector2::new(1.0, 2.0)));
        assert_eq!(free, Vector4::new(1.0, 2.0, 0.0, 0.0));
    }

    #[test]
    fn x_field_second_momentum_row_uses_second_partial() {
        // asymmetric potential φ = q₂, so ∂φ/∂q₁ = 0 and ∂φ/∂q₂ = 1
        let spec = ProblemSpec::new(
            VectorPotential::zero(),
            crate::domain::ScalarPotential::Polynomial(vec![crate::domain::Monomial {
                powers: [0, 1],
                coeff: FourierProfile::constant(1.0),
            }]),
        );
        let x = hamiltonian_vf_x(&spec, &PhaseState::new(0.0, Vector2::zeros(), Vector2::zeros()));
        assert_eq!(x, Vector4::new(0.0, 0.0, 0.0, -1.0));
    }

    #[test]
    fn y_field_values() {
        let y = euler_vf_y(&pulsed_mgr(), &PhaseState::new(0.0, Vector2::new(1.0, 0.0), Vector2::new(0.3, 0.3)));
        assert!((y - Vector4::new(0.0, 0.0, 0.0, -TAU)).amax() < 1e-12);
        let c = euler_vf_y(&constant_mgr(), &PhaseState::new(0.2, Vector2::new(1.0, 0.5), Vector2::zeros()));
        assert_eq!(c, Vector4::zeros());
    }

    #[test]
    fn defining_identities_hold() {
        let spec = eliminate_scalar(&pulsed_mgr()).unwrap();
        let specs = [pulsed_mgr(), spec];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in &specs {
            for _ in 0..100 {
                let z = random_state(&mut rng);
                let rot = rot_a(spec, z.t, &z.q);
                let x = hamiltonian_vf_x(spec, &z);
                let y = euler_vf_y(spec, &z);
                assert!((flat(rot, &x) - hamiltonian_differential(spec, &z)).amax() < 1e-10);
                assert!((flat(rot, &y) - lambda_dot(spec, &z)).amax() < 1e-10);
                assert_eq!(y[0], 0.0);
                assert_eq!(y[1], 0.0);
            }
        }
    }

    #[test]
    fn general_euler_vf_free_particle() {
        let y = general_euler_vf(0.0, &Vector4::new(0.0, 0.0, 1.0, 0.0));
        assert_eq!(y, Vector4::new(1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn general_euler_vf_matches_explicit_y() {
        let spec = pulsed_mgr();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let z = random_state(&mut rng);
            let rot = rot_a(&spec, z.t, &z.q);
            let y = general_euler_vf(rot, &lambda_dot(&spec, &z));
            assert!((y - euler_vf_y(&spec, &z)).amax() < 1e-12);
        }
    }

    #[test]
    fn general_euler_vf_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let rot = rng.gen_range(-20.0..20.0);
            let c = Vector4::from_fn(|_, _| rng.gen_range(-5.0..5.0));
            let y = general_euler_vf(rot, &c);
            assert!((flat(rot, &y) - c).amax() < 1e-12);
        }
    }

    #[test]
    fn symplectic_matrix_is_exterior_derivative_of_primitive() {
        let spec = pulsed_mgr();
        let lam = TwistedPrimitive::new(spec.clone());
        let x = Vector4::new(0.3, -0.2, 1.0, 0.5);
        let m = lam.exterior_derivative(0.4, &x);
        assert!((m - omega_matrix(&spec, 0.4, &Vector2::new(0.3, -0.2))).amax() < 1e-12);
    }

    #[test]
    fn twist_defect_merry_go_round() {
        let spec = make_merry_go_round(FourierProfile::new(1.0, vec![0.3, 2.0], vec![-1.0, 0.5, 0.2]));
        let ts: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        let r = twist_defect(&spec, &ts, &spec.domain().grid(20));
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn twist_defect_eliminated_scalar() {
        let spec = eliminate_scalar(&pulsed_mgr()).unwrap();
        let ts: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        let r = twist_defect(&spec, &ts, &spec.domain().grid(20));
        assert!(r.max() < 1e-10, "{r:?}");
    }

    #[test]
    fn twist_defect_hand_counterexamples() {
        let uniform = |quadratic: f64, linear: f64| {
            ProblemSpec::new(
                VectorPotential::UniformDrift {
                    coefficient: DriftCoefficient { quadratic, linear, rate: FourierProfile::default() },
                    direction: [1.0, 0.0],
                },
                crate::domain::ScalarPotential::zero(),
            )
        };
        let q = [Vector2::new(0.2, 0.7)];
        // A_t = (t, 0): twisted-periodic with f_t = q₁
        let r = twist_defect(&uniform(0.0, 1.0), &[0.0, 0.5], &q);
        assert_eq!(r, TwistDefectReport::default());
        // A_t = (t², 0): Ȧ_{t+1} − Ȧ_t = (2, 0)
        let r = twist_defect(&uniform(1.0, 0.0), &[0.0], &q);
        assert!((r.max_adot_defect - 2.0).abs() < 1e-14);
        assert_eq!(r.max_rot_defect, 0.0);
    }

    #[test]
    fn recover_f_of_eliminated_merry_go_round() {
        let spec = eliminate_scalar(&constant_mgr()).unwrap();
        let f = recover_f_theta(&spec.potential, 0.3, &Vector2::new(1.0, 0.0), &Vector2::zeros(), RECOVER_F_PANELS);
        assert!((f + 2.0 * PI * PI).abs() < 1e-10, "{f}");
        let lam = TwistedPrimitive::new(spec);
        let f4 = recover_f(&lam, 0.3, &Vector4::new(1.0, 0.0, 0.5, 2.0), &Vector4::zeros(), RECOVER_F_PANELS);
        assert!((f4 + 2.0 * PI * PI).abs() < 1e-10, "{f4}");
    }

    #[test]
    fn recover_f_vanishes_for_periodic_theta() {
        let spec = constant_mgr();
        for x in [Vector2::new(1.0, 0.0), Vector2::new(-0.3, 2.0)] {
            assert!(recover_f_theta(&spec.potential, 0.1, &x, &Vector2::zeros(), 64).abs() < 1e-12);
        }
    }

    #[test]
    fn recover_f_is_path_independent() {
        let spec = eliminate_scalar(&make_merry_go_round(FourierProfile::new(1.0, vec![0.5], vec![0.7]))).unwrap();
        let x0 = Vector2::new(-0.2, 0.1);
        let x = Vector2::new(0.9, -0.6);
        let direct = recover_f_theta(&spec.potential, 0.45, &x, &x0, RECOVER_F_PANELS);
        let detour = recover_f_theta_along(&spec.potential, 0.45, &[x0, Vector2::new(0.9, 0.1), x], RECOVER_F_PANELS);
        assert!((direct - detour).abs() < 1e-9);
    }
}
