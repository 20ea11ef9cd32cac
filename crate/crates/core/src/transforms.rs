//! Gauge transforms: folding the scalar potential into the vector potential,
//! folding the Hamiltonian into the primitive, and the merry-go-round preset.

use crate::domain::{
    split, FourierProfile, IntegratedGradient, PhaseOneForm, PhaseState, ProblemSpec, ScalarField,
    ScalarPotential, VectorField, VectorPotential,
};
use crate::error::{Error, Result};
use crate::fields::{euler_vf_y, general_euler_vf, hamiltonian_vf_x};
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

/// Rotating frame with angular velocity `ω`: `A_t = ω(t) J₀ q` and
/// `φ_t = −½ ω(t)² |q|²`.
pub fn make_merry_go_round(omega: FourierProfile) -> ProblemSpec {
    let kappa = omega.square();
    ProblemSpec::new(VectorPotential::Rotational(omega), ScalarPotential::QuadraticIsotropic(kappa))
}

/// Replace `(A, φ)` by `(A^φ, 0)` with `A^φ_t = A_t + ∫₀ᵗ ∇φ_s ds`.
pub fn eliminate_scalar(spec: &ProblemSpec) -> Result<ProblemSpec> {
    if spec.scalar.is_zero() {
        return Ok(spec.clone());
    }
    let integrated = IntegratedGradient::new(spec.scalar.clone())?;
    Ok(ProblemSpec {
        potential: VectorPotential::Sum(vec![
            spec.potential.clone(),
            VectorPotential::IntegratedGradient(integrated),
        ]),
        scalar: ScalarPotential::zero(),
        domain_hint: spec.domain_hint,
    })
}

/// `λ^H_t = λ_t + ∫₀ᵗ dH_s ds` for `H_t = ½|p|² + φ_t(q)`:
/// `dq`-coefficients `p + A_t(q) + ∫₀ᵗ ∇φ_s ds`, `dp`-coefficients `t·p`.
#[derive(Debug, Clone)]
pub struct HamiltonianPrimitive {
    spec: ProblemSpec,
}

impl HamiltonianPrimitive {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }
}

pub fn eliminate_hamiltonian(spec: &ProblemSpec) -> Result<HamiltonianPrimitive> {
    if !spec.scalar.has_time_integral() {
        return Err(Error::UnsupportedFamily(format!(
            "scalar potential {:?} has no closed-form time integral",
            spec.scalar
        )));
    }
    Ok(HamiltonianPrimitive { spec: spec.clone() })
}

impl HamiltonianPrimitive {
    fn integrated(&self, t: f64, q: &Vector2<f64>) -> crate::domain::ScalarJet {
        self.spec
            .scalar
            .integrated_jet(t, q)
            .expect("checked in eliminate_hamiltonian")
    }
}

impl PhaseOneForm for HamiltonianPrimitive {
    fn alpha(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (q, p) = split(x);
        p + self.spec.potential.value(t, &q) + self.integrated(t, &q).gradient
    }

    fn beta(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (_, p) = split(x);
        t * p
    }

    fn alpha_dot(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (q, _) = split(x);
        self.spec.potential.time_derivative(t, &q) + self.spec.scalar.gradient(t, &q)
    }

    fn beta_dot(&self, _t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (_, p) = split(x);
        p
    }

    fn coefficient_jacobian(&self, t: f64, x: &Vector4<f64>) -> Matrix4<f64> {
        let (q, _) = split(x);
        let a = self.spec.potential.jet(t, &q);
        let g = self.integrated(t, &q);
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(a.jacobian + g.hessian));
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&Matrix2::identity());
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(Matrix2::identity() * t));
        m
    }
}

/// `‖Y^H_t − (Y_t + X_t)‖∞` at one point, with `Y^H` obtained by inverting
/// `dλ^H_t` against `λ̇^H_t`.
pub fn verify_yh_identity(spec: &ProblemSpec, t: f64, z: &Vector4<f64>) -> Result<f64> {
    let form = eliminate_hamiltonian(spec)?;
    let rot_h = form.exterior_derivative(t, z)[(0, 1)];
    let y_h = general_euler_vf(rot_h, &form.time_derivative(t, z));
    let state = PhaseState::from_vector(t, z);
    let sum = euler_vf_y(spec, &state) + hamiltonian_vf_x(spec, &state);
    Ok((y_h - sum).amax())
}
