use super::{split, ProblemSpec, VectorField};
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

/// A time-dependent 1-form `α_t·dq + β_t·dp` on phase space `ℝ⁴`.
///
/// Points are `x = (q₁, q₂, p₁, p₂)`; covectors use the same ordering.
pub trait PhaseOneForm: Send + Sync {
    /// `dq`-coefficients.
    fn alpha(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64>;
    /// `dp`-coefficients.
    fn beta(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64>;
    fn alpha_dot(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64>;
    fn beta_dot(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64>;
    /// Spatial Jacobian of the coefficient vector, `[(i, j)] = ∂c_i/∂x_j`.
    fn coefficient_jacobian(&self, t: f64, x: &Vector4<f64>) -> Matrix4<f64>;

    fn coefficients(&self, t: f64, x: &Vector4<f64>) -> Vector4<f64> {
        let (a, b) = (self.alpha(t, x), self.beta(t, x));
        Vector4::new(a.x, a.y, b.x, b.y)
    }

    /// The covector `λ̇_t` at `x`.
    fn time_derivative(&self, t: f64, x: &Vector4<f64>) -> Vector4<f64> {
        let (a, b) = (self.alpha_dot(t, x), self.beta_dot(t, x));
        Vector4::new(a.x, a.y, b.x, b.y)
    }

    /// Matrix `M` of the 2-form `dλ_t` with `dλ_t(u, v) = uᵀ M v`.
    fn exterior_derivative(&self, t: f64, x: &Vector4<f64>) -> Matrix4<f64> {
        let jac = self.coefficient_jacobian(t, x);
        jac.transpose() - jac
    }
}

/// `λ_t = λ_can + π*θ_t = (p + A_t(q))·dq`.
#[derive(Debug, Clone)]
pub struct TwistedPrimitive {
    pub spec: ProblemSpec,
}

impl TwistedPrimitive {
    pub fn new(spec: ProblemSpec) -> Self {
        Self { spec }
    }
}

impl PhaseOneForm for TwistedPrimitive {
    fn alpha(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (q, p) = split(x);
        p + self.spec.potential.value(t, &q)
    }

    fn beta(&self, _t: f64, _x: &Vector4<f64>) -> Vector2<f64> {
        Vector2::zeros()
    }

    fn alpha_dot(&self, t: f64, x: &Vector4<f64>) -> Vector2<f64> {
        let (q, _) = split(x);
        self.spec.potential.time_derivative(t, &q)
    }

    fn beta_dot(&self, _t: f64, _x: &Vector4<f64>) -> Vector2<f64> {
        Vector2::zeros()
    }

    fn coefficient_jacobian(&self, t: f64, x: &Vector4<f64>) -> Matrix4<f64> {
        let (q, _) = split(x);
        let jet = self.spec.potential.jet(t, &q);
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&jet.jacobian);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&Matrix2::identity());
        m
    }
}
