use super::profile::FourierProfile;
use nalgebra::{Matrix2, Vector2};
use std::fmt;
use std::sync::Arc;

/// Value, spatial gradient and spatial Hessian of a scalar field at one `(t, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub gradient: Vector2<f64>,
    pub hessian: Matrix2<f64>,
}

impl ScalarJet {
    pub fn zero() -> Self {
        Self { value: 0.0, gradient: Vector2::zeros(), hessian: Matrix2::zeros() }
    }
}

impl std::ops::Add for ScalarJet {
    type Output = ScalarJet;
    fn add(self, rhs: ScalarJet) -> ScalarJet {
        ScalarJet {
            value: self.value + rhs.value,
            gradient: self.gradient + rhs.gradient,
            hessian: self.hessian + rhs.hessian,
        }
    }
}

/// Extension point for scalar potentials defined in code.
///
/// `jet` must be 1-periodic in `t`. `integrated_jet` returns the closed-form
/// time integral `∫₀ᵗ` of the jet; families without one return `None` and
/// cannot be folded into a vector potential.
pub trait ScalarField: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64, q: &Vector2<f64>) -> ScalarJet;

    fn integrated_jet(&self, _t: f64, _q: &Vector2<f64>) -> Option<ScalarJet> {
        None
    }

    fn has_time_integral(&self) -> bool {
        false
    }
}

/// One term `coeff(t) · q₁^i · q₂^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub powers: [u32; 2],
    pub coeff: FourierProfile,
}

/// Periodic scalar potential `φ_t(q)`.
#[derive(Debug, Clone)]
pub enum ScalarPotential {
    /// `φ_t(q) = −½ κ(t) |q|²`
    QuadraticIsotropic(FourierProfile),
    Polynomial(Vec<Monomial>),
    Sum(Vec<ScalarPotential>),
    Custom(Arc<dyn ScalarField>),
}

#[derive(Clone, Copy)]
enum TimeKernel {
    Value,
    Integral,
}

impl TimeKernel {
    fn apply(self, g: &FourierProfile, t: f64) -> f64 {
        match self {
            TimeKernel::Value => g.eval(t),
            TimeKernel::Integral => g.antiderivative(t),
        }
    }
}

fn powi(x: f64, n: u32) -> f64 {
    x.powi(n as i32)
}

fn monomial_jet(m: &Monomial, c: f64, q: &Vector2<f64>) -> ScalarJet {
    let [i, j] = m.powers;
    let (x, y) = (q.x, q.y);
    let (fi, fj) = (i as f64, j as f64);
    let xi = powi(x, i);
    let yj = powi(y, j);
    let dxi = if i >= 1 { fi * powi(x, i - 1) } else { 0.0 };
    let dyj = if j >= 1 { fj * powi(y, j - 1) } else { 0.0 };
    let ddxi = if i >= 2 { fi * (fi - 1.0) * powi(x, i - 2) } else { 0.0 };
    let ddyj = if j >= 2 { fj * (fj - 1.0) * powi(y, j - 2) } else { 0.0 };
    let mixed = c * dxi * dyj;
    ScalarJet {
        value: c * xi * yj,
        gradient: Vector2::new(c * dxi * yj, c * xi * dyj),
        hessian: Matrix2::new(c * ddxi * yj, mixed, mixed, c * xi * ddyj),
    }
}

impl ScalarPotential {
    pub fn zero() -> Self {
        ScalarPotential::Sum(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ScalarPotential::QuadraticIsotropic(k) => k.is_zero(),
            ScalarPotential::Polynomial(ms) => ms.iter().all(|m| m.coeff.is_zero()),
            ScalarPotential::Sum(terms) => terms.iter().all(ScalarPotential::is_zero),
            ScalarPotential::Custom(_) => false,
        }
    }

    pub fn value(&self, t: f64, q: &Vector2<f64>) -> f64 {
        self.jet(t, q).value
    }

    pub fn gradient(&self, t: f64, q: &Vector2<f64>) -> Vector2<f64> {
        self.jet(t, q).gradient
    }

    fn kernel_jet(&self, kernel: TimeKernel, t: f64, q: &Vector2<f64>) -> Option<ScalarJet> {
        Some(match self {
            ScalarPotential::QuadraticIsotropic(kappa) => {
                let k = kernel.apply(kappa, t);
                ScalarJet {
                    value: -0.5 * k * q.norm_squared(),
                    gradient: -k * q,
                    hessian: Matrix2::identity() * -k,
                }
            }
            ScalarPotential::Polynomial(ms) => ms
                .iter()
                .map(|m| monomial_jet(m, kernel.apply(&m.coeff, t), q))
                .fold(ScalarJet::zero(), |a, b| a + b),
            ScalarPotential::Sum(terms) => {
                let mut acc = ScalarJet::zero();
                for term in terms {
                    acc = acc + term.kernel_jet(kernel, t, q)?;
                }
                acc
            }
            ScalarPotential::Custom(field) => match kernel {
                TimeKernel::Value => field.jet(t, q),
                TimeKernel::Integral => field.integrated_jet(t, q)?,
            },
        })
    }
}

impl ScalarField for ScalarPotential {
    fn jet(&self, t: f64, q: &Vector2<f64>) -> ScalarJet {
        self.kernel_jet(TimeKernel::Value, t, q)
            .expect("pointwise evaluation is total")
    }

    fn integrated_jet(&self, t: f64, q: &Vector2<f64>) -> Option<ScalarJet> {
        self.kernel_jet(TimeKernel::Integral, t, q)
    }

    fn has_time_integral(&self) -> bool {
        match self {
            ScalarPotential::QuadraticIsotropic(_) | ScalarPotential::Polynomial(_) => true,
            ScalarPotential::Sum(terms) => terms.iter().all(ScalarField::has_time_integral),
            ScalarPotential::Custom(field) => field.has_time_integral(),
        }
    }
}
