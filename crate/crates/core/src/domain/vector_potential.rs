use super::profile::FourierProfile;
use super::scalar_potential::{ScalarField, ScalarPotential};
use super::j0;
use crate::error::{Error, Result};
use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Value `A_t(q)`, time derivative `Ȧ_t(q)` and spatial Jacobian of a vector
/// potential. `jacobian[(i, j)] = ∂A^i / ∂q_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorJet {
    pub value: Vector2<f64>,
    pub time_derivative: Vector2<f64>,
    pub jacobian: Matrix2<f64>,
}

impl VectorJet {
    pub fn zero() -> Self {
        Self { value: Vector2::zeros(), time_derivative: Vector2::zeros(), jacobian: Matrix2::zeros() }
    }

    /// `∂₁A² − ∂₂A¹`
    pub fn rot(&self) -> f64 {
        self.jacobian[(1, 0)] - self.jacobian[(0, 1)]
    }
}

impl std::ops::Add for VectorJet {
    type Output = VectorJet;
    fn add(self, rhs: VectorJet) -> VectorJet {
        VectorJet {
            value: self.value + rhs.value,
            time_derivative: self.time_derivative + rhs.time_derivative,
            jacobian: self.jacobian + rhs.jacobian,
        }
    }
}

/// Extension point for vector potentials defined in code.
pub trait VectorField: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64, q: &Vector2<f64>) -> VectorJet;
}

/// Time coefficient `c(t) = quadratic·t² + linear·t + ∫₀ᵗ rate(s) ds`.
///
/// `ċ` is periodic exactly when `quadratic == 0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftCoefficient {
    #[serde(default)]
    pub quadratic: f64,
    #[serde(default)]
    pub linear: f64,
    #[serde(default)]
    pub rate: FourierProfile,
}

impl DriftCoefficient {
    pub fn linear(slope: f64) -> Self {
        Self { linear: slope, ..Self::default() }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.quadratic * t * t + self.linear * t + self.rate.antiderivative(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        2.0 * self.quadratic * t + self.linear + self.rate.eval(t)
    }
}

/// `∫₀ᵗ ∇φ_s ds` for a scalar family with a closed-form time integral.
#[derive(Debug, Clone)]
pub struct IntegratedGradient(ScalarPotential);

impl IntegratedGradient {
    pub fn new(scalar: ScalarPotential) -> Result<Self> {
        if scalar.has_time_integral() {
            Ok(Self(scalar))
        } else {
            Err(Error::UnsupportedFamily(format!(
                "scalar potential {scalar:?} has no closed-form time integral"
            )))
        }
    }

    pub fn scalar(&self) -> &ScalarPotential {
        &self.0
    }
}

/// Time-dependent vector potential `A_t` on the plane.
#[derive(Debug, Clone)]
pub enum VectorPotential {
    /// `A_t(q) = ω(t) J₀ q`
    Rotational(FourierProfile),
    /// `A_t(q) = c(t) q`
    RadialDrift(DriftCoefficient),
    /// `A_t(q) = c(t) d` for a fixed direction `d`
    UniformDrift { coefficient: DriftCoefficient, direction: [f64; 2] },
    IntegratedGradient(IntegratedGradient),
    Sum(Vec<VectorPotential>),
    Custom(Arc<dyn VectorField>),
}

impl VectorPotential {
    pub fn zero() -> Self {
        VectorPotential::Sum(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VectorPotential::Rotational(w) => w.is_zero(),
            VectorPotential::RadialDrift(c) => c.quadratic == 0.0 && c.linear == 0.0 && c.rate.is_zero(),
            VectorPotential::UniformDrift { coefficient: c, direction } => {
                (c.quadratic == 0.0 && c.linear == 0.0 && c.rate.is_zero()) || *direction == [0.0, 0.0]
            }
            VectorPotential::IntegratedGradient(g) => g.scalar().is_zero(),
            VectorPotential::Sum(terms) => terms.iter().all(VectorPotential::is_zero),
            VectorPotential::Custom(_) => false,
        }
    }

    pub fn value(&self, t: f64, q: &Vector2<f64>) -> Vector2<f64> {
        self.jet(t, q).value
    }

    pub fn time_derivative(&self, t: f64, q: &Vector2<f64>) -> Vector2<f64> {
        self.jet(t, q).time_derivative
    }

    pub fn rot(&self, t: f64, q: &Vector2<f64>) -> f64 {
        self.jet(t, q).rot()
    }
}

impl VectorField for VectorPotential {
    fn jet(&self, t: f64, q: &Vector2<f64>) -> VectorJet {
        match self {
            VectorPotential::Rotational(omega) => {
                let w = omega.eval(t);
                let wd = omega.derivative(t);
                let jq = j0() * q;
                VectorJet { value: w * jq, time_derivative: wd * jq, jacobian: j0() * w }
            }
            VectorPotential::RadialDrift(c) => {
                let cv = c.value(t);
                VectorJet {
                    value: cv * q,
                    time_derivative: c.derivative(t) * q,
                    jacobian: Matrix2::identity() * cv,
                }
            }
            VectorPotential::UniformDrift { coefficient, direction } => {
                let d = Vector2::new(direction[0], direction[1]);
                VectorJet {
                    value: coefficient.value(t) * d,
                    time_derivative: coefficient.derivative(t) * d,
                    jacobian: Matrix2::zeros(),
                }
            }
            VectorPotential::IntegratedGradient(g) => {
                let integral = g
                    .scalar()
                    .integrated_jet(t, q)
                    .expect("IntegratedGradient is only constructed for integrable families");
                VectorJet {
                    value: integral.gradient,
                    time_derivative: g.scalar().gradient(t, q),
                    jacobian: integral.hessian,
                }
            }
            VectorPotential::Sum(terms) => {
                terms.iter().map(|a| a.jet(t, q)).fold(VectorJet::zero(), |x, y| x + y)
            }
            VectorPotential::Custom(field) => field.jet(t, q),
        }
    }
}
