//! Data types shared by every other module: time profiles, the two potential
//! families, problem specifications, phase-space points, discretized loops
//! and time-dependent 1-forms on phase space.

mod config;
mod discrete_loop;
mod one_form;
mod profile;
mod scalar_potential;
mod vector_potential;

pub use config::{parse_config, KNOWN_PRESETS};
pub use discrete_loop::{DiscreteLoop, MIN_LOOP_SAMPLES};
pub use one_form::{PhaseOneForm, TwistedPrimitive};
pub use profile::FourierProfile;
pub use scalar_potential::{Monomial, ScalarField, ScalarJet, ScalarPotential};
pub use vector_potential::{
    DriftCoefficient, IntegratedGradient, VectorField, VectorJet, VectorPotential,
};

use nalgebra::{Matrix2, Vector2, Vector4};

/// Anticlockwise quarter rotation `J₀ = [[0, −1], [1, 0]]`.
pub fn j0() -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0, 1.0, 0.0)
}

/// Clockwise quarter rotation `J̄₀ = −J₀`.
pub fn j0_bar() -> Matrix2<f64> {
    -j0()
}

/// Axis-aligned box used to choose sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl BoundingBox {
    pub fn unit() -> Self {
        Self { min: [-1.0, -1.0], max: [1.0, 1.0] }
    }

    /// `n × n` tensor grid including the corners.
    pub fn grid(&self, n: usize) -> Vec<Vector2<f64>> {
        let step = |lo: f64, hi: f64, i: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(Vector2::new(
                    step(self.min[0], self.max[0], i),
                    step(self.min[1], self.max[1], j),
                ));
            }
        }
        out
    }
}

/// A vector potential together with a periodic scalar potential.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub potential: VectorPotential,
    pub scalar: ScalarPotential,
    pub domain_hint: Option<BoundingBox>,
}

impl ProblemSpec {
    pub fn new(potential: VectorPotential, scalar: ScalarPotential) -> Self {
        Self { potential, scalar, domain_hint: None }
    }

    pub fn free_particle() -> Self {
        Self::new(VectorPotential::zero(), ScalarPotential::zero())
    }

    pub fn with_domain_hint(mut self, hint: BoundingBox) -> Self {
        self.domain_hint = Some(hint);
        self
    }

    pub fn domain(&self) -> BoundingBox {
        self.domain_hint.unwrap_or_else(BoundingBox::unit)
    }
}

/// A point `(t, q, p)` of extended phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub q: Vector2<f64>,
    pub p: Vector2<f64>,
}

impl PhaseState {
    pub fn new(t: f64, q: Vector2<f64>, p: Vector2<f64>) -> Self {
        Self { t, q, p }
    }

    pub fn from_vector(t: f64, z: &Vector4<f64>) -> Self {
        Self { t, q: Vector2::new(z[0], z[1]), p: Vector2::new(z[2], z[3]) }
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.q.x, self.q.y, self.p.x, self.p.y)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.q.iter().chain(self.p.iter()).all(|v| v.is_finite())
    }
}

pub(crate) fn split(z: &Vector4<f64>) -> (Vector2<f64>, Vector2<f64>) {
    (Vector2::new(z[0], z[1]), Vector2::new(z[2], z[3]))
}

pub(crate) fn join(a: &Vector2<f64>, b: &Vector2<f64>) -> Vector4<f64> {
    Vector4::new(a.x, a.y, b.x, b.y)
}
