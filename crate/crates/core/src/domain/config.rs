use super::{
    BoundingBox, DriftCoefficient, FourierProfile, Monomial, ProblemSpec, ScalarPotential,
    VectorPotential,
};
use crate::error::{Error, Result};
use crate::transforms;
use serde::Deserialize;

pub const KNOWN_PRESETS: &[&str] = &["merry-go-round", "free-particle"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    preset: Option<String>,
    omega: Option<FourierProfile>,
    vector_potential: Option<VectorPotentialDoc>,
    scalar_potential: Option<ScalarPotentialDoc>,
    domain_hint: Option<BoxDoc>,
    #[serde(default)]
    eliminate_scalar: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorPotentialDoc {
    rotational: Option<FourierProfile>,
    radial_drift: Option<DriftCoefficient>,
    uniform_drift: Option<UniformDriftDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformDriftDoc {
    direction: [f64; 2],
    #[serde(default)]
    quadratic: f64,
    #[serde(default)]
    linear: f64,
    #[serde(default)]
    rate: FourierProfile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarPotentialDoc {
    quadratic_isotropic: Option<FourierProfile>,
    polynomial: Option<Vec<MonomialDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialDoc {
    powers: [u32; 2],
    coeff: FourierProfile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    min: [f64; 2],
    max: [f64; 2],
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config { path: path.to_string(), message: message.into() }
}

/// Parse a JSON problem description into a resolved [`ProblemSpec`].
pub fn parse_config(text: &str) -> Result<ProblemSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ConfigDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        config_err(&path, e.into_inner().to_string())
    })?;

    let mut spec = match doc.preset.as_deref() {
        Some(name) => {
            if doc.vector_potential.is_some() {
                return Err(config_err("vector_potential", "cannot be combined with `preset`"));
            }
            if doc.scalar_potential.is_some() {
                return Err(config_err("scalar_potential", "cannot be combined with `preset`"));
            }
            match name {
                "merry-go-round" => {
                    let omega = doc
                        .omega
                        .ok_or_else(|| config_err("omega", "preset `merry-go-round` requires `omega`"))?;
                    transforms::make_merry_go_round(omega)
                }
                "free-particle" => {
                    if doc.omega.is_some() {
                        return Err(config_err("omega", "preset `free-particle` takes no `omega`"));
                    }
                    ProblemSpec::free_particle()
                }
                other => {
                    return Err(Error::UnknownPreset {
                        name: other.to_string(),
                        known: KNOWN_PRESETS.iter().map(|s| s.to_string()).collect(),
                    })
                }
            }
        }
        None => {
            if doc.omega.is_some() {
                return Err(config_err("omega", "only valid together with `preset`"));
            }
            if doc.vector_potential.is_none() && doc.scalar_potential.is_none() {
                return Err(config_err(
                    ".",
                    "expected `preset` or at least one of `vector_potential`, `scalar_potential`",
                ));
            }
            let potential = doc.vector_potential.map(vector_potential).unwrap_or_else(VectorPotential::zero);
            let scalar = doc.scalar_potential.map(scalar_potential).unwrap_or_else(ScalarPotential::zero);
            ProblemSpec::new(potential, scalar)
        }
    };

    if let Some(b) = doc.domain_hint {
        if !(b.min[0] < b.max[0] && b.min[1] < b.max[1]) {
            return Err(config_err("domain_hint", "`min` must be strictly below `max` in both axes"));
        }
        spec.domain_hint = Some(BoundingBox { min: b.min, max: b.max });
    }
    if doc.eliminate_scalar {
        spec = transforms::eliminate_scalar(&spec)?;
    }
    Ok(spec)
}

fn vector_potential(doc: VectorPotentialDoc) -> VectorPotential {
    let mut terms = Vec::new();
    if let Some(w) = doc.rotational {
        terms.push(VectorPotential::Rotational(w));
    }
    if let Some(c) = doc.radial_drift {
        terms.push(VectorPotential::RadialDrift(c));
    }
    if let Some(u) = doc.uniform_drift {
        terms.push(VectorPotential::UniformDrift {
            coefficient: DriftCoefficient { quadratic: u.quadratic, linear: u.linear, rate: u.rate },
            direction: u.direction,
        });
    }
    match terms.len() {
        1 => terms.pop().unwrap(),
        _ => VectorPotential::Sum(terms),
    }
}

fn scalar_potential(doc: ScalarPotentialDoc) -> ScalarPotential {
    let mut terms = Vec::new();
    if let Some(k) = doc.quadratic_isotropic {
        terms.push(ScalarPotential::QuadraticIsotropic(k));
    }
    if let Some(ms) = doc.polynomial {
        terms.push(ScalarPotential::Polynomial(
            ms.into_iter().map(|m| Monomial { powers: m.powers, coeff: m.coeff }).collect(),
        ));
    }
    match terms.len() {
        1 => terms.pop().unwrap(),
        _ => ScalarPotential::Sum(terms),
    }
}
