//! Production-function families: exact analytic derivatives, a
//! finite-difference oracle, smoothness diagnostics, and homogeneity
//! detection.

mod families;
mod homogeneity;
mod oracle;

pub use families::{differentiate, evaluate, nested_min_branch};
pub use homogeneity::homogeneity_degree;
pub use oracle::{check_smoothness, fd_differentiate};

use serde::{Deserialize, Serialize};

use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;

/// Parametric description of a production-function family.
///
/// The JSON form is `{"family": "<name>", "params": {...}}` with strict
/// parsing (unknown keys rejected). See the repository README for the exact
/// per-family keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// f(x) = A·∏ xᵢ^αᵢ with A > 0 and all αᵢ > 0.
    CobbDouglas { scale: f64, exponents: Vec<f64> },
    /// f(x) = A·(Σ δᵢ xᵢ^ρ)^(k/ρ) with A > 0, δᵢ > 0, ρ < 1, ρ ≠ 0, k > 0.
    Ces { scale: f64, weights: Vec<f64>, rho: f64, degree: f64 },
    /// f(x) = A·∏ (xᵢ − sᵢ)^αᵢ on the domain xᵢ > sᵢ, sᵢ ≥ 0.
    ShiftedCobbDouglas { scale: f64, exponents: Vec<f64>, shifts: Vec<f64> },
    /// f(x) = aᵀx − ½ xᵀBx with B symmetric positive semidefinite.
    Quadratic { linear: Vec<f64>, quadratic: Vec<Vec<f64>> },
    /// f(x₁,x₂,x₃) = min(x₁, √(x₂x₃)). Not C¹ on the surface x₁² = x₂x₃.
    NestedMin {},
    /// f(x) = g(h(x)) for a degree-1 inner spec h and increasing outer g.
    Homothetic { inner: Box<FunctionSpec>, outer: OuterTransform },
}

/// Outer transform of a homothetic composition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OuterTransform {
    /// g(t) = t^γ, γ > 0.
    Power { gamma: f64 },
    /// g(t) = ln(1 + t).
    Log1p,
}

impl OuterTransform {
    /// (g, g', g'') at t > 0.
    pub(crate) fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            OuterTransform::Power { gamma } => {
                let g = t.powf(*gamma);
                (g, gamma * t.powf(gamma - 1.0), gamma * (gamma - 1.0) * t.powf(gamma - 2.0))
            }
            OuterTransform::Log1p => {
                let d = 1.0 + t;
                (d.ln(), 1.0 / d, -1.0 / (d * d))
            }
        }
    }
}

impl FunctionSpec {
    /// Number of input factors this spec expects.
    pub fn dim(&self) -> usize {
        match self {
            FunctionSpec::CobbDouglas { exponents, .. } => exponents.len(),
            FunctionSpec::Ces { weights, .. } => weights.len(),
            FunctionSpec::ShiftedCobbDouglas { exponents, .. } => exponents.len(),
            FunctionSpec::Quadratic { linear, .. } => linear.len(),
            FunctionSpec::NestedMin {} => 3,
            FunctionSpec::Homothetic { inner, .. } => inner.dim(),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            FunctionSpec::CobbDouglas { .. } => "cobb_douglas",
            FunctionSpec::Ces { .. } => "ces",
            FunctionSpec::ShiftedCobbDouglas { .. } => "shifted_cobb_douglas",
            FunctionSpec::Quadratic { .. } => "quadratic",
            FunctionSpec::NestedMin {} => "nested_min",
            FunctionSpec::Homothetic { .. } => "homothetic",
        }
    }

    /// Check family-specific parameter validity.
    pub fn validate(&self) -> Result<()> {
        families::validate(self)
    }

    /// Strict JSON parse: unknown keys are rejected, parameters validated.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: FunctionSpec = serde_json::from_str(s)
            .map_err(|e| EsError::InvalidSpec(format!("spec JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }
}

/// Value, gradient, and Hessian of a function at a point.
#[derive(Clone, Debug)]
pub struct DiffBundle {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Matrix,
    pub point: Point,
}

impl DiffBundle {
    pub fn dim(&self) -> usize {
        self.gradient.len()
    }
}

/// Per-coordinate one-sided slopes and kink flags.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub left_slopes: Vec<f64>,
    pub right_slopes: Vec<f64>,
    pub kink: Vec<bool>,
    pub max_rel_mismatch: f64,
}

impl SmoothnessReport {
    pub fn any_kink(&self) -> bool {
        self.kink.iter().any(|&k| k)
    }
}

/// Relative left/right slope mismatch above this flags a kink.
pub const KINK_TOL: f64 = 1e-3;
