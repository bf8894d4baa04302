//! Cost-minimization duality: a damped-Newton solver for the critical points
//! of L(x, λ) = Σpᵢxᵢ + λ(f(x) − y), implicit-function sensitivities of
//! (λ, x) in (p, y), and the cost-side elasticity measures built from them.
//!
//! Sign convention: with this Lagrangian the multiplier is negative at a
//! cost minimum under positive prices and marginal products, and the
//! canonical construction point p = ∇f(x̄), y = f(x̄) has λ = −1. The
//! cofactor formula ∂xᵢ/∂pⱼ = −Fᵢⱼ/(λF) and det Q = λⁿ⁻¹F depend on it.

mod blackorby;
mod measures;
mod solver;

pub use blackorby::blackorby_cost;
pub use measures::{hes_cost, mes, mes_alt, price_elasticity, uzawa_aes};
pub use solver::{dx_dp_cofactor, sensitivity, solve_cost_min};

use serde::Serialize;

use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;
use crate::prodfn::DiffBundle;

/// Problem data for a cost minimization: strictly positive input prices and
/// a positive output level.
#[derive(Clone, Debug)]
pub struct PriceOutput {
    prices: Vec<f64>,
    output: f64,
}

impl PriceOutput {
    pub fn new(prices: Vec<f64>, output: f64) -> Result<Self> {
        if prices.len() < 2 {
            return Err(EsError::Domain(format!(
                "need at least 2 prices, got {}",
                prices.len()
            )));
        }
        if prices.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            return Err(EsError::Domain("all prices must be finite and > 0".into()));
        }
        if !output.is_finite() || output <= 0.0 {
            return Err(EsError::Domain(format!("output must be > 0, got {output}")));
        }
        Ok(PriceOutput { prices, output })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn output(&self) -> f64 {
        self.output
    }

    pub fn dim(&self) -> usize {
        self.prices.len()
    }
}

/// Iteration record of a Newton solve.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SolverTrace {
    pub iterations: usize,
    /// Scaled ∞-norm of the residual at the start of each iteration.
    pub residual_norms: Vec<f64>,
    pub notes: Vec<String>,
}

/// Minimizer, multiplier, cost, and all first/second cost derivatives at a
/// given (p, y).
#[derive(Clone, Debug)]
pub struct CostSolution {
    pub x_star: Point,
    /// Multiplier λ of the Lagrangian; negative at a minimum.
    pub lambda_star: f64,
    /// C(p, y) = Σ pᵢ xᵢ*.
    pub cost: f64,
    /// ∇ₚC; equal to x* by the envelope theorem.
    pub grad_p: Vec<f64>,
    /// ∂C/∂y = −λ*.
    pub dc_dy: f64,
    /// Cᵢⱼ = ∂xᵢ/∂pⱼ.
    pub hess_pp: Matrix,
    /// The (n+1)×(n+1) matrix [[0, ∇f], [∇fᵀ, λH_f]] at the solution.
    /// Absent for closed-form solutions without a smooth primal.
    pub q: Option<Matrix>,
    /// Primal derivative bundle at x*; absent for closed-form solutions.
    pub bundle: Option<DiffBundle>,
    pub prices: Vec<f64>,
    pub output: f64,
    /// Whether the leading principal minors of the bordered Hessian at x*
    /// alternate in sign (second-order certification; advisory).
    pub minor_alternation: Option<bool>,
    pub trace: SolverTrace,
}

impl CostSolution {
    pub fn dim(&self) -> usize {
        self.prices.len()
    }

    pub(crate) fn check_factor_pair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n {
            return Err(EsError::Index(format!(
                "factor pair ({i}, {j}) out of range for {n} factors"
            )));
        }
        Ok(())
    }

    /// Marginal cost Cᵢ, erroring when it is not strictly positive.
    pub(crate) fn marginal_cost(&self, i: usize) -> Result<f64> {
        let ci = self.grad_p[i];
        if !ci.is_finite() || ci <= f64::MIN_POSITIVE {
            return Err(EsError::ZeroMarginalCost(i));
        }
        Ok(ci)
    }
}
