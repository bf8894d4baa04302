//! Closed-form cost function C(p, y) = y·(p₁ + 2√(p₂p₃)) of the
//! counterexample technology min(x₁, √(x₂x₃)). The primal function has no
//! usable bordered Hessian anywhere, yet this dual is C^∞ on R³₊₊ and every
//! cost-side measure is well defined from it.

use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;

use super::{CostSolution, SolverTrace};

/// Analytic cost solution at (p, y): cost, conditional demands (= ∇ₚC), and
/// the full price Hessian. The demand point satisfies x₁ = y and x₂x₃ = y²,
/// i.e. it lies on the curve where the minimum is attained, and C₁² = C₂C₃
/// holds identically.
pub fn blackorby_cost(prices: &[f64], y: f64) -> Result<CostSolution> {
    if prices.len() != 3 {
        return Err(EsError::Dimension(format!(
            "the closed-form cost function has 3 factors, got {} prices",
            prices.len()
        )));
    }
    if prices.iter().any(|&p| !p.is_finite() || p <= 0.0) {
        return Err(EsError::Domain("all prices must be finite and > 0".into()));
    }
    if !y.is_finite() || y <= 0.0 {
        return Err(EsError::Domain(format!("output must be > 0, got {y}")));
    }
    let (p1, p2, p3) = (prices[0], prices[1], prices[2]);
    let root = (p2 * p3).sqrt();
    let marginal = p1 + 2.0 * root;
    let cost = y * marginal;

    // Shephard: x = grad_p C
    let x = vec![y, y * (p3 / p2).sqrt(), y * (p2 / p3).sqrt()];

    // C_1 is constant in p, so its row and column vanish identically.
    let mut hess_pp = Matrix::zeros(3, 3);
    hess_pp.set(1, 1, -y * p3.sqrt() / (2.0 * p2.powf(1.5)));
    hess_pp.set(2, 2, -y * p2.sqrt() / (2.0 * p3.powf(1.5)));
    hess_pp.set(1, 2, y / (2.0 * root));
    hess_pp.set(2, 1, y / (2.0 * root));

    let mut trace = SolverTrace::default();
    trace.notes.push(
        "closed-form cost function y*(p1 + 2*sqrt(p2*p3)) for min(x1, sqrt(x2*x3)); \
         no primal bundle exists"
            .into(),
    );

    Ok(CostSolution {
        x_star: Point::new(x.clone())?,
        lambda_star: -marginal,
        cost,
        grad_p: x,
        dc_dy: marginal,
        hess_pp,
        q: None,
        bundle: None,
        prices: prices.to_vec(),
        output: y,
        minor_alternation: None,
        trace,
    })
}
