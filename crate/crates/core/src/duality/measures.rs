//! Cost-side elasticity measures: the Uzawa form of the Allen matrix, the
//! two Morishima readings, true price (log-derivative) elasticities, and the
//! two-factor Hicks elasticity of the cost function.

use crate::error::{EsError, Result};
use crate::report::{ElasticityReport, Measure, ReportValues};

use super::CostSolution;

/// Allen elasticities through the cost function: σᵢⱼ = C·Cᵢⱼ / (CᵢCⱼ).
pub fn uzawa_aes(sol: &CostSolution) -> Result<ElasticityReport> {
    let n = sol.dim();
    let mut values = vec![vec![0.0; n]; n];
    for (i, row) in values.iter_mut().enumerate() {
        let ci = sol.marginal_cost(i)?;
        for (j, v) in row.iter_mut().enumerate() {
            let cj = sol.marginal_cost(j)?;
            *v = sol.cost * sol.hess_pp.get(i, j) / (ci * cj);
        }
    }
    Ok(ElasticityReport {
        measure: Measure::Aes,
        point: sol.prices.clone(),
        values: ReportValues::Matrix(values),
        diagnostics: vec![
            format!(
                "Uzawa (cost-function) form at output {}; C = {:.6e}",
                sol.output, sol.cost
            ),
            "diagonal entries are own-price terms, not substitution elasticities".into(),
        ],
    })
}

/// Morishima elasticity in the Blackorby–Primont–Russell reading:
/// σᴹᵢⱼ = pᵢ·(Cᵢⱼ/Cⱼ − Cᵢᵢ/Cᵢ).
pub fn mes(sol: &CostSolution, i: usize, j: usize) -> Result<f64> {
    sol.check_factor_pair(i, j)?;
    let ci = sol.marginal_cost(i)?;
    let cj = sol.marginal_cost(j)?;
    Ok(sol.prices[i] * (sol.hess_pp.get(i, j) / cj - sol.hess_pp.get(i, i) / ci))
}

/// The other admissible reading of the same logarithmic derivative:
/// pⱼ·(Cᵢⱼ/Cᵢ − Cⱼⱼ/Cⱼ). Differs from [`mes`] for three factors or more.
pub fn mes_alt(sol: &CostSolution, i: usize, j: usize) -> Result<f64> {
    sol.check_factor_pair(i, j)?;
    let ci = sol.marginal_cost(i)?;
    let cj = sol.marginal_cost(j)?;
    Ok(sol.prices[j] * (sol.hess_pp.get(i, j) / ci - sol.hess_pp.get(j, j) / cj))
}

/// True logarithmic derivative εᵢⱼ = ∂ln xᵢ/∂ln pⱼ = Cᵢⱼ·pⱼ/Cᵢ.
pub fn price_elasticity(sol: &CostSolution, i: usize, j: usize) -> Result<f64> {
    sol.check_factor_pair(i, j)?;
    let ci = sol.marginal_cost(i)?;
    Ok(sol.hess_pp.get(i, j) * sol.prices[j] / ci)
}

/// Two-factor Hicks elasticity of the cost function itself,
/// σᴴ_C = C₁C₂ / (C·C₁₂); the reciprocal of the primal Hicks elasticity.
pub fn hes_cost(sol: &CostSolution) -> Result<f64> {
    if sol.dim() != 2 {
        return Err(EsError::Dimension(format!(
            "hes_cost is defined for 2 factors, got {}",
            sol.dim()
        )));
    }
    let c1 = sol.marginal_cost(0)?;
    let c2 = sol.marginal_cost(1)?;
    let c12 = sol.hess_pp.get(0, 1);
    let scale = sol.hess_pp.row_inf_norm_product().max(f64::MIN_POSITIVE);
    if c12.abs() <= 1e-14 * scale {
        return Err(EsError::ZeroCrossPartial);
    }
    Ok(c1 * c2 / (sol.cost * c12))
}
