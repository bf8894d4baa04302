//! Numeric homogeneity detection: the Euler residual pins the candidate
//! degree, a fixed scale-probe grid confirms it globally. Euler alone only
//! certifies local homogeneity, so both checks are required.

use crate::error::Result;
use crate::point::Point;

use super::families::{differentiate, evaluate};
use super::FunctionSpec;

const PROBE_GRID: [f64; 4] = [0.5, 0.8, 1.25, 2.0];
const TOL: f64 = 1e-8;

/// Degree k with Σxᵢfᵢ = k·f at `x` and f(tx) = t^k·f(x) on the probe grid,
/// or `None` when no such degree fits within 1e-8 relative.
pub fn homogeneity_degree(spec: &FunctionSpec, x: &Point) -> Result<Option<f64>> {
    let d = differentiate(spec, x)?;
    if d.value.abs() < 1e-300 {
        return Ok(None);
    }
    let weighted: f64 = x.coords().iter().zip(&d.gradient).map(|(&xi, &fi)| xi * fi).sum();
    let k = weighted / d.value;

    for t in PROBE_GRID {
        let xt = x.scaled(t)?;
        let ft = evaluate(spec, &xt)?;
        let predicted = t.powf(k) * d.value;
        if (ft - predicted).abs() > TOL * ft.abs().max(predicted.abs()).max(1.0) {
            return Ok(None);
        }
        // Euler residual away from the base point
        let dt = differentiate(spec, &xt)?;
        let wt: f64 = xt.coords().iter().zip(&dt.gradient).map(|(&xi, &fi)| xi * fi).sum();
        if (wt - k * ft).abs() > TOL * (k * ft).abs().max(1.0) {
            return Ok(None);
        }
    }
    Ok(Some(k))
}
