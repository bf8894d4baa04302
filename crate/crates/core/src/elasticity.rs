//! Primal-side elasticities: the Allen matrix from bordered-Hessian
//! cofactors, the two-factor Hicks elasticity in three equivalent forms, and
//! the isoquant-curvature number they are often confused with.

use crate::bmatrix::{bordered_hessian, cofactor, determinant};
use crate::error::{EsError, Result};
use crate::point::Point;
use crate::prodfn::{differentiate, homogeneity_degree, DiffBundle, FunctionSpec};
use crate::report::{ElasticityReport, Measure, ReportValues};

/// Allen partial elasticities σᵢⱼ = (Σₖ xₖfₖ / (xᵢxⱼ)) · Fᵢⱼ/F.
///
/// The diagonal is computed from the same formula and reported, but it is an
/// own-price term, not a substitution elasticity; the report carries a
/// diagnostic note to that effect. Only the upper triangle is evaluated and
/// mirrored, so the output is symmetric exactly as computed.
pub fn aes_matrix(d: &DiffBundle) -> Result<ElasticityReport> {
    let n = d.dim();
    let b = bordered_hessian(d);
    let det_f = determinant(&b);
    let threshold = b.singularity_threshold();
    if det_f.abs() <= threshold {
        return Err(EsError::SingularBorderedHessian(format!(
            "|F| = {:.3e} at or below threshold {:.3e}",
            det_f.abs(),
            threshold
        )));
    }
    let weighted: f64 =
        d.point.coords().iter().zip(&d.gradient).map(|(&xi, &fi)| xi * fi).sum();
    let mut values = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)] // mirrored writes need both indices
    for i in 0..n {
        for j in i..n {
            let cf = cofactor(&b, i + 1, j + 1)?;
            let sigma = weighted / (d.point.get(i) * d.point.get(j)) * cf / det_f;
            values[i][j] = sigma;
            values[j][i] = sigma;
        }
    }
    Ok(ElasticityReport {
        measure: Measure::Aes,
        point: d.point.coords().to_vec(),
        values: ReportValues::Matrix(values),
        diagnostics: vec![
            format!("bordered determinant F = {det_f:.6e}, singularity threshold {threshold:.3e}"),
            "diagonal entries are own-price terms, not substitution elasticities".into(),
        ],
    })
}

/// Two-factor elasticity in the explicit determinant form
/// (Σxf/(x₁x₂)) · f₁f₂ / (−f₁₁f₂² + 2f₁₂f₁f₂ − f₂₂f₁²).
pub fn hes_determinant(d: &DiffBundle) -> Result<f64> {
    if d.dim() != 2 {
        return Err(EsError::Dimension(format!(
            "the Hicks elasticity is defined for 2 factors, got {}",
            d.dim()
        )));
    }
    let (f1, f2) = (d.gradient[0], d.gradient[1]);
    let (f11, f12, f22) = (d.hessian.get(0, 0), d.hessian.get(0, 1), d.hessian.get(1, 1));
    let denom = -f11 * f2 * f2 + 2.0 * f12 * f1 * f2 - f22 * f1 * f1;
    let scale = (f11 * f2 * f2).abs() + 2.0 * (f12 * f1 * f2).abs() + (f22 * f1 * f1).abs();
    if denom.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(EsError::DegenerateDenominator);
    }
    let weighted = d.point.get(0) * f1 + d.point.get(1) * f2;
    Ok(weighted / (d.point.get(0) * d.point.get(1)) * f1 * f2 / denom)
}

/// Two-factor elasticity in the linear-homogeneous reduction
/// f₁f₂ / (f·f₁₂). Requires the spec to be homogeneous of degree 1.
pub fn hes_homogeneous(spec: &FunctionSpec, x: &Point) -> Result<f64> {
    if spec.dim() != 2 {
        return Err(EsError::Dimension(format!(
            "the Hicks elasticity is defined for 2 factors, got {}",
            spec.dim()
        )));
    }
    match homogeneity_degree(spec, x)? {
        Some(k) if (k - 1.0).abs() <= 1e-6 => {}
        Some(k) => {
            return Err(EsError::NotLinearHomogeneous(format!(
                "detected homogeneity degree {k}, need 1"
            )))
        }
        None => {
            return Err(EsError::NotLinearHomogeneous(
                "spec is not homogeneous on the probe grid".into(),
            ))
        }
    }
    let d = differentiate(spec, x)?;
    let f12 = d.hessian.get(0, 1);
    let scale = d.hessian.row_inf_norm_product().max(f64::MIN_POSITIVE);
    if f12.abs() <= 1e-14 * scale {
        return Err(EsError::ZeroCrossPartial);
    }
    Ok(d.gradient[0] * d.gradient[1] / (d.value * f12))
}

/// Two-factor elasticity as the log-derivative d ln(x₁/x₂) / d ln(f₂/f₁),
/// evaluated by tracing the isoquant f = f(x) numerically.
///
/// This is the independent oracle for [`hes_determinant`]: it shares no code
/// with the cofactor route beyond `differentiate`. Agreement is expected to
/// about 1e-4 relative.
pub fn hes_log_derivative(spec: &FunctionSpec, x: &Point) -> Result<f64> {
    if spec.dim() != 2 {
        return Err(EsError::Dimension(format!(
            "the Hicks elasticity is defined for 2 factors, got {}",
            spec.dim()
        )));
    }
    let d0 = differentiate(spec, x)?;
    if d0.gradient[0] <= 0.0 || d0.gradient[1] <= 0.0 {
        return Err(EsError::IsoquantTraceFailure(
            "marginal products must be positive to trace the isoquant".into(),
        ));
    }
    let y0 = d0.value;
    let h = f64::EPSILON.cbrt() * x.get(1).abs().max(1.0);
    let mut log_ratios = [0.0; 2]; // ln(x1/x2) at x2 ± h
    let mut log_slopes = [0.0; 2]; // ln(f2/f1) at x2 ± h
    for (slot, dx2) in [(0usize, h), (1usize, -h)] {
        let x2 = x.get(1) + dx2;
        let x1 = isoquant_solve_x1(spec, x.get(0), x2, y0)?;
        let d = differentiate(spec, &Point::new(vec![x1, x2])?)?;
        if d.gradient[0] <= 0.0 || d.gradient[1] <= 0.0 {
            return Err(EsError::IsoquantTraceFailure(
                "marginal product lost positivity along the isoquant".into(),
            ));
        }
        log_ratios[slot] = (x1 / x2).ln();
        log_slopes[slot] = (d.gradient[1] / d.gradient[0]).ln();
    }
    let dv = log_slopes[0] - log_slopes[1];
    if dv.abs() < 1e-12 {
        return Err(EsError::IsoquantTraceFailure(
            "marginal-rate ratio is stationary along the isoquant".into(),
        ));
    }
    Ok((log_ratios[0] - log_ratios[1]) / dv)
}

/// 1-D Newton for x₁ with f(x₁, x₂) = y₀, starting from `x1_guess`.
fn isoquant_solve_x1(spec: &FunctionSpec, x1_guess: f64, x2: f64, y0: f64) -> Result<f64> {
    let mut x1 = x1_guess;
    for _ in 0..80 {
        let d = differentiate(spec, &Point::new(vec![x1, x2])?)?;
        let resid = d.value - y0;
        if resid.abs() <= 1e-13 * y0.abs().max(1.0) {
            return Ok(x1);
        }
        let f1 = d.gradient[0];
        if f1.abs() < 1e-300 {
            return Err(EsError::IsoquantTraceFailure(
                "zero marginal product in the isoquant root-find".into(),
            ));
        }
        let mut step = -resid / f1;
        // keep the iterate strictly positive
        let mut guard = 0;
        while x1 + step <= 0.0 {
            step *= 0.5;
            guard += 1;
            if guard > 60 {
                return Err(EsError::IsoquantTraceFailure(
                    "step collapsed at the domain boundary".into(),
                ));
            }
        }
        x1 += step;
    }
    Err(EsError::IsoquantTraceFailure("level-curve Newton did not converge".into()))
}

/// Curvature |−f₁₁f₂² + 2f₁₂f₁f₂ − f₂₂f₁²| / ‖∇f‖³ of the isoquant through
/// the point. Unlike the elasticity it depends on the measurement units;
/// the sign is dropped because only the magnitude is compared.
pub fn isoquant_curvature(d: &DiffBundle) -> Result<f64> {
    if d.dim() != 2 {
        return Err(EsError::Dimension(format!(
            "isoquant curvature is defined for 2 factors, got {}",
            d.dim()
        )));
    }
    let (f1, f2) = (d.gradient[0], d.gradient[1]);
    let norm_sq = f1 * f1 + f2 * f2;
    if norm_sq <= 0.0 {
        return Err(EsError::ZeroGradient);
    }
    let (f11, f12, f22) = (d.hessian.get(0, 0), d.hessian.get(0, 1), d.hessian.get(1, 1));
    Ok((-f11 * f2 * f2 + 2.0 * f12 * f1 * f2 - f22 * f1 * f1).abs() / norm_sq.powf(1.5))
}
