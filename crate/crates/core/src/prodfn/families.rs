//! Per-family evaluation and closed-form first/second derivatives.

use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;

use super::{DiffBundle, FunctionSpec, OuterTransform};

pub(crate) fn validate(spec: &FunctionSpec) -> Result<()> {
    let finite_pos = |v: f64| v.is_finite() && v > 0.0;
    match spec {
        FunctionSpec::CobbDouglas { scale, exponents } => {
            validate_positive_vec("exponents", exponents)?;
            if !finite_pos(*scale) {
                return Err(EsError::InvalidSpec(format!("scale must be > 0, got {scale}")));
            }
        }
        FunctionSpec::Ces { scale, weights, rho, degree } => {
            validate_positive_vec("weights", weights)?;
            if !finite_pos(*scale) {
                return Err(EsError::InvalidSpec(format!("scale must be > 0, got {scale}")));
            }
            if !rho.is_finite() || *rho >= 1.0 || *rho == 0.0 {
                return Err(EsError::InvalidSpec(format!(
                    "rho must satisfy rho < 1 and rho != 0, got {rho}"
                )));
            }
            if !finite_pos(*degree) {
                return Err(EsError::InvalidSpec(format!("degree must be > 0, got {degree}")));
            }
        }
        FunctionSpec::ShiftedCobbDouglas { scale, exponents, shifts } => {
            validate_positive_vec("exponents", exponents)?;
            if !finite_pos(*scale) {
                return Err(EsError::InvalidSpec(format!("scale must be > 0, got {scale}")));
            }
            if shifts.len() != exponents.len() {
                return Err(EsError::InvalidSpec(format!(
                    "shifts length {} != exponents length {}",
                    shifts.len(),
                    exponents.len()
                )));
            }
            if shifts.iter().any(|&s| !s.is_finite() || s < 0.0) {
                return Err(EsError::InvalidSpec("shifts must be finite and >= 0".into()));
            }
        }
        FunctionSpec::Quadratic { linear, quadratic } => {
            if linear.len() < 2 {
                return Err(EsError::InvalidSpec("quadratic needs n >= 2 factors".into()));
            }
            if linear.iter().any(|v| !v.is_finite()) {
                return Err(EsError::InvalidSpec("linear coefficients must be finite".into()));
            }
            let b = Matrix::from_rows(quadratic)?;
            if b.rows() != linear.len() || b.cols() != linear.len() {
                return Err(EsError::InvalidSpec(format!(
                    "quadratic block must be {n}x{n}",
                    n = linear.len()
                )));
            }
            let scale = b.row_inf_norm_product().max(1.0);
            if !b.is_symmetric(1e-12 * scale) {
                return Err(EsError::InvalidSpec("quadratic block must be symmetric".into()));
            }
            let ev = b.sym_eigenvalues()?;
            let top = ev.first().copied().unwrap_or(0.0).abs().max(1.0);
            if ev.last().copied().unwrap_or(0.0) < -1e-10 * top {
                return Err(EsError::InvalidSpec(
                    "quadratic block must be positive semidefinite".into(),
                ));
            }
        }
        FunctionSpec::NestedMin {} => {}
        FunctionSpec::Homothetic { inner, outer } => {
            inner.validate()?;
            let deg = match inner.as_ref() {
                FunctionSpec::CobbDouglas { exponents, .. } => exponents.iter().sum::<f64>(),
                FunctionSpec::Ces { degree, .. } => *degree,
                other => {
                    return Err(EsError::InvalidSpec(format!(
                        "homothetic inner spec must be cobb_douglas or ces, got {}",
                        other.family_name()
                    )))
                }
            };
            if (deg - 1.0).abs() > 1e-12 {
                return Err(EsError::InvalidSpec(format!(
                    "homothetic inner spec must be homogeneous of degree 1, got {deg}"
                )));
            }
            if let OuterTransform::Power { gamma } = outer {
                if !finite_pos(*gamma) {
                    return Err(EsError::InvalidSpec(format!("gamma must be > 0, got {gamma}")));
                }
            }
        }
    }
    Ok(())
}

fn validate_positive_vec(name: &str, v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(EsError::InvalidSpec(format!("{name} needs length >= 2, got {}", v.len())));
    }
    if v.iter().any(|&c| !c.is_finite() || c <= 0.0) {
        return Err(EsError::InvalidSpec(format!("{name} must all be finite and > 0")));
    }
    Ok(())
}

fn check_dim(spec: &FunctionSpec, x: &Point) -> Result<()> {
    if spec.dim() != x.dim() {
        return Err(EsError::Dimension(format!(
            "{} expects {} factors, point has {}",
            spec.family_name(),
            spec.dim(),
            x.dim()
        )));
    }
    Ok(())
}

fn check_shift_domain(shifts: &[f64], x: &Point) -> Result<()> {
    for (i, (&xi, &si)) in x.coords().iter().zip(shifts).enumerate() {
        if xi <= si {
            return Err(EsError::Domain(format!(
                "coordinate {i}: {xi} must exceed shift {si}"
            )));
        }
    }
    Ok(())
}

/// f(x) per the family formula.
pub fn evaluate(spec: &FunctionSpec, x: &Point) -> Result<f64> {
    check_dim(spec, x)?;
    let c = x.coords();
    match spec {
        FunctionSpec::CobbDouglas { scale, exponents } => {
            Ok(scale * c.iter().zip(exponents).map(|(&xi, &a)| xi.powf(a)).product::<f64>())
        }
        FunctionSpec::Ces { scale, weights, rho, degree } => {
            let s: f64 = c.iter().zip(weights).map(|(&xi, &d)| d * xi.powf(*rho)).sum();
            Ok(scale * s.powf(degree / rho))
        }
        FunctionSpec::ShiftedCobbDouglas { scale, exponents, shifts } => {
            check_shift_domain(shifts, x)?;
            Ok(scale
                * c.iter()
                    .zip(exponents)
                    .zip(shifts)
                    .map(|((&xi, &a), &s)| (xi - s).powf(a))
                    .product::<f64>())
        }
        FunctionSpec::Quadratic { linear, quadratic } => {
            let b = Matrix::from_rows(quadratic)?;
            let bx = b.matvec(c)?;
            let lin: f64 = linear.iter().zip(c).map(|(&a, &xi)| a * xi).sum();
            let quad: f64 = c.iter().zip(&bx).map(|(&xi, &bi)| xi * bi).sum();
            Ok(lin - 0.5 * quad)
        }
        FunctionSpec::NestedMin {} => Ok(c[0].min((c[1] * c[2]).sqrt())),
        FunctionSpec::Homothetic { inner, outer } => {
            let h = evaluate(inner, x)?;
            Ok(outer.eval(h).0)
        }
    }
}

/// Analytic gradient and Hessian.
///
/// NestedMin is rejected everywhere: each smooth branch has a degenerate
/// Hessian and the family is not C² across the kink surface. Use
/// [`nested_min_branch`] for the branch data.
pub fn differentiate(spec: &FunctionSpec, x: &Point) -> Result<DiffBundle> {
    check_dim(spec, x)?;
    let n = x.dim();
    let c = x.coords();
    match spec {
        FunctionSpec::CobbDouglas { scale, exponents } => {
            let value =
                scale * c.iter().zip(exponents).map(|(&xi, &a)| xi.powf(a)).product::<f64>();
            Ok(power_product_bundle(value, c, exponents, x))
        }
        FunctionSpec::ShiftedCobbDouglas { scale, exponents, shifts } => {
            check_shift_domain(shifts, x)?;
            let z: Vec<f64> = c.iter().zip(shifts).map(|(&xi, &s)| xi - s).collect();
            let value =
                scale * z.iter().zip(exponents).map(|(&zi, &a)| zi.powf(a)).product::<f64>();
            Ok(power_product_bundle(value, &z, exponents, x))
        }
        FunctionSpec::Ces { scale, weights, rho, degree } => {
            let r = *rho;
            let k = *degree;
            let s: f64 = c.iter().zip(weights).map(|(&xi, &d)| d * xi.powf(r)).sum();
            let value = scale * s.powf(k / r);
            let mut gradient = vec![0.0; n];
            let mut hessian = Matrix::zeros(n, n);
            for i in 0..n {
                gradient[i] = scale * k * s.powf(k / r - 1.0) * weights[i] * c[i].powf(r - 1.0);
            }
            for i in 0..n {
                for j in 0..n {
                    let mut v = scale
                        * k
                        * (k - r)
                        * s.powf(k / r - 2.0)
                        * weights[i]
                        * weights[j]
                        * (c[i] * c[j]).powf(r - 1.0);
                    if i == j {
                        v += scale
                            * k
                            * (r - 1.0)
                            * s.powf(k / r - 1.0)
                            * weights[i]
                            * c[i].powf(r - 2.0);
                    }
                    hessian.set(i, j, v);
                }
            }
            Ok(DiffBundle { value, gradient, hessian, point: x.clone() })
        }
        FunctionSpec::Quadratic { linear, quadratic } => {
            let b = Matrix::from_rows(quadratic)?;
            let bx = b.matvec(c)?;
            let value = linear.iter().zip(c).map(|(&a, &xi)| a * xi).sum::<f64>()
                - 0.5 * c.iter().zip(&bx).map(|(&xi, &bi)| xi * bi).sum::<f64>();
            let gradient: Vec<f64> = linear.iter().zip(&bx).map(|(&a, &bi)| a - bi).collect();
            let mut hessian = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    hessian.set(i, j, -b.get(i, j));
                }
            }
            Ok(DiffBundle { value, gradient, hessian, point: x.clone() })
        }
        FunctionSpec::NestedMin {} => Err(EsError::NotDifferentiable(
            "nested_min is not C2 at any point; see nested_min_branch for branch data".into(),
        )),
        FunctionSpec::Homothetic { inner, outer } => {
            let ib = differentiate(inner, x)?;
            let (value, g1, g2) = outer.eval(ib.value);
            let gradient: Vec<f64> = ib.gradient.iter().map(|&hi| g1 * hi).collect();
            let mut hessian = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    hessian.set(
                        i,
                        j,
                        g2 * ib.gradient[i] * ib.gradient[j] + g1 * ib.hessian.get(i, j),
                    );
                }
            }
            Ok(DiffBundle { value, gradient, hessian, point: x.clone() })
        }
    }
}

/// Shared derivative structure of A·∏ zᵢ^αᵢ expressed through the value:
/// fᵢ = αᵢ f / zᵢ, fᵢⱼ = αᵢαⱼ f/(zᵢzⱼ) for i ≠ j, fᵢᵢ = αᵢ(αᵢ−1) f/zᵢ².
fn power_product_bundle(value: f64, z: &[f64], exponents: &[f64], x: &Point) -> DiffBundle {
    let n = z.len();
    let gradient: Vec<f64> = (0..n).map(|i| exponents[i] * value / z[i]).collect();
    let mut hessian = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                exponents[i] * (exponents[i] - 1.0) * value / (z[i] * z[i])
            } else {
                exponents[i] * exponents[j] * value / (z[i] * z[j])
            };
            hessian.set(i, j, v);
        }
    }
    DiffBundle { value, gradient, hessian, point: x.clone() }
}

/// Derivatives of the smooth branch of nested_min active at `x`.
///
/// Errors with `NotDifferentiable` on (a neighborhood of) the kink surface
/// x₁² = x₂x₃ where no branch is active.
pub fn nested_min_branch(x: &Point) -> Result<DiffBundle> {
    if x.dim() != 3 {
        return Err(EsError::Dimension(format!(
            "nested_min expects 3 factors, point has {}",
            x.dim()
        )));
    }
    let c = x.coords();
    let g = (c[1] * c[2]).sqrt();
    if (c[0] - g).abs() <= 1e-9 * c[0].max(g) {
        return Err(EsError::NotDifferentiable(format!(
            "point lies on the kink surface x1^2 = x2*x3 (x1 = {}, sqrt(x2*x3) = {g})",
            c[0]
        )));
    }
    if c[0] < g {
        // f = x1
        Ok(DiffBundle {
            value: c[0],
            gradient: vec![1.0, 0.0, 0.0],
            hessian: Matrix::zeros(3, 3),
            point: x.clone(),
        })
    } else {
        // f = sqrt(x2*x3)
        let mut hessian = Matrix::zeros(3, 3);
        hessian.set(1, 1, -g / (4.0 * c[1] * c[1]));
        hessian.set(2, 2, -g / (4.0 * c[2] * c[2]));
        hessian.set(1, 2, 1.0 / (4.0 * g));
        hessian.set(2, 1, 1.0 / (4.0 * g));
        Ok(DiffBundle {
            value: g,
            gradient: vec![0.0, g / (2.0 * c[1]), g / (2.0 * c[2])],
            hessian,
            point: x.clone(),
        })
    }
}
