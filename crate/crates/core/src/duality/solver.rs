//! Newton solver for the critical-point system {pᵢ + λfᵢ = 0, f(x) = y} and
//! the implicit-function sensitivities around a solution.

use crate::bmatrix::{bordered_hessian, cofactor, determinant, leading_principal_minors};
use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;
use crate::prodfn::{differentiate, evaluate, DiffBundle, FunctionSpec};

use super::{CostSolution, PriceOutput, SolverTrace};

const MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;
const POST_TOL: f64 = 1e-10;

/// Scaled ∞-norm of the critical-point residual.
fn residual_norm(d: &DiffBundle, lambda: f64, prices: &[f64], output: f64) -> f64 {
    let p_scale = prices.iter().fold(0.0_f64, |acc, &p| acc.max(p.abs())).max(1.0);
    let y_scale = output.abs().max(1.0);
    let foc = prices
        .iter()
        .zip(&d.gradient)
        .map(|(&p, &fi)| (p + lambda * fi).abs())
        .fold(0.0_f64, f64::max);
    ((d.value - output).abs() / y_scale).max(foc / p_scale)
}

/// [[0, ∇fᵀ], [∇f, λH_f]] — the Jacobian of the critical-point system in
/// (λ, x), symmetric.
fn q_matrix(d: &DiffBundle, lambda: f64) -> Matrix {
    let n = d.dim();
    let mut q = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        q.set(0, i + 1, d.gradient[i]);
        q.set(i + 1, 0, d.gradient[i]);
        for j in 0..n {
            q.set(i + 1, j + 1, lambda * d.hessian.get(i, j));
        }
    }
    q
}

/// Shift vector of the spec domain: xᵢ must stay above baseᵢ (zero except
/// for shifted Cobb-Douglas).
fn domain_base(spec: &FunctionSpec) -> Vec<f64> {
    match spec {
        FunctionSpec::ShiftedCobbDouglas { shifts, .. } => shifts.clone(),
        _ => vec![0.0; spec.dim()],
    }
}

/// Find t > 0 with f(base + t·dir) = y by bracketing on a log grid and
/// bisecting. Returns the point; errors with NoConvergence when no bracket
/// on the ray contains the output level.
fn point_on_ray_at_level(
    spec: &FunctionSpec,
    base: &[f64],
    dir: &[f64],
    y: f64,
) -> Result<Point> {
    let at = |t: f64| -> Option<f64> {
        let coords: Vec<f64> =
            base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect();
        let p = Point::new(coords).ok()?;
        evaluate(spec, &p).ok()
    };
    let grid: Vec<f64> = (-40..=40).map(|k| 2f64.powi(k)).collect();
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for &t in &grid {
        if let Some(f) = at(t) {
            if (f - y).abs() <= 1e-13 * y.abs().max(1.0) {
                bracket = Some((t, t));
                break;
            }
            if let Some((t0, f0)) = prev {
                if (f0 - y) * (f - y) < 0.0 {
                    bracket = Some((t0, t));
                    break;
                }
            }
            prev = Some((t, f));
        } else {
            prev = None;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        EsError::NoConvergence(format!(
            "could not bracket output level {y} on the initialization ray"
        ))
    })?;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = at(mid).ok_or_else(|| {
            EsError::NoConvergence("initialization ray left the domain while bisecting".into())
        })?;
        let flo = at(lo).unwrap_or(f64::NAN);
        if (flo - y) * (fm - y) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Point::new(base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect())
}

/// Default initialization rays, tried in order: the all-ones direction, the
/// cost-efficient direction 1/pᵢ, and the price direction itself.
fn initial_points(spec: &FunctionSpec, po: &PriceOutput) -> Vec<Point> {
    let base = domain_base(spec);
    let n = po.dim();
    let dirs: Vec<Vec<f64>> = vec![
        vec![1.0; n],
        po.prices().iter().map(|&p| 1.0 / p).collect(),
        po.prices().to_vec(),
    ];
    dirs.iter()
        .filter_map(|d| point_on_ray_at_level(spec, &base, d, po.output()).ok())
        .collect()
}

/// Newton's method on the critical-point system, starting at `x0`.
fn newton_from(
    spec: &FunctionSpec,
    po: &PriceOutput,
    x0: Point,
) -> Result<(DiffBundle, f64, SolverTrace)> {
    let d0 = differentiate(spec, &x0)?;
    let f1 = d0.gradient[0];
    let mut lambda = if f1.is_finite() && f1.abs() > f64::MIN_POSITIVE {
        -po.prices()[0] / f1
    } else {
        -1.0
    };
    let mut bundle = d0;
    let mut trace = SolverTrace::default();

    for iter in 0..MAX_ITER {
        let rnorm = residual_norm(&bundle, lambda, po.prices(), po.output());
        trace.iterations = iter;
        trace.residual_norms.push(rnorm);
        if rnorm <= NEWTON_TOL {
            return Ok((bundle, lambda, trace));
        }

        let q = q_matrix(&bundle, lambda);
        let mut rhs = Matrix::zeros(bundle.dim() + 1, 1);
        rhs.set(0, 0, -(bundle.value - po.output()));
        for i in 0..bundle.dim() {
            rhs.set(i + 1, 0, -(po.prices()[i] + lambda * bundle.gradient[i]));
        }
        let delta = q.solve(&rhs)?;

        // damped step with positivity/domain guard
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let lam_new = lambda + step * delta.get(0, 0);
            let coords: Vec<f64> = (0..bundle.dim())
                .map(|i| bundle.point.get(i) + step * delta.get(i + 1, 0))
                .collect();
            let candidate = Point::new(coords).ok().and_then(|p| {
                match differentiate(spec, &p) {
                    Ok(d) => Some(d),
                    Err(EsError::Domain(_)) => None,
                    Err(_) => None,
                }
            });
            if let Some(d_new) = candidate {
                let r_new = residual_norm(&d_new, lam_new, po.prices(), po.output());
                if r_new <= (1.0 - 1e-4 * step) * rnorm {
                    accepted = Some((d_new, lam_new));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((d_new, lam_new)) => {
                bundle = d_new;
                lambda = lam_new;
            }
            None => {
                return Err(EsError::NoConvergence(format!(
                    "line search failed at iteration {iter} with residual {rnorm:.3e}"
                )))
            }
        }
    }
    Err(EsError::NoConvergence(format!(
        "no convergence within {MAX_ITER} iterations; last residual {:.3e}",
        trace.residual_norms.last().copied().unwrap_or(f64::NAN)
    )))
}

/// Solve the cost-minimization critical-point system at (p, y).
///
/// Initialization follows the ray construction (bisection of f(t·1) = y on
/// the all-ones ray, with two fallback rays); pass `init` to override. All
/// sensitivity fields are populated from the Q-matrix solve; the
/// second-order minor-alternation check is advisory and recorded on the
/// solution rather than raised as an error.
pub fn solve_cost_min(
    spec: &FunctionSpec,
    po: &PriceOutput,
    init: Option<&Point>,
) -> Result<CostSolution> {
    spec.validate()?;
    if spec.dim() != po.dim() {
        return Err(EsError::Dimension(format!(
            "{} expects {} factors, got {} prices",
            spec.family_name(),
            spec.dim(),
            po.dim()
        )));
    }

    let starts: Vec<Point> = match init {
        Some(p) => vec![p.clone()],
        None => {
            let pts = initial_points(spec, po);
            if pts.is_empty() {
                return Err(EsError::NoConvergence(format!(
                    "output level {} could not be bracketed on any initialization ray",
                    po.output()
                )));
            }
            pts
        }
    };

    let mut last_err = None;
    for x0 in starts {
        match newton_from(spec, po, x0) {
            Ok((bundle, lambda, mut trace)) => {
                // post-conditions before sensitivities
                let rnorm = residual_norm(&bundle, lambda, po.prices(), po.output());
                if rnorm > POST_TOL {
                    last_err = Some(EsError::NoConvergence(format!(
                        "residual {rnorm:.3e} above {POST_TOL:.0e} after Newton"
                    )));
                    continue;
                }
                return assemble_solution(po, bundle, lambda, &mut trace);
            }
            Err(e @ EsError::NotDifferentiable(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| EsError::NoConvergence("no starting point worked".into())))
}

fn assemble_solution(
    po: &PriceOutput,
    bundle: DiffBundle,
    lambda: f64,
    trace: &mut SolverTrace,
) -> Result<CostSolution> {
    let n = bundle.dim();
    let q = q_matrix(&bundle, lambda);

    // det Q = λ^(n-1) F, recorded per solve
    let b = bordered_hessian(&bundle);
    let det_f = determinant(&b);
    let det_q = q.det();
    let det_q_predicted = lambda.powi(n as i32 - 1) * det_f;
    trace.notes.push(format!(
        "det Q = {det_q:.6e}, lambda^(n-1) * F = {det_q_predicted:.6e}"
    ));

    let jac = sensitivity_from_q(&q, n)?;
    let mut hess_pp = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            hess_pp.set(i, j, jac.get(i + 1, j));
        }
    }

    let minors = leading_principal_minors(&b)?;
    if !minors.sign_alternates {
        trace.notes.push(
            "second-order check: leading principal minors do not alternate; \
             critical point is not certified a minimum"
                .into(),
        );
    }

    let x_star = bundle.point.clone();
    let cost: f64 =
        po.prices().iter().zip(x_star.coords()).map(|(&p, &x)| p * x).sum();
    Ok(CostSolution {
        grad_p: x_star.coords().to_vec(),
        x_star,
        lambda_star: lambda,
        cost,
        dc_dy: -lambda,
        hess_pp,
        q: Some(q),
        bundle: Some(bundle),
        prices: po.prices().to_vec(),
        output: po.output(),
        minor_alternation: Some(minors.sign_alternates),
        trace: trace.clone(),
    })
}

/// −Q⁻¹·[[0, −1], [E, 0]]: the (n+1)×(n+1) Jacobian of (λ, x) in (p, y).
/// Row 0 holds ∂λ/∂(p, y); rows 1..=n hold ∂x/∂(p, y).
fn sensitivity_from_q(q: &Matrix, n: usize) -> Result<Matrix> {
    let mut rhs = Matrix::zeros(n + 1, n + 1);
    rhs.set(0, n, -1.0);
    for i in 0..n {
        rhs.set(i + 1, i, 1.0);
    }
    let x = q.solve(&rhs)?;
    let mut jac = Matrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            jac.set(i, j, -x.get(i, j));
        }
    }
    Ok(jac)
}

/// Jacobian of (λ, x) in (p, y) at a solved cost minimum.
///
/// Uses the stored Q matrix when present; otherwise rebuilds it from the
/// spec at x*, which fails with `NotDifferentiable` for the closed-form
/// solutions whose primal is non-smooth.
pub fn sensitivity(spec: &FunctionSpec, sol: &CostSolution) -> Result<Matrix> {
    let n = sol.dim();
    match &sol.q {
        Some(q) => sensitivity_from_q(q, n),
        None => {
            let bundle = differentiate(spec, &sol.x_star)?;
            let q = q_matrix(&bundle, sol.lambda_star);
            sensitivity_from_q(&q, n)
        }
    }
}

/// ∂xᵢ/∂pⱼ by the cofactor formula −Fᵢⱼ/(λF), computed from the bordered
/// Hessian of the production function at x*.
pub fn dx_dp_cofactor(sol: &CostSolution, i: usize, j: usize) -> Result<f64> {
    sol.check_factor_pair(i, j)?;
    let bundle = sol.bundle.as_ref().ok_or_else(|| {
        EsError::NotDifferentiable(
            "cofactor sensitivity needs a smooth primal bundle at x*".into(),
        )
    })?;
    let b = bordered_hessian(bundle);
    let det_f = determinant(&b);
    let threshold = b.singularity_threshold();
    if det_f.abs() <= threshold {
        return Err(EsError::SingularBorderedHessian(format!(
            "|F| = {:.3e} at or below threshold {:.3e}",
            det_f.abs(),
            threshold
        )));
    }
    let fij = cofactor(&b, i + 1, j + 1)?;
    Ok(-fij / (sol.lambda_star * det_f))
}
