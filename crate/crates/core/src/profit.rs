//! Profit-maximization dual: π(p, p_y) = max { p_y·f(x) − p·x }, the
//! Hotelling–Lau elasticity, and the gross Morishima elasticity. These are
//! the gross (output-adjusting) counterparts of the cost-side measures.

use serde::Serialize;

use crate::duality::SolverTrace;
use crate::error::{EsError, Result};
use crate::linalg::Matrix;
use crate::point::Point;
use crate::prodfn::{differentiate, homogeneity_degree, DiffBundle, FunctionSpec};

const MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;
const POST_TOL: f64 = 1e-10;

/// Maximizer and derivatives of the profit function at (p, p_y).
#[derive(Clone, Debug)]
pub struct ProfitSolution {
    pub x_star: Point,
    /// π = p_y·f(x*) − p·x*.
    pub profit: f64,
    /// (n+1)-vector (∂π/∂p₁..∂π/∂pₙ, ∂π/∂p_y) = (−x*, f(x*)).
    pub grad: Vec<f64>,
    /// πᵢⱼ = −∂xᵢ/∂pⱼ = −[(p_y·H_f)⁻¹]ᵢⱼ.
    pub hess_pp: Matrix,
    pub prices: Vec<f64>,
    pub output_price: f64,
    /// f(x*): the profit-maximizing output level.
    pub output: f64,
    pub trace: SolverTrace,
}

impl ProfitSolution {
    pub fn dim(&self) -> usize {
        self.prices.len()
    }

    fn check_factor_pair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n {
            return Err(EsError::Index(format!(
                "factor pair ({i}, {j}) out of range for {n} factors"
            )));
        }
        Ok(())
    }

    /// πᵢ = −xᵢ*, erroring when the net supply is numerically zero.
    fn pi_i(&self, i: usize) -> Result<f64> {
        let v = -self.x_star.get(i);
        if !v.is_finite() || v.abs() <= f64::MIN_POSITIVE {
            return Err(EsError::ZeroNetSupply(i));
        }
        Ok(v)
    }
}

/// Serializable view of a profit solution for report output.
#[derive(Serialize)]
pub struct ProfitReport<'a> {
    pub x_star: &'a [f64],
    pub profit: f64,
    pub grad: &'a [f64],
    pub hess_pp: Vec<Vec<f64>>,
    pub output: f64,
}

impl ProfitSolution {
    pub fn report(&self) -> ProfitReport<'_> {
        ProfitReport {
            x_star: self.x_star.coords(),
            profit: self.profit,
            grad: &self.grad,
            hess_pp: self.hess_pp.to_rows(),
            output: self.output,
        }
    }
}

fn domain_base(spec: &FunctionSpec) -> Vec<f64> {
    match spec {
        FunctionSpec::ShiftedCobbDouglas { shifts, .. } => shifts.clone(),
        _ => vec![0.0; spec.dim()],
    }
}

/// Maximize p_y·f(x) − p·x by Newton on the stationarity system
/// p_y·∇f(x) = p.
///
/// Specs that are homogeneous of degree k ≥ 1 are refused as `Unbounded`:
/// for them the maximum either does not exist or is a degenerate zero on a
/// measure-zero price set, so returning a point would be misleading.
pub fn solve_profit_max(
    spec: &FunctionSpec,
    prices: &[f64],
    output_price: f64,
    init: Option<&Point>,
) -> Result<ProfitSolution> {
    spec.validate()?;
    let n = spec.dim();
    if prices.len() != n {
        return Err(EsError::Dimension(format!(
            "{} expects {n} factors, got {} prices",
            spec.family_name(),
            prices.len()
        )));
    }
    if prices.iter().any(|&p| !p.is_finite() || p <= 0.0) {
        return Err(EsError::Domain("all input prices must be finite and > 0".into()));
    }
    if !output_price.is_finite() || output_price <= 0.0 {
        return Err(EsError::Domain(format!(
            "output price must be > 0, got {output_price}"
        )));
    }

    let base = domain_base(spec);
    let x0 = match init {
        Some(p) => p.clone(),
        None => Point::new(base.iter().map(|&b| b + 1.0).collect())?,
    };

    // degree >= 1 makes the problem degenerate
    match homogeneity_degree(spec, &x0) {
        Ok(Some(k)) if k >= 1.0 - 1e-9 => {
            return Err(EsError::Unbounded(format!(
                "spec is homogeneous of degree {k:.6}; profit is unbounded or degenerate"
            )));
        }
        Ok(_) => {}
        Err(EsError::Domain(_)) => {} // probe ray leaves the domain: certainly not homogeneous
        Err(e) => return Err(e),
    }

    let p_scale = prices.iter().fold(0.0_f64, |a, &p| a.max(p)).max(output_price).max(1.0);
    let rnorm = |d: &DiffBundle| -> f64 {
        prices
            .iter()
            .zip(&d.gradient)
            .map(|(&p, &fi)| (output_price * fi - p).abs())
            .fold(0.0_f64, f64::max)
            / p_scale
    };

    let mut bundle = differentiate(spec, &x0)?;
    let mut trace = SolverTrace::default();
    let mut converged = false;
    for iter in 0..MAX_ITER {
        let r = rnorm(&bundle);
        trace.iterations = iter;
        trace.residual_norms.push(r);
        if r <= NEWTON_TOL {
            converged = true;
            break;
        }
        let mut jac = Matrix::zeros(n, n);
        let mut rhs = Matrix::zeros(n, 1);
        for (i, &p) in prices.iter().enumerate() {
            rhs.set(i, 0, -(output_price * bundle.gradient[i] - p));
            for j in 0..n {
                jac.set(i, j, output_price * bundle.hessian.get(i, j));
            }
        }
        let delta = jac
            .solve(&rhs)
            .map_err(|_| EsError::NoConvergence("singular Hessian at iterate".into()))?;

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let coords: Vec<f64> =
                (0..n).map(|i| bundle.point.get(i) + step * delta.get(i, 0)).collect();
            let cand = Point::new(coords).ok().and_then(|p| differentiate(spec, &p).ok());
            if let Some(d_new) = cand {
                if rnorm(&d_new) <= (1.0 - 1e-4 * step) * r {
                    accepted = Some(d_new);
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some(d) => bundle = d,
            None => {
                return Err(EsError::NoConvergence(format!(
                    "profit line search failed at iteration {iter} with residual {r:.3e}"
                )))
            }
        }
    }
    if !converged && rnorm(&bundle) > POST_TOL {
        return Err(EsError::NoConvergence(format!(
            "no convergence within {MAX_ITER} iterations; residual {:.3e}",
            rnorm(&bundle)
        )));
    }

    // second-order condition: p_y * H_f negative definite at the solution
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, output_price * bundle.hessian.get(i, j));
        }
    }
    for k in 1..=n {
        let mut sub = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                sub.set(i, j, a.get(i, j));
            }
        }
        let want_sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        if sub.det() * want_sign <= 0.0 {
            return Err(EsError::NotConcaveAtSolution);
        }
    }

    // π_ij = -dx_i/dp_j = -[A^{-1}]_ij, from the implicit-function formula
    let a_inv = a.inverse()?;
    let mut hess_pp = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            hess_pp.set(i, j, -a_inv.get(i, j));
        }
    }

    let x_star = bundle.point.clone();
    let revenue = output_price * bundle.value;
    let outlay: f64 = prices.iter().zip(x_star.coords()).map(|(&p, &x)| p * x).sum();
    let mut grad: Vec<f64> = x_star.coords().iter().map(|&x| -x).collect();
    grad.push(bundle.value);
    Ok(ProfitSolution {
        x_star,
        profit: revenue - outlay,
        grad,
        hess_pp,
        prices: prices.to_vec(),
        output_price,
        output: bundle.value,
        trace,
    })
}

/// Hotelling–Lau elasticity σᴴᴸᵢⱼ = −π·πᵢⱼ / (πᵢπⱼ), with πᵢ = −xᵢ*.
pub fn hles(psol: &ProfitSolution, i: usize, j: usize) -> Result<f64> {
    psol.check_factor_pair(i, j)?;
    let pi_i = psol.pi_i(i)?;
    let pi_j = psol.pi_i(j)?;
    Ok(-psol.profit * psol.hess_pp.get(i, j) / (pi_i * pi_j))
}

/// Gross Morishima elasticity σᴹᴳᵢⱼ = pᵢ·(πᵢⱼ/πⱼ − πᵢᵢ/πᵢ).
pub fn mges(psol: &ProfitSolution, i: usize, j: usize) -> Result<f64> {
    psol.check_factor_pair(i, j)?;
    let pi_i = psol.pi_i(i)?;
    let pi_j = psol.pi_i(j)?;
    Ok(psol.prices[i] * (psol.hess_pp.get(i, j) / pi_j - psol.hess_pp.get(i, i) / pi_i))
}
