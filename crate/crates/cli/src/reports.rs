//! Report payloads and their JSON / CSV / text renderings.

use escalc_core::duality::{CostSolution, SolverTrace};
use escalc_core::profit::ProfitSolution;
use escalc_core::{DiffBundle, ElasticityReport};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
pub struct EvalReport {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Serialize)]
pub struct BundleReport {
    pub point: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    /// Largest gradient deviation from the central-difference oracle.
    pub fd_gradient_dev: f64,
    /// Largest Hessian entry deviation from the central-difference oracle.
    pub fd_hessian_dev: f64,
}

impl BundleReport {
    pub fn new(analytic: &DiffBundle, fd: &DiffBundle) -> Self {
        let n = analytic.dim();
        let fd_gradient_dev = analytic
            .gradient
            .iter()
            .zip(&fd.gradient)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        let mut fd_hessian_dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                fd_hessian_dev =
                    fd_hessian_dev.max((analytic.hessian.get(i, j) - fd.hessian.get(i, j)).abs());
            }
        }
        BundleReport {
            point: analytic.point.coords().to_vec(),
            value: analytic.value,
            gradient: analytic.gradient.clone(),
            hessian: analytic.hessian.to_rows(),
            fd_gradient_dev,
            fd_hessian_dev,
        }
    }
}

#[derive(Serialize)]
pub struct CostReport {
    pub prices: Vec<f64>,
    pub output: f64,
    pub x_star: Vec<f64>,
    pub lambda_star: f64,
    pub cost: f64,
    pub grad_p: Vec<f64>,
    pub dc_dy: f64,
    pub hess_pp: Vec<Vec<f64>>,
    pub minor_alternation: Option<bool>,
    pub trace: SolverTrace,
}

impl From<&CostSolution> for CostReport {
    fn from(sol: &CostSolution) -> Self {
        CostReport {
            prices: sol.prices.clone(),
            output: sol.output,
            x_star: sol.x_star.coords().to_vec(),
            lambda_star: sol.lambda_star,
            cost: sol.cost,
            grad_p: sol.grad_p.clone(),
            dc_dy: sol.dc_dy,
            hess_pp: sol.hess_pp.to_rows(),
            minor_alternation: sol.minor_alternation,
            trace: sol.trace.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct ProfitCommandReport {
    pub prices: Vec<f64>,
    pub output_price: f64,
    pub x_star: Vec<f64>,
    pub profit: f64,
    pub output: f64,
    pub grad: Vec<f64>,
    pub hess_pp: Vec<Vec<f64>>,
    pub hles: ElasticityReport,
    pub mges: ElasticityReport,
    pub trace: SolverTrace,
}

impl ProfitCommandReport {
    pub fn new(sol: &ProfitSolution, hles: ElasticityReport, mges: ElasticityReport) -> Self {
        ProfitCommandReport {
            prices: sol.prices.clone(),
            output_price: sol.output_price,
            x_star: sol.x_star.coords().to_vec(),
            profit: sol.profit,
            output: sol.output,
            grad: sol.grad.clone(),
            hess_pp: sol.hess_pp.to_rows(),
            hles,
            mges,
            trace: sol.trace.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyPoint {
    pub point: Vec<f64>,
    pub max_rel_deviation: f64,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
    pub max_rel_deviation: f64,
    pub pass: bool,
    pub per_point: Vec<VerifyPoint>,
}

/// Everything a command can print. Point-wise commands hold one entry per
/// input point, ordered by input index.
pub enum Payload {
    Eval(Vec<EvalReport>),
    Bundle(Vec<BundleReport>),
    Elasticities(Vec<ElasticityReport>),
    Cost(CostReport),
    Profit(ProfitCommandReport),
    Verify(VerifyReport),
    Casebook(crate::casebook::CasebookReport),
}

/// Serialize directly from the report structs so JSON keys keep their
/// declaration order (a detour through `serde_json::Value` would sort them).
fn one_or_all<T: Serialize>(items: &[T]) -> String {
    if items.len() == 1 {
        serde_json::to_string_pretty(&items[0])
    } else {
        serde_json::to_string_pretty(items)
    }
    .expect("report serialization cannot fail")
}

pub fn render(payload: &Payload, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(to_json(payload)),
        Format::Csv => to_csv(payload),
        Format::Text => Ok(to_text(payload)),
    }
}

fn to_json(payload: &Payload) -> String {
    fn pretty<T: Serialize>(r: &T) -> String {
        serde_json::to_string_pretty(r).expect("report serialization cannot fail")
    }
    match payload {
        Payload::Eval(r) => one_or_all(r),
        Payload::Bundle(r) => one_or_all(r),
        Payload::Elasticities(r) => one_or_all(r),
        Payload::Cost(r) => pretty(r),
        Payload::Profit(r) => pretty(r),
        Payload::Verify(r) => pretty(r),
        Payload::Casebook(r) => pretty(r),
    }
}

/// One row per (i, j) with columns measure,i,j,value; factor indices are
/// 1-based to match the usual sigma_ij notation.
fn to_csv(payload: &Payload) -> Result<String, CliError> {
    let mut lines = vec!["measure,i,j,value".to_string()];
    let mut push_report = |rep: &ElasticityReport| {
        match (&rep.matrix(), rep.scalar()) {
            (Some(m), _) => {
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        lines.push(format!("{},{},{},{}", rep.measure.label(), i + 1, j + 1, v));
                    }
                }
            }
            (None, Some(v)) => lines.push(format!("{},1,2,{}", rep.measure.label(), v)),
            _ => {}
        }
    };
    match payload {
        Payload::Elasticities(reps) => {
            for rep in reps {
                push_report(rep);
            }
        }
        Payload::Profit(rep) => {
            push_report(&rep.hles);
            push_report(&rep.mges);
        }
        Payload::Eval(reports) => {
            let mut out = vec!["value".to_string()];
            out.extend(reports.iter().map(|r| r.value.to_string()));
            out.push(String::new());
            return Ok(out.join("\n"));
        }
        _ => {
            return Err(CliError::Config(
                "csv output is only defined for elasticity reports; use --format json or text"
                    .into(),
            ))
        }
    }
    lines.push(String::new());
    Ok(lines.join("\n"))
}

pub fn format_nested(m: &[Vec<f64>]) -> String {
    let cells: Vec<Vec<String>> =
        m.iter().map(|row| row.iter().map(|v| format!("{v:.6}")).collect()).collect();
    let width = cells.iter().flat_map(|r| r.iter().map(|s| s.len())).max().unwrap_or(0);
    cells
        .iter()
        .map(|r| {
            let row =
                r.iter().map(|s| format!("{s:>width$}")).collect::<Vec<_>>().join("  ");
            format!("[ {row} ]")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn elasticity_text(rep: &ElasticityReport) -> String {
    let mut out = format!("{} at point {:?}\n", rep.measure.label(), rep.point);
    match (rep.matrix(), rep.scalar()) {
        (Some(m), _) => {
            out.push_str(&format_nested(m));
            out.push('\n');
        }
        (None, Some(v)) => out.push_str(&format!("value = {v}\n")),
        _ => {}
    }
    for d in &rep.diagnostics {
        out.push_str(&format!("note: {d}\n"));
    }
    out
}

fn to_text(payload: &Payload) -> String {
    match payload {
        Payload::Eval(reports) => reports
            .iter()
            .map(|r| format!("f({:?}) = {}\n", r.point, r.value))
            .collect(),
        Payload::Bundle(reports) => reports
            .iter()
            .map(|r| {
                let mut out = format!(
                    "point    = {:?}\nvalue    = {}\ngradient = {:?}\nhessian  =\n",
                    r.point, r.value, r.gradient
                );
                out.push_str(&format_nested(&r.hessian));
                out.push_str(&format!(
                    "\nfd check: max gradient dev {:.3e}, max hessian dev {:.3e}\n",
                    r.fd_gradient_dev, r.fd_hessian_dev
                ));
                out
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Payload::Elasticities(reps) => {
            reps.iter().map(elasticity_text).collect::<Vec<_>>().join("\n")
        }
        Payload::Cost(r) => {
            let mut out = String::new();
            out.push_str(&format!("prices   = {:?}, output = {}\n", r.prices, r.output));
            out.push_str(&format!("x*       = {:?}\n", r.x_star));
            out.push_str(&format!("lambda*  = {}\n", r.lambda_star));
            out.push_str(&format!("cost     = {}\n", r.cost));
            out.push_str(&format!("dC/dy    = {}\n", r.dc_dy));
            out.push_str("C_ij (dx_i/dp_j) =\n");
            out.push_str(&format_nested(&r.hess_pp));
            out.push('\n');
            if let Some(alt) = r.minor_alternation {
                out.push_str(&format!("minor alternation: {alt}\n"));
            }
            out.push_str(&format!("iterations: {}\n", r.trace.iterations));
            for n in &r.trace.notes {
                out.push_str(&format!("note: {n}\n"));
            }
            out
        }
        Payload::Profit(r) => {
            let mut out = String::new();
            out.push_str(&format!(
                "prices   = {:?}, output price = {}\n",
                r.prices, r.output_price
            ));
            out.push_str(&format!("x*       = {:?}\n", r.x_star));
            out.push_str(&format!("profit   = {}\n", r.profit));
            out.push_str(&format!("output   = {}\n", r.output));
            out.push_str("pi_ij =\n");
            out.push_str(&format_nested(&r.hess_pp));
            out.push('\n');
            out.push_str(&elasticity_text(&r.hles));
            out.push_str(&elasticity_text(&r.mges));
            out
        }
        Payload::Verify(r) => {
            let mut out = format!(
                "verify-uzawa: family {}, {} points, seed {}\n",
                r.family, r.points, r.seed
            );
            for p in &r.per_point {
                out.push_str(&format!(
                    "point {:?}: max rel deviation {:.3e}\n",
                    p.point, p.max_rel_deviation
                ));
            }
            out.push_str(&format!(
                "max relative deviation {:.3e} vs tolerance {:.1e}: {}\n",
                r.max_rel_deviation,
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            ));
            out
        }
        Payload::Casebook(r) => r.to_text(),
    }
}
