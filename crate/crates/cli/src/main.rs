//! `escalc`: substitution-elasticity computations for production-function
//! specs, with JSON/CSV/text reports and the counterexample casebook.

mod casebook;
mod reports;
mod sampling;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use escalc_core::duality::{
    hes_cost, mes, mes_alt, price_elasticity, solve_cost_min, uzawa_aes, CostSolution,
    PriceOutput,
};
use escalc_core::elasticity::{aes_matrix, hes_determinant};
use escalc_core::prodfn::{differentiate, evaluate, fd_differentiate};
use escalc_core::profit::{hles, mges, solve_profit_max, ProfitSolution};
use escalc_core::{ElasticityReport, EsError, FunctionSpec, Measure, Point, ReportValues};
use reports::{BundleReport, CostReport, EvalReport, Format, Payload, ProfitCommandReport};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Module(EsError),
}

impl CliError {
    fn code(&self) -> &str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Module(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => m.clone(),
            CliError::Module(e) => e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Module(_) => 1,
        }
    }
}

impl From<EsError> for CliError {
    fn from(e: EsError) -> Self {
        CliError::Module(e)
    }
}

#[derive(Parser)]
#[command(
    name = "escalc",
    version,
    about = "Elasticities of substitution for production functions: \
             Allen/Hicks primal forms, cost-function (Uzawa) and Morishima \
             measures, profit-side gross measures, and the counterexample casebook"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Seed for sampled reports; ESCALC_SEED overrides the default 42.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f at one or more points.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated coordinates; repeat for several points.
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Analytic gradient and Hessian, with the finite-difference cross-check.
    Diff {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Allen elasticity matrix from bordered-Hessian cofactors.
    Aes {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Two-factor Hicks elasticity (determinant form).
    Hes {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Solve the cost-minimization problem and report all derivatives.
    Cost {
        #[command(flatten)]
        inputs: CostInputs,
    },
    /// Allen elasticities in the Uzawa (cost-function) form.
    Uzawa {
        #[command(flatten)]
        inputs: CostInputs,
    },
    /// Morishima elasticities (both readings) and the price elasticities.
    Mes {
        #[command(flatten)]
        inputs: CostInputs,
    },
    /// Solve the profit-maximization problem; reports HLES and MGES.
    Profit {
        #[arg(long, required_unless_present = "problem", conflicts_with = "problem")]
        spec: Option<PathBuf>,
        #[arg(long, required_unless_present = "problem", conflicts_with = "problem")]
        prices: Option<String>,
        #[arg(
            long = "output-price",
            required_unless_present = "problem",
            conflicts_with = "problem"
        )]
        output_price: Option<f64>,
        #[arg(long, conflicts_with = "problem")]
        init: Option<String>,
        /// Problem envelope JSON with keys spec, prices, output_price, init.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Check the Uzawa form against the primal Allen matrix on sampled points.
    VerifyUzawa {
        #[arg(long)]
        spec: PathBuf,
        /// Number of sampled points.
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// PASS threshold on the max relative deviation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Emit a scripted casebook report (available: blackorby1989).
    Casebook { case: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(payload) => match reports::render(&payload, format) {
            Ok(text) => {
                println!("{text}");
                match &payload {
                    Payload::Verify(r) if !r.pass => ExitCode::FAILURE,
                    _ => ExitCode::SUCCESS,
                }
            }
            Err(e) => emit_error(&e),
        },
        Err(e) => emit_error(&e),
    }
}

fn emit_error(e: &CliError) -> ExitCode {
    let obj = serde_json::json!({
        "error": { "code": e.code(), "message": e.message() }
    });
    println!("{}", serde_json::to_string_pretty(&obj).expect("error serialization"));
    ExitCode::from(e.exit_code())
}

fn load_spec(path: &PathBuf) -> Result<FunctionSpec, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    FunctionSpec::from_json_str(&raw)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parse_vector(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("cannot parse number {s:?} in {raw:?}")))
        })
        .collect()
}

fn parse_point(raw: &str) -> Result<Point, CliError> {
    Ok(Point::new(parse_vector(raw)?)?)
}

fn parse_init(raw: &Option<String>) -> Result<Option<Point>, CliError> {
    raw.as_ref().map(|s| parse_point(s)).transpose()
}

/// Shared arguments of the cost-side commands: either individual flags or a
/// single problem-envelope JSON file.
#[derive(clap::Args)]
struct CostInputs {
    #[arg(long, required_unless_present = "problem", conflicts_with = "problem")]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "problem", conflicts_with = "problem")]
    prices: Option<String>,
    #[arg(long, required_unless_present = "problem", conflicts_with = "problem")]
    output: Option<f64>,
    /// Optional starting point for the Newton solve.
    #[arg(long, conflicts_with = "problem")]
    init: Option<String>,
    /// Problem envelope JSON with keys spec, prices, output, init.
    #[arg(long)]
    problem: Option<PathBuf>,
}

impl CostInputs {
    fn solve(&self) -> Result<(FunctionSpec, CostSolution), CliError> {
        let (spec, po, init) = match &self.problem {
            Some(path) => {
                let raw = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                let prob = escalc_core::CostProblem::from_json_str(&raw)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                let po = prob.price_output()?;
                let init = prob.init_point()?;
                (prob.spec, po, init)
            }
            None => {
                let spec = load_spec(self.spec.as_ref().expect("enforced by clap"))?;
                let po = PriceOutput::new(
                    parse_vector(self.prices.as_ref().expect("enforced by clap"))?,
                    self.output.expect("enforced by clap"),
                )?;
                (spec, po, parse_init(&self.init)?)
            }
        };
        let sol = solve_cost_min(&spec, &po, init.as_ref())?;
        Ok((spec, sol))
    }
}

/// Square matrix of a pairwise cost-side measure; the diagonal comes from
/// the same formula (it is identically zero for the Morishima readings).
fn pair_matrix(
    sol: &CostSolution,
    measure: Measure,
    f: impl Fn(&CostSolution, usize, usize) -> escalc_core::Result<f64>,
) -> Result<ElasticityReport, CliError> {
    let n = sol.dim();
    let mut values = vec![vec![0.0; n]; n];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(sol, i, j)?;
        }
    }
    Ok(ElasticityReport {
        measure,
        point: sol.prices.clone(),
        values: ReportValues::Matrix(values),
        diagnostics: vec![format!("cost-side measure at output {}", sol.output)],
    })
}

fn profit_pair_matrix(
    sol: &ProfitSolution,
    measure: Measure,
    f: impl Fn(&ProfitSolution, usize, usize) -> escalc_core::Result<f64>,
) -> Result<ElasticityReport, CliError> {
    let n = sol.dim();
    let mut values = vec![vec![0.0; n]; n];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(sol, i, j)?;
        }
    }
    Ok(ElasticityReport {
        measure,
        point: sol.prices.clone(),
        values: ReportValues::Matrix(values),
        diagnostics: vec![format!(
            "profit-side (gross) measure at output price {}",
            sol.output_price
        )],
    })
}

fn run(cli: Cli) -> Result<Payload, CliError> {
    match cli.command {
        Command::Eval { spec, points } => {
            let spec = load_spec(&spec)?;
            let mut out = Vec::new();
            for raw in &points {
                let x = parse_point(raw)?;
                let value = evaluate(&spec, &x)?;
                out.push(EvalReport { point: x.coords().to_vec(), value });
            }
            Ok(Payload::Eval(out))
        }
        Command::Diff { spec, points } => {
            let spec = load_spec(&spec)?;
            let mut out = Vec::new();
            for raw in &points {
                let x = parse_point(raw)?;
                let analytic = differentiate(&spec, &x)?;
                let fd = fd_differentiate(&spec, &x)?;
                out.push(BundleReport::new(&analytic, &fd));
            }
            Ok(Payload::Bundle(out))
        }
        Command::Aes { spec, points } => {
            let spec = load_spec(&spec)?;
            let mut out = Vec::new();
            for raw in &points {
                let x = parse_point(raw)?;
                out.push(aes_matrix(&differentiate(&spec, &x)?)?);
            }
            Ok(Payload::Elasticities(out))
        }
        Command::Hes { spec, point } => {
            let spec = load_spec(&spec)?;
            let x = parse_point(&point)?;
            let value = hes_determinant(&differentiate(&spec, &x)?)?;
            Ok(Payload::Elasticities(vec![ElasticityReport {
                measure: Measure::Hes,
                point: x.coords().to_vec(),
                values: ReportValues::Scalar(value),
                diagnostics: vec!["determinant form".into()],
            }]))
        }
        Command::Cost { inputs } => {
            let (_, sol) = inputs.solve()?;
            Ok(Payload::Cost(CostReport::from(&sol)))
        }
        Command::Uzawa { inputs } => {
            let (_, sol) = inputs.solve()?;
            Ok(Payload::Elasticities(vec![uzawa_aes(&sol)?]))
        }
        Command::Mes { inputs } => {
            let (_, sol) = inputs.solve()?;
            let mut reps = vec![
                pair_matrix(&sol, Measure::Mes, mes)?,
                pair_matrix(&sol, Measure::MesAlt, mes_alt)?,
                pair_matrix(&sol, Measure::Eps, price_elasticity)?,
            ];
            if sol.dim() == 2 {
                if let Ok(v) = hes_cost(&sol) {
                    reps.push(ElasticityReport {
                        measure: Measure::HesHom,
                        point: sol.prices.clone(),
                        values: ReportValues::Scalar(v),
                        diagnostics: vec![
                            "Hicks elasticity of the cost function (reciprocal of the primal)"
                                .into(),
                        ],
                    });
                }
            }
            Ok(Payload::Elasticities(reps))
        }
        Command::Profit { spec, prices, output_price, init, problem } => {
            let (spec, p, p_y, init) = match &problem {
                Some(path) => {
                    let raw = std::fs::read_to_string(path).map_err(|e| {
                        CliError::Config(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let prob = escalc_core::ProfitProblem::from_json_str(&raw)
                        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                    let init = prob.init_point()?;
                    (prob.spec, prob.prices, prob.output_price, init)
                }
                None => (
                    load_spec(spec.as_ref().expect("enforced by clap"))?,
                    parse_vector(prices.as_ref().expect("enforced by clap"))?,
                    output_price.expect("enforced by clap"),
                    parse_init(&init)?,
                ),
            };
            let sol = solve_profit_max(&spec, &p, p_y, init.as_ref())?;
            let hles_rep = profit_pair_matrix(&sol, Measure::Hles, hles)?;
            let mges_rep = profit_pair_matrix(&sol, Measure::Mges, mges)?;
            Ok(Payload::Profit(ProfitCommandReport::new(&sol, hles_rep, mges_rep)))
        }
        Command::VerifyUzawa { spec, points, tol } => {
            let spec = load_spec(&spec)?;
            let seed = sampling::resolve_seed(cli.seed)?;
            Ok(Payload::Verify(verify::run(&spec, points, seed, tol)?))
        }
        Command::Casebook { case } => {
            let seed = sampling::resolve_seed(cli.seed)?;
            Ok(Payload::Casebook(casebook::build(&case, seed)?))
        }
    }
}
