//! Scripted reproduction of the counterexample casebook: the
//! `min(x1, sqrt(x2*x3))` technology whose primal Allen matrix fails
//! everywhere while the closed-form cost side stays smooth.

use escalc_core::bmatrix::{bordered_hessian, determinant, multi_bordered};
use escalc_core::duality::{blackorby_cost, mes, mes_alt, uzawa_aes};
use escalc_core::elasticity::aes_matrix;
use escalc_core::prodfn::{check_smoothness, differentiate, nested_min_branch};
use escalc_core::{FunctionSpec, Matrix, Point};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::reports::format_nested;
use crate::sampling::log_uniform;
use crate::CliError;

#[derive(Serialize)]
pub struct KinkCheck {
    pub point: Vec<f64>,
    pub kink_flags: Vec<bool>,
    pub left_slopes: Vec<f64>,
    pub right_slopes: Vec<f64>,
    pub max_rel_mismatch: f64,
}

#[derive(Serialize)]
pub struct BranchCheck {
    pub point: Vec<f64>,
    pub branch: String,
    pub bordered_determinant: f64,
    pub singularity_threshold: f64,
    pub singular: bool,
}

#[derive(Serialize)]
pub struct CostIdentityCheck {
    pub prices: Vec<f64>,
    pub output: f64,
    pub cost: f64,
    /// C1^2 - C2*C3; identically zero for this cost function.
    pub identity_residual: f64,
}

#[derive(Serialize)]
pub struct TwoConstraintCheck {
    pub x2: f64,
    pub x3: f64,
    pub determinant: f64,
    pub expected: f64,
}

#[derive(Serialize)]
pub struct MorishimaPair {
    pub prices: Vec<f64>,
    pub output: f64,
    pub mes_12: f64,
    pub mes_21: f64,
    pub mes_alt_12: f64,
}

#[derive(Serialize)]
pub struct UzawaVsPrimal {
    pub prices: Vec<f64>,
    pub output: f64,
    pub uzawa_aes: Vec<Vec<f64>>,
    pub primal_point: Vec<f64>,
    pub primal_error_code: String,
    pub branch_aes_error_code: String,
}

/// The full counterexample report, in the order the argument unfolds:
/// kinks, singular branches, the smooth closed-form cost, the well-posed
/// two-constraint problem, the Morishima pair, and the Uzawa/primal split.
#[derive(Serialize)]
pub struct CasebookReport {
    pub case: String,
    pub seed: u64,
    pub kink_checks: Vec<KinkCheck>,
    pub branch_singularity: Vec<BranchCheck>,
    pub cost_identity: Vec<CostIdentityCheck>,
    pub two_constraint_determinants: Vec<TwoConstraintCheck>,
    pub morishima_pair: MorishimaPair,
    pub uzawa_vs_primal: UzawaVsPrimal,
}

pub fn build(case: &str, seed: u64) -> Result<CasebookReport, CliError> {
    if case != "blackorby1989" {
        return Err(CliError::Config(format!(
            "unknown casebook id {case:?}; available: blackorby1989"
        )));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let spec = FunctionSpec::NestedMin {};

    // (1) kink detection at three points on x1^2 = x2*x3
    let mut kink_checks = Vec::new();
    for _ in 0..3 {
        let x2 = log_uniform(&mut rng, 0.5, 2.0);
        let x3 = log_uniform(&mut rng, 0.5, 2.0);
        let point = Point::new(vec![(x2 * x3).sqrt(), x2, x3]).map_err(CliError::Module)?;
        let rep = check_smoothness(&spec, &point).map_err(CliError::Module)?;
        kink_checks.push(KinkCheck {
            point: point.coords().to_vec(),
            kink_flags: rep.kink,
            left_slopes: rep.left_slopes,
            right_slopes: rep.right_slopes,
            max_rel_mismatch: rep.max_rel_mismatch,
        });
    }

    // (2) singular bordered Hessians on both smooth branches
    let mut branch_singularity = Vec::new();
    for k in 0..6 {
        let x2 = log_uniform(&mut rng, 0.5, 2.0);
        let x3 = log_uniform(&mut rng, 0.5, 2.0);
        let g = (x2 * x3).sqrt();
        let (x1, branch) = if k < 3 {
            (0.5 * g, "f = x1")
        } else {
            (1.7 * g, "f = sqrt(x2*x3)")
        };
        let point = Point::new(vec![x1, x2, x3]).map_err(CliError::Module)?;
        let bundle = nested_min_branch(&point).map_err(CliError::Module)?;
        let b = bordered_hessian(&bundle);
        branch_singularity.push(BranchCheck {
            point: point.coords().to_vec(),
            branch: branch.to_string(),
            bordered_determinant: determinant(&b),
            singularity_threshold: b.singularity_threshold(),
            singular: b.is_singular(),
        });
    }

    // (3) closed-form cost values and the C1^2 = C2*C3 identity
    let mut cost_identity = Vec::new();
    for _ in 0..5 {
        let prices = vec![
            log_uniform(&mut rng, 0.5, 2.0),
            log_uniform(&mut rng, 0.5, 2.0),
            log_uniform(&mut rng, 0.5, 2.0),
        ];
        let y = log_uniform(&mut rng, 0.5, 2.0);
        let sol = blackorby_cost(&prices, y).map_err(CliError::Module)?;
        cost_identity.push(CostIdentityCheck {
            prices,
            output: y,
            cost: sol.cost,
            identity_residual: sol.grad_p[0] * sol.grad_p[0] - sol.grad_p[1] * sol.grad_p[2],
        });
    }

    // (4) the 5x5 two-constraint bordered determinant -2*x2*x3
    let base = Matrix::from_rows(&[
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 1.0, 0.0],
    ])
    .expect("fixed base block");
    let mut two_constraint_determinants = Vec::new();
    for _ in 0..3 {
        let x2 = log_uniform(&mut rng, 0.5, 2.0);
        let x3 = log_uniform(&mut rng, 0.5, 2.0);
        let b = multi_bordered(&[vec![1.0, 0.0, 0.0], vec![0.0, x3, x2]], &base)
            .map_err(CliError::Module)?;
        two_constraint_determinants.push(TwoConstraintCheck {
            x2,
            x3,
            determinant: determinant(&b),
            expected: -2.0 * x2 * x3,
        });
    }

    // (5) the published Morishima pair at p = (1,1,1), y = 2
    let pair_sol = blackorby_cost(&[1.0, 1.0, 1.0], 2.0).map_err(CliError::Module)?;
    let morishima_pair = MorishimaPair {
        prices: vec![1.0, 1.0, 1.0],
        output: 2.0,
        mes_12: mes(&pair_sol, 0, 1).map_err(CliError::Module)?,
        mes_21: mes(&pair_sol, 1, 0).map_err(CliError::Module)?,
        mes_alt_12: mes_alt(&pair_sol, 0, 1).map_err(CliError::Module)?,
    };

    // (6) Uzawa form defined, primal AES undefined
    let uzawa = uzawa_aes(&pair_sol).map_err(CliError::Module)?;
    let primal_point = Point::new(vec![2.0, 2.0, 2.0]).map_err(CliError::Module)?;
    let primal_error_code = match differentiate(&spec, &primal_point) {
        Err(e) => e.code().to_string(),
        Ok(_) => "unexpected-success".to_string(),
    };
    let branch_point = Point::new(vec![1.0, 2.0, 2.0]).map_err(CliError::Module)?;
    let branch_aes_error_code =
        match nested_min_branch(&branch_point).and_then(|b| aes_matrix(&b)) {
            Err(e) => e.code().to_string(),
            Ok(_) => "unexpected-success".to_string(),
        };
    let uzawa_vs_primal = UzawaVsPrimal {
        prices: pair_sol.prices.clone(),
        output: pair_sol.output,
        uzawa_aes: uzawa.matrix().cloned().unwrap_or_default(),
        primal_point: primal_point.coords().to_vec(),
        primal_error_code,
        branch_aes_error_code,
    };

    Ok(CasebookReport {
        case: case.to_string(),
        seed,
        kink_checks,
        branch_singularity,
        cost_identity,
        two_constraint_determinants,
        morishima_pair,
        uzawa_vs_primal,
    })
}

impl CasebookReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("casebook {} (seed {})\n", self.case, self.seed));
        out.push_str("\n-- 1. kink detection on x1^2 = x2*x3 --\n");
        for k in &self.kink_checks {
            out.push_str(&format!(
                "point {:?}: kinks {:?}, max rel mismatch {:.3}\n",
                k.point, k.kink_flags, k.max_rel_mismatch
            ));
        }
        out.push_str("\n-- 2. bordered Hessians on the smooth branches --\n");
        for b in &self.branch_singularity {
            out.push_str(&format!(
                "point {:?} ({}): det {:.3e}, singular = {}\n",
                b.point, b.branch, b.bordered_determinant, b.singular
            ));
        }
        out.push_str("\n-- 3. closed-form cost and C1^2 = C2*C3 --\n");
        for c in &self.cost_identity {
            out.push_str(&format!(
                "p = {:?}, y = {:.4}: C = {:.6}, identity residual {:.3e}\n",
                c.prices, c.output, c.cost, c.identity_residual
            ));
        }
        out.push_str("\n-- 4. two-constraint bordered determinant --\n");
        for t in &self.two_constraint_determinants {
            out.push_str(&format!(
                "(x2, x3) = ({:.4}, {:.4}): det {:.6} vs -2*x2*x3 = {:.6}\n",
                t.x2, t.x3, t.determinant, t.expected
            ));
        }
        out.push_str("\n-- 5. Morishima pair at p = (1,1,1), y = 2 --\n");
        out.push_str(&format!(
            "mes(1,2) = {}, mes(2,1) = {}, other reading mes_alt(1,2) = {}\n",
            self.morishima_pair.mes_12, self.morishima_pair.mes_21, self.morishima_pair.mes_alt_12
        ));
        out.push_str("\n-- 6. Uzawa form defined, primal AES undefined --\n");
        out.push_str("Uzawa AES from the closed-form cost:\n");
        out.push_str(&format_nested(&self.uzawa_vs_primal.uzawa_aes));
        out.push_str(&format!(
            "\nprimal differentiate at {:?}: {}\n",
            self.uzawa_vs_primal.primal_point, self.uzawa_vs_primal.primal_error_code
        ));
        out.push_str(&format!(
            "branch-bundle AES: {}\n",
            self.uzawa_vs_primal.branch_aes_error_code
        ));
        out
    }
}
