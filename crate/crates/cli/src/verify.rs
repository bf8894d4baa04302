//! `verify-uzawa`: sample points, build the induced cost problem at each
//! (p = ∇f(x), y = f(x)), and compare the primal Allen matrix with the
//! cost-function form entry by entry.

use escalc_core::duality::{solve_cost_min, uzawa_aes, PriceOutput};
use escalc_core::elasticity::aes_matrix;
use escalc_core::prodfn::differentiate;
use escalc_core::FunctionSpec;

use crate::reports::{VerifyPoint, VerifyReport};
use crate::sampling::sample_points;
use crate::CliError;

pub fn run(
    spec: &FunctionSpec,
    points: usize,
    seed: u64,
    tolerance: f64,
) -> Result<VerifyReport, CliError> {
    let samples = sample_points(spec, seed, points)?;
    let mut per_point = Vec::with_capacity(points);
    let mut overall = 0.0_f64;
    for x in samples {
        let d = differentiate(spec, &x).map_err(CliError::Module)?;
        let po = PriceOutput::new(d.gradient.clone(), d.value).map_err(CliError::Module)?;
        let sol = solve_cost_min(spec, &po, Some(&x)).map_err(CliError::Module)?;
        let primal = aes_matrix(&d).map_err(CliError::Module)?;
        let dual = uzawa_aes(&sol).map_err(CliError::Module)?;
        let n = x.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (primal.entry(i, j).unwrap(), dual.entry(i, j).unwrap());
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
            }
        }
        overall = overall.max(worst);
        per_point.push(VerifyPoint { point: x.coords().to_vec(), max_rel_deviation: worst });
    }
    Ok(VerifyReport {
        family: spec.family_name().to_string(),
        seed,
        points,
        tolerance,
        max_rel_deviation: overall,
        pass: overall < tolerance,
        per_point,
    })
}
