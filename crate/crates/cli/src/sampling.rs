//! Seeded point sampling for reproducible reports. Points are log-uniform
//! on [0.5, 2] per coordinate, away from domain boundaries; the seed comes
//! from `--seed`, then the `ESCALC_SEED` environment variable, then 42.

use escalc_core::{FunctionSpec, Point};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 42;

pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("ESCALC_SEED") {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| CliError::Config(format!("ESCALC_SEED must be an integer, got {raw:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Sample `count` interior points for the spec; shifted domains are offset
/// so the samples stay interior.
pub fn sample_points(
    spec: &FunctionSpec,
    seed: u64,
    count: usize,
) -> Result<Vec<Point>, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = spec.dim();
    let base: Vec<f64> = match spec {
        FunctionSpec::ShiftedCobbDouglas { shifts, .. } => shifts.clone(),
        _ => vec![0.0; n],
    };
    (0..count)
        .map(|_| {
            let coords: Vec<f64> =
                base.iter().map(|&b| b + log_uniform(&mut rng, 0.5, 2.0)).collect();
            Point::new(coords).map_err(CliError::Module)
        })
        .collect()
}
