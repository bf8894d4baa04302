//! Seeded random instances shared by the property and acceptance suites.

#![allow(dead_code)]

use escalc_core::{FunctionSpec, OuterTransform, Point};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Log-uniform draw on [lo, hi].
pub fn log_uniform(r: &mut StdRng, lo: f64, hi: f64) -> f64 {
    r.random_range(lo.ln()..hi.ln()).exp()
}

/// Interior point with coordinates log-uniform on [0.5, 2].
pub fn box_point(r: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| log_uniform(r, 0.5, 2.0)).collect()
}

/// |a − b| scaled by max(1, |a|, |b|).
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub struct Instance {
    pub spec: FunctionSpec,
    pub x: Point,
}

/// Cobb-Douglas with exponents scaled to the given degree.
pub fn cd_instance(r: &mut StdRng, n: usize, degree: f64) -> Instance {
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.2..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let exponents: Vec<f64> = raw.iter().map(|a| a * degree / sum).collect();
    let spec = FunctionSpec::CobbDouglas { scale: log_uniform(r, 0.5, 2.0), exponents };
    let x = Point::new(box_point(r, n)).unwrap();
    Instance { spec, x }
}

/// Nonhomogeneous shifted Cobb-Douglas, strictly concave (degree < 1), with
/// the evaluation point kept interior to the shifted domain.
pub fn shifted_cd_instance(r: &mut StdRng, n: usize) -> Instance {
    let degree = r.random_range(0.5..0.9);
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.2..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let exponents: Vec<f64> = raw.iter().map(|a| a * degree / sum).collect();
    let shifts: Vec<f64> = (0..n).map(|_| r.random_range(0.1..0.5)).collect();
    let x =
        Point::new(shifts.iter().map(|&s| s + log_uniform(r, 0.5, 2.0)).collect()).unwrap();
    let spec = FunctionSpec::ShiftedCobbDouglas {
        scale: log_uniform(r, 0.5, 2.0),
        exponents,
        shifts,
    };
    Instance { spec, x }
}

/// Concave quadratic with positive-definite curvature block and positive
/// gradient at the bundled point.
pub fn quadratic_instance(r: &mut StdRng, n: usize) -> Instance {
    let x = box_point(r, n);
    let m: Vec<Vec<f64>> =
        (0..n).map(|_| (0..n).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let mut b = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|k| m[k][i] * m[k][j]).sum();
            b[i][j] = dot / n as f64 + if i == j { 0.3 } else { 0.0 };
        }
    }
    // choose the linear part so the gradient at x is a fresh positive vector
    let mut linear = vec![0.0; n];
    for i in 0..n {
        let bx: f64 = (0..n).map(|j| b[i][j] * x[j]).sum();
        linear[i] = bx + log_uniform(r, 0.5, 2.0);
    }
    Instance {
        spec: FunctionSpec::Quadratic { linear, quadratic: b },
        x: Point::new(x).unwrap(),
    }
}

/// CES with the given homogeneity degree; rho kept away from 0.
pub fn ces_instance(r: &mut StdRng, n: usize, degree: f64) -> Instance {
    let weights: Vec<f64> = (0..n).map(|_| r.random_range(0.3..1.0)).collect();
    let mut rho: f64 = r.random_range(-2.0..0.8);
    if rho.abs() < 0.05 {
        rho = 0.3;
    }
    let spec = FunctionSpec::Ces { scale: log_uniform(r, 0.5, 2.0), weights, rho, degree };
    Instance { spec, x: Point::new(box_point(r, n)).unwrap() }
}

/// Homothetic composite: CES degree-1 inner, power or log1p outer.
pub fn homothetic_spec(r: &mut StdRng, n: usize, power_outer: bool) -> FunctionSpec {
    let weights: Vec<f64> = (0..n).map(|_| r.random_range(0.3..1.0)).collect();
    let mut rho: f64 = r.random_range(-1.5..0.6);
    if rho.abs() < 0.05 {
        rho = -0.4;
    }
    let inner = FunctionSpec::Ces { scale: 1.0, weights, rho, degree: 1.0 };
    let outer = if power_outer {
        OuterTransform::Power { gamma: r.random_range(0.4..0.8) }
    } else {
        OuterTransform::Log1p
    };
    FunctionSpec::Homothetic { inner: Box::new(inner), outer }
}

/// Change the unit of factor `i` by the factor `c`: the returned spec g
/// satisfies g(..., c·xᵢ, ...) = f(..., xᵢ, ...) pointwise.
pub fn rescale_factor(spec: &FunctionSpec, i: usize, c: f64) -> FunctionSpec {
    match spec {
        FunctionSpec::CobbDouglas { scale, exponents } => FunctionSpec::CobbDouglas {
            scale: scale / c.powf(exponents[i]),
            exponents: exponents.clone(),
        },
        FunctionSpec::Ces { scale, weights, rho, degree } => {
            let mut w = weights.clone();
            w[i] /= c.powf(*rho);
            FunctionSpec::Ces { scale: *scale, weights: w, rho: *rho, degree: *degree }
        }
        FunctionSpec::ShiftedCobbDouglas { scale, exponents, shifts } => {
            let mut s = shifts.clone();
            s[i] *= c;
            FunctionSpec::ShiftedCobbDouglas {
                scale: scale / c.powf(exponents[i]),
                exponents: exponents.clone(),
                shifts: s,
            }
        }
        FunctionSpec::Quadratic { linear, quadratic } => {
            let n = linear.len();
            let mut a = linear.clone();
            a[i] /= c;
            let mut b = quadratic.clone();
            for v in b[i].iter_mut() {
                *v /= c;
            }
            for row in b.iter_mut().take(n) {
                row[i] /= c;
            }
            // the diagonal entry was divided twice, as required
            FunctionSpec::Quadratic { linear: a, quadratic: b }
        }
        other => panic!("rescale_factor has no rule for {}", other.family_name()),
    }
}
