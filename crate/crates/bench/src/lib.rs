//! Shared fixtures for the criterion benches.

use escalc_core::{FunctionSpec, Point};

pub fn cobb_douglas(n: usize) -> FunctionSpec {
    let a = 0.9 / n as f64;
    FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![a; n] }
}

pub fn interior_point(n: usize) -> Point {
    Point::new((0..n).map(|i| 0.8 + 0.1 * i as f64).collect()).expect("positive coords")
}
