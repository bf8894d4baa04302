//! Finite-difference oracle for the analytic derivatives, plus the
//! one-sided-slope kink detector.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::point::Point;

use super::families::evaluate;
use super::{DiffBundle, FunctionSpec, SmoothnessReport, KINK_TOL};

/// Central-difference gradient step: cbrt(eps)·max(|x|, 1).
fn grad_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Central-difference Hessian step: eps^(1/4)·max(|x|, 1).
fn hess_step(x: f64) -> f64 {
    f64::EPSILON.powf(0.25) * x.abs().max(1.0)
}

fn eval_at(spec: &FunctionSpec, base: &Point, deltas: &[(usize, f64)]) -> Result<f64> {
    let mut coords = base.coords().to_vec();
    for &(i, d) in deltas {
        coords[i] += d;
    }
    evaluate(spec, &Point::new(coords)?)
}

/// Central-difference gradient and Hessian. The Hessian is symmetrized as
/// (H + Hᵀ)/2. Serves as the independent oracle for [`super::differentiate`];
/// cofactor ratios downstream amplify Hessian noise, so the steps follow the
/// classic cube-root / fourth-root machine-epsilon scaling.
pub fn fd_differentiate(spec: &FunctionSpec, x: &Point) -> Result<DiffBundle> {
    let n = x.dim();
    let value = evaluate(spec, x)?;

    let mut gradient = vec![0.0; n];
    for (i, g) in gradient.iter_mut().enumerate() {
        let h = grad_step(x.get(i));
        let fp = eval_at(spec, x, &[(i, h)])?;
        let fm = eval_at(spec, x, &[(i, -h)])?;
        *g = (fp - fm) / (2.0 * h);
    }

    let mut hessian = Matrix::zeros(n, n);
    for i in 0..n {
        let hi = hess_step(x.get(i));
        let fpp = eval_at(spec, x, &[(i, 2.0 * hi)])?;
        let fmm = eval_at(spec, x, &[(i, -2.0 * hi)])?;
        let fp = eval_at(spec, x, &[(i, hi)])?;
        let fm = eval_at(spec, x, &[(i, -hi)])?;
        // five-point second derivative: (-f(x+2h) + 16f(x+h) - 30f(x) + 16f(x-h) - f(x-2h)) / 12h^2
        hessian.set(i, i, (-fpp + 16.0 * fp - 30.0 * value + 16.0 * fm - fmm) / (12.0 * hi * hi));
        for j in (i + 1)..n {
            let hj = hess_step(x.get(j));
            let fa = eval_at(spec, x, &[(i, hi), (j, hj)])?;
            let fb = eval_at(spec, x, &[(i, hi), (j, -hj)])?;
            let fc = eval_at(spec, x, &[(i, -hi), (j, hj)])?;
            let fd = eval_at(spec, x, &[(i, -hi), (j, -hj)])?;
            let v = (fa - fb - fc + fd) / (4.0 * hi * hj);
            hessian.set(i, j, v);
            hessian.set(j, i, v);
        }
    }

    Ok(DiffBundle {
        value,
        gradient,
        hessian: hessian.symmetrized(),
        point: x.clone(),
    })
}

/// One-sided difference slopes per coordinate; a kink is flagged when the
/// relative left/right mismatch exceeds [`KINK_TOL`].
pub fn check_smoothness(spec: &FunctionSpec, x: &Point) -> Result<SmoothnessReport> {
    let n = x.dim();
    let f0 = evaluate(spec, x)?;
    let mut left_slopes = vec![0.0; n];
    let mut right_slopes = vec![0.0; n];
    let mut kink = vec![false; n];
    let mut max_rel = 0.0_f64;
    for i in 0..n {
        let h = grad_step(x.get(i));
        let fr = eval_at(spec, x, &[(i, h)])?;
        let fl = eval_at(spec, x, &[(i, -h)])?;
        let right = (fr - f0) / h;
        let left = (f0 - fl) / h;
        let rel = (right - left).abs() / left.abs().max(right.abs()).max(1.0);
        left_slopes[i] = left;
        right_slopes[i] = right;
        kink[i] = rel > KINK_TOL;
        max_rel = max_rel.max(rel);
    }
    Ok(SmoothnessReport { left_slopes, right_slopes, kink, max_rel_mismatch: max_rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prodfn::differentiate;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn fd_matches_analytic_cobb_douglas() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let x = pt(&[1.0, 1.0]);
        let a = differentiate(&spec, &x).unwrap();
        let f = fd_differentiate(&spec, &x).unwrap();
        for i in 0..2 {
            assert!((a.gradient[i] - f.gradient[i]).abs() < 1e-6);
            for j in 0..2 {
                assert!((a.hessian.get(i, j) - f.hessian.get(i, j)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn fd_hessian_exact_for_quadratic() {
        let spec = FunctionSpec::Quadratic {
            linear: vec![2.0, 2.0],
            quadratic: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        let f = fd_differentiate(&spec, &pt(&[1.0, 1.0])).unwrap();
        assert!((f.hessian.get(0, 0) + 1.0).abs() < 1e-7);
        assert!((f.hessian.get(0, 1)).abs() < 1e-7);
        assert!((f.hessian.get(1, 1) + 1.0).abs() < 1e-7);
    }

    #[test]
    fn kink_detected_on_nested_min_curve() {
        // (1,1,1) satisfies x1^2 = x2*x3; the x1 slopes are 1 from the left,
        // 0 from the right.
        let rep = check_smoothness(&FunctionSpec::NestedMin {}, &pt(&[1.0, 1.0, 1.0])).unwrap();
        assert!(rep.kink[0]);
        assert!((rep.left_slopes[0] - 1.0).abs() < 1e-9);
        assert!(rep.right_slopes[0].abs() < 1e-9);
    }

    #[test]
    fn no_kink_off_the_curve() {
        let rep = check_smoothness(&FunctionSpec::NestedMin {}, &pt(&[2.0, 1.0, 1.0])).unwrap();
        assert!(!rep.any_kink());
        // active branch is sqrt(x2*x3): gradient starts with 0
        assert!(rep.left_slopes[0].abs() < 1e-9);
        assert!(rep.right_slopes[0].abs() < 1e-9);
    }

    #[test]
    fn fd_bundle_is_finite_even_across_the_kink() {
        // the stencil straddles the kink at (1,1,1); the numbers are not a
        // derivative of anything, but the oracle itself stays well defined
        let f = fd_differentiate(&FunctionSpec::NestedMin {}, &pt(&[1.0, 1.0, 1.0])).unwrap();
        assert!(f.value == 1.0);
        assert!(f.gradient.iter().all(|g| g.is_finite()));
        for i in 0..3 {
            for j in 0..3 {
                assert!(f.hessian.get(i, j).is_finite());
            }
        }
    }

    #[test]
    fn smooth_family_has_no_kink() {
        let spec = FunctionSpec::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.5] };
        let rep = check_smoothness(&spec, &pt(&[0.7, 1.9])).unwrap();
        assert!(!rep.any_kink());
        assert!(rep.max_rel_mismatch < KINK_TOL);
    }
}
