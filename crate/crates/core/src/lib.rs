//! Elasticities of substitution for smooth production functions.
//!
//! The crate computes the Allen, Hicks, Morishima, Hotelling–Lau, and gross
//! Morishima elasticities along three routes and cross-checks them:
//!
//! * primal: bordered-Hessian cofactors of the production function
//!   ([`elasticity`]),
//! * cost side: a Newton cost-minimization solver with implicit-function
//!   sensitivities ([`duality`]),
//! * profit side: the gross analogues from the profit function ([`profit`]).
//!
//! The point of the cross-checks is that the cost-function (Uzawa) form of
//! the Allen elasticity agrees with the direct cofactor form for smooth
//! functions whether or not they are homogeneous, while the classic
//! `min(x1, sqrt(x2*x3))` counterexample breaks only the primal route: its
//! cost function stays smooth and every dual measure stays defined. The
//! `duality::blackorby_cost` closed form and the [`prodfn`] kink diagnostics
//! reproduce that case end to end.

pub mod bmatrix;
pub mod duality;
pub mod elasticity;
pub mod error;
pub mod linalg;
pub mod point;
pub mod problem;
pub mod prodfn;
pub mod profit;
pub mod report;

pub use error::{EsError, Result};
pub use problem::{CostProblem, ProfitProblem};
pub use linalg::Matrix;
pub use point::Point;
pub use prodfn::{DiffBundle, FunctionSpec, OuterTransform, SmoothnessReport};
pub use report::{ElasticityReport, Measure, ReportValues};
