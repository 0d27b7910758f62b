//! Ostrowski-type bounds on Taylor-type quadrature remainders for functions
//! whose n-th derivative is convex in absolute value, checked against an
//! adaptive quadrature oracle.
//!
//! Module map:
//!
//! - [`expr`]: expression parsing and exact derivatives via Taylor jets
//! - [`quadrature`]: adaptive Gauss-Kronrod oracle and convexity checker
//! - [`identity`]: Peano kernels and the exact remainder identity
//! - [`bounds`]: bound families, corollaries and oracle-backed evaluation
//! - [`means`]: arithmetic, logarithmic and power means and the two mean
//!   inequalities derived from the first-order bounds
//! - [`analysis`]: parameter sweeps, best-bound selection, errata, reports
//! - [`corpus`]: reference functions with known convexity status

pub mod analysis;
pub mod bounds;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod identity;
pub mod means;
pub mod quadrature;

pub use bounds::{BoundReport, BoundRequest, Evaluator, Family, Variant};
pub use error::{Error, Result};
pub use expr::{parse, ExprFunction, TaylorJet};
pub use identity::{IdentityReport, RuleForm};
pub use quadrature::{ConvexityVerdict, Interval, QuadResult};
