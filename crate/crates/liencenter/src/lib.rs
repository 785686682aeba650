//! Decides whether a polynomial Lienard system
//!
//! ```text
//! x' = y
//! y' = -g(x) - f(x) y
//! ```
//!
//! has a global center at the origin, classifies the center type, explains
//! failures condition by condition, and cross-validates every verdict with an
//! independent numerical return-map oracle.

pub mod branches;
pub mod cli;
pub mod criteria;
pub mod flow;
pub mod infinity;
pub mod poly;
pub mod render;
pub mod report;

pub use criteria::{
    CondStatus, ConditionReport, LienardSystem, ToleranceOptions, Verdict, VerdictKind,
};
pub use poly::{parse_polynomial, Polynomial, Rational};
