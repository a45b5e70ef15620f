//! Shared fixtures for the criterion benches.

use tautring::taut::{Flavor, KappaExpr, TautPresentation};

/// A fixed, moderately large κ-expression in dimension `2n = 6`.
pub const SAMPLE_EXPR: &str = "(k[e*p1] - 3*k[e^5] + k[e*p1*p2])^3 + 1/7*k[e*p1^2*p2]*k[e*p3]";

pub fn sample_expr() -> KappaExpr {
    KappaExpr::parse(SAMPLE_EXPR, 3, Flavor::Closed).expect("fixture parses")
}

pub fn presentation(g: u32) -> TautPresentation {
    TautPresentation::new(3, g, Flavor::Closed).expect("fixture presentation")
}
