//! Exact characteristic-class calculus: modified Hirzebruch classes,
//! generalised κ classes, tautological ring presentations for
//! `W_g = #_g (S^n x S^n)`, bundle models and truncated independence checks.

pub mod arith;
pub mod charclass;
pub mod error;
pub mod independence;
pub mod linalg;
pub mod models;
pub mod poly;
pub mod symmetric;
pub mod taut;

pub use arith::{bernoulli, EvenPowerSeries, ExactScalar};
pub use charclass::{bso_ring, l_classical, l_tilde, BSORing, BasisMonomial, LTildeClass};
pub use error::{Error, Result};
pub use models::{BundleModel, GysinContext, ModelKind, ModelLabel};
pub use poly::{apply_map, GeneratorTable, GradedPoly, RingMap, TableRef};
pub use symmetric::SymmetricEvenPoly;
pub use taut::{audit, builtin_relation_suite, AuditReport, Flavor, KappaExpr, TautPresentation, Verdict};
pub use independence::{check_presentation_independence, kernel_up_to_degree, TruncatedKernelResult};
