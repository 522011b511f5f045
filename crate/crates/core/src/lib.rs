//! Frenet apparatus of admissible curves in the Galilean space G3 and their
//! Mannheim partners.

// negated comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curve;
pub mod expr;
pub mod frenet;
pub mod galilean;
pub mod mannheim;

pub use curve::{
    reparametrize_to_arclength, CurveError, CurveSpec, DataCurve, JetSource, ParametricCurve,
    SampledCurve,
};
pub use expr::{EvalError, Expression, Jet, Jet3, Jet5, ParseError};
pub use frenet::{frenet_apparatus, frenet_residuals, FrenetData, FrenetError, FrenetFrame};
pub use galilean::{GalVec3, Similarity, VectorClass};
pub use mannheim::{
    audit_claims, detect_partner, mannheim_mate, synthesize_from_natural, ClaimReport, Detection,
    MannheimError, MatePair,
};
