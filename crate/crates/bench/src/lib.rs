//! Fixtures shared by the benchmarks.

use galmann_core::{
    frenet_apparatus, reparametrize_to_arclength, synthesize_from_natural, CurveSpec, Expression,
    FrenetData, SampledCurve,
};

pub const CUBIC: &str = "t;t^2/2;t^3/6";

pub fn cubic_spec() -> CurveSpec {
    CurveSpec::parse(CUBIC, "t", 0.0, 1.0).expect("fixture parses")
}

pub fn cubic_sampled(n: usize) -> (SampledCurve, FrenetData) {
    let c = reparametrize_to_arclength(&cubic_spec(), n).expect("fixture is admissible");
    let fd = frenet_apparatus(&c).expect("fixture has curvature");
    (c, fd)
}

/// `κ = λτ²` with `τ = s` on `[1, 2]`; has a partner at `lambda`.
pub fn mannheim_family(lambda: f64, n: usize) -> (SampledCurve, FrenetData) {
    let kappa = Expression::parse(&format!("{lambda}*s^2"), "s").expect("fixture parses");
    let tau = Expression::parse("s", "s").expect("fixture parses");
    let c = synthesize_from_natural(&kappa, &tau, 1.0, 2.0, n).expect("fixture integrates");
    let fd = frenet_apparatus(&c).expect("fixture has curvature");
    (c, fd)
}
