//! Admissible curves and their canonical arc-length form `α(s) = (s, y(s), z(s))`.
//!
//! A curve is admissible when `x'(t)` never vanishes. Its Galilean arc
//! length is then `s = x(t) - x(t_start)`, where `t_start` is whichever
//! endpoint has the smaller `x`, so `s` always increases along the samples.

mod data;

use thiserror::Error;

use crate::expr::{BinOp, EvalError, Expression, Jet, Jet3, Jet5, Node, ParseError};
use crate::galilean::{GalVec3, Similarity};

pub use data::{read_csv, DataCurve};

pub const DEFAULT_SAMPLES: usize = 1001;
/// `|x'|` at or below this is treated as a vanishing tangent component.
pub const ADMISSIBILITY_EPS: f64 = 1e-12;
const INVERSION_TOL: f64 = 1e-13;
const INVERSION_MAX_ITER: usize = 100;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("curve is not admissible: x'({t}) = {dx}")]
    NotAdmissible { t: f64, dx: f64 },
    #[error("invalid domain [{t0}, {t1}]")]
    InvalidDomain { t0: f64, t1: f64 },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("component {component}: {source}")]
    Parse {
        component: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("expected three `;`-separated components, got {0}")]
    ComponentCount(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("arc-length inversion did not converge at s = {s}")]
    InversionFailed { s: f64 },
    #[error("data: {0}")]
    Data(String),
}

/// Where a curve's derivatives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSource {
    /// Jet arithmetic on closed-form expressions or exact recurrences.
    Exact,
    /// Local polynomial interpolation of sampled data.
    Interpolated,
}

impl JetSource {
    /// Relative tolerance for constancy and identity checks.
    pub fn tolerance(self) -> f64 {
        match self {
            JetSource::Exact => 1e-6,
            JetSource::Interpolated => 1e-3,
        }
    }
}

/// Anything that yields position jets of orders 0..=5 at a parameter value.
pub trait ParametricCurve {
    fn domain(&self) -> (f64, f64);
    fn jets(&self, t: f64) -> Result<[Jet5; 3], CurveError>;
    fn jet_source(&self) -> JetSource;

    /// `x(t)` and `x'(t)`.
    fn x_jet(&self, t: f64) -> Result<Jet<2>, CurveError> {
        let x = self.jets(t)?[0];
        Ok(Jet::from_coeffs([x.value(), x.derivative(1)]))
    }

    fn dx(&self, t: f64) -> Result<f64, CurveError> {
        Ok(self.x_jet(t)?.derivative(1))
    }
}

/// A curve given by three expressions over `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub fx: Expression,
    pub fy: Expression,
    pub fz: Expression,
    pub t0: f64,
    pub t1: f64,
    /// Sign of `x'` on the domain, `+1` or `-1`.
    pub orientation: i8,
}

impl CurveSpec {
    pub fn new(
        fx: Expression,
        fy: Expression,
        fz: Expression,
        t0: f64,
        t1: f64,
    ) -> Result<CurveSpec, CurveError> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(CurveError::InvalidDomain { t0, t1 });
        }
        let dx = fx.eval_jet3(t0)?.v1();
        let orientation = if dx < 0.0 { -1 } else { 1 };
        Ok(CurveSpec {
            fx,
            fy,
            fz,
            t0,
            t1,
            orientation,
        })
    }

    /// Parses `"fx;fy;fz"`.
    pub fn parse(text: &str, variable: &str, t0: f64, t1: f64) -> Result<CurveSpec, CurveError> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(CurveError::ComponentCount(parts.len()));
        }
        let mut exprs = Vec::with_capacity(3);
        for (part, component) in parts.iter().zip(["x", "y", "z"]) {
            let e = Expression::parse(part.trim(), variable)
                .map_err(|source| CurveError::Parse { component, source })?;
            exprs.push(e);
        }
        let fz = exprs.pop().unwrap();
        let fy = exprs.pop().unwrap();
        let fx = exprs.pop().unwrap();
        CurveSpec::new(fx, fy, fz, t0, t1)
    }

    /// The image of this curve under `m`, as new expressions.
    pub fn transformed(&self, m: &Similarity) -> Result<CurveSpec, CurveError> {
        let var = self.fx.variable();
        let (s, c) = m.phi.sin_cos();
        let x = self.fx.ast().clone();
        let y = self.fy.ast().clone();
        let z = self.fz.ast().clone();
        let lin = |k: f64, n: Node| Node::binary(BinOp::Mul, Node::num(k), n);
        let sum = |a: Node, b: Node| Node::binary(BinOp::Add, a, b);
        let nx = sum(Node::num(m.a11), lin(m.a12, x.clone()));
        let ny = sum(
            sum(Node::num(m.a21), lin(m.a22, x.clone())),
            lin(m.a23, sum(lin(c, y.clone()), lin(s, z.clone()))),
        );
        let nz = sum(
            sum(Node::num(m.a31), lin(m.a32, x)),
            lin(m.a23, sum(lin(-s, y), lin(c, z))),
        );
        CurveSpec::new(
            Expression::from_ast(nx, var),
            Expression::from_ast(ny, var),
            Expression::from_ast(nz, var),
            self.t0,
            self.t1,
        )
    }
}

impl ParametricCurve for CurveSpec {
    fn domain(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    fn jets(&self, t: f64) -> Result<[Jet5; 3], CurveError> {
        Ok([
            self.fx.eval_jet(t)?,
            self.fy.eval_jet(t)?,
            self.fz.eval_jet(t)?,
        ])
    }

    fn jet_source(&self) -> JetSource {
        JetSource::Exact
    }

    fn x_jet(&self, t: f64) -> Result<Jet<2>, CurveError> {
        Ok(self.fx.eval_jet(t)?)
    }
}

/// Probes `x'` at `n_probe` uniform parameters. Returns the orientation
/// (`+1` or `-1`) or the first parameter where admissibility fails.
pub fn check_admissible<C: ParametricCurve + ?Sized>(
    curve: &C,
    n_probe: usize,
) -> Result<i8, CurveError> {
    if n_probe < 2 {
        return Err(CurveError::TooFewSamples {
            min: 2,
            got: n_probe,
        });
    }
    let (t0, t1) = curve.domain();
    let mut sign = 0.0;
    for i in 0..n_probe {
        let t = grid_point(t0, t1, i, n_probe);
        let dx = curve.dx(t)?;
        if !(dx.abs() > ADMISSIBILITY_EPS) || (sign != 0.0 && dx.signum() != sign) {
            return Err(CurveError::NotAdmissible { t, dx });
        }
        sign = dx.signum();
    }
    Ok(sign as i8)
}

fn grid_point(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

/// Dense canonical sampling of an admissible curve.
///
/// `jets[i][k]` is the jet of coordinate `k` with respect to arc length at
/// sample `i`. Coefficients beyond `jet_order` are NaN.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub s: Vec<f64>,
    /// Curve parameter at each sample, when the curve came from one.
    pub t: Vec<f64>,
    pub pos: Vec<GalVec3>,
    pub jets: Vec<[Jet5; 3]>,
    pub jet_order: usize,
    pub source: JetSource,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        (self.s[self.s.len() - 1] - self.s[0]) / (self.s.len() - 1) as f64
    }

    /// Order-3 jets at sample `i`.
    pub fn jet3(&self, i: usize) -> [Jet3; 3] {
        self.jets[i].map(|j| j.resize::<4>())
    }

    /// Tangent `(1, y', z')` at sample `i`.
    pub fn tangent(&self, i: usize) -> GalVec3 {
        let [x, y, z] = &self.jets[i];
        GalVec3::new(x.derivative(1), y.derivative(1), z.derivative(1))
    }
}

/// Resamples an admissible curve on a uniform arc-length grid.
pub fn reparametrize_to_arclength<C: ParametricCurve + ?Sized>(
    curve: &C,
    n_samples: usize,
) -> Result<SampledCurve, CurveError> {
    if n_samples < 8 {
        return Err(CurveError::TooFewSamples {
            min: 8,
            got: n_samples,
        });
    }
    let orientation = check_admissible(curve, n_samples)?;
    let (t0, t1) = curve.domain();
    let (t_start, t_end) = if orientation > 0 { (t0, t1) } else { (t1, t0) };
    let x_start = curve.x_jet(t_start)?.value();
    let total = curve.x_jet(t_end)?.value() - x_start;
    let dx_start = curve.dx(t_start)?;

    let mut out = SampledCurve {
        s: Vec::with_capacity(n_samples),
        t: Vec::with_capacity(n_samples),
        pos: Vec::with_capacity(n_samples),
        jets: Vec::with_capacity(n_samples),
        jet_order: 5,
        source: curve.jet_source(),
    };
    for i in 0..n_samples {
        let s = grid_point(0.0, total, i, n_samples);
        let t = if i == 0 {
            t_start
        } else if i + 1 == n_samples {
            t_end
        } else {
            invert_arclength(curve, s, x_start, total, t_start, t_end, dx_start)?
        };
        let [jx, jy, jz] = curve.jets(t)?;
        let dt = jx.invert();
        let mut cx = [0.0; 6];
        cx[0] = s;
        cx[1] = 1.0;
        out.s.push(s);
        out.t.push(t);
        out.pos.push(GalVec3::new(s, jy.value(), jz.value()));
        out.jets.push([
            Jet::from_coeffs(cx),
            Jet::compose(&jy, &dt),
            Jet::compose(&jz, &dt),
        ]);
    }
    Ok(out)
}

/// Solves `x(t) - x_start = s` by Newton steps kept inside a bracket,
/// bisecting whenever a step would leave it.
fn invert_arclength<C: ParametricCurve + ?Sized>(
    curve: &C,
    s: f64,
    x_start: f64,
    total: f64,
    t_start: f64,
    t_end: f64,
    dx_start: f64,
) -> Result<f64, CurveError> {
    let tol = INVERSION_TOL * x_start.abs().max(total).max(1.0);
    // g(lo) <= 0 <= g(hi); lo and hi are not ordered numerically.
    let (mut lo, mut hi) = (t_start, t_end);
    let mut t = t_start + s / dx_start;
    if !((t - lo) * (t - hi) < 0.0) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..INVERSION_MAX_ITER {
        let jet = curve.x_jet(t)?;
        let g = jet.value() - x_start - s;
        if g.abs() <= tol {
            return Ok(t);
        }
        if g < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
            return Ok(t);
        }
        let dx = jet.derivative(1);
        let mut next = t - g / dx;
        if !((next - lo) * (next - hi) < 0.0) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    Err(CurveError::InversionFailed { s })
}

/// Sample positions, optionally mapped through a similarity.
pub fn sample_positions(curve: &SampledCurve, m: Option<&Similarity>) -> Vec<GalVec3> {
    match m {
        None => curve.pos.clone(),
        Some(m) => curve.pos.iter().map(|p| m.apply(p)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(text: &str, t0: f64, t1: f64) -> CurveSpec {
        CurveSpec::parse(text, "t", t0, t1).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert_eq!(
            check_admissible(&spec("t;t^2;t^3", 0.0, 1.0), 101).unwrap(),
            1
        );
        match check_admissible(&spec("t^2;t;0", -1.0, 1.0), 1001) {
            Err(CurveError::NotAdmissible { t, .. }) => assert_eq!(t, 0.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            check_admissible(&spec("exp(t)-1;t;0", 0.0, 1.0), 101).unwrap(),
            1
        );
        assert_eq!(
            check_admissible(&spec("-t;t;0", 0.0, 1.0), 101).unwrap(),
            -1
        );
        assert!(matches!(
            check_admissible(&spec("t;t;t", 0.0, 1.0), 1),
            Err(CurveError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn bad_domain_and_component_count() {
        assert!(matches!(
            CurveSpec::parse("t;t;t", "t", 1.0, 0.0),
            Err(CurveError::InvalidDomain { .. })
        ));
        assert!(matches!(
            CurveSpec::parse("t;t", "t", 0.0, 1.0),
            Err(CurveError::ComponentCount(2))
        ));
        match CurveSpec::parse("t;t+;t", "t", 0.0, 1.0) {
            Err(CurveError::Parse { component, source }) => {
                assert_eq!(component, "y");
                assert_eq!(source.offset, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_reparametrization() {
        let c = reparametrize_to_arclength(&spec("2*t;t;0", 0.0, 1.0), 11).unwrap();
        assert_eq!(c.s[10], 2.0);
        for i in 0..c.len() {
            let s = c.s[i];
            assert_abs_diff_eq!(c.pos[i].y, s / 2.0, epsilon = 1e-14);
            let d = c.jets[i][1].derivatives();
            assert_abs_diff_eq!(d[1], 0.5, epsilon = 1e-15);
            assert_eq!(&d[2..], &[0.0; 4]);
        }
    }

    #[test]
    fn canonical_curve_is_unchanged() {
        let sp = spec("t;t^2/2;0", 0.0, 1.0);
        let c = reparametrize_to_arclength(&sp, 101).unwrap();
        for i in 0..c.len() {
            assert_eq!(c.t[i], c.s[i]);
            let direct = sp.fy.eval_jet::<6>(c.s[i]).unwrap();
            assert_eq!(c.jets[i][1], direct);
        }
    }

    #[test]
    fn exponential_reparametrization() {
        let c = reparametrize_to_arclength(&spec("exp(t)-1;t;0", 0.0, 1.0), 201).unwrap();
        assert_abs_diff_eq!(
            *c.s.last().unwrap(),
            std::f64::consts::E - 1.0,
            epsilon = 1e-15
        );
        for i in 0..c.len() {
            let s = c.s[i];
            let d = c.jets[i][1].derivatives();
            assert_abs_diff_eq!(d[0], (1.0 + s).ln(), epsilon = 1e-12);
            assert_abs_diff_eq!(d[1], 1.0 / (1.0 + s), epsilon = 1e-13);
            assert_abs_diff_eq!(d[2], -1.0 / (1.0 + s).powi(2), epsilon = 1e-12);
            assert_abs_diff_eq!(d[3], 2.0 / (1.0 + s).powi(3), epsilon = 1e-12);
            assert_abs_diff_eq!(d[4], -6.0 / (1.0 + s).powi(4), epsilon = 1e-11);
        }
    }

    #[test]
    fn reversed_orientation_starts_at_smallest_x() {
        let c = reparametrize_to_arclength(&spec("-t;t;t^2", 0.0, 1.0), 11).unwrap();
        assert_eq!(c.t[0], 1.0);
        assert_eq!(*c.t.last().unwrap(), 0.0);
        for i in 0..c.len() {
            // t = 1 - s
            assert_abs_diff_eq!(c.t[i], 1.0 - c.s[i], epsilon = 1e-14);
            assert_abs_diff_eq!(c.jets[i][1].derivative(1), -1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(c.jets[i][2].derivative(2), 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn inversion_accuracy_and_unit_tangent() {
        let sp = spec("t + t^3/3 + 0.5*sin(t);cos(t);t^2", -1.0, 2.0);
        let c = reparametrize_to_arclength(&sp, 1001).unwrap();
        let x0 = sp.fx.eval(-1.0).unwrap();
        for i in 0..c.len() {
            let x = sp.fx.eval(c.t[i]).unwrap();
            assert!((x - x0 - c.s[i]).abs() <= 1e-12);
            assert_eq!(c.pos[i].x, c.s[i]);
            assert_eq!(c.tangent(i).norm(), 1.0);
        }
        let h = c.h();
        for w in c.s.windows(2) {
            assert!(w[1] > w[0]);
            assert!(((w[1] - w[0]) - h).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            reparametrize_to_arclength(&spec("t;t;t", 0.0, 1.0), 7),
            Err(CurveError::TooFewSamples { min: 8, got: 7 })
        ));
    }

    #[test]
    fn positions_under_similarity() {
        let c = reparametrize_to_arclength(&spec("t;t^2;1", 0.0, 1.0), 9).unwrap();
        assert_eq!(sample_positions(&c, None), c.pos);
        let moved = sample_positions(&c, Some(&Similarity::translation(1.0, 2.0, 3.0)));
        for (p, q) in c.pos.iter().zip(&moved) {
            assert_eq!(*q, GalVec3::new(p.x + 1.0, p.y + 2.0, p.z + 3.0));
        }
        // phi = pi negates the fibre before shear and translation
        let m = Similarity {
            phi: std::f64::consts::PI,
            a22: 0.5,
            a21: 1.0,
            ..Similarity::IDENTITY
        };
        for (p, q) in c.pos.iter().zip(sample_positions(&c, Some(&m))) {
            assert_abs_diff_eq!(q.y, 1.0 + 0.5 * p.x - p.y, epsilon = 1e-15);
            assert_abs_diff_eq!(q.z, -p.z, epsilon = 1e-15);
        }
    }

    #[test]
    fn transformed_spec_matches_pointwise_similarity() {
        let sp = spec("t^3 + t;sin(t);exp(t)", 0.0, 1.0);
        let m = crate::galilean::random_isometry(3);
        let moved = sp.transformed(&m).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let p = GalVec3::new(
                sp.fx.eval(t).unwrap(),
                sp.fy.eval(t).unwrap(),
                sp.fz.eval(t).unwrap(),
            );
            let q = m.apply(&p);
            assert_abs_diff_eq!(moved.fx.eval(t).unwrap(), q.x, epsilon = 1e-14);
            assert_abs_diff_eq!(moved.fy.eval(t).unwrap(), q.y, epsilon = 1e-14);
            assert_abs_diff_eq!(moved.fz.eval(t).unwrap(), q.z, epsilon = 1e-14);
        }
    }
}
