//! Pointwise residuals for the relations a Mannheim pair is expected to
//! satisfy, evaluated under two readings of the angle between `T` and `T*`.

use std::fmt;
use std::io::{self, Write};

use super::{angle_between_frames, colinearity_residual, fmt_sci6, MatePair};
use crate::frenet::{central_diff4, FrenetData};

/// Below this `|sin θ|` the cotangent is treated as undefined.
const SIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    /// Distance between corresponding points is constant.
    DistanceConstant,
    /// `λ τ cot θ = 1`.
    CotangentRelation,
    /// Base torsion is constant exactly when the normals line up.
    TorsionConstant,
    /// `τ* = tan θ / λ`.
    MateTorsion,
    /// `τ τ*` is constant and equals `tan² θ / λ²`.
    TorsionProduct,
    /// `κ* = -dθ/ds`.
    MateCurvature,
    /// `κ = τ* sin θ`.
    CurvatureRelation,
    /// `τ = -τ* cos θ`.
    TorsionRelation,
    /// `κ/τ + tan θ` is constant.
    CurvatureTorsionRatio,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::DistanceConstant,
        ClaimId::CotangentRelation,
        ClaimId::TorsionConstant,
        ClaimId::MateTorsion,
        ClaimId::TorsionProduct,
        ClaimId::MateCurvature,
        ClaimId::CurvatureRelation,
        ClaimId::TorsionRelation,
        ClaimId::CurvatureTorsionRatio,
    ];

    /// Identifier used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::DistanceConstant => "thm3_1",
            ClaimId::CotangentRelation => "eq3_7",
            ClaimId::TorsionConstant => "thm3_2",
            ClaimId::MateTorsion => "eq3_9",
            ClaimId::TorsionProduct => "schell_3_10",
            ClaimId::MateCurvature => "thm3_4_i",
            ClaimId::CurvatureRelation => "thm3_4_ii",
            ClaimId::TorsionRelation => "thm3_4_iii",
            ClaimId::CurvatureTorsionRatio => "ratio_kappa_tau",
        }
    }

    fn needs_mate_frame(self) -> bool {
        matches!(
            self,
            ClaimId::TorsionConstant
                | ClaimId::MateTorsion
                | ClaimId::TorsionProduct
                | ClaimId::MateCurvature
                | ClaimId::CurvatureRelation
                | ClaimId::TorsionRelation
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThetaInterpretation {
    Euclidean,
    Galilean,
}

impl ThetaInterpretation {
    pub const ALL: [ThetaInterpretation; 2] = [
        ThetaInterpretation::Euclidean,
        ThetaInterpretation::Galilean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ThetaInterpretation::Euclidean => "euclidean",
            ThetaInterpretation::Galilean => "galilean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Degenerate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    pub id: ClaimId,
    pub theta: ThetaInterpretation,
    /// `None` when no sample admits a value.
    pub max_residual: Option<f64>,
    pub mean_residual: Option<f64>,
    pub verdict: Verdict,
}

/// Per-sample residuals plus the magnitude of the compared terms.
struct Evaluation {
    residuals: Vec<f64>,
    scale: f64,
    /// Some sample had no defined value.
    undefined: bool,
}

impl Evaluation {
    fn new() -> Self {
        Evaluation {
            residuals: Vec::new(),
            scale: 1.0,
            undefined: false,
        }
    }

    fn push(&mut self, r: f64, terms: &[f64]) {
        if r.is_finite() {
            self.residuals.push(r);
            for t in terms {
                self.scale = self.scale.max(t.abs());
            }
        } else {
            self.undefined = true;
        }
    }

    fn stats(&self) -> (Option<f64>, Option<f64>) {
        if self.residuals.is_empty() {
            return (None, None);
        }
        let max = self.residuals.iter().copied().fold(0.0, f64::max);
        let mean = self.residuals.iter().sum::<f64>() / self.residuals.len() as f64;
        (Some(max), Some(mean))
    }
}

fn spread_from_mean(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean).abs()).collect()
}

struct Inputs<'a> {
    pair: &'a MatePair,
    mate_fd: Option<&'a FrenetData>,
    tol: f64,
}

impl Inputs<'_> {
    fn base(&self) -> &FrenetData {
        &self.pair.base_frenet
    }

    fn evaluate(&self, id: ClaimId, theta: &[f64]) -> Evaluation {
        let lambda = self.pair.lambda;
        let base = &self.base().frames;
        let mut ev = Evaluation::new();
        match id {
            ClaimId::DistanceConstant => {
                let d = self.pair.distances();
                for (r, di) in spread_from_mean(&d).into_iter().zip(&d) {
                    ev.push(r, &[*di]);
                }
            }
            ClaimId::CotangentRelation => {
                for (f, &th) in base.iter().zip(theta) {
                    let r = if th.sin().abs() <= SIN_EPS || lambda == 0.0 {
                        f64::NAN
                    } else {
                        let lhs = lambda * f.tau / th.tan();
                        (lhs - 1.0).abs()
                    };
                    ev.push(r, &[1.0]);
                }
            }
            ClaimId::TorsionConstant => {
                let tau: Vec<f64> = base.iter().map(|f| f.tau).collect();
                for (r, t) in spread_from_mean(&tau).into_iter().zip(&tau) {
                    ev.push(r, &[*t]);
                }
            }
            ClaimId::MateTorsion => {
                let mate = &self.mate_fd.expect("mate frame").frames;
                for (m, &th) in mate.iter().zip(theta) {
                    let rhs = th.tan() / lambda;
                    ev.push((m.tau - rhs).abs(), &[m.tau, rhs]);
                }
            }
            ClaimId::TorsionProduct => {
                let mate = &self.mate_fd.expect("mate frame").frames;
                let prod: Vec<f64> = base.iter().zip(mate).map(|(b, m)| b.tau * m.tau).collect();
                let spread = spread_from_mean(&prod);
                for ((p, sp), &th) in prod.iter().zip(spread).zip(theta) {
                    let rhs = (th.tan() / lambda).powi(2);
                    ev.push(sp.max((p - rhs).abs()), &[*p, rhs]);
                }
            }
            ClaimId::MateCurvature => {
                let mate = &self.mate_fd.expect("mate frame").frames;
                let h = self.pair.mate.h();
                for i in 2..theta.len().saturating_sub(2) {
                    let dtheta = central_diff4(theta, i, h, |v| *v);
                    let k = mate[i].kappa;
                    ev.push((k + dtheta).abs(), &[k, dtheta]);
                }
            }
            ClaimId::CurvatureRelation => {
                let mate = &self.mate_fd.expect("mate frame").frames;
                for ((b, m), &th) in base.iter().zip(mate).zip(theta) {
                    let rhs = m.tau * th.sin();
                    ev.push((b.kappa - rhs).abs(), &[b.kappa, rhs]);
                }
            }
            ClaimId::TorsionRelation => {
                let mate = &self.mate_fd.expect("mate frame").frames;
                for ((b, m), &th) in base.iter().zip(mate).zip(theta) {
                    let rhs = m.tau * th.cos();
                    ev.push((b.tau + rhs).abs(), &[b.tau, rhs]);
                }
            }
            ClaimId::CurvatureTorsionRatio => {
                let q: Vec<f64> = base
                    .iter()
                    .zip(theta)
                    .map(|(f, th)| f.kappa / f.tau + th.tan())
                    .collect();
                if q.iter().all(|v| v.is_finite()) {
                    for (r, v) in spread_from_mean(&q).into_iter().zip(&q) {
                        ev.push(r, &[*v]);
                    }
                } else {
                    ev.undefined = true;
                }
            }
        }
        ev
    }

    fn report(&self, id: ClaimId, interp: ThetaInterpretation, theta: &[f64]) -> ClaimReport {
        let degenerate = |id, theta| ClaimReport {
            id,
            theta,
            max_residual: None,
            mean_residual: None,
            verdict: Verdict::Degenerate,
        };
        if id.needs_mate_frame() && self.mate_fd.is_none() {
            return degenerate(id, interp);
        }
        let lambda_zero = self.pair.lambda == 0.0;
        if lambda_zero && matches!(id, ClaimId::MateTorsion | ClaimId::TorsionProduct) {
            return degenerate(id, interp);
        }
        let ev = self.evaluate(id, theta);
        let (max, mean) = ev.stats();
        let verdict = if id == ClaimId::TorsionConstant {
            // compares two tests rather than one residual
            let colinear = colinearity_residual(self.pair).is_ok_and(|c| c <= self.tol);
            let constant = max.is_some_and(|m| m <= self.tol * ev.scale);
            if colinear == constant {
                Verdict::Holds
            } else {
                Verdict::Fails
            }
        } else if ev.undefined {
            Verdict::Degenerate
        } else {
            match max {
                Some(m) if m <= self.tol * ev.scale => Verdict::Holds,
                Some(_) => Verdict::Fails,
                None => Verdict::Degenerate,
            }
        };
        ClaimReport {
            id,
            theta: interp,
            max_residual: max,
            mean_residual: mean,
            verdict,
        }
    }
}

/// Evaluates every claim under both angle readings, ordered by claim then
/// angle reading. Never fails: missing quantities yield `Degenerate`.
pub fn audit_claims(pair: &MatePair) -> Vec<ClaimReport> {
    let inputs = Inputs {
        pair,
        mate_fd: pair.mate_frenet().ok(),
        tol: pair.base.source.tolerance(),
    };
    let angles = angle_between_frames(pair);
    let euclid: Vec<f64> = angles.iter().map(|a| a.euclidean).collect();
    let galilean: Vec<f64> = angles.iter().map(|a| a.galilean).collect();
    let mut out = Vec::with_capacity(ClaimId::ALL.len() * 2);
    for id in ClaimId::ALL {
        for interp in ThetaInterpretation::ALL {
            let theta = match interp {
                ThetaInterpretation::Euclidean => &euclid,
                ThetaInterpretation::Galilean => &galilean,
            };
            out.push(inputs.report(id, interp, theta));
        }
    }
    out
}

fn opt_sci(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), fmt_sci6)
}

/// Writes the report as one JSON object followed by a newline.
pub fn write_audit_json<W: Write>(
    mut w: W,
    lambda: f64,
    n_samples: usize,
    claims: &[ClaimReport],
) -> io::Result<()> {
    let items: Vec<String> = claims
        .iter()
        .map(|c| {
            format!(
                "{{\"id\": \"{}\", \"theta\": \"{}\", \"max_residual\": {}, \"mean_residual\": {}, \"verdict\": \"{}\"}}",
                c.id,
                c.theta.as_str(),
                opt_sci(c.max_residual),
                opt_sci(c.mean_residual),
                c.verdict.as_str()
            )
        })
        .collect();
    writeln!(
        w,
        "{{\"pair\": {{\"lambda\": {}, \"n_samples\": {n_samples}}}, \"claims\": [{}]}}",
        fmt_sci6(lambda),
        items.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{reparametrize_to_arclength, CurveSpec};
    use crate::expr::Expression;
    use crate::frenet::frenet_apparatus;
    use crate::mannheim::{mannheim_mate, synthesize_from_natural};

    fn family_pair(lambda: f64) -> MatePair {
        let k = Expression::parse("0.5*s^2", "s").unwrap();
        let t = Expression::parse("s", "s").unwrap();
        let c = synthesize_from_natural(&k, &t, 1.0, 2.0, 1001).unwrap();
        let fd = frenet_apparatus(&c).unwrap();
        mannheim_mate(&c, &fd, lambda).unwrap()
    }

    fn find(r: &[ClaimReport], id: ClaimId, th: ThetaInterpretation) -> &ClaimReport {
        r.iter().find(|c| c.id == id && c.theta == th).unwrap()
    }

    #[test]
    fn full_audit_shape() {
        let pair = family_pair(0.5);
        let r = audit_claims(&pair);
        assert_eq!(r.len(), 18);
        for (k, c) in r.iter().enumerate() {
            assert_eq!(c.id, ClaimId::ALL[k / 2]);
            assert_eq!(c.theta, ThetaInterpretation::ALL[k % 2]);
            assert!(
                c.max_residual.is_some() && c.mean_residual.is_some(),
                "{c:?}"
            );
        }
        for th in ThetaInterpretation::ALL {
            let d = find(&r, ClaimId::DistanceConstant, th);
            assert_eq!(d.verdict, Verdict::Holds);
            assert!(d.max_residual.unwrap() <= 1e-9);
        }
    }

    #[test]
    fn zero_offset_is_degenerate_for_cotangent() {
        let pair = family_pair(0.0);
        let r = audit_claims(&pair);
        for th in ThetaInterpretation::ALL {
            for id in [
                ClaimId::CotangentRelation,
                ClaimId::MateTorsion,
                ClaimId::TorsionProduct,
            ] {
                assert_eq!(find(&r, id, th).verdict, Verdict::Degenerate, "{id}");
            }
            assert_eq!(
                find(&r, ClaimId::DistanceConstant, th).verdict,
                Verdict::Holds
            );
        }
    }

    #[test]
    fn degenerate_mate_never_fails_mate_claims() {
        let spec = CurveSpec::parse("t;-cos(t);-sin(t)", "t", 0.0, 3.0).unwrap();
        let c = reparametrize_to_arclength(&spec, 301).unwrap();
        let fd = frenet_apparatus(&c).unwrap();
        let pair = mannheim_mate(&c, &fd, 1.0).unwrap();
        let r = audit_claims(&pair);
        assert_eq!(r.len(), 18);
        for c in &r {
            if c.id.needs_mate_frame() {
                assert_eq!(c.verdict, Verdict::Degenerate);
                assert_eq!(c.max_residual, None);
            }
        }
        assert_eq!(
            find(&r, ClaimId::DistanceConstant, ThetaInterpretation::Galilean).verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn ratio_residual_is_reported() {
        let pair = family_pair(0.5);
        let r = audit_claims(&pair);
        let ratio = find(
            &r,
            ClaimId::CurvatureTorsionRatio,
            ThetaInterpretation::Galilean,
        );
        assert!(ratio.max_residual.unwrap() > 0.0);
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        write_audit_json(&mut buf, 0.5, 1001, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"pair\": {\"lambda\": 5.00000e-1, \"n_samples\": 1001}, \"claims\": []}\n"
        );
        let report = ClaimReport {
            id: ClaimId::TorsionProduct,
            theta: ThetaInterpretation::Euclidean,
            max_residual: Some(1.234567891e-8),
            mean_residual: None,
            verdict: Verdict::Degenerate,
        };
        let mut buf = Vec::new();
        write_audit_json(&mut buf, -2.0, 8, &[report]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(
            "{\"id\": \"schell_3_10\", \"theta\": \"euclidean\", \"max_residual\": 1.23457e-8, \"mean_residual\": null, \"verdict\": \"degenerate\"}"
        ));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["pair"]["lambda"], -2.0);
    }
}
