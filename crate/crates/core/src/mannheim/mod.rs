//! Admissible Mannheim partners.
//!
//! The mate of a curve at offset `λ` is `α* = α + λN`. Because `N` is
//! isotropic the mate keeps `x* = s`, so it is already in canonical form and
//! shares the base's arc-length grid. Differentiating with the Frenet
//! equations gives
//!
//! ```text
//! α*'  = T + λτB
//! α*'' = (κ - λτ²) N + λτ' B
//! ```
//!
//! so the base normal is colinear with the mate binormal exactly when
//! `κ = λτ²`, and then the mate curvature is `|λτ'|`.

mod audit;
mod synth;

use thiserror::Error;

use crate::curve::{JetSource, SampledCurve};
use crate::expr::{EvalError, Jet};
use crate::frenet::{frame_jets, frenet_apparatus, FrenetData, FrenetError, KAPPA_EPS};
use crate::galilean::GalVec3;

pub use audit::{
    audit_claims, write_audit_json, ClaimId, ClaimReport, ThetaInterpretation, Verdict,
};
pub use synth::synthesize_from_natural;

/// Torsion at or below this in magnitude counts as vanishing.
pub const TAU_EPS: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum MannheimError {
    #[error("mate curvature vanishes at sample {index}; the mate frame is undefined")]
    DegenerateMate { index: usize },
    #[error("torsion vanishes at sample {index}")]
    TorsionVanishes { index: usize },
    #[error("curvature {kappa} is not positive at s = {s}")]
    KappaNonPositive { s: f64, kappa: f64 },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid interval [{s0}, {s1}]")]
    InvalidDomain { s0: f64, s1: f64 },
    #[error("base and frame data disagree in length ({curve} vs {frames})")]
    LengthMismatch { curve: usize, frames: usize },
    #[error(transparent)]
    Frenet(#[from] FrenetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A base curve, its offset mate, and both Frenet apparatuses.
#[derive(Debug, Clone)]
pub struct MatePair {
    pub base: SampledCurve,
    pub base_frenet: FrenetData,
    pub lambda: f64,
    pub mate: SampledCurve,
    mate_frenet: Result<FrenetData, usize>,
}

impl MatePair {
    /// The mate's Frenet data, or the first sample where its curvature
    /// vanishes.
    pub fn mate_frenet(&self) -> Result<&FrenetData, MannheimError> {
        self.mate_frenet
            .as_ref()
            .map_err(|&index| MannheimError::DegenerateMate { index })
    }

    pub fn is_degenerate(&self) -> bool {
        self.mate_frenet.is_err()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Galilean distance between corresponding points.
    pub fn distances(&self) -> Vec<f64> {
        self.base
            .pos
            .iter()
            .zip(&self.mate.pos)
            .map(|(p, q)| (*q - *p).norm())
            .collect()
    }

    /// Recovers base positions from the mate as `α* - λ σ B*`, where
    /// `σ = <N, B*>` is `+1` when the two point the same way and `-1` when
    /// they are opposite.
    pub fn reciprocal_base(&self) -> Result<Vec<GalVec3>, MannheimError> {
        let mate_fd = self.mate_frenet()?;
        Ok(self
            .mate
            .pos
            .iter()
            .zip(&mate_fd.frames)
            .zip(&self.base_frenet.frames)
            .map(|((q, mf), bf)| {
                let sigma = bf.normal.fibre_dot(&mf.binormal).signum();
                *q - mf.binormal * (self.lambda * sigma)
            })
            .collect())
    }
}

fn check_lengths(base: &SampledCurve, fd: &FrenetData) -> Result<(), MannheimError> {
    if base.len() != fd.len() {
        return Err(MannheimError::LengthMismatch {
            curve: base.len(),
            frames: fd.len(),
        });
    }
    Ok(())
}

/// Builds `α* = α + λN` on the base grid, with mate jets from exact
/// differentiation of the base normal. The base needs order-5 jets; the
/// mate carries order 3.
pub fn mannheim_mate(
    base: &SampledCurve,
    fd: &FrenetData,
    lambda: f64,
) -> Result<MatePair, MannheimError> {
    check_lengths(base, fd)?;
    let mut mate = SampledCurve {
        s: base.s.clone(),
        t: base.t.clone(),
        pos: Vec::with_capacity(base.len()),
        jets: Vec::with_capacity(base.len()),
        jet_order: 3,
        source: base.source,
    };
    for i in 0..base.len() {
        let fj = frame_jets(base, i)?;
        let p = base.pos[i] + fd.frames[i].normal * lambda;
        let [_, y, z] = base.jets[i];
        let mut my = (y + fj.normal[0] * lambda).resize::<4>().resize::<6>();
        let mut mz = (z + fj.normal[1] * lambda).resize::<4>().resize::<6>();
        let mut cx = [f64::NAN; 6];
        cx[..4].copy_from_slice(&[base.s[i], 1.0, 0.0, 0.0]);
        set_value(&mut my, p.y);
        set_value(&mut mz, p.z);
        mate.pos.push(p);
        mate.jets.push([Jet::from_coeffs(cx), my, mz]);
    }
    let mate_frenet = match frenet_apparatus(&mate) {
        Ok(fd) => Ok(fd),
        Err(FrenetError::DegenerateCurvature { index, .. }) => Err(index),
        Err(e) => return Err(e.into()),
    };
    Ok(MatePair {
        base: base.clone(),
        base_frenet: fd.clone(),
        lambda,
        mate,
        mate_frenet,
    })
}

fn set_value(j: &mut Jet<6>, v: f64) {
    let mut c = *j.coeffs();
    c[0] = v;
    *j = Jet::from_coeffs(c);
}

/// Outcome of [`detect_partner`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detection {
    Mannheim {
        /// Mean of the pointwise offsets `κ/τ²`.
        lambda: f64,
        /// `max - min` of the pointwise offsets.
        spread: f64,
        /// The mate would be a straight line (`τ'` vanishes).
        degenerate: bool,
    },
    NotMannheim {
        lambda_min: f64,
        lambda_max: f64,
    },
}

impl Detection {
    /// JSON object for a partner, or the bare token `not_mannheim`.
    pub fn to_json(&self) -> String {
        match self {
            Detection::Mannheim {
                lambda,
                spread,
                degenerate,
            } => format!(
                "{{\"lambda\": {}, \"spread\": {}, \"degenerate\": {degenerate}}}",
                fmt_sci6(*lambda),
                fmt_sci6(*spread)
            ),
            Detection::NotMannheim { .. } => "not_mannheim".to_string(),
        }
    }
}

/// Scientific notation, 6 significant digits.
pub fn fmt_sci6(v: f64) -> String {
    format!("{v:.5e}")
}

/// Pointwise Mannheim offset `κ/τ²`: the value of `λ` that cancels the `N`
/// component of the mate's `T*'`.
pub fn pointwise_offsets(fd: &FrenetData) -> Result<Vec<f64>, MannheimError> {
    fd.frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.tau.abs() <= TAU_EPS {
                Err(MannheimError::TorsionVanishes { index: i })
            } else {
                Ok(f.kappa / (f.tau * f.tau))
            }
        })
        .collect()
}

/// Decides whether the curve has a Mannheim partner by checking that
/// `κ/τ²` is constant along it.
pub fn detect_partner(base: &SampledCurve, fd: &FrenetData) -> Result<Detection, MannheimError> {
    check_lengths(base, fd)?;
    let lambdas = pointwise_offsets(fd)?;
    let (lo, hi) = min_max(&lambdas);
    let mean = mean(&lambdas);
    let tol = base.source.tolerance();
    if hi - lo > tol * mean.abs().max(1.0) {
        return Ok(Detection::NotMannheim {
            lambda_min: lo,
            lambda_max: hi,
        });
    }
    // mate curvature would be |λ τ'|
    let mut max_kappa_star: f64 = 0.0;
    for i in 0..base.len() {
        let tau = frame_jets(base, i)?.tau;
        max_kappa_star = max_kappa_star.max((mean * tau.derivative(1)).abs());
    }
    let threshold = match base.source {
        JetSource::Exact => KAPPA_EPS,
        JetSource::Interpolated => tol * fd.frames.iter().map(|f| f.kappa).fold(1.0, f64::max),
    };
    Ok(Detection::Mannheim {
        lambda: mean,
        spread: hi - lo,
        degenerate: max_kappa_star <= threshold,
    })
}

/// `max (1 - |<N, B*>|)` over samples; zero iff the base normal and the
/// mate binormal are colinear everywhere.
pub fn colinearity_residual(pair: &MatePair) -> Result<f64, MannheimError> {
    let mate_fd = pair.mate_frenet()?;
    Ok(pair
        .base_frenet
        .frames
        .iter()
        .zip(&mate_fd.frames)
        .map(|(b, m)| 1.0 - b.normal.fibre_dot(&m.binormal).abs())
        .fold(0.0, f64::max))
}

/// `max |κ - λτ²| / max κ`, the coincidence condition evaluated from the
/// base apparatus alone.
pub fn coincidence_defect(fd: &FrenetData, lambda: f64) -> f64 {
    let kmax = fd.frames.iter().map(|f| f.kappa).fold(0.0, f64::max);
    fd.frames
        .iter()
        .map(|f| (f.kappa - lambda * f.tau * f.tau).abs())
        .fold(0.0, f64::max)
        / kmax
}

/// Angle between the base and mate tangents at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameAngles {
    /// Euclidean angle between `T` and `T*` as ordinary 3-vectors.
    pub euclidean: f64,
    /// Fibre length of the isotropic vector `T* - T`.
    pub galilean: f64,
}

pub fn angle_between_frames(pair: &MatePair) -> Vec<FrameAngles> {
    (0..pair.len())
        .map(|i| {
            let t = pair.base.tangent(i);
            let m = pair.mate.tangent(i);
            let cross = GalVec3::new(
                t.y * m.z - t.z * m.y,
                t.z * m.x - t.x * m.z,
                t.x * m.y - t.y * m.x,
            );
            FrameAngles {
                euclidean: cross.euclidean_norm().atan2(t.euclidean_dot(&m)),
                galilean: (m - t).fibre_norm(),
            }
        })
        .collect()
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
