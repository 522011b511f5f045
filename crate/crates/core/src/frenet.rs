//! Frenet apparatus of an admissible curve in canonical form.
//!
//! With `α(s) = (s, y(s), z(s))`:
//!
//! ```text
//! κ = sqrt(y''² + z''²)
//! τ = (y'' z''' - z'' y''') / κ²
//! T = (1, y', z'),  N = (0, y'', z'') / κ,  B = (0, -z'', y'') / κ
//! ```
//!
//! and the frame satisfies `T' = κN`, `N' = τB`, `B' = -τN`.

use std::io::{self, Write};

use thiserror::Error;

use crate::curve::SampledCurve;
use crate::expr::{Jet3, Jet5};
use crate::galilean::GalVec3;

/// Curvature at or below this leaves the frame undefined.
pub const KAPPA_EPS: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum FrenetError {
    #[error("curvature {kappa:e} vanishes at sample {index}")]
    DegenerateCurvature { index: usize, kappa: f64 },
    #[error("grid has {0} samples, need at least 5")]
    GridTooSmall(usize),
    #[error("curve carries derivatives up to order {have}, need {need}")]
    InsufficientOrder { have: usize, need: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub tangent: GalVec3,
    pub normal: GalVec3,
    pub binormal: GalVec3,
    pub kappa: f64,
    pub tau: f64,
}

impl FrenetFrame {
    /// Frame from order-3 jets of `(x, y, z)` with respect to arc length.
    /// `None` when the curvature is at or below [`KAPPA_EPS`].
    pub fn from_jets(jets: &[Jet3; 3]) -> Option<FrenetFrame> {
        let [_, y, z] = jets;
        let (y1, y2, y3) = (y.v1(), y.v2(), y.v3());
        let (z1, z2, z3) = (z.v1(), z.v2(), z.v3());
        let kappa = y2.hypot(z2);
        if !(kappa > KAPPA_EPS) {
            return None;
        }
        let tau = (y2 * z3 - z2 * y3) / (kappa * kappa);
        Some(FrenetFrame {
            tangent: GalVec3::new(1.0, y1, z1),
            normal: GalVec3::new(0.0, y2 / kappa, z2 / kappa),
            binormal: GalVec3::new(0.0, -z2 / kappa, y2 / kappa),
            kappa,
            tau,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrenetData {
    pub frames: Vec<FrenetFrame>,
}

impl FrenetData {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.kappa).collect()
    }

    pub fn tau(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.tau).collect()
    }
}

pub fn frenet_apparatus(curve: &SampledCurve) -> Result<FrenetData, FrenetError> {
    if curve.jet_order < 3 {
        return Err(FrenetError::InsufficientOrder {
            have: curve.jet_order,
            need: 3,
        });
    }
    let frames = (0..curve.len())
        .map(|i| {
            let jets = curve.jet3(i);
            FrenetFrame::from_jets(&jets).ok_or(FrenetError::DegenerateCurvature {
                index: i,
                kappa: jets[1].v2().hypot(jets[2].v2()),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrenetData { frames })
}

/// Curvature, torsion and principal normal as jets in arc length.
///
/// Valid orders: `kappa` and `normal` up to 3, `tau` up to 2. Higher
/// coefficients are NaN.
#[derive(Debug, Clone, Copy)]
pub struct FrameJets {
    pub kappa: Jet5,
    pub tau: Jet5,
    /// `(N.y, N.z)`.
    pub normal: [Jet5; 2],
}

/// Needs position jets of order 5.
pub fn frame_jets(curve: &SampledCurve, i: usize) -> Result<FrameJets, FrenetError> {
    if curve.jet_order < 5 {
        return Err(FrenetError::InsufficientOrder {
            have: curve.jet_order,
            need: 5,
        });
    }
    let [_, y, z] = &curve.jets[i];
    let y2 = y.differentiate().differentiate();
    let z2 = z.differentiate().differentiate();
    let kappa = (y2 * y2 + z2 * z2).sqrt();
    if !(kappa.value() > KAPPA_EPS) {
        return Err(FrenetError::DegenerateCurvature {
            index: i,
            kappa: kappa.value(),
        });
    }
    let tau = (y2 * z2.differentiate() - z2 * y2.differentiate()) / (kappa * kappa);
    Ok(FrameJets {
        kappa,
        tau,
        normal: [y2 / kappa, z2 / kappa],
    })
}

/// Largest fibre-norm violations of the three Frenet equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetResiduals {
    /// `max |T' - κN|`
    pub tangent: f64,
    /// `max |N' - τB|`
    pub normal: f64,
    /// `max |B' + τN|`
    pub binormal: f64,
}

impl FrenetResiduals {
    pub fn max(&self) -> f64 {
        self.tangent.max(self.normal).max(self.binormal)
    }
}

/// Fourth-order central difference of `f` at interior index `i`.
pub fn central_diff4<T, F>(samples: &[T], i: usize, h: f64, f: F) -> f64
where
    F: Fn(&T) -> f64,
{
    (f(&samples[i - 2]) - 8.0 * f(&samples[i - 1]) + 8.0 * f(&samples[i + 1]) - f(&samples[i + 2]))
        / (12.0 * h)
}

fn diff_vec(
    frames: &[FrenetFrame],
    i: usize,
    h: f64,
    pick: fn(&FrenetFrame) -> GalVec3,
) -> GalVec3 {
    GalVec3::new(
        central_diff4(frames, i, h, |f| pick(f).x),
        central_diff4(frames, i, h, |f| pick(f).y),
        central_diff4(frames, i, h, |f| pick(f).z),
    )
}

/// Checks the Frenet equations with frame derivatives taken by finite
/// differences on the arc-length grid. Only interior samples are used.
pub fn frenet_residuals(
    curve: &SampledCurve,
    fd: &FrenetData,
) -> Result<FrenetResiduals, FrenetError> {
    let n = fd.len();
    if n < 5 || curve.len() != n {
        return Err(FrenetError::GridTooSmall(n.min(curve.len())));
    }
    let h = curve.h();
    let mut r = FrenetResiduals {
        tangent: 0.0,
        normal: 0.0,
        binormal: 0.0,
    };
    for i in 2..n - 2 {
        let f = &fd.frames[i];
        let dt = diff_vec(&fd.frames, i, h, |f| f.tangent);
        let dn = diff_vec(&fd.frames, i, h, |f| f.normal);
        let db = diff_vec(&fd.frames, i, h, |f| f.binormal);
        r.tangent = r.tangent.max((dt - f.normal * f.kappa).fibre_norm());
        r.normal = r.normal.max((dn - f.binormal * f.tau).fibre_norm());
        r.binormal = r.binormal.max((db + f.normal * f.tau).fibre_norm());
    }
    Ok(r)
}

pub const CSV_HEADER: &str = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau";

/// 17 significant digits, round-trips any `f64`. Negative zero prints as zero.
pub fn fmt_sig17(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// Appends the per-sample columns (position, frame, curvature, torsion).
pub fn push_row_fields(out: &mut Vec<String>, p: &GalVec3, f: &FrenetFrame) {
    for v in [
        p.x,
        p.y,
        p.z,
        f.tangent.x,
        f.tangent.y,
        f.tangent.z,
        f.normal.x,
        f.normal.y,
        f.normal.z,
        f.binormal.x,
        f.binormal.y,
        f.binormal.z,
        f.kappa,
        f.tau,
    ] {
        out.push(fmt_sig17(v));
    }
}

/// Writes the Frenet CSV (`\n` line endings, header [`CSV_HEADER`]).
pub fn write_csv<W: Write>(mut w: W, curve: &SampledCurve, fd: &FrenetData) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    let mut fields = Vec::with_capacity(15);
    for (i, f) in fd.frames.iter().enumerate() {
        fields.clear();
        fields.push(fmt_sig17(curve.s[i]));
        push_row_fields(&mut fields, &curve.pos[i], f);
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{reparametrize_to_arclength, CurveSpec};
    use approx::assert_abs_diff_eq;

    fn sampled(text: &str, t0: f64, t1: f64, n: usize) -> SampledCurve {
        let spec = CurveSpec::parse(text, "t", t0, t1).unwrap();
        reparametrize_to_arclength(&spec, n).unwrap()
    }

    #[test]
    fn cubic_at_one() {
        let c = sampled("t;t^2/2;t^3/6", 0.0, 1.0, 11);
        let f = frenet_apparatus(&c).unwrap().frames[10];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(f.kappa, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(f.tau, 0.5, epsilon = 1e-15);
        assert_eq!(f.tangent, GalVec3::new(1.0, 1.0, 0.5));
        assert_abs_diff_eq!(f.normal.y, r, epsilon = 1e-15);
        assert_abs_diff_eq!(f.normal.z, r, epsilon = 1e-15);
        assert_abs_diff_eq!(f.binormal.y, -r, epsilon = 1e-15);
        assert_abs_diff_eq!(f.binormal.z, r, epsilon = 1e-15);
    }

    #[test]
    fn helix_has_unit_curvature_and_torsion() {
        let c = sampled("t;-cos(t);-sin(t)", 0.0, 3.0, 301);
        for f in frenet_apparatus(&c).unwrap().frames {
            assert_abs_diff_eq!(f.kappa, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f.tau, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn straight_line_is_degenerate() {
        let c = sampled("t;0;0", 0.0, 1.0, 11);
        assert_eq!(
            frenet_apparatus(&c).unwrap_err(),
            FrenetError::DegenerateCurvature {
                index: 0,
                kappa: 0.0
            }
        );
    }

    #[test]
    fn frame_invariants() {
        let c = sampled("t + t^3;sin(2*t);cosh(t)", -1.0, 1.0, 201);
        for f in frenet_apparatus(&c).unwrap().frames {
            assert_eq!(f.tangent.x, 1.0);
            assert_eq!(f.normal.x, 0.0);
            assert_eq!(f.binormal.x, 0.0);
            assert_abs_diff_eq!(f.normal.fibre_dot(&f.normal), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f.binormal.fibre_dot(&f.binormal), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f.normal.fibre_dot(&f.binormal), 0.0, epsilon = 1e-15);
            assert_eq!((f.binormal.y, f.binormal.z), (-f.normal.z, f.normal.y));
            assert!(f.kappa > 0.0);
        }
    }

    #[test]
    fn mirror_flips_torsion_only() {
        let a = frenet_apparatus(&sampled("t;t^2;t^3 + t", 0.0, 1.0, 51)).unwrap();
        let b = frenet_apparatus(&sampled("t;t^2;-(t^3 + t)", 0.0, 1.0, 51)).unwrap();
        for (f, g) in a.frames.iter().zip(&b.frames) {
            assert_eq!(f.kappa, g.kappa);
            assert_eq!(f.tau, -g.tau);
            assert!(f.tau != 0.0);
        }
    }

    #[test]
    fn planar_curve_has_zero_torsion() {
        let fd = frenet_apparatus(&sampled("2*t + sin(t);exp(t);3", 0.0, 1.0, 51)).unwrap();
        assert!(fd.tau().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn residuals_on_smooth_families() {
        for text in ["t;-cos(t);-sin(t)", "t;t^2/2;t^3/6"] {
            let c = sampled(text, 0.0, 1.0, 1001);
            let fd = frenet_apparatus(&c).unwrap();
            let r = frenet_residuals(&c, &fd).unwrap();
            assert!(r.max() <= 1e-8, "{text}: {r:?}");
        }
        let c = sampled("t;t^2/2;0", 0.0, 1.0, 1001);
        let fd = frenet_apparatus(&c).unwrap();
        let r = frenet_residuals(&c, &fd).unwrap();
        assert!(r.normal <= 1e-8);
    }

    #[test]
    fn residuals_need_five_samples() {
        let c = sampled("t;t^2;0", 0.0, 1.0, 8);
        let mut fd = frenet_apparatus(&c).unwrap();
        fd.frames.truncate(4);
        assert_eq!(
            frenet_residuals(&c, &fd).unwrap_err(),
            FrenetError::GridTooSmall(4)
        );
    }

    #[test]
    fn frame_jets_agree_with_closed_forms() {
        // cubic: κ = sqrt(1+s²), τ = 1/(1+s²)
        let c = sampled("t;t^2/2;t^3/6", 0.0, 1.0, 11);
        for i in 0..c.len() {
            let s = c.s[i];
            let j = frame_jets(&c, i).unwrap();
            let q = 1.0 + s * s;
            assert_abs_diff_eq!(j.kappa.derivative(1), s / q.sqrt(), epsilon = 1e-14);
            assert_abs_diff_eq!(j.tau.derivative(1), -2.0 * s / (q * q), epsilon = 1e-14);
            assert_abs_diff_eq!(
                j.tau.derivative(2),
                (6.0 * s * s - 2.0) / (q * q * q),
                epsilon = 1e-13
            );
            assert!(j.tau.derivative(3).is_nan());
        }
    }

    #[test]
    fn csv_layout() {
        let c = sampled("t;t^2/2;t^3/6", 0.0, 1.0, 9);
        let fd = frenet_apparatus(&c).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &c, &fd).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row: Vec<f64> = lines
            .last()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row.len(), 15);
        assert_eq!(row[13], fd.frames[8].kappa);
        assert!(!text.contains('\r'));
    }
}
