//! Curves from prescribed curvature and torsion.
//!
//! In canonical form the Frenet equations reduce to a planar problem for the
//! fibre part of the tangent derivative. With `ψ' = τ`:
//!
//! ```text
//! y'' = κ cos ψ,   z'' = κ sin ψ
//! ```
//!
//! Positions come from RK4 on `(ψ, y', z', y, z)` starting at zero. Jets of
//! order 2 and up are exact: they follow from the jets of `κ` and `ψ`.

use super::MannheimError;
use crate::curve::{JetSource, SampledCurve};
use crate::expr::{Expression, Jet, Jet5};
use crate::galilean::GalVec3;

const MIN_SAMPLES: usize = 16;

struct Rhs<'a> {
    kappa: &'a Expression,
    tau: &'a Expression,
}

impl Rhs<'_> {
    fn kappa_at(&self, s: f64) -> Result<f64, MannheimError> {
        let k = self.kappa.eval(s)?;
        if !(k > 0.0) {
            return Err(MannheimError::KappaNonPositive { s, kappa: k });
        }
        Ok(k)
    }

    fn eval(&self, s: f64, u: &[f64; 5]) -> Result<[f64; 5], MannheimError> {
        let k = self.kappa_at(s)?;
        let (sn, cs) = u[0].sin_cos();
        Ok([self.tau.eval(s)?, k * cs, k * sn, u[1], u[2]])
    }
}

fn axpy(u: &[f64; 5], a: f64, d: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| u[i] + a * d[i])
}

fn rk4_step(rhs: &Rhs, s: f64, h: f64, u: &[f64; 5]) -> Result<[f64; 5], MannheimError> {
    let k1 = rhs.eval(s, u)?;
    let k2 = rhs.eval(s + 0.5 * h, &axpy(u, 0.5 * h, &k1))?;
    let k3 = rhs.eval(s + 0.5 * h, &axpy(u, 0.5 * h, &k2))?;
    let k4 = rhs.eval(s + h, &axpy(u, h, &k3))?;
    Ok(std::array::from_fn(|i| {
        u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}

/// Jets of `y`, `z` at one grid point from the integrated state and the
/// jets of `κ`, `τ`.
fn position_jets(u: &[f64; 5], kappa: &Jet5, tau: &Jet5) -> (Jet5, Jet5) {
    let tc = tau.coeffs();
    let mut psi = [0.0; 6];
    psi[0] = u[0];
    for k in 1..6 {
        psi[k] = tc[k - 1] / k as f64;
    }
    let (sn, cs) = Jet::from_coeffs(psi).sin_cos();
    let y2 = (*kappa * cs).coeffs().to_owned();
    let z2 = (*kappa * sn).coeffs().to_owned();
    let lift = |v: f64, dv: f64, second: [f64; 6]| {
        let mut c = [0.0; 6];
        c[0] = v;
        c[1] = dv;
        for k in 0..4 {
            c[k + 2] = second[k] / ((k + 1) * (k + 2)) as f64;
        }
        Jet::from_coeffs(c)
    };
    (lift(u[3], u[1], y2), lift(u[4], u[2], z2))
}

/// Integrates the natural equations on `n` uniform samples of `[s0, s1]`.
/// The result starts at the origin with `T = (1, 0, 0)` and `N = (0, 1, 0)`.
pub fn synthesize_from_natural(
    kappa: &Expression,
    tau: &Expression,
    s0: f64,
    s1: f64,
    n: usize,
) -> Result<SampledCurve, MannheimError> {
    if n < MIN_SAMPLES {
        return Err(MannheimError::TooFewSamples {
            min: MIN_SAMPLES,
            got: n,
        });
    }
    if !(s0.is_finite() && s1.is_finite() && s1 > s0) {
        return Err(MannheimError::InvalidDomain { s0, s1 });
    }
    let rhs = Rhs { kappa, tau };
    let h = (s1 - s0) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { s1 } else { s0 + i as f64 * h })
        .collect();

    let mut u = [0.0; 5];
    let mut out = SampledCurve {
        s: grid.clone(),
        t: grid.clone(),
        pos: Vec::with_capacity(n),
        jets: Vec::with_capacity(n),
        jet_order: 5,
        source: JetSource::Exact,
    };
    for (i, &s) in grid.iter().enumerate() {
        if i > 0 {
            u = rk4_step(&rhs, grid[i - 1], s - grid[i - 1], &u)?;
        }
        let kj: Jet5 = kappa.eval_jet(s)?;
        if !(kj.value() > 0.0) {
            return Err(MannheimError::KappaNonPositive {
                s,
                kappa: kj.value(),
            });
        }
        let tj: Jet5 = tau.eval_jet(s)?;
        let (yj, zj) = position_jets(&u, &kj, &tj);
        out.pos.push(GalVec3::new(s, u[3], u[4]));
        out.jets
            .push([Jet::from_coeffs([s, 1.0, 0.0, 0.0, 0.0, 0.0]), yj, zj]);
    }
    Ok(out)
}
