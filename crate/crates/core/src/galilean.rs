//! Metric structure of the Galilean space G3.
//!
//! Vectors with a nonzero `x` component are measured by that component
//! alone; vectors in the fibre `x = 0` are measured with the Euclidean
//! structure of the `(y, z)` plane.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GalVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorClass {
    NonIsotropic,
    Isotropic,
    Zero,
}

impl GalVec3 {
    pub const ZERO: GalVec3 = GalVec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        GalVec3 { x, y, z }
    }

    /// Galilean scalar product: `x1 x2` unless both `x` vanish, in which
    /// case the fibre product `y1 y2 + z1 z2`.
    pub fn dot(&self, other: &GalVec3) -> f64 {
        if self.x != 0.0 || other.x != 0.0 {
            self.x * other.x
        } else {
            self.fibre_dot(other)
        }
    }

    /// `|x|` for non-isotropic vectors, fibre Euclidean length otherwise.
    pub fn norm(&self) -> f64 {
        if self.x != 0.0 {
            self.x.abs()
        } else {
            self.fibre_norm()
        }
    }

    pub fn classify(&self) -> VectorClass {
        if self.x != 0.0 {
            VectorClass::NonIsotropic
        } else if self.y == 0.0 && self.z == 0.0 {
            VectorClass::Zero
        } else {
            VectorClass::Isotropic
        }
    }

    pub fn fibre_dot(&self, other: &GalVec3) -> f64 {
        self.y * other.y + self.z * other.z
    }

    pub fn fibre_norm(&self) -> f64 {
        self.y.hypot(self.z)
    }

    /// 2x2 determinant `y1 z2 - z1 y2` of the fibre components.
    pub fn fibre_cross(&self, other: &GalVec3) -> f64 {
        self.y * other.z - self.z * other.y
    }

    /// Ordinary 3D Euclidean dot product.
    pub fn euclidean_dot(&self, other: &GalVec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.euclidean_dot(self).sqrt()
    }
}

pub fn galilean_dot(u: &GalVec3, v: &GalVec3) -> f64 {
    u.dot(v)
}

pub fn galilean_norm(u: &GalVec3) -> f64 {
    u.norm()
}

pub fn classify(u: &GalVec3) -> VectorClass {
    u.classify()
}

impl Add for GalVec3 {
    type Output = GalVec3;
    fn add(self, o: GalVec3) -> GalVec3 {
        GalVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for GalVec3 {
    type Output = GalVec3;
    fn sub(self, o: GalVec3) -> GalVec3 {
        GalVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for GalVec3 {
    type Output = GalVec3;
    fn neg(self) -> GalVec3 {
        GalVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for GalVec3 {
    type Output = GalVec3;
    fn mul(self, s: f64) -> GalVec3 {
        GalVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<GalVec3> for f64 {
    type Output = GalVec3;
    fn mul(self, v: GalVec3) -> GalVec3 {
        v * self
    }
}

/// An element of the similarity group H8:
///
/// ```text
/// x' = a11 + a12 x
/// y' = a21 + a22 x + a23 (y cos phi + z sin phi)
/// z' = a31 + a32 x + a23 (-y sin phi + z cos phi)
/// ```
///
/// With `a12 = a23 = 1` it is an isometry (group B6).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub a11: f64,
    pub a21: f64,
    pub a31: f64,
    pub a12: f64,
    pub a22: f64,
    pub a23: f64,
    pub a32: f64,
    pub phi: f64,
}

impl Default for Similarity {
    fn default() -> Self {
        Similarity::IDENTITY
    }
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        a11: 0.0,
        a21: 0.0,
        a31: 0.0,
        a12: 1.0,
        a22: 0.0,
        a23: 1.0,
        a32: 0.0,
        phi: 0.0,
    };

    pub fn translation(dx: f64, dy: f64, dz: f64) -> Similarity {
        Similarity {
            a11: dx,
            a21: dy,
            a31: dz,
            ..Similarity::IDENTITY
        }
    }

    pub fn rotation(phi: f64) -> Similarity {
        Similarity {
            phi,
            ..Similarity::IDENTITY
        }
    }

    pub fn is_isometry(&self) -> bool {
        self.a12 == 1.0 && self.a23 == 1.0
    }

    /// Rotation part applied to fibre components.
    fn rotate(&self, y: f64, z: f64) -> (f64, f64) {
        let (s, c) = self.phi.sin_cos();
        (y * c + z * s, -y * s + z * c)
    }

    pub fn apply(&self, p: &GalVec3) -> GalVec3 {
        let (ry, rz) = self.rotate(p.y, p.z);
        GalVec3::new(
            self.a11 + self.a12 * p.x,
            self.a21 + self.a22 * p.x + self.a23 * ry,
            self.a31 + self.a32 * p.x + self.a23 * rz,
        )
    }

    /// Linear part only, for tangent vectors.
    pub fn apply_linear(&self, v: &GalVec3) -> GalVec3 {
        let (ry, rz) = self.rotate(v.y, v.z);
        GalVec3::new(
            self.a12 * v.x,
            self.a22 * v.x + self.a23 * ry,
            self.a32 * v.x + self.a23 * rz,
        )
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let (ty, tz) = self.rotate(inner.a21, inner.a31);
        let (sy, sz) = self.rotate(inner.a22, inner.a32);
        Similarity {
            a11: self.a11 + self.a12 * inner.a11,
            a12: self.a12 * inner.a12,
            a21: self.a21 + inner.a11 * self.a22 + self.a23 * ty,
            a31: self.a31 + inner.a11 * self.a32 + self.a23 * tz,
            a22: inner.a12 * self.a22 + self.a23 * sy,
            a32: inner.a12 * self.a32 + self.a23 * sz,
            a23: self.a23 * inner.a23,
            phi: self.phi + inner.phi,
        }
    }

    /// `None` when a scale coefficient vanishes.
    pub fn inverse(&self) -> Option<Similarity> {
        if self.a12 == 0.0 || self.a23 == 0.0 {
            return None;
        }
        let back = Similarity::rotation(-self.phi);
        let (ty, tz) = back.rotate(self.a21, self.a31);
        let (sy, sz) = back.rotate(self.a22, self.a32);
        let k = 1.0 / self.a23;
        let r = self.a11 / self.a12;
        Some(Similarity {
            a11: -r,
            a12: 1.0 / self.a12,
            a21: k * (-ty + sy * r),
            a31: k * (-tz + sz * r),
            a22: -k * sy / self.a12,
            a32: -k * sz / self.a12,
            a23: k,
            phi: -self.phi,
        })
    }
}

pub fn apply_similarity(m: &Similarity, p: &GalVec3) -> GalVec3 {
    m.apply(p)
}

/// A B6 isometry whose free parameters are drawn from `seed`:
/// translations and shears in `[-2, 2]`, `phi` in `[0, 2π)`.
pub fn random_isometry(seed: u64) -> Similarity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Similarity {
        a11: rng.random_range(-2.0..=2.0),
        a21: rng.random_range(-2.0..=2.0),
        a31: rng.random_range(-2.0..=2.0),
        a12: 1.0,
        a22: rng.random_range(-2.0..=2.0),
        a23: 1.0,
        a32: rng.random_range(-2.0..=2.0),
        phi: rng.random_range(0.0..TAU),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn scalar_product_branches() {
        assert_eq!(
            galilean_dot(&GalVec3::new(1., 2., 3.), &GalVec3::new(2., 0., 5.)),
            2.0
        );
        assert_eq!(
            galilean_dot(&GalVec3::new(0., 3., 4.), &GalVec3::new(0., 1., 2.)),
            11.0
        );
        assert_eq!(galilean_dot(&GalVec3::ZERO, &GalVec3::ZERO), 0.0);
        // one non-isotropic operand selects the first branch
        assert_eq!(
            galilean_dot(&GalVec3::new(0., 3., 4.), &GalVec3::new(2., 1., 2.)),
            0.0
        );
    }

    #[test]
    fn norm_branches() {
        assert_eq!(galilean_norm(&GalVec3::new(2., 7., 9.)), 2.0);
        assert_eq!(galilean_norm(&GalVec3::new(0., 3., 4.)), 5.0);
        assert_eq!(galilean_norm(&GalVec3::new(-2., 7., 9.)), 2.0);
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(&GalVec3::new(1., 0., 0.)),
            VectorClass::NonIsotropic
        );
        assert_eq!(classify(&GalVec3::new(0., 1., 0.)), VectorClass::Isotropic);
        assert_eq!(classify(&GalVec3::ZERO), VectorClass::Zero);
        // the branch test is exact
        assert_eq!(
            classify(&GalVec3::new(1e-300, 0., 0.)),
            VectorClass::NonIsotropic
        );
    }

    #[test]
    fn similarity_examples() {
        let p = GalVec3::new(3., 4., 5.);
        assert_eq!(apply_similarity(&Similarity::IDENTITY, &p), p);
        assert_eq!(
            apply_similarity(&Similarity::translation(1., 2., 3.), &GalVec3::ZERO),
            GalVec3::new(1., 2., 3.)
        );
        let q = apply_similarity(&Similarity::rotation(FRAC_PI_2), &GalVec3::new(1., 1., 0.));
        assert_abs_diff_eq!(q.x, 1.0);
        assert_abs_diff_eq!(q.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.z, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn random_isometries_are_deterministic_and_in_range() {
        assert_eq!(random_isometry(7), random_isometry(7));
        assert_ne!(random_isometry(7), random_isometry(8));
        for seed in 0..100 {
            let m = random_isometry(seed);
            assert!(m.is_isometry());
            for v in [m.a11, m.a21, m.a31, m.a22, m.a32] {
                assert!((-2.0..=2.0).contains(&v));
            }
            assert!((0.0..TAU).contains(&m.phi));
        }
    }

    #[test]
    fn json_layout_is_flat() {
        let s = serde_json::to_string(&Similarity::IDENTITY).unwrap();
        assert_eq!(
            s,
            r#"{"a11":0.0,"a21":0.0,"a31":0.0,"a12":1.0,"a22":0.0,"a23":1.0,"a32":0.0,"phi":0.0}"#
        );
        let back: Similarity = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Similarity::IDENTITY);
    }

    fn similarity() -> impl Strategy<Value = Similarity> {
        let r = -2.0..2.0f64;
        let scale = prop_oneof![0.5..2.0f64, -2.0..-0.5f64];
        (
            (r.clone(), r.clone(), r.clone(), scale.clone()),
            (r.clone(), scale, r, 0.0..TAU),
        )
            .prop_map(|((a11, a21, a31, a12), (a22, a23, a32, phi))| Similarity {
                a11,
                a21,
                a31,
                a12,
                a22,
                a23,
                a32,
                phi,
            })
    }

    fn point() -> impl Strategy<Value = GalVec3> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| GalVec3::new(x, y, z))
    }

    fn close(a: GalVec3, b: GalVec3) -> bool {
        (a - b).euclidean_norm() <= 1e-11 * (1.0 + a.euclidean_norm())
    }

    proptest! {
        #[test]
        fn composition_matches_sequential_application(
            a in similarity(), b in similarity(), c in similarity(), p in point()
        ) {
            let seq = a.apply(&b.apply(&c.apply(&p)));
            prop_assert!(close(a.compose(&b).compose(&c).apply(&p), seq));
            prop_assert!(close(a.compose(&b.compose(&c)).apply(&p), seq));
        }

        #[test]
        fn inverse_undoes(a in similarity(), p in point()) {
            let inv = a.inverse().unwrap();
            prop_assert!(close(inv.apply(&a.apply(&p)), p));
            prop_assert!(close(a.apply(&inv.apply(&p)), p));
        }

        #[test]
        fn dot_symmetric_and_norm_consistent(u in point(), v in point(), s in -3.0..3.0f64) {
            prop_assert_eq!(u.dot(&v), v.dot(&u));
            let fu = GalVec3::new(0.0, u.y, u.z);
            let fv = GalVec3::new(0.0, v.y, v.z);
            prop_assert!((fu.norm() - fu.dot(&fu).sqrt()).abs() <= 1e-12);
            // bilinear within the fibre branch
            let lhs = (fu * s + fv).dot(&fv);
            let rhs = s * fu.dot(&fv) + fv.dot(&fv);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
            prop_assert_eq!(u.norm(), if u.x != 0.0 { u.x.abs() } else { u.fibre_norm() });
        }

        #[test]
        fn isometries_preserve_galilean_distance(m in (0u64..1000).prop_map(random_isometry), p in point(), q in point()) {
            let d0 = (p - q).norm();
            let d1 = (m.apply(&p) - m.apply(&q)).norm();
            prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0));
        }
    }
}
