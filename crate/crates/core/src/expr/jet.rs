//! Truncated Taylor jets.
//!
//! A `Jet<K>` holds the first `K` Taylor coefficients of a scalar function
//! around a point, `c[k] = f^(k)(t) / k!`. Every operation is causal:
//! coefficient `k` of a result depends only on coefficients `0..=k` of the
//! operands, so truncation is exact and an unknown (NaN) top coefficient
//! never leaks downwards.
//!
//! `Jet3` (value plus three derivatives) is what curve geometry needs.
//! `Jet5` carries two more orders, which the Mannheim mate construction
//! consumes when it differentiates the principal normal.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// First `K` Taylor coefficients of a scalar function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const K: usize> {
    c: [f64; K],
}

/// Value and derivatives of orders 1 to 3.
pub type Jet3 = Jet<4>;
/// Value and derivatives of orders 1 to 5.
pub type Jet5 = Jet<6>;

const FACTORIAL: [f64; 12] = [
    1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0, 3628800.0, 39916800.0,
];

fn factorial(k: usize) -> f64 {
    FACTORIAL
        .get(k)
        .copied()
        .unwrap_or_else(|| (1..=k).map(|i| i as f64).product())
}

impl<const K: usize> Jet<K> {
    pub fn constant(value: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = value;
        Jet { c }
    }

    /// The identity function evaluated at `t`: `(t, 1, 0, ...)`.
    pub fn variable(t: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = t;
        if K > 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn from_coeffs(c: [f64; K]) -> Self {
        Jet { c }
    }

    /// Builds a jet from `[f, f', f'', ...]`.
    pub fn from_derivatives(d: [f64; K]) -> Self {
        let mut c = d;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck /= factorial(k);
        }
        Jet { c }
    }

    pub fn coeffs(&self) -> &[f64; K] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative, `k! * c[k]`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * factorial(k)
    }

    pub fn derivatives(&self) -> [f64; K] {
        let mut d = self.c;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk *= factorial(k);
        }
        d
    }

    /// Jet of the derivative function. The top coefficient is unknown and
    /// set to NaN.
    pub fn differentiate(&self) -> Self {
        let mut c = [f64::NAN; K];
        for k in 0..K - 1 {
            c[k] = self.c[k + 1] * (k + 1) as f64;
        }
        Jet { c }
    }

    /// Keeps the first `M` coefficients; missing ones are NaN.
    pub fn resize<const M: usize>(&self) -> Jet<M> {
        let mut c = [f64::NAN; M];
        for (k, ck) in c.iter_mut().enumerate() {
            if k < K {
                *ck = self.c[k];
            }
        }
        Jet { c }
    }

    /// True when all non-constant coefficients are exactly zero.
    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet {
            c: self.c.map(|v| v * s),
        }
    }

    fn offset_part(&self) -> Self {
        let mut d = *self;
        d.c[0] = 0.0;
        d
    }

    /// `1 / self`. Requires a nonzero value.
    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    pub fn exp(&self) -> Self {
        let a = &self.c;
        let mut e = [0.0; K];
        e[0] = a[0].exp();
        for k in 1..K {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    /// Natural logarithm. Requires a positive value.
    pub fn ln(&self) -> Self {
        let a = &self.c;
        let mut l = [0.0; K];
        l[0] = a[0].ln();
        for k in 1..K {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * l[j] * a[k - j];
            }
            l[k] = (a[k] - acc / k as f64) / a[0];
        }
        Jet { c: l }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.c;
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        (s[0], c[0]) = a[0].sin_cos();
        for k in 1..K {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = -dc / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let a = &self.c;
        let mut s = [0.0; K];
        let mut c = [0.0; K];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for k in 1..K {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    /// From `tanh' = 1 - tanh²`, so large arguments stay finite.
    pub fn tanh(&self) -> Self {
        let a = &self.c;
        let mut y = [0.0; K];
        // w = 1 - y², filled one order behind y
        let mut w = [0.0; K];
        y[0] = a[0].tanh();
        w[0] = 1.0 - y[0] * y[0];
        for k in 1..K {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * w[k - j];
            }
            y[k] = acc / k as f64;
            w[k] = -(0..=k).map(|i| y[i] * y[k - i]).sum::<f64>();
        }
        Jet { c: y }
    }

    /// Square root. Requires a positive value.
    pub fn sqrt(&self) -> Self {
        let a = &self.c;
        let mut r = [0.0; K];
        r[0] = a[0].sqrt();
        for k in 1..K {
            let mut acc = 0.0;
            for j in 1..k {
                acc += r[j] * r[k - j];
            }
            r[k] = (a[k] - acc) / (2.0 * r[0]);
        }
        Jet { c: r }
    }

    /// `|self|`. Undefined (NaN derivatives) at a zero value.
    pub fn abs(&self) -> Self {
        if self.c[0] > 0.0 {
            *self
        } else if self.c[0] < 0.0 {
            -*self
        } else {
            let mut c = [f64::NAN; K];
            c[0] = 0.0;
            Jet { c }
        }
    }

    /// Integer power by repeated squaring. Negative exponents need a
    /// nonzero value.
    pub fn powi(&self, n: i32) -> Self {
        let mut base = *self;
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Real power with a constant exponent. Requires a positive value.
    pub fn powf(&self, exponent: f64) -> Self {
        let a = &self.c;
        let mut p = [0.0; K];
        p[0] = a[0].powf(exponent);
        for k in 1..K {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((exponent + 1.0) * j as f64 - k as f64) * a[j] * p[k - j];
            }
            p[k] = acc / (k as f64 * a[0]);
        }
        Jet { c: p }
    }

    /// `self ^ exponent` with both sides varying. Requires a positive base.
    pub fn pow(&self, exponent: &Self) -> Self {
        (*exponent * self.ln()).exp()
    }

    /// Composition `outer(inner(t))`, where `outer` holds the Taylor
    /// coefficients of the outer function around `inner.value()`.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        let delta = inner.offset_part();
        let mut r = Jet::constant(outer.c[K - 1]);
        for k in (0..K - 1).rev() {
            r = r * delta;
            r.c[0] += outer.c[k];
        }
        r
    }

    /// Local inverse of a function with nonzero first derivative.
    ///
    /// Given the jet of `x(t)` at `t0`, returns the jet of `t(x) - t0` at
    /// `x(t0)` (zero constant term), so that `x(t0 + δ(σ)) = x(t0) + σ` to
    /// the jet's order.
    pub fn invert(&self) -> Self {
        let a1 = self.c[1];
        let mut rest = self.offset_part();
        rest.c[1] = 0.0;
        let mut sigma = [0.0; K];
        if K > 1 {
            sigma[1] = 1.0;
        }
        let sigma = Jet { c: sigma };
        let mut delta = sigma.scale(1.0 / a1);
        // Each pass fixes one more coefficient.
        for _ in 1..K {
            let higher = Jet::compose(&rest, &delta);
            delta = (sigma - higher).scale(1.0 / a1);
        }
        delta
    }
}

impl Jet3 {
    pub fn new(v0: f64, v1: f64, v2: f64, v3: f64) -> Self {
        Jet::from_derivatives([v0, v1, v2, v3])
    }

    pub fn v0(&self) -> f64 {
        self.derivative(0)
    }
    pub fn v1(&self) -> f64 {
        self.derivative(1)
    }
    pub fn v2(&self) -> f64 {
        self.derivative(2)
    }
    pub fn v3(&self) -> f64 {
        self.derivative(3)
    }
}

impl<const K: usize> Add for Jet<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl<const K: usize> Sub for Jet<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        Jet { c }
    }
}

impl<const K: usize> Neg for Jet<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            c: self.c.map(|v| -v),
        }
    }
}

impl<const K: usize> Mul for Jet<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; K];
        for k in 0..K {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl<const K: usize> Div for Jet<K> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b = &rhs.c;
        let mut q = [0.0; K];
        for k in 0..K {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * b[k - j];
            }
            q[k] = acc / b[0];
        }
        Jet { c: q }
    }
}

impl<const K: usize> Add<f64> for Jet<K> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<const K: usize> Mul<f64> for Jet<K> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}
