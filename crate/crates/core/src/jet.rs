//! Truncated Taylor series ("jets") for exact derivative evaluation of closed-form curves.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `f(s₀), f′(s₀), f″(s₀)/2!, …` of a
//! scalar function up to order [`JET_ORDER`]. Arithmetic and the elementary functions
//! propagate all coefficients at once, so a curve written once in terms of `Jet` yields its
//! derivatives of every order up to `JET_ORDER` to rounding precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::vec3::Vec3;

/// Number of stored coefficients.
pub const JET_LEN: usize = 8;
/// Highest derivative order carried by a jet.
pub const JET_ORDER: usize = JET_LEN - 1;

const FACTORIAL: [f64; JET_LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Self { c }
    }

    /// The independent variable expanded at `s`.
    pub fn variable(s: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = s;
        c[1] = 1.0;
        Self { c }
    }

    pub fn from_coefficients(c: [f64; JET_LEN]) -> Self {
        Self { c }
    }

    pub fn coefficients(&self) -> &[f64; JET_LEN] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * FACTORIAL[k]
    }

    /// Jet of the derivative. The top coefficient is lost and reads as zero.
    pub fn differentiate(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_ORDER {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet { c }
    }

    pub fn recip(self) -> Jet {
        Jet::constant(1.0) / self
    }

    pub fn powi(self, n: u32) -> Jet {
        let mut out = Jet::constant(1.0);
        for _ in 0..n {
            out = out * self;
        }
        out
    }

    pub fn sqrt(self) -> Jet {
        let mut r = [0.0; JET_LEN];
        r[0] = self.c[0].sqrt();
        for k in 1..JET_LEN {
            let mut acc = self.c[k];
            for i in 1..k {
                acc -= r[i] * r[k - i];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Jet { c: r }
    }

    pub fn exp(self) -> Jet {
        let mut e = [0.0; JET_LEN];
        e[0] = self.c[0].exp();
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.c[i] * e[k - i];
            }
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    pub fn ln(self) -> Jet {
        let a = &self.c;
        let mut l = [0.0; JET_LEN];
        l[0] = a[0].ln();
        for k in 1..JET_LEN {
            let mut acc = k as f64 * a[k];
            for i in 1..k {
                acc -= i as f64 * l[i] * a[k - i];
            }
            l[k] = acc / (k as f64 * a[0]);
        }
        Jet { c: l }
    }

    pub fn sin_cos(self) -> (Jet, Jet) {
        let u = &self.c;
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        (s[0], c[0]) = u[0].sin_cos();
        for k in 1..JET_LEN {
            let (mut ds, mut dc) = (0.0, 0.0);
            for i in 1..=k {
                let w = i as f64 * u[i];
                ds += w * c[k - i];
                dc -= w * s[k - i];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(self) -> Jet {
        self.sin_cos().1
    }

    pub fn atan(self) -> Jet {
        // atan(u)′ = u′ / (1 + u²)
        let slope = self.differentiate() / (self * self + 1.0);
        let mut c = [0.0; JET_LEN];
        c[0] = self.c[0].atan();
        for k in 1..JET_LEN {
            c[k] = slope.c[k - 1] / k as f64;
        }
        Jet { c }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, o: f64) -> Jet {
        self + (-o)
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        -o + self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            for i in 0..=k {
                c[k] += self.c[i] * o.c[k - i];
            }
        }
        Jet { c }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, k: f64) -> Jet {
        for a in &mut self.c {
            *a *= k;
        }
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o * self
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let b = &o.c;
        let mut q = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= b[i] * q[k - i];
            }
            q[k] = acc / b[0];
        }
        Jet { c: q }
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, k: f64) -> Jet {
        self * k.recip()
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        Jet::constant(self) / o
    }
}

/// A vector-valued jet: one [`Jet`] per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetVec {
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
}

impl JetVec {
    pub fn new(x: Jet, y: Jet, z: Jet) -> Self {
        Self { x, y, z }
    }

    pub fn constant(v: Vec3) -> Self {
        Self::new(Jet::constant(v.x), Jet::constant(v.y), Jet::constant(v.z))
    }

    pub fn value(&self) -> Vec3 {
        self.derivative(0)
    }

    pub fn derivative(&self, k: usize) -> Vec3 {
        Vec3::new(
            self.x.derivative(k),
            self.y.derivative(k),
            self.z.derivative(k),
        )
    }

    pub fn differentiate(&self) -> JetVec {
        JetVec::new(
            self.x.differentiate(),
            self.y.differentiate(),
            self.z.differentiate(),
        )
    }

    pub fn dot(&self, o: &JetVec) -> Jet {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &JetVec) -> JetVec {
        JetVec::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> Jet {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: Jet) -> JetVec {
        JetVec::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn add(&self, o: &JetVec) -> JetVec {
        JetVec::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}
