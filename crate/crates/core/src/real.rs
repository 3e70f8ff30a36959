//! Scalar abstraction shared by plain floats and Taylor jets, so that one
//! implementation of each pointwise formula serves both the grid path and
//! the closed-form derivative path.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn recip(self) -> Self;
    /// Point value (the constant coefficient for a jet).
    fn value(self) -> f64;
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn value(self) -> f64 {
        self
    }
}

pub type V3<T> = [T; 3];

pub fn dot<T: Real>(a: &V3<T>, b: &V3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn add<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale<T: Real>(a: &V3<T>, s: T) -> V3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn scale_f<T: Real>(a: &V3<T>, s: f64) -> V3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Bilinear form `a^T m b`.
pub fn quad<T: Real>(m: &[[T; 3]; 3], a: &V3<T>, b: &V3<T>) -> T {
    let mut s = T::cst(0.0);
    for i in 0..3 {
        s = s + a[i] * dot(&m[i], b);
    }
    s
}

pub fn mat_vec<T: Real>(m: &[[T; 3]; 3], v: &V3<T>) -> V3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn lift<T: Real>(v: &[f64; 3]) -> V3<T> {
    [T::cst(v[0]), T::cst(v[1]), T::cst(v[2])]
}

pub fn values<T: Real>(v: &V3<T>) -> [f64; 3] {
    [v[0].value(), v[1].value(), v[2].value()]
}

pub fn norm(v: &[f64; 3]) -> f64 {
    dot(v, v).sqrt()
}
