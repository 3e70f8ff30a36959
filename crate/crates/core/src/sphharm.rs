//! Real orthonormal spherical harmonics written as polynomials in the
//! cartesian coordinates of the unit vector, so that they compose with jets.

use crate::real::{Real, V3};
use std::f64::consts::PI;

/// Position of `Y_{lm}` in the flat ordering `l² + l + m`.
pub fn index(l: usize, m: isize) -> usize {
    l * l + (l as isize + m) as usize
}

/// Number of harmonics with degree `≤ lmax`.
pub fn count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// `(l, m)` of every harmonic with `lmin ≤ l ≤ lmax`, in flat order.
pub fn modes(lmin: usize, lmax: usize) -> Vec<(usize, isize)> {
    let mut v = Vec::new();
    for l in lmin..=lmax {
        for m in -(l as isize)..=(l as isize) {
            v.push((l, m));
        }
    }
    v
}

fn factorial_ratio(l: usize, m: usize) -> f64 {
    // (l − m)! / (l + m)!
    let mut r = 1.0;
    for k in (l - m + 1)..=(l + m) {
        r /= k as f64;
    }
    r
}

/// All `Y_{lm}(p)` for `l ≤ lmax` at a point `p` of the unit sphere (for
/// points off the sphere the polynomial extension is returned).
pub fn real_harmonics<T: Real>(lmax: usize, p: &V3<T>) -> Vec<T> {
    let zero = T::cst(0.0);
    let one = T::cst(1.0);
    let mut out = vec![zero; count(lmax)];
    // (x + iy)^m
    let mut re = vec![one; lmax + 1];
    let mut im = vec![zero; lmax + 1];
    for m in 1..=lmax {
        re[m] = re[m - 1] * p[0] - im[m - 1] * p[1];
        im[m] = re[m - 1] * p[1] + im[m - 1] * p[0];
    }
    let z = p[2];
    for m in 0..=lmax {
        // Q_l^m(z) with P_l^m = (1 − z²)^{m/2} Q_l^m
        let mut dfact = 1.0;
        for k in 0..m {
            dfact *= (2 * k + 1) as f64;
        }
        let mut q_prev = T::cst(0.0);
        let mut q = T::cst(dfact);
        for l in m..=lmax {
            if l > m {
                let next = if l == m + 1 {
                    z * q * (2 * m + 1) as f64
                } else {
                    (z * q * (2 * l - 1) as f64 - q_prev * (l + m - 1) as f64) / (l - m) as f64
                };
                q_prev = q;
                q = next;
            }
            let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, m)).sqrt();
            if m == 0 {
                out[index(l, 0)] = q * norm;
            } else {
                let s = norm * std::f64::consts::SQRT_2;
                out[index(l, m as isize)] = q * re[m] * s;
                out[index(l, -(m as isize))] = q * im[m] * s;
            }
        }
    }
    out
}
