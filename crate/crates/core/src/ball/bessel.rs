//! Spherical Bessel functions of the first kind for complex arguments.
//!
//! The normalized function `ĵ_n(z) = j_n(z) (2n+1)!! / zⁿ` is entire, even in
//! `z` and equals `1` at the origin; the dispersion determinants are built from
//! it so they carry no artificial zero or pole at `ω = 0`.

use crate::{safe_div, C64};

/// Below this modulus the power series is used.
const SERIES_RADIUS: f64 = 2.0;

/// `(2n+1)!!`.
pub fn double_factorial_odd(n: usize) -> f64 {
    (0..=n).map(|k| (2 * k + 1) as f64).product()
}

fn series_normalized(n: usize, z: C64) -> C64 {
    let q = -z * z * 0.5;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term = term * q / ((k * (2 * n + 2 * k + 1)) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `j_0(z) .. j_{n_max}(z)` by Miller's downward recurrence, normalized against
/// the closed forms of `j_0` or `j_1`.
fn miller(n_max: usize, z: C64) -> Vec<C64> {
    let start = n_max.max(z.norm().ceil() as usize) + 40 + (z.norm().cbrt() * 4.0) as usize;
    let mut vals = vec![C64::new(0.0, 0.0); n_max + 1];
    let mut next = C64::new(0.0, 0.0);
    let mut cur = C64::new(1.0, 0.0);
    let mut j1 = C64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        // f_{k−1} = (2k+1)/z f_k − f_{k+1}
        let prev = cur * ((2 * k + 1) as f64) / z - next;
        next = cur;
        cur = prev;
        if k <= n_max {
            vals[k] = next;
        }
        if k == 1 {
            j1 = next;
        }
        if cur.norm() > 1e100 {
            let s = 1e-100;
            cur *= s;
            next *= s;
            j1 *= s;
            vals.iter_mut().for_each(|v| *v *= s);
        }
    }
    vals[0] = cur;
    let exact0 = z.sin() / z;
    let exact1 = z.sin() / (z * z) - z.cos() / z;
    let factor = if exact0.norm() >= exact1.norm() { safe_div(exact0, cur) } else { safe_div(exact1, j1) };
    vals.iter_mut().for_each(|v| *v *= factor);
    vals
}

/// `ĵ_0(z) .. ĵ_{n_max}(z)`.
pub fn spherical_jn_normalized(n_max: usize, z: C64) -> Vec<C64> {
    if z.norm() < SERIES_RADIUS {
        return (0..=n_max).map(|n| series_normalized(n, z)).collect();
    }
    let raw = miller(n_max, z);
    let mut zn = C64::new(1.0, 0.0);
    let mut df = 1.0;
    raw.into_iter()
        .enumerate()
        .map(|(n, v)| {
            if n > 0 {
                zn *= z;
                df *= (2 * n + 1) as f64;
            }
            v * df / zn
        })
        .collect()
}

/// `j_0(z) .. j_{n_max}(z)`.
pub fn spherical_jn(n_max: usize, z: C64) -> Vec<C64> {
    if z.norm() >= SERIES_RADIUS {
        return miller(n_max, z);
    }
    let mut zn = C64::new(1.0, 0.0);
    let mut df = 1.0;
    (0..=n_max)
        .map(|n| {
            if n > 0 {
                zn *= z;
                df *= (2 * n + 1) as f64;
            }
            series_normalized(n, z) * zn / df
        })
        .collect()
}

/// Normalized Riccati derivative `P_n(z) = (z j_n(z))' (2n+1)!!/zⁿ`, written as
/// `(n+1) ĵ_n(z) − z² ĵ_{n+1}(z)/(2n+3)`.
pub fn riccati_derivative_normalized(n: usize, jn: C64, jn1: C64, z: C64) -> C64 {
    jn * ((n + 1) as f64) - z * z * jn1 / ((2 * n + 3) as f64)
}
