//! Numerical toolkit for the spectral theory of Maxwell transmission eigenvalues.
//!
//! The crate is organized around five computational modules and a batch front end:
//!
//! - [`media`]: wavenumbers, wedge regions, frozen boundary media and radial profiles.
//! - [`halfspace`]: exact Fourier-side solver for the constant-coefficient half-space
//!   Cauchy problem, plus a PEC-wall source solver.
//! - [`certifier`]: contrast margins and uniform lower bounds of the boundary symbols.
//! - [`ball`]: transmission eigenvalues of the unit ball with constant media, found by
//!   argument-principle root counting on per-sector dispersion determinants.
//! - [`radial`]: radial finite-element reduction of the regularized transmission system,
//!   the discrete solution operator and its spectrum.
//! - [`decay`]: interior decay of source-free Maxwell fields on a slab.
//! - [`cli`]: the `te-maxwell` batch command line.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod ball;
pub mod banded;
pub mod certifier;
pub mod cli;
pub mod decay;
pub mod error;
pub mod halfspace;
pub mod media;
pub mod output;
pub mod radial;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `a / b` without overflow in `|b|²` for very large or very small `b`.
#[inline]
pub(crate) fn safe_div(a: C64, b: C64) -> C64 {
    let s = b.norm();
    (a / s) * (b.conj() / s)
}

/// `arg(b/a)` in `(−π, π]`, computed from the two arguments separately.
#[inline]
pub(crate) fn phase_step(a: C64, b: C64) -> f64 {
    let mut d = b.arg() - a.arg();
    if d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    } else if d <= -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    d
}
