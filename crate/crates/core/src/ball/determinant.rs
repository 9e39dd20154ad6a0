//! Per-sector dispersion determinants for the unit ball with constant media.

use serde::{Deserialize, Serialize};

use super::bessel::{riccati_derivative_normalized, spherical_jn, spherical_jn_normalized};
use crate::error::{Error, Result};
use crate::media::MediaQuad;
use crate::{safe_div, C64};

/// Vector spherical harmonic family of a sector.
///
/// `Te` modes have `E ∝ j_n(κr) X_nm`; `Tm` modes have `H ∝ j_n(κr) X_nm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];

    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }
}

/// Determinant value and the Hadamard bound `|col₀|·|col₁|` used as its local scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetValue {
    pub value: C64,
    pub scale: f64,
}

/// Matching matrix rows at `r = 1`, normalized by `κⁿ/(2n+1)!!`:
///
/// ```text
/// [ ĵ_n(κ₁)      ĵ_n(κ₂)     ]
/// [ P_n(κ₁)/w    P_n(κ₂)/ŵ   ]
/// ```
///
/// with `(w, ŵ) = (μ, μ̂)` for TE and `(ε, ε̂)` for TM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorDeterminant {
    pub n: usize,
    pub polarization: Polarization,
    pub media: MediaQuad,
}

impl SectorDeterminant {
    /// Material weights entering the second row.
    pub fn weights(&self) -> (f64, f64) {
        match self.polarization {
            Polarization::Te => (self.media.mu, self.media.mu_hat),
            Polarization::Tm => (self.media.eps, self.media.eps_hat),
        }
    }

    /// `(κ₁, κ₂) = (ω√(εμ), ω√(ε̂μ̂))`.
    pub fn wavenumbers(&self, omega: C64) -> (C64, C64) {
        let m = &self.media;
        (omega * (m.eps * m.mu).sqrt(), omega * (m.eps_hat * m.mu_hat).sqrt())
    }

    pub fn matrix(&self, omega: C64) -> [[C64; 2]; 2] {
        let (k1, k2) = self.wavenumbers(omega);
        let (w, w_hat) = self.weights();
        let n = self.n;
        let a = spherical_jn_normalized(n + 1, k1);
        let b = spherical_jn_normalized(n + 1, k2);
        [
            [a[n], b[n]],
            [
                riccati_derivative_normalized(n, a[n], a[n + 1], k1) / w,
                riccati_derivative_normalized(n, b[n], b[n + 1], k2) / w_hat,
            ],
        ]
    }

    pub fn eval(&self, omega: C64) -> DetValue {
        let m = self.matrix(omega);
        let t1 = m[0][0] * m[1][1];
        let t2 = m[0][1] * m[1][0];
        let col = |j: usize| m[0][j].norm().hypot(m[1][j].norm());
        DetValue { value: t1 - t2, scale: col(0) * col(1) }
    }

    /// Null vector `(c₀, c₁)` of the matching matrix, from its larger row.
    pub fn null_vector(&self, omega: C64) -> [C64; 2] {
        let m = self.matrix(omega);
        let norm = |r: &[C64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
        let row = if norm(&m[0]) >= norm(&m[1]) { m[0] } else { m[1] };
        let len = norm(&row);
        if len == 0.0 {
            return [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
        }
        [row[1] / len, -row[0] / len]
    }
}

/// Determinant of sector `(n, polarization)`.
pub fn build_determinant(n: usize, polarization: Polarization, media: &MediaQuad) -> Result<SectorDeterminant> {
    if n < 1 {
        return Err(Error::InvalidInput("sector degree n must be at least 1".into()));
    }
    media.validate()?;
    if media.alpha2() != 1.0 {
        return Err(Error::InvalidMedia("the ball oracle requires α = 1".into()));
    }
    Ok(SectorDeterminant { n, polarization, media: *media })
}

/// Relative residual of a sector mode pair at `ω` with matching coefficients
/// `coeffs`, so that the fields are `c₀·(mode in κ₁)` and `−c₁·(mode in κ₂)`,
/// each mode built on the normalized radial profile `ĵ_n(κr)`.
///
/// Checks, with unnormalized Bessel values and a derivative formula independent
/// of the determinant's:
/// - the radial Maxwell equation `f'' + 2f'/r + (κ² − n(n+1)/r²) f = 0` for both
///   radial profiles on `radial_grid`, with `κ² = ω²εμ` taken from the media;
/// - continuity of the tangential field `c₀ j_n(κ₁) = −c₁ j_n(κ₂)`;
/// - continuity of the other tangential field `c₀ ψ'(κ₁)/w = −c₁ ψ'(κ₂)/ŵ`,
///   `ψ'(κ) = κ j_{n−1}(κ) − n j_n(κ)`.
pub fn mode_residual(det: &SectorDeterminant, omega: C64, coeffs: [C64; 2], radial_grid: &[f64]) -> f64 {
    let n = det.n;
    let (k1, k2) = det.wavenumbers(omega);
    let (w, w_hat) = det.weights();
    let m = &det.media;
    let sq = [omega * omega * (m.eps * m.mu), omega * omega * (m.eps_hat * m.mu_hat)];
    let mut worst = 0.0f64;
    let rel = |num: C64, den: f64| if den == 0.0 { 0.0 } else { num.norm() / den };

    for (kappa, kappa2) in [(k1, sq[0]), (k2, sq[1])] {
        for &r in radial_grid {
            let x = kappa * r;
            if x.norm() < 1e-8 {
                continue;
            }
            let j = spherical_jn(n + 1, x);
            // f(r) = j_n(κr); derivatives in r through the three-term relations
            let d1 = kappa * (j[n - 1] * (n as f64) - j[n + 1] * ((n + 1) as f64)) / ((2 * n + 1) as f64);
            let jm1p = j[n - 1] * ((n - 1) as f64) / x - j[n];
            let jnp = d1 / kappa;
            let d2 = kappa * kappa * (jm1p - jnp * ((n + 1) as f64) / x + j[n] * ((n + 1) as f64) / (x * x));
            let terms = [d2, d1 * 2.0 / r, j[n] * kappa2, -j[n] * ((n * (n + 1)) as f64 / (r * r))];
            let sum: C64 = terms.iter().sum();
            let den: f64 = terms.iter().map(|t| t.norm()).sum();
            worst = worst.max(rel(sum, den));
        }
    }

    let a = spherical_jn(n, k1);
    let b = spherical_jn(n, k2);
    // coefficients multiply the normalized modes ĵ_n(κr) = j_n(κr)(2n+1)!!/κⁿ;
    // the common (2n+1)!! drops out of both relative residuals
    let (c0, c1) = (safe_div(coeffs[0], k1.powu(n as u32)), safe_div(-coeffs[1], k2.powu(n as u32)));
    let psi = |j: &[C64], k: C64| k * j[n - 1] - j[n] * (n as f64);
    let t1 = [c0 * a[n], c1 * b[n]];
    let t2 = [c0 * psi(&a, k1) / w, c1 * psi(&b, k2) / w_hat];
    // both rows are measured against the full boundary field size, since one
    // row may vanish identically at a root
    let den = t1[0].norm() + t1[1].norm() + t2[0].norm() + t2[1].norm();
    worst = worst.max(rel(t1[0] - t1[1], den));
    worst = worst.max(rel(t2[0] - t2[1], den));
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn identical_media_vanish() {
        let m = MediaQuad::new(1.7, 0.6, 1.7, 0.6);
        for pol in Polarization::BOTH {
            let d = build_determinant(3, pol, &m).unwrap();
            for w in [c(0.5, 0.0), c(4.0, 2.0), c(-7.0, 11.0)] {
                assert_eq!(d.eval(w).value.norm(), 0.0);
                let grid: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
                assert!(mode_residual(&d, w, [c(1.0, 0.0), c(-1.0, 0.0)], &grid) < 1e-13);
            }
        }
    }

    #[test]
    fn finite_limit_at_origin() {
        let m = MediaQuad::new(2.0, 1.0, 1.0, 2.0);
        for n in 1..=4 {
            let d = build_determinant(n, Polarization::Te, &m).unwrap();
            let limit = (n + 1) as f64 * (1.0 / m.mu_hat - 1.0 / m.mu);
            let v = d.eval(c(1e-6, 0.0)).value;
            assert!((v - c(limit, 0.0)).norm() < 1e-9, "n={n}: {v}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let m = MediaQuad::new(3.0, 1.0, 1.0, 2.0);
        let d = build_determinant(2, Polarization::Tm, &m).unwrap();
        for w in [c(1.3, 0.4), c(6.0, -2.0), c(12.0, 9.0)] {
            let a = d.eval(w.conj()).value;
            let b = d.eval(w).value.conj();
            assert!((a - b).norm() <= 1e-13 * a.norm());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = MediaQuad::new(2.0, 1.0, 1.0, 2.0);
        assert!(build_determinant(0, Polarization::Te, &m).is_err());
        assert!(build_determinant(1, Polarization::Te, &m.with_alpha2(-1.0)).is_err());
        assert!(build_determinant(1, Polarization::Te, &MediaQuad::new(-1.0, 1.0, 1.0, 2.0)).is_err());
    }
}
