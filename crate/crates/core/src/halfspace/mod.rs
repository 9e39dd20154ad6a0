//! Constant-coefficient half-space Cauchy problem in tangential Fourier variables.
//!
//! At a fixed tangential frequency `ξ` every field component of the source-free
//! system is `c · e^{−x₃ s}` with `s = √(|ξ|² + k²εμ)` (plain medium) or
//! `ŝ = √(|ξ|² + α²k²ε̂μ̂)` (hatted medium). The unknowns are the tangential
//! boundary amplitudes `a = E_t(ξ, 0)` and `â = Ê_t(ξ, 0)`; the jump data
//! `(f_e, f_m)` fix them through two symbol denominators, [`denom_a`] and
//! [`denom_b`], whose non-vanishing is exactly the contrast condition on the media.
//!
//! Tangential jumps use the cross product literally: `v × e₃ = (v₂, −v₁, 0)`.

pub mod pec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{MediaQuad, Wavenumber};
use crate::{c, C64};

pub use pec::{pec_source_solve, smooth_bump, PecGrid, PecProfile};

/// Relative threshold below which a symbol denominator is treated as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Tangential Fourier frequency `(ξ₁, ξ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentialMode {
    pub xi: [f64; 2],
}

impl TangentialMode {
    pub fn new(xi1: f64, xi2: f64) -> Self {
        Self { xi: [xi1, xi2] }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1]
    }

    /// `ξ · v` for a complex tangential vector.
    pub fn dot(&self, v: &[C64; 2]) -> C64 {
        v[0] * self.xi[0] + v[1] * self.xi[1]
    }

    /// Japanese bracket `⟨ξ⟩ = (1 + |ξ|²)^{1/2}`.
    pub fn bracket(&self) -> f64 {
        (1.0 + self.norm_sqr()).sqrt()
    }
}

/// Tangential Fourier traces of the jump data at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceDatum {
    pub fe: [C64; 2],
    pub fm: [C64; 2],
}

impl TraceDatum {
    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self { fe: [z; 2], fm: [z; 2] }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            fe: [self.fe[0] * s, self.fe[1] * s],
            fm: [self.fm[0] * s, self.fm[1] * s],
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            fe: [self.fe[0].conj(), self.fe[1].conj()],
            fm: [self.fm[0].conj(), self.fm[1].conj()],
        }
    }

    /// Euclidean norm of the four complex entries.
    pub fn norm(&self) -> f64 {
        self.fe
            .iter()
            .chain(&self.fm)
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Boundary amplitudes of a solved half-space mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitudes {
    pub a: [C64; 2],
    pub a_hat: [C64; 2],
    pub xi: TangentialMode,
    pub k: Wavenumber,
    pub media: MediaQuad,
}

/// All twelve field components at `(ξ, x₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x3: f64,
    pub e: [C64; 3],
    pub h: [C64; 3],
    pub e_hat: [C64; 3],
    pub h_hat: [C64; 3],
}

impl FieldSample {
    pub fn components(&self) -> [C64; 12] {
        let mut out = [C64::new(0.0, 0.0); 12];
        for (i, v) in self.e.iter().chain(&self.h).chain(&self.e_hat).chain(&self.h_hat).enumerate() {
            out[i] = *v;
        }
        out
    }
}

/// Square root with strictly positive real part.
///
/// Points on the closed negative real axis have no such root and signal that the
/// wedge hypothesis on `k²` has been violated.
pub fn decaying_sqrt(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchDegeneracy(format!(
            "{z} lies on the closed negative real axis"
        )));
    }
    let w = z.sqrt();
    // principal branch already has Re ≥ 0; it is > 0 off the cut
    Ok(if w.re < 0.0 { -w } else { w })
}

/// `h = −f_e × e₃`, as its two tangential components.
pub fn trace_h(fe: &[C64; 2]) -> [C64; 2] {
    [-fe[1], fe[0]]
}

/// Fourier symbol of `(i/k) div_Γ f_m`, that is `−(ξ·f_m)/k`.
pub fn trace_g(fm: &[C64; 2], xi: &TangentialMode, k: &Wavenumber) -> C64 {
    -xi.dot(fm) / k.k
}

/// `(α²ε̂² − ε²)|ξ|² + α²k²εε̂μμ̂(ε̂/μ̂ − ε/μ)`.
pub fn denom_a(xi: &TangentialMode, k: C64, m: &MediaQuad) -> C64 {
    let a2 = m.alpha2();
    let xi2 = xi.norm_sqr();
    c((a2 * m.eps_hat * m.eps_hat - m.eps * m.eps) * xi2, 0.0)
        + k * k * (a2 * m.eps * m.eps_hat * m.mu * m.mu_hat * (m.eps_hat / m.mu_hat - m.eps / m.mu))
}

/// `(μ² − α²μ̂²)|ξ|² + α²k²εε̂μμ̂(μ/ε − μ̂/ε̂)`.
pub fn denom_b(xi: &TangentialMode, k: C64, m: &MediaQuad) -> C64 {
    let a2 = m.alpha2();
    let xi2 = xi.norm_sqr();
    c((m.mu * m.mu - a2 * m.mu_hat * m.mu_hat) * xi2, 0.0)
        + k * k * (a2 * m.eps * m.eps_hat * m.mu * m.mu_hat * (m.mu / m.eps - m.mu_hat / m.eps_hat))
}

/// Decay roots `(s, ŝ)` for the plain and hatted media.
pub fn decay_roots(xi: &TangentialMode, k: C64, m: &MediaQuad) -> Result<(C64, C64)> {
    let xi2 = c(xi.norm_sqr(), 0.0);
    let s = decaying_sqrt(xi2 + k * k * (m.eps * m.mu))?;
    let s_hat = decaying_sqrt(xi2 + k * k * (m.alpha2() * m.eps_hat * m.mu_hat))?;
    Ok((s, s_hat))
}

/// Solves for the boundary amplitudes `(a, â)` matching the jump data.
///
/// `ξ·â` comes from the normal-component identity (denominator [`denom_a`]);
/// each tangential component then follows from the matching of the
/// corresponding tangential `H` component (denominator [`denom_b`]):
///
/// `â_j (μŝ − αμ̂s) = ξ_j (μ ξ·â/ŝ − αμ̂ ξ·a/s) − αμ̂ s h_j − αμμ̂ k f_{m,j}`.
pub fn solve_amplitudes(
    xi: &TangentialMode,
    k: &Wavenumber,
    media: &MediaQuad,
    trace: &TraceDatum,
) -> Result<ModeAmplitudes> {
    k.require_admissible()?;
    if !k.in_wedge_scaled(media.alpha2()) {
        return Err(Error::BranchDegeneracy("α²k² outside the wedge".into()));
    }
    media.validate()?;

    let kk = k.k;
    let alpha = media.alpha;
    let (s, s_hat) = decay_roots(xi, kk, media)?;
    let scale = xi.norm_sqr() + kk.norm_sqr();
    let da = denom_a(xi, kk, media);
    let db = denom_b(xi, kk, media);
    let threshold = DEGENERACY_THRESHOLD * scale;
    if da.norm() < threshold {
        return Err(Error::DegenerateSymbol { which: "denom_A", value: da.norm(), threshold });
    }
    if db.norm() < threshold {
        return Err(Error::DegenerateSymbol { which: "denom_B", value: db.norm(), threshold });
    }

    let h = trace_h(&trace.fe);
    let g = trace_g(&trace.fm, xi, k);
    let (eps, mu, eps_hat, mu_hat) = (media.eps, media.mu, media.eps_hat, media.mu_hat);

    let xi_h = xi.dot(&h);
    let xi_ahat = s * s_hat * (s_hat * eps + alpha * eps_hat * s) / da * (g - xi_h * eps / s);
    let xi_a = xi_ahat - xi_h;

    let q = xi_ahat * mu / s_hat - alpha * mu_hat * xi_a / s;
    let factor = (s_hat * mu + alpha * mu_hat * s) / db;
    let mut a_hat = [C64::new(0.0, 0.0); 2];
    for j in 0..2 {
        a_hat[j] = factor
            * (q * xi.xi[j] - alpha * mu_hat * s * h[j] - alpha * mu * mu_hat * kk * trace.fm[j]);
    }
    let a = [a_hat[0] - h[0], a_hat[1] - h[1]];
    Ok(ModeAmplitudes { a, a_hat, xi: *xi, k: *k, media: *media })
}

/// Fourier curl of `v e^{−x₃ s}`: `∂₁, ∂₂ → iξ₁, iξ₂` and `∂₃ → −s`.
pub(crate) fn fourier_curl(xi: &TangentialMode, s: C64, v: &[C64; 3]) -> [C64; 3] {
    let i = C64::i();
    let (x1, x2) = (xi.xi[0], xi.xi[1]);
    [
        i * x2 * v[2] + s * v[1],
        -s * v[0] - i * x1 * v[2],
        i * x1 * v[1] - i * x2 * v[0],
    ]
}

fn electric(xi: &TangentialMode, s: C64, amp: &[C64; 2], x3: f64) -> [C64; 3] {
    let decay = (-s * x3).exp();
    let e3 = C64::i() * xi.dot(amp) / s;
    [amp[0] * decay, amp[1] * decay, e3 * decay]
}

/// Evaluates `(E, H, Ê, Ĥ)` at depth `x₃ ≥ 0`.
pub fn evaluate_fields(amp: &ModeAmplitudes, x3: f64) -> Result<FieldSample> {
    let (s, s_hat) = decay_roots(&amp.xi, amp.k.k, &amp.media)?;
    let e = electric(&amp.xi, s, &amp.a, x3);
    let e_hat = electric(&amp.xi, s_hat, &amp.a_hat, x3);
    let kmu = amp.k.k * amp.media.mu;
    let kmu_hat = amp.media.alpha * amp.k.k * amp.media.mu_hat;
    let h = fourier_curl(&amp.xi, s, &e).map(|v| v / kmu);
    let h_hat = fourier_curl(&amp.xi, s_hat, &e_hat).map(|v| v / kmu_hat);
    Ok(FieldSample { x3, e, h, e_hat, h_hat })
}

/// Residuals of a half-space solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Largest pointwise relative Maxwell residual over the depth grid.
    pub maxwell_res: f64,
    /// Absolute boundary-jump residual at `x₃ = 0`.
    pub bc_res: f64,
    /// Scale for `bc_res`: the larger of the data norm and the boundary field norm.
    pub bc_scale: f64,
}

impl ResidualReport {
    pub fn bc_relative(&self) -> f64 {
        if self.bc_scale == 0.0 {
            self.bc_res
        } else {
            self.bc_res / self.bc_scale
        }
    }
}

fn norm3(v: &[C64; 3]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn rel_residual(lhs: &[C64; 3], rhs: &[C64; 3]) -> f64 {
    let diff = [lhs[0] - rhs[0], lhs[1] - rhs[1], lhs[2] - rhs[2]];
    let scale = norm3(lhs) + norm3(rhs);
    if scale == 0.0 {
        0.0
    } else {
        norm3(&diff) / scale
    }
}

/// Checks the source-free Maxwell systems on a depth grid and the jump
/// conditions at the boundary.
pub fn cauchy_residual(amp: &ModeAmplitudes, trace: &TraceDatum, x3_grid: &[f64]) -> Result<ResidualReport> {
    if x3_grid.len() < 8 {
        return Err(Error::InvalidInput("depth grid needs at least 8 points".into()));
    }
    let (s, s_hat) = decay_roots(&amp.xi, amp.k.k, &amp.media)?;
    let k = amp.k.k;
    let ak = amp.media.alpha * k;
    let m = &amp.media;
    let mut maxwell_res = 0.0f64;
    for &x3 in x3_grid {
        let f = evaluate_fields(amp, x3)?;
        let curl_e = fourier_curl(&amp.xi, s, &f.e);
        let curl_h = fourier_curl(&amp.xi, s, &f.h);
        let curl_eh = fourier_curl(&amp.xi, s_hat, &f.e_hat);
        let curl_hh = fourier_curl(&amp.xi, s_hat, &f.h_hat);
        let checks = [
            rel_residual(&curl_e, &f.h.map(|v| v * k * m.mu)),
            rel_residual(&curl_h, &f.e.map(|v| -v * k * m.eps)),
            rel_residual(&curl_eh, &f.h_hat.map(|v| v * ak * m.mu_hat)),
            rel_residual(&curl_hh, &f.e_hat.map(|v| -v * ak * m.eps_hat)),
        ];
        for r in checks {
            maxwell_res = maxwell_res.max(r);
        }
    }
    let f0 = evaluate_fields(amp, 0.0)?;
    let cross = |v: &[C64; 3]| [v[1], -v[0]];
    let de = cross(&[f0.e_hat[0] - f0.e[0], f0.e_hat[1] - f0.e[1], f0.e_hat[2] - f0.e[2]]);
    let dh = cross(&[f0.h_hat[0] - f0.h[0], f0.h_hat[1] - f0.h[1], f0.h_hat[2] - f0.h[2]]);
    let bc_res = ((de[0] - trace.fe[0]).norm_sqr()
        + (de[1] - trace.fe[1]).norm_sqr())
    .sqrt()
        + ((dh[0] - trace.fm[0]).norm_sqr() + (dh[1] - trace.fm[1]).norm_sqr()).sqrt();
    let field_scale = f0.components().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    Ok(ResidualReport {
        maxwell_res,
        bc_res,
        bc_scale: trace.norm().max(field_scale),
    })
}

/// Depth grid `x₃ ∈ [0, span]` with `count` uniform points.
pub fn depth_grid(span: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| span * j as f64 / (count - 1).max(1) as f64).collect()
}

/// Ratio of the field norms to the jump-data norms appearing in the half-space
/// a priori estimate, evaluated at a single frequency.
///
/// Numerator: `‖fields‖_{H¹} + |k| ‖fields‖_{L²}` over `x₃ > 0`, with the depth
/// integrals `∫₀^∞ |c e^{−s x₃}|² = |c|²/(2 Re s)` done in closed form and `H¹`
/// weights `1 + |ξ|² + |s|²`. Denominator:
/// `|k|^{1/2} |(f_e, f_m)| + ⟨ξ⟩^{1/2} |(f_e, f_m)| + |k|^{-1} ⟨ξ⟩^{1/2} |(ξ·f_e, ξ·f_m)|`.
pub fn stability_ratio(amp: &ModeAmplitudes, trace: &TraceDatum, k: &Wavenumber) -> Result<f64> {
    let data = trace.norm();
    if data == 0.0 {
        return Err(Error::UndefinedRatio("zero trace data".into()));
    }
    let (s, s_hat) = decay_roots(&amp.xi, k.k, &amp.media)?;
    let f0 = evaluate_fields(amp, 0.0)?;
    let xi2 = amp.xi.norm_sqr();
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    let mut accumulate = |vals: &[[C64; 3]], root: C64| {
        let depth = 1.0 / (2.0 * root.re);
        let weight = 1.0 + xi2 + root.norm_sqr();
        for v in vals {
            let m2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            l2 += m2 * depth;
            h1 += m2 * depth * weight;
        }
    };
    accumulate(&[f0.e, f0.h], s);
    accumulate(&[f0.e_hat, f0.h_hat], s_hat);
    let kn = k.norm();
    let numerator = h1.sqrt() + kn * l2.sqrt();

    let bracket_half = amp.xi.bracket().sqrt();
    let div_norm = (amp.xi.dot(&trace.fe).norm_sqr() + amp.xi.dot(&trace.fm).norm_sqr()).sqrt();
    let denominator = kn.sqrt() * data + bracket_half * data + bracket_half * div_norm / kn;
    Ok(numerator / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn media() -> MediaQuad {
        MediaQuad::new(2.0, 1.0, 1.0, 2.0).with_margin(0.5)
    }

    #[test]
    fn sqrt_examples() {
        assert!((decaying_sqrt(c(4.0, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((decaying_sqrt(c(0.0, 2.0)).unwrap() - c(1.0, 1.0)).norm() < 1e-15);
        assert!((decaying_sqrt(c(0.0, -2.0)).unwrap() - c(1.0, -1.0)).norm() < 1e-15);
        assert!(decaying_sqrt(c(-1.0, 0.0)).is_err());
        assert!(decaying_sqrt(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn trace_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(trace_h(&[one, zero]), [zero, one]);
        assert_eq!(trace_h(&[zero, one]), [-one, zero]);
        assert_eq!(trace_h(&[zero, zero]), [zero, zero]);

        let k2 = Wavenumber::new(c(2.0, 0.0), 0.5);
        assert!((trace_g(&[one, zero], &TangentialMode::new(2.0, 0.0), &k2) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(trace_g(&[zero, one], &TangentialMode::new(3.0, 0.0), &k2).norm(), 0.0);
        assert_eq!(trace_g(&[zero, zero], &TangentialMode::new(3.0, 1.0), &k2).norm(), 0.0);
    }

    #[test]
    fn denominator_examples() {
        let m = MediaQuad::new(2.0, 1.0, 1.0, 1.0);
        let k_sq_4i = C64::from_polar(2.0, PI / 4.0); // k² = 4i
        let zero_xi = TangentialMode::new(0.0, 0.0);
        let unit_xi = TangentialMode::new(1.0, 0.0);
        assert!((denom_a(&zero_xi, k_sq_4i, &m) - c(0.0, -8.0)).norm() < 1e-12);
        assert!((denom_a(&unit_xi, c(0.0, 0.0), &m) - c(-3.0, 0.0)).norm() < 1e-15);

        let same = MediaQuad::new(1.5, 0.7, 1.5, 0.7);
        assert_eq!(denom_a(&unit_xi, c(3.0, 2.0), &same).norm(), 0.0);
        assert_eq!(denom_b(&unit_xi, c(3.0, 2.0), &same).norm(), 0.0);

        let m = MediaQuad::new(1.0, 2.0, 1.0, 1.0);
        assert!((denom_b(&zero_xi, k_sq_4i, &m) - c(0.0, 8.0)).norm() < 1e-12);
        assert!((denom_b(&unit_xi, c(0.0, 0.0), &m) - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_data_gives_zero_fields() {
        let k = Wavenumber::polar(3.0, PI / 4.0, 0.5);
        let amp = solve_amplitudes(&TangentialMode::new(1.0, -2.0), &k, &media(), &TraceDatum::zero()).unwrap();
        assert!(amp.a.iter().chain(&amp.a_hat).all(|v| v.norm() == 0.0));
        let f = evaluate_fields(&amp, 0.7).unwrap();
        assert!(f.components().iter().all(|v| v.norm() == 0.0));
        let r = cauchy_residual(&amp, &TraceDatum::zero(), &depth_grid(2.0, 8)).unwrap();
        assert_eq!((r.maxwell_res, r.bc_res), (0.0, 0.0));
        assert!(matches!(
            stability_ratio(&amp, &TraceDatum::zero(), &k),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn normal_incidence_fe_only() {
        let k = Wavenumber::polar(2.5, PI / 4.0, 0.5);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let trace = TraceDatum { fe: [one, zero], fm: [zero, zero] };
        let amp = solve_amplitudes(&TangentialMode::new(0.0, 0.0), &k, &media(), &trace).unwrap();
        let diff = [amp.a_hat[0] - amp.a[0], amp.a_hat[1] - amp.a[1]];
        assert!((diff[0] - zero).norm() < 1e-14 && (diff[1] - one).norm() < 1e-14);
        let r = cauchy_residual(&amp, &trace, &depth_grid(3.0, 16)).unwrap();
        assert!(r.maxwell_res < 1e-12);
        assert!(r.bc_relative() < 1e-12);
    }

    #[test]
    fn tangential_trace_at_boundary() {
        let k = Wavenumber::polar(4.0, PI / 4.0, 0.5);
        let trace = TraceDatum { fe: [c(0.3, 1.0), c(-0.2, 0.5)], fm: [c(1.0, 0.0), c(0.0, -2.0)] };
        let amp = solve_amplitudes(&TangentialMode::new(1.5, 0.4), &k, &media(), &trace).unwrap();
        let f = evaluate_fields(&amp, 0.0).unwrap();
        assert_eq!([f.e[0], f.e[1]], amp.a);
        assert_eq!([f.e_hat[0], f.e_hat[1]], amp.a_hat);
    }

    #[test]
    fn fields_decay_with_depth() {
        let k = Wavenumber::polar(3.0, PI / 3.0, 0.5);
        let trace = TraceDatum { fe: [c(1.0, 0.5), c(0.0, 1.0)], fm: [c(0.2, 0.0), c(1.0, 1.0)] };
        let xi = TangentialMode::new(0.8, -1.1);
        let amp = solve_amplitudes(&xi, &k, &media(), &trace).unwrap();
        let (s, _) = decay_roots(&xi, k.k, &amp.media).unwrap();
        let f1 = evaluate_fields(&amp, 1.0).unwrap();
        let f2 = evaluate_fields(&amp, 2.0).unwrap();
        for j in 0..3 {
            assert!(f2.e[j].norm() <= f1.e[j].norm() * (-s.re).exp() * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn residual_detects_perturbation() {
        let k = Wavenumber::polar(5.0, PI / 4.0, 0.5);
        let trace = TraceDatum { fe: [c(1.0, 0.0), c(0.5, 0.5)], fm: [c(0.0, 1.0), c(1.0, 0.0)] };
        let mut amp = solve_amplitudes(&TangentialMode::new(2.0, 1.0), &k, &media(), &trace).unwrap();
        let clean = cauchy_residual(&amp, &trace, &depth_grid(1.0, 10)).unwrap();
        assert!(clean.bc_res < 1e-12 * clean.bc_scale);
        for delta in [1e-6, 1e-4, 1e-2] {
            amp.a_hat[1] = amp.a_hat[1] + delta;
            let r = cauchy_residual(&amp, &trace, &depth_grid(1.0, 10)).unwrap();
            assert!(r.bc_res >= 0.5 * delta, "delta {delta}: bc_res {}", r.bc_res);
            amp.a_hat[1] = amp.a_hat[1] - delta;
        }
    }

    #[test]
    fn degenerate_media_rejected() {
        let k = Wavenumber::polar(3.0, PI / 4.0, 0.5);
        let trace = TraceDatum { fe: [c(1.0, 0.0), c(0.0, 0.0)], fm: [c(0.0, 0.0), c(0.0, 0.0)] };
        let same = MediaQuad::new(2.0, 1.0, 2.0, 1.0);
        assert!(matches!(
            solve_amplitudes(&TangentialMode::new(1.0, 0.0), &k, &same, &trace),
            Err(Error::DegenerateSymbol { .. })
        ));
        let wrong_k = Wavenumber::new(c(3.0, 0.0), 0.5);
        assert!(solve_amplitudes(&TangentialMode::new(1.0, 0.0), &wrong_k, &media(), &trace).is_err());
    }

    #[test]
    fn alpha_imaginary_solves_exactly() {
        let m = media().with_alpha2(-1.0);
        let k = Wavenumber::polar(6.0, PI / 4.0, 0.5);
        let trace = TraceDatum { fe: [c(0.1, 1.0), c(-1.0, 0.2)], fm: [c(0.7, -0.3), c(0.4, 0.4)] };
        let amp = solve_amplitudes(&TangentialMode::new(-3.0, 2.0), &k, &m, &trace).unwrap();
        let r = cauchy_residual(&amp, &trace, &depth_grid(1.0, 12)).unwrap();
        assert!(r.maxwell_res < 1e-12 && r.bc_relative() < 1e-12, "{r:?}");
    }

    fn arb_c() -> impl Strategy<Value = C64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn sqrt_conjugate_symmetry(re in -10.0f64..10.0, im in 1e-6f64..10.0) {
            let z = c(re, im);
            let a = decaying_sqrt(z.conj()).unwrap();
            let b = decaying_sqrt(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
            prop_assert!((a * a - z.conj()).norm() <= 1e-13 * (1.0 + z.norm()));
        }

        #[test]
        fn conjugation_symmetry(
            fe0 in arb_c(), fe1 in arb_c(), fm0 in arb_c(), fm1 in arb_c(),
            x1 in -5.0f64..5.0, x2 in -5.0f64..5.0, kn in 1.0f64..50.0, th in 0.3f64..1.2
        ) {
            let trace = TraceDatum { fe: [fe0, fe1], fm: [fm0, fm1] };
            let xi = TangentialMode::new(x1, x2);
            let k = Wavenumber::polar(kn, th, 0.5);
            prop_assume!(k.in_wedge());
            let kbar = Wavenumber::new(k.k.conj(), 0.5);
            let a = solve_amplitudes(&xi, &k, &media(), &trace).unwrap();
            let b = solve_amplitudes(&xi, &kbar, &media(), &trace.conj()).unwrap();
            for j in 0..2 {
                prop_assert!((a.a[j].conj() - b.a[j]).norm() <= 1e-10 * (1.0 + a.a[j].norm()));
                prop_assert!((a.a_hat[j].conj() - b.a_hat[j]).norm() <= 1e-10 * (1.0 + a.a_hat[j].norm()));
            }
        }

        #[test]
        fn stability_ratio_scale_invariant(
            fe0 in arb_c(), fe1 in arb_c(), fm0 in arb_c(), scale in arb_c()
        ) {
            prop_assume!(scale.norm() > 1e-3);
            let trace = TraceDatum { fe: [fe0, fe1], fm: [fm0, c(0.3, 0.1)] };
            let xi = TangentialMode::new(1.0, 0.5);
            let k = Wavenumber::polar(7.0, PI / 4.0, 0.5);
            let a = solve_amplitudes(&xi, &k, &media(), &trace).unwrap();
            let scaled = trace.scaled(scale);
            let b = solve_amplitudes(&xi, &k, &media(), &scaled).unwrap();
            let ra = stability_ratio(&a, &trace, &k).unwrap();
            let rb = stability_ratio(&b, &scaled, &k).unwrap();
            prop_assert!((ra - rb).abs() <= 1e-10 * ra);
        }
    }
}
