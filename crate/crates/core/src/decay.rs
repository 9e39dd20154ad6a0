//! Interior decay of source-free Maxwell fields on the slab `0 < x₃ < 1`.
//!
//! With tangential frequency `ξ` every source-free field is a sum of the two
//! modes `e^{∓σ x₃}`, `σ = √(|ξ|² + k²εμ)`. Prescribing the tangential electric
//! trace on both faces fixes the field; the ratio of its `L²` norm on the
//! interior `[s, 1−s]` to the norm on the collar `[0, s) ∪ (1−s, 1]` is computed
//! from closed-form exponential integrals and fitted against `c₁ e^{−c₂|k|}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfspace::{decaying_sqrt, fourier_curl, TangentialMode};
use crate::media::Wavenumber;
use crate::{c, C64};

/// Fitted `c₂` below which the fit is reported as a decay violation.
pub const DECAY_FLOOR: f64 = 0.05;

/// Boundary-value problem on the slab.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabProblem {
    pub eps: f64,
    pub mu: f64,
    pub k: Wavenumber,
    /// Collar width, in `(0, 1/2)`.
    pub s: f64,
    pub xi: [f64; 2],
    /// Tangential `E` at `x₃ = 0` and `x₃ = 1`.
    pub left: [C64; 2],
    pub right: [C64; 2],
    /// When false the wedge check is skipped; used to probe the oscillatory regime.
    pub enforce_wedge: bool,
}

impl SlabProblem {
    pub fn new(eps: f64, mu: f64, k: Wavenumber, s: f64, xi: [f64; 2], left: [C64; 2], right: [C64; 2]) -> Self {
        Self { eps, mu, k, s, xi, left, right, enforce_wedge: true }
    }

    pub fn outside_wedge(mut self) -> Self {
        self.enforce_wedge = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.mu > 0.0 && self.eps.is_finite() && self.mu.is_finite()) {
            return Err(Error::InvalidMedia(format!("ε = {}, μ = {} must be positive", self.eps, self.mu)));
        }
        if !(self.s > 0.0 && self.s < 0.5) {
            return Err(Error::InvalidInput(format!("collar width s = {} not in (0, 1/2)", self.s)));
        }
        if self.enforce_wedge {
            self.k.require_admissible()?;
        } else if self.k.norm() < 1.0 {
            return Err(Error::InvalidInput(format!("|k| = {:.4} is below 1", self.k.norm())));
        }
        Ok(())
    }
}

/// One exponential mode `v e^{λ(x₃ − x₀)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabMode {
    pub lambda: C64,
    pub anchor: f64,
    pub e: [C64; 3],
    pub h: [C64; 3],
}

impl SlabMode {
    fn weight(&self, x: f64) -> C64 {
        (self.lambda * (x - self.anchor)).exp()
    }
}

/// Exact field on the slab.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabProfile {
    pub sigma: C64,
    pub k: C64,
    pub eps: f64,
    pub mu: f64,
    pub xi: [f64; 2],
    pub modes: [SlabMode; 2],
}

pub fn slab_solve(p: &SlabProblem) -> Result<SlabProfile> {
    p.validate()?;
    let k = p.k.k;
    let xi = TangentialMode::new(p.xi[0], p.xi[1]);
    let z = xi.norm_sqr() + k * k * p.eps * p.mu;
    let sigma = if p.enforce_wedge {
        decaying_sqrt(z)?
    } else {
        let w = z.sqrt();
        if w.re < 0.0 {
            -w
        } else {
            w
        }
    };
    if sigma.norm() < 1e-12 {
        return Err(Error::BranchDegeneracy("σ = 0: the two modes coincide".into()));
    }
    let q = (-sigma).exp();
    let det = c(1.0, 0.0) - q * q;
    if det.norm() < 1e-12 {
        return Err(Error::Discretization(format!("slab resonance at σ = {sigma}")));
    }
    let a: Vec<C64> = (0..2).map(|j| (p.left[j] - q * p.right[j]) / det).collect();
    let b: Vec<C64> = (0..2).map(|j| (p.right[j] - q * p.left[j]) / det).collect();
    let mode = |amp: &[C64], lambda: C64, anchor: f64| {
        // div E = iξ·a + λ a₃ = 0
        let e3 = -C64::i() * xi.dot(&[amp[0], amp[1]]) / lambda;
        let e = [amp[0], amp[1], e3];
        let curl = fourier_curl(&xi, -lambda, &e);
        let h = curl.map(|v| v / (k * p.mu));
        SlabMode { lambda, anchor, e, h }
    };
    Ok(SlabProfile {
        sigma,
        k,
        eps: p.eps,
        mu: p.mu,
        xi: p.xi,
        modes: [mode(&a, -sigma, 0.0), mode(&b, sigma, 1.0)],
    })
}

impl SlabProfile {
    pub fn e_at(&self, x: f64) -> [C64; 3] {
        let mut out = [c(0.0, 0.0); 3];
        for m in &self.modes {
            let w = m.weight(x);
            (0..3).for_each(|i| out[i] += m.e[i] * w);
        }
        out
    }

    pub fn h_at(&self, x: f64) -> [C64; 3] {
        let mut out = [c(0.0, 0.0); 3];
        for m in &self.modes {
            let w = m.weight(x);
            (0..3).for_each(|i| out[i] += m.h[i] * w);
        }
        out
    }

    /// Relative residual of `∇×H = −kεE` and `div E = 0` at `x₃`, with the
    /// derivatives taken analytically.
    pub fn maxwell_residual(&self, x: f64) -> f64 {
        let xi = TangentialMode::new(self.xi[0], self.xi[1]);
        let mut curl_h = [c(0.0, 0.0); 3];
        let mut div = c(0.0, 0.0);
        let mut div_scale = 0.0;
        for m in &self.modes {
            let w = m.weight(x);
            let ch = fourier_curl(&xi, -m.lambda, &m.h);
            (0..3).for_each(|i| curl_h[i] += ch[i] * w);
            let terms = [C64::i() * self.xi[0] * m.e[0], C64::i() * self.xi[1] * m.e[1], m.lambda * m.e[2]];
            div += terms.iter().sum::<C64>() * w;
            div_scale += terms.iter().map(|t| t.norm()).sum::<f64>() * w.norm();
        }
        let e = self.e_at(x);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..3 {
            let rhs = -self.k * self.eps * e[i];
            num = num.max((curl_h[i] - rhs).norm());
            den = den.max(curl_h[i].norm()).max(rhs.norm());
        }
        let r1 = if den > 0.0 { num / den } else { 0.0 };
        let r2 = if div_scale > 0.0 { div.norm() / div_scale } else { 0.0 };
        r1.max(r2)
    }

    /// `∫_a^b |E|² + |H|²`, exactly.
    pub fn energy(&self, a: f64, b: f64) -> f64 {
        let mut total = c(0.0, 0.0);
        for m in &self.modes {
            for n in &self.modes {
                let dot: C64 = (0..3).map(|i| m.e[i] * n.e[i].conj() + m.h[i] * n.h[i].conj()).sum();
                let z = m.lambda + n.lambda.conj();
                let shift = -m.lambda * m.anchor - n.lambda.conj() * n.anchor;
                let integral = if z.norm() * (b - a) < 1e-8 {
                    (shift + z * (0.5 * (a + b))).exp() * (b - a)
                } else {
                    ((z * b + shift).exp() - (z * a + shift).exp()) / z
                };
                total += dot * integral;
            }
        }
        total.re.max(0.0)
    }

    /// Interior-to-collar norm ratio for collar width `s`.
    pub fn ratio(&self, s: f64) -> f64 {
        let interior = self.energy(s, 1.0 - s);
        let collar = self.energy(0.0, s) + self.energy(1.0 - s, 1.0);
        if collar == 0.0 {
            0.0
        } else {
            (interior / collar).sqrt()
        }
    }
}

/// Least-squares fit `log R = log c₁ − c₂|k|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c1: f64,
    pub c2: f64,
    /// RMS of `R_i / (c₁e^{−c₂|k_i|}) − 1`.
    pub residual: f64,
    pub moduli: Vec<f64>,
    pub ratios: Vec<f64>,
    pub s: f64,
    /// `c₂ < DECAY_FLOOR`.
    pub violation: bool,
}

impl DecayFit {
    /// Ungated fit.
    pub fn fit(moduli: &[f64], ratios: &[f64], s: f64) -> Result<Self> {
        if moduli.len() < 3 || moduli.len() != ratios.len() {
            return Err(Error::InvalidInput("the fit needs at least three (|k|, ratio) pairs".into()));
        }
        if ratios.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidInput("ratios must be positive and finite".into()));
        }
        let n = moduli.len() as f64;
        let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
        let mx = moduli.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = moduli.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = moduli.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx == 0.0 {
            return Err(Error::InvalidInput("moduli must not all coincide".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let residual = (moduli
            .iter()
            .zip(ratios)
            .map(|(x, r)| (r / (intercept + slope * x).exp() - 1.0).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        Ok(Self {
            c1: intercept.exp(),
            c2: -slope,
            residual,
            moduli: moduli.to_vec(),
            ratios: ratios.to_vec(),
            s,
            violation: -slope < DECAY_FLOOR,
        })
    }

    pub fn require_decay(&self) -> Result<()> {
        if self.violation {
            Err(Error::DecayViolation { c2: self.c2 })
        } else {
            Ok(())
        }
    }
}

/// Fit over the given profiles; a fitted `c₂` below [`DECAY_FLOOR`] is a
/// decay violation.
pub fn fit_decay(moduli: &[f64], profiles: &[SlabProfile], s: f64) -> Result<DecayFit> {
    let ratios: Vec<f64> = profiles.iter().map(|p| p.ratio(s)).collect();
    let fit = DecayFit::fit(moduli, &ratios, s)?;
    fit.require_decay()?;
    Ok(fit)
}

/// Parameters of a decay experiment over several `|k|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    pub eps: f64,
    pub mu: f64,
    pub s: f64,
    pub xi: [f64; 2],
    pub left: [C64; 2],
    pub right: [C64; 2],
    /// Argument of `k`; ignored when `real_omega` is set.
    pub theta: f64,
    pub gamma: f64,
    /// Use `k = i|k|` (real frequency), which leaves the wedge.
    pub real_omega: bool,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            eps: 1.5,
            mu: 1.0,
            s: 0.25,
            xi: [0.3, 0.0],
            left: [c(1.0, 0.0), c(0.0, 0.5)],
            right: [c(-0.4, 0.0), c(1.0, 0.0)],
            theta: std::f64::consts::FRAC_PI_4,
            gamma: 0.5,
            real_omega: false,
        }
    }
}

impl DecayConfig {
    pub fn problem(&self, modulus: f64) -> SlabProblem {
        let theta = if self.real_omega { std::f64::consts::FRAC_PI_2 } else { self.theta };
        let p = SlabProblem::new(
            self.eps,
            self.mu,
            Wavenumber::polar(modulus, theta, self.gamma),
            self.s,
            self.xi,
            self.left,
            self.right,
        );
        if self.real_omega {
            p.outside_wedge()
        } else {
            p
        }
    }

    pub fn profiles(&self, moduli: &[f64]) -> Result<Vec<SlabProfile>> {
        moduli.iter().map(|&m| slab_solve(&self.problem(m))).collect()
    }

    /// Solves and fits without gating on the sign of `c₂`.
    pub fn run(&self, moduli: &[f64]) -> Result<DecayFit> {
        let ratios: Vec<f64> = self.profiles(moduli)?.iter().map(|p| p.ratio(self.s)).collect();
        DecayFit::fit(moduli, &ratios, self.s)
    }
}
