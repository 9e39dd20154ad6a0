//! Spectral parameters, wedge regions and media descriptions.
//!
//! Every other module consumes these types. They are plain values: once built
//! they are never mutated, so they can be shared freely across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{c, C64};

/// Default number of radial samples for [`RadialMedia`].
pub const DEFAULT_RADIAL_SAMPLES: usize = 512;

/// Complex spectral parameter `k = iω` together with the wedge aperture used
/// to judge it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavenumber {
    pub k: C64,
    pub gamma: f64,
}

impl Wavenumber {
    pub fn new(k: C64, gamma: f64) -> Self {
        Self { k, gamma }
    }

    /// `k = iω`.
    pub fn from_omega(omega: C64, gamma: f64) -> Self {
        Self::new(C64::i() * omega, gamma)
    }

    /// `k = |k| e^{iθ}`.
    pub fn polar(modulus: f64, theta: f64, gamma: f64) -> Self {
        Self::new(C64::from_polar(modulus, theta), gamma)
    }

    pub fn omega(&self) -> C64 {
        -C64::i() * self.k
    }

    pub fn norm(&self) -> f64 {
        self.k.norm()
    }

    /// `|Im(k²)| ≥ γ|k|²`.
    pub fn in_wedge(&self) -> bool {
        let k2 = self.k * self.k;
        k2.im.abs() >= self.gamma * k2.norm()
    }

    /// Wedge membership of `α²k²`; identical to [`Self::in_wedge`] for real `α²`
    /// but kept separate because the hatted problem states it separately.
    pub fn in_wedge_scaled(&self, alpha2: f64) -> bool {
        let k2 = self.k * self.k * alpha2;
        k2.im.abs() >= self.gamma * (self.k * self.k).norm()
    }

    /// Checks the hypotheses every half-space and operator solve relies on.
    pub fn require_admissible(&self) -> Result<()> {
        if !(self.k.re.is_finite() && self.k.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite wavenumber".into()));
        }
        if self.norm() < 1.0 {
            return Err(Error::InvalidInput(format!(
                "|k| = {:.4} is below 1",
                self.norm()
            )));
        }
        if !self.in_wedge() {
            return Err(Error::BranchDegeneracy(format!(
                "k = {} violates |Im k²| ≥ {}|k|²",
                self.k, self.gamma
            )));
        }
        Ok(())
    }
}

/// Wedge `{ω : |Im(ω²)| ≥ γ|ω|², |ω| ≥ ω₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeSpec {
    pub gamma: f64,
    pub omega0: f64,
}

impl WedgeSpec {
    pub fn new(gamma: f64, omega0: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidInput(format!("wedge gamma {gamma} not in (0, 1]")));
        }
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::InvalidInput(format!("wedge omega0 {omega0} must be positive")));
        }
        Ok(Self { gamma, omega0 })
    }

    /// Angular half-width (in `arg ω`) of the excluded band around each axis.
    ///
    /// `|Im ω²| ≥ γ|ω|²` is `|sin 2θ| ≥ γ`, so the wedge occupies
    /// `θ ∈ [θ_b, π/2 − θ_b]` modulo `π/2` with `θ_b = asin(γ)/2`.
    pub fn band_half_angle(&self) -> f64 {
        0.5 * self.gamma.asin()
    }
}

/// `true` iff `|Im(ω²)| ≥ γ|ω|²` and `|ω| ≥ ω₀`.
pub fn wedge_contains(w: &WedgeSpec, omega: C64) -> bool {
    let w2 = omega * omega;
    w2.im.abs() >= w.gamma * w2.norm() && omega.norm() >= w.omega0
}

/// Frozen isotropic boundary values and the margins they are judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediaQuad {
    pub eps: f64,
    pub mu: f64,
    pub eps_hat: f64,
    pub mu_hat: f64,
    /// Unit factor of the hatted system; `1` or `i`.
    pub alpha: C64,
    /// Ellipticity bound Λ ≥ 1.
    pub lambda_cap: f64,
    /// Contrast margin Λ₁ > 0.
    pub lambda_margin: f64,
}

impl MediaQuad {
    /// Media with `α = 1`, Λ chosen as the tightest admissible bound and Λ₁ = 0.1.
    pub fn new(eps: f64, mu: f64, eps_hat: f64, mu_hat: f64) -> Self {
        let vals = [eps, mu, eps_hat, mu_hat];
        let hi = vals.iter().cloned().fold(1.0f64, f64::max);
        let lo = vals.iter().cloned().fold(1.0f64, f64::min);
        let lambda_cap = if lo > 0.0 { hi.max(1.0 / lo) } else { hi };
        Self {
            eps,
            mu,
            eps_hat,
            mu_hat,
            alpha: C64::new(1.0, 0.0),
            lambda_cap,
            lambda_margin: 0.1,
        }
    }

    pub fn with_alpha2(mut self, alpha2: f64) -> Self {
        self.alpha = if alpha2 < 0.0 { C64::i() } else { c(1.0, 0.0) };
        self
    }

    pub fn with_margin(mut self, lambda_margin: f64) -> Self {
        self.lambda_margin = lambda_margin;
        self
    }

    pub fn with_cap(mut self, lambda_cap: f64) -> Self {
        self.lambda_cap = lambda_cap;
        self
    }

    /// `α²`, real by construction.
    pub fn alpha2(&self) -> f64 {
        (self.alpha * self.alpha).re
    }

    /// Swap the roles of the plain and hatted media.
    pub fn swapped(&self) -> Self {
        Self {
            eps: self.eps_hat,
            mu: self.mu_hat,
            eps_hat: self.eps,
            mu_hat: self.mu,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps", self.eps),
            ("mu", self.mu),
            ("eps_hat", self.eps_hat),
            ("mu_hat", self.mu_hat),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidMedia(format!("{name} = {v} must be positive")));
            }
        }
        if (self.alpha.norm() - 1.0).abs() > 1e-12 || (self.alpha * self.alpha).im.abs() > 1e-12 {
            return Err(Error::InvalidMedia(format!(
                "alpha = {} must be a unit with real square",
                self.alpha
            )));
        }
        if self.lambda_cap < 1.0 {
            return Err(Error::InvalidMedia(format!(
                "lambda = {} must be at least 1",
                self.lambda_cap
            )));
        }
        if !(self.lambda_margin > 0.0) {
            return Err(Error::InvalidMedia(format!(
                "lambda1 = {} must be positive",
                self.lambda_margin
            )));
        }
        Ok(())
    }

    /// The three contrast margins `(|ε−ε̂|, |μ−μ̂|, |ε/μ − ε̂/μ̂|)`.
    pub fn margins(&self) -> [f64; 3] {
        [
            (self.eps - self.eps_hat).abs(),
            (self.mu - self.mu_hat).abs(),
            (self.eps / self.mu - self.eps_hat / self.mu_hat).abs(),
        ]
    }

    pub fn admissible(&self) -> bool {
        self.margins().iter().all(|&m| m >= self.lambda_margin)
    }

    /// `Λ⁻¹ ≤ ε, μ, ε̂, μ̂ ≤ Λ`.
    pub fn within_cap(&self) -> bool {
        let lo = 1.0 / self.lambda_cap;
        [self.eps, self.mu, self.eps_hat, self.mu_hat]
            .iter()
            .all(|&v| v >= lo - 1e-15 && v <= self.lambda_cap + 1e-15)
    }

    /// Exactly identical plain and hatted media.
    pub fn is_identical(&self) -> bool {
        self.eps == self.eps_hat && self.mu == self.mu_hat
    }
}

/// Outcome of [`check_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub margins: [f64; 3],
}

/// Contrast margins and their comparison with Λ₁.
pub fn check_admissible(m: &MediaQuad) -> Result<AdmissibilityReport> {
    for v in [m.eps, m.mu, m.eps_hat, m.mu_hat] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidMedia(format!("parameter {v} must be positive")));
        }
    }
    let margins = m.margins();
    Ok(AdmissibilityReport {
        ok: margins.iter().all(|&x| x >= m.lambda_margin),
        margins,
    })
}

/// Radially varying isotropic profiles on the unit ball.
///
/// Each profile is sampled on the uniform grid `r_j = j/(n−1)`, `j = 0..n`,
/// so the last sample is the boundary value at `r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMedia {
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub eps_hat: Vec<f64>,
    pub mu_hat: Vec<f64>,
    /// Width of the boundary collar on which C¹ bounds are checked.
    pub s0: f64,
    pub lambda_cap: f64,
    pub lambda_margin: f64,
}

/// Which of the four profiles to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Eps,
    Mu,
    EpsHat,
    MuHat,
}

impl RadialMedia {
    /// Constant profiles equal to the given boundary quad.
    pub fn constant(m: &MediaQuad, samples: usize) -> Self {
        Self::from_fn(
            samples,
            0.25,
            m.lambda_cap,
            m.lambda_margin,
            |_| m.eps,
            |_| m.mu,
            |_| m.eps_hat,
            |_| m.mu_hat,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        samples: usize,
        s0: f64,
        lambda_cap: f64,
        lambda_margin: f64,
        eps: impl Fn(f64) -> f64,
        mu: impl Fn(f64) -> f64,
        eps_hat: impl Fn(f64) -> f64,
        mu_hat: impl Fn(f64) -> f64,
    ) -> Self {
        let n = samples.max(2);
        let grid: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();
        Self {
            eps: grid.iter().map(|&r| eps(r)).collect(),
            mu: grid.iter().map(|&r| mu(r)).collect(),
            eps_hat: grid.iter().map(|&r| eps_hat(r)).collect(),
            mu_hat: grid.iter().map(|&r| mu_hat(r)).collect(),
            s0,
            lambda_cap,
            lambda_margin,
        }
    }

    pub fn samples(&self) -> usize {
        self.eps.len()
    }

    fn profile(&self, p: Profile) -> &[f64] {
        match p {
            Profile::Eps => &self.eps,
            Profile::Mu => &self.mu,
            Profile::EpsHat => &self.eps_hat,
            Profile::MuHat => &self.mu_hat,
        }
    }

    /// Piecewise-linear interpolation of a profile at `r ∈ [0, 1]`.
    pub fn eval(&self, p: Profile, r: f64) -> f64 {
        let v = self.profile(p);
        let n = v.len();
        let x = r.clamp(0.0, 1.0) * (n - 1) as f64;
        let j = (x.floor() as usize).min(n - 2);
        let t = x - j as f64;
        v[j] * (1.0 - t) + v[j + 1] * t
    }

    /// Boundary values at `r = 1` as a [`MediaQuad`] with `α = 1`.
    pub fn boundary_quad(&self) -> MediaQuad {
        let last = |v: &[f64]| *v.last().expect("non-empty profile");
        MediaQuad::new(
            last(&self.eps),
            last(&self.mu),
            last(&self.eps_hat),
            last(&self.mu_hat),
        )
        .with_cap(self.lambda_cap)
        .with_margin(self.lambda_margin)
    }

    /// Bounds, boundary admissibility and collar derivative bounds.
    pub fn validate(&self) -> Result<()> {
        let n = self.samples();
        if n < 2 || [&self.mu, &self.eps_hat, &self.mu_hat].iter().any(|v| v.len() != n) {
            return Err(Error::InvalidMedia("profiles must share a grid of at least 2 samples".into()));
        }
        if !(self.s0 > 0.0 && self.s0 <= 1.0) {
            return Err(Error::InvalidMedia(format!("s0 = {} not in (0, 1]", self.s0)));
        }
        let lo = 1.0 / self.lambda_cap;
        let h = 1.0 / (n - 1) as f64;
        for p in [Profile::Eps, Profile::Mu, Profile::EpsHat, Profile::MuHat] {
            let v = self.profile(p);
            if let Some((j, x)) = v
                .iter()
                .enumerate()
                .find(|(_, &x)| !(x >= lo && x <= self.lambda_cap))
            {
                return Err(Error::InvalidMedia(format!(
                    "{p:?} sample {j} = {x} outside [{lo}, {}]",
                    self.lambda_cap
                )));
            }
            for j in 0..n - 1 {
                let r_mid = (j as f64 + 0.5) * h;
                if r_mid >= 1.0 - self.s0 {
                    let d = (v[j + 1] - v[j]) / h;
                    if d.abs() > self.lambda_cap {
                        return Err(Error::InvalidMedia(format!(
                            "{p:?} derivative {d:.3} near r = {r_mid:.4} exceeds {}",
                            self.lambda_cap
                        )));
                    }
                }
            }
        }
        let quad = self.boundary_quad();
        if !quad.admissible() {
            return Err(Error::InvalidMedia(format!(
                "boundary values not admissible: margins {:?} against {}",
                quad.margins(),
                self.lambda_margin
            )));
        }
        Ok(())
    }
}

/// JSON descriptor for constant media.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediaDescriptor {
    pub eps: f64,
    pub mu: f64,
    pub eps_hat: f64,
    pub mu_hat: f64,
    #[serde(default = "one")]
    pub alpha2: f64,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub lambda1: Option<f64>,
}

fn one() -> f64 {
    1.0
}

/// JSON descriptor for sampled radial media.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDescriptor {
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub eps_hat: Vec<f64>,
    pub mu_hat: Vec<f64>,
    #[serde(default = "default_s0")]
    pub s0: f64,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub lambda1: Option<f64>,
}

fn default_s0() -> f64 {
    0.25
}

/// Either media file variant; radial files are recognised by array-valued fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediaFile {
    Constant(MediaDescriptor),
    Radial(RadialDescriptor),
}

impl MediaDescriptor {
    pub fn to_quad(&self) -> Result<MediaQuad> {
        if self.alpha2 != 1.0 && self.alpha2 != -1.0 {
            return Err(Error::InvalidMedia(format!("alpha2 = {} must be ±1", self.alpha2)));
        }
        let mut q = MediaQuad::new(self.eps, self.mu, self.eps_hat, self.mu_hat).with_alpha2(self.alpha2);
        if let Some(l) = self.lambda {
            q = q.with_cap(l);
        }
        if let Some(l1) = self.lambda1 {
            q = q.with_margin(l1);
        }
        for v in [q.eps, q.mu, q.eps_hat, q.mu_hat] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidMedia(format!("parameter {v} must be positive")));
            }
        }
        Ok(q)
    }

    pub fn from_quad(m: &MediaQuad) -> Self {
        Self {
            eps: m.eps,
            mu: m.mu,
            eps_hat: m.eps_hat,
            mu_hat: m.mu_hat,
            alpha2: m.alpha2(),
            lambda: Some(m.lambda_cap),
            lambda1: Some(m.lambda_margin),
        }
    }
}

impl RadialDescriptor {
    pub fn to_media(&self) -> Result<RadialMedia> {
        let quad_cap = {
            let all = self.eps.iter().chain(&self.mu).chain(&self.eps_hat).chain(&self.mu_hat);
            let (lo, hi) = all.fold((1.0f64, 1.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            if lo <= 0.0 {
                return Err(Error::InvalidMedia("radial samples must be positive".into()));
            }
            hi.max(1.0 / lo)
        };
        let media = RadialMedia {
            eps: self.eps.clone(),
            mu: self.mu.clone(),
            eps_hat: self.eps_hat.clone(),
            mu_hat: self.mu_hat.clone(),
            s0: self.s0,
            lambda_cap: self.lambda.unwrap_or(quad_cap),
            lambda_margin: self.lambda1.unwrap_or(0.1),
        };
        media.validate()?;
        Ok(media)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn wedge_examples() {
        let w = WedgeSpec::new(0.5, 1.0).unwrap();
        assert!(wedge_contains(&w, C64::from_polar(2.0, -PI / 4.0)));
        assert!(!wedge_contains(&w, c(2.0, 0.0)));
        let far = WedgeSpec::new(0.5, 10.0).unwrap();
        assert!(!wedge_contains(&far, C64::from_polar(2.0, -PI / 4.0)));
    }

    #[test]
    fn wedge_rejects_bad_gamma() {
        assert!(WedgeSpec::new(0.0, 1.0).is_err());
        assert!(WedgeSpec::new(1.5, 1.0).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let r = check_admissible(&MediaQuad::new(2.0, 1.0, 1.0, 2.0).with_margin(0.5)).unwrap();
        assert!(r.ok);
        assert_eq!(r.margins, [1.0, 1.0, 1.5]);

        let r = check_admissible(&MediaQuad::new(1.0, 1.0, 1.0, 1.0).with_margin(0.1)).unwrap();
        assert!(!r.ok);
        assert_eq!(r.margins, [0.0, 0.0, 0.0]);

        let r = check_admissible(&MediaQuad::new(2.0, 1.0, 4.0, 2.0).with_margin(0.1)).unwrap();
        assert!(!r.ok);
        assert_eq!(r.margins[2], 0.0);

        assert!(matches!(
            check_admissible(&MediaQuad::new(-1.0, 1.0, 1.0, 1.0)),
            Err(Error::InvalidMedia(_))
        ));
    }

    #[test]
    fn wavenumber_hypotheses() {
        let k = Wavenumber::polar(2.0, PI / 4.0, 0.5);
        assert!(k.in_wedge());
        assert!(k.require_admissible().is_ok());
        assert!(Wavenumber::polar(0.5, PI / 4.0, 0.5).require_admissible().is_err());
        assert!(matches!(
            Wavenumber::new(c(3.0, 0.0), 0.5).require_admissible(),
            Err(Error::BranchDegeneracy(_))
        ));
        assert!((Wavenumber::from_omega(c(1.0, -1.0), 0.5).k - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn radial_media_checks() {
        let q = MediaQuad::new(2.0, 1.0, 1.0, 2.0).with_margin(0.5);
        let m = RadialMedia::constant(&q, DEFAULT_RADIAL_SAMPLES);
        assert!(m.validate().is_ok());
        assert_eq!(m.boundary_quad().eps, 2.0);

        let steep = RadialMedia::from_fn(64, 0.3, 2.5, 0.1, |r| 1.0 + 1.5 * r * r * r * r * r * r, |_| 1.0, |_| 1.0, |_| 2.0);
        assert!(steep.validate().is_err());

        let smooth = RadialMedia::from_fn(64, 0.3, 2.5, 0.1, |r| 1.5 + 0.5 * r, |_| 1.0, |_| 1.0, |_| 2.0);
        assert!(smooth.validate().is_ok());
        assert!((smooth.eval(Profile::Eps, 0.5) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn descriptor_round_trip() {
        let text = r#"{"eps":2,"mu":1,"eps_hat":1,"mu_hat":2,"alpha2":-1,"lambda":3,"lambda1":0.5}"#;
        let file: MediaFile = serde_json::from_str(text).unwrap();
        let MediaFile::Constant(d) = file else { panic!("expected constant media") };
        let q = d.to_quad().unwrap();
        assert_eq!(q.alpha2(), -1.0);
        assert_eq!(q.lambda_cap, 3.0);

        let radial = r#"{"eps":[2,2],"mu":[1,1],"eps_hat":[1,1],"mu_hat":[2,2]}"#;
        let file: MediaFile = serde_json::from_str(radial).unwrap();
        assert!(matches!(file, MediaFile::Radial(_)));

        let bad = r#"{"eps":2,"mu":1,"eps_hat":1,"mu_hat":2,"alpha2":0.5}"#;
        let MediaFile::Constant(d) = serde_json::from_str(bad).unwrap() else { panic!() };
        assert!(d.to_quad().is_err());
    }

    proptest! {
        #[test]
        fn admissibility_symmetric_under_swap(
            e in 0.1f64..10.0, m in 0.1f64..10.0, eh in 0.1f64..10.0, mh in 0.1f64..10.0
        ) {
            let q = MediaQuad::new(e, m, eh, mh);
            let a = check_admissible(&q).unwrap();
            let b = check_admissible(&q.swapped()).unwrap();
            for i in 0..3 {
                prop_assert!((a.margins[i] - b.margins[i]).abs() <= 1e-12 * (1.0 + a.margins[i]));
            }
            prop_assert_eq!(a.ok, b.ok);
        }

        #[test]
        fn wedge_symmetries(re in -50.0f64..50.0, im in -50.0f64..50.0, g in 0.05f64..1.0) {
            let w = WedgeSpec::new(g, 1.0).unwrap();
            let z = c(re, im);
            let base = wedge_contains(&w, z);
            prop_assert_eq!(base, wedge_contains(&w, -z));
            prop_assert_eq!(base, wedge_contains(&w, z.conj()));
        }
    }
}
