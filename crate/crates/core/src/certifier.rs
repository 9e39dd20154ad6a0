//! Contrast margins and grid lower bounds for the two boundary symbols.
//!
//! Both denominators depend on `ξ` only through `|ξ|²` and on `k` only through
//! `k²`, so the scan runs over `(|ξ|, |k|, arg k²)` with `ξ = (|ξ|, 0)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfspace::{denom_a, denom_b, TangentialMode};
use crate::media::{check_admissible, AdmissibilityReport, MediaQuad, WedgeSpec};
use crate::C64;

/// Default certification threshold on the normalized denominators.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

/// Sampling of `(|ξ|, k)` space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    /// Number of `|ξ|` samples: `0` plus log-spaced points up to `xi_max`.
    pub xi_count: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    /// Number of `arg k²` samples, split evenly between the upper and lower
    /// halves of the wedge.
    pub angle_count: usize,
    pub k_count: usize,
    pub k_min: f64,
    pub k_max: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            xi_count: 64,
            xi_min: 1e-2,
            xi_max: 100.0,
            angle_count: 32,
            k_count: 16,
            k_min: 1.0,
            k_max: 100.0,
        }
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|j| (a + (b - a) * j as f64 / (n - 1) as f64).exp()).collect()
}

impl ScanGrid {
    pub fn validate(&self) -> Result<()> {
        if self.xi_count == 0 || self.angle_count < 2 || self.k_count == 0 {
            return Err(Error::InvalidInput("scan grid counts must be positive (angles ≥ 2)".into()));
        }
        if !(self.xi_min > 0.0 && self.xi_max >= self.xi_min) {
            return Err(Error::InvalidInput("need 0 < xi_min ≤ xi_max".into()));
        }
        if !(self.k_min >= 1.0 && self.k_max >= self.k_min) {
            return Err(Error::InvalidInput("need 1 ≤ k_min ≤ k_max".into()));
        }
        Ok(())
    }

    pub fn xi_values(&self) -> Vec<f64> {
        let mut v = vec![0.0];
        v.extend(log_space(self.xi_min, self.xi_max, self.xi_count.saturating_sub(1)));
        v.truncate(self.xi_count);
        v
    }

    pub fn k_moduli(&self) -> Vec<f64> {
        log_space(self.k_min, self.k_max, self.k_count)
    }

    /// Angles of `k²` covering `|sin φ| ≥ γ`, upper half first.
    pub fn k2_angles(&self, gamma: f64) -> Vec<f64> {
        let lo = gamma.asin();
        let hi = std::f64::consts::PI - lo;
        let upper = self.angle_count / 2;
        let lower = self.angle_count - upper;
        let spread = |n: usize| -> Vec<f64> {
            if n == 1 {
                return vec![0.5 * (lo + hi)];
            }
            (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
        };
        let mut out = spread(upper);
        out.extend(spread(lower).into_iter().map(|a| -a));
        out
    }

    /// Same grid with every count multiplied by `factor`; the refined grid
    /// contains the original one when `factor` is odd.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            xi_count: (self.xi_count - 2) * factor + 2,
            angle_count: (self.angle_count / 2 - 1) * factor * 2 + 2,
            k_count: (self.k_count - 1) * factor + 1,
            ..self.clone()
        }
    }
}

/// A single scan point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub xi: f64,
    pub k: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolScanReport {
    pub min_ratio_a: f64,
    pub min_ratio_b: f64,
    pub argmin_a: GridPoint,
    pub argmin_b: GridPoint,
    pub points: usize,
    pub grid: ScanGrid,
}

/// `(|denom_A|, |denom_B|)` divided by `|ξ|² + |k|²`.
pub fn normalized_denominators(media: &MediaQuad, xi: f64, k: C64) -> (f64, f64) {
    let mode = TangentialMode::new(xi, 0.0);
    let norm = xi * xi + k.norm_sqr();
    (denom_a(&mode, k, media).norm() / norm, denom_b(&mode, k, media).norm() / norm)
}

/// Exact minimum of both normalized denominators over the grid.
///
/// The minimum is reduced in parallel; ties go to the lowest flattened grid
/// index `(k modulus, angle, ξ)` so the result does not depend on scheduling.
pub fn scan_lower_bounds(media: &MediaQuad, wedge: &WedgeSpec, grid: &ScanGrid) -> Result<SymbolScanReport> {
    grid.validate()?;
    let xis = grid.xi_values();
    let angles = grid.k2_angles(wedge.gamma);
    let moduli = grid.k_moduli();
    let (nx, na) = (xis.len(), angles.len());
    let total = nx * na * moduli.len();
    let point = |idx: usize| {
        let xi = xis[idx % nx];
        let phi = angles[(idx / nx) % na];
        let km = moduli[idx / (nx * na)];
        GridPoint { xi, k: C64::from_polar(km, 0.5 * phi) }
    };
    let best = |a: (f64, usize), b: (f64, usize)| {
        if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) {
            a
        } else {
            b
        }
    };
    let (ma, mb) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let p = point(idx);
            let (ra, rb) = normalized_denominators(media, p.xi, p.k);
            ((ra, idx), (rb, idx))
        })
        .reduce(
            || ((f64::INFINITY, usize::MAX), (f64::INFINITY, usize::MAX)),
            |x, y| (best(x.0, y.0), best(x.1, y.1)),
        );
    Ok(SymbolScanReport {
        min_ratio_a: ma.0,
        min_ratio_b: mb.0,
        argmin_a: point(ma.1),
        argmin_b: point(mb.1),
        points: total,
        grid: grid.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub certified: bool,
    pub threshold: f64,
    pub admissibility: AdmissibilityReport,
    pub scan: SymbolScanReport,
}

/// Admissibility check plus grid lower bounds against `threshold`.
pub fn certify(media: &MediaQuad, wedge: &WedgeSpec, grid: &ScanGrid, threshold: f64) -> Result<Certificate> {
    let admissibility = check_admissible(media)?;
    let scan = scan_lower_bounds(media, wedge, grid)?;
    let certified = admissibility.ok && scan.min_ratio_a >= threshold && scan.min_ratio_b >= threshold;
    Ok(Certificate { certified, threshold, admissibility, scan })
}
