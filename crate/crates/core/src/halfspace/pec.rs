//! Half-space source problem with a perfectly conducting wall at `x₃ = 0`.
//!
//! At fixed `ξ` the second-order system `∇×∇×E + k²εμE = kμJ_m` becomes a
//! two-point boundary value problem in `x₃`. It is discretized on a staggered
//! grid: tangential `E` lives on nodes `x_j = jh`, normal `E₃` on half nodes, so
//! the wall condition `E_t(0) = 0` is imposed exactly. The domain is truncated
//! at depth `L` where the decaying solution has dropped below `1e−12`, and a
//! homogeneous condition is imposed there.

use serde::{Deserialize, Serialize};

use super::{decaying_sqrt, TangentialMode};
use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::media::Wavenumber;
use crate::C64;

/// Uniform grid on `[0, length]` with spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PecGrid {
    pub h: f64,
    pub length: f64,
}

impl PecGrid {
    /// Picks `L` so that `e^{−Re(s) (L − support)} < 1e−12` and a spacing that
    /// resolves both the source and the decay length.
    pub fn automatic(s: C64, support_end: f64, support_width: f64) -> Self {
        let tail = 12.0 * std::f64::consts::LN_10 / s.re;
        let length = support_end + tail;
        let h = (support_width / 400.0).min(0.05 / s.norm()).min(length / 200.0);
        Self { h, length }
    }

    pub fn cells(&self) -> usize {
        (self.length / self.h).ceil() as usize
    }
}

/// Discrete solution on the staggered grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PecProfile {
    pub h: f64,
    /// `E₁, E₂` at nodes `jh`, `j = 0..=M`; both ends are zero.
    pub e_t: Vec<[C64; 2]>,
    /// `E₃` at half nodes `(j + ½)h`, `j = 0..M`.
    pub e3: Vec<C64>,
    /// `H₁, H₂` at half nodes.
    pub h_t: Vec<[C64; 2]>,
    /// `H₃` at nodes.
    pub h3: Vec<C64>,
    /// Relative residual of `∇×H + kεE = J_m` on the grid, interior points.
    pub residual: f64,
    /// Discrete `L²` norm of the source.
    pub source_norm: f64,
}

impl PecProfile {
    /// Discrete `L²(0, L)` norm of `(E, H)`.
    pub fn field_norm(&self) -> f64 {
        let sum = self
            .e_t
            .iter()
            .chain(&self.h_t)
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .chain(self.e3.iter().chain(&self.h3).map(|v| v.norm_sqr()))
            .sum::<f64>();
        (sum * self.h).sqrt()
    }
}

/// Solves `∇×∇×E + k²εμE = kμJ_m`, `E×e₃ = 0` at `x₃ = 0`, decaying as
/// `x₃ → ∞`, and recovers `H = ∇×E/(kμ)`.
///
/// `support` bounds the source; `jm` is sampled on nodes (tangential part) and
/// half nodes (normal part). `grid` overrides the automatic choice.
pub fn pec_source_solve<F>(
    xi: &TangentialMode,
    k: &Wavenumber,
    eps: f64,
    mu: f64,
    jm: F,
    support: (f64, f64),
    grid: Option<PecGrid>,
) -> Result<PecProfile>
where
    F: Fn(f64) -> [C64; 3],
{
    k.require_admissible()?;
    if !(eps > 0.0 && mu > 0.0) {
        return Err(Error::InvalidMedia("ε and μ must be positive".into()));
    }
    if !(support.0 >= 0.0 && support.1 > support.0) {
        return Err(Error::InvalidInput("source support must be a nonempty interval in [0, ∞)".into()));
    }
    let kk = k.k;
    let xi2 = xi.norm_sqr();
    let s = decaying_sqrt(C64::new(xi2, 0.0) + kk * kk * (eps * mu))?;
    let grid = grid.unwrap_or_else(|| PecGrid::automatic(s, support.1, support.1 - support.0));
    let m = grid.cells();
    if m < 4 {
        return Err(Error::Discretization("grid has fewer than 4 cells".into()));
    }
    let h = grid.h;
    let i = C64::i();
    let shift = kk * kk * (eps * mu);
    let [x1, x2] = xi.xi;

    // unknowns: E3 at half node j → 3j, E1/E2 at node j+1 → 3j+1, 3j+2
    let n = 3 * m - 2;
    let e3_idx = |j: usize| 3 * j;
    let et_idx = |q: usize, comp: usize| 3 * (q - 1) + 1 + comp;
    let mut a = BandMatrix::zeros(n, 3, 3);
    let mut rhs = vec![C64::new(0.0, 0.0); n];

    for j in 0..m {
        let row = e3_idx(j);
        a.add(row, row, C64::new(xi2, 0.0) + shift);
        for (comp, xc) in [x1, x2].into_iter().enumerate() {
            if j + 1 < m {
                a.add(row, et_idx(j + 1, comp), i * xc / h);
            }
            if j >= 1 {
                a.add(row, et_idx(j, comp), -i * xc / h);
            }
        }
        rhs[row] = jm((j as f64 + 0.5) * h)[2] * kk * mu;
    }
    for q in 1..m {
        let src = jm(q as f64 * h);
        for comp in 0..2 {
            let row = et_idx(q, comp);
            let xc = [x1, x2][comp];
            for (other, xo) in [x1, x2].into_iter().enumerate() {
                a.add(row, et_idx(q, other), C64::new(-xc * xo, 0.0));
            }
            a.add(row, et_idx(q, comp), C64::new(xi2 + 2.0 / (h * h), 0.0) + shift);
            if q > 1 {
                a.add(row, et_idx(q - 1, comp), C64::new(-1.0 / (h * h), 0.0));
            }
            if q + 1 < m {
                a.add(row, et_idx(q + 1, comp), C64::new(-1.0 / (h * h), 0.0));
            }
            a.add(row, e3_idx(q), i * xc / h);
            a.add(row, e3_idx(q - 1), -i * xc / h);
            rhs[row] = src[comp] * kk * mu;
        }
    }
    let x = a.solve(&rhs)?;

    let zero = C64::new(0.0, 0.0);
    let mut e_t = vec![[zero; 2]; m + 1];
    for (q, slot) in e_t.iter_mut().enumerate().take(m).skip(1) {
        *slot = [x[et_idx(q, 0)], x[et_idx(q, 1)]];
    }
    let e3: Vec<C64> = (0..m).map(|j| x[e3_idx(j)]).collect();

    // discrete curl: H_t at half nodes, H3 at nodes
    let kmu = kk * mu;
    let h_t: Vec<[C64; 2]> = (0..m)
        .map(|j| {
            let d1 = (e_t[j + 1][0] - e_t[j][0]) / h;
            let d2 = (e_t[j + 1][1] - e_t[j][1]) / h;
            [(i * x2 * e3[j] - d2) / kmu, (d1 - i * x1 * e3[j]) / kmu]
        })
        .collect();
    let h3: Vec<C64> = e_t
        .iter()
        .map(|v| (i * x1 * v[1] - i * x2 * v[0]) / kmu)
        .collect();

    // ∇×H + kεE − J_m: tangential rows on interior nodes, normal rows on half nodes
    let ke = kk * eps;
    let mut res2 = 0.0;
    let mut scale2 = 0.0;
    let mut src2 = 0.0;
    for q in 1..m {
        let src = jm(q as f64 * h);
        let dh1 = (h_t[q][0] - h_t[q - 1][0]) / h;
        let dh2 = (h_t[q][1] - h_t[q - 1][1]) / h;
        let curl = [i * x2 * h3[q] - dh2, dh1 - i * x1 * h3[q]];
        for comp in 0..2 {
            let r = curl[comp] + ke * e_t[q][comp] - src[comp];
            res2 += r.norm_sqr();
            scale2 += (curl[comp].norm() + (ke * e_t[q][comp]).norm()).powi(2);
            src2 += src[comp].norm_sqr();
        }
    }
    for j in 0..m {
        let src = jm((j as f64 + 0.5) * h);
        let curl3 = i * x1 * h_t[j][1] - i * x2 * h_t[j][0];
        let r = curl3 + ke * e3[j] - src[2];
        res2 += r.norm_sqr();
        scale2 += (curl3.norm() + (ke * e3[j]).norm()).powi(2);
        src2 += src[2].norm_sqr();
    }
    let source_norm = (src2 * h).sqrt();
    let residual = if scale2 == 0.0 { 0.0 } else { (res2 / scale2).sqrt() };
    Ok(PecProfile { h, e_t, e3, h_t, h3, residual, source_norm })
}

/// Smooth compactly supported bump `exp(−1/(1−t²))` on `(a, b)`.
pub fn smooth_bump(x: f64, a: f64, b: f64) -> f64 {
    let t = (2.0 * x - a - b) / (b - a);
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use std::f64::consts::PI;

    fn bump_source(x: f64) -> [C64; 3] {
        let b = smooth_bump(x, 0.2, 1.0);
        [c(b, 0.0), c(0.0, 0.5 * b), c(0.3 * b, 0.0)]
    }

    #[test]
    fn zero_source_gives_zero_fields() {
        let k = Wavenumber::polar(4.0, PI / 4.0, 0.5);
        let p = pec_source_solve(&TangentialMode::new(1.0, 2.0), &k, 2.0, 1.0, |_| [c(0.0, 0.0); 3], (0.2, 1.0), None)
            .unwrap();
        assert_eq!(p.field_norm(), 0.0);
        assert_eq!(p.residual, 0.0);
    }

    #[test]
    fn wall_condition_and_residual() {
        let k = Wavenumber::polar(6.0, PI / 4.0, 0.5);
        let p = pec_source_solve(&TangentialMode::new(1.5, -0.5), &k, 2.0, 1.0, bump_source, (0.2, 1.0), None).unwrap();
        assert_eq!(p.e_t[0], [c(0.0, 0.0); 2]);
        assert!(p.residual < 1e-6, "residual {}", p.residual);
        assert!(p.field_norm() > 0.0);
    }

    #[test]
    fn estimate_scales_like_inverse_k() {
        let mut ratios = Vec::new();
        for kn in [2.0, 4.0, 8.0, 16.0, 32.0] {
            let k = Wavenumber::polar(kn, PI / 4.0, 0.5);
            let p = pec_source_solve(&TangentialMode::new(1.0, 0.0), &k, 1.0, 1.0, bump_source, (0.2, 1.0), None).unwrap();
            ratios.push(p.field_norm() * kn / p.source_norm);
        }
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 10.0, "{ratios:?}");
    }

    #[test]
    fn wedge_violation_rejected() {
        let k = Wavenumber::new(c(3.0, 0.0), 0.5);
        assert!(matches!(
            pec_source_solve(&TangentialMode::new(0.0, 0.0), &k, 1.0, 1.0, bump_source, (0.2, 1.0), None),
            Err(Error::BranchDegeneracy(_))
        ));
    }
}
