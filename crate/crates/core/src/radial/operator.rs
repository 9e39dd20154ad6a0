//! The discrete solution operator `T s = k (K + k²M)⁻¹ M s` of one sector and
//! its spectrum.
//!
//! An eigenpair `T w = t w` is a nontrivial solution of `K w + k'² M w = 0`
//! with `k'² = k² − k/t`, i.e. a transmission eigenvalue `ω² = k/t − k²`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    check_media, default_source, gram_norm, limiting_absorption_sweep, sector_matrices, RadialGrid, SectorMatrices,
    SectorSource, SectorSystem, COERCIVITY_FLOOR,
};
use crate::ball::Polarization;
use crate::banded::{BandLu, BandMatrix};
use crate::error::{Error, Result};
use crate::media::{RadialMedia, Wavenumber};
use crate::{c, C64};

/// Relative movement under grid refinement below which an eigenvalue counts as physical.
pub const STABILITY_TOL: f64 = 1e-3;

/// Matrix-free solution operator of one sector at a fixed admissible `k`.
#[derive(Debug, Clone)]
pub struct SolutionOperator {
    pub n: usize,
    pub polarization: Polarization,
    pub k: C64,
    pub mats: SectorMatrices,
    forward: BandLu,
    adjoint: BandLu,
}

impl SolutionOperator {
    pub fn new(media: &RadialMedia, k: Wavenumber, n: usize, polarization: Polarization, grid: &RadialGrid) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("sector degree n must be at least 1".into()));
        }
        check_media(media)?;
        k.require_admissible()?;
        let mats = sector_matrices(n, polarization, media, grid);
        let k2 = k.k * k.k;
        let forward = mats.stiffness.plus(&mats.mass.scaled(k2)).factor()?;
        if forward.pivot_ratio < COERCIVITY_FLOOR {
            return Err(Error::Discretization(format!(
                "sector operator at k = {} is numerically singular; refine the grid",
                k.k
            )));
        }
        // K and M are real symmetric, so (K + k²M)ᴴ = K + conj(k²) M
        let adjoint = mats.stiffness.plus(&mats.mass.scaled(k2.conj())).factor()?;
        Ok(Self { n, polarization, k: k.k, mats, forward, adjoint })
    }

    pub fn dim(&self) -> usize {
        self.mats.space.dim()
    }

    pub fn apply(&self, s: &[C64]) -> Vec<C64> {
        let mut x: Vec<C64> = self.mats.mass.matvec(s).into_iter().map(|v| v * self.k).collect();
        self.forward.solve_in_place(&mut x);
        x
    }

    /// Euclidean adjoint `Tᴴ y = conj(k) M (K + k²M)⁻ᴴ y`.
    pub fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let x = self.adjoint.solve(y);
        self.mats.mass.matvec(&x).into_iter().map(|v| v * self.k.conj()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut t = DMatrix::zeros(n, n);
        let mut e = vec![c(0.0, 0.0); n];
        for j in 0..n {
            e[j] = c(1.0, 0.0);
            let col = self.apply(&e);
            e[j] = c(0.0, 0.0);
            for (i, v) in col.into_iter().enumerate() {
                t[(i, j)] = v;
            }
        }
        t
    }

    /// Output Gram matrix `G_mass + |k|⁻² G_stiffness`, the discrete
    /// `‖E‖² + ‖H‖²` with `H = curl E/(kμ)`.
    fn gram_out(&self) -> BandMatrix {
        self.mats.gram_mass.plus(&self.mats.gram_stiffness.scaled(c(self.k.norm_sqr().recip(), 0.0)))
    }

    /// Largest singular value of `T` from mass-norm sources to field norms,
    /// by power iteration on `G_in⁻¹ Tᴴ G_out T`.
    pub fn norm(&self) -> Result<f64> {
        let g_in = self.mats.gram_mass.factor()?;
        let g_out = self.gram_out();
        let n = self.dim();
        let mut v: Vec<C64> = (0..n).map(|i| c(1.0 + (i as f64 * 0.37).sin() * 0.5, 0.0)).collect();
        let mut prev = 0.0;
        for _ in 0..20_000 {
            let nv = gram_norm(&self.mats.gram_mass, &v);
            v.iter_mut().for_each(|x| *x /= nv);
            let ty = self.apply(&v);
            let x = self.apply_adjoint(&g_out.matvec(&ty));
            let rq: f64 = v.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            v = g_in.solve(&x);
            if (rq - prev).abs() <= 1e-12 * rq {
                return Ok(rq.sqrt());
            }
            prev = rq;
        }
        Err(Error::Discretization("power iteration for ‖T‖ did not settle".into()))
    }

    /// All singular values of `T` between the same norms, descending. Dense;
    /// meant for modest grids.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let l_in = cholesky(&self.mats.gram_mass)?;
        let l_out = cholesky(&self.gram_out())?;
        let n = self.dim();
        let inv_in = l_in
            .adjoint()
            .solve_upper_triangular(&DMatrix::identity(n, n))
            .ok_or_else(|| Error::Discretization("singular mass matrix".into()))?;
        let b = l_out.adjoint() * self.to_dense() * inv_in;
        let mut s: Vec<f64> = b.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }
}

fn cholesky(g: &BandMatrix) -> Result<DMatrix<C64>> {
    g.to_dense()
        .cholesky()
        .map(|ch| ch.l())
        .ok_or_else(|| Error::Discretization("Gram matrix is not positive definite".into()))
}

/// Dense matrix of `T` on the discrete field space.
pub fn operator_t_matrix(
    media: &RadialMedia,
    k: Wavenumber,
    n: usize,
    polarization: Polarization,
    grid: &RadialGrid,
) -> Result<DMatrix<C64>> {
    Ok(SolutionOperator::new(media, k, n, polarization, grid)?.to_dense())
}

/// Eigenvalue `t` of `T` and the transmission eigenvalue it encodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorEigenvalue {
    pub t: C64,
    /// Principal root of `ω² = k/t − k²`, so `Re ω ≥ 0`.
    pub omega: C64,
}

/// Eigenvalues of `T` assembled at `k`, sorted by `|ω|`. Eigenvalues at
/// roundoff level relative to the largest carry no information and are dropped.
pub fn spectrum_t(matrix: &DMatrix<C64>, k: C64) -> Result<Vec<OperatorEigenvalue>> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidInput("T must be square".into()));
    }
    let ts = matrix
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Discretization("Schur form did not triangularize".into()))?;
    let top = ts.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let mut out: Vec<OperatorEigenvalue> = ts
        .iter()
        .filter(|t| t.norm() > 1e-12 * top)
        .map(|&t| OperatorEigenvalue { t, omega: (k / t - k * k).sqrt() })
        .collect();
    out.sort_by(|a, b| a.omega.norm().total_cmp(&b.omega.norm()).then(a.omega.im.total_cmp(&b.omega.im)));
    Ok(out)
}

/// An eigenvalue that survived grid refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalEigenvalue {
    /// Value on the refined grid.
    pub omega: C64,
    /// Matching value on the coarse grid.
    pub coarse: C64,
    pub movement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub polarization: Polarization,
    pub cells: usize,
    pub k: C64,
    pub physical: Vec<PhysicalEigenvalue>,
    /// Coarse-grid eigenvalues that moved by more than [`STABILITY_TOL`].
    pub spurious: usize,
}

/// Spectrum of `T` on `cells` and `2·cells`, keeping eigenvalues whose relative
/// movement is below [`STABILITY_TOL`]. Only `|ω| ≤ omega_max` is reported.
pub fn physical_spectrum(
    media: &RadialMedia,
    k: Wavenumber,
    n: usize,
    polarization: Polarization,
    cells: usize,
    omega_max: f64,
) -> Result<SpectrumReport> {
    let coarse_grid = RadialGrid::uniform(cells)?;
    let fine_grid = coarse_grid.refined();
    let coarse = spectrum_t(&operator_t_matrix(media, k, n, polarization, &coarse_grid)?, k.k)?;
    let fine = spectrum_t(&operator_t_matrix(media, k, n, polarization, &fine_grid)?, k.k)?;
    let mut used = vec![false; fine.len()];
    let mut physical = Vec::new();
    let mut spurious = 0;
    for e in coarse.iter().filter(|e| e.omega.norm() <= omega_max) {
        // ±ω encode the same ω²; compare against the nearer sign
        let best = fine
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, f)| (i, (f.omega - e.omega).norm().min((f.omega + e.omega).norm()) / f.omega.norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, m)) if m < STABILITY_TOL => {
                used[i] = true;
                physical.push(PhysicalEigenvalue { omega: fine[i].omega, coarse: e.omega, movement: m });
            }
            _ => spurious += 1,
        }
    }
    physical.sort_by(|a, b| a.omega.norm().total_cmp(&b.omega.norm()));
    Ok(SpectrumReport { n, polarization, cells, k: k.k, physical, spurious })
}

/// Result of scanning `|k|` for sweep convergence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub theta: f64,
    pub moduli: Vec<f64>,
    pub converged: Vec<bool>,
    pub ratios: Vec<Vec<f64>>,
    /// Smallest scanned `|k|` from which every larger one converges at first order.
    pub threshold: Option<f64>,
}

/// Runs the limiting-absorption sweep at `k = |k| e^{iθ}` for each modulus.
#[allow(clippy::too_many_arguments)]
pub fn empirical_threshold(
    media: &RadialMedia,
    n: usize,
    polarization: Polarization,
    grid: &RadialGrid,
    theta: f64,
    gamma: f64,
    moduli: &[f64],
    deltas: &[f64],
) -> Result<ThresholdReport> {
    check_media(media)?;
    let mut converged = Vec::with_capacity(moduli.len());
    let mut ratios = Vec::with_capacity(moduli.len());
    for &m in moduli {
        let k = Wavenumber::polar(m, theta, gamma);
        let sys = SectorSystem::new(n, polarization, media.clone(), k, 0.0, grid.clone())?;
        let src = SectorSource::Field(default_source(&sys.space(), grid, n));
        match limiting_absorption_sweep(&sys, &src, deltas) {
            Ok(rep) => {
                converged.push(rep.first_order);
                ratios.push(rep.ratios);
            }
            Err(Error::SweepDivergence(_)) | Err(Error::Discretization(_)) => {
                converged.push(false);
                ratios.push(Vec::new());
            }
            Err(e) => return Err(e),
        }
    }
    let mut threshold = None;
    for i in (0..moduli.len()).rev() {
        if !converged[i] {
            break;
        }
        threshold = Some(moduli[i]);
    }
    Ok(ThresholdReport { theta, moduli: moduli.to_vec(), converged, ratios, threshold })
}

/// `‖T‖` and `|k|·‖T‖` over a set of moduli at fixed argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSweep {
    pub theta: f64,
    pub moduli: Vec<f64>,
    pub sigma: Vec<f64>,
    pub scaled: Vec<f64>,
    /// `max/min` of `scaled`.
    pub spread: f64,
}

pub fn operator_norm_sweep(
    media: &RadialMedia,
    n: usize,
    polarization: Polarization,
    grid: &RadialGrid,
    theta: f64,
    gamma: f64,
    moduli: &[f64],
) -> Result<NormSweep> {
    if moduli.is_empty() {
        return Err(Error::InvalidInput("no moduli to sweep".into()));
    }
    let sigma = moduli
        .iter()
        .map(|&m| SolutionOperator::new(media, Wavenumber::polar(m, theta, gamma), n, polarization, grid)?.norm())
        .collect::<Result<Vec<f64>>>()?;
    let scaled: Vec<f64> = sigma.iter().zip(moduli).map(|(s, m)| s * m).collect();
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(NormSweep { theta, moduli: moduli.to_vec(), sigma, scaled, spread: hi / lo })
}
