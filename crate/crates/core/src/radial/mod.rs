//! Radial reduction of the regularized transmission system on the unit ball.
//!
//! In the sector `(n, TE)` the electric field is `E = w(r)/r · X_nm` and the
//! regularized system reduces to
//!
//! ```text
//! −(z⁻¹μ⁻¹ w')' + z⁻¹ n(n+1) μ⁻¹ w / r² + z k² ε w = f,   z = 1 − i a δ,
//! ```
//!
//! with the same equation in the hatted media for `ŵ`; TM swaps `ε` and `μ`.
//! The transmission conditions are `w(1) = ŵ(1)` and `μ⁻¹w'(1) = μ̂⁻¹ŵ'(1)`.
//!
//! Both profiles are discretized with P1 elements on `[r_min, 1]`, Dirichlet
//! at `r_min`. They share the node `r = 1`, and so do the test functions; the
//! hatted rows enter with a minus sign, which makes the flux condition natural.
//! With the unknowns ordered `w_1 … w_N, ŵ_{N−1} … ŵ_1` the matrix is
//! tridiagonal.

mod operator;

pub use operator::{
    empirical_threshold, operator_norm_sweep, operator_t_matrix, physical_spectrum, spectrum_t,
    NormSweep, OperatorEigenvalue, PhysicalEigenvalue, SolutionOperator, SpectrumReport, ThresholdReport,
    STABILITY_TOL,
};

use serde::{Deserialize, Serialize};

use crate::ball::Polarization;
use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::media::{Profile, RadialMedia, Wavenumber};
use crate::{c, C64};

/// Inner end of the radial grid.
pub const R_MIN: f64 = 1e-3;

/// Smallest LU pivot, relative to the largest entry, accepted as a
/// nonsingular (coercive) assembly.
pub const COERCIVITY_FLOOR: f64 = 1e-13;

/// Consecutive-difference ratios accepted as first-order convergence in `δ`.
pub const RATE_WINDOW: (f64, f64) = (5.0, 20.0);

const GAUSS8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Calls `f(r, weight)` at the 8-point Gauss–Legendre nodes of `[a, b]`.
fn gauss(a: f64, b: f64, mut f: impl FnMut(f64, f64)) {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    for (x, w) in GAUSS8 {
        f(m - h * x, h * w);
        f(m + h * x, h * w);
    }
}

/// Uniform nodes `r_0 = r_min < … < r_N = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn uniform(cells: usize) -> Result<Self> {
        if cells < 4 {
            return Err(Error::InvalidInput(format!("radial grid needs at least 4 cells, got {cells}")));
        }
        let h = (1.0 - R_MIN) / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|j| R_MIN + j as f64 * h).collect();
        nodes[cells] = 1.0;
        Ok(Self { nodes })
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// The grid with every cell halved.
    pub fn refined(&self) -> Self {
        Self::uniform(2 * self.cells()).expect("refining a valid grid")
    }
}

/// Inclusion (`ε, μ`) or background (`ε̂, μ̂`) side of the transmission pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plain,
    Hat,
}

/// Discrete analog of the constrained field space, restricted to one sector.
///
/// A member is a vector of nodal values `w_1 … w_N, ŵ_{N−1} … ŵ_1` with the
/// boundary value stored once. Sector fields `w(r)/r · X_nm` are
/// divergence-free for any profile, and the shared node makes the tangential
/// traces agree, so every coefficient vector satisfies the constraints exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscreteHSpace {
    cells: usize,
}

impl DiscreteHSpace {
    pub fn new(cells: usize) -> Self {
        Self { cells }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dim(&self) -> usize {
        2 * self.cells - 1
    }

    /// Position of node `j ∈ 1..=N` of `side`.
    pub fn index(&self, side: Side, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.cells);
        match side {
            Side::Plain => j - 1,
            Side::Hat if j == self.cells => j - 1,
            Side::Hat => 2 * self.cells - 1 - j,
        }
    }

    /// Nodal values on `r_0 … r_N` for both sides, with the Dirichlet zero at `r_0`.
    pub fn split(&self, v: &[C64]) -> (Vec<C64>, Vec<C64>) {
        assert_eq!(v.len(), self.dim());
        let mut w = vec![c(0.0, 0.0); self.cells + 1];
        let mut w_hat = w.clone();
        for j in 1..=self.cells {
            w[j] = v[self.index(Side::Plain, j)];
            w_hat[j] = v[self.index(Side::Hat, j)];
        }
        (w, w_hat)
    }

    /// Inverse of [`Self::split`]; the two boundary values must agree.
    pub fn join(&self, w: &[C64], w_hat: &[C64]) -> Result<Vec<C64>> {
        let n = self.cells;
        if w.len() != n + 1 || w_hat.len() != n + 1 {
            return Err(Error::InvalidInput(format!("expected {} nodal values per side", n + 1)));
        }
        let gap = (w[n] - w_hat[n]).norm();
        if gap > 1e-14 * w[n].norm().max(w_hat[n].norm()).max(1.0) {
            return Err(Error::InvalidInput(format!("boundary values differ by {gap:.3e}")));
        }
        let mut v = vec![c(0.0, 0.0); self.dim()];
        for j in 1..=n {
            v[self.index(Side::Hat, j)] = w_hat[j];
            v[self.index(Side::Plain, j)] = w[j];
        }
        Ok(v)
    }

    /// Nodal interpolant of a profile pair; the boundary value is taken from `f`.
    pub fn interpolate(&self, grid: &RadialGrid, f: impl Fn(f64) -> C64, f_hat: impl Fn(f64) -> C64) -> Vec<C64> {
        let r = grid.nodes();
        let w: Vec<C64> = r.iter().map(|&x| f(x)).collect();
        let mut w_hat: Vec<C64> = r.iter().map(|&x| f_hat(x)).collect();
        w_hat[self.cells] = w[self.cells];
        self.join(&w, &w_hat).expect("boundary values forced equal")
    }

    /// Mismatch of the tangential traces; zero by construction.
    pub fn constraint_residual(&self, v: &[C64]) -> f64 {
        let (w, w_hat) = self.split(v);
        (w[self.cells] - w_hat[self.cells]).norm()
    }
}

/// Stiffness and mass weights of the sector equation on one side.
fn weights(media: &RadialMedia, pol: Polarization, side: Side, r: f64) -> (f64, f64) {
    let (eps, mu) = match side {
        Side::Plain => (media.eval(Profile::Eps, r), media.eval(Profile::Mu, r)),
        Side::Hat => (media.eval(Profile::EpsHat, r), media.eval(Profile::MuHat, r)),
    };
    match pol {
        Polarization::Te => (1.0 / mu, eps),
        Polarization::Tm => (1.0 / eps, mu),
    }
}

/// Assembled sector matrices on a grid.
///
/// `stiffness` and `mass` carry the minus sign on hatted rows; the Gram
/// matrices are the unsigned versions and define the norms
/// `‖w‖² = ∫ ε|w|²` (mass) and `∫ μ⁻¹(|w'|² + n(n+1)|w|²/r²)` (stiffness), TE case.
#[derive(Debug, Clone)]
pub struct SectorMatrices {
    pub space: DiscreteHSpace,
    pub stiffness: BandMatrix,
    pub mass: BandMatrix,
    pub gram_mass: BandMatrix,
    pub gram_stiffness: BandMatrix,
}

pub fn sector_matrices(n: usize, pol: Polarization, media: &RadialMedia, grid: &RadialGrid) -> SectorMatrices {
    let space = DiscreteHSpace::new(grid.cells());
    let dim = space.dim();
    let l = (n * (n + 1)) as f64;
    let mut out = SectorMatrices {
        space,
        stiffness: BandMatrix::zeros(dim, 1, 1),
        mass: BandMatrix::zeros(dim, 1, 1),
        gram_mass: BandMatrix::zeros(dim, 1, 1),
        gram_stiffness: BandMatrix::zeros(dim, 1, 1),
    };
    let r = grid.nodes();
    for (side, sign) in [(Side::Plain, 1.0), (Side::Hat, -1.0)] {
        for e in 0..grid.cells() {
            let (a, b) = (r[e], r[e + 1]);
            let h = b - a;
            let (sw, mw) = weights(media, pol, side, 0.5 * (a + b));
            let mut q = [[0.0; 2]; 2];
            gauss(a, b, |x, wt| {
                let phi = [(b - x) / h, (x - a) / h];
                let s = wt / (x * x);
                for i in 0..2 {
                    for j in 0..2 {
                        q[i][j] += phi[i] * phi[j] * s;
                    }
                }
            });
            let grad = [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]];
            let mass = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
            for i in 0..2 {
                if e + i == 0 {
                    continue;
                }
                let gi = space.index(side, e + i);
                for j in 0..2 {
                    if e + j == 0 {
                        continue;
                    }
                    let gj = space.index(side, e + j);
                    let kij = sw * (grad[i][j] + l * q[i][j]);
                    let mij = mw * mass[i][j];
                    out.stiffness.add(gi, gj, c(sign * kij, 0.0));
                    out.mass.add(gi, gj, c(sign * mij, 0.0));
                    out.gram_stiffness.add(gi, gj, c(kij, 0.0));
                    out.gram_mass.add(gi, gj, c(mij, 0.0));
                }
            }
        }
    }
    out
}

/// Signed load vector `∫ f φ_j − ∫ f̂ φ̂_j` of two source profiles.
pub fn load_vector(grid: &RadialGrid, f: impl Fn(f64) -> C64, f_hat: impl Fn(f64) -> C64) -> Vec<C64> {
    let space = DiscreteHSpace::new(grid.cells());
    let mut b = vec![c(0.0, 0.0); space.dim()];
    let r = grid.nodes();
    for (side, sign) in [(Side::Plain, 1.0), (Side::Hat, -1.0)] {
        for e in 0..grid.cells() {
            let (a, bb) = (r[e], r[e + 1]);
            let h = bb - a;
            let mut local = [c(0.0, 0.0); 2];
            gauss(a, bb, |x, wt| {
                let v = match side {
                    Side::Plain => f(x),
                    Side::Hat => f_hat(x),
                } * wt;
                local[0] += v * ((bb - x) / h);
                local[1] += v * ((x - a) / h);
            });
            for (i, val) in local.iter().enumerate() {
                if e + i > 0 {
                    b[space.index(side, e + i)] += val * sign;
                }
            }
        }
    }
    b
}

/// Refuses media the reduction cannot handle.
pub(crate) fn check_media(media: &RadialMedia) -> Result<()> {
    if media.boundary_quad().is_identical() {
        return Err(Error::DegenerateMedia);
    }
    media.validate()
}

/// One sector of the regularized transmission system.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSystem {
    pub n: usize,
    pub polarization: Polarization,
    pub media: RadialMedia,
    pub k: Wavenumber,
    pub delta: f64,
    pub grid: RadialGrid,
}

impl SectorSystem {
    pub fn new(
        n: usize,
        polarization: Polarization,
        media: RadialMedia,
        k: Wavenumber,
        delta: f64,
        grid: RadialGrid,
    ) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("sector degree n must be at least 1".into()));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::InvalidInput(format!("δ = {delta} must be finite and non-negative")));
        }
        check_media(&media)?;
        Ok(Self { n, polarization, media, k, delta, grid })
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        Self { delta, ..self.clone() }
    }

    pub fn space(&self) -> DiscreteHSpace {
        DiscreteHSpace::new(self.grid.cells())
    }

    /// `a = sign Im(k²)`.
    pub fn absorption_sign(&self) -> f64 {
        if (self.k.k * self.k.k).im >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Right-hand side of a sector solve.
#[derive(Debug, Clone, PartialEq)]
pub enum SectorSource {
    /// A member `s` of the discrete field space; the load is `k M s`, so the
    /// solve realizes the source mapping with the material weight of `M`.
    Field(Vec<C64>),
    /// An assembled load vector, e.g. from [`load_vector`].
    Load(Vec<C64>),
}

/// Tridiagonal system of one sector.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: BandMatrix,
    pub rhs: Vec<C64>,
}

pub fn assemble_sector(sys: &SectorSystem, source: &SectorSource) -> Result<LinearSystem> {
    if sys.delta == 0.0 {
        sys.k.require_admissible()?;
    }
    let mats = sector_matrices(sys.n, sys.polarization, &sys.media, &sys.grid);
    let dim = mats.space.dim();
    let k = sys.k.k;
    let z = c(1.0, -sys.absorption_sign() * sys.delta);
    let matrix = mats.stiffness.scaled(z.inv()).plus(&mats.mass.scaled(z * k * k));
    let rhs = match source {
        SectorSource::Field(s) | SectorSource::Load(s) if s.len() != dim => {
            return Err(Error::InvalidInput(format!("source has length {}, expected {dim}", s.len())));
        }
        SectorSource::Field(s) => mats.mass.matvec(s).into_iter().map(|v| v * k).collect(),
        SectorSource::Load(b) => b.clone(),
    };
    Ok(LinearSystem { matrix, rhs })
}

/// Nodal solution of a sector solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSolution {
    pub values: Vec<C64>,
    /// Smallest LU pivot relative to the largest matrix entry.
    pub pivot_ratio: f64,
}

pub fn solve_sector(sys: &SectorSystem, source: &SectorSource) -> Result<SectorSolution> {
    let system = assemble_sector(sys, source)?;
    let lu = system.matrix.factor()?;
    if lu.pivot_ratio < COERCIVITY_FLOOR {
        return Err(Error::Discretization(format!(
            "assembly at δ = {} is numerically singular (pivot ratio {:.3e}); refine the grid",
            sys.delta, lu.pivot_ratio
        )));
    }
    Ok(SectorSolution { values: lu.solve(&system.rhs), pivot_ratio: lu.pivot_ratio })
}

/// `sqrt(vᴴ G v)` for a Hermitian positive Gram matrix.
pub(crate) fn gram_norm(gram: &BandMatrix, v: &[C64]) -> f64 {
    let gv = gram.matvec(v);
    v.iter().zip(&gv).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
}

/// Outcome of a limiting-absorption sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub deltas: Vec<f64>,
    /// Mass-norm of each iterate.
    pub norms: Vec<f64>,
    /// `‖u^{δ_i} − u^{δ_{i+1}}‖`.
    pub differences: Vec<f64>,
    /// `differences[i] / differences[i+1]`; NaN when both vanish.
    pub ratios: Vec<f64>,
    /// First-order Richardson extrapolation to `δ = 0` from the last two iterates.
    pub extrapolated: Vec<C64>,
    /// Largest `δ` below which the differences decrease monotonically.
    pub delta_star: Option<f64>,
    /// Every ratio lies in [`RATE_WINDOW`].
    pub first_order: bool,
}

pub fn limiting_absorption_sweep(sys: &SectorSystem, source: &SectorSource, deltas: &[f64]) -> Result<SweepReport> {
    if deltas.len() < 2 {
        return Err(Error::InvalidInput("a sweep needs at least two values of δ".into()));
    }
    if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("δ values must be positive and strictly decreasing".into()));
    }
    let gram = sector_matrices(sys.n, sys.polarization, &sys.media, &sys.grid).gram_mass;
    let iterates = deltas
        .iter()
        .map(|&d| solve_sector(&sys.with_delta(d), source).map(|s| s.values))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = iterates.iter().map(|u| gram_norm(&gram, u)).collect();
    let differences: Vec<f64> = iterates
        .windows(2)
        .map(|p| {
            let d: Vec<C64> = p[0].iter().zip(&p[1]).map(|(a, b)| a - b).collect();
            gram_norm(&gram, &d)
        })
        .collect();
    let ratios: Vec<f64> = differences
        .windows(2)
        .map(|p| if p[1] > 0.0 { p[0] / p[1] } else if p[0] > 0.0 { f64::INFINITY } else { f64::NAN })
        .collect();

    let m = deltas.len() - 1;
    let w = deltas[m] / (deltas[m - 1] - deltas[m]);
    let extrapolated = iterates[m].iter().zip(&iterates[m - 1]).map(|(a, b)| a + (a - b) * w).collect();

    let mut start = differences.len() - 1;
    while start > 0 && differences[start - 1] > differences[start] {
        start -= 1;
    }
    let delta_star = (differences[differences.len() - 1] > 0.0).then(|| deltas[start]);
    let first_order = !ratios.is_empty() && ratios.iter().all(|r| *r >= RATE_WINDOW.0 && *r <= RATE_WINDOW.1);

    let (first, last) = (differences[0], differences[differences.len() - 1]);
    if first > 0.0 && last >= first {
        return Err(Error::SweepDivergence(format!(
            "differences grew from {first:.3e} to {last:.3e} at k = {}",
            sys.k.k
        )));
    }
    Ok(SweepReport { deltas: deltas.to_vec(), norms, differences, ratios, extrapolated, delta_star, first_order })
}

/// Smooth source `r^{n+1}` on both sides, used by sweeps and threshold scans.
pub fn default_source(space: &DiscreteHSpace, grid: &RadialGrid, n: usize) -> Vec<C64> {
    let p = (n + 1) as i32;
    space.interpolate(grid, |r| c(r.powi(p), 0.0), |r| c(r.powi(p), 0.0))
}
