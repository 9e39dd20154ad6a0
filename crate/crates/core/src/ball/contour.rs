//! Argument-principle root counting and Newton refinement.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::determinant::{mode_residual, Polarization, SectorDeterminant};
use crate::error::{Error, Result};
use crate::{phase_step, safe_div, C64};

/// `|D|` below this multiple of the local term scale counts as a zero on the contour.
pub const CONTOUR_ZERO_TOL: f64 = 1e-10;
/// Largest accepted phase increment between consecutive contour samples.
const MAX_PHASE_STEP: f64 = PI / 6.0;
const MAX_DEPTH: usize = 48;

/// Closed region in the `ω` plane, traversed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// `{r e^{iθ} : r0 ≤ r ≤ r1, th0 ≤ θ ≤ th1}` with `th1 − th0 < 2π`.
    AnnularSector { r0: f64, r1: f64, th0: f64, th1: f64 },
}

#[derive(Debug, Clone, Copy)]
enum Path {
    Line(C64, C64),
    Arc { r: f64, t0: f64, t1: f64 },
}

impl Path {
    fn at(&self, t: f64) -> C64 {
        match *self {
            Path::Line(a, b) => a + (b - a) * t,
            Path::Arc { r, t0, t1 } => C64::from_polar(r, t0 + (t1 - t0) * t),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Path::Line(a, b) => (b - a).norm(),
            Path::Arc { r, t0, t1 } => r * (t1 - t0).abs(),
        }
    }
}

impl Region {
    fn paths(&self) -> Vec<Path> {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => {
                let c = [C64::new(x0, y0), C64::new(x1, y0), C64::new(x1, y1), C64::new(x0, y1)];
                (0..4).map(|i| Path::Line(c[i], c[(i + 1) % 4])).collect()
            }
            Region::AnnularSector { r0, r1, th0, th1 } => {
                let mut v = vec![
                    Path::Line(C64::from_polar(r0, th0), C64::from_polar(r1, th0)),
                    Path::Arc { r: r1, t0: th0, t1: th1 },
                    Path::Line(C64::from_polar(r1, th1), C64::from_polar(r0, th1)),
                ];
                if r0 > 0.0 {
                    v.push(Path::Arc { r: r0, t0: th1, t1: th0 });
                }
                v
            }
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => z.re >= x0 && z.re <= x1 && z.im >= y0 && z.im <= y1,
            Region::AnnularSector { r0, r1, th0, th1 } => {
                let r = z.norm();
                if r < r0 || r > r1 {
                    return false;
                }
                let mut t = z.arg();
                while t < th0 {
                    t += 2.0 * PI;
                }
                while t > th0 + 2.0 * PI {
                    t -= 2.0 * PI;
                }
                t <= th1
            }
        }
    }

    pub fn center(&self) -> C64 {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => C64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
            Region::AnnularSector { r0, r1, th0, th1 } => C64::from_polar(0.5 * (r0 + r1), 0.5 * (th0 + th1)),
        }
    }

    /// Radius of a disc around [`Self::center`] containing the region.
    pub fn radius(&self) -> f64 {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => 0.5 * ((x1 - x0).hypot(y1 - y0)),
            Region::AnnularSector { .. } => {
                let c = self.center();
                self.paths()
                    .iter()
                    .flat_map(|p| (0..=8).map(move |i| p.at(i as f64 / 8.0)))
                    .map(|z| (z - c).norm())
                    .fold(0.0, f64::max)
            }
        }
    }
}

fn checked_eval(det: &SectorDeterminant, z: C64) -> Result<C64> {
    let v = det.eval(z);
    if !(v.value.re.is_finite() && v.value.im.is_finite()) {
        return Err(Error::InvalidInput(format!("determinant overflow at {z}")));
    }
    if v.value.norm() <= CONTOUR_ZERO_TOL * v.scale {
        return Err(Error::ContourThroughZero { re: z.re, im: z.im });
    }
    Ok(v.value)
}

fn phase_segment(
    det: &SectorDeterminant,
    path: &Path,
    (ta, fa): (f64, C64),
    (tb, fb): (f64, C64),
    depth: usize,
) -> Result<f64> {
    let tm = 0.5 * (ta + tb);
    let fm = checked_eval(det, path.at(tm))?;
    let d1 = phase_step(fa, fm);
    let d2 = phase_step(fm, fb);
    if d1.abs() < MAX_PHASE_STEP && d2.abs() < MAX_PHASE_STEP {
        return Ok(d1 + d2);
    }
    if depth >= MAX_DEPTH {
        let z = path.at(tm);
        return Err(Error::ContourThroughZero { re: z.re, im: z.im });
    }
    Ok(phase_segment(det, path, (ta, fa), (tm, fm), depth + 1)?
        + phase_segment(det, path, (tm, fm), (tb, fb), depth + 1)?)
}

/// Sampling density along a path: a few points per local oscillation length.
fn initial_samples(det: &SectorDeterminant, path: &Path) -> usize {
    let m = &det.media;
    let speed = (m.eps * m.mu).sqrt().max((m.eps_hat * m.mu_hat).sqrt());
    ((path.length() * speed * 3.0).ceil() as usize).clamp(8, 100_000)
}

/// Total change of `arg D` along the boundary of `region`.
pub fn phase_change(det: &SectorDeterminant, region: &Region) -> Result<f64> {
    let mut total = 0.0;
    for path in region.paths() {
        let n = initial_samples(det, &path);
        let mut prev = (0.0, checked_eval(det, path.at(0.0))?);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let next = (t, checked_eval(det, path.at(t))?);
            total += phase_segment(det, &path, prev, next, 0)?;
            prev = next;
        }
    }
    Ok(total)
}

/// Number of zeros of `det` inside `region`, counted with multiplicity.
pub fn count_roots(det: &SectorDeterminant, region: &Region) -> Result<usize> {
    let turns = phase_change(det, region)? / (2.0 * PI);
    let count = turns.round();
    if (turns - count).abs() > 0.05 || count < 0.0 {
        let z = region.center();
        return Err(Error::ContourThroughZero { re: z.re, im: z.im });
    }
    Ok(count as usize)
}

/// A refined transmission eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub omega: C64,
    pub n: usize,
    pub polarization: Polarization,
    pub residual: f64,
    pub multiplicity: usize,
    /// Every `(n, polarization)` sector that produced this eigenvalue.
    pub sectors: Vec<(usize, Polarization)>,
}

/// Default radial grid used for [`eigenfield_residual`].
pub fn default_radial_grid() -> Vec<f64> {
    (1..=16).map(|i| i as f64 / 16.0).collect()
}

/// Relative residual of the explicit eigenfields of a record.
pub fn eigenfield_residual(rec: &EigenvalueRecord, det: &SectorDeterminant, radial_grid: &[f64]) -> f64 {
    mode_residual(det, rec.omega, det.null_vector(rec.omega), radial_grid)
}

/// Newton iterates produced by [`refine_root_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct RefineTrace {
    pub iterates: Vec<C64>,
}

/// Newton iteration with a central-difference derivative, confined to the
/// disc of radius `radius` around `seed`.
pub fn refine_root_traced(det: &SectorDeterminant, seed: C64, radius: f64) -> Result<(EigenvalueRecord, RefineTrace)> {
    let mut z = seed;
    let mut iterates = vec![z];
    for _ in 0..100 {
        let v = det.eval(z);
        if v.value.norm() <= 1e-13 * v.scale {
            return finish(det, z, iterates);
        }
        let h = 1e-6 * z.norm().max(1.0);
        let dz = (det.eval(z + h).value - det.eval(z - h).value) / (2.0 * h);
        if dz.norm() == 0.0 || !dz.re.is_finite() {
            break;
        }
        let mut step = safe_div(v.value, dz);
        if step.norm() > 0.5 * radius {
            step *= 0.5 * radius / step.norm();
        }
        z -= step;
        iterates.push(z);
        if (z - seed).norm() > radius {
            return Err(Error::RefineFailure(format!("iterate left the search disc around {seed}")));
        }
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            let v = det.eval(z);
            if v.value.norm() <= 1e-10 * v.scale {
                return finish(det, z, iterates);
            }
        }
    }
    Err(Error::RefineFailure(format!("no convergence from seed {seed} in 100 iterations")))
}

fn finish(det: &SectorDeterminant, z: C64, iterates: Vec<C64>) -> Result<(EigenvalueRecord, RefineTrace)> {
    let v = det.eval(z);
    if v.value.norm() > 1e-10 * v.scale {
        return Err(Error::RefineFailure(format!("|D| = {:.3e} too large at {z}", v.value.norm())));
    }
    let rho = 1e-5 * z.norm().max(1.0);
    let multiplicity = tiny_circle_count(det, z, rho).unwrap_or(1).max(1);
    let mut rec = EigenvalueRecord {
        omega: z,
        n: det.n,
        polarization: det.polarization,
        residual: 0.0,
        multiplicity,
        sectors: vec![(det.n, det.polarization)],
    };
    rec.residual = eigenfield_residual(&rec, det, &default_radial_grid());
    Ok((rec, RefineTrace { iterates }))
}

/// Winding number of `D` around a circle of radius `rho` centred at `z`.
fn tiny_circle_count(det: &SectorDeterminant, z: C64, rho: f64) -> Result<usize> {
    let n = 64;
    let at = |i: usize| z + C64::from_polar(rho, 2.0 * PI * i as f64 / n as f64);
    let mut total = 0.0;
    let mut prev = det.eval(at(0)).value;
    for i in 1..=n {
        let next = det.eval(at(i)).value;
        let d = phase_step(prev, next);
        if d.abs() > PI / 2.0 {
            return Err(Error::RefineFailure("tiny circle too coarse".into()));
        }
        total += d;
        prev = next;
    }
    Ok((total / (2.0 * PI)).round().max(0.0) as usize)
}

/// Refines a root from `seed`, searching at most `radius` away.
pub fn refine_root(det: &SectorDeterminant, seed: C64, radius: f64) -> Result<EigenvalueRecord> {
    refine_root_traced(det, seed, radius).map(|(r, _)| r)
}
