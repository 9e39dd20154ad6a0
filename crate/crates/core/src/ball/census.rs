//! Root census over discs and root-free scans over wedge regions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::contour::{count_roots, refine_root, EigenvalueRecord, Region};
use super::determinant::{build_determinant, Polarization, SectorDeterminant};
use crate::error::{Error, Result};
use crate::media::{MediaQuad, WedgeSpec};
use crate::C64;

/// Distance below which two eigenvalues are merged.
pub const DEDUP_TOL: f64 = 1e-6;
/// Smallest box diagonal the census subdivides to.
const MIN_BOX: f64 = 1e-7;

/// Split fractions in `[0.4, 0.6]`, distinct for successive attempts.
fn jitter(i: usize) -> f64 {
    let g = 0.618_033_988_749_894_9 * (i as f64 + 1.0);
    0.4 + 0.2 * (g - g.floor())
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn region(&self) -> Region {
        Region::Rect { x0: self.x0, x1: self.x1, y0: self.y0, y1: self.y1 }
    }

    fn diag(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn contains(&self, z: C64, pad: f64) -> bool {
        z.re >= self.x0 - pad && z.re <= self.x1 + pad && z.im >= self.y0 - pad && z.im <= self.y1 + pad
    }

    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let mut ym = self.y0 + fy * (self.y1 - self.y0);
        // keep split lines off the real axis, where real roots accumulate
        if ym.abs() < 1e-3 * (self.y1 - self.y0) {
            ym += 0.03 * (self.y1 - self.y0);
        }
        [
            Rect { x1: xm, y1: ym, ..*self },
            Rect { x0: xm, y1: ym, ..*self },
            Rect { x1: xm, y0: ym, ..*self },
            Rect { x0: xm, y0: ym, ..*self },
        ]
    }
}

/// All roots of one sector determinant inside `rect`, by recursive subdivision.
fn roots_in_rect(det: &SectorDeterminant, rect: Rect, count: usize, out: &mut Vec<EigenvalueRecord>, salt: &mut usize) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 || rect.diag() < MIN_BOX {
        let pad = 1e-3 * rect.diag();
        if let Ok(rec) = refine_root(det, rect.region().center(), rect.diag()) {
            if rect.contains(rec.omega, pad) && (count == 1 || rec.multiplicity >= count) {
                let mut rec = rec;
                rec.multiplicity = rec.multiplicity.max(count);
                out.push(rec);
                return Ok(());
            }
        }
        if rect.diag() < MIN_BOX {
            return Err(Error::RefineFailure(format!(
                "{count} roots unresolved near {}",
                rect.region().center()
            )));
        }
    }
    for _ in 0..8 {
        *salt += 1;
        let children = rect.split(jitter(*salt), jitter(*salt + 7));
        let counts: Result<Vec<usize>> = children.iter().map(|c| count_roots(det, &c.region())).collect();
        match counts {
            Ok(cs) if cs.iter().sum::<usize>() == count => {
                for (child, c) in children.iter().zip(cs) {
                    roots_in_rect(det, *child, c, out, salt)?;
                }
                return Ok(());
            }
            _ => continue,
        }
    }
    Err(Error::RefineFailure(format!(
        "could not subdivide box around {} holding {count} roots",
        rect.region().center()
    )))
}

/// Roots of one sector with `|ω| ≤ r_max`.
pub fn sector_roots(det: &SectorDeterminant, r_max: f64) -> Result<Vec<EigenvalueRecord>> {
    let mut last_err = None;
    for attempt in 0..6 {
        let half = r_max * (1.05 + 0.013 * attempt as f64);
        let rect = Rect { x0: -half, x1: half * 1.0031, y0: -half * 0.9931, y1: half * 1.0069 };
        let count = match count_roots(det, &rect.region()) {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let mut out = Vec::with_capacity(count);
        let mut salt = 0;
        roots_in_rect(det, rect, count, &mut out, &mut salt)?;
        out.retain(|r| r.omega.norm() <= r_max);
        // a root sitting on a split line can be reported from both sides
        let mut unique: Vec<EigenvalueRecord> = Vec::with_capacity(out.len());
        for rec in out {
            if !unique.iter().any(|u| (u.omega - rec.omega).norm() < DEDUP_TOL) {
                unique.push(rec);
            }
        }
        return Ok(unique);
    }
    Err(last_err.unwrap_or_else(|| Error::RefineFailure("census box".into())))
}

/// Distinct eigenvalues up to `r_max` across all sectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n_max: usize,
    pub r_max: f64,
    /// Sorted by `(|ω|, arg ω, n)`.
    pub records: Vec<EigenvalueRecord>,
}

impl CensusReport {
    /// `N(r) = #{distinct eigenvalues with |ω| ≤ r}`.
    pub fn counting(&self, r: f64) -> usize {
        self.records.iter().filter(|rec| rec.omega.norm() <= r).count()
    }

    /// `(r, N(r))` at every recorded modulus.
    pub fn counting_function(&self) -> Vec<(f64, usize)> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, rec)| (rec.omega.norm(), i + 1))
            .collect()
    }

    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in self.records.iter().enumerate() {
            for b in &self.records[i + 1..] {
                gap = gap.min((a.omega - b.omega).norm());
            }
        }
        gap
    }

    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

fn sort_key(r: &EigenvalueRecord) -> (f64, f64, usize, Polarization) {
    (r.omega.norm(), r.omega.arg(), r.n, r.polarization)
}

/// Sorts and merges records closer than [`DEDUP_TOL`].
pub fn merge_records(mut all: Vec<EigenvalueRecord>) -> Vec<EigenvalueRecord> {
    all.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).expect("finite roots"));
    let mut merged: Vec<EigenvalueRecord> = Vec::with_capacity(all.len());
    for rec in all {
        if let Some(existing) = merged.iter_mut().find(|m| (m.omega - rec.omega).norm() < DEDUP_TOL) {
            existing.multiplicity += rec.multiplicity;
            existing.residual = existing.residual.max(rec.residual);
            existing.sectors.extend(rec.sectors);
        } else {
            merged.push(rec);
        }
    }
    merged
}

/// Every sector `(n, polarization)` with `1 ≤ n ≤ n_max`.
pub fn sectors(n_max: usize) -> Vec<(usize, Polarization)> {
    (1..=n_max).flat_map(|n| Polarization::BOTH.map(|p| (n, p))).collect()
}

/// All transmission eigenvalues with `|ω| ≤ r_max` in sectors `n ≤ n_max`.
pub fn spectrum_census(media: &MediaQuad, n_max: usize, r_max: f64) -> Result<CensusReport> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidInput("census radius must be positive".into()));
    }
    if media.is_identical() {
        return Err(Error::DegenerateMedia);
    }
    let per_sector: Result<Vec<Vec<EigenvalueRecord>>> = sectors(n_max)
        .into_par_iter()
        .map(|(n, p)| sector_roots(&build_determinant(n, p, media)?, r_max))
        .collect();
    let records = merge_records(per_sector?.into_iter().flatten().collect());
    Ok(CensusReport { n_max, r_max, records })
}

/// Outcome for one contour cell of a wedge scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub polarization: Polarization,
    pub region: Region,
    /// `None` when the contour could not be resolved even after subdivision.
    pub count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeScanReport {
    pub gamma: f64,
    pub omega0: f64,
    pub r_max: f64,
    pub cells_scanned: usize,
    pub total_roots: usize,
    pub unresolved: usize,
    /// Cells with a nonzero or unresolved count.
    pub flagged: Vec<CellResult>,
}

impl WedgeScanReport {
    pub fn clean(&self) -> bool {
        self.total_roots == 0 && self.unresolved == 0
    }
}

fn ring_radii(r0: f64, r1: f64) -> Vec<f64> {
    let rings = ((r1 / r0).ln() / 1.25f64.ln()).ceil().max(1.0) as usize;
    (0..=rings).map(|i| r0 * (r1 / r0).powf(i as f64 / rings as f64)).collect()
}

/// Count with subdivision on contour failures; `None` if still unresolved.
fn robust_count(det: &SectorDeterminant, region: Region, depth: usize) -> Option<usize> {
    match count_roots(det, &region) {
        Ok(c) => Some(c),
        Err(_) if depth < 3 => {
            let Region::AnnularSector { r0, r1, th0, th1 } = region else {
                return None;
            };
            let (rm, tm) = (r0 + jitter(depth) * (r1 - r0), th0 + jitter(depth + 3) * (th1 - th0));
            let parts = [
                Region::AnnularSector { r0, r1: rm, th0, th1: tm },
                Region::AnnularSector { r0: rm, r1, th0, th1: tm },
                Region::AnnularSector { r0, r1: rm, th0: tm, th1 },
                Region::AnnularSector { r0: rm, r1, th0: tm, th1 },
            ];
            parts.iter().map(|p| robust_count(det, *p, depth + 1)).sum()
        }
        Err(_) => None,
    }
}

/// Covers `{ω : |Im ω²| ≥ γ|ω|², ω₀ ≤ |ω| ≤ r_max}` by annular-sector cells and
/// counts the roots of every sector determinant in each.
pub fn wedge_emptiness(media: &MediaQuad, wedge: &WedgeSpec, n_max: usize, r_max: f64) -> Result<WedgeScanReport> {
    if wedge.omega0 < 1.0 {
        return Err(Error::InvalidInput("wedge scans need ω₀ ≥ 1".into()));
    }
    if media.is_identical() {
        return Err(Error::DegenerateMedia);
    }
    let mut report = WedgeScanReport {
        gamma: wedge.gamma,
        omega0: wedge.omega0,
        r_max,
        cells_scanned: 0,
        total_roots: 0,
        unresolved: 0,
        flagged: Vec::new(),
    };
    if r_max <= wedge.omega0 {
        return Ok(report);
    }
    let tb = wedge.band_half_angle();
    let radii = ring_radii(wedge.omega0, r_max);
    let mut cells = Vec::new();
    for q in 0..4 {
        let base = q as f64 * FRAC_PI_2;
        let (a0, a1) = (base + tb, base + FRAC_PI_2 - tb);
        for s in 0..3 {
            let th0 = a0 + (a1 - a0) * s as f64 / 3.0;
            let th1 = a0 + (a1 - a0) * (s + 1) as f64 / 3.0;
            for w in radii.windows(2) {
                cells.push(Region::AnnularSector { r0: w[0], r1: w[1], th0, th1 });
            }
        }
    }
    let work: Vec<(usize, Polarization, Region)> = sectors(n_max)
        .into_iter()
        .flat_map(|(n, p)| cells.iter().map(move |c| (n, p, *c)))
        .collect();
    let results: Result<Vec<CellResult>> = work
        .into_par_iter()
        .map(|(n, p, region)| {
            let det = build_determinant(n, p, media)?;
            Ok(CellResult { n, polarization: p, region, count: robust_count(&det, region, 0) })
        })
        .collect();
    for cell in results? {
        report.cells_scanned += 1;
        match cell.count {
            Some(0) => {}
            Some(c) => {
                report.total_roots += c;
                report.flagged.push(cell);
            }
            None => {
                report.unresolved += 1;
                report.flagged.push(cell);
            }
        }
    }
    Ok(report)
}

/// Smallest candidate `ω₀` whose scan up to `ratio·ω₀` is clean.
pub fn smallest_clean_omega0(
    media: &MediaQuad,
    gamma: f64,
    n_max: usize,
    candidates: &[f64],
    ratio: f64,
) -> Result<(Option<f64>, Vec<WedgeScanReport>)> {
    let mut scans = Vec::new();
    for &w0 in candidates {
        let wedge = WedgeSpec::new(gamma, w0)?;
        let scan = wedge_emptiness(media, &wedge, n_max, ratio * w0)?;
        let clean = scan.clean();
        scans.push(scan);
        if clean {
            return Ok((Some(w0), scans));
        }
    }
    Ok((None, scans))
}

/// Root counts per sector in the excluded band `|Im ω²| < γ|ω|²`, `Re ω > 0`,
/// `ω₀ ≤ |ω| ≤ r_max`. Band edges are nudged when a root sits on them.
pub fn complement_scan(
    media: &MediaQuad,
    wedge: &WedgeSpec,
    n_max: usize,
    r_max: f64,
) -> Result<Vec<((usize, Polarization), usize)>> {
    let tb = wedge.band_half_angle();
    sectors(n_max)
        .into_par_iter()
        .map(|(n, p)| {
            let det = build_determinant(n, p, media)?;
            let mut last = None;
            for attempt in 0..8 {
                let nudge = 1.0 + 1.3e-3 * attempt as f64;
                let region = Region::AnnularSector {
                    r0: wedge.omega0 * nudge,
                    r1: r_max / nudge,
                    th0: -tb,
                    th1: tb,
                };
                match count_roots(&det, &region) {
                    Ok(c) => return Ok(((n, p), c)),
                    Err(e) => last = Some(e),
                }
            }
            Err(last.expect("at least one attempt"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn media() -> MediaQuad {
        MediaQuad::new(2.0, 1.0, 1.0, 2.0)
    }

    #[test]
    fn small_census_is_real_and_symmetric() {
        let report = spectrum_census(&media(), 2, 6.0).unwrap();
        assert!(!report.records.is_empty());
        for rec in &report.records {
            assert!(rec.omega.im.abs() < 1e-8, "{}", rec.omega);
            assert!(rec.residual < 1e-8);
            assert!(report.records.iter().any(|o| (o.omega + rec.omega).norm() < 1e-6));
        }
        assert!(report.min_gap() > DEDUP_TOL);
        let nf = report.counting_function();
        assert!(nf.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        // coincident TE and TM roots merge with multiplicity 2
        assert!(report.records.iter().all(|r| r.multiplicity == 2 && r.sectors.len() == 2));
    }

    #[test]
    fn wedge_scan_is_clean_for_real_spectrum() {
        let w = WedgeSpec::new(0.5, 2.0).unwrap();
        let r = wedge_emptiness(&media(), &w, 3, 6.0).unwrap();
        assert!(r.clean(), "{r:?}");
        assert!(r.cells_scanned > 0);
        let vacuous = wedge_emptiness(&media(), &w, 3, 1.5).unwrap();
        assert_eq!(vacuous.cells_scanned, 0);
        assert!(vacuous.clean());
    }

    #[test]
    fn complement_band_has_roots() {
        let w = WedgeSpec::new(0.5, 2.0).unwrap();
        let counts = complement_scan(&media(), &w, 2, 6.0).unwrap();
        assert!(counts.iter().all(|(_, c)| *c > 0), "{counts:?}");
    }

    #[test]
    fn identical_media_refused() {
        let m = MediaQuad::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(spectrum_census(&m, 1, 3.0), Err(Error::DegenerateMedia));
    }

    #[test]
    fn merge_combines_close_roots() {
        let rec = |w: C64, p| EigenvalueRecord {
            omega: w,
            n: 1,
            polarization: p,
            residual: 1e-12,
            multiplicity: 1,
            sectors: vec![(1, p)],
        };
        let merged = merge_records(vec![
            rec(c(2.0, 0.0), Polarization::Te),
            rec(c(1.0, 0.0), Polarization::Te),
            rec(c(2.0 + 1e-9, 0.0), Polarization::Tm),
        ]);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[1].multiplicity, 2);
    }
}
