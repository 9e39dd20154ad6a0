//! Transmission eigenvalues of the unit ball with constant isotropic media.
//!
//! Separation in vector spherical harmonics reduces each sector `(n, TE|TM)` to
//! a 2×2 matching system at `r = 1`. Its determinant is entire in `ω`; zeros are
//! counted with the argument principle, refined by Newton's method and checked
//! against the explicit mode fields.

pub mod bessel;
pub mod census;
pub mod contour;
pub mod determinant;

pub use census::{
    complement_scan, merge_records, smallest_clean_omega0, spectrum_census, wedge_emptiness, CellResult,
    CensusReport, WedgeScanReport, DEDUP_TOL,
};
pub use contour::{
    count_roots, default_radial_grid, eigenfield_residual, refine_root, refine_root_traced, EigenvalueRecord,
    Region,
};
pub use determinant::{build_determinant, mode_residual, DetValue, Polarization, SectorDeterminant};
