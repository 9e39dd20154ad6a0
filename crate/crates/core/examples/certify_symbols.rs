//! Contrast margins and uniform lower bounds of the two boundary symbols.
//!
//! Run with `cargo run --release --example certify_symbols`.

use te_maxwell::certifier::{certify, ScanGrid, DEFAULT_THRESHOLD};
use te_maxwell::media::{MediaQuad, WedgeSpec};

fn main() -> te_maxwell::Result<()> {
    let wedge = WedgeSpec::new(0.5, 1.0)?;
    let grid = ScanGrid::default();
    for (label, m) in [
        ("admissible (2,1,1,2)", MediaQuad::new(2.0, 1.0, 1.0, 2.0)),
        ("equal ratios (2,1,4,2)", MediaQuad::new(2.0, 1.0, 4.0, 2.0)),
    ] {
        let cert = certify(&m, &wedge, &grid, DEFAULT_THRESHOLD)?;
        println!(
            "{label:<24} certified: {:<5}  min |D_A|/(|ξ|²+|k|²) = {:.3e} at ξ = {:.3e}, min |D_B|/(…) = {:.3e}",
            cert.certified, cert.scan.min_ratio_a, cert.scan.argmin_a.xi, cert.scan.min_ratio_b
        );
    }
    let fine = grid.refined(2);
    let cert = certify(&MediaQuad::new(2.0, 1.0, 4.0, 2.0), &wedge, &fine, DEFAULT_THRESHOLD)?;
    println!("refined grid ({} points): min ratio A = {:.3e}", cert.scan.points, cert.scan.min_ratio_a);
    Ok(())
}
