//! Search for an eigenvalue-free wedge `ω₀ ≤ |ω| ≤ 3ω₀`, `|Im ω²| ≥ γ|ω|²`, and
//! the root counts in the complementary band.
//!
//! Run with `cargo run --release --example wedge_scan`.

use te_maxwell::ball::{complement_scan, smallest_clean_omega0};
use te_maxwell::media::{MediaQuad, WedgeSpec};

fn main() -> te_maxwell::Result<()> {
    let media = MediaQuad::new(3.0, 1.0, 1.0, 2.0);
    let gamma = 0.5;
    let (omega0, scans) = smallest_clean_omega0(&media, gamma, 6, &[1.0, 2.0, 4.0], 3.0)?;
    for s in &scans {
        println!(
            "ω₀ = {:>4}: {} cells, {} roots, {} unresolved",
            s.omega0, s.cells_scanned, s.total_roots, s.unresolved
        );
    }
    let Some(w0) = omega0 else {
        println!("no clean ω₀ among the candidates");
        return Ok(());
    };
    println!("clean from ω₀ = {w0}");
    let wedge = WedgeSpec::new(gamma, w0)?;
    let band = complement_scan(&media, &wedge, 3, 3.0 * w0)?;
    for ((n, p), count) in band {
        println!("  band roots in sector {n}{}: {count}", p.label());
    }
    Ok(())
}
