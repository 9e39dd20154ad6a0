//! Transmission eigenvalues of the unit ball: census, counting function and
//! the residual of each eigenfield.
//!
//! Run with `cargo run --release --example ball_census`.

use te_maxwell::ball::spectrum_census;
use te_maxwell::media::MediaQuad;

fn main() -> te_maxwell::Result<()> {
    let media = MediaQuad::new(2.0, 1.0, 1.0, 2.0);
    let census = spectrum_census(&media, 6, 12.0)?;
    println!(
        "{} distinct roots with |ω| ≤ 12, n ≤ 6; min gap {:.3e}, max residual {:.2e}",
        census.records.len(),
        census.min_gap(),
        census.max_residual()
    );
    for r in census.records.iter().filter(|r| r.omega.re > 0.0).take(12) {
        let sectors: Vec<String> = r.sectors.iter().map(|(n, p)| format!("{n}{}", p.label())).collect();
        println!("  ω = {:>24.12}  mult {}  sectors {}", r.omega, r.multiplicity, sectors.join(" "));
    }
    println!("counting function N(r):");
    for r in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        println!("  N({r:>4}) = {}", census.counting(r));
    }

    // complex roots appear once the refractive indices differ
    let other = MediaQuad::new(3.0, 1.0, 1.0, 2.0);
    let c = spectrum_census(&other, 2, 8.0)?;
    let off_axis = c.records.iter().filter(|r| r.omega.im.abs() > 1e-6).count();
    println!("(3,1,1,2): {} roots with |ω| ≤ 8, {off_axis} off the real axis", c.records.len());
    Ok(())
}
