//! Wavenumbers, wedge membership and contrast admissibility.
//!
//! Run with `cargo run --example media_and_wedges`.

use std::f64::consts::PI;

use te_maxwell::media::{check_admissible, wedge_contains, MediaQuad, Wavenumber, WedgeSpec};
use te_maxwell::Complex64;

fn main() -> te_maxwell::Result<()> {
    let gamma = 0.5;
    let wedge = WedgeSpec::new(gamma, 1.0)?;
    println!("γ = {gamma}: band around the real ω axis has half-angle {:.4} rad", wedge.band_half_angle());

    for deg in [0.0, 10.0, 20.0, 45.0, 80.0] {
        let omega = Complex64::from_polar(5.0, -deg * PI / 180.0);
        let k = Wavenumber::from_omega(omega, gamma);
        println!(
            "ω = 5·e^(-i{deg:>4}°)  k = {:>22.6}  in wedge: {:<5}  (ω-form: {})",
            k.k,
            k.in_wedge(),
            wedge_contains(&wedge, omega)
        );
    }

    for (label, m) in [
        ("contrast in both ε and μ", MediaQuad::new(2.0, 1.0, 1.0, 2.0)),
        ("equal ratios ε/μ = ε̂/μ̂", MediaQuad::new(2.0, 1.0, 4.0, 2.0)),
        ("identical", MediaQuad::new(1.5, 1.5, 1.5, 1.5)),
    ] {
        let rep = check_admissible(&m)?;
        println!("{label:<26} margins {:?} admissible: {}", rep.margins.map(|x| (x * 1e4).round() / 1e4), rep.ok);
    }
    Ok(())
}
