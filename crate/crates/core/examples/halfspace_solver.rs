//! Exact half-space Cauchy solve for one Fourier mode, its residuals, and the
//! `|k|` behavior of the stability ratio.
//!
//! Run with `cargo run --example halfspace_solver`.

use std::f64::consts::FRAC_PI_4;

use te_maxwell::halfspace::{
    cauchy_residual, depth_grid, evaluate_fields, pec_source_solve, smooth_bump, solve_amplitudes, stability_ratio,
    TangentialMode, TraceDatum,
};
use te_maxwell::media::{MediaQuad, Wavenumber};
use te_maxwell::Complex64;

fn main() -> te_maxwell::Result<()> {
    let media = MediaQuad::new(2.0, 1.0, 1.0, 2.0);
    let xi = TangentialMode::new(0.7, -0.3);
    let trace = TraceDatum {
        fe: [Complex64::new(1.0, 0.2), Complex64::new(-0.5, 0.0)],
        fm: [Complex64::new(0.0, 1.0), Complex64::new(0.3, -0.4)],
    };

    let k = Wavenumber::polar(8.0, FRAC_PI_4, 0.5);
    let amp = solve_amplitudes(&xi, &k, &media, &trace)?;
    let rep = cauchy_residual(&amp, &trace, &depth_grid(3.0, 32))?;
    println!("k = {:.4}: Maxwell residual {:.2e}, jump residual {:.2e}", k.k, rep.maxwell_res, rep.bc_relative());
    for x3 in [0.0, 0.25, 0.5, 1.0] {
        let f = evaluate_fields(&amp, x3)?;
        println!("  x3 = {x3:<4}  |E| = {:.3e}  |Ê| = {:.3e}", norm3(&f.e), norm3(&f.e_hat));
    }

    println!("stability ratio across |k|:");
    for m in [2.0, 8.0, 32.0, 128.0, 200.0] {
        let k = Wavenumber::polar(m, FRAC_PI_4, 0.5);
        let amp = solve_amplitudes(&xi, &k, &media, &trace)?;
        println!("  |k| = {m:>5}: {:.4}", stability_ratio(&amp, &trace, &k)?);
    }

    // inhomogeneous problem with a perfectly conducting wall at x3 = 0
    println!("PEC source solve, |k|·‖(E,H)‖/‖J‖:");
    for m in [2.0, 8.0, 32.0] {
        let k = Wavenumber::polar(m, FRAC_PI_4, 0.5);
        let jm = |x: f64| {
            let b = smooth_bump(x, 0.2, 0.8);
            [Complex64::new(b, 0.0), Complex64::new(0.0, 0.5 * b), Complex64::new(0.0, 0.0)]
        };
        let p = pec_source_solve(&xi, &k, 2.0, 1.0, jm, (0.2, 0.8), None)?;
        println!("  |k| = {m:>4}: {:.4} (grid residual {:.1e})", m * p.field_norm() / p.source_norm, p.residual);
    }
    Ok(())
}

fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
