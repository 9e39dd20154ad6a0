//! The radial solution operator: limiting absorption, the operator norm and the
//! spectrum compared with the ball eigenvalues.
//!
//! Run with `cargo run --release --example radial_operator`.

use std::f64::consts::FRAC_PI_4;

use te_maxwell::ball::{spectrum_census, Polarization};
use te_maxwell::media::{MediaQuad, RadialMedia, Wavenumber};
use te_maxwell::radial::{
    default_source, limiting_absorption_sweep, operator_norm_sweep, physical_spectrum, RadialGrid, SectorSource,
    SectorSystem,
};

fn main() -> te_maxwell::Result<()> {
    let quad = MediaQuad::new(2.0, 1.0, 1.0, 2.0);
    let media = RadialMedia::constant(&quad, 64);
    let k = Wavenumber::polar(3.0, FRAC_PI_4, 0.5);

    let grid = RadialGrid::uniform(200)?;
    let sys = SectorSystem::new(1, Polarization::Te, media.clone(), k, 0.0, grid.clone())?;
    let src = SectorSource::Field(default_source(&sys.space(), &grid, 1));
    let sweep = limiting_absorption_sweep(&sys, &src, &[1e-2, 1e-3, 1e-4])?;
    println!("δ-sweep differences {:?}, ratios {:?}", sweep.differences, sweep.ratios);

    let norms = operator_norm_sweep(&media, 1, Polarization::Te, &grid, 0.7, 0.5, &[1.0, 2.5, 6.3, 10.0])?;
    println!("|k|·‖T‖ over {:?}: {:?} (spread {:.3})", norms.moduli, norms.scaled, norms.spread);

    let census = spectrum_census(&quad, 2, 8.0)?;
    for n in 1..=2 {
        let rep = physical_spectrum(&media, k, n, Polarization::Tm, 100, 8.0)?;
        println!("sector {n}TM: {} physical, {} spurious", rep.physical.len(), rep.spurious);
        let oracle = census.records.iter().filter(|r| r.n == n && r.omega.re > 0.0).map(|r| r.omega.re);
        for (p, o) in rep.physical.iter().zip(oracle) {
            println!("  T: {:>22.10}  ball: {o:.10}  rel. dev {:.1e}", p.omega, (p.omega.re - o).abs() / o);
        }
    }
    Ok(())
}
