//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed by
//! `cargo test` without `--nocapture`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use te_maxwell::ball::{
    build_determinant, default_radial_grid, eigenfield_residual, smallest_clean_omega0, spectrum_census, Polarization,
};
use te_maxwell::certifier::{certify, ScanGrid, DEFAULT_THRESHOLD};
use te_maxwell::decay::DecayConfig;
use te_maxwell::halfspace::{
    cauchy_residual, decay_roots, depth_grid, solve_amplitudes, stability_ratio, TangentialMode, TraceDatum,
};
use te_maxwell::media::{MediaQuad, RadialMedia, Wavenumber, WedgeSpec};
use te_maxwell::radial::{
    default_source, empirical_threshold, limiting_absorption_sweep, operator_norm_sweep, physical_spectrum,
    RadialGrid, SectorSource, SectorSystem,
};
use te_maxwell::{Complex64, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn admissible() -> MediaQuad {
    MediaQuad::new(2.0, 1.0, 1.0, 2.0)
}

fn wedge_angle(rng: &mut ChaCha8Rng, gamma: f64) -> f64 {
    let lo = gamma.asin() / 2.0;
    let th = rng.random_range(lo..PI / 2.0 - lo);
    if rng.random_bool(0.5) {
        th
    } else {
        -th
    }
}

fn random_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn halfspace_exactness() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20260101);
    let (mut worst_max, mut worst_bc) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < 200 {
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(0.3..4.0)).collect();
        let media = MediaQuad::new(v[0], v[1], v[2], v[3]);
        if !(media.admissible() && media.within_cap()) {
            continue;
        }
        let xi = TangentialMode::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
        let modulus = 2.0 * 50f64.powf(rng.random_range(0.0..1.0));
        let k = Wavenumber::polar(modulus, wedge_angle(&mut rng, 0.5), 0.5);
        let trace = TraceDatum { fe: [random_c(&mut rng), random_c(&mut rng)], fm: [random_c(&mut rng), random_c(&mut rng)] };
        let amp = solve_amplitudes(&xi, &k, &media, &trace)?;
        let (s, s_hat) = decay_roots(&xi, k.k, &media)?;
        let span = 3.0 / s.re.min(s_hat.re);
        let rep = cauchy_residual(&amp, &trace, &depth_grid(span, 16))?;
        worst_max = worst_max.max(rep.maxwell_res);
        worst_bc = worst_bc.max(rep.bc_relative());
        done += 1;
    }
    outcome(
        worst_max <= 1e-9 && worst_bc <= 1e-9,
        format!("200 tuples, worst Maxwell residual {worst_max:.2e}, worst jump residual {worst_bc:.2e} (≤ 1e-9)"),
    )
}

fn stability_boundedness() -> Result<Outcome> {
    let media = admissible();
    let xi = TangentialMode::new(0.7, -0.3);
    let trace = TraceDatum {
        fe: [Complex64::new(1.0, 0.2), Complex64::new(-0.5, 0.0)],
        fm: [Complex64::new(0.0, 1.0), Complex64::new(0.3, -0.4)],
    };
    let k0 = 2.0;
    let ratios = (0..13)
        .map(|i| {
            let k = Wavenumber::polar(k0 * 100f64.powf(i as f64 / 12.0), FRAC_PI_4, 0.5);
            stability_ratio(&solve_amplitudes(&xi, &k, &media, &trace)?, &trace, &k)
        })
        .collect::<Result<Vec<f64>>>()?;
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(hi / lo <= 4.0, format!("|k| ∈ [{k0}, {}], ratio range [{lo:.3}, {hi:.3}], max/min {:.3} (≤ 4)", 100.0 * k0, hi / lo))
}

fn symbol_bounds() -> Result<Outcome> {
    let wedge = WedgeSpec::new(0.5, 1.0)?;
    let good = certify(&admissible(), &wedge, &ScanGrid::default(), DEFAULT_THRESHOLD)?;
    let degenerate = MediaQuad::new(2.0, 1.0, 4.0, 2.0);
    let bad = certify(&degenerate, &wedge, &ScanGrid::default().refined(2), DEFAULT_THRESHOLD)?;
    outcome(
        good.certified && good.scan.min_ratio_a >= 1e-3 && good.scan.min_ratio_b >= 1e-3 && bad.scan.min_ratio_a <= 1e-6,
        format!(
            "(2,1,1,2) min ratios {:.3e}/{:.3e} (≥ 1e-3); (2,1,4,2) refined min ratio A {:.3e} (≤ 1e-6)",
            good.scan.min_ratio_a, good.scan.min_ratio_b, bad.scan.min_ratio_a
        ),
    )
}

fn discreteness() -> Result<Outcome> {
    let media = admissible();
    let census = spectrum_census(&media, 12, 30.0)?;
    let grid = default_radial_grid();
    let mut worst = 0.0f64;
    for rec in &census.records {
        for &(n, p) in &rec.sectors {
            let det = build_determinant(n, p, &media)?;
            worst = worst.max(eigenfield_residual(rec, &det, &grid));
        }
    }
    let gap = census.min_gap();
    let count = census.records.len();
    outcome(
        count > 0 && count < 100_000 && worst <= 1e-8 && gap > 1e-6,
        format!("{count} distinct roots (|ω| ≤ 30, n ≤ 12), worst eigenfield residual {worst:.2e} (≤ 1e-8), min gap {gap:.3e} (> 1e-6)"),
    )
}

fn empty_wedge() -> Result<Outcome> {
    let candidates = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0];
    let (w0, scans) = smallest_clean_omega0(&admissible(), 0.5, 12, &candidates, 3.0)?;
    let last = scans.last().expect("at least one scan");
    outcome(
        w0.is_some_and(|w| w <= 50.0),
        format!(
            "ω₀ = {:?}: {} cells, {} roots, {} unresolved over ω₀ ≤ |ω| ≤ 3ω₀, n ≤ 12",
            w0, last.cells_scanned, last.total_roots, last.unresolved
        ),
    )
}

fn operator_cross_validation() -> Result<Outcome> {
    let quad = admissible();
    let media = RadialMedia::constant(&quad, 64);
    let k = Wavenumber::polar(3.0, FRAC_PI_4, 0.5);
    let census = spectrum_census(&quad, 2, 10.0)?;
    let sectors: Vec<(usize, Polarization)> = (1..=2).flat_map(|n| Polarization::BOTH.map(|p| (n, p))).collect();
    let devs = sectors
        .par_iter()
        .map(|&(n, p)| {
            let rep = physical_spectrum(&media, k, n, p, 160, 10.0)?;
            let mut oracle: Vec<f64> = census
                .records
                .iter()
                .filter(|r| r.sectors.contains(&(n, p)) && r.omega.re > 0.0)
                .map(|r| r.omega.re)
                .collect();
            oracle.sort_by(f64::total_cmp);
            if rep.physical.len() < 5 || oracle.len() < 5 {
                return Ok(f64::INFINITY);
            }
            Ok(rep.physical.iter().zip(&oracle).take(5).map(|(e, o)| (e.omega - o).norm() / o).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-3,
        format!("sectors 1TE 1TM 2TE 2TM, first 5 eigenvalues each, worst relative deviation {worst:.2e} (≤ 1e-3)"),
    )
}

fn limiting_absorption() -> Result<Outcome> {
    let media = RadialMedia::constant(&admissible(), 64);
    let grid = RadialGrid::uniform(200)?;
    let k = Wavenumber::polar(10.0, FRAC_PI_4, 0.5);
    let sys = SectorSystem::new(1, Polarization::Te, media, k, 0.0, grid.clone())?;
    let src = SectorSource::Field(default_source(&sys.space(), &grid, 1));
    let rep = limiting_absorption_sweep(&sys, &src, &[1e-2, 1e-3, 1e-4])?;
    outcome(
        rep.first_order,
        format!("|k| = 10, differences {:.3e}, {:.3e}, ratio {:.3} (in [5, 20])", rep.differences[0], rep.differences[1], rep.ratios[0]),
    )
}

fn decay() -> Result<Outcome> {
    let k = [10.0, 20.0, 40.0];
    let wedge = DecayConfig::default().run(&k)?;
    let real = DecayConfig { real_omega: true, ..Default::default() }.run(&k)?;
    outcome(
        wedge.c2 > 0.0 && wedge.residual < 0.05 && real.c2 < 0.05 && real.violation,
        format!(
            "wedge: c2 = {:.4}, fit residual {:.2e}; real ω: c2 = {:.2e}, violation reported: {}",
            wedge.c2, wedge.residual, real.c2, real.violation
        ),
    )
}

fn operator_norm() -> Result<Outcome> {
    let media = RadialMedia::constant(&admissible(), 64);
    let grid = RadialGrid::uniform(400)?;
    let (theta, gamma) = (FRAC_PI_4, 0.5);
    let scan = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0];
    let th = empirical_threshold(&media, 1, Polarization::Te, &grid, theta, gamma, &scan, &[1e-2, 1e-3, 1e-4])?;
    let Some(kt) = th.threshold else {
        return outcome(false, "no |k| in the scan converged".into());
    };
    let moduli: Vec<f64> = (0..6).map(|i| kt * 10f64.powf(i as f64 / 5.0)).collect();
    let sweep = operator_norm_sweep(&media, 1, Polarization::Te, &grid, theta, gamma, &moduli)?;
    outcome(
        sweep.spread <= 4.0,
        format!(
            "empirical threshold |k| = {kt}, |k|·σ_max over [{kt}, {}]: {:?}, max/min {:.3} (≤ 4)",
            10.0 * kt,
            sweep.scaled.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            sweep.spread
        ),
    )
}

fn main() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check, Duration); 9] = [
        ("half-space exactness", halfspace_exactness, Duration::from_secs(10)),
        ("stability-constant boundedness", stability_boundedness, Duration::from_secs(10)),
        ("symbol lower bounds", symbol_bounds, Duration::from_secs(30)),
        ("discreteness", discreteness, Duration::from_secs(300)),
        ("eigenvalue-free wedge", empty_wedge, Duration::from_secs(600)),
        ("operator cross-validation", operator_cross_validation, Duration::from_secs(300)),
        ("limiting absorption", limiting_absorption, Duration::from_secs(60)),
        ("decay", decay, Duration::from_secs(5)),
        ("operator-norm estimate", operator_norm, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= *limit;
        let ok = pass && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {} {name}: {} | {detail} | {:.2} s (limit {} s){}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { " over time" }
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
