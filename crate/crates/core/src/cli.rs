//! Batch command line: `te-maxwell <subcommand> [flags]`.
//!
//! Every subcommand reads its inputs from JSON files, writes CSV tables and a
//! JSON report into `--out`, and returns an exit code: 0 on success, 1 when the
//! computation ran but the result fails its check (or the media are
//! degenerate), 2 on input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ball::{smallest_clean_omega0, spectrum_census, wedge_emptiness, Polarization};
use crate::certifier::{certify, ScanGrid, DEFAULT_THRESHOLD};
use crate::decay::DecayConfig;
use crate::error::Error;
use crate::halfspace::{
    cauchy_residual, depth_grid, evaluate_fields, solve_amplitudes, stability_ratio, TangentialMode, TraceDatum,
};
use crate::media::{MediaFile, MediaQuad, RadialMedia, Wavenumber, WedgeSpec, DEFAULT_RADIAL_SAMPLES};
use crate::output::{complex_header, fmt_c64, fmt_f64, write_report, Csv};
use crate::radial::{
    default_source, empirical_threshold, limiting_absorption_sweep, operator_norm_sweep, physical_spectrum,
    RadialGrid, SectorSource, SectorSystem,
};
use crate::C64;

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "TE_MAXWELL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "te-maxwell", version, about = "Spectral toolkit for Maxwell transmission eigenvalues")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Media description (JSON, constant or radial).
    #[arg(long, global = true)]
    pub media: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Subcommand-specific grid/parameter overrides (JSON object).
    #[arg(long, global = true)]
    pub grid: Option<PathBuf>,
    /// Pass/fail tolerance; each subcommand documents its default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads; the environment variable TE_MAXWELL_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Contrast margins and symbol lower bounds (tol: threshold, default 1e-3).
    Certify {
        #[arg(long, default_value_t = 0.5)]
        wedge: f64,
    },
    /// Half-space Cauchy solve at one (ξ, k) (tol: residual bound, default 1e-9).
    Halfspace {
        /// Trace data JSON `{"fe": [[re, im], [re, im]], "fm": [...]}`.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        wedge: f64,
    },
    /// Ball eigenvalue census (tol: eigenfield residual bound, default 1e-8).
    BallEigs {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 30.0)]
        radius: f64,
    },
    /// Root-free check of the wedge `ω₀ ≤ |ω| ≤ ratio·ω₀`.
    WedgeScan {
        #[arg(long, default_value_t = 0.5)]
        wedge: f64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Fixed ω₀; without it the smallest clean candidate is searched.
        #[arg(long)]
        omega0: Option<f64>,
        #[arg(long, default_value_t = 3.0)]
        ratio: f64,
    },
    /// Spectrum of the radial solution operator (tol: oracle deviation, default 1e-3).
    OperatorSpec {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = 160)]
        cells: usize,
        #[arg(long, default_value_t = 12.0)]
        omega_max: f64,
    },
    /// Slab decay fit (tol: fit residual bound, default 0.05).
    Decay {
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 40.0])]
        moduli: Vec<f64>,
        /// Use real frequency k = i|k|, outside the wedge.
        #[arg(long)]
        real_omega: bool,
        #[arg(long)]
        collar: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Certify { .. } => "certify",
            Command::Halfspace { .. } => "halfspace",
            Command::BallEigs { .. } => "ball-eigs",
            Command::WedgeScan { .. } => "wedge-scan",
            Command::OperatorSpec { .. } => "operator-spec",
            Command::Decay { .. } => "decay",
        }
    }
}

#[derive(Debug)]
enum Failure {
    /// Bad arguments, files or JSON: exit 2.
    Input(String),
    /// Computation error: exit 1 or 2 depending on the kind.
    Run(Error),
    /// The computation finished but its check failed: exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Exit code for a computation error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::InvalidMedia(_) | Error::BranchDegeneracy(_) => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name), runs and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("te-maxwell: {}", line.trim_start_matches("error: "));
            return 2;
        }
    };
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("te-maxwell: {msg}");
            return 2;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("te-maxwell: thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            eprintln!("te-maxwell: {msg}");
            2
        }
        Err(Failure::Run(e)) => {
            eprintln!("te-maxwell: {e}");
            exit_code(&e)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("te-maxwell: {msg}");
            1
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> std::result::Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} = {v:?} is not a positive integer")),
        },
        _ => match flag {
            Some(0) => Err("--threads must be positive".into()),
            other => Ok(other),
        },
    }
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, format!("malformed JSON: {e}")))
}

/// Defaults of `T` overlaid with the keys of the `--grid` object.
fn load_grid<T: Serialize + DeserializeOwned + Default>(path: Option<&Path>) -> Result<(T, Value), Failure> {
    let mut base = serde_json::to_value(T::default()).expect("defaults serialize");
    if let Some(p) = path {
        match read_value(p)? {
            Value::Object(over) => {
                let obj = base.as_object_mut().expect("grid defaults are objects");
                for (k, v) in over {
                    if !obj.contains_key(&k) {
                        return Err(io_err(p, format!("unknown grid key {k:?}")));
                    }
                    obj.insert(k, v);
                }
            }
            _ => return Err(io_err(p, "grid file must hold a JSON object")),
        }
    }
    let parsed = serde_json::from_value(base.clone()).map_err(|e| Failure::Input(format!("grid: {e}")))?;
    Ok((parsed, base))
}

fn load_media(path: Option<&Path>) -> Result<(MediaFile, Value), Failure> {
    let path = path.ok_or_else(|| Failure::Input("--media is required".into()))?;
    let value = read_value(path)?;
    let media = serde_json::from_value(value.clone()).map_err(|e| io_err(path, format!("not a media description: {e}")))?;
    Ok((media, value))
}

fn constant_media(path: Option<&Path>) -> Result<(MediaQuad, Value), Failure> {
    match load_media(path)? {
        (MediaFile::Constant(d), v) => Ok((d.to_quad()?, v)),
        (MediaFile::Radial(_), _) => Err(Failure::Input("this subcommand needs constant media".into())),
    }
}

fn out_dir(cli: &Cli) -> Result<&Path, Failure> {
    std::fs::create_dir_all(&cli.out).map_err(|e| io_err(&cli.out, e))?;
    Ok(&cli.out)
}

fn write_csv(dir: &Path, name: &str, csv: &Csv) -> Result<(), Failure> {
    let p = dir.join(name);
    csv.write(&p).map_err(|e| io_err(&p, e))
}

fn write_json<R: Serialize>(dir: &Path, name: &str, kind: &str, config: &Value, result: &R) -> Result<(), Failure> {
    let p = dir.join(name);
    write_report(&p, kind, config, result).map_err(|e| io_err(&p, e))
}

fn run_config(cli: &Cli, media: &Value, grid: &Value, tol: f64) -> Value {
    json!({ "subcommand": cli.command, "media": media, "grid": grid, "tol": tol })
}

fn tolerance(cli: &Cli, default: f64) -> Result<f64, Failure> {
    match cli.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Failure::Input(format!("--tol {t} must be positive"))),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Certify { wedge } => cmd_certify(cli, *wedge),
        Command::Halfspace { trace, wedge } => cmd_halfspace(cli, trace.as_deref(), *wedge),
        Command::BallEigs { n_max, radius } => cmd_ball(cli, *n_max, *radius),
        Command::WedgeScan { wedge, n_max, omega0, ratio } => cmd_wedge(cli, *wedge, *n_max, *omega0, *ratio),
        Command::OperatorSpec { n_max, cells, omega_max } => cmd_operator(cli, *n_max, *cells, *omega_max),
        Command::Decay { moduli, real_omega, collar } => cmd_decay(cli, moduli, *real_omega, *collar),
    }
}

fn cmd_certify(cli: &Cli, gamma: f64) -> Result<(), Failure> {
    let tol = tolerance(cli, DEFAULT_THRESHOLD)?;
    let (media, mv) = constant_media(cli.media.as_deref())?;
    let (grid, gv): (ScanGrid, _) = load_grid(cli.grid.as_deref())?;
    let wedge = WedgeSpec::new(gamma, 1.0)?;
    let cert = certify(&media, &wedge, &grid, tol)?;
    let dir = out_dir(cli)?;
    write_json(dir, "certify.json", "certify", &run_config(cli, &mv, &gv, tol), &cert)?;
    if cert.certified {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "not certified: admissible = {}, min ratios {:.3e} / {:.3e} against {tol:.1e}",
            cert.admissibility.ok, cert.scan.min_ratio_a, cert.scan.min_ratio_b
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HalfspaceGrid {
    xi: [f64; 2],
    k_modulus: f64,
    k_theta: f64,
    depth_span: f64,
    depth_count: usize,
}

impl Default for HalfspaceGrid {
    fn default() -> Self {
        Self { xi: [0.7, -0.3], k_modulus: 5.0, k_theta: std::f64::consts::FRAC_PI_4, depth_span: 4.0, depth_count: 64 }
    }
}

fn cmd_halfspace(cli: &Cli, trace: Option<&Path>, gamma: f64) -> Result<(), Failure> {
    let tol = tolerance(cli, 1e-9)?;
    let (media, mv) = constant_media(cli.media.as_deref())?;
    let (grid, mut gv): (HalfspaceGrid, _) = load_grid(cli.grid.as_deref())?;
    let data: TraceDatum = match trace {
        Some(p) => serde_json::from_value(read_value(p)?).map_err(|e| io_err(p, format!("not trace data: {e}")))?,
        None => TraceDatum { fe: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)], fm: [C64::new(0.0, 0.0), C64::new(0.0, 1.0)] },
    };
    gv["trace"] = serde_json::to_value(data).expect("trace serializes");
    if grid.depth_count < 8 || !(grid.depth_span > 0.0) {
        return Err(Failure::Input("depth grid needs span > 0 and at least 8 points".into()));
    }
    let xi = TangentialMode::new(grid.xi[0], grid.xi[1]);
    let k = Wavenumber::polar(grid.k_modulus, grid.k_theta, gamma);
    let amp = solve_amplitudes(&xi, &k, &media, &data)?;
    let depths = depth_grid(grid.depth_span, grid.depth_count);
    let residual = cauchy_residual(&amp, &data, &depths)?;
    let stability = match stability_ratio(&amp, &data, &k) {
        Ok(r) => Some(r),
        Err(Error::UndefinedRatio(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let names = ["E1", "E2", "E3", "H1", "H2", "H3", "Ehat1", "Ehat2", "Ehat3", "Hhat1", "Hhat2", "Hhat3"];
    let mut header = vec!["x3".to_string()];
    header.extend(names.iter().flat_map(|n| complex_header(n)));
    let mut csv = Csv::new(header);
    for &x in &depths {
        let s = evaluate_fields(&amp, x)?;
        let mut row = vec![fmt_f64(x)];
        row.extend(s.components().iter().flat_map(|z| fmt_c64(*z)));
        csv.push(row);
    }
    let dir = out_dir(cli)?;
    write_csv(dir, "fields.csv", &csv)?;
    let result = json!({
        "amplitudes": amp,
        "maxwell_residual": residual.maxwell_res,
        "boundary_residual": residual.bc_relative(),
        "stability_ratio": stability,
    });
    write_json(dir, "halfspace.json", "halfspace", &run_config(cli, &mv, &gv, tol), &result)?;
    let worst = residual.maxwell_res.max(residual.bc_relative());
    if worst <= tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("half-space residual {worst:.3e} exceeds {tol:.1e}")))
    }
}

fn sector_label(sectors: &[(usize, Polarization)]) -> String {
    sectors.iter().map(|(n, p)| format!("{n}{}", p.label())).collect::<Vec<_>>().join(";")
}

fn cmd_ball(cli: &Cli, n_max: usize, radius: f64) -> Result<(), Failure> {
    let tol = tolerance(cli, 1e-8)?;
    let (media, mv) = constant_media(cli.media.as_deref())?;
    let census = spectrum_census(&media, n_max, radius)?;
    let mut header = complex_header("omega").to_vec();
    header.extend(["multiplicity", "residual", "sectors"].map(String::from));
    let mut csv = Csv::new(header);
    for r in &census.records {
        let mut row = fmt_c64(r.omega).to_vec();
        row.extend([r.multiplicity.to_string(), fmt_f64(r.residual), sector_label(&r.sectors)]);
        csv.push(row);
    }
    let mut counting = Csv::new(["r", "count"]);
    for (r, n) in census.counting_function() {
        counting.push(vec![fmt_f64(r), n.to_string()]);
    }
    let dir = out_dir(cli)?;
    write_csv(dir, "eigenvalues.csv", &csv)?;
    write_csv(dir, "counting.csv", &counting)?;
    let summary = json!({
        "n_max": n_max,
        "radius": radius,
        "roots": census.records.len(),
        "counted_with_multiplicity": census.counting(radius),
        "min_gap": census.min_gap(),
        "max_residual": census.max_residual(),
    });
    write_json(dir, "ball.json", "ball-eigs", &run_config(cli, &mv, &Value::Null, tol), &summary)?;
    if census.max_residual() <= tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("eigenfield residual {:.3e} exceeds {tol:.1e}", census.max_residual())))
    }
}

fn cmd_wedge(cli: &Cli, gamma: f64, n_max: usize, omega0: Option<f64>, ratio: f64) -> Result<(), Failure> {
    let (media, mv) = constant_media(cli.media.as_deref())?;
    if !(ratio > 1.0) {
        return Err(Failure::Input(format!("--ratio {ratio} must exceed 1")));
    }
    let scans = match omega0 {
        Some(w0) => vec![wedge_emptiness(&media, &WedgeSpec::new(gamma, w0)?, n_max, ratio * w0)?],
        None => smallest_clean_omega0(&media, gamma, n_max, &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0], ratio)?.1,
    };
    let mut csv = Csv::new(["omega0", "r_max", "cells", "roots", "unresolved", "clean"]);
    for s in &scans {
        csv.push(vec![
            fmt_f64(s.omega0),
            fmt_f64(s.r_max),
            s.cells_scanned.to_string(),
            s.total_roots.to_string(),
            s.unresolved.to_string(),
            s.clean().to_string(),
        ]);
    }
    let dir = out_dir(cli)?;
    write_csv(dir, "wedge.csv", &csv)?;
    let clean = scans.last().filter(|s| s.clean()).map(|s| s.omega0);
    let result = json!({ "clean_omega0": clean, "scans": scans });
    write_json(dir, "wedge.json", "wedge-scan", &run_config(cli, &mv, &Value::Null, 0.0), &result)?;
    match clean {
        Some(_) => Ok(()),
        None => Err(Failure::Check("no clean ω₀ found: roots or unresolved cells in the wedge".into())),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OperatorGrid {
    k_modulus: f64,
    k_theta: f64,
    gamma: f64,
    deltas: Vec<f64>,
    threshold_moduli: Vec<f64>,
    norm_cells: usize,
    norm_points: usize,
}

impl Default for OperatorGrid {
    fn default() -> Self {
        Self {
            k_modulus: 3.0,
            k_theta: std::f64::consts::FRAC_PI_4,
            gamma: 0.5,
            deltas: vec![1e-2, 1e-3, 1e-4],
            threshold_moduli: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            norm_cells: 200,
            norm_points: 6,
        }
    }
}

fn cmd_operator(cli: &Cli, n_max: usize, cells: usize, omega_max: f64) -> Result<(), Failure> {
    let tol = tolerance(cli, 1e-3)?;
    let (file, mv) = load_media(cli.media.as_deref())?;
    let (grid, gv): (OperatorGrid, _) = load_grid(cli.grid.as_deref())?;
    let (media, quad) = match &file {
        MediaFile::Constant(d) => {
            let q = d.to_quad()?;
            if q.is_identical() {
                return Err(Error::DegenerateMedia.into());
            }
            (RadialMedia::constant(&q, DEFAULT_RADIAL_SAMPLES), Some(q))
        }
        MediaFile::Radial(r) => (r.to_media()?, None),
    };
    if n_max < 1 {
        return Err(Failure::Input("--n-max must be at least 1".into()));
    }
    let k = Wavenumber::polar(grid.k_modulus, grid.k_theta, grid.gamma);
    let sectors: Vec<(usize, Polarization)> =
        (1..=n_max).flat_map(|n| Polarization::BOTH.map(|p| (n, p))).collect();
    let reports = sectors
        .par_iter()
        .map(|&(n, p)| physical_spectrum(&media, k, n, p, cells, omega_max))
        .collect::<crate::Result<Vec<_>>>()?;
    let oracle = match &quad {
        Some(q) => Some(spectrum_census(q, n_max, omega_max * 1.1)?),
        None => None,
    };

    let mut header = vec!["n".to_string(), "polarization".to_string()];
    header.extend(complex_header("omega"));
    header.extend(["movement", "oracle_re", "oracle_im", "relative_deviation"].map(String::from));
    let mut csv = Csv::new(header);
    let mut worst_first5 = 0.0f64;
    for rep in &reports {
        for (i, e) in rep.physical.iter().enumerate() {
            let mut row = vec![rep.n.to_string(), rep.polarization.label().to_string()];
            row.extend(fmt_c64(e.omega));
            row.push(fmt_f64(e.movement));
            let nearest = oracle.as_ref().and_then(|c| {
                c.records
                    .iter()
                    .filter(|r| r.sectors.contains(&(rep.n, rep.polarization)))
                    .map(|r| if r.omega.re < 0.0 { -r.omega } else { r.omega })
                    .min_by(|a, b| (a - e.omega).norm().total_cmp(&(b - e.omega).norm()))
            });
            match nearest {
                Some(o) => {
                    let dev = (o - e.omega).norm() / o.norm();
                    if i < 5 {
                        worst_first5 = worst_first5.max(dev);
                    }
                    row.extend(fmt_c64(o));
                    row.push(fmt_f64(dev));
                }
                None => row.extend(["", "", ""].map(String::from)),
            }
            csv.push(row);
        }
    }

    let op_grid = RadialGrid::uniform(cells)?;
    let sys = SectorSystem::new(1, Polarization::Te, media.clone(), k, 0.0, op_grid.clone())?;
    let source = SectorSource::Field(default_source(&sys.space(), &op_grid, 1));
    let sweep = limiting_absorption_sweep(&sys, &source, &grid.deltas)?;
    let norm_grid = RadialGrid::uniform(grid.norm_cells)?;
    let threshold = empirical_threshold(
        &media,
        1,
        Polarization::Te,
        &norm_grid,
        grid.k_theta,
        grid.gamma,
        &grid.threshold_moduli,
        &grid.deltas,
    )?;
    let norms = match threshold.threshold {
        Some(kt) => {
            let m = grid.norm_points.max(2);
            let moduli: Vec<f64> = (0..m).map(|i| kt * 10f64.powf(i as f64 / (m - 1) as f64)).collect();
            Some(operator_norm_sweep(&media, 1, Polarization::Te, &norm_grid, grid.k_theta, grid.gamma, &moduli)?)
        }
        None => None,
    };

    let dir = out_dir(cli)?;
    write_csv(dir, "spectrum.csv", &csv)?;
    let summary = json!({
        "sectors": reports,
        "max_oracle_deviation_first5": oracle.as_ref().map(|_| worst_first5),
        "sweep": {
            "deltas": sweep.deltas,
            "differences": sweep.differences,
            "ratios": sweep.ratios,
            "first_order": sweep.first_order,
            "delta_star": sweep.delta_star,
        },
        "threshold": threshold,
        "norm_sweep": norms,
    });
    write_json(dir, "operator.json", "operator-spec", &run_config(cli, &mv, &gv, tol), &summary)?;
    if oracle.is_some() && (worst_first5 > tol || reports.iter().any(|r| r.physical.len() < 5)) {
        return Err(Failure::Check(format!(
            "operator spectrum deviates from the ball oracle by {worst_first5:.3e} (tolerance {tol:.1e})"
        )));
    }
    Ok(())
}

fn cmd_decay(cli: &Cli, moduli: &[f64], real_omega: bool, collar: Option<f64>) -> Result<(), Failure> {
    let tol = tolerance(cli, 0.05)?;
    let (mut cfg, _): (DecayConfig, _) = load_grid(cli.grid.as_deref())?;
    cfg.real_omega |= real_omega;
    if let Some(s) = collar {
        cfg.s = s;
    }
    let gv = serde_json::to_value(&cfg).expect("config serializes");
    let profiles = cfg.profiles(moduli)?;
    let fit = crate::decay::DecayFit::fit(moduli, &profiles.iter().map(|p| p.ratio(cfg.s)).collect::<Vec<_>>(), cfg.s)?;
    let mut header = vec!["modulus".to_string(), "ratio".to_string()];
    header.extend(complex_header("sigma"));
    let mut csv = Csv::new(header);
    for ((m, r), p) in moduli.iter().zip(&fit.ratios).zip(&profiles) {
        let mut row = vec![fmt_f64(*m), fmt_f64(*r)];
        row.extend(fmt_c64(p.sigma));
        csv.push(row);
    }
    let dir = out_dir(cli)?;
    write_csv(dir, "ratios.csv", &csv)?;
    let result = json!({
        "c1": fit.c1,
        "c2": fit.c2,
        "residual": fit.residual,
        "K": fit.moduli,
        "s": fit.s,
        "violation": fit.violation,
    });
    write_json(dir, "decay.json", "decay", &run_config(cli, &Value::Null, &gv, tol), &result)?;
    fit.require_decay()?;
    if fit.residual > tol {
        return Err(Failure::Check(format!("decay fit residual {:.3e} exceeds {tol:.1e}", fit.residual)));
    }
    Ok(())
}
