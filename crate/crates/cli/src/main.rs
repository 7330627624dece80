//! Batch frontend for the wellbound toolkit.
//!
//! One command per process: read a dotted key = value configuration file,
//! run a single computation, and write CSV/JSON artifacts plus a manifest
//! into the output directory. Exit codes: 0 success (including the physical
//! answer "no bound state"), 2 configuration errors, 3 numerical
//! non-convergence.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;

use wellbound::bs_solver::{discrete_spectrum, threshold_reference};
use wellbound::error::Error;
use wellbound::floquet::band_structure;
use wellbound::geometry::{bent_chain, WellArray};
use wellbound::optimize::{maximize_circle, maximize_loop, maximize_sphere, SearchSpec, Trace};
use wellbound::oracles::{
    point_spectrum, radial_bound_states, resonance_defect, resonance_overlap_sq,
    shrink_convergence, PointInteractionSystem,
};

use config::{build_geometry, build_potential, build_solver, triples, Config, ConfigError};
use output::Artifacts;

const USAGE: &str = "\
wellbound — discrete spectra of radial-well arrays

USAGE
  wellbound <command> --config <file> [--out <dir>] [--seed <u64>]
                      [--threads <n>] [--tol <float>]

COMMANDS
  spectrum          discrete spectrum of a well array, with a periodic-chain
                    threshold reference when the geometry has a spacing
  bands             Floquet band structure of the periodic straight chain
  bend-sweep        ground state of a bent chain versus the bend angle
  circle-opt        search angular gaps on a circle maximizing the ground state
  sphere-opt        search well directions on a sphere
  loop-opt          search planar polygon loops of fixed perimeter
  oracle radial     single-well levels from the radial shooting oracle
  oracle point      point-interaction spectrum (shrinking-well limit model)
  converge-shrink   scaled-well versus point-interaction convergence table

FLAGS
  --config <file>   configuration file (required; section.key = value lines)
  --out <dir>       artifact directory (default .)
  --seed <u64>      overrides search.seed for the search commands
  --threads <n>     cap on worker threads
  --tol <float>     overrides solver.tol

Artifacts always include manifest.json (schema 1) with the config hash,
package versions, seed, and wall time.
";

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

/// Map solver errors: only genuine non-convergence is exit 3; everything
/// else reflects an impossible or oversized request, which is exit 2.
fn numeric(e: Error) -> Failure {
    match e {
        Error::NoConvergence(_) => Failure::Numeric(e.to_string()),
        other => Failure::Config(other.to_string()),
    }
}

struct Flags {
    config: PathBuf,
    out: PathBuf,
    seed: Option<u64>,
    threads: Option<usize>,
    tol: Option<f64>,
}

fn parse_flags(args: &[String]) -> Result<Flags, Failure> {
    let mut config = None;
    let mut out = PathBuf::from(".");
    let mut seed = None;
    let mut threads = None;
    let mut tol = None;
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let mut value = |name: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| Failure::Config(format!("flag {name} needs a value")))
        };
        match flag.as_str() {
            "--config" => config = Some(PathBuf::from(value("--config")?)),
            "--out" => out = PathBuf::from(value("--out")?),
            "--seed" => {
                let s = value("--seed")?;
                seed = Some(s.parse().map_err(|_| {
                    Failure::Config(format!("--seed must be a nonnegative integer, got `{s}`"))
                })?);
            }
            "--threads" => {
                let s = value("--threads")?;
                let n: usize = s.parse().map_err(|_| {
                    Failure::Config(format!("--threads must be a positive integer, got `{s}`"))
                })?;
                if n == 0 {
                    return Err(Failure::Config("--threads must be at least 1".into()));
                }
                threads = Some(n);
            }
            "--tol" => {
                let s = value("--tol")?;
                let t: f64 = s.parse().map_err(|_| {
                    Failure::Config(format!("--tol must be a number, got `{s}`"))
                })?;
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Failure::Config(format!("--tol must be positive, got {t}")));
                }
                tol = Some(t);
            }
            other => return Err(Failure::Config(format!("unknown flag `{other}`"))),
        }
    }
    let config = config.ok_or_else(|| Failure::Config("missing required flag --config".into()))?;
    Ok(Flags {
        config,
        out,
        seed,
        threads,
        tol,
    })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || matches!(args[0].as_str(), "--help" | "-h" | "help") {
        print!("{USAGE}");
        return if args.is_empty() {
            eprintln!("error: missing command");
            ExitCode::from(2)
        } else {
            ExitCode::SUCCESS
        };
    }
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(args: &[String]) -> Result<(), Failure> {
    let (command, rest) = match args[0].as_str() {
        "oracle" => {
            let sub = args.get(1).map(String::as_str);
            match sub {
                Some("radial") => ("oracle radial", &args[2..]),
                Some("point") => ("oracle point", &args[2..]),
                _ => {
                    return Err(Failure::Config(
                        "oracle needs a subcommand: radial or point".into(),
                    ))
                }
            }
        }
        "spectrum" | "bands" | "bend-sweep" | "circle-opt" | "sphere-opt" | "loop-opt"
        | "converge-shrink" => (args[0].as_str(), &args[1..]),
        other => {
            return Err(Failure::Config(format!(
                "unknown command `{other}` (run with --help for the list)"
            )))
        }
    };
    let flags = parse_flags(rest)?;
    if let Some(n) = flags.threads {
        // the global pool can only be initialized once per process; a second
        // attempt would mean this function ran twice, which run() never does
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut cfg = Config::load(&flags.config)?;
    let started = Instant::now();
    let mut art = Artifacts::new(&flags.out)?;
    let seed = match command {
        "spectrum" => cmd_spectrum(&mut cfg, &flags, &mut art)?,
        "bands" => cmd_bands(&mut cfg, &flags, &mut art)?,
        "bend-sweep" => cmd_bend_sweep(&mut cfg, &flags, &mut art)?,
        "circle-opt" => cmd_circle_opt(&mut cfg, &flags, &mut art)?,
        "sphere-opt" => cmd_sphere_opt(&mut cfg, &flags, &mut art)?,
        "loop-opt" => cmd_loop_opt(&mut cfg, &flags, &mut art)?,
        "oracle radial" => cmd_oracle_radial(&mut cfg, &flags, &mut art)?,
        "oracle point" => cmd_oracle_point(&mut cfg, &flags, &mut art)?,
        "converge-shrink" => cmd_shrink(&mut cfg, &flags, &mut art)?,
        _ => unreachable!(),
    };
    art.finish(
        command,
        &cfg.bytes,
        seed,
        flags.threads,
        started.elapsed().as_millis(),
    )?;
    println!("{command}: artifacts written to {}", flags.out.display());
    Ok(())
}

#[derive(Serialize)]
struct DiagnosticsOut {
    assemblies: usize,
    bisections: usize,
    radial_order: usize,
    angular_order: usize,
    kappa_floor: f64,
    max_residual: f64,
    notes: Vec<String>,
}

impl DiagnosticsOut {
    fn from(d: &wellbound::bs_solver::Diagnostics) -> Self {
        Self {
            assemblies: d.assemblies,
            bisections: d.bisections,
            radial_order: d.radial_order,
            angular_order: d.angular_order,
            kappa_floor: d.kappa_floor,
            max_residual: d.max_residual,
            notes: d.notes.clone(),
        }
    }
}

fn cmd_spectrum(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let y = build_geometry(cfg, v.rho)?;
    let (opts, tol) = build_solver(cfg, y.nu, flags.tol)?;
    let max_count = cfg.take_usize("solver.max_count")?.unwrap_or(8);
    let want_threshold = cfg.take_usize("spectrum.threshold")?.unwrap_or(1) != 0;
    // the reference settles in chain length, a much coarser scale than the
    // eigenvalue bisection, so it gets its own tolerance
    let threshold_tol = cfg.take_f64("spectrum.threshold_tol")?.unwrap_or(1e-3);
    if !(threshold_tol > 0.0) {
        return Err(ConfigError("spectrum.threshold_tol must be positive".into()).into());
    }
    cfg.finish()?;

    let res = discrete_spectrum(&v, &y, max_count, tol, &opts).map_err(numeric)?;
    let threshold = match y.spacing_a {
        Some(a) if want_threshold => {
            let t = threshold_reference(&v, a, y.nu, threshold_tol, &opts).map_err(numeric)?;
            t.eigenvalues.first().copied()
        }
        _ => None,
    };

    let rows: Vec<Vec<Option<f64>>> = res
        .eigenvalues
        .iter()
        .zip(&res.kappa_values)
        .enumerate()
        .map(|(i, (e, k))| vec![Some(i as f64), Some(*e), Some(*k)])
        .collect();
    art.csv("spectrum.csv", "index,eps,kappa", &rows)?;

    #[derive(Serialize)]
    struct SpectrumOut {
        schema: u32,
        command: &'static str,
        nu: u8,
        n_wells: usize,
        geometry: String,
        no_bound_state: bool,
        eigenvalues: Vec<f64>,
        kappa_values: Vec<f64>,
        threshold_eps: Option<f64>,
        diagnostics: DiagnosticsOut,
    }
    art.json(
        "spectrum.json",
        &SpectrumOut {
            schema: 1,
            command: "spectrum",
            nu: y.nu,
            n_wells: y.n(),
            geometry: y.tag.clone(),
            no_bound_state: res.diagnostics.no_bound_state,
            eigenvalues: res.eigenvalues.clone(),
            kappa_values: res.kappa_values.clone(),
            threshold_eps: threshold,
            diagnostics: DiagnosticsOut::from(&res.diagnostics),
        },
    )?;
    Ok(flags.seed)
}

fn cmd_bands(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let a = cfg.require_f64("bands.a")?;
    let t = cfg.require_f64("bands.t")?;
    let h = cfg.require_f64("bands.h")?;
    let theta_points = cfg.take_usize("bands.theta_points")?.unwrap_or(21);
    let k = cfg.take_usize("bands.k")?.unwrap_or(6);
    let _ = flags.tol; // band eigensolves have no root-finding tolerance
    cfg.finish()?;

    let bs = band_structure(&v, a, t, h, theta_points, k).map_err(numeric)?;
    let header = {
        let mut cols = vec!["theta".to_string()];
        cols.extend((1..=k).map(|j| format!("band{j}")));
        cols.join(",")
    };
    let rows: Vec<Vec<Option<f64>>> = bs
        .theta_grid
        .iter()
        .enumerate()
        .map(|(ti, theta)| {
            let mut row = vec![Some(*theta)];
            row.extend(bs.bands.iter().map(|band| Some(band[ti])));
            row
        })
        .collect();
    art.csv("bands.csv", &header, &rows)?;

    #[derive(Serialize)]
    struct BandsOut {
        schema: u32,
        command: &'static str,
        a: f64,
        t: f64,
        h: f64,
        theta_points: usize,
        k: usize,
        edges: Vec<(f64, f64)>,
        gaps: Vec<(f64, f64)>,
        negative_bands: usize,
    }
    art.json(
        "bands.json",
        &BandsOut {
            schema: 1,
            command: "bands",
            a,
            t,
            h,
            theta_points,
            k,
            edges: bs.edges.clone(),
            gaps: bs.gaps.clone(),
            negative_bands: bs.negative_band_count(),
        },
    )?;
    Ok(flags.seed)
}

fn cmd_bend_sweep(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let n = cfg.require_usize("geometry.n")?;
    let a = cfg.require_f64("geometry.a")?;
    let nu = cfg.take_usize("geometry.nu")?.unwrap_or(2) as u8;
    let betas = cfg.take_list("sweep.betas")?.unwrap_or_else(|| {
        let pi = std::f64::consts::PI;
        vec![0.0, pi / 12.0, pi / 6.0, pi / 4.0, pi / 3.0]
    });
    let (opts, tol) = build_solver(cfg, nu, flags.tol)?;
    cfg.finish()?;

    let straight = bent_chain(n, a, 0.0, nu, v.rho).map_err(numeric)?;
    let base = discrete_spectrum(&v, &straight, 1, tol, &opts).map_err(numeric)?;
    let e0 = base.eigenvalues.first().copied();

    let mut rows: Vec<Vec<Option<f64>>> = Vec::with_capacity(betas.len());
    let mut hint = base.kappa_values.first().copied();
    for &beta in &betas {
        let (e1, kappa) = if beta == 0.0 {
            (e0, base.kappa_values.first().copied())
        } else {
            let y = bent_chain(n, a, beta, nu, v.rho).map_err(numeric)?;
            let mut local = opts.clone();
            if local.kappa_hint.is_none() {
                local.kappa_hint = hint;
            }
            let res = discrete_spectrum(&v, &y, 1, tol, &local).map_err(numeric)?;
            (res.eigenvalues.first().copied(), res.kappa_values.first().copied())
        };
        if kappa.is_some() {
            hint = kappa;
        }
        rows.push(vec![Some(beta), e1, e0, Some(n as f64), kappa]);
    }
    art.csv("bend_sweep.csv", "beta,e1,e0_reference,n_wells,kappa", &rows)?;
    Ok(flags.seed)
}

#[derive(Serialize)]
struct TraceOut {
    evaluations: usize,
    incumbents: Vec<(usize, f64)>,
    preset_objective: Option<f64>,
    preset_beaten: Option<bool>,
    notes: Vec<String>,
}

impl TraceOut {
    fn from(t: &Trace) -> Self {
        Self {
            evaluations: t.evaluations,
            incumbents: t.incumbents.clone(),
            preset_objective: t.preset_objective,
            preset_beaten: t.preset_beaten,
            notes: t.notes.clone(),
        }
    }
}

/// Search controls shared by the three opt commands; the --seed flag wins
/// over `search.seed`.
fn search_spec(cfg: &mut Config, flags: &Flags) -> Result<(SearchSpec, u64), Failure> {
    let budget = cfg.take_usize("search.budget")?.unwrap_or(300);
    let restarts = cfg.take_usize("search.restarts")?.unwrap_or(2);
    let cfg_seed = cfg.take_u64("search.seed")?.unwrap_or(0);
    let seed = flags.seed.unwrap_or(cfg_seed);
    let tol = cfg.take_f64("search.tol")?.unwrap_or(1e-6);
    let spec = SearchSpec::new(budget, restarts, seed, tol).map_err(numeric)?;
    Ok((spec, seed))
}

fn cmd_circle_opt(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let n = cfg.require_usize("geometry.n")?;
    let radius = cfg.require_f64("geometry.radius")?;
    let nu = cfg.take_usize("geometry.nu")?.unwrap_or(2) as u8;
    let (opts, _) = build_solver(cfg, nu, flags.tol)?;
    let (search, seed) = search_spec(cfg, flags)?;
    cfg.finish()?;

    let (config, objective, trace) =
        maximize_circle(n, radius, &v, nu, &search, &opts).map_err(numeric)?;

    #[derive(Serialize)]
    struct CircleOut {
        schema: u32,
        command: &'static str,
        n: usize,
        radius: f64,
        seed: u64,
        budget: usize,
        gaps: Vec<f64>,
        polar_angles: Vec<f64>,
        objective: f64,
        trace: TraceOut,
    }
    art.json(
        "circle_opt.json",
        &CircleOut {
            schema: 1,
            command: "circle-opt",
            n,
            radius,
            seed,
            budget: search.budget,
            gaps: config.angles.clone(),
            polar_angles: config.polar_angles(),
            objective,
            trace: TraceOut::from(&trace),
        },
    )?;
    Ok(Some(seed))
}

fn cmd_sphere_opt(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let n = cfg.require_usize("geometry.n")?;
    let radius = cfg.require_f64("geometry.radius")?;
    let (opts, _) = build_solver(cfg, 3, flags.tol)?;
    let (search, seed) = search_spec(cfg, flags)?;
    cfg.finish()?;

    let (directions, objective, trace) =
        maximize_sphere(n, radius, &v, &search, &opts).map_err(numeric)?;

    #[derive(Serialize)]
    struct SphereOut {
        schema: u32,
        command: &'static str,
        n: usize,
        radius: f64,
        seed: u64,
        budget: usize,
        directions: Vec<[f64; 3]>,
        objective: f64,
        trace: TraceOut,
    }
    art.json(
        "sphere_opt.json",
        &SphereOut {
            schema: 1,
            command: "sphere-opt",
            n,
            radius,
            seed,
            budget: search.budget,
            directions,
            objective,
            trace: TraceOut::from(&trace),
        },
    )?;
    Ok(Some(seed))
}

fn cmd_loop_opt(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let n = cfg.require_usize("geometry.n")?;
    let l = cfg.require_f64("geometry.l")?;
    let nu = cfg.take_usize("geometry.nu")?.unwrap_or(2) as u8;
    let (opts, _) = build_solver(cfg, nu, flags.tol)?;
    let (search, seed) = search_spec(cfg, flags)?;
    cfg.finish()?;

    let (vertices, objective, trace) =
        maximize_loop(n, l, &v, nu, &search, &opts).map_err(numeric)?;

    #[derive(Serialize)]
    struct LoopOut {
        schema: u32,
        command: &'static str,
        n: usize,
        perimeter: f64,
        seed: u64,
        budget: usize,
        vertices: Vec<[f64; 2]>,
        objective: f64,
        trace: TraceOut,
    }
    art.json(
        "loop_opt.json",
        &LoopOut {
            schema: 1,
            command: "loop-opt",
            n,
            perimeter: l,
            seed,
            budget: search.budget,
            vertices,
            objective,
            trace: TraceOut::from(&trace),
        },
    )?;
    Ok(Some(seed))
}

fn cmd_oracle_radial(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let nu = cfg.take_usize("oracle.nu")?.unwrap_or(3) as u8;
    let m_max = cfg.take_usize("oracle.m_max")?.unwrap_or(8);
    cfg.finish()?;

    let levels = radial_bound_states(&v, nu, m_max).map_err(numeric)?;
    let rows: Vec<Vec<Option<f64>>> = levels
        .iter()
        .map(|l| {
            vec![
                Some(l.channel as f64),
                Some(l.multiplicity as f64),
                Some(l.kappa),
                Some(l.eps),
            ]
        })
        .collect();
    art.csv("oracle_radial.csv", "channel,multiplicity,kappa,eps", &rows)?;

    #[derive(Serialize)]
    struct LevelOut {
        channel: usize,
        multiplicity: usize,
        kappa: f64,
        eps: f64,
    }
    #[derive(Serialize)]
    struct RadialOut {
        schema: u32,
        command: &'static str,
        nu: u8,
        m_max: usize,
        levels: Vec<LevelOut>,
        eigenvalues_with_multiplicity: Vec<f64>,
    }
    art.json(
        "oracle_radial.json",
        &RadialOut {
            schema: 1,
            command: "oracle radial",
            nu,
            m_max,
            levels: levels
                .iter()
                .map(|l| LevelOut {
                    channel: l.channel,
                    multiplicity: l.multiplicity,
                    kappa: l.kappa,
                    eps: l.eps,
                })
                .collect(),
            eigenvalues_with_multiplicity: wellbound::oracles::expand_levels(&levels),
        },
    )?;
    Ok(flags.seed)
}

fn cmd_oracle_point(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let nu = cfg.take_usize("oracle.nu")?.unwrap_or(3) as u8;
    let alpha = cfg.require_f64("oracle.alpha")?;
    let centers = triples(&cfg.require_list("oracle.centers")?, "oracle.centers")?;
    cfg.finish()?;

    let sys = PointInteractionSystem::new(nu, alpha, centers.clone())
        .map_err(|e| ConfigError(format!("oracle: {e}")))?;
    let eigenvalues = point_spectrum(&sys).map_err(numeric)?;
    let rows: Vec<Vec<Option<f64>>> = eigenvalues
        .iter()
        .enumerate()
        .map(|(i, e)| vec![Some(i as f64), Some(*e)])
        .collect();
    art.csv("oracle_point.csv", "index,eps", &rows)?;

    #[derive(Serialize)]
    struct PointOut {
        schema: u32,
        command: &'static str,
        nu: u8,
        alpha: f64,
        centers: Vec<[f64; 3]>,
        eigenvalues: Vec<f64>,
    }
    art.json(
        "oracle_point.json",
        &PointOut {
            schema: 1,
            command: "oracle point",
            nu,
            alpha,
            centers,
            eigenvalues,
        },
    )?;
    Ok(flags.seed)
}

fn cmd_shrink(cfg: &mut Config, flags: &Flags, art: &mut Artifacts) -> Result<Option<u64>, Failure> {
    let v = build_potential(cfg)?;
    let mu_prime0 = cfg.take_f64("shrink.mu_prime0")?.unwrap_or(1.0);
    let eps_list = cfg
        .take_list("shrink.eps_list")?
        .unwrap_or_else(|| vec![0.4, 0.2, 0.1]);
    let centers = match cfg.take_list("shrink.centers")? {
        Some(flat) => triples(&flat, "shrink.centers")?,
        None => vec![[0.0; 3]],
    };
    let (opts, tol) = build_solver(cfg, 3, flags.tol)?;
    cfg.finish()?;

    // the array's ball radius is the largest scaled well, which the strictly
    // descending eps_list puts first
    let rho_max = eps_list.first().copied().unwrap_or(1.0) * v.rho;
    let y = WellArray::new(3, rho_max, centers, None, "shrink")
        .map_err(|e| ConfigError(format!("shrink: {e}")))?;
    let rows = shrink_convergence(&v, &y, mu_prime0, &eps_list, tol, &opts).map_err(numeric)?;

    let csv_rows: Vec<Vec<Option<f64>>> = rows
        .iter()
        .map(|r| vec![Some(r.eps_scale), r.e_regular, r.e_point, r.abs_diff])
        .collect();
    art.csv("shrink.csv", "eps,e_regular,e_point,abs_diff", &csv_rows)?;

    let defect = resonance_defect(&v).map_err(numeric)?;
    let overlap = resonance_overlap_sq(&v).map_err(numeric)?;
    #[derive(Serialize)]
    struct ShrinkRowOut {
        eps: f64,
        e_regular: Option<f64>,
        e_point: Option<f64>,
        abs_diff: Option<f64>,
    }
    #[derive(Serialize)]
    struct ShrinkOut {
        schema: u32,
        command: &'static str,
        mu_prime0: f64,
        resonance_defect: f64,
        overlap_sq: f64,
        alpha: f64,
        n_centers: usize,
        rows: Vec<ShrinkRowOut>,
    }
    art.json(
        "shrink.json",
        &ShrinkOut {
            schema: 1,
            command: "converge-shrink",
            mu_prime0,
            resonance_defect: defect,
            overlap_sq: overlap,
            alpha: -mu_prime0 / overlap,
            n_centers: y.n(),
            rows: rows
                .iter()
                .map(|r| ShrinkRowOut {
                    eps: r.eps_scale,
                    e_regular: r.e_regular,
                    e_point: r.e_point,
                    abs_diff: r.abs_diff,
                })
                .collect(),
        },
    )?;
    Ok(flags.seed)
}
