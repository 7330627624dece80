//! Configuration searches over well arrangements: angular distributions on a
//! circle, unit-vector tuples on a sphere, and planar polygon loops, all
//! maximizing the ground-state energy `eps_1` of the array.
//!
//! Every objective evaluation is a full Birman-Schwinger root-find, so the
//! searches are gradient-free (Nelder-Mead simplex with restarts), warm-start
//! each root-find at the previous decay rate, and cache circle objectives
//! under the relabeling symmetry of the gap sequence.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bs_solver::{ground_state, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{circle_array, loop_polygon, sphere_config, CircleConfig, LoopShape};
use crate::potentials::RadialPotential;

/// Search controls shared by all maximizers.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    /// Cap on solver evaluations across all restarts.
    pub budget: usize,
    /// Random restarts in addition to the preset start.
    pub restarts: usize,
    pub seed: u64,
    /// Objective tolerance: spread below which a simplex is considered
    /// converged, and the margin for "preset beaten" verdicts.
    pub tol: f64,
}

impl SearchSpec {
    pub fn new(budget: usize, restarts: usize, seed: u64, tol: f64) -> Result<Self> {
        if budget < 1 {
            return Err(Error::Invalid("search budget must be at least 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain(format!(
                "search tolerance must be positive, got {tol}"
            )));
        }
        Ok(Self {
            budget,
            restarts,
            seed,
            tol,
        })
    }
}

/// Bookkeeping of one search run.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    /// Solver evaluations actually performed (cache hits excluded).
    pub evaluations: usize,
    /// `(evaluation index, objective)` each time the incumbent improved;
    /// the objective column is nondecreasing.
    pub incumbents: Vec<(usize, f64)>,
    /// Objective of the symmetric/equilateral preset, when one exists.
    pub preset_objective: Option<f64>,
    /// Whether the search found something better than the preset by more
    /// than the tolerance. A probe outcome, never an assertion.
    pub preset_beaten: Option<bool>,
    pub notes: Vec<String>,
}

/// Nelder-Mead on `f` (minimization), starting from `start` with the given
/// coordinate step. The closure returns `None` when its evaluation budget is
/// exhausted, which unwinds the search immediately; invalid points are
/// signaled by `f64::INFINITY`.
fn nelder_mead<F: FnMut(&[f64]) -> Option<f64>>(
    mut f: F,
    start: &[f64],
    step: f64,
    ftol: f64,
) {
    let d = start.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(d + 1);
    pts.push(start.to_vec());
    match f(start) {
        Some(v) => vals.push(v),
        None => return,
    }
    for i in 0..d {
        let mut p = start.to_vec();
        p[i] += step;
        match f(&p) {
            Some(v) => {
                pts.push(p);
                vals.push(v);
            }
            None => return,
        }
    }
    let order_of = |vals: &[f64]| {
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        order
    };
    for _ in 0..10_000 {
        let order = order_of(&vals);
        let pts2: Vec<Vec<f64>> = order.iter().map(|&i| pts[i].clone()).collect();
        let vals2: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        pts = pts2;
        vals = vals2;
        if vals[d].is_finite() && vals[d] - vals[0] < ftol {
            return;
        }
        let mut centroid = vec![0.0; d];
        for p in &pts[..d] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / d as f64;
            }
        }
        let shifted = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[d])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = shifted(1.0);
        let Some(fr) = f(&xr) else { return };
        if fr < vals[0] {
            let xe = shifted(2.0);
            let Some(fe) = f(&xe) else { return };
            if fe < fr {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
        } else if fr < vals[d - 1] {
            pts[d] = xr;
            vals[d] = fr;
        } else {
            let (xc, bar) = if fr < vals[d] {
                (shifted(0.5), fr)
            } else {
                (shifted(-0.5), vals[d])
            };
            let Some(fc) = f(&xc) else { return };
            if fc < bar {
                pts[d] = xc;
                vals[d] = fc;
            } else {
                // shrink toward the best point
                for i in 1..=d {
                    let p: Vec<f64> = pts[0]
                        .iter()
                        .zip(&pts[i])
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    match f(&p) {
                        Some(v) => {
                            pts[i] = p;
                            vals[i] = v;
                        }
                        None => return,
                    }
                }
            }
        }
    }
}

/// Ground-state energy of the realized circle arrangement; no bound state
/// reports as 0 (the threshold), keeping configurations comparable.
pub fn circle_objective(
    config: &CircleConfig,
    v: &RadialPotential,
    nu: u8,
    tol: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    let y = circle_array(config, v.rho, nu)?;
    let res = ground_state(v, &y, tol, opts)?;
    Ok(res.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Ground-state energy of wells at the given unit directions scaled to the
/// sphere of the given radius.
pub fn sphere_objective(
    directions: &[[f64; 3]],
    radius: f64,
    v: &RadialPotential,
    tol: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    let y = sphere_config(radius, directions, v.rho)?;
    let res = ground_state(v, &y, tol, opts)?;
    Ok(res.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Ground-state energy of `n` wells equidistant in arclength around a loop
/// shape rescaled to perimeter `l`.
pub fn loop_objective(
    shape: &LoopShape,
    n: usize,
    l: f64,
    v: &RadialPotential,
    nu: u8,
    tol: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    let y = loop_polygon(n, l, shape, v.rho, nu)?;
    let res = ground_state(v, &y, tol, opts)?;
    Ok(res.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Canonical key of a gap sequence under rotation and reversal, quantized at
/// 1e-12 radians: relabeling-equivalent circle configurations share a key.
fn necklace_key(gaps: &[f64]) -> Vec<i64> {
    let q: Vec<i64> = gaps.iter().map(|g| (g * 1e12).round() as i64).collect();
    let n = q.len();
    let mut best: Option<Vec<i64>> = None;
    let mut consider = |candidate: Vec<i64>| {
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    };
    let rev: Vec<i64> = q.iter().rev().copied().collect();
    for s in 0..n {
        let mut rot: Vec<i64> = q[s..].to_vec();
        rot.extend_from_slice(&q[..s]);
        consider(rot);
        let mut rrot: Vec<i64> = rev[s..].to_vec();
        rrot.extend_from_slice(&rev[..s]);
        consider(rrot);
    }
    best.unwrap()
}

/// Positive gaps summing to an exact full turn from unconstrained logits
/// (the first logit is pinned to zero to remove the scale redundancy).
fn gaps_from_logits(x: &[f64]) -> Vec<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut logits = Vec::with_capacity(x.len() + 1);
    logits.push(0.0);
    logits.extend(x.iter().map(|t| t.clamp(-30.0, 30.0)));
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut gaps: Vec<f64> = weights.iter().map(|w| two_pi * w / total).collect();
    let head: f64 = gaps[..gaps.len() - 1].iter().sum();
    let n = gaps.len();
    gaps[n - 1] = two_pi - head;
    gaps
}

/// Shared state of one maximization run: counts solver evaluations against
/// the budget, tracks the incumbent, and warm-starts each root-find.
struct Evaluator<'a> {
    v: &'a RadialPotential,
    tol: f64,
    opts: SolverOptions,
    remaining: usize,
    evaluations: usize,
    hint: Option<f64>,
    best: f64,
    best_x: Vec<f64>,
    incumbents: Vec<(usize, f64)>,
}

impl<'a> Evaluator<'a> {
    fn new(v: &'a RadialPotential, opts: &SolverOptions, tol: f64, budget: usize) -> Self {
        Self {
            v,
            tol,
            opts: opts.clone(),
            remaining: budget,
            evaluations: 0,
            hint: None,
            best: f64::NEG_INFINITY,
            best_x: Vec::new(),
            incumbents: Vec::new(),
        }
    }

    /// Run the solver on an already validated array; `x` is the parameter
    /// vector to remember if this becomes the incumbent. Returns the
    /// minimization value `-eps_1`, or `None` when the budget is exhausted.
    fn solve(&mut self, y: &crate::geometry::WellArray, x: &[f64]) -> Option<f64> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        self.evaluations += 1;
        let mut opts = self.opts.clone();
        if opts.kappa_hint.is_none() {
            opts.kappa_hint = self.hint;
        }
        let eps = match ground_state(self.v, y, self.tol, &opts) {
            Ok(res) => {
                if let Some(&kappa) = res.kappa_values.first() {
                    self.hint = Some(kappa);
                    res.eigenvalues[0]
                } else {
                    0.0
                }
            }
            Err(_) => return Some(f64::INFINITY),
        };
        if eps > self.best {
            self.best = eps;
            self.best_x = x.to_vec();
            self.incumbents.push((self.evaluations, eps));
        }
        Some(-eps)
    }
}

/// Search the (N-1)-dimensional simplex of angular gaps for the arrangement
/// of `n` wells on a circle of the given radius that maximizes the ground
/// state. Restarts from the symmetric arrangement first, then from random
/// valid configurations.
pub fn maximize_circle(
    n: usize,
    radius: f64,
    v: &RadialPotential,
    nu: u8,
    search: &SearchSpec,
    opts: &SolverOptions,
) -> Result<(CircleConfig, f64, Trace)> {
    let symmetric = CircleConfig::symmetric(n, radius)?;
    // fail before searching when even the symmetric arrangement overlaps
    circle_array(&symmetric, v.rho, nu)?;

    let mut cache: HashMap<Vec<i64>, f64> = HashMap::new();
    // Nearby arrangements differ by energies far below the search tolerance,
    // so root-finding runs much tighter than the simplex stopping rule.
    let mut ev = Evaluator::new(v, opts, search.tol.min(1e-9), search.budget);
    let mut eval_logits = |ev: &mut Evaluator, x: &[f64]| -> Option<f64> {
        let gaps = gaps_from_logits(x);
        let key = necklace_key(&gaps);
        if let Some(&eps) = cache.get(&key) {
            return Some(-eps);
        }
        let Ok(config) = CircleConfig::new(radius, gaps) else {
            return Some(f64::INFINITY);
        };
        let Ok(y) = circle_array(&config, ev.v.rho, nu) else {
            return Some(f64::INFINITY);
        };
        let out = ev.solve(&y, x)?;
        if out.is_finite() {
            cache.insert(key, -out);
        }
        Some(out)
    };

    let d = n - 1;
    let zero = vec![0.0; d];
    let preset = eval_logits(&mut ev, &zero).map(|f| -f);

    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut starts: Vec<Vec<f64>> = vec![zero];
    for _ in 0..search.restarts {
        for _attempt in 0..200 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.9..0.9)).collect();
            let gaps = gaps_from_logits(&x);
            let valid = CircleConfig::new(radius, gaps)
                .and_then(|c| circle_array(&c, v.rho, nu))
                .is_ok();
            if valid {
                starts.push(x);
                break;
            }
        }
    }
    for start in &starts {
        nelder_mead(
            |x| eval_logits(&mut ev, x),
            start,
            0.25,
            search.tol,
        );
    }

    if ev.best_x.is_empty() {
        return Err(Error::NoConvergence(
            "circle search found no valid configuration".into(),
        ));
    }
    let best_gaps = gaps_from_logits(&ev.best_x);
    let config = CircleConfig::new(radius, best_gaps)?;
    let beaten = preset.map(|p| ev.best > p + search.tol);
    let trace = Trace {
        evaluations: ev.evaluations,
        incumbents: ev.incumbents,
        preset_objective: preset,
        preset_beaten: beaten,
        notes: vec![format!("distinct configurations evaluated: {}", cache.len())],
    };
    Ok((config, ev.best, trace))
}

/// Outcome of the random-perturbation check around the symmetric circle
/// arrangement: `margin` entries are `eps_1(symmetric) - eps_1(perturbed)`,
/// positive when the symmetric arrangement wins.
#[derive(Clone, Debug)]
pub struct PerturbationReport {
    pub trials: usize,
    pub strict_wins: usize,
    pub min_margin: f64,
    pub median_margin: f64,
    pub symmetric_eps1: f64,
    /// Perturbed gap sequences that did NOT lose to the symmetric
    /// arrangement, with their (nonpositive) margins.
    pub failures: Vec<(Vec<f64>, f64)>,
}

/// Draw random valid non-symmetric gap perturbations of the given relative
/// magnitude and compare each against the symmetric arrangement.
pub fn perturbation_test(
    n: usize,
    radius: f64,
    v: &RadialPotential,
    nu: u8,
    trials: usize,
    magnitude: f64,
    seed: u64,
    tol: f64,
    opts: &SolverOptions,
) -> Result<PerturbationReport> {
    if trials < 1 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    if !(magnitude > 0.0) || !magnitude.is_finite() {
        return Err(Error::Domain(format!(
            "perturbation magnitude must be positive, got {magnitude}"
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let symmetric = CircleConfig::symmetric(n, radius)?;
    let sym_eps = circle_objective(&symmetric, v, nu, tol, opts)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margins: Vec<f64> = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    let mut attempts = 0usize;
    let mut opts_hinted = opts.clone();
    while margins.len() < trials {
        attempts += 1;
        if attempts > 200 * trials {
            return Err(Error::NoConvergence(
                "could not draw enough valid perturbed configurations".into(),
            ));
        }
        let raw: Vec<f64> = (0..n)
            .map(|_| (two_pi / n as f64) * (1.0 + magnitude * rng.gen_range(-1.0..1.0)))
            .collect();
        let total: f64 = raw.iter().sum();
        let mut gaps: Vec<f64> = raw.iter().map(|g| g * two_pi / total).collect();
        let head: f64 = gaps[..n - 1].iter().sum();
        gaps[n - 1] = two_pi - head;
        if gaps.iter().any(|&g| g <= 0.0) {
            continue;
        }
        // reject accidental symmetry: the comparison needs a genuine deformation
        let spread = gaps
            .iter()
            .map(|g| (g - two_pi / n as f64).abs())
            .fold(0.0f64, f64::max);
        if spread < 1e-9 {
            continue;
        }
        let Ok(config) = CircleConfig::new(radius, gaps.clone()) else {
            continue;
        };
        let Ok(eps) = circle_objective(&config, v, nu, tol, &opts_hinted) else {
            continue;
        };
        if opts_hinted.kappa_hint.is_none() && eps < 0.0 {
            opts_hinted.kappa_hint = Some((-eps).sqrt());
        }
        let margin = sym_eps - eps;
        if margin <= 0.0 {
            failures.push((gaps, margin));
        }
        margins.push(margin);
    }
    margins.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let strict_wins = margins.iter().filter(|&&m| m > 0.0).count();
    Ok(PerturbationReport {
        trials,
        strict_wins,
        min_margin: margins[0],
        median_margin: margins[trials / 2],
        symmetric_eps1: sym_eps,
        failures,
    })
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn rotate(axis: [f64; 3], angle: f64, p: [f64; 3]) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let k = axis;
    let kp = cross(k, p);
    let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    [
        p[0] * c + kp[0] * s + k[0] * kdp * (1.0 - c),
        p[1] * c + kp[1] * s + k[1] * kdp * (1.0 - c),
        p[2] * c + kp[2] * s + k[2] * kdp * (1.0 - c),
    ]
}

/// Frame-fixed parameters of a direction tuple: the first direction is
/// rotated to the pole and the second onto the zero meridian, leaving
/// `2N - 3` angles `[theta_2, theta_3, phi_3, ...]`.
fn sphere_params(dirs: &[[f64; 3]]) -> Vec<f64> {
    let mut work: Vec<[f64; 3]> = dirs.to_vec();
    let d1 = work[0];
    let axis = cross(d1, [0.0, 0.0, 1.0]);
    let s = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let c = d1[2];
    if s > 1e-12 {
        let u = [axis[0] / s, axis[1] / s, axis[2] / s];
        let ang = s.atan2(c);
        for p in work.iter_mut() {
            *p = rotate(u, ang, *p);
        }
    } else if c < 0.0 {
        for p in work.iter_mut() {
            *p = [p[0], -p[1], -p[2]];
        }
    }
    if work.len() > 1 {
        let phi2 = work[1][1].atan2(work[1][0]);
        if phi2.abs() > 1e-15 && (work[1][0] != 0.0 || work[1][1] != 0.0) {
            for p in work.iter_mut() {
                *p = rotate([0.0, 0.0, 1.0], -phi2, *p);
            }
        }
    }
    let mut params = Vec::with_capacity(2 * dirs.len());
    for (i, p) in work.iter().enumerate().skip(1) {
        let theta = p[2].clamp(-1.0, 1.0).acos();
        params.push(theta);
        if i >= 2 {
            params.push(p[1].atan2(p[0]));
        }
    }
    params
}

fn sphere_dirs(n: usize, params: &[f64]) -> Vec<[f64; 3]> {
    let mut dirs = Vec::with_capacity(n);
    dirs.push([0.0, 0.0, 1.0]);
    if n >= 2 {
        let t2 = params[0];
        dirs.push([t2.sin(), 0.0, t2.cos()]);
    }
    for i in 2..n {
        let theta = params[2 * i - 3];
        let phi = params[2 * i - 2];
        dirs.push([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ]);
    }
    dirs
}

fn sphere_preset_for(n: usize) -> Option<Vec<[f64; 3]>> {
    use crate::geometry::{sphere_preset, SpherePreset};
    let kind = match n {
        2 => SpherePreset::Antipodal,
        3 => SpherePreset::Triangle,
        4 => SpherePreset::Tetrahedron,
        6 => SpherePreset::Octahedron,
        12 => SpherePreset::Icosahedron,
        _ => return None,
    };
    Some(sphere_preset(kind))
}

/// Search direction tuples on the sphere of the given radius for the
/// arrangement maximizing the ground state. Restarts include the equilateral
/// preset when `n` has one; whether the preset survives is logged in the
/// trace, never asserted.
pub fn maximize_sphere(
    n: usize,
    radius: f64,
    v: &RadialPotential,
    search: &SearchSpec,
    opts: &SolverOptions,
) -> Result<(Vec<[f64; 3]>, f64, Trace)> {
    if n < 2 {
        return Err(Error::Invalid("need at least two wells on the sphere".into()));
    }
    let preset_dirs = sphere_preset_for(n);
    if let Some(dirs) = &preset_dirs {
        // infeasible packing surfaces before any search effort
        sphere_config(radius, dirs, v.rho)?;
    }
    let mut ev = Evaluator::new(v, opts, search.tol.min(1e-9), search.budget);
    let eval_params = |ev: &mut Evaluator, x: &[f64]| -> Option<f64> {
        let dirs = sphere_dirs(n, x);
        let Ok(y) = sphere_config(radius, &dirs, ev.v.rho) else {
            return Some(f64::INFINITY);
        };
        ev.solve(&y, x)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    let mut preset = None;
    if let Some(dirs) = &preset_dirs {
        let x = sphere_params(dirs);
        preset = eval_params(&mut ev, &x).map(|f| -f);
        starts.push(x);
    }
    let want = search.restarts + usize::from(preset_dirs.is_none());
    for _ in 0..want {
        for _attempt in 0..500 {
            let dirs: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                    let s = (1.0 - z * z).sqrt();
                    [s * phi.cos(), s * phi.sin(), z]
                })
                .collect();
            if sphere_config(radius, &dirs, v.rho).is_ok() {
                starts.push(sphere_params(&dirs));
                break;
            }
        }
    }
    if starts.is_empty() {
        return Err(Error::Invalid(format!(
            "no valid arrangement of {n} wells of radius {} fits on a sphere of radius {radius}",
            v.rho
        )));
    }
    for start in &starts {
        nelder_mead(|x| eval_params(&mut ev, x), start, 0.15, search.tol);
    }
    if ev.best_x.is_empty() {
        return Err(Error::NoConvergence(
            "sphere search found no valid configuration".into(),
        ));
    }
    let best_dirs = sphere_dirs(n, &ev.best_x);
    let beaten = preset.map(|p| ev.best > p + search.tol);
    let mut notes = Vec::new();
    match (preset, beaten) {
        (Some(p), Some(b)) => notes.push(format!(
            "preset objective {p:.8}; {}",
            if b { "BEATEN by the search" } else { "not beaten" }
        )),
        _ => notes.push("no preset for this count; exploratory record only".into()),
    }
    let trace = Trace {
        evaluations: ev.evaluations,
        incumbents: ev.incumbents,
        preset_objective: preset,
        preset_beaten: beaten,
        notes,
    };
    Ok((best_dirs, ev.best, trace))
}

/// Regular polygon in the search frame: first vertex at the origin, first
/// edge along +x, unit edge length.
fn regular_polygon_frame(n: usize) -> Vec<[f64; 2]> {
    let mut verts = Vec::with_capacity(n);
    let mut pos = [0.0f64, 0.0f64];
    let mut heading = 0.0f64;
    for _ in 0..n {
        verts.push(pos);
        pos = [pos[0] + heading.cos(), pos[1] + heading.sin()];
        heading += 2.0 * std::f64::consts::PI / n as f64;
    }
    verts
}

fn loop_vertices_from_params(n: usize, x: &[f64]) -> Vec<[f64; 2]> {
    let mut verts = Vec::with_capacity(n);
    verts.push([0.0, 0.0]);
    verts.push([1.0, 0.0]);
    for i in 0..n - 2 {
        verts.push([x[2 * i], x[2 * i + 1]]);
    }
    verts
}

/// Search planar `n`-gon loops of perimeter `l` (wells equidistant in
/// arclength, starting at the first vertex) for the shape maximizing the
/// ground state. The regular polygon is the preset start; the outcome of the
/// comparison is logged, never asserted.
pub fn maximize_loop(
    n: usize,
    l: f64,
    v: &RadialPotential,
    nu: u8,
    search: &SearchSpec,
    opts: &SolverOptions,
) -> Result<(Vec<[f64; 2]>, f64, Trace)> {
    if n < 3 {
        return Err(Error::Invalid(
            "a loop needs at least three wells; two collapse to a doubly covered segment".into(),
        ));
    }
    // fail early when even the regular loop cannot host the wells
    loop_polygon(n, l, &LoopShape::Regular { sides: n }, v.rho, nu)?;

    let mut ev = Evaluator::new(v, opts, search.tol.min(1e-9), search.budget);
    let eval_params = |ev: &mut Evaluator, x: &[f64]| -> Option<f64> {
        let verts = loop_vertices_from_params(n, x);
        let shape = LoopShape::Polygon { vertices: verts };
        let Ok(y) = loop_polygon(n, l, &shape, ev.v.rho, nu) else {
            return Some(f64::INFINITY);
        };
        ev.solve(&y, x)
    };

    let preset_frame = regular_polygon_frame(n);
    let preset_x: Vec<f64> = preset_frame[2..].iter().flat_map(|p| [p[0], p[1]]).collect();
    let preset = eval_params(&mut ev, &preset_x).map(|f| -f);

    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut starts = vec![preset_x.clone()];
    for _ in 0..search.restarts {
        for _attempt in 0..200 {
            let x: Vec<f64> = preset_x
                .iter()
                .map(|c| c + rng.gen_range(-0.4..0.4))
                .collect();
            let verts = loop_vertices_from_params(n, &x);
            if loop_polygon(n, l, &LoopShape::Polygon { vertices: verts }, v.rho, nu).is_ok() {
                starts.push(x);
                break;
            }
        }
    }
    for start in &starts {
        nelder_mead(|x| eval_params(&mut ev, x), start, 0.2, search.tol);
    }
    if ev.best_x.is_empty() {
        return Err(Error::NoConvergence(
            "loop search found no valid configuration".into(),
        ));
    }
    let frame_verts = loop_vertices_from_params(n, &ev.best_x);
    let mut perim = 0.0;
    for i in 0..n {
        let a = frame_verts[i];
        let b = frame_verts[(i + 1) % n];
        perim += ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    }
    let scale = l / perim;
    let polygon: Vec<[f64; 2]> = frame_verts
        .iter()
        .map(|p| [scale * p[0], scale * p[1]])
        .collect();
    let beaten = preset.map(|p| ev.best > p + search.tol);
    let mut notes = Vec::new();
    if let (Some(p), Some(b)) = (preset, beaten) {
        notes.push(format!(
            "regular-polygon objective {p:.8}; {}",
            if b { "BEATEN by the search" } else { "not beaten" }
        ));
    }
    let trace = Trace {
        evaluations: ev.evaluations,
        incumbents: ev.incumbents,
        preset_objective: preset,
        preset_beaten: beaten,
        notes,
    };
    Ok((polygon, ev.best, trace))
}
