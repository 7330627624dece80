//! Independent reference solvers used to validate the quadrature pipeline:
//! radial ODE shooting for single-well spectra, the point-interaction matrix
//! model for arrays of zero-range wells, and the shrinking-well convergence
//! harness connecting the two.
//!
//! Nothing here shares numerics with the Birman-Schwinger assembly: shooting
//! integrates the reduced radial equation with a fixed-mesh RK4 and matches
//! log-derivatives against modified Bessel tails, and the point model reduces
//! to dense eigenvalue problems of size `N`.

use nalgebra::DMatrix;

use crate::bs_solver::{ground_state, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{dist, WellArray};
use crate::kernels::{green_raw, kh_scaled_ladder, kn_scaled_ladder, EULER_GAMMA};
use crate::potentials::RadialPotential;

/// One bound level of a single radial well.
#[derive(Clone, Debug)]
pub struct RadialLevel {
    /// Energy `-kappa^2`.
    pub eps: f64,
    /// Decay rate of the level.
    pub kappa: f64,
    /// Angular channel (`m` in 2D, `l` in 3D).
    pub channel: usize,
    /// Degeneracy: 1 for the lowest channel, 2 per `m >= 1` in 2D, `2l + 1`
    /// in 3D.
    pub multiplicity: usize,
}

/// Flatten levels into an ascending energy list with each level repeated by
/// its multiplicity.
pub fn expand_levels(levels: &[RadialLevel]) -> Vec<f64> {
    let mut out = Vec::new();
    for level in levels {
        for _ in 0..level.multiplicity {
            out.push(level.eps);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Integrate the reduced radial factor `w` with `w'' + (c/r) w' =
/// (kappa^2 - V(r)) w`, `w(0) = 1`, `w'(0) = 0`, to `r = rho` on an `n`-step
/// mesh; returns `(w(rho), w'(rho))`. The first mesh point is seeded from the
/// regular series `w = 1 + w''(0) r^2 / 2` (consistent with the O(h^4)
/// global error of the integrator).
fn shoot_reduced(v: &RadialPotential, c: f64, kappa: f64, n: usize) -> (f64, f64) {
    let rho = v.rho;
    let h = rho / n as f64;
    let k2 = kappa * kappa;
    let q0 = (k2 - v.effective(0.0)) / (c + 1.0);
    let mut r = h;
    let mut w = 1.0 + 0.5 * q0 * h * h;
    let mut wp = q0 * h;
    let f = |r: f64, w: f64, wp: f64| -> (f64, f64) {
        ((wp), (k2 - v.effective(r)) * w - c / r * wp)
    };
    for _ in 1..n {
        let (k1w, k1p) = f(r, w, wp);
        let (k2w, k2p) = f(r + 0.5 * h, w + 0.5 * h * k1w, wp + 0.5 * h * k1p);
        let (k3w, k3p) = f(r + 0.5 * h, w + 0.5 * h * k2w, wp + 0.5 * h * k2p);
        let (k4w, k4p) = f(r + h, w + h * k3w, wp + h * k3p);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        wp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        r += h;
    }
    (w, wp)
}

/// Matching determinant whose zeros in `kappa` are the bound states of the
/// given angular channel: interior (shooting) solution Wronskian against the
/// decaying Bessel tail, with the tail scaled by `e^(kappa rho)` so the
/// expression never underflows. Pole-free, unlike a log-derivative mismatch.
fn matching_value(v: &RadialPotential, nu: u8, channel: usize, kappa: f64, n: usize) -> f64 {
    let rho = v.rho;
    let x = kappa * rho;
    match nu {
        2 => {
            let m = channel;
            let c = 2.0 * m as f64 + 1.0;
            let (w, wp) = shoot_reduced(v, c, kappa, n);
            let lad = kn_scaled_ladder(m.max(1), x);
            let (km_lo, km, km_hi) = if m == 0 {
                (lad[1], lad[0], lad[1])
            } else {
                (lad[m - 1], lad[m], lad[m + 1])
            };
            let a = m as f64 * w / rho + wp;
            // K_m'(x) = -(K_{m-1} + K_{m+1}) / 2
            a * km + w * kappa * 0.5 * (km_lo + km_hi)
        }
        _ => {
            let l = channel;
            let c = 2.0 * (l as f64 + 1.0);
            let (w, wp) = shoot_reduced(v, c, kappa, n);
            let lad = kh_scaled_ladder(l, x);
            let (k_lo, k_mid, k_hi) = (lad[l], lad[l + 1], lad[l + 2]);
            let a = (l as f64 + 1.0) * w / rho + wp;
            // exterior reduced solution sqrt(r) K_{l+1/2}(kappa r)
            a * k_mid - w * (k_mid / (2.0 * rho) - kappa * 0.5 * (k_lo + k_hi))
        }
    }
}

/// Bisect a sign change of the matching determinant at fixed mesh size.
fn bisect_matching(
    v: &RadialPotential,
    nu: u8,
    channel: usize,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    n: usize,
) -> f64 {
    let mut s_lo = f_lo.signum();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let f = matching_value(v, nu, channel, mid, n);
        if f == 0.0 {
            return mid;
        }
        if f.signum() == s_lo {
            lo = mid;
            s_lo = f.signum();
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All channel roots at one mesh size, from sign changes over a geometric
/// `kappa` grid.
fn channel_roots(v: &RadialPotential, nu: u8, channel: usize, kappa_max: f64, n: usize) -> Vec<f64> {
    let lo = kappa_max * 1e-9;
    let points = 700usize;
    let ratio = (kappa_max / lo).powf(1.0 / (points as f64 - 1.0));
    let mut roots = Vec::new();
    let mut prev_k = lo;
    let mut prev_f = matching_value(v, nu, channel, prev_k, n);
    let mut k = lo;
    for _ in 1..points {
        k *= ratio;
        let f = matching_value(v, nu, channel, k, n);
        if prev_f == 0.0 {
            roots.push(prev_k);
        } else if f != 0.0 && f.signum() != prev_f.signum() {
            roots.push(bisect_matching(v, nu, channel, prev_k, k, prev_f, n));
        }
        prev_k = k;
        prev_f = f;
    }
    roots
}

/// Bound states of a single radial well by shooting, over angular channels
/// `0..=m_max`, merged ascending in energy with multiplicities. The mesh is
/// doubled until every energy is stable to 1e-10 (absolute, relative for
/// large values).
pub fn radial_bound_states(
    v: &RadialPotential,
    nu: u8,
    m_max: usize,
) -> Result<Vec<RadialLevel>> {
    if nu != 2 && nu != 3 {
        return Err(Error::Domain(format!("dimension must be 2 or 3, got {nu}")));
    }
    if m_max > 24 {
        return Err(Error::TooLarge(format!(
            "angular channel cap {m_max} is unreasonably large"
        )));
    }
    let vmax = v.max_abs();
    if vmax == 0.0 {
        return Ok(Vec::new());
    }
    // bound states satisfy kappa^2 <= max V
    let kappa_max = vmax.sqrt() * (1.0 - 1e-12);
    let mut levels = Vec::new();
    for channel in 0..=m_max {
        let mut n = 256usize;
        let mut roots = channel_roots(v, nu, channel, kappa_max, n);
        loop {
            let finer = channel_roots(v, nu, channel, kappa_max, 2 * n);
            let stable = roots.len() == finer.len()
                && roots.iter().zip(&finer).all(|(a, b)| {
                    let (ea, eb) = (a * a, b * b);
                    (ea - eb).abs() <= 1e-10 * ea.abs().max(1.0)
                });
            roots = finer;
            n *= 2;
            if stable || n >= 1 << 16 {
                break;
            }
        }
        let multiplicity = match nu {
            2 => {
                if channel == 0 {
                    1
                } else {
                    2
                }
            }
            _ => 2 * channel + 1,
        };
        for kappa in roots {
            levels.push(RadialLevel {
                eps: -kappa * kappa,
                kappa,
                channel,
                multiplicity,
            });
        }
    }
    levels.sort_by(|a, b| a.eps.partial_cmp(&b.eps).unwrap());
    Ok(levels)
}

/// Array of identical zero-range interactions: strength `alpha` at each
/// center.
#[derive(Clone, Debug)]
pub struct PointInteractionSystem {
    pub nu: u8,
    pub alpha: f64,
    pub centers: Vec<[f64; 3]>,
}

impl PointInteractionSystem {
    pub fn new(nu: u8, alpha: f64, centers: Vec<[f64; 3]>) -> Result<Self> {
        if nu != 2 && nu != 3 {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {nu}")));
        }
        if centers.is_empty() {
            return Err(Error::Invalid("need at least one center".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        for i in 0..centers.len() {
            for j in (i + 1)..centers.len() {
                if dist(&centers[i], &centers[j]) == 0.0 {
                    return Err(Error::Overlap {
                        i,
                        j,
                        dist: 0.0,
                        min_dist: f64::MIN_POSITIVE,
                    });
                }
            }
        }
        Ok(Self { nu, alpha, centers })
    }

    fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.centers.len() {
            for j in (i + 1)..self.centers.len() {
                best = best.min(dist(&self.centers[i], &self.centers[j]));
            }
        }
        best
    }
}

/// The `N x N` coupling matrix whose kernel signals an eigenvalue: diagonal
/// `alpha + kappa / (4 pi)` in 3D and `alpha - (ln(kappa / 2) + gamma) / (2 pi)`
/// in 2D, off-diagonal minus the free kernel between the centers.
fn gamma_matrix(sys: &PointInteractionSystem, kappa: f64) -> DMatrix<f64> {
    let n = sys.centers.len();
    let diag = match sys.nu {
        2 => sys.alpha - ((kappa / 2.0).ln() + EULER_GAMMA) / (2.0 * std::f64::consts::PI),
        _ => sys.alpha + kappa / (4.0 * std::f64::consts::PI),
    };
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = diag;
        for j in (i + 1)..n {
            let v = -green_raw(sys.nu, kappa, dist(&sys.centers[i], &sys.centers[j]));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = nalgebra::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Discrete spectrum of the point-interaction array: energies `-kappa^2` at
/// every `kappa` where the coupling matrix is singular. Each of the `N`
/// ordered eigenvalue branches is scanned for sign changes over a geometric
/// grid and refined by bisection, so degenerate roots keep their
/// multiplicity.
pub fn point_spectrum(sys: &PointInteractionSystem) -> Result<Vec<f64>> {
    let n = sys.centers.len();
    let d_min = if n > 1 { sys.min_distance() } else { 1.0 };
    let four_pi = 4.0 * std::f64::consts::PI;
    let (lo, hi) = match sys.nu {
        2 => {
            // single-center scale, widened generously to absorb coupling
            let kc = 2.0 * (-2.0 * std::f64::consts::PI * sys.alpha - EULER_GAMMA).exp();
            let lo = (kc * 1e-8).min(1e-6 / d_min).max(1e-300);
            let hi = (kc * 1e8).max(1e4 / d_min);
            (lo, hi)
        }
        _ => {
            let hi = (four_pi * (-sys.alpha).max(0.0)) * 1.5 + (n as f64 + 1.0) / d_min;
            (hi * 1e-10, hi)
        }
    };
    let points = 1200usize;
    let ratio = (hi / lo).powf(1.0 / (points as f64 - 1.0));
    let mut prev_k = lo;
    let mut prev = sorted_eigs(&gamma_matrix(sys, prev_k));
    let mut kappas: Vec<f64> = Vec::new();
    let mut k = lo;
    for _ in 1..points {
        k *= ratio;
        let cur = sorted_eigs(&gamma_matrix(sys, k));
        for b in 0..n {
            if prev[b] == 0.0 {
                kappas.push(prev_k);
            } else if cur[b] != 0.0 && cur[b].signum() != prev[b].signum() {
                // bisect branch b on [prev_k, k]
                let (mut a, mut c) = (prev_k, k);
                let mut sa = prev[b].signum();
                for _ in 0..100 {
                    let mid = 0.5 * (a + c);
                    let v = sorted_eigs(&gamma_matrix(sys, mid))[b];
                    if v == 0.0 {
                        a = mid;
                        c = mid;
                        break;
                    }
                    if v.signum() == sa {
                        a = mid;
                        sa = v.signum();
                    } else {
                        c = mid;
                    }
                    if c - a <= 1e-14 * c {
                        break;
                    }
                }
                kappas.push(0.5 * (a + c));
            }
        }
        prev_k = k;
        prev = cur;
    }
    let mut eps: Vec<f64> = kappas.iter().map(|k| -k * k).collect();
    eps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eps)
}

/// Zero-energy reduced radial solution for the lowest 3D channel:
/// `u'' = -V u`, `u(0) = 0`, `u'(0) = 1`, integrated on an `n`-step mesh.
/// Returns `(u, u', samples of u on the mesh)`.
fn zero_energy_solution(v: &RadialPotential, n: usize) -> (f64, f64, Vec<f64>) {
    let rho = v.rho;
    let h = rho / n as f64;
    let mut u = 0.0f64;
    let mut up = 1.0f64;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(0.0);
    let f = |r: f64, u: f64| -v.effective(r) * u;
    let mut r = 0.0;
    for _ in 0..n {
        let k1u = up;
        let k1p = f(r, u);
        let k2u = up + 0.5 * h * k1p;
        let k2p = f(r + 0.5 * h, u + 0.5 * h * k1u);
        let k3u = up + 0.5 * h * k2p;
        let k3p = f(r + 0.5 * h, u + 0.5 * h * k2u);
        let k4u = up + h * k3p;
        let k4p = f(r + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        r += h;
        samples.push(u);
    }
    (u, up, samples)
}

fn composite_simpson(values: &[f64], h: f64) -> f64 {
    // values on an even-count mesh (odd number of points)
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0);
    let mut s = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Scale-free defect of the zero-energy resonance condition `u'(rho) = 0`;
/// zero means the well supports a zero-energy resonance exactly.
pub fn resonance_defect(v: &RadialPotential) -> Result<f64> {
    let mut n = 512usize;
    let mut prev = f64::INFINITY;
    loop {
        let (u, up, _) = zero_energy_solution(v, n);
        let defect = (up * v.rho / u).abs();
        if (defect - prev).abs() <= 1e-10 * (1.0 + defect) || n >= 1 << 16 {
            return Ok(defect);
        }
        prev = defect;
        n *= 2;
    }
}

/// Squared overlap `|(V^(1/2), f)|^2` of the normalized zero-energy resonance
/// function with `V^(1/2)`, the quantity that converts the depth slope
/// `mu'(0)` into the limiting point-interaction strength. Flat wells use the
/// closed form `32 rho / pi`; other profiles integrate the numerically
/// continued zero-energy solution.
pub fn resonance_overlap_sq(v: &RadialPotential) -> Result<f64> {
    if v.flat_depth().is_some() {
        return Ok(32.0 * v.rho / std::f64::consts::PI);
    }
    let n = 4096usize;
    let h = v.rho / n as f64;
    let (_, _, u) = zero_energy_solution(v, n);
    let vu_r: Vec<f64> = (0..=n)
        .map(|i| {
            let r = h * i as f64;
            v.effective(r) * u[i] * r
        })
        .collect();
    let vu2: Vec<f64> = (0..=n)
        .map(|i| {
            let r = h * i as f64;
            v.effective(r) * u[i] * u[i]
        })
        .collect();
    let four_pi = 4.0 * std::f64::consts::PI;
    let num = four_pi * composite_simpson(&vu_r, h);
    let den = four_pi * composite_simpson(&vu2, h);
    if den <= 0.0 {
        return Err(Error::Invalid("degenerate zero-energy solution".into()));
    }
    Ok(num * num / den)
}

/// One row of the shrinking-well comparison: energies may be absent when the
/// corresponding model sits at the zero-energy borderline.
#[derive(Clone, Debug)]
pub struct ShrinkRow {
    pub eps_scale: f64,
    pub e_regular: Option<f64>,
    pub e_point: Option<f64>,
    pub abs_diff: Option<f64>,
}

/// Shrinking-well convergence harness: for each scale in `eps_list`
/// (descending), solve the array of scaled wells with the quadrature solver
/// and compare its ground state against the point-interaction array with
/// strength `alpha = -mu'(0) / |(V^(1/2), f)|^2`.
pub fn shrink_convergence(
    v: &RadialPotential,
    y: &WellArray,
    mu_prime0: f64,
    eps_list: &[f64],
    tol: f64,
    opts: &SolverOptions,
) -> Result<Vec<ShrinkRow>> {
    if y.nu != 3 {
        return Err(Error::Invalid(
            "the shrinking-well limit is implemented for three dimensions".into(),
        ));
    }
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("eps_list must be strictly descending".into()));
    }
    let defect = resonance_defect(v)?;
    if defect > 0.01 {
        return Err(Error::Invalid(format!(
            "well is not at a zero-energy resonance (defect {defect:.3e} > 1e-2); \
             adjust the depth"
        )));
    }
    let overlap = resonance_overlap_sq(v)?;
    let alpha = -mu_prime0 / overlap;
    let point_sys = PointInteractionSystem::new(3, alpha, y.centers.clone())?;
    let point_eps = point_spectrum(&point_sys)?;
    let e_point = point_eps.first().copied();

    let mut rows = Vec::with_capacity(eps_list.len());
    for &scale in eps_list {
        let scaled = v.scaled_well(scale, mu_prime0)?;
        let mut local = opts.clone();
        if local.kappa_hint.is_none() {
            if let Some(ep) = e_point {
                local.kappa_hint = Some((-ep).sqrt());
            }
        }
        let res = ground_state(&scaled, y, tol, &local)?;
        let e_regular = res.eigenvalues.first().copied();
        let abs_diff = match (e_regular, e_point) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        rows.push(ShrinkRow {
            eps_scale: scale,
            e_regular,
            e_point,
            abs_diff,
        });
    }
    Ok(rows)
}
