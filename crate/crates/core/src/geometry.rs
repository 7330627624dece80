//! Well-center geometries: straight and bent chains, circle configurations,
//! closed loop polygons, and sphere arrangements, plus the chord-mean
//! diagnostic that quantifies how far a circle configuration sits from the
//! symmetric one.
//!
//! Points are stored as `[f64; 3]`; planar geometries put everything in the
//! `z = 0` plane so distance code is dimension-agnostic.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euclidean distance between two stored centers.
#[inline]
pub fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// An ordered family of well centers sharing one ball radius.
#[derive(Clone, Debug)]
pub struct WellArray {
    /// Ambient dimension, 2 or 3 (planar arrays keep `z = 0`).
    pub nu: u8,
    /// Ball radius of every well.
    pub rho: f64,
    /// Ordered centers.
    pub centers: Vec<[f64; 3]>,
    /// Nominal arclength spacing along the generating curve, when meaningful.
    pub spacing_a: Option<f64>,
    /// Geometry label for diagnostics and output files.
    pub tag: String,
}

impl WellArray {
    /// Build and validate: dimensions, planarity for `nu = 2`, spacing bound,
    /// and pairwise separation of all centers.
    pub fn new(
        nu: u8,
        rho: f64,
        centers: Vec<[f64; 3]>,
        spacing_a: Option<f64>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        if nu != 2 && nu != 3 {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {nu}")));
        }
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("ball radius must be positive, got {rho}")));
        }
        if centers.is_empty() {
            return Err(Error::Invalid("well array needs at least one center".into()));
        }
        if nu == 2 && centers.iter().any(|c| c[2] != 0.0) {
            return Err(Error::Invalid("planar arrays must keep z = 0".into()));
        }
        if let Some(a) = spacing_a {
            if a < 2.0 * rho {
                return Err(Error::Overlap {
                    i: 0,
                    j: 1,
                    dist: a,
                    min_dist: 2.0 * rho,
                });
            }
        }
        let arr = Self {
            nu,
            rho,
            centers,
            spacing_a,
            tag: tag.into(),
        };
        arr.validate()?;
        Ok(arr)
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        dist(&self.centers[i], &self.centers[j])
    }

    /// Check that no two balls overlap; on failure the error carries the
    /// closest offending pair and its distance.
    pub fn validate(&self) -> Result<()> {
        let min_dist = 2.0 * self.rho;
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..self.centers.len() {
            for j in (i + 1)..self.centers.len() {
                let d = self.distance(i, j);
                if d < min_dist && worst.map_or(true, |(_, _, w)| d < w) {
                    worst = Some((i, j, d));
                }
            }
        }
        match worst {
            Some((i, j, d)) => Err(Error::Overlap {
                i,
                j,
                dist: d,
                min_dist,
            }),
            None => Ok(()),
        }
    }

    /// Smallest pairwise center distance (infinity for a single well).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.centers.len() {
            for j in (i + 1)..self.centers.len() {
                best = best.min(self.distance(i, j));
            }
        }
        best
    }
}

/// Equidistant wells on a straight line with spacing `a`, centered on the
/// origin (integer offsets for odd `n`, half-integer for even `n`).
pub fn straight_chain(n: usize, a: f64, nu: u8, rho: f64) -> Result<WellArray> {
    if n == 0 {
        return Err(Error::Invalid("chain needs at least one well".into()));
    }
    if n > 1 && a < 2.0 * rho {
        return Err(Error::Overlap {
            i: 0,
            j: 1,
            dist: a,
            min_dist: 2.0 * rho,
        });
    }
    let mid = (n as f64 - 1.0) / 2.0;
    let centers = (0..n)
        .map(|i| [(i as f64 - mid) * a, 0.0, 0.0])
        .collect();
    WellArray::new(nu, rho, centers, (n > 1).then_some(a), "straight")
}

/// Chain bent at its middle well: two arms of `(n-1)/2` wells each leave the
/// origin with exterior bend angle `beta` (so `beta = 0` is the straight
/// chain). Wells sit at arclength multiples of `a` along the polyline.
pub fn bent_chain(n: usize, a: f64, beta: f64, nu: u8, rho: f64) -> Result<WellArray> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Invalid(format!(
            "bent chain needs an odd well count of at least 3 (vertex well), got {n}"
        )));
    }
    if !(0.0..PI).contains(&beta) {
        return Err(Error::Domain(format!(
            "bend angle must lie in [0, pi), got {beta}"
        )));
    }
    let half = beta / 2.0;
    let arm_plus = [half.cos(), half.sin(), 0.0];
    let arm_minus = [-half.cos(), half.sin(), 0.0];
    let k = (n - 1) / 2;
    let mut centers = Vec::with_capacity(n);
    for i in (1..=k).rev() {
        let t = i as f64 * a;
        centers.push([t * arm_minus[0], t * arm_minus[1], 0.0]);
    }
    centers.push([0.0, 0.0, 0.0]);
    for i in 1..=k {
        let t = i as f64 * a;
        centers.push([t * arm_plus[0], t * arm_plus[1], 0.0]);
    }
    WellArray::new(nu, rho, centers, Some(a), "bent")
}

/// A circle of radius `radius` partitioned by positive angular gaps that must
/// sum to a full turn.
#[derive(Clone, Debug)]
pub struct CircleConfig {
    pub radius: f64,
    pub angles: Vec<f64>,
}

impl CircleConfig {
    pub fn new(radius: f64, angles: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("circle radius must be positive, got {radius}")));
        }
        if angles.len() < 2 {
            return Err(Error::Invalid("need at least two angular gaps".into()));
        }
        if angles.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::Domain("all angular gaps must be positive".into()));
        }
        let total: f64 = angles.iter().sum();
        if (total - 2.0 * PI).abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "angular gaps must sum to 2 pi, got {total} (off by {:e})",
                total - 2.0 * PI
            )));
        }
        Ok(Self { radius, angles })
    }

    /// Symmetric configuration: `n` equal gaps of `2 pi / n`.
    pub fn symmetric(n: usize, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("need at least two wells on the circle".into()));
        }
        let gap = 2.0 * PI / n as f64;
        let mut angles = vec![gap; n];
        // absorb rounding so the sum invariant holds exactly
        let sum: f64 = angles.iter().sum();
        angles[n - 1] += 2.0 * PI - sum;
        Self::new(radius, angles)
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    /// Polar angles of the centers: zero, then cumulative gap sums.
    pub fn polar_angles(&self) -> Vec<f64> {
        let mut angles = Vec::with_capacity(self.angles.len());
        let mut acc = 0.0;
        angles.push(0.0);
        for &t in &self.angles[..self.angles.len() - 1] {
            acc += t;
            angles.push(acc);
        }
        angles
    }

    /// Chord distance between centers `i` and `j`.
    pub fn chord(&self, i: usize, j: usize) -> f64 {
        let phis = self.polar_angles();
        let mut d = (phis[i] - phis[j]).abs() % (2.0 * PI);
        if d > PI {
            d = 2.0 * PI - d;
        }
        2.0 * self.radius * (d / 2.0).sin()
    }
}

/// Realize a circle configuration as a well array (planar; in 3D the circle
/// lies in the `z = 0` coordinate plane).
pub fn circle_array(config: &CircleConfig, rho: f64, nu: u8) -> Result<WellArray> {
    let r = config.radius;
    let centers = config
        .polar_angles()
        .iter()
        .map(|&phi| [r * phi.cos(), r * phi.sin(), 0.0])
        .collect();
    WellArray::new(nu, rho, centers, None, "circle")
}

/// Closed planar shapes for loop arrays.
#[derive(Clone, Debug)]
pub enum LoopShape {
    /// Regular polygon with the given number of sides.
    Regular { sides: usize },
    /// Axis-aligned rectangle with width : height ratio `aspect`.
    Rectangle { aspect: f64 },
    /// Arbitrary closed polygon (vertices in order, closing edge implied);
    /// rescaled to the requested perimeter.
    Polygon { vertices: Vec<[f64; 2]> },
}

fn shape_vertices(shape: &LoopShape) -> Result<Vec<[f64; 2]>> {
    match shape {
        LoopShape::Regular { sides } => {
            if *sides < 3 {
                return Err(Error::Invalid("regular polygon needs at least 3 sides".into()));
            }
            Ok((0..*sides)
                .map(|k| {
                    let phi = 2.0 * PI * k as f64 / *sides as f64;
                    [phi.cos(), phi.sin()]
                })
                .collect())
        }
        LoopShape::Rectangle { aspect } => {
            if !(*aspect > 0.0) {
                return Err(Error::Domain(format!(
                    "rectangle aspect must be positive, got {aspect}"
                )));
            }
            let w = *aspect;
            Ok(vec![[0.0, 0.0], [w, 0.0], [w, 1.0], [0.0, 1.0]])
        }
        LoopShape::Polygon { vertices } => {
            if vertices.len() < 3 {
                return Err(Error::Invalid("polygon needs at least 3 vertices".into()));
            }
            Ok(vertices.clone())
        }
    }
}

/// `n` wells equidistant in arclength around a closed polygon rescaled to
/// perimeter `l`; the first well sits on the first vertex.
pub fn loop_polygon(n: usize, l: f64, shape: &LoopShape, rho: f64, nu: u8) -> Result<WellArray> {
    if n < 2 {
        return Err(Error::Invalid("loop needs at least two wells".into()));
    }
    if !(l > 0.0) {
        return Err(Error::Domain(format!("perimeter must be positive, got {l}")));
    }
    let verts = shape_vertices(shape)?;
    let m = verts.len();
    let mut edge_len = Vec::with_capacity(m);
    let mut perim = 0.0;
    for i in 0..m {
        let a = verts[i];
        let b = verts[(i + 1) % m];
        let e = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        if e == 0.0 {
            return Err(Error::Invalid(format!("degenerate polygon edge at vertex {i}")));
        }
        edge_len.push(e);
        perim += e;
    }
    let scale = l / perim;
    let step = l / n as f64;

    let mut centers = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = k as f64 * step / scale; // arclength in unscaled coordinates
        let mut edge = 0;
        while s > edge_len[edge] && edge + 1 < m {
            s -= edge_len[edge];
            edge += 1;
        }
        let a = verts[edge];
        let b = verts[(edge + 1) % m];
        let t = (s / edge_len[edge]).min(1.0);
        centers.push([
            scale * (a[0] + t * (b[0] - a[0])),
            scale * (a[1] + t * (b[1] - a[1])),
            0.0,
        ]);
    }
    WellArray::new(nu, rho, centers, Some(step), "loop")
}

/// Named sphere arrangements of unit directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpherePreset {
    Antipodal,
    Triangle,
    Tetrahedron,
    Octahedron,
    Icosahedron,
}

/// Unit vectors of a named arrangement.
pub fn sphere_preset(kind: SpherePreset) -> Vec<[f64; 3]> {
    match kind {
        SpherePreset::Antipodal => vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
        SpherePreset::Triangle => (0..3)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / 3.0;
                [phi.cos(), phi.sin(), 0.0]
            })
            .collect(),
        SpherePreset::Tetrahedron => {
            let s = 1.0 / 3.0f64.sqrt();
            vec![
                [s, s, s],
                [s, -s, -s],
                [-s, s, -s],
                [-s, -s, s],
            ]
        }
        SpherePreset::Octahedron => vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
        SpherePreset::Icosahedron => {
            let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
            let s = 1.0 / (1.0 + phi * phi).sqrt();
            let mut v = Vec::with_capacity(12);
            for &a in &[1.0, -1.0] {
                for &b in &[phi, -phi] {
                    v.push([0.0, a * s, b * s]);
                    v.push([a * s, b * s, 0.0]);
                    v.push([b * s, 0.0, a * s]);
                }
            }
            v
        }
    }
}

/// Wells at `radius * u_i` for unit directions `u_i` (three dimensions only).
pub fn sphere_config(radius: f64, directions: &[[f64; 3]], rho: f64) -> Result<WellArray> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("sphere radius must be positive, got {radius}")));
    }
    for (i, u) in directions.iter().enumerate() {
        let nrm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        if (nrm - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "direction {i} is not a unit vector (norm {nrm})"
            )));
        }
    }
    let centers = directions
        .iter()
        .map(|u| [radius * u[0], radius * u[1], radius * u[2]])
        .collect();
    WellArray::new(3, rho, centers, None, "sphere")
}

/// Gap between the symmetric chord and the mean chord at separation `m`:
/// `2 R sin(pi m / N) - mean_{|i-j| = m} 2 R sin(beta_ij / 2)`.
///
/// Nonnegative for every valid configuration (concavity of the sine on the
/// relevant range), zero for the symmetric one.
pub fn chord_mean_deficit(config: &CircleConfig, m: usize) -> Result<f64> {
    let n = config.n();
    if m < 1 || m > n / 2 {
        return Err(Error::Domain(format!(
            "separation index must lie in 1..={}, got {m}",
            n / 2
        )));
    }
    // 2 pi periodic cumulative angles; pair (i, i+m) taken cyclically. For
    // even n and m = n/2 every pair appears twice, which cancels against the
    // doubled denominator, so the plain mean over i is correct for all m.
    let mut sum = 0.0;
    for i in 0..n {
        let mut beta = 0.0;
        for k in 0..m {
            beta += config.angles[(i + k) % n];
        }
        let half = 0.5 * beta.min(2.0 * PI - beta).max(0.0);
        sum += 2.0 * config.radius * half.sin();
    }
    let mean = sum / n as f64;
    let symmetric = 2.0 * config.radius * (PI * m as f64 / n as f64).sin();
    Ok(symmetric - mean)
}
