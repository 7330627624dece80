//! Dotted `section.key = value` configuration files.
//!
//! The format is deliberately small: one assignment per line, full-line `#`
//! comments, scalar values (numbers and bare words) and flat bracketed lists
//! of numbers. Every key a command does not consume is an error, reported
//! with its line number before any computation starts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use wellbound::bs_solver::SolverOptions;
use wellbound::geometry::{
    bent_chain, circle_array, loop_polygon, sphere_config, sphere_preset, straight_chain,
    CircleConfig, LoopShape, SpherePreset, WellArray,
};
use wellbound::potentials::RadialPotential;

/// A configuration error, rendered to stderr and mapped to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

type CResult<T> = Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> CResult<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone)]
struct RawValue {
    text: String,
    line: usize,
    consumed: bool,
}

/// Parsed configuration file with consumption tracking.
pub struct Config {
    values: BTreeMap<String, RawValue>,
    /// Directory of the config file; relative paths resolve against it.
    pub dir: PathBuf,
    /// Raw file bytes, hashed into the manifest.
    pub bytes: Vec<u8>,
}

impl Config {
    pub fn load(path: &Path) -> CResult<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| ConfigError(format!("config {} is not UTF-8", path.display())))?;
        let mut values = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!(
                    "line {line_no}: expected `section.key = value`, got `{line}`"
                ));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return err(format!("line {line_no}: empty key or value"));
            }
            let parts: Vec<&str> = key.split('.').collect();
            if parts.len() != 2 || parts.iter().any(|p| p.is_empty()) {
                return err(format!(
                    "line {line_no}: key `{key}` must have exactly one dot (section.name)"
                ));
            }
            if values
                .insert(
                    key.clone(),
                    RawValue {
                        text: value,
                        line: line_no,
                        consumed: false,
                    },
                )
                .is_some()
            {
                return err(format!("line {line_no}: duplicate key `{key}`"));
            }
        }
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok(Self { values, dir, bytes })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.values.get_mut(key).map(|v| {
            v.consumed = true;
            (v.text.clone(), v.line)
        })
    }

    pub fn take_string(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(s, _)| s)
    }

    pub fn take_f64(&mut self, key: &str) -> CResult<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((s, line)) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => err(format!("line {line}: `{key}` must be a finite number, got `{s}`")),
            },
        }
    }

    pub fn take_usize(&mut self, key: &str) -> CResult<Option<usize>> {
        match self.take(key) {
            None => Ok(None),
            Some((s, line)) => s
                .parse::<usize>()
                .map(Some)
                .map_err(|_| ConfigError(format!("line {line}: `{key}` must be a nonnegative integer, got `{s}`"))),
        }
    }

    pub fn take_u64(&mut self, key: &str) -> CResult<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some((s, line)) => s
                .parse::<u64>()
                .map(Some)
                .map_err(|_| ConfigError(format!("line {line}: `{key}` must be a nonnegative integer, got `{s}`"))),
        }
    }

    /// Bracketed flat list of numbers: `[a, b, c]`.
    pub fn take_list(&mut self, key: &str) -> CResult<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some((s, line)) => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| {
                        ConfigError(format!("line {line}: `{key}` must be a bracketed list, got `{s}`"))
                    })?;
                let mut out = Vec::new();
                for tok in inner.split(',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    let v: f64 = tok.parse().map_err(|_| {
                        ConfigError(format!("line {line}: `{key}` has a non-numeric entry `{tok}`"))
                    })?;
                    if !v.is_finite() {
                        return err(format!("line {line}: `{key}` has a non-finite entry"));
                    }
                    out.push(v);
                }
                if out.is_empty() {
                    return err(format!("line {line}: `{key}` is an empty list"));
                }
                Ok(Some(out))
            }
        }
    }

    pub fn require_f64(&mut self, key: &str) -> CResult<f64> {
        self.take_f64(key)?
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))
    }

    pub fn require_usize(&mut self, key: &str) -> CResult<usize> {
        self.take_usize(key)?
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))
    }

    pub fn require_string(&mut self, key: &str) -> CResult<String> {
        self.take_string(key)
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))
    }

    pub fn require_list(&mut self, key: &str) -> CResult<Vec<f64>> {
        self.take_list(key)?
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))
    }

    /// Fail if any key was never consumed; runs after input construction and
    /// before any computation.
    pub fn finish(&self) -> CResult<()> {
        let mut leftovers: Vec<(&usize, &String)> = self
            .values
            .iter()
            .filter(|(_, v)| !v.consumed)
            .map(|(k, v)| (&v.line, k))
            .collect();
        if leftovers.is_empty() {
            return Ok(());
        }
        leftovers.sort();
        let listing: Vec<String> = leftovers
            .iter()
            .map(|(line, key)| format!("unknown key `{key}` at line {line}"))
            .collect();
        err(listing.join("\n"))
    }
}

/// Build the radial potential from the `potential.*` keys.
pub fn build_potential(cfg: &mut Config) -> CResult<RadialPotential> {
    let kind = cfg.require_string("potential.kind")?;
    let lambda = cfg.take_f64("potential.lambda")?.unwrap_or(1.0);
    let made = match kind.as_str() {
        "flat" | "gaussian" | "parabolic" => {
            let depth = cfg.require_f64("potential.depth")?;
            let rho = cfg.require_f64("potential.rho")?;
            match kind.as_str() {
                "flat" => RadialPotential::flat(depth, rho, lambda),
                "gaussian" => RadialPotential::gaussian(depth, rho, lambda),
                _ => RadialPotential::parabolic(depth, rho, lambda),
            }
        }
        "table" => {
            let rel = cfg.require_string("potential.table_path")?;
            let path = cfg.dir.join(&rel);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                ConfigError(format!("cannot read potential table {}: {e}", path.display()))
            })?;
            let mut rs = Vec::new();
            let mut vs = Vec::new();
            for (idx, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut cols = line.split(',');
                let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                    return err(format!("{}:{}: need two columns r,V", path.display(), idx + 1));
                };
                let (Ok(r), Ok(v)) = (a.trim().parse::<f64>(), b.trim().parse::<f64>()) else {
                    if idx == 0 {
                        continue; // tolerate a header row
                    }
                    return err(format!("{}:{}: non-numeric entry", path.display(), idx + 1));
                };
                rs.push(r);
                vs.push(v);
            }
            RadialPotential::from_table(rs, vs, lambda)
        }
        other => {
            return err(format!(
                "potential.kind must be flat, gaussian, parabolic, or table; got `{other}`"
            ))
        }
    };
    made.map_err(|e| ConfigError(format!("potential: {e}")))
}

/// Build the well array from the `geometry.*` keys.
pub fn build_geometry(cfg: &mut Config, rho: f64) -> CResult<WellArray> {
    let kind = cfg.require_string("geometry.kind")?;
    let default_nu = if kind == "sphere" { 3 } else { 2 };
    let nu = cfg.take_usize("geometry.nu")?.unwrap_or(default_nu) as u8;
    let built = match kind.as_str() {
        "straight" => {
            let n = cfg.require_usize("geometry.n")?;
            let a = cfg.require_f64("geometry.a")?;
            straight_chain(n, a, nu, rho)
        }
        "bent" => {
            let n = cfg.require_usize("geometry.n")?;
            let a = cfg.require_f64("geometry.a")?;
            let beta = cfg.require_f64("geometry.beta")?;
            bent_chain(n, a, beta, nu, rho)
        }
        "circle" => {
            let radius = cfg.require_f64("geometry.radius")?;
            let config = match cfg.take_list("geometry.angles")? {
                Some(angles) => CircleConfig::new(radius, angles),
                None => {
                    let n = cfg.require_usize("geometry.n")?;
                    CircleConfig::symmetric(n, radius)
                }
            }
            .map_err(|e| ConfigError(format!("geometry: {e}")))?;
            circle_array(&config, rho, nu)
        }
        "loop" => {
            let n = cfg.require_usize("geometry.n")?;
            let l = cfg.require_f64("geometry.l")?;
            let shape = loop_shape(cfg, n)?;
            loop_polygon(n, l, &shape, rho, nu)
        }
        "sphere" => {
            let radius = cfg.require_f64("geometry.radius")?;
            let dirs = match cfg.take_list("geometry.directions")? {
                Some(flat) => triples(&flat, "geometry.directions")?,
                None => {
                    let name = cfg.require_string("geometry.preset")?;
                    sphere_preset(preset_by_name(&name)?)
                }
            };
            sphere_config(radius, &dirs, rho)
        }
        other => {
            return err(format!(
                "geometry.kind must be straight, bent, circle, loop, or sphere; got `{other}`"
            ))
        }
    };
    built.map_err(|e| ConfigError(format!("geometry: {e}")))
}

/// Loop shape from `geometry.preset` / `geometry.aspect` / `geometry.vertices`.
pub fn loop_shape(cfg: &mut Config, n: usize) -> CResult<LoopShape> {
    if let Some(flat) = cfg.take_list("geometry.vertices")? {
        if flat.len() % 2 != 0 || flat.len() < 6 {
            return err("geometry.vertices must hold at least three x,y pairs".to_string());
        }
        let vertices: Vec<[f64; 2]> = flat.chunks(2).map(|c| [c[0], c[1]]).collect();
        return Ok(LoopShape::Polygon { vertices });
    }
    if let Some(aspect) = cfg.take_f64("geometry.aspect")? {
        return Ok(LoopShape::Rectangle { aspect });
    }
    let sides = cfg.take_usize("geometry.sides")?.unwrap_or(n.max(3));
    Ok(LoopShape::Regular { sides })
}

pub fn preset_by_name(name: &str) -> CResult<SpherePreset> {
    Ok(match name {
        "antipodal" => SpherePreset::Antipodal,
        "triangle" => SpherePreset::Triangle,
        "tetrahedron" => SpherePreset::Tetrahedron,
        "octahedron" => SpherePreset::Octahedron,
        "icosahedron" => SpherePreset::Icosahedron,
        other => {
            return err(format!(
                "geometry.preset must be antipodal, triangle, tetrahedron, octahedron, \
                 or icosahedron; got `{other}`"
            ))
        }
    })
}

/// Flat list of coordinates into triples.
pub fn triples(flat: &[f64], key: &str) -> CResult<Vec<[f64; 3]>> {
    if flat.len() % 3 != 0 || flat.is_empty() {
        return err(format!("`{key}` must hold x,y,z triples"));
    }
    Ok(flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
}

/// Solver options from the `solver.*` keys plus the `--tol` override.
/// Returns the options and the root-finding tolerance.
pub fn build_solver(cfg: &mut Config, nu: u8, tol_flag: Option<f64>) -> CResult<(SolverOptions, f64)> {
    let mut opts = SolverOptions::default_for(nu);
    if let Some(r) = cfg.take_usize("solver.radial_order")? {
        opts.radial_order = r;
    }
    if let Some(a) = cfg.take_usize("solver.angular_order")? {
        opts.angular_order = a;
    }
    if let Some(h) = cfg.take_f64("solver.kappa_hint")? {
        opts.kappa_hint = Some(h);
    }
    if let Some(b) = cfg.take_usize("solver.max_bisections")? {
        opts.max_bisections = b;
    }
    let tol = match tol_flag {
        Some(t) => {
            cfg.take_f64("solver.tol")?; // flag wins; key is still consumed
            t
        }
        None => cfg.take_f64("solver.tol")?.unwrap_or(1e-8),
    };
    if !(tol > 0.0) {
        return err(format!("solver tolerance must be positive, got {tol}"));
    }
    Ok((opts, tol))
}
