//! Radial well potentials supported on a ball of radius `rho`.
//!
//! A well is a radial profile `V(r)` on `[0, rho]` together with a coupling
//! constant `lambda`; the operator under study applies `lambda * V` centered
//! at each point of a well array. Shrinking families `(mu(eps)/eps^2) V(r/eps)`
//! model the point-interaction limit of narrow deep wells.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauss::adaptive_simpson;

/// Built-in radial profiles, all truncated at the support radius.
#[derive(Clone, Debug)]
pub enum Profile {
    /// Constant depth on the whole ball (step well).
    Flat { depth: f64 },
    /// `depth * exp(-(2r/rho)^2)`: a Gaussian with 1/e width `rho/2`.
    Gaussian { depth: f64 },
    /// `depth * (1 - (r/rho)^2)`: concave cap vanishing at the edge.
    Parabolic { depth: f64 },
    /// Piecewise-linear interpolation of `(r, v)` samples on `[0, rho]`.
    Table { r: Vec<f64>, v: Vec<f64> },
}

impl Profile {
    /// Evaluate at `r` within a well of radius `rho` (no truncation check).
    fn eval(&self, r: f64, rho: f64) -> f64 {
        match self {
            Profile::Flat { depth } => *depth,
            Profile::Gaussian { depth } => {
                let t = 2.0 * r / rho;
                depth * (-t * t).exp()
            }
            Profile::Parabolic { depth } => {
                let t = r / rho;
                depth * (1.0 - t * t)
            }
            Profile::Table { r: rs, v: vs } => {
                if r <= rs[0] {
                    return vs[0];
                }
                let last = rs.len() - 1;
                if r >= rs[last] {
                    return vs[last];
                }
                let j = rs.partition_point(|&x| x <= r) - 1;
                let t = (r - rs[j]) / (rs[j + 1] - rs[j]);
                vs[j] + t * (vs[j + 1] - vs[j])
            }
        }
    }

    fn peak_abs(&self, rho: f64) -> f64 {
        match self {
            Profile::Flat { depth } | Profile::Gaussian { depth } | Profile::Parabolic { depth } => {
                depth.abs()
            }
            Profile::Table { v, .. } => v.iter().fold(0.0f64, |m, &x| m.max(x.abs())),
            // piecewise-linear extrema sit at the nodes, so scanning them is
            // exact; `rho` only matters for the analytic profiles above
        }
        .max(0.0 * rho)
    }
}

/// A radial well: profile on `[0, rho]`, coupling `lambda`, sign flag.
#[derive(Clone, Debug)]
pub struct RadialPotential {
    /// Support radius of the (possibly rescaled) well.
    pub rho: f64,
    /// Coupling constant multiplying the whole array potential.
    pub lambda: f64,
    /// Asserts the profile is nonnegative (checked where checkable).
    pub nonneg: bool,
    profile: Profile,
    /// Radius the stored profile is parameterized on; `value` maps the
    /// physical radius onto this before evaluating, so shrunken copies reuse
    /// the parent profile.
    base_rho: f64,
    /// Multiplier accumulated by rescaling (depth factor of shrink families).
    amp: f64,
}

impl RadialPotential {
    fn validated(self) -> Result<Self> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Domain(format!(
                "support radius must be positive and finite, got {}",
                self.rho
            )));
        }
        if !self.lambda.is_finite() {
            return Err(Error::Domain("coupling must be finite".into()));
        }
        Ok(self)
    }

    /// Step well of constant `depth` on a ball of radius `rho`.
    pub fn flat(depth: f64, rho: f64, lambda: f64) -> Result<Self> {
        Self {
            rho,
            lambda,
            nonneg: depth >= 0.0,
            profile: Profile::Flat { depth },
            base_rho: rho,
            amp: 1.0,
        }
        .validated()
    }

    /// Truncated Gaussian well (see [`Profile::Gaussian`]).
    pub fn gaussian(depth: f64, rho: f64, lambda: f64) -> Result<Self> {
        Self {
            rho,
            lambda,
            nonneg: depth >= 0.0,
            profile: Profile::Gaussian { depth },
            base_rho: rho,
            amp: 1.0,
        }
        .validated()
    }

    /// Truncated parabolic well (see [`Profile::Parabolic`]).
    pub fn parabolic(depth: f64, rho: f64, lambda: f64) -> Result<Self> {
        Self {
            rho,
            lambda,
            nonneg: depth >= 0.0,
            profile: Profile::Parabolic { depth },
            base_rho: rho,
            amp: 1.0,
        }
        .validated()
    }

    /// Tabulated profile with linear interpolation; samples must cover
    /// `[0, rho]` with strictly increasing radii.
    pub fn from_table(r: Vec<f64>, v: Vec<f64>, lambda: f64) -> Result<Self> {
        if r.len() != v.len() || r.len() < 2 {
            return Err(Error::Invalid(
                "table profile needs at least two (r, v) samples".into(),
            ));
        }
        if r[0] != 0.0 {
            return Err(Error::Invalid("table profile must start at r = 0".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("table radii must be strictly increasing".into()));
        }
        if v.iter().chain(r.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Invalid("table samples must be finite".into()));
        }
        let rho = *r.last().unwrap();
        let nonneg = v.iter().all(|&x| x >= 0.0);
        Self {
            rho,
            lambda,
            nonneg,
            profile: Profile::Table { r, v },
            base_rho: rho,
            amp: 1.0,
        }
        .validated()
    }

    /// Bare profile value at radius `r` (zero outside the support, coupling
    /// not applied).
    pub fn value(&self, r: f64) -> f64 {
        if r > self.rho || r < 0.0 {
            return 0.0;
        }
        let s = r * self.base_rho / self.rho;
        self.amp * self.profile.eval(s, self.base_rho)
    }

    /// Potential as seen by the operator: `lambda * V(r)`.
    pub fn effective(&self, r: f64) -> f64 {
        self.lambda * self.value(r)
    }

    /// Largest magnitude of the effective potential over the support.
    pub fn max_abs(&self) -> f64 {
        self.lambda.abs() * self.amp.abs() * self.profile.peak_abs(self.base_rho)
    }

    /// Effective constant depth when the profile is flat, `None` otherwise.
    /// Lets consumers take closed-form shortcuts that only exist for flat
    /// wells.
    pub fn flat_depth(&self) -> Option<f64> {
        if let Profile::Flat { depth } = self.profile {
            Some(self.lambda * self.amp * depth)
        } else {
            None
        }
    }

    /// `lambda * integral_0^rho V(r) r^(nu-1) dr`.
    ///
    /// Flat wells use the closed form; everything else goes through adaptive
    /// quadrature with absolute tolerance well under 1e-10.
    pub fn moment(&self, nu: u8) -> Result<f64> {
        if nu != 2 && nu != 3 {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {nu}")));
        }
        if let Profile::Flat { depth } = self.profile {
            let v0 = self.lambda * self.amp * depth;
            return Ok(v0 * self.rho.powi(nu as i32) / f64::from(nu));
        }
        let p = i32::from(nu) - 1;
        let integral = adaptive_simpson(|r| self.value(r) * r.powi(p), 0.0, self.rho, 1e-12);
        Ok(self.lambda * integral)
    }

    /// Shrinking family member: support radius `eps * rho`, profile
    /// `(mu(eps)/eps^2) * lambda * V(r/eps)` with `mu(eps) = 1 + mu_prime0 * eps`,
    /// coupling folded into the profile (result has `lambda = 1`).
    pub fn scaled_well(&self, eps: f64, mu_prime0: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain(format!("scale must be positive, got {eps}")));
        }
        let mu = 1.0 + mu_prime0 * eps;
        if self.nonneg && mu < 0.0 {
            return Err(Error::Domain(format!(
                "depth factor mu({eps}) = {mu} flips the sign of a well flagged nonnegative"
            )));
        }
        Self {
            rho: eps * self.rho,
            lambda: 1.0,
            nonneg: self.nonneg,
            profile: self.profile.clone(),
            base_rho: self.base_rho,
            amp: self.amp * self.lambda * mu / (eps * eps),
            // folding lambda here keeps downstream consumers oblivious to
            // whether they hold an original or a shrunken well
        }
        .validated()
    }
}

/// Flat-well depth with a zero-energy resonance in three dimensions:
/// `(pi / (2 rho))^2`. Two dimensions have no such closed form here, so
/// `nu = 2` is rejected.
pub fn flat_resonance_depth(nu: u8, rho: f64) -> Result<f64> {
    if nu != 3 {
        return Err(Error::Invalid(format!(
            "flat resonance depth is only available for nu = 3, got nu = {nu}"
        )));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {rho}")));
    }
    let half = PI / (2.0 * rho);
    Ok(half * half)
}
