//! Model parameters, phases, effective oscillator frequencies and field profiles.
//!
//! Everything is dimensionless: the field is measured in units of the
//! critical field and time in inverse frequency units.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Which effective description of the model is being evaluated.
///
/// Always an explicit choice: near `B = 1` both the broken and the symmetric
/// phase formulas are evaluated, so the phase is never inferred from `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// `0 <= B <= 1`
    BrokenPhase,
    /// `B >= 1`
    SymmetricPhase,
    /// Model with a transverse linear coupling and a quadratic coupling.
    Modified,
}

/// Couplings `(B, gamma, kappa)`. `kappa` is an energy shift and is inert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub b: f64,
    pub gamma: f64,
    pub kappa: f64,
}

impl ModelParams {
    pub fn new(b: f64, gamma: f64, kappa: f64) -> Result<Self> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("field B = {b} must be finite and non-negative")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(format!("anisotropy gamma = {gamma} must lie in [0, 1]")));
        }
        if !(kappa > 0.0) {
            return Err(Error::domain(format!("kappa = {kappa} must be positive")));
        }
        Ok(ModelParams { b, gamma, kappa })
    }

    /// Couplings with `kappa = 1`.
    pub fn with_field(b: f64, gamma: f64) -> Result<Self> {
        Self::new(b, gamma, 1.0)
    }
}

/// Couplings `(Omega, xi)` of the modified model, and optionally the total spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedParams {
    pub omega: f64,
    pub xi: f64,
    pub j: Option<f64>,
}

impl ModifiedParams {
    pub fn new(omega: f64, xi: f64, j: Option<f64>) -> Result<Self> {
        if !omega.is_finite() || !xi.is_finite() {
            return Err(Error::domain("couplings must be finite"));
        }
        if let Some(j) = j {
            if !(j >= 0.5) || (2.0 * j).fract() != 0.0 {
                return Err(Error::domain(format!("spin j = {j} must be a positive half-integer")));
            }
        }
        Ok(ModifiedParams { omega, xi, j })
    }
}

/// Either parameter family, as accepted by [`effective_frequency`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Couplings {
    Lmg(ModelParams),
    Modified(ModifiedParams),
}

impl From<ModelParams> for Couplings {
    fn from(p: ModelParams) -> Self {
        Couplings::Lmg(p)
    }
}

impl From<ModifiedParams> for Couplings {
    fn from(p: ModifiedParams) -> Self {
        Couplings::Modified(p)
    }
}

/// `(U, V)` with `V = sqrt(Omega^2 + 1)` and `U = V + 2 xi`.
///
/// `U` vanishes exactly on the separatrix `xi = -V/2`.
pub fn uv_factors(omega: f64, xi: f64) -> (f64, f64) {
    let v = (omega * omega + 1.0).sqrt();
    (v + 2.0 * xi, v)
}

/// Squared broken-phase frequency `4 (1 - B^2)(1 - gamma)`; no domain check.
pub fn omega_bp_sq(b: f64, gamma: f64) -> f64 {
    4.0 * (1.0 - b * b) * (1.0 - gamma)
}

/// Squared symmetric-phase frequency `4 (B - 1)(B - gamma)`; no domain check.
pub fn omega_sp_sq(b: f64, gamma: f64) -> f64 {
    4.0 * (b - 1.0) * (b - gamma)
}

/// Effective harmonic frequency of the chosen phase.
///
/// Returns exactly zero on the critical surface.
pub fn effective_frequency(phase: Phase, couplings: impl Into<Couplings>) -> Result<f64> {
    let out = |reason: &str| Error::PhaseDomain { phase, reason: reason.into() };
    match (phase, couplings.into()) {
        (Phase::BrokenPhase, Couplings::Lmg(p)) => {
            if p.b > 1.0 {
                return Err(out("broken phase requires B <= 1"));
            }
            Ok(omega_bp_sq(p.b, p.gamma).sqrt())
        }
        (Phase::SymmetricPhase, Couplings::Lmg(p)) => {
            if p.b < 1.0 || p.b < p.gamma {
                return Err(out("symmetric phase requires B >= 1 and B >= gamma"));
            }
            Ok(omega_sp_sq(p.b, p.gamma).sqrt())
        }
        (Phase::Modified, Couplings::Modified(p)) => {
            let (u, v) = uv_factors(p.omega, p.xi);
            if u * v < 0.0 {
                return Err(out("modified model requires U V >= 0 (beyond the separatrix)"));
            }
            Ok((u * v).sqrt())
        }
        (Phase::Modified, Couplings::Lmg(_)) => Err(out("modified phase needs (Omega, xi) couplings")),
        (_, Couplings::Modified(_)) => Err(out("(Omega, xi) couplings belong to the modified model")),
    }
}

/// Time dependence of the field `B(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldProfile {
    /// `B(t) = t` for `t >= 0`.
    Linear,
    /// `B(t) = t` up to `plateau_start`, constant afterwards (so `B1 = t1`).
    RampThenPlateau { plateau_start: f64 },
    /// Linear interpolation in a table of `(t, B)` pairs with increasing `t`.
    UserTable(Vec<(f64, f64)>),
}

impl FieldProfile {
    /// The ramp `B = t` that saturates at `B = 2` from `t = 2` on.
    pub fn standard_ramp() -> Self {
        FieldProfile::RampThenPlateau { plateau_start: 2.0 }
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("a field table needs at least two points"));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::domain("field table times must be strictly increasing"));
        }
        if points.iter().any(|p| !p.0.is_finite() || !(p.1 >= 0.0) || !p.1.is_finite()) {
            return Err(Error::domain("field table entries must be finite with B >= 0"));
        }
        Ok(FieldProfile::UserTable(points))
    }

    /// Time at which the field stops changing, if any.
    pub fn plateau_start(&self) -> Option<f64> {
        match self {
            FieldProfile::RampThenPlateau { plateau_start } => Some(*plateau_start),
            _ => None,
        }
    }

    /// Lipschitz bound `L` with `|B(t+h) - B(t)| <= L h`.
    pub fn lipschitz(&self) -> f64 {
        match self {
            FieldProfile::Linear | FieldProfile::RampThenPlateau { .. } => 1.0,
            FieldProfile::UserTable(p) => {
                p.windows(2).map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs()).fold(0.0, f64::max)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        field_profile_eval(self, t)
    }
}

/// Field strength at time `t`.
pub fn field_profile_eval(profile: &FieldProfile, t: f64) -> Result<f64> {
    match profile {
        FieldProfile::Linear => {
            if !(t >= 0.0) {
                return Err(Error::domain(format!("t = {t} precedes the ramp start at 0")));
            }
            Ok(t)
        }
        FieldProfile::RampThenPlateau { plateau_start } => {
            if !(t >= 0.0) {
                return Err(Error::domain(format!("t = {t} precedes the ramp start at 0")));
            }
            Ok(t.min(*plateau_start))
        }
        FieldProfile::UserTable(p) => {
            let (t0, t1) = (p[0].0, p[p.len() - 1].0);
            if !(t >= t0 && t <= t1) {
                return Err(Error::domain(format!("t = {t} outside the table range [{t0}, {t1}]")));
            }
            let i = p.partition_point(|q| q.0 <= t).clamp(1, p.len() - 1) - 1;
            let (a, b) = (p[i], p[i + 1]);
            let s = (t - a.0) / (b.0 - a.0);
            Ok(a.1 + s * (b.1 - a.1))
        }
    }
}
