use alloc::string::String;

use crate::model::Phase;

/// Errors raised by the complexity and geometry evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameters outside the {phase:?} region: {reason}")]
    PhaseDomain { phase: Phase, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero mode: frequency {omega} cannot anchor or reference a state")]
    ZeroMode { omega: f64 },

    #[error("auxiliary function collapsed towards zero near t = {t}")]
    Singularity { t: f64 },

    #[error("adaptive controller failed at t = {t}: {reason}")]
    Tolerance { t: f64, reason: &'static str },

    #[error("point lies on the separatrix")]
    Separatrix,

    #[error("separated flow hit a turning point near tau = {tau}")]
    TurningPoint { tau: f64 },

    #[error("geodesic left the chart domain at tau = {tau}: {reason}")]
    DomainExit { tau: f64, reason: &'static str },

    #[error("geodesic integration stalled at tau = {tau}")]
    Stiffness { tau: f64 },

    #[error("ground state is (nearly) degenerate: gap = {gap:e}")]
    Degeneracy { gap: f64 },

    #[error("target {target} is not bracketed by the trajectory")]
    Range { target: f64 },

    #[error("need at least {need} samples in the fit window, found {found}")]
    InsufficientData { need: usize, found: usize },

    #[error("unit-speed completion impossible: g11 * v1^2 = {kinetic} >= 1")]
    InfeasibleNormalization { kinetic: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PhaseDomain { .. } => "PhaseDomainError",
            Error::Domain(_) => "DomainError",
            Error::ZeroMode { .. } => "ZeroModeError",
            Error::Singularity { .. } => "SingularityError",
            Error::Tolerance { .. } => "ToleranceError",
            Error::Separatrix => "SeparatrixError",
            Error::TurningPoint { .. } => "TurningPointError",
            Error::DomainExit { .. } => "DomainExitError",
            Error::Stiffness { .. } => "StiffnessError",
            Error::Degeneracy { .. } => "DegeneracyError",
            Error::Range { .. } => "RangeError",
            Error::InsufficientData { .. } => "InsufficientDataError",
            Error::InfeasibleNormalization { .. } => "InfeasibleNormalizationError",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
