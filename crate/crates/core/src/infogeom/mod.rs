//! Information geometry of the modified model's ground and highest states.

pub mod chart;
pub mod curvature;
pub mod finite_j;
pub mod geodesic;
pub mod metric;

pub use chart::{chart_transform, Chart, ChartPoint, Sector};
pub use curvature::{ricci_numeric, ricci_scalar, RicciMethod};
pub use finite_j::{
    convergence_rows, convergence_study, fidelity_qgt, fidelity_qgt_raw, qgt_spectral, ConvergenceRow, Estimator,
    Frame, COMPONENTS,
};
pub use geodesic::{
    geodesic_accel, integrate_geodesic, killing_charge, separated_flow, GeodesicRecord, GeodesicSample, SeparatedFlow,
    StopReason, StopRule,
};
pub use metric::{metric_eval, omega_xi_metric, pullback_check, Metric2, PullbackResidual};
