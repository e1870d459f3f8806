//! Geodesics of the diagonal charts.
//!
//! With `w = 1 + 2 s x1` (`s = +1` for `XPos`, `-1` otherwise) the geodesic
//! equations read
//!
//! ```text
//! x1'' = (2 s / w) x1'^2 + 4 x1 / (3 x2^2 w) x2'^2
//! x2'' = -2 x1' x2' / (x1 w) + x2'^2 / x2
//! ```
//!
//! The scaling `x2 -> c x2` is an isometry, so `x1^2 x2' / (x2 w^2)` is
//! conserved along with the speed `K`. The separated first-order flow with
//! `M = charge^2 / 8` is
//!
//! ```text
//! x1' = +-sqrt(32/3) sqrt(K^2 w^2 - M w^4 / x1^2)
//! x2' = 2 sqrt(2M) x2 w^2 / x1^2
//! ```

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::chart::{Chart, ChartPoint};
use super::metric::{diagonal, Metric2};
use crate::error::{Error, Result};
use crate::ode::{integrate, Halt, Options, Tolerances, Trajectory};

/// When to end a geodesic run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub tau_end: f64,
    /// Stop once `|1/2 - x1| < separatrix_eps` in the charts with factor `1 - 2 x1`.
    pub separatrix_eps: f64,
    /// Also stop once `x1` has crossed this value.
    pub x1_stop: Option<f64>,
    pub tol: Tolerances,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { tau_end: 50.0, separatrix_eps: 1e-6, x1_stop: None, tol: Tolerances::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TauEnd,
    Separatrix,
    /// `x1` crossed the requested value.
    Target,
    /// The controller could not step further next to the separatrix.
    StepFloor,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::TauEnd => "tau_end",
            StopReason::Separatrix => "separatrix",
            StopReason::Target => "target",
            StopReason::StepFloor => "step_floor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSample {
    pub tau: f64,
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone)]
enum Dense {
    Second(Trajectory<4>),
    First(Trajectory<2>),
}

/// Result of a geodesic or separated-flow run.
#[derive(Debug, Clone)]
pub struct GeodesicRecord {
    pub chart: Chart,
    /// Accepted integrator nodes, in increasing `tau`.
    pub samples: Vec<GeodesicSample>,
    /// Speed at the start.
    pub k: f64,
    /// Conserved charge at the start.
    pub killing: f64,
    pub stop: StopReason,
    dense: Dense,
}

fn factor(chart: Chart, x1: f64) -> f64 {
    1.0 + 2.0 * chart.sigma() * x1
}

/// `sqrt(g(v, v))`.
pub fn speed(chart: Chart, x1: f64, x2: f64, v: [f64; 2]) -> Result<f64> {
    Ok(diagonal(chart, x1, x2)?.norm_sq(v).sqrt())
}

/// Conserved charge `x1^2 x2' / (x2 w^2)` of the scaling isometry.
pub fn killing_charge(p: &ChartPoint, v: [f64; 2]) -> Result<f64> {
    if !p.chart.is_diagonal() {
        return Err(Error::domain("charge is defined in the diagonal charts"));
    }
    let w = factor(p.chart, p.c1);
    if w.abs() < 1e-12 {
        return Err(Error::Separatrix);
    }
    Ok(p.c1 * p.c1 * v[1] / (p.c2 * w * w))
}

/// Geodesic acceleration; `None` off the chart (or across its singular line).
pub fn geodesic_accel(chart: Chart, x: [f64; 2], v: [f64; 2]) -> Option<[f64; 2]> {
    let (x1, x2) = (x[0], x[1]);
    let w = factor(chart, x1);
    if !(x1 > 0.0) || !(x2 > 0.0) || w.abs() < 1e-14 {
        return None;
    }
    let s = chart.sigma();
    Some([
        2.0 * s / w * v[0] * v[0] + 4.0 * x1 / (3.0 * x2 * x2 * w) * v[1] * v[1],
        -2.0 * v[0] * v[1] / (x1 * w) + v[1] * v[1] / x2,
    ])
}

impl GeodesicRecord {
    pub fn tau_start(&self) -> f64 {
        self.samples[0].tau
    }

    pub fn tau_end(&self) -> f64 {
        self.samples.last().unwrap().tau
    }

    pub fn last(&self) -> &GeodesicSample {
        self.samples.last().unwrap()
    }

    /// Dense output at `tau`.
    pub fn at(&self, tau: f64) -> Result<GeodesicSample> {
        let s = match &self.dense {
            Dense::Second(t) => t.eval(tau).map(|y| GeodesicSample { tau, x1: y[0], x2: y[1], v1: y[2], v2: y[3] }),
            Dense::First(t) => {
                t.eval_with_derivative(tau).map(|(y, d)| GeodesicSample { tau, x1: y[0], x2: y[1], v1: d[0], v2: d[1] })
            }
        };
        s.ok_or(Error::Range { target: tau })
    }

    /// Uniform resample with step `dtau` from the start to the last node.
    pub fn resample(&self, dtau: f64) -> Result<Vec<GeodesicSample>> {
        if !(dtau > 0.0) {
            return Err(Error::domain("resample step must be positive"));
        }
        let (a, b) = (self.tau_start(), self.tau_end());
        let n = ((b - a) / dtau).floor() as usize;
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..=n {
            out.push(self.at((a + i as f64 * dtau).min(b))?);
        }
        if out.last().is_none_or(|s| s.tau < b) {
            out.push(*self.last());
        }
        Ok(out)
    }

    pub fn speed_of(&self, s: &GeodesicSample) -> Result<f64> {
        speed(self.chart, s.x1, s.x2, [s.v1, s.v2])
    }

    pub fn killing_of(&self, s: &GeodesicSample) -> Result<f64> {
        killing_charge(&ChartPoint { chart: self.chart, c1: s.x1, c2: s.x2 }, [s.v1, s.v2])
    }

    /// Largest relative drift of speed and charge over the samples.
    pub fn drift(&self) -> Result<(f64, f64)> {
        let mut ds: f64 = 0.0;
        let mut dq: f64 = 0.0;
        for s in &self.samples {
            ds = ds.max((self.speed_of(s)? - self.k).abs() / self.k.abs().max(1e-300));
            let q = self.killing_of(s)?;
            dq = dq.max(if self.killing == 0.0 { q.abs() } else { (q - self.killing).abs() / self.killing.abs() });
        }
        Ok((ds, dq))
    }

    /// Arc length up to each sample (trapezoid on node speeds).
    pub fn lengths(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut acc = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for s in &self.samples {
            let v = self.speed_of(s)?;
            if let Some((t0, v0)) = prev {
                acc += 0.5 * (v + v0) * (s.tau - t0);
            }
            out.push(acc);
            prev = Some((s.tau, v));
        }
        Ok(out)
    }
}

fn near_separatrix(chart: Chart, x1: f64, eps: f64) -> bool {
    chart.sigma() < 0.0 && (0.5 - x1).abs() < eps
}

fn crossed(stop: &StopRule, x1_0: f64, x1: f64) -> bool {
    stop.x1_stop.is_some_and(|t| (x1 - t) * (x1_0 - t) <= 0.0 && x1 != x1_0)
}

fn check_domain(chart: Chart, tau: f64, x1: f64, x2: f64) -> Result<()> {
    if !(x1 > 0.0) {
        return Err(Error::DomainExit { tau, reason: "x1 reached zero" });
    }
    if !(x2 > 0.0) {
        return Err(Error::DomainExit { tau, reason: "x2 reached zero" });
    }
    if chart == Chart::XTilde && !(x2 * x2 >= x1 * (1.0 - 1e-12)) {
        return Err(Error::DomainExit { tau, reason: "x2^2 >= x1 violated" });
    }
    Ok(())
}

fn finish_halt(chart: Chart, halt: Halt, last: (f64, f64, f64), sep: f64) -> Result<StopReason> {
    let (tau, x1, x2) = last;
    Ok(match halt {
        Halt::Reached => StopReason::TauEnd,
        Halt::Stopped if near_separatrix(chart, x1, sep) => StopReason::Separatrix,
        Halt::Stopped => StopReason::Target,
        Halt::StepFloor => {
            if near_separatrix(chart, x1, 1e-3f64.max(sep)) {
                StopReason::StepFloor
            } else if x1 < 1e-6 || x2 < 1e-6 || (chart == Chart::XTilde && x2 * x2 - x1 < 1e-6) {
                return Err(Error::DomainExit { tau, reason: "stalled at the chart boundary" });
            } else {
                return Err(Error::Stiffness { tau });
            }
        }
    })
}

fn options(stop: &StopRule) -> Result<Options> {
    if !(stop.tau_end > 0.0) || !stop.tau_end.is_finite() {
        return Err(Error::domain("tau_end must be positive and finite"));
    }
    Ok(Options::with_tol(stop.tol))
}

/// Integrates the geodesic through `start` with initial velocity `v`.
pub fn integrate_geodesic(start: &ChartPoint, v: [f64; 2], stop: &StopRule) -> Result<GeodesicRecord> {
    let chart = start.chart;
    if !chart.is_diagonal() {
        return Err(Error::domain("geodesics are integrated in the diagonal charts"));
    }
    let g: Metric2 = diagonal(chart, start.c1, start.c2)?;
    let k = g.norm_sq(v).sqrt();
    let killing = killing_charge(start, v)?;
    let w0 = factor(chart, start.c1).signum();
    let opts = options(stop)?;
    let out = integrate(
        |_, y: &[f64; 4]| {
            if factor(chart, y[0]).signum() != w0 {
                return None;
            }
            let a = geodesic_accel(chart, [y[0], y[1]], [y[2], y[3]])?;
            Some([y[2], y[3], a[0], a[1]])
        },
        0.0,
        [start.c1, start.c2, v[0], v[1]],
        stop.tau_end,
        &opts,
        true,
        |n| {
            check_domain(chart, n.t, n.y[0], n.y[1])?;
            Ok(near_separatrix(chart, n.y[0], stop.separatrix_eps) || crossed(stop, start.c1, n.y[0]))
        },
    )
    .map_err(|e| match e {
        Error::Tolerance { t, .. } => Error::Stiffness { tau: t },
        e => e,
    })?;
    let traj = out.trajectory;
    let l = traj.last();
    let reason = finish_halt(chart, out.halt, (l.t, l.y[0], l.y[1]), stop.separatrix_eps)?;
    let samples = traj
        .nodes()
        .iter()
        .map(|n| GeodesicSample { tau: n.t, x1: n.y[0], x2: n.y[1], v1: n.y[2], v2: n.y[3] })
        .collect();
    Ok(GeodesicRecord { chart, samples, k, killing, stop: reason, dense: Dense::Second(traj) })
}

/// Constants and branch signs of the separated flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatedFlow {
    pub k: f64,
    pub m: f64,
    /// Sign of `x1'`.
    pub x1_sign: f64,
    /// Sign of `x2'` (irrelevant when `m = 0`).
    pub x2_sign: f64,
}

impl SeparatedFlow {
    /// Flow constants matching the geodesic through `p` with velocity `v`.
    pub fn from_velocity(p: &ChartPoint, v: [f64; 2]) -> Result<Self> {
        let k = diagonal(p.chart, p.c1, p.c2)?.norm_sq(v).sqrt();
        let q = killing_charge(p, v)?;
        Ok(SeparatedFlow {
            k,
            m: q * q / 8.0,
            x1_sign: if v[0] < 0.0 { -1.0 } else { 1.0 },
            x2_sign: if v[1] < 0.0 { -1.0 } else { 1.0 },
        })
    }

    /// `1 - M w^2 / (K^2 x1^2)`: the radicand relative to its `M = 0` value.
    pub fn radicand_fraction(&self, chart: Chart, x1: f64) -> f64 {
        let w = factor(chart, x1);
        1.0 - self.m * w * w / (self.k * self.k * x1 * x1)
    }

    pub fn velocity(&self, chart: Chart, x1: f64, x2: f64) -> Option<[f64; 2]> {
        let w = factor(chart, x1);
        if !(x1 > 0.0) || !(x2 > 0.0) {
            return None;
        }
        let w2 = w * w;
        let rad = self.k * self.k * w2 - self.m * w2 * w2 / (x1 * x1);
        if rad < 0.0 {
            return None;
        }
        Some([
            self.x1_sign * (32.0f64 / 3.0).sqrt() * rad.sqrt(),
            self.x2_sign * 2.0 * (2.0 * self.m).sqrt() * x2 * w2 / (x1 * x1),
        ])
    }
}

/// Integrates the separated first-order flow from `start`.
///
/// Reaching the root of the radicand before the stop rule fires is reported as
/// a turning point: the first-order form cannot continue past it.
pub fn separated_flow(start: &ChartPoint, flow: &SeparatedFlow, stop: &StopRule) -> Result<GeodesicRecord> {
    let chart = start.chart;
    if !chart.is_diagonal() {
        return Err(Error::domain("separated flow runs in the diagonal charts"));
    }
    if !(flow.k >= 0.0) || !(flow.m >= 0.0) {
        return Err(Error::domain("flow constants must be non-negative"));
    }
    let v0 = flow.velocity(chart, start.c1, start.c2).ok_or(Error::TurningPoint { tau: 0.0 })?;
    let killing = killing_charge(start, v0)?;
    let w0 = factor(chart, start.c1).signum();
    let opts = options(stop)?;
    let out = integrate(
        |_, y: &[f64; 2]| {
            if factor(chart, y[0]).signum() != w0 {
                return None;
            }
            flow.velocity(chart, y[0], y[1])
        },
        0.0,
        [start.c1, start.c2],
        stop.tau_end,
        &opts,
        false,
        |n| {
            check_domain(chart, n.t, n.y[0], n.y[1])?;
            if flow.m > 0.0 && flow.radicand_fraction(chart, n.y[0]) < 1e-8 {
                return Err(Error::TurningPoint { tau: n.t });
            }
            Ok(near_separatrix(chart, n.y[0], stop.separatrix_eps) || crossed(stop, start.c1, n.y[0]))
        },
    )
    .map_err(|e| match e {
        Error::Tolerance { t, .. } => Error::Stiffness { tau: t },
        e => e,
    })?;
    let traj = out.trajectory;
    let l = *traj.last();
    let reason = match out.halt {
        Halt::StepFloor if !near_separatrix(chart, l.y[0], 1e-3f64.max(stop.separatrix_eps)) => {
            return Err(Error::TurningPoint { tau: l.t });
        }
        h => finish_halt(chart, h, (l.t, l.y[0], l.y[1]), stop.separatrix_eps)?,
    };
    let samples = traj
        .nodes()
        .iter()
        .map(|n| GeodesicSample { tau: n.t, x1: n.y[0], x2: n.y[1], v1: n.dy[0], v2: n.dy[1] })
        .collect();
    Ok(GeodesicRecord { chart, samples, k: flow.k, killing, stop: reason, dense: Dense::First(traj) })
}
