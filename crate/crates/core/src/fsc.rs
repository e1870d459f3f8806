//! Fubini–Study complexity: geodesic length on the quantum metric.
//!
//! For `M = 0` geodesics `x2` is constant and `x1` is a pure exponential in
//! the affine parameter, which closes the boundary-value problem:
//!
//! ```text
//! GroundPos: C = (1/8) sqrt(3/2) ln[(2 xi2^2 + xi1 V) / (xi1 (2 xi1 + V))]
//! GroundNeg: C = (1/8) sqrt(3/2) ln[xi1 (2 xi1 + V) / (xi1 V + 2 xi2^2)]
//! Excited:   C = (1/8) sqrt(3/2) ln[xi1 (2 xi1 - V) / (2 xi2^2 - xi1 V)]
//! ```
//!
//! with `V = sqrt(Omega1^2 + 1)`. The logarithm is negative when the endpoint
//! moves the "other way"; the length is its absolute value.
//!
//! Near the separatrix the numeric length grows like `a + b ln(1/2 - x1)`,
//! with `b = -sqrt(3/2)/8`; [`fit_log_divergence`] recovers `(a, b)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::infogeom::chart::{Chart, ChartPoint};
use crate::infogeom::geodesic::{integrate_geodesic, GeodesicRecord, StopReason, StopRule};
use crate::infogeom::metric::metric_eval;

/// `sqrt(3/2)/8`, the prefactor of every closed form and the divergence rate.
pub fn prefactor() -> f64 {
    1.5f64.sqrt() / 8.0
}

/// `8 sqrt(2/3)`, the exponential rate of `M = 0` geodesics at unit speed.
fn rate() -> f64 {
    1.0 / prefactor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FscBranch {
    /// Ground state, `xi > 0`.
    GroundPos,
    /// Ground state, `xi < 0`.
    GroundNeg,
    /// Highest state, `xi > 0`.
    Excited,
}

impl FscBranch {
    pub fn chart(self) -> Chart {
        match self {
            FscBranch::GroundPos => Chart::XPos,
            FscBranch::GroundNeg => Chart::XTilde,
            FscBranch::Excited => Chart::XExcited,
        }
    }

    fn xi_sign(self) -> f64 {
        match self {
            FscBranch::GroundNeg => -1.0,
            _ => 1.0,
        }
    }

    fn check_xi(self, xi: f64, name: &str) -> Result<()> {
        if !(self.xi_sign() * xi > 0.0) || !xi.is_finite() {
            return Err(Error::domain(alloc::format!("{self:?} needs {name} with sign {}, got {xi}", self.xi_sign())));
        }
        Ok(())
    }
}

fn v_of(omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::domain("Omega must be finite"));
    }
    Ok((omega * omega + 1.0).sqrt())
}

/// The closed-form logarithm with its sign (positive when `x1` increases for
/// `GroundPos`, and when it approaches the separatrix for the other branches).
pub fn fsc_closed_signed(branch: FscBranch, omega1: f64, xi1: f64, xi2: f64) -> Result<f64> {
    branch.check_xi(xi1, "xi1")?;
    branch.check_xi(xi2, "xi2")?;
    let v = v_of(omega1)?;
    let (num, den) = match branch {
        FscBranch::GroundPos => (2.0 * xi2 * xi2 + xi1 * v, xi1 * (2.0 * xi1 + v)),
        FscBranch::GroundNeg => {
            if (2.0 * xi1 + v).abs() < 1e-14 {
                return Err(Error::Separatrix);
            }
            (xi1 * (2.0 * xi1 + v), xi1 * v + 2.0 * xi2 * xi2)
        }
        FscBranch::Excited => {
            if (2.0 * xi1 - v).abs() < 1e-14 {
                return Err(Error::Separatrix);
            }
            (xi1 * (2.0 * xi1 - v), 2.0 * xi2 * xi2 - xi1 * v)
        }
    };
    if den == 0.0 {
        return Err(Error::Separatrix);
    }
    let arg = num / den;
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::domain(alloc::format!(
            "log argument {arg} is not positive: the endpoints lie on opposite sides of the separatrix"
        )));
    }
    if xi1 == xi2 {
        return Ok(0.0);
    }
    Ok(prefactor() * arg.ln())
}

/// Closed-form complexity between `(Omega1, xi1)` and the `M = 0` endpoint at `xi2`.
pub fn fsc_closed(branch: FscBranch, omega1: f64, xi1: f64, xi2: f64) -> Result<f64> {
    Ok(fsc_closed_signed(branch, omega1, xi1, xi2)?.abs())
}

/// Integration constants of the `M = 0` solution through `(Omega1, xi1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicConstants {
    pub branch: FscBranch,
    pub c1: f64,
    pub c2: f64,
}

pub fn geodesic_constants(branch: FscBranch, omega1: f64, xi1: f64) -> Result<GeodesicConstants> {
    branch.check_xi(xi1, "xi1")?;
    let v = v_of(omega1)?;
    let a = xi1.abs();
    let c1 = match branch {
        FscBranch::GroundPos => xi1 / v + 0.5,
        FscBranch::GroundNeg => -xi1 / v - 0.5,
        FscBranch::Excited => xi1 / v - 0.5,
    };
    Ok(GeodesicConstants { branch, c1, c2: v.sqrt() * a.sqrt() })
}

/// Point at affine parameter `tau` on the `M = 0` geodesic with speed `k`
/// (signed: the sign picks the direction along `x1`).
pub fn m0_geodesic_solution(c: &GeodesicConstants, k: f64, tau: f64) -> Result<ChartPoint> {
    if !tau.is_finite() || !k.is_finite() {
        return Err(Error::domain("tau and K must be finite"));
    }
    let e = rate() * k * tau;
    let x1 = match c.branch {
        FscBranch::GroundPos => c.c1 * e.exp() - 0.5,
        FscBranch::GroundNeg => c.c1 * (-e).exp() + 0.5,
        FscBranch::Excited => c.c1 * (-e).exp() + 0.5,
    };
    ChartPoint::new(c.branch.chart(), x1, c.c2)
        .map_err(|_| Error::DomainExit { tau, reason: "closed-form point left the chart" })
}

/// Velocity of the `M = 0` solution, `(dx1/dtau, 0)`.
pub fn m0_geodesic_velocity(c: &GeodesicConstants, k: f64, tau: f64) -> Result<[f64; 2]> {
    let e = rate() * k * tau;
    let d = match c.branch {
        FscBranch::GroundPos => c.c1 * rate() * k * e.exp(),
        _ => -c.c1 * rate() * k * (-e).exp(),
    };
    Ok([d, 0.0])
}

/// `x1` of the endpoint reached at `tau = 1`: `x2` stays `C2`, so `x1 = xi2^2 / C2^2`.
pub fn m0_endpoint_x1(c: &GeodesicConstants, xi2: f64) -> f64 {
    xi2 * xi2 / (c.c2 * c.c2)
}

/// `Omega2` of the endpoint fixed by the `M = 0` closure: `sqrt(C2^4 / xi2^2 - 1)`.
pub fn implied_omega2(branch: FscBranch, omega1: f64, xi1: f64, xi2: f64) -> Result<f64> {
    branch.check_xi(xi2, "xi2")?;
    let c = geodesic_constants(branch, omega1, xi1)?;
    let r = c.c2.powi(4) / (xi2 * xi2) - 1.0;
    if r < -1e-12 {
        return Err(Error::domain(alloc::format!(
            "|xi2| = {} exceeds C2^2 = {}: no real Omega2 on the M = 0 geodesic",
            xi2.abs(),
            c.c2 * c.c2
        )));
    }
    Ok(r.max(0.0).sqrt())
}

/// Initial data `(x1, x2, dx1/dtau)` of a shot geodesic in the tilde chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanTriple {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
}

/// The three reference shots approaching the separatrix.
pub const REFERENCE_TRIPLES: [ScanTriple; 3] = [
    ScanTriple { x1: 0.1, x2: 0.32, v1: -1.0 },
    ScanTriple { x1: 0.15, x2: 0.42, v1: -2.0 },
    ScanTriple { x1: 0.24, x2: 0.5, v1: 9.0 },
];

/// How the missing `dx2/dtau` of a triple is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum VelocityCompletion {
    /// `K = 1` with `dx2/dtau >= 0`; fails when `g11 v1^2 >= 1`.
    UnitSpeed,
    /// Given `dx2/dtau`.
    Fixed(f64),
    /// Smallest `dx2/dtau >= 0` whose geodesic keeps `x2^2 > x1` and reaches the separatrix.
    GuardMinimal,
    /// `UnitSpeed`, falling back to `GuardMinimal` when unit speed is infeasible.
    #[default]
    UnitSpeedOrGuardMinimal,
}

/// Completion actually applied to a shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionUsed {
    UnitSpeed,
    Fixed,
    GuardMinimal,
}

impl CompletionUsed {
    pub fn as_str(self) -> &'static str {
        match self {
            CompletionUsed::UnitSpeed => "unit-speed",
            CompletionUsed::Fixed => "fixed",
            CompletionUsed::GuardMinimal => "guard-minimal",
        }
    }
}

fn start_point(t: &ScanTriple) -> Result<ChartPoint> {
    ChartPoint::new(Chart::XTilde, t.x1, t.x2)
}

/// Unit-speed `dx2/dtau` for the triple.
pub fn unit_speed_v2(t: &ScanTriple) -> Result<f64> {
    let g = metric_eval(&start_point(t)?)?;
    let kinetic = g.g11 * t.v1 * t.v1;
    if kinetic >= 1.0 {
        return Err(Error::InfeasibleNormalization { kinetic });
    }
    Ok(((1.0 - kinetic) / g.g22).sqrt())
}

fn reaches_separatrix(p: &ChartPoint, v: [f64; 2], stop: &StopRule) -> Result<Option<GeodesicRecord>> {
    match integrate_geodesic(p, v, stop) {
        Ok(r) if r.stop != StopReason::TauEnd => Ok(Some(r)),
        Ok(_) | Err(Error::DomainExit { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Bisects for the smallest admissible `dx2/dtau` (relative resolution `1e-6`)
/// and returns the admissible upper bracket.
pub fn guard_minimal_v2(t: &ScanTriple, stop: &StopRule) -> Result<f64> {
    let p = start_point(t)?;
    if reaches_separatrix(&p, [t.v1, 0.0], stop)?.is_some() {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while reaches_separatrix(&p, [t.v1, hi], stop)?.is_none() {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::DomainExit { tau: 0.0, reason: "no dx2/dtau keeps the shot inside the chart" });
        }
    }
    let mut lo = if hi > 1.0 { 0.5 * hi } else { 0.0 };
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if reaches_separatrix(&p, [t.v1, mid], stop)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn complete_velocity(
    t: &ScanTriple,
    how: VelocityCompletion,
    stop: &StopRule,
) -> Result<([f64; 2], CompletionUsed)> {
    let v2 = match how {
        VelocityCompletion::UnitSpeed => (unit_speed_v2(t)?, CompletionUsed::UnitSpeed),
        VelocityCompletion::Fixed(v) => (v, CompletionUsed::Fixed),
        VelocityCompletion::GuardMinimal => (guard_minimal_v2(t, stop)?, CompletionUsed::GuardMinimal),
        VelocityCompletion::UnitSpeedOrGuardMinimal => match unit_speed_v2(t) {
            Ok(v) => (v, CompletionUsed::UnitSpeed),
            Err(Error::InfeasibleNormalization { .. }) => (guard_minimal_v2(t, stop)?, CompletionUsed::GuardMinimal),
            Err(e) => return Err(e),
        },
    };
    Ok(([t.v1, v2.0], v2.1))
}

/// One resampled point of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub tau: f64,
    pub x1: f64,
    pub x2: f64,
    /// `1/2 - x1`.
    pub dist: f64,
    /// Geodesic length `K tau`.
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct ScanTrajectory {
    pub id: usize,
    pub triple: ScanTriple,
    pub velocity: [f64; 2],
    pub completion: CompletionUsed,
    pub record: GeodesicRecord,
    /// Uniform-`tau` resample of the dense output.
    pub samples: Vec<ScanSample>,
}

impl ScanTrajectory {
    /// `x2^2 > x1` on every integrator node and every resampled point.
    pub fn guard_holds(&self) -> bool {
        self.record.samples.iter().all(|s| s.x2 * s.x2 > s.x1) && self.samples.iter().all(|s| s.x2 * s.x2 > s.x1)
    }

    pub fn fit_points(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.dist, s.length)).collect()
    }
}

/// Resampling step of scan trajectories.
pub const SCAN_DTAU: f64 = 1e-3;

/// Shoots one triple towards the separatrix.
pub fn scan_one(id: usize, t: &ScanTriple, how: VelocityCompletion, stop: &StopRule) -> Result<ScanTrajectory> {
    let (v, used) = complete_velocity(t, how, stop)?;
    let rec = integrate_geodesic(&start_point(t)?, v, stop)?;
    let samples = rec
        .resample(SCAN_DTAU)?
        .into_iter()
        .map(|s| ScanSample { tau: s.tau, x1: s.x1, x2: s.x2, dist: 0.5 - s.x1, length: rec.k * s.tau })
        .collect();
    Ok(ScanTrajectory { id, triple: *t, velocity: v, completion: used, record: rec, samples })
}

pub fn separatrix_scan(
    triples: &[ScanTriple],
    how: VelocityCompletion,
    stop: &StopRule,
) -> Result<Vec<ScanTrajectory>> {
    triples.iter().enumerate().map(|(i, t)| scan_one(i, t, how, stop)).collect()
}

/// Length `K tau` at the first `tau` where `x1(tau) = x1_target`.
pub fn fsc_numeric(rec: &GeodesicRecord, x1_target: f64) -> Result<f64> {
    let s = &rec.samples;
    let f = |x: f64| x - x1_target;
    if f(s[0].x1) == 0.0 {
        return Ok(0.0);
    }
    let i = s
        .windows(2)
        .position(|w| f(w[0].x1).signum() != f(w[1].x1).signum() || f(w[1].x1) == 0.0)
        .ok_or(Error::Range { target: x1_target })?;
    let (mut a, mut b) = (s[i].tau, s[i + 1].tau);
    let fa0 = f(s[i].x1);
    if f(s[i + 1].x1) == 0.0 {
        return Ok(rec.k * (b - s[0].tau));
    }
    while b - a > 1e-13 * b.abs().max(1.0) {
        let m = 0.5 * (a + b);
        let fm = f(rec.at(m)?.x1);
        if fm == 0.0 {
            a = m;
            b = m;
        } else if fm.signum() == fa0.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(rec.k * (0.5 * (a + b) - s[0].tau))
}

/// Numeric complexity for `M = 0` boundary data: shoots the unit-speed
/// geodesic with `dx2/dtau = 0` from `(Omega1, xi1)` towards `x1 = xi2^2 / C2^2`
/// and root-finds the length on its dense output.
pub fn fsc_numeric_m0(branch: FscBranch, omega1: f64, xi1: f64, xi2: f64, stop: &StopRule) -> Result<f64> {
    let c = geodesic_constants(branch, omega1, xi1)?;
    let target = m0_endpoint_x1(&c, xi2);
    let p = crate::infogeom::chart::chart_transform(&ChartPoint::omega_xi(omega1, xi1)?, branch.chart())?;
    if target == p.c1 {
        return Ok(0.0);
    }
    let g = metric_eval(&p)?;
    let v1 = (target - p.c1).signum() / g.g11.sqrt();
    let rule = StopRule { x1_stop: Some(target), ..*stop };
    let rec = integrate_geodesic(&p, [v1, 0.0], &rule)?;
    fsc_numeric(&rec, target)
}

/// Least-squares `y = a + b ln(dist)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub window: (f64, f64),
    pub rms: f64,
    pub n: usize,
}

pub const DEFAULT_FIT_WINDOW: (f64, f64) = (1e-5, 1e-2);
pub const MIN_FIT_SAMPLES: usize = 20;

/// Fits `(dist, y)` pairs with `lo <= dist <= hi`.
pub fn fit_log_divergence(points: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi < 0.5) {
        return Err(Error::domain("fit window must satisfy 0 < lo < hi < 0.5"));
    }
    let sel: Vec<(f64, f64)> =
        points.iter().filter(|(d, y)| *d >= lo && *d <= hi && y.is_finite()).map(|&(d, y)| (d.ln(), y)).collect();
    let n = sel.len();
    if n < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData { need: MIN_FIT_SAMPLES, found: n });
    }
    let nf = n as f64;
    let mx = sel.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = sel.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in &sel {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::domain("fit window holds a single distance"));
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let rms = (sel.iter().map(|&(x, y)| (y - a - b * x).powi(2)).sum::<f64>() / nf).sqrt();
    Ok(FitResult { a, b, window, rms, n })
}
