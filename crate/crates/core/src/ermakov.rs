//! The time-dependent oscillator layer.
//!
//! A Gaussian state of a harmonic oscillator with frequency `omega(t)` is
//! carried by a real, positive solution `f` of the auxiliary equation
//!
//! ```text
//! f'' + omega(t)^2 f - 1/f^3 = 0
//! ```
//!
//! with complex frequency `Omega = 1/f^2 - i f'/f`. This module integrates the
//! auxiliary equation, builds it from pairs of classical solutions (Pinney's
//! superposition), and supplies the Bessel pair describing a field ramp that is
//! linearized around the critical point.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::ode::{self, Halt, Options, Tolerances, Trajectory};
use crate::special::{bessel_j, bessel_j_prime, gamma};

/// `(t, f, f')` on a solution of the auxiliary equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxState {
    pub t: f64,
    pub f: f64,
    pub fdot: f64,
}

/// `Omega = re + i im` of a Gaussian `exp(-Omega q^2 / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFrequency {
    pub re: f64,
    pub im: f64,
}

impl ComplexFrequency {
    pub fn real(w: f64) -> Self {
        ComplexFrequency { re: w, im: 0.0 }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Conditions making the state coincide with the instantaneous ground state
/// of frequency `omega0` at time `t0`: `f = 1/sqrt(omega0)`, `f' = 0`.
pub fn instantaneous_ic(omega0: f64, t0: f64) -> Result<AuxState> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(Error::ZeroMode { omega: omega0 });
    }
    Ok(AuxState { t: t0, f: 1.0 / omega0.sqrt(), fdot: 0.0 })
}

pub fn complex_frequency(s: &AuxState) -> ComplexFrequency {
    ComplexFrequency { re: 1.0 / (s.f * s.f), im: -s.fdot / s.f }
}

/// Dense solution of the auxiliary equation.
#[derive(Debug, Clone)]
pub struct AuxTrajectory {
    traj: Trajectory<2>,
}

impl AuxTrajectory {
    pub fn t_start(&self) -> f64 {
        self.traj.t_start()
    }

    pub fn t_end(&self) -> f64 {
        self.traj.t_end()
    }

    pub fn covers(&self, t: f64) -> bool {
        self.traj.covers(t)
    }

    pub fn state_at(&self, t: f64) -> Result<AuxState> {
        let y = self.traj.eval(t).ok_or_else(|| self.outside(t))?;
        Ok(AuxState { t, f: y[0], fdot: y[1] })
    }

    /// `f''` from the dense output (second derivative of the interpolant).
    pub fn fddot_at(&self, t: f64) -> Result<f64> {
        let (_, dy) = self.traj.eval_with_derivative(t).ok_or_else(|| self.outside(t))?;
        Ok(dy[1])
    }

    /// Accepted integrator nodes, in increasing `t`.
    pub fn samples(&self) -> Vec<AuxState> {
        let mut v: Vec<AuxState> =
            self.traj.nodes().iter().map(|n| AuxState { t: n.t, f: n.y[0], fdot: n.y[1] }).collect();
        if v.len() > 1 && v[0].t > v[v.len() - 1].t {
            v.reverse();
        }
        v
    }

    fn outside(&self, t: f64) -> Error {
        Error::domain(alloc::format!(
            "t = {t} outside the trajectory span [{}, {}]",
            self.t_start().min(self.t_end()),
            self.t_start().max(self.t_end())
        ))
    }
}

/// Integrates the auxiliary equation from `ic.t` to `t1` (either direction).
pub fn solve_auxiliary<W>(mut omega_sq: W, ic: AuxState, t1: f64, tol: Tolerances) -> Result<AuxTrajectory>
where
    W: FnMut(f64) -> f64,
{
    if !(ic.f > 0.0) {
        return Err(Error::domain("auxiliary amplitude must be positive"));
    }
    let rhs = |t: f64, y: &[f64; 2]| {
        let f = y[0];
        if f <= 0.0 {
            return None;
        }
        Some([y[1], -omega_sq(t) * f + 1.0 / (f * f * f)])
    };
    let out = ode::integrate(rhs, ic.t, [ic.f, ic.fdot], t1, &Options::with_tol(tol), true, |_| Ok(false))?;
    match out.halt {
        Halt::Reached => Ok(AuxTrajectory { traj: out.trajectory }),
        _ => Err(Error::Singularity { t: out.trajectory.t_end() }),
    }
}

/// Lewis–Riesenfeld phase `alpha_n(t) = -(n + 1/2) int_0^t ds / f(s)^2`.
pub fn lr_phase(traj: &AuxTrajectory, n: u32, t: f64) -> Result<f64> {
    if !traj.covers(0.0) || !traj.covers(t) {
        return Err(Error::domain(alloc::format!("trajectory must cover [0, {t}]")));
    }
    let (lo, hi) = if t >= 0.0 { (0.0, t) } else { (t, 0.0) };
    let mut cuts: Vec<f64> = traj.traj.nodes().iter().map(|n| n.t).filter(|&s| s > lo && s < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // 5-point Gauss–Legendre on each step of the dense output.
    const X: [f64; 5] =
        [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let mut integral = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        for k in 0..5 {
            let f = traj.state_at(m + r * X[k])?.f;
            integral += W[k] * r / (f * f);
        }
    }
    if t < 0.0 {
        integral = -integral;
    }
    Ok(-(n as f64 + 0.5) * integral)
}

/// Values and derivatives of two classical solutions at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairValues {
    pub g1: f64,
    pub dg1: f64,
    pub g2: f64,
    pub dg2: f64,
}

impl PairValues {
    /// `W = g1 g2' - g1' g2`.
    pub fn wronskian(&self) -> f64 {
        self.g1 * self.dg2 - self.dg1 * self.g2
    }
}

/// Two independent solutions of `g'' + omega(t)^2 g = 0`.
pub trait ClassicalPair {
    fn eval(&self, t: f64) -> Result<PairValues>;
}

/// `cos(omega t)`, `sin(omega t)`; Wronskian `omega`.
#[derive(Debug, Clone, Copy)]
pub struct TrigPair {
    pub omega: f64,
}

impl ClassicalPair for TrigPair {
    fn eval(&self, t: f64) -> Result<PairValues> {
        let (s, c) = (self.omega * t).sin_cos();
        Ok(PairValues { g1: c, dg1: -self.omega * s, g2: s, dg2: self.omega * c })
    }
}

/// Solutions of `g'' + b^2 eps g = 0` (derivatives with respect to `eps`):
/// `g1 = eps^{1/2} J_{1/3}(y)`, `g2 = eps^{1/2} J_{-1/3}(y)`, `y = (2b/3) eps^{3/2}`.
#[derive(Debug, Clone, Copy)]
pub struct BesselPair {
    pub b: f64,
}

impl BesselPair {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::domain("Bessel pair needs b > 0"));
        }
        Ok(BesselPair { b })
    }

    /// `W = -3 sqrt(3) / (2 pi)`, independent of `b`.
    pub fn wronskian() -> f64 {
        -3.0 * 3f64.sqrt() / (2.0 * PI)
    }

    /// Leading small-`eps` coefficients: `g1 ~ c1 eps`, `g2 ~ c2`.
    pub fn leading(&self) -> (f64, f64) {
        let c1 = (self.b / 3.0).powf(1.0 / 3.0) / gamma(4.0 / 3.0);
        let c2 = (3.0 / self.b).powf(1.0 / 3.0) / gamma(2.0 / 3.0);
        (c1, c2)
    }

    // Power series in eps: each branch is eps^{3nu/2 + 1/2} times a series in eps^3.
    fn series(&self, nu: f64, eps: f64) -> (f64, f64) {
        let base = (self.b / 3.0).powf(nu) / gamma(nu + 1.0);
        let p0 = 1.5 * nu + 0.5; // 1 for nu = 1/3, 0 for nu = -1/3
        let q = -(self.b / 3.0) * (self.b / 3.0);
        let e3 = eps * eps * eps;
        let mut coef = base;
        let (mut g, mut dg) = (0.0, 0.0);
        let mut k = 0usize;
        loop {
            let p = p0 + 3.0 * k as f64;
            let pw = if p == 0.0 { 1.0 } else { eps.powf(p) };
            let term = coef * pw;
            g += term;
            if p != 0.0 {
                dg += coef * p * eps.powf(p - 1.0);
            }
            k += 1;
            coef *= q / (k as f64 * (k as f64 + nu));
            if (coef * pw * e3).abs() <= 1e-17 * g.abs().max(1e-300) && k > 1 || k > 400 {
                break;
            }
        }
        (g, dg)
    }

    fn bessel(&self, nu: f64, eps: f64) -> (f64, f64) {
        let se = eps.sqrt();
        let y = 2.0 * self.b / 3.0 * eps * se;
        let j = bessel_j(nu, y);
        let jp = bessel_j_prime(nu, y);
        (se * j, j / (2.0 * se) + self.b * eps * jp)
    }
}

impl ClassicalPair for BesselPair {
    fn eval(&self, eps: f64) -> Result<PairValues> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::domain("Bessel pair is defined for eps >= 0"));
        }
        let y = 2.0 * self.b / 3.0 * eps.powf(1.5);
        let ((g1, dg1), (g2, dg2)) = if y <= 10.0 {
            (self.series(1.0 / 3.0, eps), self.series(-1.0 / 3.0, eps))
        } else {
            (self.bessel(1.0 / 3.0, eps), self.bessel(-1.0 / 3.0, eps))
        };
        Ok(PairValues { g1, dg1, g2, dg2 })
    }
}

/// `(g1, g2, W)` of the Bessel pair at `eps`, with derivatives.
pub fn bessel_pair(b: f64, eps: f64) -> Result<(PairValues, f64)> {
    let p = BesselPair::new(b)?.eval(eps)?;
    Ok((p, BesselPair::wronskian()))
}

/// How the third coefficient enters the superposition.
///
/// `Standard`: `f^2 = A1 g1^2 + 2 A2 g1 g2 + A3 g2^2`, which solves the
/// auxiliary equation when `A1 A3 - A2^2 = 1/W^2`. `AsPrinted` doubles the
/// `g2^2` coefficient; it is kept for comparison and does not produce
/// solutions in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PinneyConvention {
    #[default]
    Standard,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinneyCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub w: f64,
    pub convention: PinneyConvention,
}

impl PinneyCoeffs {
    /// Checks `A1 A3 - A2^2 = +-1/W^2` to 1e-9 (relative to `1/W^2`).
    pub fn new(a1: f64, a2: f64, a3: f64, w: f64, convention: PinneyConvention) -> Result<Self> {
        if !(w != 0.0) || !w.is_finite() {
            return Err(Error::domain("Wronskian must be finite and nonzero"));
        }
        let target = 1.0 / (w * w);
        let d = a1 * a3 - a2 * a2;
        let tol = 1e-9 * target.max(1.0);
        if (d - target).abs() > tol && (d + target).abs() > tol {
            return Err(Error::domain(alloc::format!(
                "A1 A3 - A2^2 = {d} violates the constraint +-1/W^2 = +-{target}"
            )));
        }
        Ok(PinneyCoeffs { a1, a2, a3, w, convention })
    }

    /// Coefficients reproducing `(f0, f0')` at `t0` from the pair.
    ///
    /// Under the standard convention the constraint holds with the `+` sign
    /// by construction. Under the printed convention the same `f^2` needs
    /// `A3` halved, which breaks the constraint, so this returns an error.
    pub fn anchored(
        pair: &impl ClassicalPair,
        t0: f64,
        f0: f64,
        fdot0: f64,
        convention: PinneyConvention,
    ) -> Result<Self> {
        if !(f0 > 0.0) {
            return Err(Error::domain("anchoring needs f0 > 0"));
        }
        let p = pair.eval(t0)?;
        let w = p.wronskian();
        let w2 = w * w;
        let u1 = p.dg1 * f0 - p.g1 * fdot0;
        let u2 = p.dg2 * f0 - p.g2 * fdot0;
        let inv = 1.0 / (f0 * f0);
        let a1 = (u2 * u2 + p.g2 * p.g2 * inv) / w2;
        let a3 = (u1 * u1 + p.g1 * p.g1 * inv) / w2;
        let a2 = -(u1 * u2 + p.g1 * p.g2 * inv) / w2;
        match convention {
            PinneyConvention::Standard => Self::new(a1, a2, a3, w, convention),
            PinneyConvention::AsPrinted => Self::new(a1, a2, 0.5 * a3, w, convention),
        }
    }

    fn k3(&self) -> f64 {
        match self.convention {
            PinneyConvention::Standard => 1.0,
            PinneyConvention::AsPrinted => 2.0,
        }
    }

    /// Coefficient of `g2^2` in `f^2` (the `J_{-1/3}` branch for the Bessel pair).
    pub fn g2_sq_coefficient(&self) -> f64 {
        self.k3() * self.a3
    }
}

/// `f` and `f'` built from the classical pair at `t`.
pub fn pinney_superpose(pair: &impl ClassicalPair, c: &PinneyCoeffs, t: f64) -> Result<AuxState> {
    let p = pair.eval(t)?;
    let k = c.k3();
    let r = c.a1 * p.g1 * p.g1 + 2.0 * c.a2 * p.g1 * p.g2 + k * c.a3 * p.g2 * p.g2;
    if !(r > 0.0) {
        return Err(Error::domain(alloc::format!("superposition radicand {r} is not positive at t = {t}")));
    }
    let dr = 2.0 * c.a1 * p.g1 * p.dg1 + 2.0 * c.a2 * (p.dg1 * p.g2 + p.g1 * p.dg2) + 2.0 * k * c.a3 * p.g2 * p.dg2;
    let f = r.sqrt();
    Ok(AuxState { t, f, fdot: dr / (2.0 * f) })
}

/// `f(eps -> 0) = sqrt(a) (3/b)^{1/3} / Gamma(2/3)`, where `a` is the
/// coefficient of `g2^2 = eps J_{-1/3}(y)^2` in `f^2`.
pub fn near_qpt_f_limit(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain("limit needs a > 0 and b > 0"));
    }
    Ok(a.sqrt() / gamma(2.0 / 3.0) * (3.0 / b).powf(1.0 / 3.0))
}

/// `(f, df/deps)` at `eps = 0` for a superposition on the Bessel pair.
pub fn near_qpt_state(c: &PinneyCoeffs, b: f64) -> Result<AuxState> {
    let f = near_qpt_f_limit(c.g2_sq_coefficient(), b)?;
    let (c1, c2) = BesselPair::new(b)?.leading();
    Ok(AuxState { t: 0.0, f, fdot: c.a2 * c1 * c2 / f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn initial_condition_examples() {
        assert_eq!(instantaneous_ic(1.0, 0.0).unwrap(), AuxState { t: 0.0, f: 1.0, fdot: 0.0 });
        assert_eq!(instantaneous_ic(4.0, 0.0).unwrap().f, 0.5);
        let s = instantaneous_ic(2.0 * 0.9f64.sqrt(), 0.0).unwrap();
        assert!((s.f - 0.725_979_529_1).abs() < 1e-9);
        assert_eq!(instantaneous_ic(0.0, 0.0).unwrap_err().kind(), "ZeroModeError");
    }

    #[test]
    fn constant_frequency_fixed_point() {
        for w in [0.5, 1.0, 2.0, 4.0] {
            let ic = instantaneous_ic(w, 0.0).unwrap();
            let tr = solve_auxiliary(|_| w * w, ic, 1.0, tol()).unwrap();
            for k in 0..=100 {
                let t = k as f64 / 100.0;
                let s = tr.state_at(t).unwrap();
                assert!((s.f - 1.0 / w.sqrt()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn broken_phase_ramp_stays_positive_and_satisfies_ode() {
        let g = 0.1;
        let wsq = |t: f64| 4.0 * (1.0 - t * t) * (1.0 - g);
        let ic = instantaneous_ic(wsq(0.0).sqrt(), 0.0).unwrap();
        let tr = solve_auxiliary(wsq, ic, 0.999, tol()).unwrap();
        assert!(tr.samples().iter().all(|s| s.f > 0.0 && s.f.is_finite()));
        for k in 0..100 {
            let t = 0.999 * (k as f64 + 0.5) / 100.0;
            let s = tr.state_at(t).unwrap();
            let res = tr.fddot_at(t).unwrap() + wsq(t) * s.f - 1.0 / s.f.powi(3);
            assert!(res.abs() < 1e-6, "t={t}: residual {res}");
        }
    }

    #[test]
    fn backward_integration_and_samples_order() {
        let wsq = |t: f64| 4.0 * (t - 1.0) * (t - 0.1);
        let ic = instantaneous_ic(wsq(2.0).sqrt(), 2.0).unwrap();
        let tr = solve_auxiliary(wsq, ic, 1.01, tol()).unwrap();
        let s = tr.samples();
        assert!(s.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(s.last().unwrap().t, 2.0);
        assert!(tr.state_at(1.5).is_ok() && tr.state_at(0.5).is_err());
    }

    #[test]
    fn complex_frequency_examples() {
        let c = complex_frequency(&AuxState { t: 0.0, f: 0.5, fdot: 0.2 });
        assert!((c.re - 4.0).abs() < 1e-15 && (c.im + 0.4).abs() < 1e-15);
        let s = instantaneous_ic(3.0, 0.0).unwrap();
        let c = complex_frequency(&s);
        assert!((c.re - 3.0).abs() < 1e-14 && c.im == 0.0);
    }

    #[test]
    fn phase_examples() {
        let tr = solve_auxiliary(|_| 1.0, instantaneous_ic(1.0, 0.0).unwrap(), 2.0, tol()).unwrap();
        assert!((lr_phase(&tr, 0, 2.0).unwrap() + 1.0).abs() < 1e-10);
        assert_eq!(lr_phase(&tr, 0, 0.0).unwrap(), 0.0);
        assert!(lr_phase(&tr, 0, 2.5).is_err());
        let tr = solve_auxiliary(|_| 4.0, instantaneous_ic(2.0, 0.0).unwrap(), 1.0, tol()).unwrap();
        assert!((lr_phase(&tr, 1, 1.0).unwrap() + 3.0).abs() < 1e-10);
    }

    #[test]
    fn phase_rate_and_mode_scaling() {
        let wsq = |t: f64| 4.0 * (1.0 - t * t) * 0.9;
        let tr = solve_auxiliary(wsq, instantaneous_ic(wsq(0.0).sqrt(), 0.0).unwrap(), 0.9, tol()).unwrap();
        let h = 1e-5;
        let mut prev = 0.0;
        for k in 1..=20 {
            let t = 0.04 * k as f64;
            let a0 = lr_phase(&tr, 0, t).unwrap();
            assert!(a0 < prev);
            prev = a0;
            let a2 = lr_phase(&tr, 2, t).unwrap();
            assert!((a2 - 5.0 * a0).abs() < 1e-12 * a0.abs().max(1.0));
            let rate = (lr_phase(&tr, 0, t + h).unwrap() - lr_phase(&tr, 0, t - h).unwrap()) / (2.0 * h);
            let f = tr.state_at(t).unwrap().f;
            assert!((rate + 0.5 / (f * f)).abs() < 1e-6);
        }
    }

    #[test]
    fn trig_pair_constant_frequency_identity() {
        for w in [0.5, 1.0, 3.0] {
            let pair = TrigPair { omega: w };
            let c = PinneyCoeffs::new(1.0 / w, 0.0, 1.0 / w, w, PinneyConvention::Standard).unwrap();
            for k in 0..20 {
                let s = pinney_superpose(&pair, &c, 0.3 * k as f64).unwrap();
                assert!((s.f - 1.0 / w.sqrt()).abs() < 1e-14 && s.fdot.abs() < 1e-13);
            }
        }
    }

    // f'' + omega^2 f - 1/f^3 from central differences of f'.
    fn residual(pair: &impl ClassicalPair, c: &PinneyCoeffs, wsq: impl Fn(f64) -> f64, t: f64) -> f64 {
        let h = 1e-5;
        let a = pinney_superpose(pair, c, t - h).unwrap().fdot;
        let b = pinney_superpose(pair, c, t + h).unwrap().fdot;
        let s = pinney_superpose(pair, c, t).unwrap();
        (b - a) / (2.0 * h) + wsq(t) * s.f - 1.0 / s.f.powi(3)
    }

    #[test]
    fn printed_convention_fails_the_residual_test() {
        let w = 1.3;
        let pair = TrigPair { omega: w };
        let std = PinneyCoeffs::new(0.9, 0.2, (1.0 / (w * w) + 0.04) / 0.9, w, PinneyConvention::Standard).unwrap();
        let printed = PinneyCoeffs { convention: PinneyConvention::AsPrinted, ..std };
        let mut worst_std: f64 = 0.0;
        let mut worst_printed: f64 = 0.0;
        for k in 0..30 {
            let t = 0.1 * k as f64 + 0.05;
            worst_std = worst_std.max(residual(&pair, &std, |_| w * w, t).abs());
            worst_printed = worst_printed.max(residual(&pair, &printed, |_| w * w, t).abs());
        }
        assert!(worst_std < 1e-6, "{worst_std}");
        assert!(worst_printed > 1e-2, "{worst_printed}");
        // and anchoring under the printed convention cannot satisfy the constraint
        assert!(PinneyCoeffs::anchored(&pair, 0.0, 1.0, 0.3, PinneyConvention::AsPrinted).is_err());
    }

    #[test]
    fn constraint_is_enforced() {
        assert_eq!(
            PinneyCoeffs::new(1.0, 0.5, 1.0, 1.0, PinneyConvention::Standard).unwrap_err().kind(),
            "DomainError"
        );
        // the minus sign is accepted as a constraint branch
        assert!(PinneyCoeffs::new(0.0, 1.0, 0.0, 1.0, PinneyConvention::Standard).is_ok());
    }

    #[test]
    fn bessel_pair_solves_the_classical_equation() {
        let b = 2.0 * 2f64.sqrt() * 0.9f64.sqrt();
        let pair = BesselPair::new(b).unwrap();
        for &eps in &[0.05, 0.3, 1.0, 4.0, 9.0] {
            let h = 1e-5;
            let d2 = (pair.eval(eps + h).unwrap().dg1 - pair.eval(eps - h).unwrap().dg1) / (2.0 * h);
            let g = pair.eval(eps).unwrap();
            let res = d2 + b * b * eps * g.g1;
            assert!(res.abs() < 1e-8 * (1.0 + b * b * eps), "eps={eps}: {res}");
            let d2 = (pair.eval(eps + h).unwrap().dg2 - pair.eval(eps - h).unwrap().dg2) / (2.0 * h);
            assert!((d2 + b * b * eps * g.g2).abs() < 1e-8 * (1.0 + b * b * eps));
        }
    }

    #[test]
    fn bessel_pair_wronskian_and_small_eps() {
        let b = 1.7;
        let w1 = bessel_pair(b, 0.01).unwrap().0.wronskian();
        let w2 = bessel_pair(b, 0.1).unwrap().0.wronskian();
        let w3 = bessel_pair(b, 20.0).unwrap().0.wronskian();
        assert!((w1 - w2).abs() < 1e-8 && (w1 - w3).abs() < 1e-8);
        assert!((w1 - BesselPair::wronskian()).abs() < 1e-12);

        let eps: f64 = 1e-4;
        let g1 = bessel_pair(b, eps).unwrap().0.g1;
        let y = 2.0 * b / 3.0 * eps.powf(1.5);
        let lead = (y / 2.0).powf(1.0 / 3.0) / gamma(4.0 / 3.0);
        assert!((g1 / eps.sqrt() / lead - 1.0).abs() < 1e-3);
        // series and Bessel-function evaluation agree where both apply
        let p = BesselPair::new(b).unwrap();
        let e = 2.5;
        let (s1, d1) = p.series(1.0 / 3.0, e);
        let (j1, dj1) = p.bessel(1.0 / 3.0, e);
        assert!((s1 - j1).abs() < 1e-11 && (d1 - dj1).abs() < 1e-10);
    }

    #[test]
    fn bessel_superposition_matches_direct_integration() {
        let b = 2.0 * 0.9f64.sqrt();
        let pair = BesselPair::new(b).unwrap();
        let e1 = 0.02;
        let ic = instantaneous_ic(b * e1.sqrt(), e1).unwrap();
        let c = PinneyCoeffs::anchored(&pair, e1, ic.f, ic.fdot, PinneyConvention::Standard).unwrap();
        let tr = solve_auxiliary(|e| b * b * e, ic, 0.0, tol()).unwrap();
        for &e in &[0.019, 0.015, 0.01, 0.001, 0.0] {
            let p = pinney_superpose(&pair, &c, e).unwrap();
            let d = tr.state_at(e).unwrap();
            assert!((p.f - d.f).abs() < 1e-5 && (p.fdot - d.fdot).abs() < 1e-5, "eps={e}");
        }
        // the eps -> 0 limit
        let lim = near_qpt_state(&c, b).unwrap();
        let d = tr.state_at(0.0).unwrap();
        assert!((lim.f - d.f).abs() < 1e-3 && (lim.fdot - d.fdot).abs() < 1e-3);
    }

    #[test]
    fn limit_examples() {
        let g = gamma(2.0 / 3.0);
        assert!((near_qpt_f_limit(g * g, 3.0).unwrap() - 1.0).abs() < 1e-14);
        let r = near_qpt_f_limit(0.7, 2.4).unwrap() / near_qpt_f_limit(0.7, 1.2).unwrap();
        assert!((r - 2f64.powf(-1.0 / 3.0)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn anchoring_reproduces_data(f0 in 0.2f64..3.0, fd in -2.0f64..2.0, t0 in 0.0f64..3.0, w in 0.3f64..3.0) {
            let pair = TrigPair { omega: w };
            let c = PinneyCoeffs::anchored(&pair, t0, f0, fd, PinneyConvention::Standard).unwrap();
            prop_assert!((c.a1 * c.a3 - c.a2 * c.a2 - 1.0 / (w * w)).abs() < 1e-9 * (1.0 / (w * w)).max(1.0));
            let s = pinney_superpose(&pair, &c, t0).unwrap();
            prop_assert!((s.f - f0).abs() < 1e-10 * f0.max(1.0));
            prop_assert!((s.fdot - fd).abs() < 1e-9 * (1.0 + fd.abs()));
        }

        #[test]
        fn superposition_solves_the_auxiliary_equation(f0 in 0.3f64..2.0, fd in -1.0f64..1.0, w in 0.5f64..2.0) {
            let pair = TrigPair { omega: w };
            let c = PinneyCoeffs::anchored(&pair, 0.0, f0, fd, PinneyConvention::Standard).unwrap();
            for k in 0..10 {
                let r = residual(&pair, &c, |_| w * w, 0.37 * k as f64 + 0.1);
                prop_assert!(r.abs() < 1e-5 * (1.0 + 1.0 / f0.powi(3)));
            }
        }
    }
}
