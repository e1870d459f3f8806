//! Nielsen complexity of Gaussian states.
//!
//! Between two Gaussians with complex frequencies `Omega_R` and `Omega_T`, the
//! complexity is `C = 1/2 sqrt(P^2 + Q^2)` with `P = ln(|Omega_T|/|Omega_R|)`
//! and `Q = arctan A`, `A` the tangent of the phase difference. Static
//! oscillators give `C = |ln(omega_T/omega_R)|/2`. Two ramp protocols track the
//! time-dependent state with the auxiliary equation: one anchored at `t = 0` in
//! the broken phase, one anchored at the start of the field plateau in the
//! symmetric phase.

use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::ermakov::{
    instantaneous_ic, near_qpt_state, solve_auxiliary, AuxState, AuxTrajectory, ComplexFrequency, PinneyCoeffs,
};
use crate::error::{Error, Result};
use crate::model::{effective_frequency, omega_bp_sq, omega_sp_sq, Couplings, FieldProfile, Phase};
use crate::ode::Tolerances;
use crate::special::gamma;

/// A complexity value with its logarithmic (`p`) and angular (`q`) parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcValue {
    pub value: f64,
    pub parts: Option<(f64, f64)>,
}

impl NcValue {
    pub fn from_parts(p: f64, q: f64) -> Self {
        NcValue { value: 0.5 * p.hypot(q), parts: Some((p, q)) }
    }
}

/// `|ln(omega_T/omega_R)| / 2` between two static ground states.
pub fn nc_static(phase: Phase, reference: impl Into<Couplings>, target: impl Into<Couplings>) -> Result<NcValue> {
    let wr = effective_frequency(phase, reference)?;
    let wt = effective_frequency(phase, target)?;
    for w in [wr, wt] {
        if w == 0.0 {
            return Err(Error::ZeroMode { omega: w });
        }
    }
    Ok(NcValue::from_parts(wt.ln() - wr.ln(), 0.0))
}

/// Complexity between two Gaussians. Exactly symmetric under exchange.
pub fn nc_gaussian(r: ComplexFrequency, t: ComplexFrequency) -> Result<NcValue> {
    if !(r.re > 0.0) || !(t.re > 0.0) {
        return Err(Error::domain("Gaussian states need a positive real frequency part"));
    }
    let p = t.abs().ln() - r.abs().ln();
    let a = (t.im * r.re - t.re * r.im) / (r.re * t.re + r.im * t.im);
    Ok(NcValue::from_parts(p, a.atan()))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain(alloc::format!("protocols need gamma in [0, 1), got {gamma}")));
    }
    Ok(())
}

// Largest field on [a, b]; profiles are piecewise linear so vertices suffice.
fn field_range(profile: &FieldProfile, a: f64, b: f64) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut visit = |t: f64| -> Result<()> {
        let v = profile.eval(t)?;
        lo = lo.min(v);
        hi = hi.max(v);
        Ok(())
    };
    visit(a)?;
    visit(b)?;
    match profile {
        FieldProfile::UserTable(p) => {
            for &(t, _) in p.iter().filter(|q| q.0 > a && q.0 < b) {
                visit(t)?;
            }
        }
        FieldProfile::RampThenPlateau { plateau_start } if *plateau_start > a && *plateau_start < b => {
            visit(*plateau_start)?;
        }
        _ => {}
    }
    Ok((lo, hi))
}

/// Broken-phase protocol: the state starts as the ground state at `t = 0`
/// and is evolved under the ramp; the reference is that initial ground state.
#[derive(Debug, Clone)]
pub struct BpProtocol {
    omega0: f64,
    traj: AuxTrajectory,
}

impl BpProtocol {
    /// Integrates the auxiliary equation on `[0, t_max]`; needs `B < 1` there.
    pub fn new(gamma: f64, profile: &FieldProfile, t_max: f64, tol: Tolerances) -> Result<Self> {
        check_gamma(gamma)?;
        if !(t_max >= 0.0) {
            return Err(Error::domain("broken-phase protocol runs forward from t = 0"));
        }
        let (_, bmax) = field_range(profile, 0.0, t_max)?;
        if !(bmax < 1.0) {
            return Err(Error::PhaseDomain {
                phase: Phase::BrokenPhase,
                reason: alloc::format!("field reaches B = {bmax} >= 1 before t = {t_max}"),
            });
        }
        let omega0 = omega_bp_sq(profile.eval(0.0)?, gamma).sqrt();
        let ic = instantaneous_ic(omega0, 0.0)?;
        let wsq = |t: f64| profile.eval(t).map(|b| omega_bp_sq(b, gamma)).unwrap_or(f64::NAN);
        let traj = solve_auxiliary(wsq, ic, t_max, tol)?;
        Ok(BpProtocol { omega0, traj })
    }

    pub fn omega_ref(&self) -> f64 {
        self.omega0
    }

    pub fn trajectory(&self) -> &AuxTrajectory {
        &self.traj
    }

    pub fn state(&self, t: f64) -> Result<AuxState> {
        self.traj.state_at(t)
    }

    /// `P = ln[sqrt(f^2 f'^2 + 1) / (omega0 f^2)]`, `Q = arctan(f f')`.
    pub fn nc(&self, t: f64) -> Result<NcValue> {
        let s = self.state(t)?;
        Ok(bp_value(&s, self.omega0))
    }
}

fn bp_value(s: &AuxState, omega0: f64) -> NcValue {
    let ff = s.f * s.fdot;
    let p = (ff * ff + 1.0).sqrt().ln() - (omega0 * s.f * s.f).ln();
    NcValue::from_parts(p, ff.atan())
}

fn sp_value(s: &AuxState, omega0: f64) -> NcValue {
    let ff = s.f * s.fdot;
    let p = (omega0 * s.f * s.f).ln() - (ff * ff + 1.0).sqrt().ln();
    NcValue::from_parts(p, (-ff).atan())
}

/// Symmetric-phase protocol: the state equals the ground state of the final
/// field at the anchor time and is evolved backward; the complexity is that of
/// the anchored ground state relative to the state at `t`.
#[derive(Debug, Clone)]
pub struct SpProtocol {
    anchor: f64,
    omega0: f64,
    traj: AuxTrajectory,
}

impl SpProtocol {
    /// `anchor` defaults to the profile's plateau start. Needs `B > 1` on `[t_min, anchor]`.
    pub fn new(gamma: f64, profile: &FieldProfile, anchor: Option<f64>, t_min: f64, tol: Tolerances) -> Result<Self> {
        check_gamma(gamma)?;
        let anchor = anchor
            .or_else(|| profile.plateau_start())
            .ok_or_else(|| Error::domain("symmetric-phase protocol needs an anchor time"))?;
        if !(t_min <= anchor) {
            return Err(Error::domain("symmetric-phase protocol evaluates before its anchor"));
        }
        let (bmin, _) = field_range(profile, t_min, anchor)?;
        if !(bmin > 1.0) {
            return Err(Error::PhaseDomain {
                phase: Phase::SymmetricPhase,
                reason: alloc::format!("field drops to B = {bmin} <= 1 on [{t_min}, {anchor}]"),
            });
        }
        let omega0 = omega_sp_sq(profile.eval(anchor)?, gamma).sqrt();
        let ic = instantaneous_ic(omega0, anchor)?;
        let wsq = |t: f64| profile.eval(t).map(|b| omega_sp_sq(b, gamma)).unwrap_or(f64::NAN);
        let traj = solve_auxiliary(wsq, ic, t_min, tol)?;
        Ok(SpProtocol { anchor, omega0, traj })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn omega_ref(&self) -> f64 {
        self.omega0
    }

    pub fn trajectory(&self) -> &AuxTrajectory {
        &self.traj
    }

    pub fn state(&self, t: f64) -> Result<AuxState> {
        self.traj.state_at(t)
    }

    /// `P = ln[omega0 f^2 / sqrt(f^2 f'^2 + 1)]`, `Q = arctan(-f f')`.
    pub fn nc(&self, t: f64) -> Result<NcValue> {
        let s = self.state(t)?;
        Ok(sp_value(&s, self.omega0))
    }
}

/// Broken-phase protocol complexity at one time (integrates from scratch).
pub fn nc_bp_protocol(t: f64, gamma: f64, profile: &FieldProfile) -> Result<NcValue> {
    BpProtocol::new(gamma, profile, t, Tolerances::default())?.nc(t)
}

/// Symmetric-phase protocol complexity at one time, anchored at the plateau start.
pub fn nc_sp_protocol(t: f64, gamma: f64, profile: &FieldProfile) -> Result<NcValue> {
    SpProtocol::new(gamma, profile, None, t, Tolerances::default())?.nc(t)
}

/// Frequency scales of the linearized ramp near `B = 1`: `omega^2 = b^2 eps`.
pub fn near_qpt_scales(gamma: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain("near-critical scales vanish for gamma = 1"));
    }
    Ok((2.0 * (2.0 * (1.0 - gamma)).sqrt(), 2.0 * (1.0 - gamma).sqrt()))
}

/// `eps -> 0` limits of both protocols for the ramp `B = t` with plateau at 2.
///
/// `bp` and `sp` are superpositions on the Bessel pair in the broken
/// (`eps = 1 - t`) and symmetric (`eps = t - 1`) phase. The references are the
/// protocol references `omega(B=0)` and `omega(B=2)`.
pub fn nc_near_qpt(bp: &PinneyCoeffs, sp: &PinneyCoeffs, gamma: f64) -> Result<(NcValue, NcValue)> {
    let (b1, b2) = near_qpt_scales(gamma)?;
    for c in [bp, sp] {
        let d = 27.0 * c.a1 * c.a3 - 4.0 * PI * PI;
        if d < -1e-9 * 27.0 * (c.a1 * c.a3).abs() {
            return Err(Error::domain(alloc::format!("27 A1 A3 - 4 pi^2 = {d} < 0")));
        }
    }
    let s1 = near_qpt_state(bp, b1)?;
    let s2 = near_qpt_state(sp, b2)?;
    // d/dt = -d/deps in the broken phase, +d/deps in the symmetric phase
    let s1 = AuxState { t: 1.0, f: s1.f, fdot: -s1.fdot };
    let s2 = AuxState { t: 1.0, f: s2.f, fdot: s2.fdot };
    let w10 = omega_bp_sq(0.0, gamma).sqrt();
    let w20 = omega_sp_sq(2.0, gamma).sqrt();
    Ok((bp_value(&s1, w10), sp_value(&s2, w20)))
}

/// The limiting formula in its printed form, with a free constant `n`:
///
/// `P = ln[(3/b)^{2/3} a1 omega0 / sqrt(1 + 3^{2/3} n^2 D)]`,
/// `Q = arctan[3^{1/3} n sqrt(D) / Gamma(2/3)]`, `D = 27 a1 a3 - 4 pi^2`.
///
/// Only the angular part matches the derived limit, and only for
/// `n = Gamma(2/3) / (2 pi 3^{1/3})` (see [`near_qpt_printed_n`]); the
/// logarithmic part lacks `Gamma(2/3)^2` factors.
pub fn nc_near_qpt_printed(a1: f64, a3: f64, b: f64, omega0: f64, n: f64) -> Result<NcValue> {
    let d = 27.0 * a1 * a3 - 4.0 * PI * PI;
    if d < 0.0 {
        return Err(Error::domain(alloc::format!("27 A1 A3 - 4 pi^2 = {d} < 0")));
    }
    let arg = (3.0 / b).powf(2.0 / 3.0) * a1 * omega0 / (1.0 + 3f64.powf(2.0 / 3.0) * n * n * d).sqrt();
    if !(arg > 0.0) {
        return Err(Error::domain("nonpositive logarithm argument"));
    }
    let q = (3f64.powf(1.0 / 3.0) / gamma(2.0 / 3.0) * n * d.sqrt()).atan();
    Ok(NcValue::from_parts(arg.ln(), q))
}

/// Value of the printed constant `n` implied by the Bessel-pair expansion.
pub fn near_qpt_printed_n() -> f64 {
    gamma(2.0 / 3.0) / (2.0 * PI * 3f64.powf(1.0 / 3.0))
}

/// Second moments of the `n`-th eigenstate of the invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMoments {
    pub q2: f64,
    pub p2: f64,
    pub pq_sym: f64,
    pub n: u32,
}

pub fn oscillator_moments(s: &AuxState, n: u32) -> Result<OscillatorMoments> {
    if !(s.f > 0.0) {
        return Err(Error::domain("moments need f > 0"));
    }
    let k = n as f64 + 0.5;
    let ff = s.f * s.fdot;
    Ok(OscillatorMoments { q2: s.f * s.f * k, p2: (1.0 + ff * ff) * k / (s.f * s.f), pq_sym: 2.0 * ff * k, n })
}

impl OscillatorMoments {
    /// `<P Q + Q P> / (2n + 1)`, which equals `f f'` for every `n`.
    fn correlation(&self) -> f64 {
        self.pq_sym / (2.0 * self.n as f64 + 1.0)
    }
}

/// Complexity from uncertainties: `P = ln[(dP_T/dP_R)(dQ_R/dQ_T)]` and the
/// angle between the two covariance ellipses.
///
/// The angular part uses the normalized correlation `s = <PQ+QP>/(2n+1)` of
/// both states, `Q = arctan[(s_R - s_T)/(1 + s_R s_T)]`; for a static reference
/// this is `arctan(s_T)` up to sign, i.e. `arctan(f f')` of the target.
pub fn nc_from_moments(r: &OscillatorMoments, t: &OscillatorMoments) -> Result<NcValue> {
    for m in [r, t] {
        if !(m.q2 > 0.0) || !(m.p2 > 0.0) {
            return Err(Error::domain("moments must be positive"));
        }
    }
    let p = 0.5 * ((t.p2 / r.p2).ln() + (r.q2 / t.q2).ln());
    let (sr, st) = (r.correlation(), t.correlation());
    Ok(NcValue::from_parts(p, ((sr - st) / (1.0 + sr * st)).atan()))
}

/// Bogoliubov angle: `artanh((1-g)/(2B-1-g))` (symmetric) or
/// `artanh((B^2-g)/(2-B^2-g))` (broken).
pub fn bogoliubov_angle(phase: Phase, b: f64, gamma: f64) -> Result<f64> {
    let x = match phase {
        Phase::SymmetricPhase => (1.0 - gamma) / (2.0 * b - 1.0 - gamma),
        Phase::BrokenPhase => (b * b - gamma) / (2.0 - b * b - gamma),
        Phase::Modified => return Err(Error::domain("no Bogoliubov angle for the modified model")),
    };
    if !(x.abs() < 1.0) {
        return Err(Error::domain(alloc::format!("artanh argument {x} outside (-1, 1)")));
    }
    Ok(x.atanh())
}

/// Collective-spin second moments (symmetrized cross terms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub jx2: f64,
    pub jy2: f64,
    pub jz2: f64,
    pub jxy_sym: f64,
    pub jzx_sym: f64,
    pub n: f64,
    /// Rotation angle of the broken-phase frame.
    pub theta0: f64,
}

/// Complexity from spin correlators, evaluated as a formula.
///
/// Symmetric phase: `A = 1/2 ln[e^{2 Theta} w^2 <Jy^2> / (w0^2 <Jx^2>)]`,
/// `B = arctan(<J(x Jy)>/N)`. Broken phase: `<Jx^2>` is replaced by
/// `Y = cos^2 t0 <Jx^2> + sin^2 t0 <Jz^2> - sin t0 cos t0 <J(z Jx)>` and
/// `B = arctan(cos^2 t0 <J(x Jy)> / (2N))`.
pub fn nc_from_spin_correlators(
    phase: Phase,
    spin: &SpinMoments,
    omega_t: f64,
    omega_0: f64,
    theta: f64,
) -> Result<NcValue> {
    if !(spin.n > 0.0) {
        return Err(Error::domain("particle number must be positive"));
    }
    let (den, q) = match phase {
        Phase::SymmetricPhase => (spin.jx2, (spin.jxy_sym / spin.n).atan()),
        Phase::BrokenPhase => {
            let (s, c) = spin.theta0.sin_cos();
            let y = c * c * spin.jx2 + s * s * spin.jz2 - s * c * spin.jzx_sym;
            (y, (c * c * spin.jxy_sym / (2.0 * spin.n)).atan())
        }
        Phase::Modified => return Err(Error::domain("spin-correlator form covers the two LMG phases")),
    };
    let arg = (2.0 * theta).exp() * omega_t * omega_t * spin.jy2 / (omega_0 * omega_0 * den);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::domain(alloc::format!("log argument {arg} is not positive")));
    }
    Ok(NcValue::from_parts(0.5 * arg.ln(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ermakov::{complex_frequency, BesselPair, PinneyConvention};
    use crate::model::{ModelParams, ModifiedParams};
    use proptest::prelude::*;

    fn lmg(b: f64, g: f64) -> ModelParams {
        ModelParams::with_field(b, g).unwrap()
    }

    fn cf(re: f64, im: f64) -> ComplexFrequency {
        ComplexFrequency { re, im }
    }

    #[test]
    fn static_examples() {
        assert_eq!(nc_static(Phase::BrokenPhase, lmg(0.3, 0.2), lmg(0.3, 0.2)).unwrap().value, 0.0);
        let v = nc_static(Phase::BrokenPhase, lmg(0.0, 0.0), lmg(0.6, 0.0)).unwrap().value;
        assert!((v - 0.25 * 0.64f64.ln().abs()).abs() < 1e-15);
        assert!((v - 0.111_571_775_657_104_9).abs() < 1e-12);
        let e = nc_static(Phase::BrokenPhase, lmg(0.0, 0.0), lmg(1.0, 0.0)).unwrap_err();
        assert_eq!(e.kind(), "ZeroModeError");
        let m = |o, x| ModifiedParams::new(o, x, None).unwrap();
        let v = nc_static(Phase::Modified, m(0.0, 0.0), m(1.0, 0.3)).unwrap().value;
        let (u, vv) = crate::model::uv_factors(1.0, 0.3);
        assert!((v - 0.5 * (u * vv).sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn static_divergence_slope() {
        // least squares of C against ln(1 - B_T)
        let pts: alloc::vec::Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let bt = 0.99 + (0.9999 - 0.99) * k as f64 / 49.0;
                let c = nc_static(Phase::BrokenPhase, lmg(0.0, 0.3), lmg(bt, 0.3)).unwrap().value;
                ((1.0 - bt).ln(), c)
            })
            .collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        assert!((sxy / sxx + 0.25).abs() < 1e-3);
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(nc_gaussian(cf(1.0, 0.3), cf(1.0, 0.3)).unwrap().value, 0.0);
        let v = nc_gaussian(cf(1.0, 0.0), cf(1.0, 1.0)).unwrap().value;
        let expect = 0.5 * ((0.5 * 2f64.ln()).powi(2) + (PI / 4.0).powi(2)).sqrt();
        assert!((v - expect).abs() < 1e-15 && (v - 0.429_23).abs() < 1e-5);
        let v = nc_gaussian(cf(2.0, 0.0), cf(3.0, 0.0)).unwrap().value;
        assert!((v - 0.5 * 1.5f64.ln()).abs() < 1e-15);
        assert!(nc_gaussian(cf(-1.0, 0.0), cf(1.0, 0.0)).is_err());
    }

    #[test]
    fn protocol_endpoints_vanish() {
        let prof = FieldProfile::standard_ramp();
        assert!(nc_bp_protocol(0.0, 0.1, &prof).unwrap().value < 1e-8);
        assert!(nc_sp_protocol(2.0, 0.1, &prof).unwrap().value < 1e-8);
    }

    #[test]
    fn protocols_match_gaussian_formula() {
        let prof = FieldProfile::standard_ramp();
        let bp = BpProtocol::new(0.1, &prof, 0.99, Tolerances::default()).unwrap();
        let sp = SpProtocol::new(0.1, &prof, None, 1.01, Tolerances::default()).unwrap();
        for k in 0..50 {
            let t = 0.99 * k as f64 / 49.0;
            let s = bp.state(t).unwrap();
            let g = nc_gaussian(ComplexFrequency::real(bp.omega_ref()), complex_frequency(&s)).unwrap();
            assert!((bp.nc(t).unwrap().value - g.value).abs() < 1e-10);
            let t = 1.01 + 0.99 * k as f64 / 49.0;
            let s = sp.state(t).unwrap();
            let g = nc_gaussian(complex_frequency(&s), ComplexFrequency::real(sp.omega_ref())).unwrap();
            assert!((sp.nc(t).unwrap().value - g.value).abs() < 1e-10);
        }
    }

    #[test]
    fn fig1_reference_values() {
        // independent high-accuracy integration of the same protocols
        let prof = FieldProfile::standard_ramp();
        let bp = BpProtocol::new(0.1, &prof, 0.9999, Tolerances::default()).unwrap();
        let sp = SpProtocol::new(0.1, &prof, None, 1.0001, Tolerances::default()).unwrap();
        for (t, v) in [(0.25, 0.00486), (0.5, 0.03722), (0.75, 0.11843)] {
            assert!((bp.nc(t).unwrap().value - v).abs() < 1e-5, "bp t={t}");
        }
        for (t, v) in [(1.25, 0.36802), (1.5, 0.19962), (1.75, 0.05926)] {
            assert!((sp.nc(t).unwrap().value - v).abs() < 1e-5, "sp t={t}");
        }
        let gap = bp.nc(0.9999).unwrap().value - sp.nc(1.0001).unwrap().value;
        assert!((gap + 0.2704).abs() < 2e-3, "{gap}");
    }

    #[test]
    fn protocol_domain_errors() {
        let prof = FieldProfile::standard_ramp();
        assert_eq!(nc_bp_protocol(1.2, 0.1, &prof).unwrap_err().kind(), "PhaseDomainError");
        assert!(nc_sp_protocol(0.9, 0.1, &prof).is_err());
        assert!(nc_sp_protocol(1.5, 0.1, &FieldProfile::Linear).is_err());
        assert!(nc_bp_protocol(0.5, 1.0, &prof).is_err());
    }

    fn anchored(b: f64, eps: f64, s: &AuxState, sign: f64) -> PinneyCoeffs {
        let pair = BesselPair::new(b).unwrap();
        PinneyCoeffs::anchored(&pair, eps, s.f, sign * s.fdot, PinneyConvention::Standard).unwrap()
    }

    #[test]
    fn near_qpt_limits_match_protocols() {
        let g = 0.1;
        let prof = FieldProfile::standard_ramp();
        let bp = BpProtocol::new(g, &prof, 0.9999, Tolerances::default()).unwrap();
        let sp = SpProtocol::new(g, &prof, None, 1.0001, Tolerances::default()).unwrap();
        let (b1, b2) = near_qpt_scales(g).unwrap();
        let e1 = 0.01;
        let c1 = anchored(b1, e1, &bp.state(1.0 - e1).unwrap(), -1.0);
        let c2 = anchored(b2, e1, &sp.state(1.0 + e1).unwrap(), 1.0);
        let (l1, l2) = nc_near_qpt(&c1, &c2, g).unwrap();
        assert!((l1.value - bp.nc(0.9999).unwrap().value).abs() < 1e-2);
        assert!((l2.value - sp.nc(1.0001).unwrap().value).abs() < 1e-2);
        assert!((l1.value - l2.value).abs() > 0.1);

        // the printed formula's angular part with the implied constant
        let d = |c: &PinneyCoeffs| PinneyCoeffs { a1: c.a3, a3: c.a1, ..*c };
        let pr = nc_near_qpt_printed(d(&c1).a1, d(&c1).a3, b1, bp.omega_ref(), near_qpt_printed_n()).unwrap();
        assert!((pr.parts.unwrap().1.abs() - l1.parts.unwrap().1.abs()).abs() < 1e-9);
        assert!(nc_near_qpt(&c1, &c2, 1.0).is_err());
    }

    #[test]
    fn moments_examples_and_uncertainty() {
        let m = oscillator_moments(&AuxState { t: 0.0, f: 1.0, fdot: 0.0 }, 0).unwrap();
        assert_eq!((m.q2, m.p2, m.pq_sym), (0.5, 0.5, 0.0));
        let m = oscillator_moments(&AuxState { t: 0.0, f: 1.0, fdot: 0.0 }, 1).unwrap();
        assert_eq!((m.q2, m.p2, m.pq_sym), (1.5, 1.5, 0.0));
        let m = oscillator_moments(&AuxState { t: 0.0, f: 0.5, fdot: 0.2 }, 0).unwrap();
        assert!((m.q2 - 0.125).abs() < 1e-15 && (m.p2 - 2.02).abs() < 1e-14 && (m.pq_sym - 0.1).abs() < 1e-15);
    }

    #[test]
    fn moments_form_examples() {
        let st = |f: f64, fd: f64| AuxState { t: 0.0, f, fdot: fd };
        let a = oscillator_moments(&st(0.8, 0.0), 0).unwrap();
        assert_eq!(nc_from_moments(&a, &a).unwrap().value, 0.0);
        let (wr, wt) = (2.0, 0.7);
        let r = oscillator_moments(&st(1.0 / wr.sqrt(), 0.0), 0).unwrap();
        let t = oscillator_moments(&st(1.0 / wt.sqrt(), 0.0), 0).unwrap();
        assert!((nc_from_moments(&r, &t).unwrap().value - 0.5 * (wt / wr).ln().abs()).abs() < 1e-14);
        let t = oscillator_moments(&st(1.0, 1.0), 0).unwrap();
        let r = oscillator_moments(&st(1.0, 0.0), 0).unwrap();
        assert!((nc_from_moments(&r, &t).unwrap().parts.unwrap().1.abs() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bogoliubov_examples() {
        assert!((bogoliubov_angle(Phase::SymmetricPhase, 2.0, 0.0).unwrap() - (1.0f64 / 3.0).atanh()).abs() < 1e-15);
        assert!((bogoliubov_angle(Phase::SymmetricPhase, 2.0, 0.0).unwrap() - 0.346_573_590_279_972_6).abs() < 1e-14);
        assert_eq!(bogoliubov_angle(Phase::BrokenPhase, 0.0, 0.0).unwrap(), 0.0);
        assert!(bogoliubov_angle(Phase::SymmetricPhase, 1.0, 0.0).is_err());
        assert!(bogoliubov_angle(Phase::BrokenPhase, 1.0, 0.3).is_err());
    }

    fn spin(jx2: f64, jy2: f64, jxy: f64) -> SpinMoments {
        SpinMoments { jx2, jy2, jz2: 0.0, jxy_sym: jxy, jzx_sym: 0.0, n: 100.0, theta0: 0.0 }
    }

    #[test]
    fn spin_correlator_examples() {
        let v = nc_from_spin_correlators(Phase::SymmetricPhase, &spin(3.0, 3.0, 0.0), 1.5, 1.5, 0.0).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(nc_from_spin_correlators(Phase::SymmetricPhase, &spin(0.0, 3.0, 0.0), 1.0, 1.0, 0.0).is_err());
        // static limit: omega(t) = omega0, moments carrying the frequency ratio
        let (wr, wt, th) = (1.3, 0.4, 0.2);
        let s = spin(1.0, (-2.0 * th).exp() * (wt / wr).powi(2), 0.0);
        let v = nc_from_spin_correlators(Phase::SymmetricPhase, &s, 1.0, 1.0, th).unwrap();
        let st = nc_static(
            Phase::Modified,
            ModifiedParams::new(0.0, 0.5 * (wr * wr - 1.0), None).unwrap(),
            ModifiedParams::new(0.0, 0.5 * (wt * wt - 1.0), None).unwrap(),
        )
        .unwrap();
        assert!((v.value - st.value).abs() < 1e-12);
    }

    #[test]
    fn spin_correlators_from_oscillator_moments() {
        // <Jy^2> ~ <P^2> e^{-2 Theta} / w^2 and <Jx^2> ~ <Q^2> at leading order
        let (w0, th, lam, n) = (1.7, 0.3, 37.0, 500.0);
        for (f, fd, w) in [(0.6, 0.2, 1.1), (0.9, -0.4, 0.8), (1.2, 0.05, 2.0)] {
            let r = oscillator_moments(&AuxState { t: 0.0, f: 1.0 / w0.sqrt(), fdot: 0.0 }, 0).unwrap();
            let t = oscillator_moments(&AuxState { t: 0.0, f, fdot: fd }, 0).unwrap();
            let s = SpinMoments {
                jx2: lam * t.q2,
                jy2: lam * t.p2 * (-2.0 * th).exp() / (w * w),
                jz2: 0.0,
                jxy_sym: -n * t.pq_sym,
                jzx_sym: 0.0,
                n,
                theta0: 0.0,
            };
            let a = nc_from_spin_correlators(Phase::SymmetricPhase, &s, w, w0, th).unwrap();
            let b = nc_from_moments(&r, &t).unwrap();
            assert!((a.value - b.value).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn gaussian_is_symmetric(a in 0.01f64..10.0, b in -5.0f64..5.0, c in 0.01f64..10.0, d in -5.0f64..5.0) {
            let x = nc_gaussian(cf(a, b), cf(c, d)).unwrap();
            let y = nc_gaussian(cf(c, d), cf(a, b)).unwrap();
            prop_assert_eq!(x.value, y.value);
        }

        #[test]
        fn moments_obey_uncertainty(f in 0.05f64..5.0, fd in -5.0f64..5.0, n in 0u32..6) {
            let m = oscillator_moments(&AuxState { t: 0.0, f, fdot: fd }, n).unwrap();
            let k = n as f64 + 0.5;
            let lhs = m.q2 * m.p2 - (m.pq_sym / 2.0).powi(2);
            prop_assert!((lhs - k * k).abs() < 1e-9 * (m.q2 * m.p2).max(1.0));
        }

        #[test]
        fn moments_log_part_matches_gaussian(f1 in 0.2f64..3.0, d1 in -2.0f64..2.0, f2 in 0.2f64..3.0, d2 in -2.0f64..2.0) {
            let (s1, s2) = (AuxState { t: 0.0, f: f1, fdot: d1 }, AuxState { t: 0.0, f: f2, fdot: d2 });
            let a = nc_from_moments(&oscillator_moments(&s1, 0).unwrap(), &oscillator_moments(&s2, 0).unwrap()).unwrap();
            let b = nc_gaussian(complex_frequency(&s1), complex_frequency(&s2)).unwrap();
            let (pa, qa) = a.parts.unwrap();
            let (pb, qb) = b.parts.unwrap();
            prop_assert!((pa - pb).abs() < 1e-12);
            prop_assert!((qa.abs() - qb.abs()).abs() < 1e-12);
        }
    }
}
