//! Cross-module checks of the Nielsen complexity pipeline.

use lmgc_core::ermakov::{complex_frequency, instantaneous_ic, ComplexFrequency};
use lmgc_core::model::{FieldProfile, ModelParams, Phase};
use lmgc_core::nielsen::{
    nc_bp_protocol, nc_from_moments, nc_gaussian, nc_static, oscillator_moments, BpProtocol, SpProtocol,
};
use lmgc_core::ode::Tolerances;

#[test]
fn protocol_gaussian_and_moment_routes_agree() {
    let profile = FieldProfile::standard_ramp();
    let bp = BpProtocol::new(0.3, &profile, 0.95, Tolerances::default()).unwrap();
    let w0 = bp.omega_ref();
    let reference = instantaneous_ic(w0, 0.0).unwrap();
    for k in 0..=19 {
        let t = k as f64 / 20.0;
        let s = bp.state(t).unwrap();
        let direct = bp.nc(t).unwrap().value;
        let gauss = nc_gaussian(ComplexFrequency::real(w0), complex_frequency(&s)).unwrap().value;
        assert!((direct - gauss).abs() < 1e-12, "t = {t}: {direct} vs {gauss}");
        for n in [0, 3] {
            let m = nc_from_moments(&oscillator_moments(&reference, n).unwrap(), &oscillator_moments(&s, n).unwrap())
                .unwrap()
                .value;
            assert!((direct - m).abs() < 1e-12, "t = {t}, n = {n}: {direct} vs {m}");
        }
    }
}

#[test]
fn one_shot_protocol_matches_shared_trajectory() {
    let profile = FieldProfile::standard_ramp();
    let bp = BpProtocol::new(0.1, &profile, 0.9, Tolerances::default()).unwrap();
    for t in [0.2, 0.5, 0.9] {
        let a = nc_bp_protocol(t, 0.1, &profile).unwrap().value;
        let b = bp.nc(t).unwrap().value;
        assert!((a - b).abs() < 1e-8 * b.max(1e-8), "t = {t}: {a} vs {b}");
    }
}

#[test]
fn static_log_part_is_additive_along_a_chain() {
    let g = 0.4;
    let p = |a: f64, b: f64| {
        let v = nc_static(
            Phase::BrokenPhase,
            ModelParams::with_field(a, g).unwrap(),
            ModelParams::with_field(b, g).unwrap(),
        )
        .unwrap();
        v.parts.unwrap().0
    };
    for (a, b, c) in [(0.0, 0.5, 0.9), (0.2, 0.7, 0.95), (0.9, 0.1, 0.6)] {
        assert!((p(a, b) + p(b, c) - p(a, c)).abs() < 1e-12);
        assert!((p(a, b) + p(b, a)).abs() < 1e-14);
    }
}

#[test]
fn symmetric_protocol_relaxes_to_zero_at_the_anchor() {
    let profile = FieldProfile::standard_ramp();
    let sp = SpProtocol::new(0.1, &profile, None, 1.01, Tolerances::default()).unwrap();
    assert_eq!(sp.anchor(), 2.0);
    let vals: Vec<f64> = (0..=20).map(|k| sp.nc(1.01 + 0.99 * k as f64 / 20.0).unwrap().value).collect();
    assert!(vals[20] < 1e-8);
    assert!(vals[0] > 0.4, "{}", vals[0]);
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
}
