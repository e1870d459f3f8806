//! Coordinate charts on the `(Omega, xi)` parameter plane.
//!
//! For `xi > 0`: `x1 = xi/V`, `x2 = V^{1/2} sqrt(xi)` with `V = sqrt(Omega^2 + 1)`.
//! For `xi < 0` the tilde chart uses `-xi`. Inverse: `|xi| = sqrt(x1) x2`,
//! `Omega = sqrt(x2^2/x1 - 1)`, so only `Omega >= 0` is represented.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `(Omega, xi)` itself.
    OmegaXi,
    /// Ground state, `xi > 0`; metric factor `1 + 2 x1`.
    XPos,
    /// Ground state, `xi < 0`; metric factor `1 - 2 x1`, separatrix at `x1 = 1/2`.
    XTilde,
    /// Highest state, `xi > 0`; metric factor `1 - 2 x1`.
    XExcited,
}

/// Energy sector whose metric a chart carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Ground,
    Excited,
}

impl Chart {
    pub fn is_diagonal(self) -> bool {
        self != Chart::OmegaXi
    }

    /// `s` in the metric factor `w = 1 + 2 s x1`.
    pub fn sigma(self) -> f64 {
        match self {
            Chart::XPos => 1.0,
            _ => -1.0,
        }
    }

    pub fn sector(self) -> Sector {
        match self {
            Chart::XExcited => Sector::Excited,
            _ => Sector::Ground,
        }
    }

    /// Sign of `xi` covered by a diagonal chart.
    fn xi_sign(self) -> f64 {
        match self {
            Chart::XTilde => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub c1: f64,
    pub c2: f64,
}

impl ChartPoint {
    /// Validates the chart's domain: `x1 > 0`, `x2 > 0`, and for the tilde
    /// chart also `x2^2 >= x1`.
    pub fn new(chart: Chart, c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::domain("chart coordinates must be finite"));
        }
        if chart.is_diagonal() {
            if !(c1 > 0.0) || !(c2 > 0.0) {
                return Err(Error::domain(alloc::format!("{chart:?} needs x1 > 0 and x2 > 0, got ({c1}, {c2})")));
            }
            // equality is Omega = 0
            if chart == Chart::XTilde && !(c2 * c2 >= c1 * (1.0 - 1e-12)) {
                return Err(Error::domain(alloc::format!("tilde chart needs x2^2 > x1, got ({c1}, {c2})")));
            }
        }
        Ok(ChartPoint { chart, c1, c2 })
    }

    pub fn omega_xi(omega: f64, xi: f64) -> Result<Self> {
        Self::new(Chart::OmegaXi, omega, xi)
    }
}

/// `(x1, x2)` of a diagonal chart from `(Omega, xi)`; no domain checks.
pub(crate) fn forward(chart: Chart, omega: f64, xi: f64) -> (f64, f64) {
    let v = (omega * omega + 1.0).sqrt();
    let a = chart.xi_sign() * xi;
    (a / v, v.sqrt() * a.sqrt())
}

pub fn chart_transform(p: &ChartPoint, target: Chart) -> Result<ChartPoint> {
    let (omega, xi) = match p.chart {
        Chart::OmegaXi => (p.c1, p.c2),
        c => {
            let r = p.c2 * p.c2 / p.c1 - 1.0;
            if r < -1e-12 {
                return Err(Error::domain("x2^2 < x1 has no real Omega"));
            }
            (r.max(0.0).sqrt(), c.xi_sign() * p.c1.sqrt() * p.c2)
        }
    };
    if target == Chart::OmegaXi {
        return ChartPoint::new(Chart::OmegaXi, omega, xi);
    }
    if omega < 0.0 {
        return Err(Error::domain("diagonal charts represent Omega >= 0 only"));
    }
    if !(target.xi_sign() * xi > 0.0) {
        return Err(Error::domain(alloc::format!(
            "{target:?} needs xi {} 0, got {xi}; the coordinates would become invalid",
            if target.xi_sign() > 0.0 { ">" } else { "<" }
        )));
    }
    let (x1, x2) = forward(target, omega, xi);
    ChartPoint::new(target, x1, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn transform_examples() {
        let p = chart_transform(&ChartPoint::omega_xi(0.0, 1.0).unwrap(), Chart::XPos).unwrap();
        assert_eq!((p.c1, p.c2), (1.0, 1.0));
        let p = chart_transform(&ChartPoint::omega_xi(0.0, -0.25).unwrap(), Chart::XTilde).unwrap();
        assert_eq!((p.c1, p.c2), (0.25, 0.5));
        let a = ChartPoint::omega_xi(1.0, -0.1).unwrap();
        let b = chart_transform(&chart_transform(&a, Chart::XTilde).unwrap(), Chart::OmegaXi).unwrap();
        assert!((a.c1 - b.c1).abs() < 1e-12 && (a.c2 - b.c2).abs() < 1e-12);
    }

    #[test]
    fn sign_incompatible_targets() {
        let p = ChartPoint::omega_xi(0.5, -0.2).unwrap();
        assert_eq!(chart_transform(&p, Chart::XPos).unwrap_err().kind(), "DomainError");
        assert!(chart_transform(&ChartPoint::omega_xi(0.5, 0.2).unwrap(), Chart::XTilde).is_err());
        assert!(chart_transform(&ChartPoint::omega_xi(0.5, 0.0).unwrap(), Chart::XExcited).is_err());
        assert!(ChartPoint::new(Chart::XTilde, 0.3, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn round_trips(om in 0.05f64..3.0, xi in 0.01f64..3.0) {
            for (chart, x) in [(Chart::XPos, xi), (Chart::XExcited, xi), (Chart::XTilde, -xi)] {
                let a = ChartPoint::omega_xi(om, x).unwrap();
                let q = chart_transform(&a, chart).unwrap();
                let b = chart_transform(&q, Chart::OmegaXi).unwrap();
                prop_assert!((a.c1 - b.c1).abs() < 1e-12 && (a.c2 - b.c2).abs() < 1e-12);
                let r = chart_transform(&b, chart).unwrap();
                prop_assert!((q.c1 - r.c1).abs() < 1e-12 && (q.c2 - r.c2).abs() < 1e-12);
            }
        }
    }
}
