//! The quantum metric in each chart.
//!
//! In `(Omega, xi)`, with `U = V + 2 xi` (ground) or `U = V - 2 xi` (excited):
//!
//! ```text
//! g_OO = Omega^2 (U - V)^2 / (32 U^2 V^4)
//! g_OX = -xi Omega / (16 U^2 V^2)
//! g_XX = 1 / (8 U^2)
//! ```
//!
//! The diagonal charts carry `g11 = 3/(32 w^2)`, `g22 = x1^2/(8 x2^2 w^2)` with
//! `w = 1 + 2 x1` (`XPos`) or `w = 1 - 2 x1` (`XTilde`, `XExcited`).

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::chart::{forward, Chart, ChartPoint, Sector};
use crate::error::{Error, Result};

const SINGULAR: f64 = 1e-12;

/// Symmetric 2x2 metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric2 {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Metric2 {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.det() > 0.0
    }

    pub fn inverse(&self) -> Metric2 {
        let d = self.det();
        Metric2 { g11: self.g22 / d, g12: -self.g12 / d, g22: self.g11 / d }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        match (a, b) {
            (0, 0) => self.g11,
            (1, 1) => self.g22,
            _ => self.g12,
        }
    }

    /// `g(v, v)`.
    pub fn norm_sq(&self, v: [f64; 2]) -> f64 {
        self.g11 * v[0] * v[0] + 2.0 * self.g12 * v[0] * v[1] + self.g22 * v[1] * v[1]
    }

    pub fn max_abs(&self) -> f64 {
        self.g11.abs().max(self.g12.abs()).max(self.g22.abs())
    }
}

/// Metric in `(Omega, xi)` for the given sector.
pub fn omega_xi_metric(omega: f64, xi: f64, sector: Sector) -> Result<Metric2> {
    let v = (omega * omega + 1.0).sqrt();
    let s = match sector {
        Sector::Ground => 1.0,
        Sector::Excited => -1.0,
    };
    let u = v + 2.0 * s * xi;
    if u.abs() < SINGULAR {
        return Err(Error::Separatrix);
    }
    let (u2, v2) = (u * u, v * v);
    Ok(Metric2 {
        g11: omega * omega * (u - v) * (u - v) / (32.0 * u2 * v2 * v2),
        g12: -xi * omega / (16.0 * u2 * v2),
        g22: 1.0 / (8.0 * u2),
    })
}

/// Diagonal-chart metric without domain checks beyond the singular line.
pub(crate) fn diagonal(chart: Chart, x1: f64, x2: f64) -> Result<Metric2> {
    let w = 1.0 + 2.0 * chart.sigma() * x1;
    if w.abs() < SINGULAR {
        return Err(Error::Separatrix);
    }
    let w2 = w * w;
    Ok(Metric2 { g11: 3.0 / (32.0 * w2), g12: 0.0, g22: x1 * x1 / (8.0 * x2 * x2 * w2) })
}

pub fn metric_eval(p: &ChartPoint) -> Result<Metric2> {
    match p.chart {
        Chart::OmegaXi => omega_xi_metric(p.c1, p.c2, Sector::Ground),
        c => diagonal(c, p.c1, p.c2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackResidual {
    /// `max |J^T g J - g_(Omega, xi)|` over components.
    pub abs: f64,
    /// `abs` divided by the largest `(Omega, xi)` component.
    pub rel: f64,
}

/// Pulls the diagonal-chart metric back to `(Omega, xi)` with a numerical
/// Jacobian and compares with the direct `(Omega, xi)` metric of the target's sector.
pub fn pullback_check(p: &ChartPoint, target: Chart) -> Result<PullbackResidual> {
    if p.chart != Chart::OmegaXi || !target.is_diagonal() {
        return Err(Error::domain("pullback runs from (Omega, xi) to a diagonal chart"));
    }
    let q = super::chart::chart_transform(p, target)?;
    let gt = metric_eval(&q)?;
    let g0 = omega_xi_metric(p.c1, p.c2, target.sector())?;
    let (om, xi) = (p.c1, p.c2);
    // fourth-order central differences of the smooth coordinate map
    let d = |f: &dyn Fn(f64) -> (f64, f64), h: f64| {
        let (a, b, c, e) = (f(-2.0 * h), f(-h), f(h), f(2.0 * h));
        let g = |k: fn(&(f64, f64)) -> f64| (k(&a) - 8.0 * k(&b) + 8.0 * k(&c) - k(&e)) / (12.0 * h);
        (g(|t| t.0), g(|t| t.1))
    };
    let ho = 1e-3 * om.abs().max(0.1);
    let hx = 1e-3 * xi.abs();
    let (d1o, d2o) = d(&|s| forward(target, om + s, xi), ho);
    let (d1x, d2x) = d(&|s| forward(target, om, xi + s), hx);
    // J[a][i] = d x_a / d y_i with y = (Omega, xi)
    let j = [[d1o, d1x], [d2o, d2x]];
    let mut worst: f64 = 0.0;
    for (i, k) in [(0, 0), (0, 1), (1, 1)] {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                s += j[a][i] * gt.get(a, b) * j[b][k];
            }
        }
        worst = worst.max((s - g0.get(i, k)).abs());
    }
    Ok(PullbackResidual { abs: worst, rel: worst / g0.max_abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn metric_examples() {
        let g = metric_eval(&ChartPoint::omega_xi(0.0, 0.0).unwrap()).unwrap();
        assert_eq!((g.g11, g.g12, g.g22), (0.0, 0.0, 0.125));
        let g = metric_eval(&ChartPoint::new(Chart::XPos, 0.5, 1.0).unwrap()).unwrap();
        assert_eq!((g.g11, g.g12, g.g22), (3.0 / 128.0, 0.0, 1.0 / 128.0));
        let e = metric_eval(&ChartPoint::new(Chart::XTilde, 0.5, 1.0).unwrap()).unwrap_err();
        assert_eq!(e, Error::Separatrix);
        assert_eq!(metric_eval(&ChartPoint::omega_xi(0.0, -0.5).unwrap()).unwrap_err(), Error::Separatrix);
    }

    #[test]
    fn pullback_examples() {
        let r = pullback_check(&ChartPoint::omega_xi(1.0, 0.3).unwrap(), Chart::XPos).unwrap();
        assert!(r.abs < 1e-7, "{r:?}");
        let r = pullback_check(&ChartPoint::omega_xi(0.5, -0.2).unwrap(), Chart::XTilde).unwrap();
        assert!(r.abs < 1e-7, "{r:?}");
        // U = 1e-3 next to the separatrix
        let v = 2f64.sqrt();
        let r = pullback_check(&ChartPoint::omega_xi(1.0, -(v - 1e-3) / 2.0).unwrap(), Chart::XTilde).unwrap();
        assert!(r.rel < 1e-5, "{r:?}");
        let r = pullback_check(&ChartPoint::omega_xi(0.7, 0.4).unwrap(), Chart::XExcited).unwrap();
        assert!(r.abs < 1e-7, "{r:?}");
    }

    proptest! {
        #[test]
        fn pullback_residual_small(om in 0.05f64..3.0, t in 0.02f64..0.98) {
            let v = (om * om + 1.0).sqrt();
            // xi ranges kept away from the respective separatrix
            for (chart, xi) in [(Chart::XPos, 2.0 * t), (Chart::XTilde, -0.5 * v * t), (Chart::XExcited, 0.5 * v * t)] {
                let r = pullback_check(&ChartPoint::omega_xi(om, xi).unwrap(), chart).unwrap();
                prop_assert!(r.abs < 1e-7 && r.rel < 1e-7, "{:?} {:?}", chart, r);
            }
        }

        #[test]
        fn diagonal_metrics_are_positive(x1 in 0.01f64..3.0, x2 in 0.01f64..3.0) {
            for c in [Chart::XPos, Chart::XExcited] {
                if let Ok(g) = metric_eval(&ChartPoint::new(c, x1, x2).unwrap()) {
                    prop_assert!(g.is_positive_definite() && g.g12 == 0.0);
                }
            }
        }
    }
}
