//! Ricci scalar of the two-dimensional metrics.
//!
//! Closed forms: `R = 128/(3 x1)` for `XPos`, `R = -128/(3 x1)` for the two
//! charts with factor `1 - 2 x1`. The numeric path differentiates the metric
//! twice (Christoffel symbols, then the Ricci tensor) with fourth-order
//! central differences, and works for any chart including `(Omega, xi)`.

#![allow(clippy::needless_range_loop)] // index loops mirror the tensor expressions

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::chart::{chart_transform, Chart, ChartPoint, Sector};
use super::metric::{diagonal, omega_xi_metric, Metric2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicciMethod {
    Analytic,
    Numeric,
}

pub fn ricci_scalar(p: &ChartPoint, method: RicciMethod) -> Result<f64> {
    match method {
        RicciMethod::Analytic => ricci_analytic(p),
        RicciMethod::Numeric => {
            let chart = p.chart;
            let metric = move |a: f64, b: f64| match chart {
                Chart::OmegaXi => omega_xi_metric(a, b, Sector::Ground),
                c => diagonal(c, a, b),
            };
            let h = match chart {
                Chart::OmegaXi => [1e-3 * p.c1.abs().max(0.1), 1e-3 * p.c2.abs().max(0.01)],
                c => {
                    let w = (1.0 + 2.0 * c.sigma() * p.c1).abs();
                    let s = p.c1.min(0.5 * w);
                    [1e-3 * s, 1e-3 * p.c2]
                }
            };
            if chart.is_diagonal() && !(p.c1 > 0.0) {
                return Err(Error::domain("Ricci scalar needs x1 > 0"));
            }
            ricci_numeric(&metric, p.c1, p.c2, h)
        }
    }
}

fn ricci_analytic(p: &ChartPoint) -> Result<f64> {
    let q = match p.chart {
        Chart::OmegaXi => {
            let target = if p.c2 > 0.0 { Chart::XPos } else { Chart::XTilde };
            chart_transform(p, target)?
        }
        _ => *p,
    };
    if !(q.c1 > 0.0) {
        return Err(Error::domain("Ricci scalar needs x1 > 0"));
    }
    Ok(q.chart.sigma() * 128.0 / (3.0 * q.c1))
}

type Gamma = [[[f64; 2]; 2]; 2];

fn d4<T, F>(f: F, h: f64) -> Result<T>
where
    F: Fn(f64) -> Result<T>,
    T: Lin,
{
    let (a, b, c, d) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
    Ok(T::combo(&[(1.0, &a), (-8.0, &b), (8.0, &c), (-1.0, &d)], 1.0 / (12.0 * h)))
}

trait Lin: Sized {
    fn combo(terms: &[(f64, &Self)], scale: f64) -> Self;
}

impl Lin for Metric2 {
    fn combo(terms: &[(f64, &Self)], scale: f64) -> Self {
        let mut m = Metric2 { g11: 0.0, g12: 0.0, g22: 0.0 };
        for (c, t) in terms {
            m.g11 += c * t.g11;
            m.g12 += c * t.g12;
            m.g22 += c * t.g22;
        }
        m.g11 *= scale;
        m.g12 *= scale;
        m.g22 *= scale;
        m
    }
}

impl Lin for Gamma {
    fn combo(terms: &[(f64, &Self)], scale: f64) -> Self {
        let mut g = [[[0.0; 2]; 2]; 2];
        for (c, t) in terms {
            for a in 0..2 {
                for b in 0..2 {
                    for e in 0..2 {
                        g[a][b][e] += c * t[a][b][e];
                    }
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                for e in 0..2 {
                    g[a][b][e] *= scale;
                }
            }
        }
        g
    }
}

fn christoffel<M>(metric: &M, x: f64, y: f64, h: [f64; 2]) -> Result<Gamma>
where
    M: Fn(f64, f64) -> Result<Metric2>,
{
    let g = metric(x, y)?;
    let gi = g.inverse();
    let dg = [d4(|s| metric(x + s, y), h[0])?, d4(|s| metric(x, y + s), h[1])?];
    let mut out = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut s = 0.0;
                for d in 0..2 {
                    s += gi.get(a, d) * (dg[b].get(d, c) + dg[c].get(d, b) - dg[d].get(b, c));
                }
                out[a][b][c] = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// Ricci scalar of an arbitrary 2D metric field at `(x, y)` with steps `h`.
pub fn ricci_numeric<M>(metric: &M, x: f64, y: f64, h: [f64; 2]) -> Result<f64>
where
    M: Fn(f64, f64) -> Result<Metric2>,
{
    let gam = christoffel(metric, x, y, h)?;
    let dgam = [d4(|s| christoffel(metric, x + s, y, h), h[0])?, d4(|s| christoffel(metric, x, y + s, h), h[1])?];
    let gi = metric(x, y)?.inverse();
    let mut r = 0.0;
    for b in 0..2 {
        for d in 0..2 {
            let mut ric = 0.0;
            for a in 0..2 {
                ric += dgam[a][a][b][d] - dgam[d][a][b][a];
                for e in 0..2 {
                    ric += gam[a][a][e] * gam[e][b][d] - gam[a][d][e] * gam[e][b][a];
                }
            }
            r += gi.get(b, d) * ric;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(c: Chart, a: f64, b: f64) -> ChartPoint {
        ChartPoint::new(c, a, b).unwrap()
    }

    #[test]
    fn analytic_examples() {
        assert!((ricci_scalar(&pt(Chart::XPos, 1.0, 1.0), RicciMethod::Analytic).unwrap() - 128.0 / 3.0).abs() < 1e-12);
        let r = ricci_scalar(&pt(Chart::XTilde, 0.5, 1.0), RicciMethod::Analytic).unwrap();
        assert!((r + 256.0 / 3.0).abs() < 1e-12);
        let r = ricci_scalar(&pt(Chart::XExcited, 1.0, 2.0), RicciMethod::Analytic).unwrap();
        assert!((r + 128.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn round_sphere_curvature() {
        // unit sphere: R = 2
        let m = |th: f64, _: f64| Ok(Metric2 { g11: 1.0, g12: 0.0, g22: th.sin().powi(2) });
        let r = ricci_numeric(&m, 0.7, 0.3, [1e-3, 1e-3]).unwrap();
        assert!((r - 2.0).abs() < 1e-6);
    }

    #[test]
    fn omega_xi_chart_agrees_with_diagonal_chart() {
        for (om, xi) in [(1.0, 0.3), (0.5, -0.2), (2.0, 1.5)] {
            let p = ChartPoint::omega_xi(om, xi).unwrap();
            let a = ricci_scalar(&p, RicciMethod::Analytic).unwrap();
            let n = ricci_scalar(&p, RicciMethod::Numeric).unwrap();
            assert!((a - n).abs() < 1e-4 * a.abs(), "({om}, {xi}): {a} vs {n}");
        }
    }

    proptest! {
        #[test]
        fn numeric_matches_analytic(x1 in 0.02f64..3.0, x2 in 0.05f64..3.0) {
            for c in [Chart::XPos, Chart::XTilde, Chart::XExcited] {
                let (x1, x2) = if c == Chart::XTilde { (x1 * 0.48 / 3.0, x2 + (x1 * 0.48 / 3.0).sqrt()) } else { (x1, x2) };
                if c == Chart::XExcited && (x1 - 0.5).abs() < 0.01 {
                    continue;
                }
                let p = pt(c, x1, x2);
                let a = ricci_scalar(&p, RicciMethod::Analytic).unwrap();
                let n = ricci_scalar(&p, RicciMethod::Numeric).unwrap();
                prop_assert!((a - n).abs() < 1e-4 * a.abs(), "{:?} ({}, {}): {} vs {}", c, x1, x2, a, n);
            }
        }
    }
}
