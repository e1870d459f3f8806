//! Finite-spin check of the analytic metric.
//!
//! The spin-`j` Hamiltonian is built in one of two frames:
//!
//! - `Rotated` (default): `H = V Jz + (xi/j) Jy^2`, the frame in which the
//!   large-`j` boson expansion is carried out.
//! - `Lab`: `H = Jz + Omega Jx + (xi/j) Jy^2`.
//!
//! The two are unitarily equivalent at fixed `Omega`, but the rotation depends
//! on `Omega`, so their ground-state metrics differ in the `Omega` direction.
//! Two estimators are provided: second differences of the ground-state
//! infidelity, and the sum over states.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::chart::Sector;
use super::metric::{omega_xi_metric, Metric2};
use crate::error::{Error, Result};

/// Largest spin accepted by the oracle.
pub const J_MAX: f64 = 400.0;

/// Gap below which the ground state counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    #[default]
    Rotated,
    Lab,
}

/// `Jz`, `Jx` and `Jy^2` in the `|j, m>` basis, `m = -j..=j`.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub j: f64,
    pub jz: DMatrix<f64>,
    pub jx: DMatrix<f64>,
    pub jy2: DMatrix<f64>,
}

fn check_j(j: f64) -> Result<usize> {
    let twice = 2.0 * j;
    if !(j >= 0.5) || (twice - twice.round()).abs() > 1e-12 || j > J_MAX {
        return Err(Error::domain(alloc::format!("j must be a half-integer in [0.5, {J_MAX}], got {j}")));
    }
    Ok(twice.round() as usize + 1)
}

impl SpinMatrices {
    pub fn new(j: f64) -> Result<Self> {
        let n = check_j(j)?;
        let m = |i: usize| i as f64 - j;
        let cp = |mm: f64| (j * (j + 1.0) - mm * (mm + 1.0)).max(0.0).sqrt();
        let mut jz = DMatrix::zeros(n, n);
        let mut jx = DMatrix::zeros(n, n);
        let mut jy2 = DMatrix::zeros(n, n);
        for i in 0..n {
            jz[(i, i)] = m(i);
            jy2[(i, i)] = 0.5 * (j * (j + 1.0) - m(i) * m(i));
            if i + 1 < n {
                let c = 0.5 * cp(m(i));
                jx[(i + 1, i)] = c;
                jx[(i, i + 1)] = c;
            }
            if i + 2 < n {
                let c = -0.25 * cp(m(i)) * cp(m(i) + 1.0);
                jy2[(i + 2, i)] = c;
                jy2[(i, i + 2)] = c;
            }
        }
        Ok(SpinMatrices { j, jz, jx, jy2 })
    }

    pub fn hamiltonian(&self, frame: Frame, omega: f64, xi: f64) -> DMatrix<f64> {
        let a = &self.jy2 * (xi / self.j);
        match frame {
            Frame::Rotated => &self.jz * (omega * omega + 1.0).sqrt() + a,
            Frame::Lab => &self.jz + &self.jx * omega + a,
        }
    }

    /// `(dH/dOmega, dH/dxi)`.
    pub fn derivatives(&self, frame: Frame, omega: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let d_om = match frame {
            Frame::Rotated => &self.jz * (omega / (omega * omega + 1.0).sqrt()),
            Frame::Lab => self.jx.clone(),
        };
        (d_om, &self.jy2 * (1.0 / self.j))
    }
}

/// Eigen-decomposition with ascending energies.
struct Spectrum {
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn spectrum(h: DMatrix<f64>) -> Result<Spectrum> {
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    if n > 1 {
        let gap = energies[1] - energies[0];
        if gap < DEGENERACY_GAP {
            return Err(Error::Degeneracy { gap });
        }
    }
    Ok(Spectrum { energies, vectors })
}

fn ground(sm: &SpinMatrices, frame: Frame, omega: f64, xi: f64) -> Result<DVector<f64>> {
    let s = spectrum(sm.hamiltonian(frame, omega, xi))?;
    Ok(s.vectors.column(0).into_owned())
}

/// `1 - |<a|b>|^2` computed as `|b - <a|b> a|^2` to avoid cancellation.
fn infidelity(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ov = a.dot(b);
    (b - a * ov).norm_squared()
}

/// Second-difference metric with offset `h`, no extrapolation.
pub fn fidelity_qgt_raw(j: f64, omega: f64, xi: f64, h: f64, frame: Frame) -> Result<Metric2> {
    let sm = SpinMatrices::new(j)?;
    fidelity_with(&sm, omega, xi, h, frame)
}

fn fidelity_with(sm: &SpinMatrices, omega: f64, xi: f64, h: f64, frame: Frame) -> Result<Metric2> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain("fidelity offset must be positive"));
    }
    let d = |u: [f64; 2]| -> Result<f64> {
        let a = ground(sm, frame, omega - 0.5 * h * u[0], xi - 0.5 * h * u[1])?;
        let b = ground(sm, frame, omega + 0.5 * h * u[0], xi + 0.5 * h * u[1])?;
        Ok(infidelity(&a, &b) / (h * h))
    };
    let g11 = d([1.0, 0.0])?;
    let g22 = d([0.0, 1.0])?;
    let g12 = 0.25 * (d([1.0, 1.0])? - d([1.0, -1.0])?);
    Ok(Metric2 { g11, g12, g22 })
}

/// Fidelity metric with one Richardson step over the offsets `h` and `2h`.
pub fn fidelity_qgt(j: f64, omega: f64, xi: f64, h: f64, frame: Frame) -> Result<Metric2> {
    let sm = SpinMatrices::new(j)?;
    let a = fidelity_with(&sm, omega, xi, h, frame)?;
    let b = fidelity_with(&sm, omega, xi, 2.0 * h, frame)?;
    let r = |x: f64, y: f64| (4.0 * x - y) / 3.0;
    Ok(Metric2 { g11: r(a.g11, b.g11), g12: r(a.g12, b.g12), g22: r(a.g22, b.g22) })
}

/// Sum over states: `g_ab = sum_{m != 0} <0|d_a H|m><m|d_b H|0> / (E_m - E_0)^2`.
pub fn qgt_spectral(j: f64, omega: f64, xi: f64, frame: Frame) -> Result<Metric2> {
    let sm = SpinMatrices::new(j)?;
    let s = spectrum(sm.hamiltonian(frame, omega, xi))?;
    let (da, db) = sm.derivatives(frame, omega);
    let v0 = s.vectors.column(0);
    let pa = s.vectors.tr_mul(&(&da * v0));
    let pb = s.vectors.tr_mul(&(&db * v0));
    let mut g = Metric2 { g11: 0.0, g12: 0.0, g22: 0.0 };
    for m in 1..s.energies.len() {
        let de2 = (s.energies[m] - s.energies[0]).powi(2);
        g.g11 += pa[m] * pa[m] / de2;
        g.g12 += pa[m] * pb[m] / de2;
        g.g22 += pb[m] * pb[m] / de2;
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Fidelity { h: f64 },
    Spectral,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Fidelity { .. } => "fidelity",
            Estimator::Spectral => "spectral",
        }
    }

    pub fn eval(&self, j: f64, omega: f64, xi: f64, frame: Frame) -> Result<Metric2> {
        match *self {
            Estimator::Fidelity { h } => fidelity_qgt(j, omega, xi, h, frame),
            Estimator::Spectral => qgt_spectral(j, omega, xi, frame),
        }
    }
}

pub const COMPONENTS: [&str; 3] = ["g_OmegaOmega", "g_Omegaxi", "g_xixi"];

/// One component of the finite-`j` metric against the analytic ground metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub j: f64,
    pub omega: f64,
    pub xi: f64,
    pub component: &'static str,
    pub estimate: f64,
    pub analytic: f64,
    /// Relative error, or absolute error when the analytic value vanishes.
    pub rel_err: f64,
}

pub fn convergence_rows(j: f64, omega: f64, xi: f64, est: &Metric2) -> Result<[ConvergenceRow; 3]> {
    let an = omega_xi_metric(omega, xi, Sector::Ground)?;
    let pick = |m: &Metric2, k: usize| [m.g11, m.g12, m.g22][k];
    let row = |k: usize| {
        let (e, a) = (pick(est, k), pick(&an, k));
        let rel_err = if a == 0.0 { e.abs() } else { (e - a).abs() / a.abs() };
        ConvergenceRow { j, omega, xi, component: COMPONENTS[k], estimate: e, analytic: a, rel_err }
    };
    Ok([row(0), row(1), row(2)])
}

/// Rows for every `(point, j)` pair, points outermost.
pub fn convergence_study(
    points: &[(f64, f64)],
    js: &[f64],
    est: Estimator,
    frame: Frame,
) -> Result<Vec<ConvergenceRow>> {
    let mut out = Vec::with_capacity(points.len() * js.len() * 3);
    for &(om, xi) in points {
        for &j in js {
            let g = est.eval(j, om, xi, frame)?;
            out.extend(convergence_rows(j, om, xi, &g)?);
        }
    }
    Ok(out)
}
