//! Adaptive Dormand–Prince 5(4) integration with dense output.
//!
//! Systems are first order, `y' = F(t, y)` over `[f64; M]`. A trajectory built
//! from a second-order system (positions in the first half of `y`, velocities
//! in the second) interpolates positions with quintic Hermite polynomials using
//! position, velocity and acceleration at both ends of each step, so that the
//! interpolated velocity and acceleration are the first and second derivatives
//! of one smooth curve. First-order trajectories use cubic Hermite.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Relative and absolute tolerances of the step-size controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12 }
    }
}

impl Tolerances {
    /// Validates the user-overridable range `[1e-14, 1e-3]`.
    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        let ok = |x: f64| (1e-14..=1e-3).contains(&x);
        if !ok(rtol) || !ok(atol) {
            return Err(Error::domain("tolerances must lie in [1e-14, 1e-3]"));
        }
        Ok(Tolerances { rtol, atol })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: Tolerances,
    /// Smallest admissible step, relative to `max(1, |t|)`.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: Tolerances::default(), h_min: 1e-12, h_max: f64::INFINITY, max_steps: 5_000_000 }
    }
}

impl Options {
    pub fn with_tol(tol: Tolerances) -> Self {
        Options { tol, ..Options::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<const M: usize> {
    pub t: f64,
    pub y: [f64; M],
    pub dy: [f64; M],
}

/// Why an integration ended without error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    /// The requested end time was reached.
    Reached,
    /// The monitor asked to stop.
    Stopped,
    /// The controller could not take a step above the floor.
    StepFloor,
}

#[derive(Debug, Clone)]
pub struct Trajectory<const M: usize> {
    nodes: Vec<Node<M>>,
    second_order: bool,
}

pub struct Outcome<const M: usize> {
    pub trajectory: Trajectory<M>,
    pub halt: Halt,
}

// Dormand–Prince coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb<const M: usize>(y: &[f64; M], h: f64, terms: &[(f64, &[f64; M])]) -> [f64; M] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..M {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

fn finite<const M: usize>(y: &[f64; M]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
///
/// `rhs` returns `None` when a stage leaves the admissible domain; the step is
/// then rejected and shrunk. `monitor` sees every accepted node and may stop
/// the run (`Ok(true)`) or abort it with an error.
pub fn integrate<const M: usize, F, S>(
    mut rhs: F,
    t0: f64,
    y0: [f64; M],
    t1: f64,
    opts: &Options,
    second_order: bool,
    mut monitor: S,
) -> Result<Outcome<M>>
where
    F: FnMut(f64, &[f64; M]) -> Option<[f64; M]>,
    S: FnMut(&Node<M>) -> Result<bool>,
{
    if second_order && !M.is_multiple_of(2) {
        return Err(Error::domain("second-order trajectories need an even state size"));
    }
    if !finite(&y0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::domain("non-finite initial data"));
    }
    let k1 = rhs(t0, &y0).ok_or_else(|| Error::domain("initial state outside the domain"))?;
    let mut nodes = Vec::with_capacity(256);
    nodes.push(Node { t: t0, y: y0, dy: k1 });
    let mut traj = Trajectory { nodes, second_order };
    if monitor(&traj.nodes[0])? {
        return Ok(Outcome { trajectory: traj, halt: Halt::Stopped });
    }
    if t1 == t0 {
        return Ok(Outcome { trajectory: traj, halt: Halt::Reached });
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let tol = opts.tol;
    let span = (t1 - t0).abs();

    let norm = |v: &[f64; M], y: &[f64; M]| -> f64 {
        let mut s = 0.0;
        for i in 0..M {
            let sc = tol.atol + tol.rtol * y[i].abs();
            s += (v[i] / sc).powi(2);
        }
        (s / M as f64).sqrt()
    };

    // Initial step guess (Hairer, Nørsett & Wanner, II.4).
    let mut h = {
        let d0 = norm(&y0, &y0);
        let d1 = norm(&k1, &y0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0.min(span).min(opts.h_max)
    };

    let mut t = t0;
    let mut y = y0;
    let mut k1 = k1;
    let mut steps = 0usize;
    loop {
        if (t1 - t) * dir <= 0.0 {
            return Ok(Outcome { trajectory: traj, halt: Halt::Reached });
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Tolerance { t, reason: "step budget exhausted" });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        let hh = if last { remaining } else { h } * dir;
        if !last && h < opts.h_min * t.abs().max(1.0) {
            return Ok(Outcome { trajectory: traj, halt: Halt::StepFloor });
        }

        let stage = |rhs: &mut F, tt: f64, yy: &[f64; M]| -> Option<[f64; M]> {
            if !finite(yy) {
                return None;
            }
            let k = rhs(tt, yy)?;
            if finite(&k) {
                Some(k)
            } else {
                None
            }
        };

        let attempt = (|| {
            let k2 = stage(&mut rhs, t + C2 * hh, &comb(&y, hh, &[(A21, &k1)]))?;
            let k3 = stage(&mut rhs, t + C3 * hh, &comb(&y, hh, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = stage(&mut rhs, t + C4 * hh, &comb(&y, hh, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = stage(&mut rhs, t + C5 * hh, &comb(&y, hh, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
            let k6 =
                stage(&mut rhs, t + hh, &comb(&y, hh, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
            let y_new = comb(&y, hh, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if last { t1 } else { t + hh };
            let k7 = stage(&mut rhs, t_new, &y_new)?;
            let mut err = [0.0; M];
            for i in 0..M {
                err[i] = hh * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            Some((y_new, k7, err, t_new))
        })();

        let Some((y_new, k7, err, t_new)) = attempt else {
            h *= 0.25;
            continue;
        };
        let mut ymax = [0.0; M];
        for i in 0..M {
            ymax[i] = y[i].abs().max(y_new[i].abs());
        }
        let e = norm(&err, &ymax);
        if e <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k7;
            traj.nodes.push(Node { t, y, dy: k1 });
            let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(opts.h_max);
            if monitor(traj.nodes.last().unwrap())? {
                return Ok(Outcome { trajectory: traj, halt: Halt::Stopped });
            }
        } else {
            h *= (0.9 * e.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
}

// Quintic Hermite basis on [0, 1]: values, first and second derivatives.
fn quintic(s: f64) -> [[f64; 6]; 3] {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    [
        [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
            10.0 * s3 - 15.0 * s4 + 6.0 * s5,
            -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
            0.5 * s3 - s4 + 0.5 * s5,
        ],
        [
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            1.5 * s2 - 4.0 * s3 + 2.5 * s4,
        ],
        [
            -60.0 * s + 180.0 * s2 - 120.0 * s3,
            -36.0 * s + 96.0 * s2 - 60.0 * s3,
            1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
            60.0 * s - 180.0 * s2 + 120.0 * s3,
            -24.0 * s + 84.0 * s2 - 60.0 * s3,
            3.0 * s - 12.0 * s2 + 10.0 * s3,
        ],
    ]
}

fn cubic(s: f64) -> [[f64; 4]; 2] {
    let s2 = s * s;
    let s3 = s2 * s;
    [
        [1.0 - 3.0 * s2 + 2.0 * s3, s - 2.0 * s2 + s3, 3.0 * s2 - 2.0 * s3, -s2 + s3],
        [-6.0 * s + 6.0 * s2, 1.0 - 4.0 * s + 3.0 * s2, 6.0 * s - 6.0 * s2, -2.0 * s + 3.0 * s2],
    ]
}

impl<const M: usize> Trajectory<M> {
    pub fn nodes(&self) -> &[Node<M>] {
        &self.nodes
    }

    pub fn t_start(&self) -> f64 {
        self.nodes[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].t
    }

    pub fn last(&self) -> &Node<M> {
        &self.nodes[self.nodes.len() - 1]
    }

    pub fn covers(&self, t: f64) -> bool {
        let (a, b) = (self.t_start(), self.t_end());
        t >= a.min(b) && t <= a.max(b)
    }

    fn locate(&self, t: f64) -> Option<usize> {
        if !self.covers(t) {
            return None;
        }
        let n = self.nodes.len();
        if n == 1 {
            return Some(0);
        }
        let forward = self.t_end() >= self.t_start();
        // first index whose node lies beyond t
        let idx = self.nodes.partition_point(|nd| if forward { nd.t <= t } else { nd.t >= t });
        Some(idx.clamp(1, n - 1) - 1)
    }

    /// Interpolated state and its time derivative at `t`.
    pub fn eval_with_derivative(&self, t: f64) -> Option<([f64; M], [f64; M])> {
        let i = self.locate(t)?;
        if self.nodes.len() == 1 {
            let n = &self.nodes[0];
            return Some((n.y, n.dy));
        }
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let mut y = [0.0; M];
        let mut dy = [0.0; M];
        if self.second_order {
            let n = M / 2;
            let q = quintic(s);
            for k in 0..n {
                let c = [a.y[k], h * a.y[n + k], h * h * a.dy[n + k], b.y[k], h * b.y[n + k], h * h * b.dy[n + k]];
                let dot = |w: &[f64; 6]| w.iter().zip(c.iter()).map(|(x, y)| x * y).sum::<f64>();
                y[k] = dot(&q[0]);
                let v = dot(&q[1]) / h;
                let acc = dot(&q[2]) / (h * h);
                y[n + k] = v;
                dy[k] = v;
                dy[n + k] = acc;
            }
        } else {
            let c = cubic(s);
            for k in 0..M {
                let w = [a.y[k], h * a.dy[k], b.y[k], h * b.dy[k]];
                y[k] = c[0].iter().zip(w.iter()).map(|(x, y)| x * y).sum();
                dy[k] = c[1].iter().zip(w.iter()).map(|(x, y)| x * y).sum::<f64>() / h;
            }
        }
        Some((y, dy))
    }

    pub fn eval(&self, t: f64) -> Option<[f64; M]> {
        self.eval_with_derivative(t).map(|(y, _)| y)
    }
}
