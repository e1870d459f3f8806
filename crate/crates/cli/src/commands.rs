//! One function per subcommand, each producing a [`Table`].

use std::path::Path;

use rayon::prelude::*;

use lmgc_core::ermakov::AuxState;
use lmgc_core::fsc::{
    fit_log_divergence, fsc_closed, fsc_closed_signed, geodesic_constants, implied_omega2, scan_one, FscBranch,
    ScanTriple, VelocityCompletion, REFERENCE_TRIPLES,
};
use lmgc_core::infogeom::{
    convergence_rows, integrate_geodesic, ricci_scalar, separated_flow, Chart, ChartPoint, Estimator, Frame,
    GeodesicRecord, GeodesicSample, RicciMethod, SeparatedFlow, StopRule,
};
use lmgc_core::model::{effective_frequency, FieldProfile, ModelParams, ModifiedParams, Phase};
use lmgc_core::nielsen::{nc_static, BpProtocol, NcValue, SpProtocol};
use lmgc_core::ode::Tolerances;

use crate::args::*;
use crate::error::{At, CliError};
use crate::output::{Cell, Table};

type Res<T> = Result<T, CliError>;

fn need(x: Option<f64>, name: &str) -> Res<f64> {
    x.ok_or_else(|| CliError::config(format!("--{name} is required here"), Some(name)))
}

fn parse_f64(s: &str, name: &str) -> Res<f64> {
    s.trim().parse().map_err(|_| CliError::config(format!("`{s}` is not a number"), Some(name)))
}

/// `lo:hi` with `0 < lo < hi`.
pub fn parse_window(s: &str) -> Res<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| CliError::config("window must be `lo:hi`", Some("window")))?;
    let (lo, hi) = (parse_f64(a, "window")?, parse_f64(b, "window")?);
    if !(lo > 0.0 && hi > lo) {
        return Err(CliError::config("window needs 0 < lo < hi", Some("window")));
    }
    Ok((lo, hi))
}

/// Semicolon-separated tuples of `n` comma-separated numbers.
fn parse_tuples(s: &str, n: usize, name: &str) -> Res<Vec<Vec<f64>>> {
    let out: Vec<Vec<f64>> = s
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v = t.split(',').map(|x| parse_f64(x, name)).collect::<Res<Vec<_>>>()?;
            if v.len() != n {
                return Err(CliError::config(format!("`{t}` needs {n} comma-separated values"), Some(name)));
            }
            Ok(v)
        })
        .collect::<Res<_>>()?;
    if out.is_empty() {
        return Err(CliError::config("empty list", Some(name)));
    }
    Ok(out)
}

fn nc_cells(v: &NcValue) -> [Cell; 3] {
    let (p, q) = v.parts.unwrap_or((f64::NAN, f64::NAN));
    [v.value.into(), p.into(), q.into()]
}

pub fn nc_static_cmd(a: &NcStaticArgs) -> Res<Table> {
    let header = vec!["B_T", "NC", "P", "Q"];
    match a.phase {
        PhaseArg::Modified => {
            let r = ModifiedParams::new(need(a.omega_ref, "omega-ref")?, need(a.xi_ref, "xi-ref")?, None)
                .at("omega-ref")?;
            let t = ModifiedParams::new(need(a.omega_target, "omega-target")?, need(a.xi_target, "xi-target")?, None)
                .at("omega-target")?;
            let v = nc_static(Phase::Modified, r, t).at("omega-target")?;
            let [nc, p, q] = nc_cells(&v);
            Ok(Table::single(vec!["NC", "P", "Q"], vec![nc, p, q]))
        }
        PhaseArg::Bp | PhaseArg::Sp => {
            let phase = if a.phase == PhaseArg::Bp { Phase::BrokenPhase } else { Phase::SymmetricPhase };
            let gamma = need(a.gamma, "gamma")?;
            let r = ModelParams::with_field(need(a.b_ref, "b-ref")?, gamma).at("b-ref")?;
            effective_frequency(phase, r).at("b-ref")?;
            let eval = |b: f64| -> Res<Vec<Cell>> {
                let t = ModelParams::with_field(b, gamma).at("b-target")?;
                let v = nc_static(phase, r, t).at("b-target")?;
                let [nc, p, q] = nc_cells(&v);
                Ok(vec![b.into(), nc, p, q])
            };
            match (a.b_target, &a.sweep) {
                (Some(b), None) => Ok(Table::single(header, eval(b)?)),
                (None, Some(s)) => {
                    let v = parse_tuples(&s.replace(':', ","), 3, "sweep")?.remove(0);
                    let n = v[2] as usize;
                    if !(v[2] >= 2.0 && v[2].fract() == 0.0) {
                        return Err(CliError::config("sweep count must be an integer >= 2", Some("sweep")));
                    }
                    let mut t = Table::new(header);
                    t.rows = (0..n)
                        .into_par_iter()
                        .map(|k| eval(if k == n - 1 { v[1] } else { v[0] + (v[1] - v[0]) * k as f64 / (n - 1) as f64 }))
                        .collect::<Res<_>>()?;
                    Ok(t)
                }
                _ => Err(CliError::config("give exactly one of --b-target and --sweep", Some("b-target"))),
            }
        }
    }
}

fn read_profile_table(path: &Path) -> Res<Vec<(f64, f64)>> {
    let err = |m: String| CliError::io(m, Some("table"));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(format!("{}: {e}", path.display())))?;
    let h = r.headers().map_err(|e| err(e.to_string()))?.clone();
    let col = |name: &str| {
        h.iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::config(format!("{} lacks a `{name}` column", path.display()), Some("table")))
    };
    let (it, ib) = (col("t")?, col("b")?);
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| err(e.to_string()))?;
            Ok((parse_f64(&rec[it], "table")?, parse_f64(&rec[ib], "table")?))
        })
        .collect()
}

/// Central differences inside, second-order one-sided differences at the ends.
pub fn derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    if n < 3 {
        return vec![f64::NAN; n];
    }
    (0..n)
        .map(|i| {
            let h = t[1] - t[0];
            if i == 0 {
                (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h)
            } else {
                (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1])
            }
        })
        .collect()
}

pub fn nc_protocol_cmd(a: &NcProtocolArgs, tol: Tolerances) -> Res<(Table, Vec<AuxState>)> {
    if a.grid < 3 {
        return Err(CliError::config("grid needs at least 3 points per side", Some("grid")));
    }
    let profile = match a.profile {
        ProfileArg::Ramp => FieldProfile::standard_ramp(),
        ProfileArg::Linear => FieldProfile::Linear,
        ProfileArg::Table => {
            let p = a.table.as_ref().ok_or_else(|| CliError::config("--profile table needs --table", Some("table")))?;
            FieldProfile::table(read_profile_table(p)?).at("table")?
        }
    };
    let n = a.grid;
    let bp_t: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let sp_t: Vec<f64> = (1..=n).map(|k| 1.0 + k as f64 / n as f64).collect();
    type Side = Res<(Vec<NcValue>, Vec<AuxState>)>;
    let (bp, sp): (Side, Side) = rayon::join(
        || {
            let pr = BpProtocol::new(a.gamma, &profile, bp_t[n - 1], tol).at("gamma")?;
            let v = bp_t.iter().map(|&t| pr.nc(t)).collect::<Result<_, _>>().at("grid")?;
            let s = bp_t.iter().map(|&t| pr.state(t)).collect::<Result<_, _>>().at("grid")?;
            Ok((v, s))
        },
        || {
            let pr = SpProtocol::new(a.gamma, &profile, Some(a.anchor), sp_t[0], tol).at("anchor")?;
            let v = sp_t.iter().map(|&t| pr.nc(t)).collect::<Result<_, _>>().at("grid")?;
            let s = sp_t.iter().map(|&t| pr.state(t)).collect::<Result<_, _>>().at("grid")?;
            Ok((v, s))
        },
    );
    let (bp, sp) = (bp?, sp?);
    let mut table = Table::new(vec!["t", "NC", "P", "Q", "dNC_dt"]);
    let mut aux = Vec::with_capacity(2 * n);
    for (ts, (vals, states)) in [(&bp_t, bp), (&sp_t, sp)] {
        let nc: Vec<f64> = vals.iter().map(|v| v.value).collect();
        let d = derivative(ts, &nc);
        for (i, v) in vals.iter().enumerate() {
            let [c, p, q] = nc_cells(v);
            table.rows.push(vec![ts[i].into(), c, p, q, d[i].into()]);
        }
        aux.extend(states);
    }
    Ok((table, aux))
}

pub fn aux_table(states: &[AuxState]) -> Table {
    let mut t = Table::new(vec!["t", "f", "fdot"]);
    t.rows = states.iter().map(|s| vec![s.t.into(), s.f.into(), s.fdot.into()]).collect();
    t
}

fn branch(b: BranchArg) -> FscBranch {
    match b {
        BranchArg::GroundPos => FscBranch::GroundPos,
        BranchArg::GroundNeg => FscBranch::GroundNeg,
        BranchArg::Excited => FscBranch::Excited,
    }
}

pub fn fsc_closed_cmd(a: &FscClosedArgs) -> Res<Table> {
    let b = branch(a.branch);
    let length = fsc_closed(b, a.omega1, a.xi1, a.xi2).at("xi2")?;
    let signed = fsc_closed_signed(b, a.omega1, a.xi1, a.xi2).at("xi2")?;
    let c = geodesic_constants(b, a.omega1, a.xi1).at("xi1")?;
    let om2 = implied_omega2(b, a.omega1, a.xi1, a.xi2).ok();
    Ok(Table::single(
        vec!["length", "signed_length", "C1", "C2", "implied_omega2"],
        vec![length.into(), signed.into(), c.c1.into(), c.c2.into(), om2.into()],
    ))
}

fn chart(c: ChartArg) -> Chart {
    match c {
        ChartArg::OmegaXi => Chart::OmegaXi,
        ChartArg::XPos => Chart::XPos,
        ChartArg::XTilde => Chart::XTilde,
        ChartArg::XExcited => Chart::XExcited,
    }
}

fn stop_rule(tau_end: f64, eps: f64, x1_stop: Option<f64>, tol: Tolerances) -> Res<StopRule> {
    if !(tau_end > 0.0 && tau_end.is_finite()) {
        return Err(CliError::config("tau-end must be positive", Some("tau-end")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CliError::config("separatrix-eps must lie in (0, 0.5)", Some("separatrix-eps")));
    }
    Ok(StopRule { tau_end, separatrix_eps: eps, x1_stop, tol })
}

fn geodesic_rows(rec: &GeodesicRecord, samples: &[GeodesicSample]) -> Res<Vec<Vec<Cell>>> {
    samples
        .iter()
        .map(|s| {
            let q = rec.killing_of(s).at("c1")?;
            Ok(vec![s.tau.into(), s.x1.into(), s.x2.into(), s.v1.into(), s.v2.into(), rec.k.into(), q.into()])
        })
        .collect()
}

pub fn geodesic_cmd(a: &GeodesicArgs, tol: Tolerances) -> Res<Table> {
    let c = chart(a.chart);
    if !c.is_diagonal() {
        return Err(CliError::config("geodesics run in x-pos, x-tilde or x-excited", Some("chart")));
    }
    let stop = stop_rule(a.tau_end, a.separatrix_eps, a.x1_stop, tol)?;
    let p = ChartPoint::new(c, a.c1, a.c2).at("c1")?;
    let v = [a.v1, a.v2];
    let rec = match a.mode {
        ModeArg::SecondOrder => integrate_geodesic(&p, v, &stop).at("v1")?,
        ModeArg::Separated => {
            let flow = SeparatedFlow::from_velocity(&p, v).at("v1")?;
            separated_flow(&p, &flow, &stop).at("v1")?
        }
    };
    let samples = match a.dtau {
        Some(h) if h > 0.0 => rec.resample(h).at("dtau")?,
        Some(_) => return Err(CliError::config("dtau must be positive", Some("dtau"))),
        None => rec.samples.clone(),
    };
    let mut t = Table::new(vec!["tau", "c1", "c2", "v1", "v2", "K", "killing"]);
    t.rows = geodesic_rows(&rec, &samples)?;
    let (ds, dq) = rec.drift().at("v1")?;
    t.notes.push(format!(
        "stop={} tau_end={} relative_drift_speed={:e} relative_drift_killing={:e}",
        rec.stop.as_str(),
        rec.tau_end(),
        ds,
        dq
    ));
    Ok(t)
}

fn completion(a: &ScanArgs) -> Res<VelocityCompletion> {
    Ok(match a.completion {
        CompletionArg::UnitOrGuard => VelocityCompletion::UnitSpeedOrGuardMinimal,
        CompletionArg::UnitSpeed => VelocityCompletion::UnitSpeed,
        CompletionArg::GuardMinimal => VelocityCompletion::GuardMinimal,
        CompletionArg::Fixed => VelocityCompletion::Fixed(need(a.v2, "v2")?),
    })
}

pub fn scan_cmd(a: &ScanArgs, tol: Tolerances) -> Res<Table> {
    let triples: Vec<ScanTriple> = if a.triples.trim() == "reference" {
        REFERENCE_TRIPLES.to_vec()
    } else {
        parse_tuples(&a.triples, 3, "triples")?.iter().map(|v| ScanTriple { x1: v[0], x2: v[1], v1: v[2] }).collect()
    };
    let how = completion(a)?;
    let stop = stop_rule(a.tau_end, a.separatrix_eps, None, tol)?;
    let runs = triples
        .par_iter()
        .enumerate()
        .map(|(i, t)| scan_one(i + 1, t, how, &stop).at("triples"))
        .collect::<Res<Vec<_>>>()?;
    let mut table = Table::new(vec!["trajectory_id", "tau", "x1", "x2", "dist", "length"]);
    for r in &runs {
        table.notes.push(format!(
            "trajectory {} start=({},{}) v=({},{}) completion={} K={} stop={} guard={}",
            r.id,
            r.triple.x1,
            r.triple.x2,
            r.velocity[0],
            r.velocity[1],
            r.completion.as_str(),
            r.record.k,
            r.record.stop.as_str(),
            if r.guard_holds() { "ok" } else { "violated" }
        ));
        for s in &r.samples {
            table.rows.push(vec![r.id.into(), s.tau.into(), s.x1.into(), s.x2.into(), s.dist.into(), s.length.into()]);
        }
    }
    Ok(table)
}

/// `(trajectory_id, [(dist, length)])` in order of first appearance.
pub type ScanSeries = Vec<(String, Vec<(f64, f64)>)>;

pub fn read_scan(path: &Path) -> Res<ScanSeries> {
    let err = |m: String| CliError::io(m, Some("input"));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(format!("{}: {e}", path.display())))?;
    let h = r.headers().map_err(|e| err(e.to_string()))?.clone();
    let col = |name: &str| {
        h.iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::config(format!("{} lacks a `{name}` column", path.display()), Some("input")))
    };
    let (ii, id, il) = (col("trajectory_id")?, col("dist")?, col("length")?);
    let mut out: ScanSeries = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let pt = (parse_f64(&rec[id], "input")?, parse_f64(&rec[il], "input")?);
        match out.iter_mut().find(|(k, _)| *k == rec[ii]) {
            Some((_, v)) => v.push(pt),
            None => out.push((rec[ii].to_string(), vec![pt])),
        }
    }
    if out.is_empty() {
        return Err(CliError::config(format!("{} has no data rows", path.display()), Some("input")));
    }
    Ok(out)
}

pub fn fit_cmd(a: &FitArgs) -> Res<Table> {
    let window = parse_window(&a.window)?;
    let mut t = Table::new(vec!["trajectory_id", "a", "b", "rms", "window_lo", "window_hi", "n"]);
    for (id, pts) in read_scan(&a.input)? {
        let f = fit_log_divergence(&pts, window).at("window")?;
        t.rows.push(vec![
            Cell::S(id),
            f.a.into(),
            f.b.into(),
            f.rms.into(),
            f.window.0.into(),
            f.window.1.into(),
            f.n.into(),
        ]);
    }
    Ok(t)
}

pub fn qgt_cmd(a: &QgtArgs) -> Res<Table> {
    let js: Vec<f64> = a.j.split(',').map(|s| parse_f64(s, "j")).collect::<Res<_>>()?;
    let points = parse_tuples(&a.points, 2, "points")?;
    let est = match a.estimator {
        EstimatorArg::Spectral => Estimator::Spectral,
        EstimatorArg::Fidelity => {
            if !(a.h > 0.0 && a.h < 0.1) {
                return Err(CliError::config("h must lie in (0, 0.1)", Some("h")));
            }
            Estimator::Fidelity { h: a.h }
        }
    };
    let frame = match a.frame {
        FrameArg::Rotated => Frame::Rotated,
        FrameArg::Lab => Frame::Lab,
    };
    let jobs: Vec<(f64, f64, f64)> = points.iter().flat_map(|p| js.iter().map(move |&j| (p[0], p[1], j))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(om, xi, j)| {
            let g = est.eval(j, om, xi, frame).at("j")?;
            convergence_rows(j, om, xi, &g).at("points")
        })
        .collect::<Res<Vec<_>>>()?;
    let mut t = Table::new(vec!["j", "omega", "xi", "component", "estimate", "analytic", "rel_err"]);
    for r in rows.iter().flatten() {
        t.rows.push(vec![
            r.j.into(),
            r.omega.into(),
            r.xi.into(),
            r.component.into(),
            r.estimate.into(),
            r.analytic.into(),
            r.rel_err.into(),
        ]);
    }
    Ok(t)
}

pub fn ricci_cmd(a: &RicciArgs) -> Res<Table> {
    let p = ChartPoint::new(chart(a.chart), a.c1, a.c2).at("c1")?;
    let an = matches!(a.method, MethodArg::Analytic | MethodArg::Both)
        .then(|| ricci_scalar(&p, RicciMethod::Analytic).at("c1"))
        .transpose()?;
    let nu = matches!(a.method, MethodArg::Numeric | MethodArg::Both)
        .then(|| ricci_scalar(&p, RicciMethod::Numeric).at("c1"))
        .transpose()?;
    Ok(Table::single(vec!["analytic", "numeric"], vec![an.into(), nu.into()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("1e-5:1e-2").unwrap(), (1e-5, 1e-2));
        assert_eq!(parse_window("1e-2:1e-5").unwrap_err().parameter.as_deref(), Some("window"));
        assert!(parse_window("0.1").is_err());
    }

    #[test]
    fn tuple_parsing() {
        assert_eq!(parse_tuples("1,0.2; 0.5,-0.2", 2, "p").unwrap(), vec![vec![1.0, 0.2], vec![0.5, -0.2]]);
        assert!(parse_tuples("1,2,3", 2, "p").is_err());
        assert!(parse_tuples("", 2, "p").is_err());
    }

    #[test]
    fn derivative_is_exact_on_quadratics() {
        let t: Vec<f64> = (0..6).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = t.iter().map(|x| 3.0 * x * x - x).collect();
        for (x, d) in t.iter().zip(derivative(&t, &y)) {
            assert!((d - (6.0 * x - 1.0)).abs() < 1e-12);
        }
    }
}
