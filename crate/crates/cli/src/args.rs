//! Command-line surface.
//!
//! Every argument struct also serializes, which is how the resolved
//! configuration is recorded in the output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lmgc", version, about = "Nielsen and Fubini-Study complexity of the LMG model")]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Key/value configuration file; command-line flags override its entries
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Output format (default: json for single values, csv for scans)
    #[arg(long, global = true, value_enum)]
    #[serde(skip)]
    pub format: Option<Format>,
    /// Worker threads for scans (0 = all cores)
    #[arg(long, global = true, env = "LMGC_JOBS", default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    /// Relative tolerance of the ODE integrators, in [1e-14, 1e-3]
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Absolute tolerance of the ODE integrators, in [1e-14, 1e-3]
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub atol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Nielsen complexity between two static ground states
    NcStatic(NcStaticArgs),
    /// Nielsen complexity along the field ramp, t in [0,1) and (1,2]
    NcProtocol(NcProtocolArgs),
    /// Closed-form Fubini-Study complexity for M = 0 geodesics
    FscClosed(FscClosedArgs),
    /// Integrate one geodesic of a diagonal chart
    Geodesic(GeodesicArgs),
    /// Geodesics running into the excited-sector separatrix
    SeparatrixScan(ScanArgs),
    /// Fit y = a + b ln(1/2 - x1) to a separatrix scan
    Fit(FitArgs),
    /// Finite-spin quantum metric against the large-j metric
    QgtCheck(QgtArgs),
    /// Ricci scalar at a point of a chart
    Ricci(RicciArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::NcStatic(_) => "nc-static",
            Command::NcProtocol(_) => "nc-protocol",
            Command::FscClosed(_) => "fsc-closed",
            Command::Geodesic(_) => "geodesic",
            Command::SeparatrixScan(_) => "separatrix-scan",
            Command::Fit(_) => "fit",
            Command::QgtCheck(_) => "qgt-check",
            Command::Ricci(_) => "ricci",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseArg {
    /// Broken phase, 0 <= B <= 1
    Bp,
    /// Symmetric phase, B >= 1
    Sp,
    /// Modified model in (Omega, xi)
    Modified,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct NcStaticArgs {
    #[arg(long, value_enum)]
    pub phase: PhaseArg,
    /// Anisotropy (bp, sp)
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Reference field (bp, sp)
    #[arg(long)]
    pub b_ref: Option<f64>,
    /// Target field (bp, sp); exclusive with --sweep
    #[arg(long)]
    pub b_target: Option<f64>,
    /// Target-field sweep `lo:hi:n` (bp, sp), emitted as CSV
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub omega_ref: Option<f64>,
    #[arg(long)]
    pub xi_ref: Option<f64>,
    #[arg(long)]
    pub omega_target: Option<f64>,
    #[arg(long)]
    pub xi_target: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileArg {
    /// B = t, constant from t = 2
    Ramp,
    /// B = t
    Linear,
    /// Linear interpolation in the CSV given by --table (columns t, b)
    Table,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct NcProtocolArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Grid points per unit time on each side of t = 1
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = ProfileArg::Ramp)]
    pub profile: ProfileArg,
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Time at which the symmetric-phase state is the instantaneous ground state
    #[arg(long, default_value_t = 2.0)]
    pub anchor: f64,
    /// Also write the auxiliary solution (t, f, fdot) to this CSV
    #[arg(long)]
    pub aux_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchArg {
    /// Ground sector, xi > 0
    GroundPos,
    /// Ground sector, xi < 0
    GroundNeg,
    /// Excited sector
    Excited,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct FscClosedArgs {
    #[arg(long, value_enum)]
    pub branch: BranchArg,
    #[arg(long)]
    pub omega1: f64,
    #[arg(long)]
    pub xi1: f64,
    #[arg(long)]
    pub xi2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartArg {
    OmegaXi,
    XPos,
    XTilde,
    XExcited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    /// Full geodesic equation
    SecondOrder,
    /// First-order flow from the conserved quantities
    Separated,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct GeodesicArgs {
    #[arg(long, value_enum)]
    pub chart: ChartArg,
    #[arg(long)]
    pub c1: f64,
    #[arg(long)]
    pub c2: f64,
    #[arg(long)]
    pub v1: f64,
    #[arg(long)]
    pub v2: f64,
    #[arg(long, default_value_t = 50.0)]
    pub tau_end: f64,
    /// Stop this close to x1 = 1/2
    #[arg(long, default_value_t = 1e-6)]
    pub separatrix_eps: f64,
    /// Stop when x1 crosses this value
    #[arg(long)]
    pub x1_stop: Option<f64>,
    /// Resample on a uniform tau grid (default: integrator nodes)
    #[arg(long)]
    pub dtau: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::SecondOrder)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionArg {
    /// Unit speed, falling back to guard-minimal when infeasible
    UnitOrGuard,
    UnitSpeed,
    /// Smallest v2 whose geodesic keeps x2^2 >= x1
    GuardMinimal,
    /// v2 from --v2
    Fixed,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct ScanArgs {
    /// `x1,x2,v1;...` starting data, or `reference` for the built-in set
    #[arg(long, default_value = "reference")]
    pub triples: String,
    #[arg(long, value_enum, default_value_t = CompletionArg::UnitOrGuard)]
    pub completion: CompletionArg,
    #[arg(long)]
    pub v2: Option<f64>,
    #[arg(long, default_value_t = 50.0)]
    pub tau_end: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub separatrix_eps: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct FitArgs {
    /// Scan CSV with columns trajectory_id, dist, length
    #[arg(long)]
    pub input: PathBuf,
    /// Fit window `lo:hi` on 1/2 - x1
    #[arg(long, default_value = "1e-5:1e-2")]
    pub window: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorArg {
    Spectral,
    Fidelity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameArg {
    Rotated,
    Lab,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct QgtArgs {
    /// Comma-separated spins
    #[arg(long, default_value = "25,50,100,200")]
    pub j: String,
    /// `omega,xi;...` couplings
    #[arg(long, default_value = "1,0.2;0.5,-0.2;2,0.5")]
    pub points: String,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Spectral)]
    pub estimator: EstimatorArg,
    /// Step of the fidelity estimator
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, value_enum, default_value_t = FrameArg::Rotated)]
    pub frame: FrameArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct RicciArgs {
    #[arg(long, value_enum)]
    pub chart: ChartArg,
    #[arg(long)]
    pub c1: f64,
    #[arg(long)]
    pub c2: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}
