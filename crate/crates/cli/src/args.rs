use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gaborkit", version, about = "Finite Gabor analysis experiments with JSON reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomly generated test signals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Omit wall-clock timing so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full-grid STFT: Parseval constant and round trip.
    Stft(StftArgs),
    /// Frame bounds of a Gabor system.
    FrameBounds(SystemArgs),
    /// Canonical dual window and reconstruction check.
    DualWindow(SystemArgs),
    /// Janssen coefficients of the (cross) frame operator.
    Janssen(JanssenArgs),
    /// Regularised dual inner products and their limit.
    TraceProbe(TraceProbeArgs),
    /// Inverse of a twisted-convolution element.
    TwistedInvert(TwistedInvertArgs),
    /// ℓ¹ and ℓ² spectral radius estimates of a twisted element.
    SpectralRadius(SpectralRadiusArgs),
    /// Lower Beurling density of a point set.
    Density(DensityArgs),
    /// Homogeneous approximation residual.
    Hap(HapArgs),
    /// Projection-trace comparison between a point set and the unit grid.
    RsBounds(RsBoundsArgs),
    /// Weighted modulation-space norm of a signal.
    Modnorm(ModnormArgs),
    /// Randomised checks of the Heisenberg group and its representations.
    HeisenbergCheck(HeisenbergArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// delta, twopoint, box(n), gaussian or gaussian(width).
    #[arg(long, default_value = "gaussian")]
    pub window: String,

    /// Window samples, one "re,im" pair per line; overrides --window.
    #[arg(long)]
    pub window_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long = "L")]
    pub len: usize,
    /// Time step (divisor of L).
    #[arg(long)]
    pub a: usize,
    /// Frequency step (divisor of L).
    #[arg(long)]
    pub b: usize,
    #[command(flatten)]
    pub window: WindowArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StftArgs {
    #[arg(long = "L")]
    pub len: usize,
    #[command(flatten)]
    pub window: WindowArgs,
    /// "random" or a window name used as the analysed signal.
    #[arg(long, default_value = "random")]
    pub signal: String,
    /// Also write |V f| as CSV (rows are frequencies).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct JanssenArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Synthesis window of a cross pair; defaults to the analysis window.
    #[arg(long)]
    pub psi: Option<String>,
    /// Coefficients below this modulus are not listed.
    #[arg(long, default_value_t = 1e-12)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TraceProbeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Probe window; defaults to the system window.
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-4,1e-6,1e-8,1e-10")]
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TwistedInvertArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Finite sum such as "e-0.5*d(1,0)" or "2*e+(0.1-0.2i)*d(0,1)".
    #[arg(long)]
    pub seq: String,
    /// Target for both one-sided ℓ¹ residuals.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_terms: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SpectralRadiusArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub seq: String,
    /// Largest power used by the ℓ¹ estimate.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Truncation radius of the ℓ² operator; chosen automatically if absent.
    #[arg(long = "R")]
    pub radius: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Point set file, one "omega,x" pair per line.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub points: PointArgs,
    /// Lattice generators "u1,u2;v1,v2", used when no point file is given.
    #[arg(long, default_value = "1,0;0,1")]
    pub lattice: String,
    /// Declared extent (sup-norm) of the point set.
    #[arg(long, default_value_t = 60.0)]
    pub extent: f64,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
    pub radii: Vec<f64>,
    /// Centres per side of the square centre grid.
    #[arg(long, default_value_t = 21)]
    pub centers: usize,
    /// Also write radius,nu_minus,estimate rows as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlaneArgs {
    /// Samples per unit of time; frequency unit is L divided by it. Defaults to √L.
    #[arg(long)]
    pub time_unit: Option<usize>,
    /// Ball centre "eta,a" in plane units.
    #[arg(long, default_value = "0,0")]
    pub center: String,
}

#[derive(Debug, Clone, Args)]
pub struct HapArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub plane: PlaneArgs,
    #[command(flatten)]
    pub points: PointArgs,
    /// "random" or a window name used as the approximated signal.
    #[arg(long, default_value = "random")]
    pub signal: String,
    #[arg(long = "R")]
    pub radius: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RsBoundsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub plane: PlaneArgs,
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long)]
    pub r: f64,
    #[arg(long = "R")]
    pub big_r: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ModnormArgs {
    #[arg(long = "L")]
    pub len: usize,
    /// "random" or a window name.
    #[arg(long, default_value = "random")]
    pub signal: String,
    /// const, poly(s), poly-freq(s) or subexp(b).
    #[arg(long, default_value = "poly(1)")]
    pub weight: String,
    /// Analysis window; defaults to a Gaussian of width √L.
    #[arg(long)]
    pub gamma_window: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct HeisenbergArgs {
    #[arg(long = "L", default_value_t = 12)]
    pub len: usize,
    #[arg(long, default_value_t = 3)]
    pub a: usize,
    #[arg(long, default_value_t = 2)]
    pub b: usize,
    /// Length of the cyclic model for the induced representations.
    #[arg(long = "N", default_value_t = 7)]
    pub n: usize,
    /// Numerator p of γ = p/N.
    #[arg(long, default_value_t = 3)]
    pub p: i64,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}
