use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "blochmaps", version, about = "Qubit channels: complete positivity, dynamics and separability")]
#[command(args_override_self = true)]
pub struct Cli {
    /// File of `key=value` lines supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write output to PATH instead of stdout (a directory for fig3).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positivity and complete-positivity verdict for a map.
    CheckCp(MapInput),
    /// Classify an n³ grid of (Λ₁, Λ₂, Λ₃) ∈ [−1, 1]³.
    Fig1(Fig1Args),
    /// The four Bloch-inequality left-hand sides for exponential decay.
    Fig2(Fig2Args),
    /// Telegraph-noise Λ(t) for several correlation times at fixed γ.
    Fig3(Fig3Args),
    /// Integrate the Bloch equations.
    Evolve(EvolveArgs),
    /// Monte Carlo ensemble of noisy Hamiltonians against the analytic channel.
    Montecarlo(MonteCarloArgs),
    /// Separability times and partial-transpose spectrum of a dephased Bell pair.
    Separability(SeparabilityArgs),
    /// Kraus operators of a completely positive map.
    Kraus(KrausArgs),
    /// Damping basis of a Lindblad generator.
    DampingBasis(GeneratorArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("map").required(true).args(["rates", "lambda", "matrix"])))]
pub struct MapInput {
    /// Decay rates 1/T_u,1/T_v,1/T_w.
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true)]
    pub rates: Option<[f64; 3]>,
    /// Damping triple Λ₁,Λ₂,Λ₃ of a unital map.
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true)]
    pub lambda: Option<[f64; 3]>,
    /// The 4×4 matrix acting on (1, u, v, w), 16 numbers row-major.
    #[arg(long, value_parser = parse_floats::<16>, allow_hyphen_values = true)]
    pub matrix: Option<[f64; 16]>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    pub n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[arg(long, value_parser = parse_floats::<3>, default_value = "6,3,1", allow_hyphen_values = true)]
    pub rates: [f64; 3],
    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Fig3Args {
    /// Correlation times; 0 selects the white-noise channel.
    #[arg(long, value_delimiter = ',', default_value = "4,0.3,0")]
    pub taus: Vec<f64>,
    /// White-noise rate γ = 4a²τ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetKind {
    Standard,
    Squeezed,
    Triple,
}

/// Parameters of the Bloch equations or of a Lindblad generator.
#[derive(Debug, Clone, Args)]
pub struct GeneratorArgs {
    /// Rabi frequency Ω.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rabi: f64,
    /// Detuning Δ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub detuning: f64,
    /// Decay rates 1/T_u,1/T_v,1/T_w.
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true, conflicts_with = "preset")]
    pub rates: Option<[f64; 3]>,
    /// Equilibrium inversion.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, conflicts_with = "preset")]
    pub w_eq: f64,
    /// Dephasing constant D of −D[σ₃,[σ₃,·]]; adds 4D to 1/T_u and 1/T_v.
    #[arg(long, default_value_t = 0.0)]
    pub dephasing: f64,
    #[arg(long, value_enum)]
    pub preset: Option<PresetKind>,
    /// Standard preset: T₁.
    #[arg(long)]
    pub t1: Option<f64>,
    /// Standard preset: T₂.
    #[arg(long)]
    pub t2: Option<f64>,
    /// Squeezed preset: Einstein coefficient A.
    #[arg(long)]
    pub einstein_a: Option<f64>,
    /// Squeezed preset: mean photon number N.
    #[arg(long)]
    pub photons: Option<f64>,
    /// Squeezed preset: squeezing parameter M as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub squeezing: Option<Complex64>,
    /// Triple-Gaussian preset: Γ_a,Γ_b,Γ_c.
    #[arg(long, value_parser = parse_floats::<3>)]
    pub gammas: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvolveMethod {
    Ode,
    DampingBasis,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Initial Bloch vector.
    #[arg(long, value_parser = parse_floats::<3>, default_value = "0,0,1", allow_hyphen_values = true)]
    pub b0: [f64; 3],
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = EvolveMethod::Ode)]
    pub method: EvolveMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseChoice {
    Telegraph,
    Gaussian,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[arg(long, value_enum, default_value_t = NoiseChoice::Telegraph)]
    pub noise: NoiseChoice,
    /// Telegraph amplitude a.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Telegraph correlation time τ.
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    /// Gaussian white-noise rates Γ_a,Γ_b,Γ_c.
    #[arg(long, value_parser = parse_floats::<3>, default_value = "1,1,1")]
    pub gammas: [f64; 3],
    #[arg(long, value_parser = parse_floats::<3>, default_value = "1,0,0", allow_hyphen_values = true)]
    pub b0: [f64; 3],
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_traj: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("channel").required(true).args(["a", "white_noise"])))]
pub struct SeparabilityArgs {
    /// Telegraph amplitude a (requires --tau).
    #[arg(long, requires = "tau")]
    pub a: Option<f64>,
    /// Telegraph correlation time τ.
    #[arg(long)]
    pub tau: Option<f64>,
    /// White-noise channel with rate γ.
    #[arg(long, value_name = "GAMMA")]
    pub white_noise: Option<f64>,
    /// End of the scan; defaults to 40τ, or 20/γ for white noise.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Sampling step of the eigenvalue table; defaults to t_max/400.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("kmap").required(true).args(["rates", "lambda", "matrix", "rts"])))]
pub struct KrausArgs {
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true)]
    pub rates: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true)]
    pub lambda: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_floats::<16>, allow_hyphen_values = true)]
    pub matrix: Option<[f64; 16]>,
    /// Telegraph channel a,τ.
    #[arg(long, value_parser = parse_floats::<2>)]
    pub rts: Option<[f64; 2]>,
    /// Time at which rate or telegraph channels are evaluated.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

/// Parses exactly `N` comma-separated numbers.
fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        None => Ok(Complex64::new(parse_floats::<1>(s)?[0], 0.0)),
        Some(_) => {
            let [re, im] = parse_floats::<2>(s)?;
            Ok(Complex64::new(re, im))
        }
    }
}
