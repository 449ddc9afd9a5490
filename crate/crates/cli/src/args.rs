use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ibeam",
    version,
    about = "Inflated-beam deflection, buckling and load estimation",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Beam radius R (m, or mm with --units kpa-mm)
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Wall thickness t (m, or mm)
    #[arg(long, global = true)]
    pub thickness: Option<f64>,
    /// Beam length L (m, or mm)
    #[arg(long, global = true)]
    pub length: Option<f64>,
    /// Gauge pressure p (Pa, or kPa)
    #[arg(long, global = true)]
    pub pressure: Option<f64>,
    /// Wall Young's modulus E (Pa, or kPa)
    #[arg(long, global = true)]
    pub modulus: Option<f64>,
    /// Multiplier on E, in (0, 1]
    #[arg(long = "modulus-factor", global = true)]
    pub modulus_factor: Option<f64>,
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value file with defaults for any flag; explicit flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Input units [default: si]
    #[arg(long, global = true, value_enum)]
    pub units: Option<Units>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tip deflection under a tip load
    Deflect(LoadArgs),
    /// Sampled deflection profile
    Profile(ProfileArgs),
    /// Critical load, length and pressure, root stress and wrinkle angle
    Buckling(LoadArgs),
    /// Tip deflection over a grid of load, length or pressure
    Sweep(SweepArgs),
    /// Tip load from a measured tip displacement
    Inverse(InverseArgs),
    /// Young's modulus from stress-strain data over the operating window
    FitModulus(FitArgs),
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    /// Tip load Q (N)
    #[arg(long)]
    pub load: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Tip load Q (N)
    #[arg(long)]
    pub load: Option<f64>,
    /// Number of stations [default: 201]
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept quantity: load, length or pressure
    #[arg(long)]
    pub variable: Option<String>,
    /// First grid value (same units as the swept flag)
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid value
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points [default: 50]
    #[arg(long)]
    pub points: Option<usize>,
    /// Fixed tip load for length and pressure sweeps (N)
    #[arg(long)]
    pub load: Option<f64>,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// Measured tip displacement (m, or mm)
    #[arg(long)]
    pub displacement: Option<f64>,
    /// Stations in the reconstructed profile [default: 201]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also write the reconstructed profile here
    #[arg(long = "profile-out")]
    pub profile_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with columns strain, stress_pa
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Tip load defining the operating window (N)
    #[arg(long)]
    pub load: Option<f64>,
    /// Explicit lower stress bound (Pa, or kPa)
    #[arg(long = "sigma-min")]
    pub sigma_min: Option<f64>,
    /// Explicit upper stress bound (Pa, or kPa)
    #[arg(long = "sigma-max")]
    pub sigma_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Si,
    #[value(name = "kpa-mm")]
    KpaMm,
}
