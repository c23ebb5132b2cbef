use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shiftdyn::continuous::{self, ContinuousWeight};
use shiftdyn::growth::DEFAULT_SLACK;
use shiftdyn::{PowerMode, WeightSequence};

use crate::error::{CliError, CliResult};

/// Seed used by every randomized command unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_229;
/// Relative tolerance for identities (form preservation, duality).
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Absolute log-domain tolerance for closed-form comparisons.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "shiftdyn", version, about = "Orbit growth experiments for weighted bilateral shifts")]
pub struct Cli {
    /// Directory for CSV artifacts.
    #[arg(long, global = true, env = "SHIFTDYN_OUT_DIR", default_value = "shiftdyn-out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample ln‖T^N f‖ over a range of N.
    Orbit(OrbitArgs),
    /// Estimate forward and backward Lyapunov exponents of an orbit.
    Lyapunov {
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Fraction of each side used for the tail fit.
        #[arg(long, default_value_t = 0.5)]
        fit_window: f64,
    },
    /// Test an orbit against the S0 / bounded / S+ growth classes.
    Classify(ClassifyArgs),
    /// Checkpoint margins showing that no exponential bound holds.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = shiftdyn::growth::DEFAULT_K_MAX)]
        kmax: u32,
    },
    /// Check that the doubled operator preserves both indefinite forms.
    VerifyForms {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        horizon: i64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = IDENTITY_TOLERANCE)]
        tolerance: f64,
    },
    /// Gelfand-formula estimates of the spectral radius.
    Spectral {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Forward)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        nmax: i64,
        /// Basis indices `[-window, window]` scanned for the operator norm.
        #[arg(long, default_value_t = 300)]
        window: i64,
        #[arg(long, default_value_t = CLOSED_FORM_TOLERANCE)]
        tolerance: f64,
    },
    /// Evolve a Gaussian bump under the continuous transport semigroup.
    Continuous(ContinuousArgs),
    /// Run the full acceptance battery.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Krein,
    Geometric,
    Mixed,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Krein)]
    pub family: FamilyArg,
    /// Family parameter (ignored by `mixed`).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

impl FamilyArgs {
    pub fn sequence(&self) -> CliResult<WeightSequence> {
        Ok(match self.family {
            FamilyArg::Krein => WeightSequence::krein(self.c)?,
            FamilyArg::Geometric => WeightSequence::geometric(self.c)?,
            FamilyArg::Mixed => WeightSequence::mixed(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Forward,
    AdjointInverse,
}

impl From<ModeArg> for PowerMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Forward => PowerMode::Forward,
            ModeArg::AdjointInverse => PowerMode::AdjointInverse,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// `e<n>`, `harmonic:<K>`, `random:<size>:<seed>` or `file:<path>`.
    #[arg(long, default_value = "e0")]
    pub vector: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Forward)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub nmin: i64,
    #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
    pub nmax: i64,
    #[arg(long, default_value_t = 1)]
    pub stride: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
pub enum TestArg {
    SZero,
    SBounded,
    SPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpectArg {
    Consistent,
    Violated,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[arg(long, value_enum)]
    pub test: TestArg,
    /// Rate `a > 1` for the S+ test.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    pub slack: f64,
    /// Classify `f ⊕ 0` or `0 ⊕ f` under the doubled operator instead.
    #[arg(long, value_enum)]
    pub doubled: Option<ComponentArg>,
    /// Exit with status 1 unless the verdict matches.
    #[arg(long, value_enum)]
    pub expect: Option<ExpectArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Oscillating,
    Geometric,
    Mixed,
}

impl From<WeightArg> for ContinuousWeight {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Oscillating => ContinuousWeight::Oscillating,
            WeightArg::Geometric => ContinuousWeight::Geometric,
            WeightArg::Mixed => ContinuousWeight::Mixed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ContinuousArgs {
    #[arg(long, value_enum, default_value_t = WeightArg::Geometric)]
    pub weight: WeightArg,
    #[arg(long, default_value_t = continuous::DEFAULT_X_MIN, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = continuous::DEFAULT_X_MAX, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = continuous::DEFAULT_DX)]
    pub dx: f64,
    /// Center of the initial Gaussian bump.
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub center: f64,
    #[arg(long, default_value_t = 0.5)]
    pub width: f64,
    /// Final time; must be a multiple of `--t-step`.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Time step; must be a multiple of `--dx`.
    #[arg(long, default_value_t = 0.25)]
    pub t_step: f64,
}

pub fn check_positive(name: &str, value: i64) -> CliResult<()> {
    if value < 1 {
        return Err(CliError::Usage(format!("--{name} must be >= 1, got {value}")));
    }
    Ok(())
}
