use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "calibra", version, about = "Symplectic normal forms, calibrations and affine non-squeezing experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Restarts for searches and comass estimates.
    #[arg(long, global = true, default_value_t = 16)]
    pub restarts: usize,
    /// Iteration budget per restart.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: usize,
    /// Write the result here (plus a manifest next to it) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Williamson normal form SᵀMS = Λ ⊕ Λ of a positive-definite matrix.
    Williamson {
        /// JSON array of rows.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Solver::Hermitian)]
        solver: Solver,
    },
    /// Symplectic spectrum of an ellipsoid.
    Spectrum {
        /// JSON {"center": [...], "shape": [[...]]}.
        #[arg(long)]
        ellipsoid: PathBuf,
    },
    /// Linear symplectic width πr₁² and optionally the k-width.
    Width {
        #[arg(long)]
        ellipsoid: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Symplectic / anti-symplectic / neither.
    Classify {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Stabilizer classification for a power of the symplectic form.
    PowerClassify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Multi-restart comass estimate.
    Comass {
        #[command(flatten)]
        form: FormSource,
        /// Ascent iterations per restart (defaults to --budget).
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Minimize the enclosing cylinder radius over a group.
    Squeeze {
        #[command(flatten)]
        target: SqueezeTarget,
    },
    /// Random group elements and translations against the non-squeezing floor.
    Sweep {
        #[command(flatten)]
        target: SqueezeTarget,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Constructive squeezing witness for a non-rigid map.
    Witness {
        /// Real 2n×2n rows, or {"re": [[...]], "im": [[...]]} for slag.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = WitnessKind::Symplectic)]
        kind: WitnessKind,
    },
    /// Holomorphic volume form checks: Ω-preservation, phase, det_ℂ.
    SlagCheck {
        #[arg(long)]
        matrix: PathBuf,
        /// Two phases for the two-phase check, e.g. --phases 0 1.5708.
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        phases: Option<Vec<f64>>,
    },
    /// Evaluate a form on vectors.
    FormsEval {
        #[command(flatten)]
        form: FormSource,
        /// JSON list of vectors (numbers, or "p/q" strings with --exact).
        #[arg(long)]
        vectors: PathBuf,
        /// Exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Hermitian,
    Symmetric,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Symplectic,
    Slag,
}

#[derive(Args, Debug, Serialize)]
pub struct FormSource {
    /// Catalog name such as g2_phi or omega_power_normalized(2).
    #[arg(long, conflicts_with = "form_file", required_unless_present = "form_file")]
    pub form: Option<String>,
    /// Form JSON {"dim", "degree", "terms"}.
    #[arg(long)]
    pub form_file: Option<PathBuf>,
    /// Ambient dimension for catalog forms (7 for g2, 8 for spin7 by default).
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// Sp(2n, ℝ).
    Sp,
    /// Stabilizer of ω^k.
    Power,
    /// SL(n, ℂ).
    Slnc,
    /// O(dim).
    Iso,
    /// exp of the span of --generators.
    Custom,
}

#[derive(Args, Debug, Serialize)]
pub struct SqueezeTarget {
    #[arg(long, value_enum)]
    pub group: GroupKind,
    /// Half dimension for sp, power and slnc.
    #[arg(long)]
    pub n: Option<usize>,
    /// Power for --group power.
    #[arg(long)]
    pub k: Option<usize>,
    /// Dimension for --group iso.
    #[arg(long)]
    pub dim: Option<usize>,
    /// JSON list of generator matrices for --group custom.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// symplectic, lagrangian, complex:K, coordinate:K, or a JSON file of
    /// rows whose columns are an orthonormal basis.
    #[arg(long, default_value = "symplectic")]
    pub cylinder: String,
    /// Ball radius r.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}
