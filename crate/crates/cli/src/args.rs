use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "kinlayer", version, about = "Boundary layers of steady transport in the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a half-space layer problem.
    Milne(Common),
    /// Solve the kinetic problem in the disk.
    Disk(Common),
    /// Compare composite expansions against disk solves over an ε sweep.
    Expand(ExpandArgs),
    /// Run an invariant suite; exits 5 on any violation.
    Verify(VerifyArgs),
    /// Grazing, point-formula and far-field probes.
    Probe(ProbeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Milne(_) => "milne",
            Command::Disk(_) => "disk",
            Command::Expand(_) => "expand",
            Command::Verify(_) => "verify",
            Command::Probe(_) => "probe",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Milne(c) | Command::Disk(c) => c,
            Command::Expand(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Probe(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForceArg {
    Geometric,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Inflow,
    Diffusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverArg {
    Direct,
    /// Source iteration with penalty λ.
    Damped,
    /// Anderson-accelerated source iteration.
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Classical,
    Geometric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Force,
    Milne,
    Disk,
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Grazing,
    Point,
    FarField,
}

/// Options shared by every command. Unset flags fall back to the config
/// file, then to the documented defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON config file; flags override its keys.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Boundary data: const:<c> | cos:<k>[:shift] | table:<path>  [default: cos:1:2]
    #[arg(long, value_name = "SPEC")]
    pub g: Option<String>,
    /// ε or a comma-separated list of ε  [default: 0.1]
    #[arg(long, value_name = "LIST")]
    pub eps: Option<String>,
    /// Angular nodes  [default: 64]
    #[arg(long)]
    pub n_angles: Option<usize>,
    /// Radial nodes of the layer grid  [default: 400]
    #[arg(long)]
    pub n_eta: Option<usize>,
    /// Slab length L  [default: 30]
    #[arg(long)]
    pub length: Option<f64>,
    /// Grading ratio of the radial grids  [default: 1.15]
    #[arg(long)]
    pub grading: Option<f64>,
    /// First layer spacing  [default: 0.002]
    #[arg(long)]
    pub first_spacing: Option<f64>,
    /// Rings of the disk grid  [default: layer adapted]
    #[arg(long)]
    pub n_r: Option<usize>,
    /// Columns of the disk grid  [default: 1]
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Layer force  [default: geometric]
    #[arg(long, value_enum)]
    pub force: Option<ForceArg>,
    /// Boundary condition  [default: inflow]
    #[arg(long, value_enum)]
    pub bc: Option<KindArg>,
    /// Linear solver  [default: direct]
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// Penalty λ of the damped iteration  [default: 0]
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Iteration cap of the iterative solvers  [default: 500]
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Solver tolerance  [default: 1e-10]
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output directory; KINLAYER_OUT_DIR applies when unset  [default: .]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub common: Common,
    /// Expansion variant  [default: both]
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Expansion order, 0 or 1  [default: 0]
    #[arg(long)]
    pub order: Option<u8>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Invariant suite
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Re-verify a serialized milne or disk solution instead of solving.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(value_enum)]
    pub kind: Option<ProbeKind>,
    /// Refinement levels of the grazing probe  [default: 5]
    #[arg(long)]
    pub levels: Option<usize>,
}
