use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use kinlayer::discretization::{AngularQuadrature, DiskGrid, RadialGrid};
use kinlayer::geometry::ForceField;
use kinlayer::milne::{BoundaryKind, SolverMode};
use kinlayer::BoundaryProfile;

use crate::args::{Command, Common, ForceArg, KindArg, ProbeKind, SolverArg, Suite, VariantArg};
use crate::boundary_spec::BoundarySpec;
use crate::error::{CliError, Result};

pub const OUT_DIR_ENV: &str = "KINLAYER_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EpsValue {
    One(f64),
    Many(Vec<f64>),
}

/// Keys of the optional JSON config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub g: Option<String>,
    pub eps: Option<EpsValue>,
    pub n_angles: Option<usize>,
    pub n_eta: Option<usize>,
    pub length: Option<f64>,
    pub grading: Option<f64>,
    pub first_spacing: Option<f64>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
    pub force: Option<ForceArg>,
    pub bc: Option<KindArg>,
    pub solver: Option<SolverArg>,
    pub penalty: Option<f64>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub variant: Option<VariantArg>,
    pub order: Option<u8>,
    pub suite: Option<Suite>,
    pub levels: Option<usize>,
    pub probe: Option<ProbeKind>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub g: String,
    pub eps: Vec<f64>,
    pub n_angles: usize,
    pub n_eta: usize,
    pub length: f64,
    pub grading: f64,
    pub first_spacing: f64,
    pub n_r: Option<usize>,
    pub n_theta: usize,
    pub force: ForceArg,
    pub bc: KindArg,
    pub solver: SolverArg,
    pub penalty: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub boundary: BoundarySpec,
}

pub fn parse_eps_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::config(format!("eps entry `{t}` is not a number"))))
        .collect()
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::config(msg))
    }
}

impl RunConfig {
    /// Merges flags over the config file over defaults; the output
    /// directory is taken from `--out`, then `KINLAYER_OUT_DIR`, then the
    /// file, then `.`.
    pub fn resolve(command: &Command, env_out: Option<PathBuf>) -> Result<(Self, ConfigFile)> {
        let flags: &Common = command.common();
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        if let Some(c) = &file.command {
            if c != command.name() {
                return Err(CliError::config(format!("config file is for `{c}`, not `{}`", command.name())));
            }
        }
        let default_g = match command {
            Command::Probe(_) => "cos:3",
            _ => "cos:1:2",
        };
        let g = flags.g.clone().or(file.g.clone()).unwrap_or_else(|| default_g.into());
        let boundary: BoundarySpec = g.parse().map_err(CliError::Config)?;
        let eps = match (&flags.eps, &file.eps) {
            (Some(s), _) => parse_eps_list(s)?,
            (None, Some(EpsValue::One(e))) => vec![*e],
            (None, Some(EpsValue::Many(v))) => v.clone(),
            (None, None) => vec![0.1],
        };
        let cfg = RunConfig {
            command: command.name().into(),
            g: boundary.to_string(),
            eps,
            n_angles: flags.n_angles.or(file.n_angles).unwrap_or(64),
            n_eta: flags.n_eta.or(file.n_eta).unwrap_or(RadialGrid::DEFAULT_POINTS),
            length: flags.length.or(file.length).unwrap_or(RadialGrid::DEFAULT_LENGTH),
            grading: flags.grading.or(file.grading).unwrap_or(RadialGrid::DEFAULT_RATIO),
            first_spacing: flags.first_spacing.or(file.first_spacing).unwrap_or(RadialGrid::DEFAULT_FIRST_SPACING),
            n_r: flags.n_r.or(file.n_r),
            n_theta: flags.n_theta.or(file.n_theta).unwrap_or(1),
            force: flags.force.or(file.force).unwrap_or(ForceArg::Geometric),
            bc: flags.bc.or(file.bc).unwrap_or(KindArg::Inflow),
            solver: flags.solver.or(file.solver).unwrap_or(SolverArg::Direct),
            penalty: flags.penalty.or(file.penalty).unwrap_or(0.0),
            max_iterations: flags.max_iterations.or(file.max_iterations).unwrap_or(500),
            tolerance: flags.tolerance.or(file.tolerance).unwrap_or(1e-10),
            out: flags.out.clone().or(env_out).or(file.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            boundary,
        };
        cfg.validate()?;
        Ok((cfg, file))
    }

    pub fn validate(&self) -> Result<()> {
        check(!self.eps.is_empty(), "eps list is empty")?;
        check(self.eps.iter().all(|e| *e > 0.0 && *e <= 1.0), "every eps must lie in (0, 1]")?;
        check(self.n_angles >= 8 && self.n_angles % 2 == 0, "n_angles must be even and at least 8")?;
        check(self.n_eta >= 8, "n_eta must be at least 8")?;
        check(self.length >= 25.0 && self.length.is_finite(), "length must be finite and at least 25")?;
        check(self.grading >= 1.0 && self.grading.is_finite(), "grading must be at least 1")?;
        check(self.first_spacing > 0.0 && self.first_spacing <= 1e-2, "first_spacing must lie in (0, 0.01]")?;
        check(self.n_r.map_or(true, |n| n >= 4), "n_r must be at least 4")?;
        check(self.n_theta >= 1, "n_theta must be positive")?;
        check(self.penalty >= 0.0 && self.penalty.is_finite(), "penalty must be non-negative")?;
        check(self.max_iterations >= 1, "max_iterations must be positive")?;
        check(self.tolerance > 0.0 && self.tolerance < 1.0, "tolerance must lie in (0, 1)")?;
        Ok(())
    }

    pub fn single_eps(&self) -> Result<f64> {
        match self.eps.as_slice() {
            [e] => Ok(*e),
            _ => Err(CliError::config(format!("`{}` takes a single eps", self.command))),
        }
    }

    pub fn profile(&self) -> Result<BoundaryProfile> {
        self.boundary.profile()
    }

    pub fn kind(&self) -> BoundaryKind {
        match self.bc {
            KindArg::Inflow => BoundaryKind::Inflow,
            KindArg::Diffusive => BoundaryKind::Diffusive,
        }
    }

    pub fn force_field(&self, eps: f64) -> Result<ForceField> {
        Ok(match self.force {
            ForceArg::Geometric => ForceField::geometric(eps)?,
            ForceArg::None => ForceField::none(eps)?,
        })
    }

    pub fn solver_mode(&self) -> SolverMode {
        match self.solver {
            SolverArg::Direct => SolverMode::Direct,
            SolverArg::Damped => SolverMode::SourceIteration { max_iterations: self.max_iterations },
            SolverArg::Accelerated => SolverMode::Anderson { depth: 5, max_iterations: self.max_iterations },
        }
    }

    pub fn radial(&self) -> Result<RadialGrid> {
        Ok(RadialGrid::graded(self.n_eta, self.length, self.grading, self.first_spacing)?)
    }

    pub fn angles(&self) -> Result<AngularQuadrature> {
        Ok(AngularQuadrature::new(self.n_angles)?)
    }

    /// Layer-adapted rings unless `n_r` is set, in which case the wall
    /// spacing is `first_spacing · ε`.
    pub fn disk_grid(&self, eps: f64) -> Result<DiskGrid> {
        Ok(match self.n_r {
            None => DiskGrid::layer_adapted(eps, self.n_theta, self.n_angles)?,
            Some(n) => DiskGrid::graded(n, self.n_theta, self.n_angles, self.first_spacing * eps, self.grading)?,
        })
    }
}
