use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use kinlayer::disk::{self, DiskBoundary};
use kinlayer::expansion::{build_composite, error_report, ExpansionSpec, Variant};
use kinlayer::geometry::{force_lemma_suite, ForceField};
use kinlayer::milne::{self, BoundaryKind};
use kinlayer::BoundaryProfile;

use crate::args::{ForceArg, KindArg, Suite};
use crate::commands::{disk as disk_cmd, milne as milne_cmd};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::invariants::{Check, DiskInvariants, MilneInvariants};
use crate::output::{read_json, Output};

pub const FORCE_SAMPLES: usize = 4000;
pub const CONSTANT_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct VerifyDoc<'a> {
    suite: Suite,
    input: Option<String>,
    checks: &'a [Check],
    passed: bool,
}

/// The parts of a stored document needed to re-check it.
#[derive(Debug, Deserialize)]
struct StoredConfig {
    g: String,
    force: ForceArg,
    bc: KindArg,
}

#[derive(Debug, Deserialize)]
struct Stored<T> {
    schema_version: u32,
    kind: String,
    config: StoredConfig,
    #[serde(flatten)]
    body: T,
}

fn kind_of(bc: KindArg) -> BoundaryKind {
    match bc {
        KindArg::Inflow => BoundaryKind::Inflow,
        KindArg::Diffusive => BoundaryKind::Diffusive,
    }
}

fn recheck(suite: Suite, path: &Path) -> Result<Vec<Check>> {
    let reproduced = |same: bool| Check::at_most("stored invariants reproduced", if same { 0.0 } else { 1.0 }, 0.0);
    match suite {
        Suite::Milne => {
            let doc: Stored<milne_cmd::MilneDoc> = read_json(path)?;
            expect(&doc.kind, "milne", doc.schema_version)?;
            let g: crate::boundary_spec::BoundarySpec = doc.config.g.parse().map_err(CliError::Config)?;
            let force = match doc.config.force {
                ForceArg::Geometric => ForceField::geometric(doc.body.epsilon)?,
                ForceArg::None => ForceField::none(doc.body.epsilon)?,
            };
            let inv = MilneInvariants::compute(&doc.body.eta, &doc.body.f, &force, &g.profile()?)?;
            let mut c = inv.checks(kind_of(doc.config.bc));
            c.push(reproduced(inv == doc.body.invariants));
            Ok(c)
        }
        Suite::Disk => {
            let doc: Stored<disk_cmd::DiskDoc> = read_json(path)?;
            expect(&doc.kind, "disk", doc.schema_version)?;
            let g: crate::boundary_spec::BoundarySpec = doc.config.g.parse().map_err(CliError::Config)?;
            let inv = DiskInvariants::compute(&doc.body.u_bar, &doc.body.u, &g.profile()?);
            let mut c = inv.checks(kind_of(doc.config.bc), doc.body.epsilon);
            c.push(reproduced(inv == doc.body.invariants));
            Ok(c)
        }
        _ => Err(CliError::config("--input applies to the milne and disk suites")),
    }
}

fn expect(kind: &str, want: &str, version: u32) -> Result<()> {
    if kind != want {
        return Err(CliError::config(format!("input holds a `{kind}` document, expected `{want}`")));
    }
    if version != crate::output::SCHEMA_VERSION {
        return Err(CliError::config(format!("unsupported schema_version {version}")));
    }
    Ok(())
}

fn force_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Vec::new();
    for &eps in &cfg.eps {
        let r = force_lemma_suite(&ForceField::geometric(eps)?, FORCE_SAMPLES);
        c.push(Check::at_most(&format!("force lemma violations, eps {eps}"), r.violations as f64, 0.0));
    }
    Ok(c)
}

fn milne_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Vec::new();
    for &eps in &cfg.eps {
        let sol = milne::solve(&milne_cmd::problem(cfg, eps)?)?;
        let doc = milne_cmd::document(cfg, eps, &sol)?;
        for mut check in doc.invariants.checks(cfg.kind()) {
            check.name = format!("{}, eps {eps}", check.name);
            c.push(check);
        }
        // constants are fixed points of the in-flow problem
        let mut p = milne_cmd::problem(cfg, eps)?.with_kind(BoundaryKind::Inflow);
        p.boundary = BoundaryProfile::constant(1.0);
        let one = milne::solve(&p)?;
        let dev = one.values().iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        c.push(Check::at_most(&format!("constant reproduced, eps {eps}"), dev, CONSTANT_TOL));
    }
    Ok(c)
}

fn disk_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Vec::new();
    for &eps in &cfg.eps {
        let field = disk::solve(&disk_cmd::problem(cfg, eps)?)?;
        let doc = disk_cmd::document(cfg, eps, &field)?;
        for mut check in doc.invariants.checks(cfg.kind(), eps) {
            check.name = format!("{}, eps {eps}", check.name);
            c.push(check);
        }
    }
    Ok(c)
}

fn expansion_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Vec::new();
    let (radial, angles) = (cfg.radial()?, cfg.angles()?);
    let probes = [(0.0, 0.0, 0.3), (0.5, -0.2, 2.0), (0.99, 0.0, -1.0), (0.0, 1.0, 0.01)];
    for &eps in &cfg.eps {
        for variant in [Variant::Geometric, Variant::Classical] {
            let spec = ExpansionSpec::new(variant, 0, DiskBoundary::Uniform(BoundaryProfile::constant(1.0)), BoundaryKind::Inflow, eps)
                .with_grids(radial.clone(), angles.clone());
            let comp = build_composite(&spec)?;
            let dev = probes.iter().fold(0.0f64, |m, &(x, y, p)| m.max((comp.eval(x, y, p) - 1.0).abs()));
            c.push(Check::at_most(&format!("{} composite of constant data, eps {eps}", variant.name()), dev, CONSTANT_TOL));
        }
        let reference = disk::solve(&disk_cmd::problem(cfg, eps)?)?;
        let spec = ExpansionSpec::new(Variant::Geometric, 0, DiskBoundary::Uniform(cfg.profile()?), cfg.kind(), eps)
            .with_grids(radial.clone(), angles.clone());
        let rep = error_report(&spec, &reference)?;
        c.push(Check::at_most(&format!("remainder identity, eps {eps}"), rep.remainder_identity, IDENTITY_TOL));
        let sane = rep.sup_error.is_finite() && rep.l2_error >= 0.0 && rep.sup_error >= rep.node_sup_error;
        c.push(Check::at_most(&format!("error norms consistent, eps {eps}"), if sane { 0.0 } else { 1.0 }, 0.0));
    }
    Ok(c)
}

pub fn run(cfg: &RunConfig, suite: Suite, input: Option<&Path>, out: &mut Output) -> Result<Vec<String>> {
    let checks = match input {
        Some(path) => recheck(suite, path)?,
        None => match suite {
            Suite::Force => force_suite(cfg)?,
            Suite::Milne => milne_suite(cfg)?,
            Suite::Disk => disk_suite(cfg)?,
            Suite::Expansion => expansion_suite(cfg)?,
        },
    };
    let passed = checks.iter().all(|c| c.passed);
    let doc = VerifyDoc { suite, input: input.map(|p| p.display().to_string()), checks: &checks, passed };
    out.json("verify.json", "verify", cfg, &doc)?;
    let mut lines: Vec<String> = checks.iter().map(Check::line).collect();
    if passed {
        lines.push(format!("{} checks passed", checks.len()));
        Ok(lines)
    } else {
        let mut stdout = std::io::stdout().lock();
        for l in &lines {
            let _ = writeln!(stdout, "{l}");
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Invariant(format!("{failed} of {} checks failed", checks.len())))
    }
}
