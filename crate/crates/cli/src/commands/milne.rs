use serde::{Deserialize, Serialize};

use kinlayer::milne::{self, DecayFit, MilneProblem, MilneSolution};

use crate::config::RunConfig;
use crate::error::Result;
use crate::invariants::MilneInvariants;
use crate::output::{num, Output};

/// Body of `milne.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilneDoc {
    pub epsilon: f64,
    pub f_infinity: f64,
    pub f_infinity_secondary: f64,
    pub decay_rate: Option<f64>,
    pub iterations: usize,
    pub eta: Vec<f64>,
    pub phi: Vec<f64>,
    pub f_bar: Vec<f64>,
    /// One row of `f(η_i, ·)` per radial node.
    pub f: Vec<Vec<f64>>,
    pub invariants: MilneInvariants,
}

pub fn problem(cfg: &RunConfig, eps: f64) -> Result<MilneProblem> {
    let mut p = MilneProblem::new(cfg.force_field(eps)?, cfg.profile()?)
        .with_kind(cfg.kind())
        .with_grids(cfg.radial()?, cfg.angles()?)
        .with_solver(cfg.solver_mode())
        .with_penalty(cfg.penalty);
    p.tolerance = cfg.tolerance;
    Ok(p)
}

pub fn document(cfg: &RunConfig, eps: f64, sol: &MilneSolution) -> Result<MilneDoc> {
    let n = sol.eta().len();
    let f: Vec<Vec<f64>> = (0..n).map(|i| sol.row(i).to_vec()).collect();
    let invariants = MilneInvariants::compute(sol.eta(), &f, &cfg.force_field(eps)?, &cfg.profile()?)?;
    Ok(MilneDoc {
        epsilon: eps,
        f_infinity: sol.f_infinity,
        f_infinity_secondary: sol.f_infinity_secondary,
        decay_rate: match sol.decay {
            DecayFit::Rate { rate, .. } => Some(rate),
            DecayFit::FloorBound { .. } => None,
        },
        iterations: sol.iterations,
        eta: sol.eta().to_vec(),
        phi: sol.phi().to_vec(),
        f_bar: sol.f_bar().to_vec(),
        f,
        invariants,
    })
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<Vec<String>> {
    let eps = cfg.single_eps()?;
    let sol = milne::solve(&problem(cfg, eps)?)?;
    let doc = document(cfg, eps, &sol)?;
    out.json("milne.json", "milne", cfg, &doc)?;
    let d = &sol.diagnostics;
    let rows: Vec<Vec<String>> = (0..d.eta.len())
        .map(|i| {
            vec![
                num(d.eta[i]),
                num(sol.f_bar()[i]),
                num(d.alpha[i]),
                num(d.beta[i]),
                num(d.orthogonality[i]),
                num(d.weighted_flux[i]),
            ]
        })
        .collect();
    out.csv("milne_diagnostics.csv", &["eta", "f_bar", "alpha", "beta", "orthogonality", "weighted_flux"], &rows)?;

    let inv = &doc.invariants;
    let mut lines = vec![
        format!("f_infinity: {:?}", sol.f_infinity),
        format!("f_infinity_secondary: {:?}", sol.f_infinity_secondary),
        format!("f_bar(0): {:?}", inv.f_bar0),
        match sol.decay {
            DecayFit::Rate { rate, .. } => format!("K0: {rate:?}"),
            DecayFit::FloorBound { bound, .. } => format!("K0: not fitted (tail at round-off, bound {bound:?})"),
        },
        format!("iterations: {:?}", sol.iterations),
        format!("max_principle_margin: {:?}", inv.max_principle_margin),
        format!("max_orthogonality: {:?}", inv.max_orthogonality),
        format!("weighted_flux_variation: {:?}", inv.flux_variation),
    ];
    if cfg.kind() == milne::BoundaryKind::Diffusive {
        lines.push(format!("boundary_moment: {:?}", inv.boundary_moment));
    }
    for w in &sol.warnings {
        lines.push(format!("warning: {w:?}"));
    }
    Ok(lines)
}
