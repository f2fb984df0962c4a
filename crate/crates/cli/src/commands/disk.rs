use serde::{Deserialize, Serialize};

use kinlayer::disk::{self, DiskBoundary, DiskField, DiskProblem};

use crate::config::RunConfig;
use crate::error::Result;
use crate::invariants::DiskInvariants;
use crate::output::{num, Output};

/// Body of `disk.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskDoc {
    pub epsilon: f64,
    pub iterations: usize,
    pub radii: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// `u_bar[i * n_theta + j]`
    pub u_bar: Vec<f64>,
    /// One row of `u(r_i, θ_j, ·)` per space node, same order as `u_bar`.
    pub u: Vec<Vec<f64>>,
    pub wall_moment: Vec<f64>,
    pub invariants: DiskInvariants,
}

pub fn problem(cfg: &RunConfig, eps: f64) -> Result<DiskProblem> {
    Ok(DiskProblem::new(eps, DiskBoundary::Uniform(cfg.profile()?), cfg.disk_grid(eps)?)
        .with_kind(cfg.kind())
        .with_solver(cfg.solver_mode())
        .with_tolerance(cfg.tolerance))
}

pub fn document(cfg: &RunConfig, eps: f64, field: &DiskField) -> Result<DiskDoc> {
    let g = field.grid();
    let mut u = Vec::with_capacity(g.n_space());
    for i in 0..g.n_r() {
        for j in 0..g.n_theta() {
            u.push(field.u_row(i, j).to_vec());
        }
    }
    let invariants = DiskInvariants::compute(field.u_bar_values(), &u, &cfg.profile()?);
    Ok(DiskDoc {
        epsilon: eps,
        iterations: field.iterations,
        radii: g.radii().to_vec(),
        theta: (0..g.n_theta()).map(|j| g.theta(j)).collect(),
        phi: g.angles().nodes().to_vec(),
        u_bar: field.u_bar_values().to_vec(),
        u,
        wall_moment: field.wall_moment().to_vec(),
        invariants,
    })
}

pub fn run(cfg: &RunConfig, out: &mut Output) -> Result<Vec<String>> {
    let eps = cfg.single_eps()?;
    let field = disk::solve(&problem(cfg, eps)?)?;
    let doc = document(cfg, eps, &field)?;
    out.json("disk.json", "disk", cfg, &doc)?;
    let g = field.grid();
    let mut rows = Vec::with_capacity(g.n_space());
    for i in 0..g.n_r() {
        for j in 0..g.n_theta() {
            rows.push(vec![num(g.radii()[i]), num(g.theta(j)), num(field.u_bar(i, j))]);
        }
    }
    out.csv("disk_slice.csv", &["r", "theta", "u_bar"], &rows)?;
    let inv = &doc.invariants;
    Ok(vec![
        format!("rings: {}  columns: {}  angles: {:?}", g.n_r(), g.n_theta(), g.n_angles()),
        format!("u_bar(centre): {:?}", field.average_at(0.0, 0.0)),
        format!("u range: [{:?}, {:?}]", inv.u_min, inv.u_max),
        format!("max_principle_margin: {:?}", inv.max_principle_margin),
        format!("average_residual: {:?}", inv.average_residual),
        format!("iterations: {:?}", field.iterations),
    ])
}
