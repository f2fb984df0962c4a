//! Steady transport `ε w·∇u + σ u - ū = 0` in the unit disk.
//!
//! Velocities are labelled by the local angle `φ` at each point,
//! `w = -sinφ e_r - cosφ e_θ`, so `sinφ > 0` points inwards at the wall.
//! Every grid node and velocity is traced backwards along its straight
//! characteristic; the Duhamel integral of `ū` is taken with exponentially
//! weighted Gauss panels, and the averaged unknowns are found from the
//! resulting dense system.

mod chord;
mod field;
mod problem;
mod solve;

pub use chord::{exit_time, local_angle, local_velocity};
pub use field::{restrict_to_layer, sweep, DiskField, LayerView, MaxPrincipleAudit, Sweep};
pub use problem::{Absorption, DiskBoundary, DiskProblem};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub fn solve(problem: &DiskProblem) -> Result<DiskField> {
    problem.validate()?;
    let traced = solve::trace_all(problem);
    let sys = solve::assemble(problem, &traced);
    let sol = solve::solve_system(&sys, problem.solver, problem.tolerance)?;
    if sol.x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("disk average"));
    }
    let lay = traced.layout;
    let grid = &problem.grid;
    let (n_r, n_t, n_a) = (grid.n_r(), grid.n_theta(), grid.n_angles());
    // columns of the reduced system broadcast to the grid when data are
    // rotation invariant
    let column = |j: usize| if lay.n_theta == 1 { 0 } else { j };
    let mut u_bar = vec![0.0; n_r * n_t];
    for i in 0..n_r {
        for j in 0..n_t {
            u_bar[i * n_t + j] = sol.x[i * lay.n_theta + column(j)];
        }
    }
    let wall_moment: Vec<f64> = if lay.diffusive {
        (0..n_t).map(|j| sol.x[lay.wall_block() * lay.n_theta + column(j)]).collect()
    } else {
        Vec::new()
    };
    let mut u = vec![0.0; n_r * n_t * n_a];
    for i in 0..n_r {
        for k in 0..n_a {
            let ray = &traced.rays[i * n_a + k];
            if lay.n_theta == 1 {
                let v = solve::ray_value(problem, lay, ray, &sol.x, 0);
                for j in 0..n_t {
                    u[(i * n_t + j) * n_a + k] = v;
                }
            } else {
                for j in 0..n_t {
                    u[(i * n_t + j) * n_a + k] = solve::ray_value(problem, lay, ray, &sol.x, j);
                }
            }
        }
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("disk kinetic values"));
    }
    Ok(DiskField::build(problem.clone(), u_bar, wall_moment, u, sol.iterations, sol.residual, traced.clamped))
}
