//! The half-space boundary-layer problem
//!
//! `sinφ ∂η f + F(η) cosφ ∂φ f + f - f̄ = S` on `η > 0`,
//!
//! with in-flow or diffusive data at `η = 0`, truncated to `[0, L]` with a
//! specular wall at `L`. The averaged unknown `f̄` is discretised by a
//! Nyström method on the radial grid: every node and velocity is traced
//! backwards along its exact characteristic, and `f̄` is interpolated by
//! degree-seven Lagrange stencils along the way.

mod compat;
mod general;
mod kernel;
mod problem;
mod solution;

pub use compat::{check_compatibility, Compatibility};
pub use general::{
    solve_aux_ode, solve_general_source, AuxProfile, Decomposition, GeneralSolution, SourceRoute, ROUTE_TOLERANCE,
};
pub use problem::{BoundaryKind, MilneProblem, SolverMode, VolumeSource};
pub use solution::{fit_decay_profile, DecayFit, DiagnosticsTrace, MilneSolution, Warning, DECAY_NOISE_FLOOR};

use alloc::vec::Vec;

use crate::boundary::BoundaryProfile;
use crate::error::{Error, Result};

/// Tolerance on `|P f(0) - target|` after a diffusive solve.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

pub(crate) fn solve_with(problem: &MilneProblem, wall: BoundaryProfile) -> Result<MilneSolution> {
    problem.validate()?;
    let kern = kernel::assemble(problem, &wall);
    let avg = kernel::solve_averaged(&kern, problem.solver, problem.tolerance)?;
    if avg.f_bar.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("averaged solution"));
    }
    Ok(MilneSolution::build(problem.clone(), wall, avg.f_bar, avg.iterations, avg.residual))
}

/// Solves the in-flow problem `f(0, φ) = h(φ)`.
pub fn solve_inflow(problem: &MilneProblem) -> Result<MilneSolution> {
    if problem.kind != BoundaryKind::Inflow {
        return Err(Error::InvalidParameter("solve_inflow needs an in-flow problem"));
    }
    solve_with(problem, problem.boundary.clone())
}

/// Solves the diffusive problem through the in-flow problem with the same
/// data shifted by the normalisation value, then checks `P f(0)`.
pub fn solve_diffusive(problem: &MilneProblem) -> Result<MilneSolution> {
    if problem.kind != BoundaryKind::Diffusive {
        return Err(Error::InvalidParameter("solve_diffusive needs a diffusive problem"));
    }
    let compat = check_compatibility(problem);
    if !compat.passed {
        return Err(Error::Compatibility { defect: compat.defect });
    }
    let wall = problem.boundary.plus(problem.normalization);
    let mut sol = solve_with(problem, wall)?;
    let residual = sol.boundary_moment - problem.normalization;
    if residual.abs() > NORMALIZATION_TOLERANCE * (1.0 + problem.normalization.abs()) {
        sol.warnings.push(Warning::Normalization { residual });
    }
    Ok(sol)
}

/// Dispatches on the boundary kind.
pub fn solve(problem: &MilneProblem) -> Result<MilneSolution> {
    match problem.kind {
        BoundaryKind::Inflow => solve_inflow(problem),
        BoundaryKind::Diffusive => solve_diffusive(problem),
    }
}

/// Primary and secondary far-field values: `β(L)/π` and `q(L)`.
pub fn extract_f_infinity(sol: &MilneSolution) -> (f64, f64) {
    (sol.f_infinity, sol.f_infinity_secondary)
}

/// Hydrodynamic and microscopic parts.
pub fn decompose_qr(sol: &MilneSolution) -> (Vec<f64>, Vec<f64>) {
    (sol.q(), sol.r())
}

pub fn diagnostics(sol: &MilneSolution) -> &DiagnosticsTrace {
    &sol.diagnostics
}

pub fn fit_decay_rate(sol: &MilneSolution) -> DecayFit {
    sol.decay
}
