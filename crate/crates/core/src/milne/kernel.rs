//! Nyström discretisation of the averaged fixed point `f̄ = avg(A h + T(S + f̄))`.

use alloc::vec;
use alloc::vec::Vec;

use super::problem::{MilneProblem, SolverMode};
use crate::boundary::BoundaryProfile;
use crate::discretization::STENCIL_POINTS;
use crate::error::{Error, Result};
use crate::linalg::{self, Anderson};
use crate::path::{SlabEnd, SlabTracer};

pub(crate) const MAX_STEP: f64 = 0.25;
pub(crate) const DEPTH_CAP: f64 = 36.0;

pub(crate) fn with_tracer<R>(problem: &MilneProblem, run: impl FnOnce(&SlabTracer<'_>) -> R) -> R {
    let tracer = SlabTracer {
        field: &problem.force,
        nodes: problem.radial.nodes(),
        sigma: 1.0 + problem.penalty,
        max_step: MAX_STEP,
        depth_cap: DEPTH_CAP,
    };
    run(&tracer)
}

/// Dense averaged kernel `K` and right-hand side `b`.
pub(crate) struct Kernel {
    pub n: usize,
    pub k: Vec<f64>,
    pub b: Vec<f64>,
}

pub(crate) fn assemble(problem: &MilneProblem, h: &BoundaryProfile) -> Kernel {
    let grid = &problem.radial;
    let n = grid.len();
    let na = problem.angles.len();
    let c = 1.0 / na as f64;
    let sigma = 1.0 + problem.penalty;
    let mut k = vec![0.0; n * n];
    let mut b = vec![0.0; n];
    with_tracer(problem, |tracer| {
        for i in 0..n {
            let eta = grid.nodes()[i];
            let row = &mut k[i * n..(i + 1) * n];
            let mut bi = 0.0;
            for &phi in problem.angles.nodes() {
                let end = tracer.trace(eta, phi, |cell, e, p, w| {
                    let st = grid.stencil_in_cell(cell, e);
                    for m in 0..STENCIL_POINTS {
                        row[st.start + m] += c * w * st.weights[m];
                    }
                    bi += c * w * problem.source_at(e, p);
                });
                match end {
                    SlabEnd::Wall { phi, weight } => bi += c * weight * h.eval(phi),
                    SlabEnd::Truncated { cell, eta, weight } => {
                        let st = grid.stencil_in_cell(cell, eta);
                        for m in 0..STENCIL_POINTS {
                            row[st.start + m] += c * weight / sigma * st.weights[m];
                        }
                    }
                }
            }
            b[i] = bi;
        }
    });
    Kernel { n, k, b }
}

pub(crate) struct Averaged {
    pub f_bar: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn residual(kernel: &Kernel, x: &[f64]) -> f64 {
    let kx = linalg::mat_vec(&kernel.k, x);
    kx.iter().zip(&kernel.b).zip(x).fold(0.0_f64, |m, ((a, b), v)| m.max((a + b - v).abs()))
}

/// Solves `(I - K) f̄ = b` in the requested mode.
pub(crate) fn solve_averaged(kernel: &Kernel, mode: SolverMode, tol: f64) -> Result<Averaged> {
    let n = kernel.n;
    match mode {
        SolverMode::Direct => {
            let mut a = kernel.k.iter().map(|v| -v).collect::<Vec<f64>>();
            for i in 0..n {
                a[i * n + i] += 1.0;
            }
            let f_bar = linalg::solve_dense(&a, &kernel.b)?;
            let residual = residual(kernel, &f_bar);
            Ok(Averaged { f_bar, iterations: 1, residual })
        }
        SolverMode::SourceIteration { max_iterations } => {
            iterate(kernel, tol, max_iterations, None)
        }
        SolverMode::Anderson { depth, max_iterations } => {
            iterate(kernel, tol, max_iterations, Some(Anderson::new(depth, 1.0)))
        }
    }
}

fn iterate(kernel: &Kernel, tol: f64, max_iterations: usize, mut acc: Option<Anderson>) -> Result<Averaged> {
    let mut x = kernel.b.clone();
    let mut history = Vec::new();
    for it in 1..=max_iterations {
        let mut g = linalg::mat_vec(&kernel.k, &x);
        for (gi, bi) in g.iter_mut().zip(&kernel.b) {
            *gi += bi;
        }
        let change = g.iter().zip(&x).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if !change.is_finite() {
            return Err(Error::NonFinite("source iteration"));
        }
        history.push(change);
        if change <= tol {
            return Ok(Averaged { f_bar: g, iterations: it, residual: change });
        }
        x = match acc.as_mut() {
            Some(a) => a.step(&x, &g),
            None => g,
        };
    }
    let residual = history.last().copied().unwrap_or(f64::INFINITY);
    Err(Error::NoConvergence { iterations: max_iterations, residual, history })
}

/// Traces `f(eta, phi)` from a solved average.
pub(crate) fn trace_value(
    tracer: &SlabTracer<'_>,
    problem: &MilneProblem,
    h: &BoundaryProfile,
    f_bar: &[f64],
    eta: f64,
    phi: f64,
) -> f64 {
    let grid = &problem.radial;
    let mut acc = 0.0;
    let end = tracer.trace(eta, phi, |cell, e, p, w| {
        acc += w * (grid.stencil_in_cell(cell, e).apply(f_bar) + problem.source_at(e, p));
    });
    match end {
        SlabEnd::Wall { phi, weight } => acc + weight * h.eval(phi),
        SlabEnd::Truncated { cell, eta, weight } => {
            acc + weight / tracer.sigma * grid.stencil_in_cell(cell, eta).apply(f_bar)
        }
    }
}
