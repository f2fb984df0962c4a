//! Nyström system for the averaged unknown on the polar grid.
//!
//! Only rays from the nodes at `θ = 0` are traced. Rotating the disk maps
//! them onto every other column, so the averaged operator is block
//! circulant in `θ` and splits into one dense block per Fourier mode.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::Complex;

use super::chord::{local_velocity, ChordEnd, ChordTracer, PolarInterp};
use super::problem::DiskProblem;
use crate::discretization::STENCIL_POINTS;
use crate::error::{Error, Result};
use crate::linalg::{self, Anderson};
use crate::math;
use crate::milne::{BoundaryKind, SolverMode};

pub(crate) const MAX_STEP: f64 = 0.25;
pub(crate) const DEPTH_CAP: f64 = 36.0;

/// One traced ray: `u = Σ weight · x[index shifted by j] + wall term`.
/// Indices address `ring * n_theta + d`; the wall moment unknowns sit
/// after the rings.
pub(crate) struct RayRow {
    pub entries: Vec<(u32, f64)>,
    pub wall: Option<(f64, f64, f64)>,
}

/// Layout of the unknown vector: rings, then (diffusive) the wall moment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub n_r: usize,
    pub n_theta: usize,
    pub diffusive: bool,
}

impl Layout {
    pub fn blocks(&self) -> usize {
        self.n_r + self.diffusive as usize
    }
    pub fn len(&self) -> usize {
        self.blocks() * self.n_theta
    }
    pub fn wall_block(&self) -> usize {
        self.n_r
    }
}

pub(crate) struct Traced {
    pub layout: Layout,
    /// `rays[i * n_a + k]`.
    pub rays: Vec<RayRow>,
    pub clamped: usize,
}

pub(crate) fn layout(problem: &DiskProblem) -> Layout {
    let n_theta = if problem.boundary.is_rotation_invariant() { 1 } else { problem.grid.n_theta() };
    Layout { n_r: problem.grid.n_r(), n_theta, diffusive: problem.kind == BoundaryKind::Diffusive }
}

/// Periodic stencil in `θ`; a single column means constant data.
#[inline]
fn theta_stencil(interp: &PolarInterp, n: usize, theta: f64) -> ([usize; 4], [f64; 4]) {
    if n == 1 {
        ([0; 4], [1.0, 0.0, 0.0, 0.0])
    } else {
        interp.angular(theta)
    }
}

pub(crate) fn trace_all(problem: &DiskProblem) -> Traced {
    let lay = layout(problem);
    let grid = &problem.grid;
    let interp = PolarInterp::new(grid.radii(), lay.n_theta);
    let mut tracer = ChordTracer::new(&interp, problem.epsilon, problem.sigma(), MAX_STEP, DEPTH_CAP);
    let n_t = lay.n_theta;
    let mut buf = vec![0.0; lay.len()];
    let mut seen = vec![false; lay.len()];
    let mut touched: Vec<u32> = Vec::new();
    let mut rays = Vec::with_capacity(grid.n_r() * grid.n_angles());
    for &r in grid.radii() {
        for &phi in grid.angles().nodes() {
            let end = tracer.trace([r, 0.0], local_velocity(0.0, phi), |st, x, y, wq| {
                let (near, far) = if n_t == 1 {
                    (([0; 4], [1.0, 0.0, 0.0, 0.0]), ([0; 4], [1.0, 0.0, 0.0, 0.0]))
                } else {
                    let t = math::atan2(y, x);
                    (interp.angular(t), interp.angular(t + PI))
                };
                for m in 0..STENCIL_POINTS {
                    let (idx, w) = if st.far[m] { &far } else { &near };
                    let base = st.ring[m] * n_t;
                    for q in 0..4 {
                        if w[q] == 0.0 {
                            continue;
                        }
                        let e = base + idx[q];
                        if !seen[e] {
                            seen[e] = true;
                            touched.push(e as u32);
                        }
                        buf[e] += wq * st.weights[m] * w[q];
                    }
                }
            });
            let wall = match end {
                ChordEnd::Wall { theta, phi, weight } => Some((theta, phi, weight)),
                ChordEnd::Truncated => None,
            };
            if lay.diffusive {
                if let Some((theta, _, weight)) = wall {
                    let (idx, w) = theta_stencil(&interp, n_t, theta);
                    for q in 0..4 {
                        if w[q] == 0.0 {
                            continue;
                        }
                        let e = lay.wall_block() * n_t + idx[q];
                        if !seen[e] {
                            seen[e] = true;
                            touched.push(e as u32);
                        }
                        buf[e] += weight * w[q];
                    }
                }
            }
            touched.sort_unstable();
            let entries = touched
                .iter()
                .map(|&e| {
                    seen[e as usize] = false;
                    (e, core::mem::take(&mut buf[e as usize]))
                })
                .collect();
            touched.clear();
            rays.push(RayRow { entries, wall });
        }
    }
    let clamped = tracer.clamped();
    Traced { layout: lay, rays, clamped }
}

/// Averaged system `x = G x + b` with `G` block circulant, stored as its
/// first block row per equation: `gen[row][col * n_theta + d]`.
pub(crate) struct System {
    pub layout: Layout,
    pub gen: Vec<Vec<f64>>,
    pub rhs: Vec<Vec<f64>>,
}

/// Wall term of a ray at column `j` that does not involve unknowns.
#[inline]
fn wall_data(problem: &DiskProblem, wall: Option<(f64, f64, f64)>, theta_j: f64) -> f64 {
    match wall {
        None => 0.0,
        Some((theta, phi, weight)) => {
            let g = problem.boundary.eval(theta + theta_j, phi);
            match problem.kind {
                BoundaryKind::Inflow => weight * g,
                BoundaryKind::Diffusive => weight * problem.epsilon * g,
            }
        }
    }
}

pub(crate) fn assemble(problem: &DiskProblem, traced: &Traced) -> System {
    let lay = traced.layout;
    let n_a = problem.grid.n_angles();
    let n_t = lay.n_theta;
    let thetas: Vec<f64> = (0..n_t).map(|j| 2.0 * PI * j as f64 / n_t as f64).collect();
    let mut gen = vec![vec![0.0; lay.len()]; lay.blocks()];
    let mut rhs = vec![vec![0.0; n_t]; lay.blocks()];
    let avg = 1.0 / n_a as f64;
    let moment = problem.grid.angles().half_moment_weights();
    let mut add = |row: usize, ray: &RayRow, c: f64| {
        for &(e, w) in &ray.entries {
            gen[row][e as usize] += c * w;
        }
        for (j, t) in thetas.iter().enumerate() {
            rhs[row][j] += c * wall_data(problem, ray.wall, *t);
        }
    };
    for i in 0..lay.n_r {
        for k in 0..n_a {
            add(i, &traced.rays[i * n_a + k], avg);
        }
    }
    if lay.diffusive {
        let i = lay.n_r - 1;
        for k in 0..n_a {
            if moment[k] != 0.0 {
                add(lay.wall_block(), &traced.rays[i * n_a + k], moment[k]);
            }
        }
    }
    System { layout: lay, gen, rhs }
}

/// Applies `x ↦ G x + b` on the full unknown vector.
fn apply(sys: &System, x: &[f64]) -> Vec<f64> {
    let lay = sys.layout;
    let n_t = lay.n_theta;
    let mut y = vec![0.0; lay.len()];
    for row in 0..lay.blocks() {
        let g = &sys.gen[row];
        for j in 0..n_t {
            let mut s = sys.rhs[row][j];
            for (e, &w) in g.iter().enumerate() {
                if w != 0.0 {
                    let (col, d) = (e / n_t, e % n_t);
                    s += w * x[col * n_t + (j + d) % n_t];
                }
            }
            y[row * n_t + j] = s;
        }
    }
    y
}

pub(crate) struct Solved {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

pub(crate) fn solve_system(sys: &System, mode: SolverMode, tol: f64) -> Result<Solved> {
    match mode {
        SolverMode::Direct => solve_modal(sys),
        SolverMode::SourceIteration { max_iterations } => iterate(sys, tol, max_iterations, None),
        SolverMode::Anderson { depth, max_iterations } => {
            iterate(sys, tol, max_iterations, Some(Anderson::new(depth, 1.0)))
        }
    }
}

fn solve_modal(sys: &System) -> Result<Solved> {
    let lay = sys.layout;
    let (nb, n_t) = (lay.blocks(), lay.n_theta);
    let mut x = vec![0.0; lay.len()];
    if n_t == 1 {
        let mut a = vec![0.0; nb * nb];
        let mut b = vec![0.0; nb];
        for row in 0..nb {
            for col in 0..nb {
                a[row * nb + col] = -sys.gen[row][col];
            }
            a[row * nb + row] += 1.0;
            b[row] = sys.rhs[row][0];
        }
        x = linalg::solve_dense(&a, &b)?;
    } else {
        let twiddle = |k: usize| {
            let a = 2.0 * PI * (k % n_t) as f64 / n_t as f64;
            Complex::new(math::cos(a), math::sin(a))
        };
        for m in 0..n_t {
            let mut a = vec![Complex::new(0.0, 0.0); nb * nb];
            let mut b = vec![Complex::new(0.0, 0.0); nb];
            for row in 0..nb {
                for col in 0..nb {
                    let mut s = Complex::new(0.0, 0.0);
                    for d in 0..n_t {
                        let g = sys.gen[row][col * n_t + d];
                        if g != 0.0 {
                            s += twiddle(m * d) * g;
                        }
                    }
                    a[row * nb + col] = -s;
                }
                a[row * nb + row] += Complex::new(1.0, 0.0);
                let mut s = Complex::new(0.0, 0.0);
                for j in 0..n_t {
                    s += twiddle(n_t - (m * j) % n_t) * sys.rhs[row][j];
                }
                b[row] = s / n_t as f64;
            }
            let xm = linalg::solve_dense_complex(&a, &b)?;
            for row in 0..nb {
                for j in 0..n_t {
                    x[row * n_t + j] += (xm[row] * twiddle(m * j)).re;
                }
            }
        }
    }
    let residual = sup_diff(&apply(sys, &x), &x);
    Ok(Solved { x, iterations: 1, residual })
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (p, q)| m.max((p - q).abs()))
}

fn iterate(sys: &System, tol: f64, max_iterations: usize, mut acc: Option<Anderson>) -> Result<Solved> {
    let mut x = vec![0.0; sys.layout.len()];
    let mut history = Vec::new();
    for it in 1..=max_iterations {
        let gx = apply(sys, &x);
        let res = sup_diff(&gx, &x);
        history.push(res);
        if !res.is_finite() {
            return Err(Error::NonFinite("disk iteration"));
        }
        if res <= tol {
            return Ok(Solved { x: gx, iterations: it, residual: res });
        }
        x = match acc.as_mut() {
            Some(a) => a.step(&x, &gx),
            None => gx,
        };
    }
    let residual = history.last().copied().unwrap_or(f64::INFINITY);
    Err(Error::NoConvergence { iterations: max_iterations, residual, history })
}

/// Kinetic values of one ray at column `j`.
#[inline]
pub(crate) fn ray_value(problem: &DiskProblem, lay: Layout, ray: &RayRow, x: &[f64], j: usize) -> f64 {
    let n_t = lay.n_theta;
    let mut s = 0.0;
    for &(e, w) in &ray.entries {
        let (col, d) = (e as usize / n_t, e as usize % n_t);
        s += w * x[col * n_t + (j + d) % n_t];
    }
    s + wall_data(problem, ray.wall, 2.0 * PI * j as f64 / n_t as f64)
}
