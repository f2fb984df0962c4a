use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::chord::{local_angle, local_velocity, ChordEnd, ChordTracer, PolarInterp};
use super::problem::DiskProblem;
use super::solve::{DEPTH_CAP, MAX_STEP};
use crate::discretization::{DiskGrid, STENCIL_POINTS};
use crate::error::{Error, Result};
use crate::math;
use crate::milne::BoundaryKind;

/// Range of the solution against the range of the in-flow data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleAudit {
    pub data_min: f64,
    pub data_max: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub tolerance: f64,
}

impl MaxPrincipleAudit {
    pub fn holds(&self) -> bool {
        self.u_min >= self.data_min - self.tolerance && self.u_max <= self.data_max + self.tolerance
    }
}

/// Solution of a [`DiskProblem`] on its grid.
#[derive(Debug, Clone)]
pub struct DiskField {
    pub(crate) problem: DiskProblem,
    pub(crate) interp: PolarInterp,
    /// `u_bar[i * n_theta + j]`.
    pub(crate) u_bar: Vec<f64>,
    /// `P u` at the wall nodes (diffusive only).
    pub(crate) wall_moment: Vec<f64>,
    /// `u[(i * n_theta + j) * n_a + k]`.
    pub(crate) u: Vec<f64>,
    pub iterations: usize,
    /// `sup |ū - avg u|` over the nodes.
    pub residual: f64,
    /// Quadrature points found outside the disk by rounding.
    pub clamped: usize,
    pub audit: Option<MaxPrincipleAudit>,
}

impl DiskField {
    pub(crate) fn build(
        problem: DiskProblem,
        u_bar: Vec<f64>,
        wall_moment: Vec<f64>,
        u: Vec<f64>,
        iterations: usize,
        solve_residual: f64,
        clamped: usize,
    ) -> Self {
        let grid = &problem.grid;
        let interp = PolarInterp::new(grid.radii(), grid.n_theta());
        let n_a = grid.n_angles();
        let residual = u
            .chunks(n_a)
            .zip(&u_bar)
            .fold(solve_residual, |m, (row, ub)| m.max((row.iter().sum::<f64>() / n_a as f64 - ub).abs()));
        let audit = match problem.kind {
            BoundaryKind::Inflow => {
                let (lo, hi) = problem.boundary.incoming_range();
                let (u_min, u_max) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
                Some(MaxPrincipleAudit {
                    data_min: lo,
                    data_max: hi,
                    u_min,
                    u_max,
                    tolerance: 1e-8 * (1.0 + lo.abs().max(hi.abs())),
                })
            }
            BoundaryKind::Diffusive => None,
        };
        Self { problem, interp, u_bar, wall_moment, u, iterations, residual, clamped, audit }
    }

    pub fn problem(&self) -> &DiskProblem {
        &self.problem
    }
    pub fn grid(&self) -> &DiskGrid {
        &self.problem.grid
    }
    pub fn epsilon(&self) -> f64 {
        self.problem.epsilon
    }

    /// Kinetic value at node `(i, j)` and velocity node `k`.
    pub fn u(&self, i: usize, j: usize, k: usize) -> f64 {
        let g = self.grid();
        self.u[(i * g.n_theta() + j) * g.n_angles() + k]
    }
    /// All velocities at node `(i, j)`.
    pub fn u_row(&self, i: usize, j: usize) -> &[f64] {
        let g = self.grid();
        let n_a = g.n_angles();
        let s = (i * g.n_theta() + j) * n_a;
        &self.u[s..s + n_a]
    }
    pub fn u_values(&self) -> &[f64] {
        &self.u
    }
    pub fn u_bar(&self, i: usize, j: usize) -> f64 {
        self.u_bar[i * self.grid().n_theta() + j]
    }
    pub fn u_bar_values(&self) -> &[f64] {
        &self.u_bar
    }
    /// `P u` on the wall nodes; empty for in-flow problems.
    pub fn wall_moment(&self) -> &[f64] {
        &self.wall_moment
    }
    pub fn sup_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Interpolated `ū(x, y)`.
    pub fn average_at(&self, x: f64, y: f64) -> f64 {
        self.interp.eval(&self.u_bar, x, y)
    }

    fn wall_moment_at(&self, theta: f64) -> f64 {
        let n = self.wall_moment.len();
        if n == 1 || self.grid().n_theta() < 4 {
            return self.wall_moment[0];
        }
        let (idx, w) = self.interp.angular(theta);
        (0..4).map(|q| w[q] * self.wall_moment[idx[q]]).sum()
    }

    fn tracer(&self) -> ChordTracer<'_> {
        let p = &self.problem;
        ChordTracer::new(&self.interp, p.epsilon, p.sigma(), MAX_STEP, DEPTH_CAP)
    }

    fn trace_value(&self, tracer: &mut ChordTracer<'_>, x: [f64; 2], w: [f64; 2]) -> f64 {
        let p = &self.problem;
        let n_t = self.grid().n_theta();
        let ub = &self.u_bar;
        let interp = &self.interp;
        let mut sum = 0.0;
        let end = tracer.trace(x, w, |st, px, py, wq| {
            let t = math::atan2(py, px);
            let near = interp.angular(t);
            let far = interp.angular(t + PI);
            let mut v = 0.0;
            for m in 0..STENCIL_POINTS {
                let (idx, aw) = if st.far[m] { &far } else { &near };
                let row = st.ring[m] * n_t;
                let mut s = 0.0;
                for q in 0..4 {
                    if aw[q] != 0.0 {
                        s += aw[q] * ub[row + idx[q]];
                    }
                }
                v += st.weights[m] * s;
            }
            sum += wq * v;
        });
        if let ChordEnd::Wall { theta, phi, weight } = end {
            let g = p.boundary.eval(theta, phi);
            sum += weight
                * match p.kind {
                    BoundaryKind::Inflow => g,
                    BoundaryKind::Diffusive => self.wall_moment_at(theta) + p.epsilon * g,
                };
        }
        sum
    }

    /// `u(x, w)` by tracing the characteristic through the converged average.
    pub fn eval_velocity(&self, x: [f64; 2], w: [f64; 2]) -> Result<f64> {
        let r = math::hypot(x[0], x[1]);
        if !(r <= 1.0 + 1e-12) {
            return Err(Error::Domain { what: "radius", value: r });
        }
        if !((w[0] * w[0] + w[1] * w[1] - 1.0).abs() < 1e-9) {
            return Err(Error::InvalidParameter("velocity must be a unit vector"));
        }
        Ok(self.trace_value(&mut self.tracer(), x, w))
    }

    /// `u` at `(x, y)` with local velocity angle `phi`.
    pub fn eval(&self, x: f64, y: f64, phi: f64) -> Result<f64> {
        let theta = math::atan2(y, x);
        self.eval_velocity([x, y], local_velocity(theta, phi))
    }

    /// `u` at layer coordinates `η = (1 - r)/ε`, polar angle `theta`, local
    /// angle `phi`.
    pub fn eval_layer(&self, eta: f64, theta: f64, phi: f64) -> Result<f64> {
        let r = 1.0 - self.epsilon() * eta;
        if !(r >= 0.0 && r <= 1.0) {
            return Err(Error::Domain { what: "eta", value: eta });
        }
        let (x, y) = (r * math::cos(theta), r * math::sin(theta));
        self.eval_velocity([x, y], local_velocity(theta, phi))
    }

    /// Local angle at `(x, y)` of the global velocity `w`.
    pub fn local_angle(x: f64, y: f64, w: [f64; 2]) -> f64 {
        local_angle(math::atan2(y, x), w)
    }
}

/// The field on the rings within `eta_max` of the wall, in layer
/// coordinates `η = (1 - r)/ε`. The local angle already measures velocity
/// against the inward normal, so this is a relabelling of nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerView {
    /// Increasing from 0.
    pub eta: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// `values[(e * n_theta + j) * n_phi + k]`.
    pub values: Vec<f64>,
    /// The requested depth reaches past the innermost ring.
    pub truncated: bool,
}

impl LayerView {
    pub fn value(&self, e: usize, j: usize, k: usize) -> f64 {
        self.values[(e * self.theta.len() + j) * self.phi.len() + k]
    }
}

pub fn restrict_to_layer(field: &DiskField, eta_max: f64) -> LayerView {
    let g = field.grid();
    let eps = field.epsilon();
    let (n_t, n_a) = (g.n_theta(), g.n_angles());
    let mut eta = Vec::new();
    let mut values = Vec::new();
    for i in (0..g.n_r()).rev() {
        let e = (1.0 - g.radii()[i]) / eps;
        if e > eta_max {
            break;
        }
        eta.push(e);
        for j in 0..n_t {
            values.extend_from_slice(field.u_row(i, j));
        }
    }
    let truncated = eta_max > (1.0 - g.radii()[0]) / eps;
    let theta = (0..n_t).map(|j| g.theta(j)).collect();
    let phi = g.angles().nodes().to_vec();
    debug_assert_eq!(values.len(), eta.len() * n_t * n_a);
    LayerView { eta, theta, phi, values, truncated }
}

/// One sweep: kinetic values on the grid from a tabulated average and, for
/// diffusive problems, the wall moment from the previous iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// `u[(i * n_theta + j) * n_a + k]`.
    pub u: Vec<f64>,
    pub clamped: usize,
}

pub fn sweep(problem: &DiskProblem, u_bar: &[f64], wall_moment: &[f64]) -> Result<Sweep> {
    problem.validate()?;
    let g = &problem.grid;
    let (n_r, n_t, n_a) = (g.n_r(), g.n_theta(), g.n_angles());
    if u_bar.len() != n_r * n_t {
        return Err(Error::LengthMismatch { expected: n_r * n_t, found: u_bar.len() });
    }
    let diffusive = problem.kind == BoundaryKind::Diffusive;
    if diffusive && wall_moment.len() != n_t {
        return Err(Error::LengthMismatch { expected: n_t, found: wall_moment.len() });
    }
    let field = DiskField::build(
        problem.clone(),
        u_bar.to_vec(),
        if diffusive { wall_moment.to_vec() } else { Vec::new() },
        Vec::new(),
        0,
        0.0,
        0,
    );
    let mut tracer = field.tracer();
    let mut u = vec![0.0; n_r * n_t * n_a];
    for i in 0..n_r {
        for j in 0..n_t {
            let (x, y) = g.point(i, j);
            for (k, &phi) in g.angles().nodes().iter().enumerate() {
                u[(i * n_t + j) * n_a + k] = field.trace_value(&mut tracer, [x, y], local_velocity(g.theta(j), phi));
            }
        }
    }
    Ok(Sweep { u, clamped: tracer.clamped() })
}
