//! Sources with non-zero angular mean.
//!
//! Besides solving directly, the solution splits as `f¹ + a(η) sinφ + f³`:
//! `f¹` carries the mean-free part of the source, `a` solves
//! `a' = 2 S_Q - F a` with `a(∞) = 0` for the mean `S_Q`, and `f³` is an
//! in-flow problem with data `-a(0) sinφ` and the mean-free source
//! `S_Q cos2φ - F a cos2φ - a sinφ`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::problem::{MilneProblem, VolumeSource};
use super::solution::{MilneSolution, Warning};
use super::solve_with;
use crate::boundary::BoundaryProfile;
use crate::discretization::sup_norm;
use crate::error::{Error, Result};
use crate::geometry::ForceField;
use crate::math;
use crate::quad;

const TABLE_SPACING: f64 = 0.01;

/// Uniform table with cubic Lagrange lookup.
#[derive(Debug, Clone)]
struct Table {
    step: f64,
    values: Vec<f64>,
}

impl Table {
    fn sample<F: FnMut(f64) -> f64>(end: f64, mut f: F) -> Self {
        let n = math::ceil(end / TABLE_SPACING) as usize + 1;
        let step = end / (n - 1) as f64;
        Self { step, values: (0..n).map(|i| f(i as f64 * step)).collect() }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = (x / self.step).clamp(0.0, (n - 1) as f64);
        let k = (math::floor(t) as usize).min(n - 2);
        let start = k.saturating_sub(1).min(n - 4);
        let mut sum = 0.0;
        for i in 0..4 {
            let mut w = 1.0;
            for j in 0..4 {
                if j != i {
                    w *= (t - (start + j) as f64) / (i as f64 - j as f64);
                }
            }
            sum += w * self.values[start + i];
        }
        sum
    }
}

/// Tabulated solution `a(η)` of the auxiliary first-order equation.
#[derive(Debug, Clone)]
pub struct AuxProfile {
    nodes: Vec<f64>,
    a: Vec<f64>,
    slope: Vec<f64>,
    /// `2 sup|S_Q| e^{-K L} / K`
    pub tail_bound: f64,
}

impl AuxProfile {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn values(&self) -> &[f64] {
        &self.a
    }
    pub fn at_wall(&self) -> f64 {
        self.a[0]
    }

    /// Cubic Hermite interpolation with the exact slopes `2 S_Q - F a`.
    pub fn eval(&self, eta: f64) -> f64 {
        let n = self.nodes.len();
        if eta >= self.nodes[n - 1] {
            return self.a[n - 1];
        }
        let h = self.nodes[1] - self.nodes[0];
        let t = (eta.max(0.0)) / h;
        let k = (math::floor(t) as usize).min(n - 2);
        let u = t - k as f64;
        let (u2, u3) = (u * u, u * u * u);
        (2.0 * u3 - 3.0 * u2 + 1.0) * self.a[k]
            + (u3 - 2.0 * u2 + u) * h * self.slope[k]
            + (-2.0 * u3 + 3.0 * u2) * self.a[k + 1]
            + (u3 - u2) * h * self.slope[k + 1]
    }
}

/// `a(η) = -2 e^{V(η)} ∫_η^∞ e^{-V} S_Q`, tabulated on `[0, L]`.
pub fn solve_aux_ode<S: Fn(f64) -> f64>(
    s_q: S,
    decay_rate: f64,
    force: &ForceField,
    length: f64,
) -> Result<AuxProfile> {
    if !(decay_rate > 0.0) || !(length > 0.0) {
        return Err(Error::InvalidParameter("auxiliary equation needs a positive rate and length"));
    }
    let n = math::ceil(length / TABLE_SPACING) as usize + 1;
    let h = length / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let weighted = |y: f64| math::exp(-force.potential(y)) * s_q(y);
    let mut tail = quad::adaptive(weighted, length, length + 40.0 / decay_rate, 1e-15, 1e-13, 2000).value;
    let mut a = alloc::vec![0.0; n];
    let mut sup: f64 = 0.0;
    for i in (0..n).rev() {
        if i + 1 < n {
            tail += quad::adaptive(weighted, nodes[i], nodes[i + 1], 1e-16, 1e-14, 64).value;
        }
        a[i] = -2.0 * math::exp(force.potential(nodes[i])) * tail;
        sup = sup.max(s_q(nodes[i]).abs());
    }
    let slope = nodes.iter().zip(&a).map(|(&x, &ai)| 2.0 * s_q(x) - force.force(x) * ai).collect();
    let tail_bound = 2.0 * sup * math::exp(-decay_rate * length) / decay_rate;
    Ok(AuxProfile { nodes, a, slope, tail_bound })
}

/// Which route [`solve_general_source`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceRoute {
    #[default]
    Direct,
    Decomposition,
    /// Both, compared against each other.
    Both,
}

/// The pieces `f¹`, `a`, `f³` of the split solution.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub homogeneous: MilneSolution,
    pub aux: AuxProfile,
    pub corrector: MilneSolution,
}

impl Decomposition {
    pub fn eval(&self, eta: f64, phi: f64) -> f64 {
        self.homogeneous.eval(eta, phi) + self.aux.eval(eta) * math::sin(phi) + self.corrector.eval(eta, phi)
    }

    /// Assembled nodal values, same layout as [`MilneSolution::values`].
    pub fn values(&self) -> Vec<f64> {
        let sin = self.homogeneous.problem().angles.sines();
        let na = sin.len();
        let eta = self.homogeneous.eta();
        self.homogeneous
            .values()
            .iter()
            .zip(self.corrector.values())
            .enumerate()
            .map(|(k, (a, b))| a + b + self.aux.eval(eta[k / na]) * sin[k % na])
            .collect()
    }

    pub fn f_infinity(&self) -> f64 {
        self.homogeneous.f_infinity + self.corrector.f_infinity
    }
}

/// Result of [`solve_general_source`].
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub direct: Option<MilneSolution>,
    pub decomposition: Option<Decomposition>,
    /// Sup-difference of the two routes at the nodes.
    pub difference: Option<f64>,
    pub warnings: Vec<Warning>,
}

/// Agreement expected between the two routes.
pub const ROUTE_TOLERANCE: f64 = 1e-6;

/// Solves an in-flow problem whose source may have a non-zero mean.
pub fn solve_general_source(problem: &MilneProblem, route: SourceRoute) -> Result<GeneralSolution> {
    let direct = match route {
        SourceRoute::Direct | SourceRoute::Both => Some(solve_with(problem, problem.boundary.clone())?),
        SourceRoute::Decomposition => None,
    };
    let decomposition = match route {
        SourceRoute::Decomposition | SourceRoute::Both => Some(decompose(problem)?),
        SourceRoute::Direct => None,
    };
    let mut warnings = Vec::new();
    let difference = match (&direct, &decomposition) {
        (Some(d), Some(p)) => {
            let diff: Vec<f64> = d.values().iter().zip(p.values()).map(|(a, b)| a - b).collect();
            let diff = sup_norm(&diff);
            if diff > 10.0 * ROUTE_TOLERANCE * (1.0 + sup_norm(d.values())) {
                warnings.push(Warning::RouteMismatch { difference: diff });
            }
            Some(diff)
        }
        _ => None,
    };
    Ok(GeneralSolution { direct, decomposition, difference, warnings })
}

fn decompose(problem: &MilneProblem) -> Result<Decomposition> {
    let Some(src) = problem.source.clone() else {
        let homogeneous = solve_with(problem, problem.boundary.clone())?;
        let zero = MilneProblem { source: None, boundary: BoundaryProfile::Const(0.0), ..problem.clone() };
        let corrector = solve_with(&zero, zero.boundary.clone())?;
        let aux = solve_aux_ode(|_| 0.0, 1.0, &problem.force, problem.length())?;
        return Ok(Decomposition { homogeneous, aux, corrector });
    };
    let length = problem.length();
    let mean = Arc::new(Table::sample(length, |x| src.mean(x)));
    let aux = Arc::new(solve_aux_ode(|x| src.mean(x), src.decay_rate, &problem.force, length)?);

    let m = mean.clone();
    let s1 = src.clone();
    let free = VolumeSource::new(src.decay_rate, move |eta, phi| s1.eval(eta, phi) - m.eval(eta))?;
    let first = MilneProblem { source: Some(free), ..problem.clone() };
    let homogeneous = solve_with(&first, problem.boundary.clone())?;

    let (m, a, field) = (mean.clone(), aux.clone(), problem.force.clone());
    let corr_source = VolumeSource::new(src.decay_rate, move |eta, phi| {
        let av = a.eval(eta);
        let c2 = math::cos(2.0 * phi);
        m.eval(eta) * c2 - field.force(eta) * av * c2 - av * math::sin(phi)
    })?;
    let a0 = aux.at_wall();
    let third = MilneProblem { source: Some(corr_source), ..problem.clone() };
    let corrector = solve_with(&third, BoundaryProfile::custom(move |phi| -a0 * math::sin(phi)))?;
    let aux = Arc::try_unwrap(aux).unwrap_or_else(|a| (*a).clone());
    Ok(Decomposition { homogeneous, aux, corrector })
}
