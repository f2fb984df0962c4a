use alloc::vec::Vec;

use super::kernel::{trace_value, with_tracer};
use super::problem::MilneProblem;
use crate::boundary::BoundaryProfile;
use crate::discretization::sup_norm;
use crate::math;

/// Conditions a solve finished with but did not fail on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// The two far-field estimates disagree.
    TailMismatch { primary: f64, secondary: f64 },
    /// `P f(0)` misses its target.
    Normalization { residual: f64 },
    /// The two general-source routes disagree.
    RouteMismatch { difference: f64 },
}

/// Moments of a solution along the slab.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsTrace {
    pub eta: Vec<f64>,
    /// `½ <f, f sinφ>`
    pub alpha: Vec<f64>,
    /// `<sin²φ, f>`
    pub beta: Vec<f64>,
    /// `<sinφ, r>`
    pub orthogonality: Vec<f64>,
    /// `e^{-V} <sinφ, f>`
    pub weighted_flux: Vec<f64>,
    /// Centred difference of `beta` (interior nodes; zero at the ends).
    pub beta_slope: Vec<f64>,
    /// `F <cos2φ, r> - <sinφ, r> + <sinφ, S>`
    pub beta_rate: Vec<f64>,
}

impl DiagnosticsTrace {
    pub fn max_orthogonality(&self) -> f64 {
        sup_norm(&self.orthogonality)
    }

    /// `max - min` of the weighted flux.
    pub fn flux_variation(&self) -> f64 {
        let lo = self.weighted_flux.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let hi = self.weighted_flux.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        hi - lo
    }

    /// Largest `|beta_slope - beta_rate|` over interior nodes.
    pub fn beta_ode_residual(&self) -> f64 {
        let n = self.eta.len();
        (1..n.saturating_sub(1)).fold(0.0_f64, |m, i| m.max((self.beta_slope[i] - self.beta_rate[i]).abs()))
    }
}

/// Exponential fit of `sup_φ |f - f∞|` on the tail window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayFit {
    /// Least-squares rate and prefactor over `points` nodes.
    Rate { rate: f64, prefactor: f64, points: usize },
    /// The tail sits below `floor`; the rate is at least `bound`.
    FloorBound { floor: f64, bound: f64 },
}

impl DecayFit {
    /// The fitted rate, or the lower bound.
    pub fn rate(&self) -> f64 {
        match self {
            DecayFit::Rate { rate, .. } => *rate,
            DecayFit::FloorBound { bound, .. } => *bound,
        }
    }
    pub fn is_fitted(&self) -> bool {
        matches!(self, DecayFit::Rate { .. })
    }
}

/// Relative noise floor below which tail deviations are not fitted.
pub const DECAY_NOISE_FLOOR: f64 = 1e-11;

/// Fits `dev(η) ≈ C e^{-Kη}` over `[L/2, 0.9 L]`.
pub fn fit_decay_profile(eta: &[f64], deviation: &[f64], scale: f64) -> DecayFit {
    let length = eta.last().copied().unwrap_or(0.0);
    let floor = DECAY_NOISE_FLOOR * scale.max(1.0);
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0usize);
    for (&x, &d) in eta.iter().zip(deviation) {
        if x >= 0.5 * length && x <= 0.9 * length && d > floor {
            let y = math::ln(d);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1;
        }
    }
    if n >= 3 {
        let nf = n as f64;
        let den = nf * sxx - sx * sx;
        if den > 0.0 {
            let slope = (nf * sxy - sx * sy) / den;
            let icpt = (sy - slope * sx) / nf;
            return DecayFit::Rate { rate: -slope, prefactor: math::exp(icpt), points: n };
        }
    }
    let head = deviation.first().copied().unwrap_or(0.0).max(floor);
    DecayFit::FloorBound { floor, bound: math::ln(head / floor) / (0.5 * length).max(f64::MIN_POSITIVE) }
}

/// Discrete solution of a boundary-layer problem.
#[derive(Debug, Clone)]
pub struct MilneSolution {
    pub(crate) problem: MilneProblem,
    pub(crate) wall: BoundaryProfile,
    pub(crate) f_bar: Vec<f64>,
    pub(crate) f: Vec<f64>,
    pub f_infinity: f64,
    pub f_infinity_secondary: f64,
    pub decay: DecayFit,
    pub diagnostics: DiagnosticsTrace,
    pub iterations: usize,
    pub residual: f64,
    /// `P f(0)`
    pub boundary_moment: f64,
    pub warnings: Vec<Warning>,
}

impl MilneSolution {
    pub(crate) fn build(
        problem: MilneProblem,
        wall: BoundaryProfile,
        f_bar: Vec<f64>,
        iterations: usize,
        residual: f64,
    ) -> Self {
        let n = problem.radial.len();
        let na = problem.angles.len();
        let mut f = Vec::with_capacity(n * na);
        with_tracer(&problem, |tracer| {
            for &eta in problem.radial.nodes() {
                for &phi in problem.angles.nodes() {
                    f.push(trace_value(tracer, &problem, &wall, &f_bar, eta, phi));
                }
            }
        });
        let mut sol = Self {
            problem,
            wall,
            f_bar,
            f,
            f_infinity: 0.0,
            f_infinity_secondary: 0.0,
            decay: DecayFit::FloorBound { floor: 0.0, bound: 0.0 },
            diagnostics: DiagnosticsTrace::default(),
            iterations,
            residual,
            boundary_moment: 0.0,
            warnings: Vec::new(),
        };
        sol.diagnostics = sol.compute_diagnostics();
        let (primary, secondary) = sol.far_field();
        sol.f_infinity = primary;
        sol.f_infinity_secondary = secondary;
        let tol = 10.0 * sol.problem.tolerance.max(1e-9) * (1.0 + primary.abs());
        if (primary - secondary).abs() > tol {
            sol.warnings.push(Warning::TailMismatch { primary, secondary });
        }
        sol.decay = sol.fit_decay();
        sol.boundary_moment = sol.problem.angles.half_moment_unchecked(sol.row(0));
        sol
    }

    pub fn problem(&self) -> &MilneProblem {
        &self.problem
    }
    /// Boundary values imposed at `η = 0`.
    pub fn wall_data(&self) -> &BoundaryProfile {
        &self.wall
    }
    pub fn eta(&self) -> &[f64] {
        self.problem.radial.nodes()
    }
    pub fn phi(&self) -> &[f64] {
        self.problem.angles.nodes()
    }
    /// Field values, η-outer row-major.
    pub fn values(&self) -> &[f64] {
        &self.f
    }
    pub fn row(&self, i: usize) -> &[f64] {
        let na = self.problem.angles.len();
        &self.f[i * na..(i + 1) * na]
    }
    /// Averaged unknown from the linear solve.
    pub fn f_bar(&self) -> &[f64] {
        &self.f_bar
    }

    /// `f(η, φ)` at an arbitrary point by one more characteristic.
    pub fn eval(&self, eta: f64, phi: f64) -> f64 {
        with_tracer(&self.problem, |t| trace_value(t, &self.problem, &self.wall, &self.f_bar, eta, phi))
    }

    /// Interpolated `f̄(η)`; `f∞` past the slab.
    pub fn average_at(&self, eta: f64) -> f64 {
        if eta >= self.problem.length() {
            return self.f_infinity;
        }
        self.problem.radial.stencil(eta.max(0.0)).apply(&self.f_bar)
    }

    /// Hydrodynamic part `q(η)`: the discrete average of each row.
    pub fn q(&self) -> Vec<f64> {
        (0..self.problem.radial.len()).map(|i| self.problem.angles.average_unchecked(self.row(i))).collect()
    }

    /// Microscopic part `r = f - q`, same layout as [`values`](Self::values).
    pub fn r(&self) -> Vec<f64> {
        let q = self.q();
        let na = self.problem.angles.len();
        self.f.iter().enumerate().map(|(k, v)| v - q[k / na]).collect()
    }

    /// `(min, max)` over all nodes.
    pub fn range(&self) -> (f64, f64) {
        self.f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)))
    }

    /// `sup_φ |f(η_i, φ) - f∞|` per node.
    pub fn tail_deviation(&self) -> Vec<f64> {
        (0..self.problem.radial.len())
            .map(|i| self.row(i).iter().fold(0.0_f64, |m, v| m.max((v - self.f_infinity).abs())))
            .collect()
    }

    fn far_field(&self) -> (f64, f64) {
        let last = self.problem.radial.len() - 1;
        let beta = self.diagnostics.beta[last];
        (beta / core::f64::consts::PI, self.problem.angles.average_unchecked(self.row(last)))
    }

    fn fit_decay(&self) -> DecayFit {
        let scale = sup_norm(&self.f);
        fit_decay_profile(self.eta(), &self.tail_deviation(), scale)
    }

    fn compute_diagnostics(&self) -> DiagnosticsTrace {
        let angles = &self.problem.angles;
        let w = angles.weight();
        let sin = angles.sines();
        let cos = angles.cosines();
        let n = self.problem.radial.len();
        let eta = self.eta().to_vec();
        let mut d = DiagnosticsTrace {
            eta: eta.clone(),
            alpha: Vec::with_capacity(n),
            beta: Vec::with_capacity(n),
            orthogonality: Vec::with_capacity(n),
            weighted_flux: Vec::with_capacity(n),
            beta_slope: alloc::vec![0.0; n],
            beta_rate: Vec::with_capacity(n),
        };
        for i in 0..n {
            let row = self.row(i);
            let q = angles.average_unchecked(row);
            let (mut a, mut b, mut o, mut fl, mut c2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for k in 0..row.len() {
                let r = row[k] - q;
                a += row[k] * row[k] * sin[k];
                b += sin[k] * sin[k] * row[k];
                o += sin[k] * r;
                fl += sin[k] * row[k];
                c2 += (cos[k] * cos[k] - sin[k] * sin[k]) * r;
            }
            let s_moment = match &self.problem.source {
                Some(src) => src.sine_moment(eta[i]),
                None => 0.0,
            };
            d.alpha.push(0.5 * a * w);
            d.beta.push(b * w);
            d.orthogonality.push(o * w);
            d.weighted_flux.push(math::exp(-self.problem.force.potential(eta[i])) * fl * w);
            d.beta_rate.push(
                self.problem.force.force(eta[i]) * c2 * w - o * w - self.problem.penalty * fl * w + s_moment,
            );
        }
        for i in 1..n.saturating_sub(1) {
            d.beta_slope[i] = (d.beta[i + 1] - d.beta[i - 1]) / (eta[i + 1] - eta[i - 1]);
        }
        d
    }
}
