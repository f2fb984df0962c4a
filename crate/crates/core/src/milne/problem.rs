use alloc::sync::Arc;
use core::fmt;

use crate::boundary::BoundaryProfile;
use crate::discretization::{AngularQuadrature, RadialGrid};
use crate::error::{Error, Result};
use crate::geometry::ForceField;
use crate::math;

/// Boundary condition at `η = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryKind {
    /// `f(0, φ) = h(φ)` for `sinφ > 0`.
    #[default]
    Inflow,
    /// `f(0, φ) = P f(0) + h(φ)` for `sinφ > 0`.
    Diffusive,
}

/// Linear solver for the averaged unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverMode {
    /// Assemble the averaged kernel and factor it.
    Direct,
    /// Plain source iteration.
    SourceIteration { max_iterations: usize },
    /// Source iteration with Anderson mixing.
    Anderson { depth: usize, max_iterations: usize },
}

impl Default for SolverMode {
    fn default() -> Self {
        SolverMode::Direct
    }
}

/// Volume source `S(η, φ)` with a declared decay rate.
#[derive(Clone)]
pub struct VolumeSource {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub decay_rate: f64,
}

impl fmt::Debug for VolumeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VolumeSource").field("decay_rate", &self.decay_rate).finish_non_exhaustive()
    }
}

impl VolumeSource {
    pub fn new<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(decay_rate: f64, f: F) -> Result<Self> {
        if !(decay_rate > 0.0) {
            return Err(Error::InvalidParameter("source decay rate must be positive"));
        }
        Ok(Self { f: Arc::new(f), decay_rate })
    }

    #[inline]
    pub fn eval(&self, eta: f64, phi: f64) -> f64 {
        (self.f)(eta, phi)
    }

    /// Angular mean at `eta` on a 256-point periodic rule.
    pub fn mean(&self, eta: f64) -> f64 {
        let n = 256;
        let h = 2.0 * core::f64::consts::PI / n as f64;
        let mut sum = 0.0;
        for k in 0..n {
            sum += self.eval(eta, -core::f64::consts::PI + (k as f64 + 0.5) * h);
        }
        sum / n as f64
    }

    /// `∫ sinφ S(η, φ) dφ` on the same rule.
    pub(crate) fn sine_moment(&self, eta: f64) -> f64 {
        let n = 256;
        let h = 2.0 * core::f64::consts::PI / n as f64;
        let mut sum = 0.0;
        for k in 0..n {
            let p = -core::f64::consts::PI + (k as f64 + 0.5) * h;
            sum += math::sin(p) * self.eval(eta, p);
        }
        sum * h
    }
}

/// Half-space boundary-layer problem truncated to `[0, L]`.
#[derive(Debug, Clone)]
pub struct MilneProblem {
    pub force: ForceField,
    pub boundary: BoundaryProfile,
    pub source: Option<VolumeSource>,
    pub kind: BoundaryKind,
    /// Target value of `P f(0)` for the diffusive kind.
    pub normalization: f64,
    pub radial: RadialGrid,
    pub angles: AngularQuadrature,
    /// Extra absorption `λ ≥ 0`.
    pub penalty: f64,
    pub solver: SolverMode,
    pub tolerance: f64,
    pub compatibility_tolerance: f64,
}

impl MilneProblem {
    pub const DEFAULT_ANGLES: usize = 64;

    /// In-flow problem on the default grids.
    pub fn new(force: ForceField, boundary: BoundaryProfile) -> Self {
        Self {
            force,
            boundary,
            source: None,
            kind: BoundaryKind::Inflow,
            normalization: 0.0,
            radial: RadialGrid::graded(
                RadialGrid::DEFAULT_POINTS,
                RadialGrid::DEFAULT_LENGTH,
                RadialGrid::DEFAULT_RATIO,
                RadialGrid::DEFAULT_FIRST_SPACING,
            )
            .expect("default radial grid"),
            angles: AngularQuadrature::new(Self::DEFAULT_ANGLES).expect("default angles"),
            penalty: 0.0,
            solver: SolverMode::Direct,
            tolerance: 1e-10,
            compatibility_tolerance: 1e-10,
        }
    }

    pub fn with_kind(mut self, kind: BoundaryKind) -> Self {
        self.kind = kind;
        self
    }
    pub fn with_source(mut self, source: VolumeSource) -> Self {
        self.source = Some(source);
        self
    }
    pub fn with_grids(mut self, radial: RadialGrid, angles: AngularQuadrature) -> Self {
        self.radial = radial;
        self.angles = angles;
        self
    }
    pub fn with_angles(mut self, angles: AngularQuadrature) -> Self {
        self.angles = angles;
        self
    }
    pub fn with_radial(mut self, radial: RadialGrid) -> Self {
        self.radial = radial;
        self
    }
    pub fn with_solver(mut self, solver: SolverMode) -> Self {
        self.solver = solver;
        self
    }
    pub fn with_penalty(mut self, penalty: f64) -> Self {
        self.penalty = penalty;
        self
    }
    pub fn with_normalization(mut self, value: f64) -> Self {
        self.normalization = value;
        self
    }

    pub fn length(&self) -> f64 {
        self.radial.length()
    }

    pub(crate) fn source_at(&self, eta: f64, phi: f64) -> f64 {
        match &self.source {
            Some(s) => s.eval(eta, phi),
            None => 0.0,
        }
    }

    /// Checks the boundedness and decay assumptions by sampling.
    pub fn validate(&self) -> Result<()> {
        if !(self.penalty >= 0.0) || !self.penalty.is_finite() {
            return Err(Error::InvalidParameter("penalty must be a finite non-negative number"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        let m = self.boundary.sup_abs();
        if !m.is_finite() {
            return Err(Error::NonFinite("boundary data"));
        }
        if let Some(src) = &self.source {
            // |S(η, ·)| e^{Kη} must stay bounded on the slab
            let k = src.decay_rate;
            let mut sup: f64 = 0.0;
            let mut scaled: f64 = 0.0;
            for i in 0..=128 {
                let eta = self.length() * i as f64 / 128.0;
                for j in 0..32 {
                    let phi = -core::f64::consts::PI + (j as f64 + 0.5) * core::f64::consts::PI / 16.0;
                    let v = src.eval(eta, phi);
                    if !v.is_finite() {
                        return Err(Error::NonFinite("volume source"));
                    }
                    sup = sup.max(v.abs());
                    scaled = scaled.max(v.abs() * math::exp(k * eta));
                }
            }
            if scaled > 1e6 * (1.0 + sup) {
                return Err(Error::InvalidParameter("source does not decay at the declared rate"));
            }
        }
        Ok(())
    }
}
