use alloc::sync::Arc;
use core::fmt;

use crate::boundary::BoundaryProfile;
use crate::discretization::DiskGrid;
use crate::error::{Error, Result};
use crate::milne::{BoundaryKind, SolverMode};

/// Boundary data `g(θ, φ)` on the incoming half of the circle, `φ` being
/// the local angle (`sinφ > 0` incoming).
#[derive(Clone)]
pub enum DiskBoundary {
    /// The same profile at every boundary point.
    Uniform(BoundaryProfile),
    /// General `g(θ, φ)`.
    Field(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for DiskBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiskBoundary::Uniform(p) => f.debug_tuple("Uniform").field(p).finish(),
            DiskBoundary::Field(_) => f.write_str("Field(..)"),
        }
    }
}

impl DiskBoundary {
    pub fn field<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(g: F) -> Self {
        DiskBoundary::Field(Arc::new(g))
    }

    #[inline]
    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        match self {
            DiskBoundary::Uniform(p) => p.eval(phi),
            DiskBoundary::Field(g) => g(theta, phi),
        }
    }

    pub fn is_rotation_invariant(&self) -> bool {
        matches!(self, DiskBoundary::Uniform(_))
    }

    /// Range of `g` over incoming directions, sampled on a 256 x 256 grid
    /// for general data.
    pub fn incoming_range(&self) -> (f64, f64) {
        match self {
            DiskBoundary::Uniform(p) => p.incoming_range(),
            DiskBoundary::Field(g) => {
                let n = 256;
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for a in 0..n {
                    let theta = 2.0 * core::f64::consts::PI * a as f64 / n as f64;
                    for b in 0..=n {
                        let v = g(theta, core::f64::consts::PI * b as f64 / n as f64);
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                (lo, hi)
            }
        }
    }
}

/// Absorption coefficient of the kinetic equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorption {
    /// Coefficient 1.
    None,
    /// Coefficient `1 + ε²`.
    EpsSquared,
}

impl Absorption {
    pub fn coefficient(self, epsilon: f64) -> f64 {
        match self {
            Absorption::None => 1.0,
            Absorption::EpsSquared => 1.0 + epsilon * epsilon,
        }
    }
}

/// `ε w·∇u + σ u - ū = 0` in the unit disk.
///
/// In-flow: `u = g` on the incoming boundary, `σ = 1`.
/// Diffusive: `u = P u + ε g`, `σ = 1 + ε²`.
#[derive(Debug, Clone)]
pub struct DiskProblem {
    pub epsilon: f64,
    pub boundary: DiskBoundary,
    pub kind: BoundaryKind,
    pub grid: DiskGrid,
    pub solver: SolverMode,
    pub tolerance: f64,
}

impl DiskProblem {
    pub fn new(epsilon: f64, boundary: DiskBoundary, grid: DiskGrid) -> Self {
        Self { epsilon, boundary, kind: BoundaryKind::Inflow, grid, solver: SolverMode::Direct, tolerance: 1e-10 }
    }

    /// Problem on the layer-adapted default grid.
    pub fn with_default_grid(epsilon: f64, boundary: DiskBoundary) -> Result<Self> {
        let n_theta = if boundary.is_rotation_invariant() { 1 } else { 32 };
        Ok(Self::new(epsilon, boundary, DiskGrid::layer_adapted(epsilon, n_theta, 64)?))
    }

    pub fn with_kind(mut self, kind: BoundaryKind) -> Self {
        self.kind = kind;
        self
    }
    pub fn with_solver(mut self, solver: SolverMode) -> Self {
        self.solver = solver;
        self
    }
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn absorption(&self) -> Absorption {
        match self.kind {
            BoundaryKind::Inflow => Absorption::None,
            BoundaryKind::Diffusive => Absorption::EpsSquared,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.absorption().coefficient(self.epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParameter("epsilon must lie in (0, 1]"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        if !self.boundary.is_rotation_invariant() && self.grid.n_theta() < 4 {
            return Err(Error::InvalidParameter("theta-dependent data needs at least 4 polar angles"));
        }
        Ok(())
    }
}
