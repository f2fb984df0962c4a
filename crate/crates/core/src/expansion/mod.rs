//! Composite approximations `interior + ψ₀(εη)·layer` of the disk problem,
//! their errors against the kinetic reference, the grazing-point formulas,
//! and the grazing-derivative probes.
//!
//! Boundary layers are Milne solutions in the local coordinates
//! `η = (1 - r)/ε` and local velocity angle `φ`. The geometric variant keeps
//! the curvature force in the layer equation, the classical variant drops it.

mod formulas;
mod probe;
mod report;

pub use formulas::{point_formula_flat, point_formula_geometric, verify_point_formulas, weight_gap, PointFormulaRow};
pub use probe::{far_field_gap, grazing_probe, grazing_probe_diffusive, FarFieldGap, GrazingRow, GrazingTable, PROBE_BASE_ANGLES};
pub use report::LAYER_ZOOM_DEPTH;
pub use report::{compare, error_report, loglog_slope, ExpansionReport, SweepRow};

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::boundary::BoundaryProfile;
use crate::discretization::{periodic_cubic, AngularQuadrature, RadialGrid};
use crate::disk::{local_velocity, DiskBoundary};
use crate::elliptic::{
    solve_laplace_dirichlet, solve_modified_helmholtz_neumann, FourierBoundaryData, InteriorSolution, VolumeTerm,
};
use crate::error::{Error, Result};
use crate::geometry::{CutoffSpec, ForceField};
use crate::math;
use crate::milne::{self, BoundaryKind, MilneProblem, MilneSolution};
use crate::quad;

/// Which boundary-layer equation the composite uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Flat Milne layer, no curvature force.
    Classical,
    /// Milne layer with the geometric force.
    Geometric,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::Geometric => "geometric",
        }
    }
}

/// What to build.
#[derive(Debug, Clone)]
pub struct ExpansionSpec {
    pub variant: Variant,
    /// 0 or 1.
    pub order: u8,
    pub boundary: DiskBoundary,
    pub kind: BoundaryKind,
    pub epsilon: f64,
    /// Accept order 1 for `θ`-dependent data with the `∂θ` layer source
    /// dropped.
    pub acknowledge_theta_dependence: bool,
    /// Boundary columns sampled for `θ`-dependent data.
    pub n_theta: usize,
    pub radial: RadialGrid,
    pub angles: AngularQuadrature,
}

impl ExpansionSpec {
    pub fn new(variant: Variant, order: u8, boundary: DiskBoundary, kind: BoundaryKind, epsilon: f64) -> Self {
        let milne = MilneProblem::new(ForceField::none(0.1).expect("nominal field"), BoundaryProfile::constant(0.0));
        Self {
            variant,
            order,
            boundary,
            kind,
            epsilon,
            acknowledge_theta_dependence: false,
            n_theta: 16,
            radial: milne.radial,
            angles: milne.angles,
        }
    }

    pub fn with_acknowledgment(mut self) -> Self {
        self.acknowledge_theta_dependence = true;
        self
    }
    pub fn with_columns(mut self, n_theta: usize) -> Self {
        self.n_theta = n_theta;
        self
    }
    pub fn with_grids(mut self, radial: RadialGrid, angles: AngularQuadrature) -> Self {
        self.radial = radial;
        self.angles = angles;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.order > 1 {
            return Err(Error::Unsupported("expansion orders above 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::InvalidParameter("epsilon must lie in (0, 0.5]"));
        }
        let invariant = self.boundary.is_rotation_invariant();
        if !invariant && self.n_theta < 4 {
            return Err(Error::InvalidParameter("theta-dependent data need at least 4 columns"));
        }
        if self.order == 1 && !invariant {
            if self.variant == Variant::Classical {
                return Err(Error::Unsupported("classical order 1 with theta-dependent data"));
            }
            if !self.acknowledge_theta_dependence {
                return Err(Error::Unsupported("order 1 with theta-dependent data needs the acknowledgment flag"));
            }
        }
        Ok(())
    }

    fn columns(&self) -> usize {
        if self.boundary.is_rotation_invariant() {
            1
        } else {
            self.n_theta
        }
    }

    fn force(&self) -> Result<ForceField> {
        match self.variant {
            Variant::Classical => ForceField::none(self.epsilon),
            Variant::Geometric => ForceField::geometric(self.epsilon),
        }
    }

    fn milne(&self, data: BoundaryProfile, kind: BoundaryKind) -> Result<MilneSolution> {
        let p = MilneProblem::new(self.force()?, data)
            .with_kind(kind)
            .with_grids(self.radial.clone(), self.angles.clone());
        milne::solve(&p)
    }
}

/// `(f(η, φ) - f∞)` per boundary column.
#[derive(Debug, Clone)]
struct Layer {
    columns: Vec<MilneSolution>,
}

impl Layer {
    fn far(&self) -> Vec<f64> {
        self.columns.iter().map(|s| s.f_infinity).collect()
    }

    fn eval(&self, eta: f64, theta: f64, phi: f64) -> f64 {
        let col = |s: &MilneSolution| {
            if eta >= s.problem().length() {
                0.0
            } else {
                s.eval(eta, phi) - s.f_infinity
            }
        };
        if self.columns.len() == 1 {
            return col(&self.columns[0]);
        }
        let (idx, w) = periodic_cubic(theta, self.columns.len());
        (0..4).filter(|q| w[*q] != 0.0).map(|q| w[q] * col(&self.columns[idx[q]])).sum()
    }
}

/// An assembled composite approximation.
#[derive(Debug, Clone)]
pub struct Composite {
    spec: ExpansionSpec,
    cutoff: CutoffSpec,
    interior0: InteriorSolution,
    layer0: Option<Layer>,
    interior1: Option<InteriorSolution>,
    layer1: Option<Layer>,
}

fn column_theta(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

fn fourier(values: &[f64]) -> Result<FourierBoundaryData> {
    let n = values.len();
    let k_max = if n < 4 { 0 } else { n / 2 - 1 };
    if n < 4 {
        return Ok(FourierBoundaryData::constant(values.iter().sum::<f64>() / n as f64));
    }
    FourierBoundaryData::from_samples(values, k_max)
}

/// `(1/π) ∫_{sinφ>0} g(θ, φ) sinφ dφ`.
fn neumann_datum(g: &DiskBoundary, theta: f64) -> f64 {
    quad::integrate(|phi| g.eval(theta, phi) * math::sin(phi), 0.0, PI) / PI
}

/// `w·∇u` at the wall point `θ` for local angle `φ`.
fn wall_derivative(u: &InteriorSolution, theta: f64, phi: f64) -> f64 {
    let (x, y) = (math::cos(theta), math::sin(theta));
    let w = local_velocity(theta, phi);
    match u.gradient(x, y) {
        Ok(gr) => gr[0] * w[0] + gr[1] * w[1],
        Err(_) => 0.0,
    }
}

fn is_zero_interior(u: &InteriorSolution, n: usize) -> bool {
    (0..n.max(8)).all(|j| {
        let t = column_theta(j, n.max(8));
        match u.gradient(math::cos(t), math::sin(t)) {
            Ok(g) => g[0] == 0.0 && g[1] == 0.0,
            Err(_) => false,
        }
    })
}

pub fn build_composite(spec: &ExpansionSpec) -> Result<Composite> {
    spec.validate()?;
    let n = spec.columns();
    let g = &spec.boundary;
    let profile = |j: usize| -> BoundaryProfile {
        match g {
            DiskBoundary::Uniform(p) => p.clone(),
            DiskBoundary::Field(_) => {
                let g = g.clone();
                let t = column_theta(j, n);
                BoundaryProfile::custom(move |phi| g.eval(t, phi))
            }
        }
    };

    let (interior0, layer0) = match spec.kind {
        BoundaryKind::Inflow => {
            let columns = (0..n).map(|j| spec.milne(profile(j), BoundaryKind::Inflow)).collect::<Result<Vec<_>>>()?;
            let layer = Layer { columns };
            (solve_laplace_dirichlet(&fourier(&layer.far())?), Some(layer))
        }
        BoundaryKind::Diffusive => {
            // the order-0 layer vanishes; data enter through the Neumann flux
            let samples: Vec<f64> = (0..n.max(1)).map(|j| neumann_datum(g, column_theta(j, n))).collect();
            (solve_modified_helmholtz_neumann(&fourier(&samples)?, &VolumeTerm::Zero)?, None)
        }
    };

    let mut composite =
        Composite { spec: spec.clone(), cutoff: CutoffSpec::psi0(Default::default()), interior0, layer0, interior1: None, layer1: None };
    if spec.order == 0 {
        return Ok(composite);
    }

    // first order: layer data from the interior gradient at the wall
    let u0 = composite.interior0.clone();
    let flat_gradient = is_zero_interior(&u0, n);
    let data1 = |j: usize| -> BoundaryProfile {
        let t = column_theta(j, n);
        match spec.kind {
            BoundaryKind::Inflow => {
                let u0 = u0.clone();
                BoundaryProfile::custom(move |phi| wall_derivative(&u0, t, phi))
            }
            BoundaryKind::Diffusive => {
                let u0 = u0.clone();
                let g = g.clone();
                // P(w·∇u₀) = -(1/2)∫_{sinφ<0} w·∇u₀ sinφ dφ
                let p = -0.5 * quad::integrate(|phi| wall_derivative(&u0, t, phi) * math::sin(phi), -PI, 0.0);
                BoundaryProfile::custom(move |phi| wall_derivative(&u0, t, phi) - p + g.eval(t, phi))
            }
        }
    };
    let layer1 = if spec.kind == BoundaryKind::Inflow && flat_gradient {
        None
    } else {
        let columns = (0..n).map(|j| spec.milne(data1(j), spec.kind)).collect::<Result<Vec<_>>>()?;
        Some(Layer { columns })
    };
    let interior1 = match spec.kind {
        BoundaryKind::Inflow => {
            let far = match &layer1 {
                Some(l) => l.far(),
                None => alloc::vec![0.0; n],
            };
            solve_laplace_dirichlet(&fourier(&far)?)
        }
        // the Neumann flux of ū₁ comes from ∂θ of the order-0 layer, which
        // vanishes here; the volume term ∫ w·∇u₀ dw is zero
        BoundaryKind::Diffusive => solve_modified_helmholtz_neumann(&FourierBoundaryData::constant(0.0), &VolumeTerm::Zero)?,
    };
    composite.interior1 = Some(interior1);
    composite.layer1 = layer1;
    Ok(composite)
}

impl Composite {
    pub fn spec(&self) -> &ExpansionSpec {
        &self.spec
    }
    pub fn epsilon(&self) -> f64 {
        self.spec.epsilon
    }
    pub fn interior(&self) -> &InteriorSolution {
        &self.interior0
    }
    pub fn interior_first_order(&self) -> Option<&InteriorSolution> {
        self.interior1.as_ref()
    }
    /// Order-0 layer solutions per boundary column; empty when the layer
    /// vanishes identically.
    pub fn layer_solutions(&self) -> &[MilneSolution] {
        self.layer0.as_ref().map(|l| l.columns.as_slice()).unwrap_or(&[])
    }
    pub fn first_order_layer_solutions(&self) -> &[MilneSolution] {
        self.layer1.as_ref().map(|l| l.columns.as_slice()).unwrap_or(&[])
    }

    /// `ψ₀(εη)·(f₀ - f₀∞)` at layer coordinates.
    pub fn layer_value(&self, eta: f64, theta: f64, phi: f64) -> f64 {
        let psi0 = self.cutoff.value(self.spec.epsilon * eta);
        match &self.layer0 {
            Some(l) if psi0 > 0.0 => psi0 * l.eval(eta, theta, phi),
            _ => 0.0,
        }
    }

    /// Composite value at `(x, y)` with local angle `phi`.
    pub fn eval(&self, x: f64, y: f64, phi: f64) -> f64 {
        let eps = self.spec.epsilon;
        let r = math::hypot(x, y).min(1.0);
        let theta = math::atan2(y, x);
        let eta = (1.0 - r) / eps;
        let psi0 = self.cutoff.value(1.0 - r);
        let mut v = self.interior0.value_at(x, y);
        if psi0 > 0.0 {
            if let Some(l) = &self.layer0 {
                v += psi0 * l.eval(eta, theta, phi);
            }
        }
        if let Some(u1) = &self.interior1 {
            let w = local_velocity(theta, phi);
            let grad = self.interior0.gradient(x, y).unwrap_or([0.0, 0.0]);
            let mut first = u1.value_at(x, y) - (w[0] * grad[0] + w[1] * grad[1]);
            if psi0 > 0.0 {
                if let Some(l) = &self.layer1 {
                    first += psi0 * l.eval(eta, theta, phi);
                }
            }
            v += eps * first;
        }
        v
    }

    /// Composite value in layer coordinates.
    pub fn eval_layer(&self, eta: f64, theta: f64, phi: f64) -> f64 {
        let r = 1.0 - self.spec.epsilon * eta;
        self.eval(r * math::cos(theta), r * math::sin(theta), phi)
    }
}
