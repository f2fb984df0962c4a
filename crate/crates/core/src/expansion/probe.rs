use alloc::vec::Vec;

use crate::boundary::BoundaryProfile;
use crate::discretization::{AngularQuadrature, RadialGrid};
use crate::error::{Error, Result};
use crate::geometry::ForceField;
use crate::math;
use crate::milne::{self, check_compatibility, BoundaryKind, MilneProblem, MilneSolution};

/// Angles at refinement level 0; each level doubles them.
pub const PROBE_BASE_ANGLES: usize = 32;
/// Nominal `ε` of the force-free field; it does not enter the equation.
const PROBE_EPSILON: f64 = 0.1;

/// One refinement level of a grazing probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrazingRow {
    pub level: usize,
    pub n_angles: usize,
    /// Incoming node closest to grazing.
    pub phi_min: f64,
    pub f_bar0: f64,
    /// `f(0, φ_min)`.
    pub f_wall: f64,
    /// `|f̄(0) - f(0, φ_min)| / sinφ_min`.
    pub derivative: f64,
    /// Against the previous level; `None` at level 0.
    pub growth: Option<f64>,
}

impl GrazingRow {
    /// `|∂η f(0, φ_min)| · sinφ_min`.
    pub fn scaled(&self) -> f64 {
        self.derivative * math::sin(self.phi_min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrazingTable {
    pub rows: Vec<GrazingRow>,
}

impl GrazingTable {
    pub fn min_scaled(&self) -> f64 {
        self.rows.iter().fold(f64::INFINITY, |m, r| m.min(r.scaled()))
    }
    pub fn min_growth(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.growth).reduce(f64::min)
    }
}

fn probe_radial() -> Result<RadialGrid> {
    RadialGrid::graded(160, 30.0, 1.15, 2e-3)
}

fn probe_row(level: usize, sol: &MilneSolution) -> GrazingRow {
    let phi = sol.phi();
    let k = (0..phi.len())
        .filter(|&k| math::sin(phi[k]) > 0.0)
        .min_by(|&a, &b| phi[a].abs().partial_cmp(&phi[b].abs()).unwrap())
        .expect("incoming node");
    let f_bar0 = sol.f_bar()[0];
    let f_wall = sol.row(0)[k];
    GrazingRow {
        level,
        n_angles: phi.len(),
        phi_min: phi[k],
        f_bar0,
        f_wall,
        derivative: (f_bar0 - f_wall).abs() / math::sin(phi[k]),
        growth: None,
    }
}

fn run(g: &BoundaryProfile, levels: usize, kind: BoundaryKind) -> Result<GrazingTable> {
    let radial = probe_radial()?;
    let mut rows: Vec<GrazingRow> = Vec::with_capacity(levels);
    for level in 0..levels {
        let angles = AngularQuadrature::new(PROBE_BASE_ANGLES << level)?;
        let p = MilneProblem::new(ForceField::none(PROBE_EPSILON)?, g.clone())
            .with_kind(kind)
            .with_grids(radial.clone(), angles);
        let mut row = probe_row(level, &milne::solve(&p)?);
        if let Some(prev) = rows.last() {
            row.growth = Some(row.derivative / prev.derivative);
        }
        rows.push(row);
    }
    Ok(GrazingTable { rows })
}

/// Wall derivative of the flat in-flow layer at the incoming node nearest
/// grazing, for `levels` successive doublings of the angular grid.
pub fn grazing_probe(g: &BoundaryProfile, levels: usize) -> Result<GrazingTable> {
    run(g, levels, BoundaryKind::Inflow)
}

/// The same probe for diffusive data, which first must pass the
/// zero-flux test.
pub fn grazing_probe_diffusive(g: &BoundaryProfile, levels: usize) -> Result<GrazingTable> {
    let p = MilneProblem::new(ForceField::none(PROBE_EPSILON)?, g.clone()).with_kind(BoundaryKind::Diffusive);
    let c = check_compatibility(&p);
    if !c.passed {
        return Err(Error::Compatibility { defect: c.defect });
    }
    run(g, levels, BoundaryKind::Diffusive)
}

/// Far fields of the geometric and flat layers for the same data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldGap {
    pub epsilon: f64,
    pub geometric: f64,
    pub classical: f64,
}

impl FarFieldGap {
    pub fn gap(&self) -> f64 {
        (self.geometric - self.classical).abs()
    }
}

pub fn far_field_gap(g: &BoundaryProfile, epsilon: f64, radial: &RadialGrid, angles: &AngularQuadrature) -> Result<FarFieldGap> {
    let solve = |f: ForceField| milne::solve(&MilneProblem::new(f, g.clone()).with_grids(radial.clone(), angles.clone()));
    let geo = solve(ForceField::geometric(epsilon)?)?;
    let flat = solve(ForceField::none(epsilon)?)?;
    Ok(FarFieldGap { epsilon, geometric: geo.f_infinity, classical: flat.f_infinity })
}
