use alloc::vec::Vec;

use crate::boundary::BoundaryProfile;
use crate::discretization::{AngularQuadrature, RadialGrid};
use crate::error::{Error, Result};
use crate::geometry::ForceField;
use crate::math;
use crate::milne::{self, MilneProblem, MilneSolution};

/// `(1 - e^{-n}) ū(0) + e^{-n} G(ε)`.
pub fn point_formula_flat(n: f64, ubar0: f64, g: &BoundaryProfile, epsilon: f64) -> f64 {
    let w = math::exp(-n);
    (1.0 - w) * ubar0 + w * g.eval(epsilon)
}

/// `(1 - e^{1-√(1+2n)}) Ū(0) + e^{1-√(1+2n)} G(√(1+2n) ε)`.
pub fn point_formula_geometric(n: f64, ubar0: f64, g: &BoundaryProfile, epsilon: f64) -> f64 {
    let s = math::sqrt(1.0 + 2.0 * n);
    let w = math::exp(1.0 - s);
    (1.0 - w) * ubar0 + w * g.eval(s * epsilon)
}

/// `e^{1-√(1+2n)} - e^{-n}`: how far apart the two wall weights are.
pub fn weight_gap(n: f64) -> f64 {
    math::exp(1.0 - math::sqrt(1.0 + 2.0 * n)) - math::exp(-n)
}

/// One `(ε, n)` entry of the point-formula table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFormulaRow {
    pub epsilon: f64,
    pub n: f64,
    /// `ū(0)` of the flat layer.
    pub flat_ubar0: f64,
    /// `Ū(0)` of the geometric layer.
    pub geometric_ubar0: f64,
    /// `u(nε, ε)` from the flat solve.
    pub flat_solved: f64,
    pub flat_formula: f64,
    /// `U(nε, ε)` from the geometric solve.
    pub geometric_solved: f64,
    pub geometric_formula: f64,
    /// `|U - u|` of the solved values.
    pub discrepancy: f64,
}

impl PointFormulaRow {
    pub fn flat_residual(&self) -> f64 {
        (self.flat_solved - self.flat_formula).abs()
    }
    pub fn geometric_residual(&self) -> f64 {
        (self.geometric_solved - self.geometric_formula).abs()
    }
}

fn solve(force: ForceField, g: &BoundaryProfile, radial: &RadialGrid, angles: &AngularQuadrature) -> Result<MilneSolution> {
    milne::solve(&MilneProblem::new(force, g.clone()).with_grids(radial.clone(), angles.clone()))
}

/// Solves the flat and geometric layers once per `ε` and tabulates the
/// solved values at `(η, φ) = (nε, ε)` against both formulas.
pub fn verify_point_formulas(
    epsilons: &[f64],
    ns: &[f64],
    g: &BoundaryProfile,
    radial: &RadialGrid,
    angles: &AngularQuadrature,
) -> Result<Vec<PointFormulaRow>> {
    let mut rows = Vec::with_capacity(epsilons.len() * ns.len());
    for &eps in epsilons {
        let flat = solve(ForceField::none(eps)?, g, radial, angles)?;
        let geo = solve(ForceField::geometric(eps)?, g, radial, angles)?;
        let (ub, ug) = (flat.f_bar()[0], geo.f_bar()[0]);
        for &n in ns {
            if !(n > 0.0) || n * eps >= radial.length() {
                return Err(Error::Domain { what: "n", value: n });
            }
            let u = flat.eval(n * eps, eps);
            let big_u = geo.eval(n * eps, eps);
            rows.push(PointFormulaRow {
                epsilon: eps,
                n,
                flat_ubar0: ub,
                geometric_ubar0: ug,
                flat_solved: u,
                flat_formula: point_formula_flat(n, ub, g, eps),
                geometric_solved: big_u,
                geometric_formula: point_formula_geometric(n, ug, g, eps),
                discrepancy: (big_u - u).abs(),
            });
        }
    }
    Ok(rows)
}
