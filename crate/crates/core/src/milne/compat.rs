use super::problem::MilneProblem;
use crate::quad;

/// Outcome of the zero-flux test for diffusive data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compatibility {
    /// `∫_{sinφ>0} h sinφ dφ + ∫∫ e^{-V} S`
    pub defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Evaluates the compatibility defect by adaptive quadrature.
pub fn check_compatibility(problem: &MilneProblem) -> Compatibility {
    let h = &problem.boundary;
    let pi = core::f64::consts::PI;
    let mut defect = quad::adaptive(|p| h.eval(p) * crate::math::sin(p), 0.0, pi, 1e-14, 1e-14, 4000).value;
    let mut scale = h.sup_abs();
    if let Some(src) = &problem.source {
        let field = &problem.force;
        let end = problem.length() + 40.0 / src.decay_rate;
        let vol = quad::adaptive(
            |s| crate::math::exp(-field.potential(s)) * 2.0 * pi * src.mean(s),
            0.0,
            end,
            1e-14,
            1e-13,
            4000,
        );
        defect += vol.value;
        scale = scale.max(src.mean(0.0).abs());
    }
    let tolerance = problem.compatibility_tolerance * (1.0 + scale);
    Compatibility { defect, tolerance, passed: defect.abs() <= tolerance }
}
