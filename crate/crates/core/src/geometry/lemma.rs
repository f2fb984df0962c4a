//! Numerical check of the elementary bounds on the force and potential.

use super::force::ForceField;
use crate::math;
use crate::quad;

/// Measured quantities and bound violations of the force lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceLemmaReport {
    pub epsilon: f64,
    pub samples: usize,
    pub max_abs_force: f64,
    pub min_potential: f64,
    pub max_potential: f64,
    pub force_l2_squared: f64,
    pub force_tail_moment: f64,
    pub max_shift_ratio: f64,
    pub violations: usize,
}

impl ForceLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples `|F| <= 4 eps`, `0 <= V <= ln 4`, `int F^2 <= 3 eps`,
/// `int int_eta^inf F^2 <= 3 - ln 4` and
/// `exp(V(eta+s) - V(eta)) <= 1 + 4 eps s` for `s` in `{0.1, 1, 10}`.
pub fn force_lemma_suite(field: &ForceField, samples: usize) -> ForceLemmaReport {
    let eps = field.epsilon();
    let end = field.support_end().max(1.0) * 1.25;
    let ln4 = math::ln(4.0);
    let slack = 1e-12;
    let mut violations = 0;
    let mut max_abs_force: f64 = 0.0;
    let mut min_potential = f64::INFINITY;
    let mut max_potential = f64::NEG_INFINITY;
    let mut max_shift_ratio: f64 = 0.0;
    let mut prev_v = 0.0;
    for k in 0..=samples {
        let eta = end * k as f64 / samples as f64;
        let force = field.force(eta);
        let v = field.potential(eta);
        max_abs_force = max_abs_force.max(force.abs());
        min_potential = min_potential.min(v);
        max_potential = max_potential.max(v);
        if force.abs() > 4.0 * eps + slack || v < -slack || v > ln4 + slack || v < prev_v - slack {
            violations += 1;
        }
        prev_v = v;
        for sigma in [0.1, 1.0, 10.0] {
            let ratio = math::exp(field.potential(eta + sigma) - v) / (1.0 + 4.0 * eps * sigma);
            max_shift_ratio = max_shift_ratio.max(ratio);
            if ratio > 1.0 + slack {
                violations += 1;
            }
        }
    }
    let upper = field.support_end().max(1.0);
    let force_l2_squared = quad::integrate(|y| { let f = field.force(y); f * f }, 0.0, upper);
    // int_0^inf int_eta^inf F(y)^2 dy deta = int_0^inf y F(y)^2 dy
    let force_tail_moment = quad::integrate(|y| y * { let f = field.force(y); f * f }, 0.0, upper);
    if force_l2_squared > 3.0 * eps + slack {
        violations += 1;
    }
    if force_tail_moment > 3.0 - ln4 + slack {
        violations += 1;
    }
    ForceLemmaReport {
        epsilon: eps,
        samples: samples + 1,
        max_abs_force,
        min_potential,
        max_potential,
        force_l2_squared,
        force_tail_moment,
        max_shift_ratio,
        violations,
    }
}
