use alloc::sync::Arc;
use alloc::vec::Vec;

use super::cutoff::CutoffSpec;
use crate::error::{Error, Result};
use crate::math;
use crate::quad::GaussLegendre;

/// Whether the curvature force is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ForceMode {
    #[default]
    Geometric,
    None,
}

/// `W(mu) = int_0^mu psi(s)/(1-s) ds` tabulated on the transition of the cutoff.
/// The potential is `V(eps; eta) = W(eps * eta)`.
#[derive(Debug)]
struct PotentialTable {
    start: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    limit: f64,
}

const TABLE_INTERVALS: usize = 512;

impl PotentialTable {
    fn build(cutoff: &CutoffSpec) -> Self {
        let start = cutoff.plateau_end;
        let step = (cutoff.support_end - start) / TABLE_INTERVALS as f64;
        let rule = GaussLegendre::new(12);
        let density = |mu: f64| cutoff.value(mu) / (1.0 - mu);
        let mut values = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut slopes = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut w = -math::ln1p(-start);
        for k in 0..=TABLE_INTERVALS {
            let mu = start + k as f64 * step;
            if k > 0 {
                w += rule.integrate(mu - step, mu, density);
            }
            values.push(w);
            slopes.push(density(mu));
        }
        let limit = *values.last().unwrap();
        PotentialTable { start, step, values, slopes, limit }
    }

    /// Cubic Hermite interpolation with exact end slopes.
    fn eval(&self, mu: f64) -> f64 {
        let x = (mu - self.start) / self.step;
        let k = (math::floor(x) as usize).min(TABLE_INTERVALS - 1);
        let t = x - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k] * self.step, self.slopes[k + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1
    }
}

/// The force `F(eps; eta) = -eps psi(eps eta) / (1 - eps eta)` and its potential.
#[derive(Debug, Clone)]
pub struct ForceField {
    epsilon: f64,
    cutoff: CutoffSpec,
    mode: ForceMode,
    table: Arc<PotentialTable>,
}

impl ForceField {
    pub fn new(epsilon: f64, cutoff: CutoffSpec, mode: ForceMode) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter("epsilon must lie in (0, 1)"));
        }
        let cutoff = CutoffSpec::new(cutoff.plateau_end, cutoff.support_end, cutoff.smoothness)?;
        Ok(Self { epsilon, cutoff, mode, table: Arc::new(PotentialTable::build(&cutoff)) })
    }

    pub fn geometric(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, CutoffSpec::default(), ForceMode::Geometric)
    }

    pub fn none(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, CutoffSpec::default(), ForceMode::None)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }
    pub fn mode(&self) -> ForceMode {
        self.mode
    }
    pub fn is_free(&self) -> bool {
        self.mode == ForceMode::None
    }

    /// End of the force support in `eta`.
    pub fn support_end(&self) -> f64 {
        match self.mode {
            ForceMode::None => 0.0,
            ForceMode::Geometric => self.cutoff.support_end / self.epsilon,
        }
    }

    pub fn eval_force(&self, eta: f64) -> Result<f64> {
        if !(eta >= 0.0) {
            return Err(Error::Domain { what: "eta", value: eta });
        }
        Ok(self.force(eta))
    }

    #[inline]
    pub fn force(&self, eta: f64) -> f64 {
        match self.mode {
            ForceMode::None => 0.0,
            ForceMode::Geometric => {
                let mu = self.epsilon * eta.max(0.0);
                if mu >= self.cutoff.support_end {
                    0.0
                } else {
                    -self.epsilon * self.cutoff.value(mu) / (1.0 - mu)
                }
            }
        }
    }

    pub fn eval_potential(&self, eta: f64) -> Result<f64> {
        if !(eta >= 0.0) {
            return Err(Error::Domain { what: "eta", value: eta });
        }
        Ok(self.potential(eta))
    }

    /// `V(eta) = -int_0^eta F`; closed form on the plateau, constant past the support.
    #[inline]
    pub fn potential(&self, eta: f64) -> f64 {
        match self.mode {
            ForceMode::None => 0.0,
            ForceMode::Geometric => {
                let mu = self.epsilon * eta.max(0.0);
                if mu <= self.cutoff.plateau_end {
                    -math::ln1p(-mu)
                } else if mu >= self.cutoff.support_end {
                    self.table.limit
                } else {
                    self.table.eval(mu)
                }
            }
        }
    }

    /// Limit of the potential, independent of epsilon.
    pub fn v_infinity(&self) -> f64 {
        match self.mode {
            ForceMode::None => 0.0,
            ForceMode::Geometric => self.table.limit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn force_examples() {
        let f = ForceField::geometric(0.1).unwrap();
        assert!((f.eval_force(0.0).unwrap() + 0.1).abs() < 1e-15);
        assert_eq!(f.eval_force(10.0).unwrap(), 0.0);
        assert!((f.eval_force(1.0).unwrap() + 1.0 / 9.0).abs() < 1e-15);
        assert!(f.eval_force(-1.0).is_err());
    }

    #[test]
    fn potential_examples() {
        let f = ForceField::geometric(0.1).unwrap();
        assert_eq!(f.eval_potential(0.0).unwrap(), 0.0);
        assert!((f.eval_potential(5.0).unwrap() - core::f64::consts::LN_2).abs() < 1e-14);
        let g = ForceField::geometric(0.05).unwrap();
        for eta in [3.0, 5.5, 6.2, 7.0, 9.0] {
            let a = f.potential(eta);
            let b = g.potential(2.0 * eta);
            assert!((a - b).abs() < 1e-14, "{eta}: {a} vs {b}");
        }
    }

    #[test]
    fn free_mode_is_identically_zero() {
        let f = ForceField::none(0.1).unwrap();
        for eta in [0.0, 1.0, 7.0, 100.0] {
            assert_eq!(f.force(eta), 0.0);
            assert_eq!(f.potential(eta), 0.0);
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(ForceField::geometric(0.0).is_err());
        assert!(ForceField::geometric(1.0).is_err());
    }
}
