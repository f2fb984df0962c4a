use crate::error::{Error, Result};

/// Transition polynomial between the plateau and the end of support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Smoothness {
    C1Cubic,
    #[default]
    C2Quintic,
}

/// A smooth cutoff equal to 1 up to `plateau_end` and 0 from `support_end` on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub plateau_end: f64,
    pub support_end: f64,
    pub smoothness: Smoothness,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        Self::psi(Smoothness::default())
    }
}

impl CutoffSpec {
    pub fn new(plateau_end: f64, support_end: f64, smoothness: Smoothness) -> Result<Self> {
        if !(plateau_end > 0.0 && plateau_end < support_end && support_end < 1.0) {
            return Err(Error::InvalidParameter(
                "cutoff needs 0 < plateau_end < support_end < 1",
            ));
        }
        Ok(Self { plateau_end, support_end, smoothness })
    }

    /// The force cutoff: plateau `[0, 1/2]`, support `[0, 3/4]`.
    pub const fn psi(smoothness: Smoothness) -> Self {
        Self { plateau_end: 0.5, support_end: 0.75, smoothness }
    }

    /// The layer cutoff: plateau `[0, 1/4]`, support `[0, 3/8]`.
    pub const fn psi0(smoothness: Smoothness) -> Self {
        Self { plateau_end: 0.25, support_end: 0.375, smoothness }
    }

    pub fn eval(&self, mu: f64) -> Result<f64> {
        if !(mu >= 0.0) {
            return Err(Error::Domain { what: "cutoff argument", value: mu });
        }
        Ok(self.value(mu))
    }

    #[inline]
    pub(crate) fn value(&self, mu: f64) -> f64 {
        if mu <= self.plateau_end {
            return 1.0;
        }
        if mu >= self.support_end {
            return 0.0;
        }
        let t = (mu - self.plateau_end) / (self.support_end - self.plateau_end);
        let step = match self.smoothness {
            Smoothness::C1Cubic => t * t * (3.0 - 2.0 * t),
            Smoothness::C2Quintic => t * t * t * (t * (6.0 * t - 15.0) + 10.0),
        };
        1.0 - step
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_outside_support() {
        let psi = CutoffSpec::default();
        assert_eq!(psi.eval(0.3).unwrap(), 1.0);
        assert_eq!(psi.eval(0.9).unwrap(), 0.0);
        assert_eq!(psi.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn cubic_midpoint() {
        let psi = CutoffSpec::psi(Smoothness::C1Cubic);
        // 1 - (3/4 - 2/8)
        assert!((psi.eval(0.625).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn negative_argument_is_rejected() {
        assert!(matches!(CutoffSpec::default().eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn bad_support_is_rejected() {
        assert!(CutoffSpec::new(0.5, 0.4, Smoothness::C1Cubic).is_err());
        assert!(CutoffSpec::new(0.5, 1.0, Smoothness::C1Cubic).is_err());
    }
}
