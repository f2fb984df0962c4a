use super::force::ForceField;
use crate::error::{Error, Result};
use crate::math;
use crate::quad;

/// Turning point of a characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TurningPoint {
    Finite(f64),
    /// The characteristic escapes to infinity.
    Infinite,
}

impl TurningPoint {
    pub fn is_finite(&self) -> bool {
        matches!(self, TurningPoint::Finite(_))
    }
    pub fn value(&self) -> Option<f64> {
        match *self {
            TurningPoint::Finite(v) => Some(v),
            TurningPoint::Infinite => None,
        }
    }
}

/// Conserved energy of the characteristic through a point and its turning point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub energy: f64,
    pub eta_plus: TurningPoint,
}

const BISECTION_TOL: f64 = 1e-12;
const WEIGHT_TOL: f64 = 1e-11;

impl ForceField {
    /// `E = cos(phi) exp(-V(eta))`.
    pub fn energy(&self, eta: f64, phi: f64) -> f64 {
        math::cos(phi) * math::exp(-self.potential(eta))
    }

    pub fn characteristic(&self, eta: f64, phi: f64) -> Characteristic {
        Characteristic { energy: self.energy(eta, phi), eta_plus: self.eta_plus(eta, phi) }
    }

    /// Angle in `[0, pi)` at `eta_src` on the characteristic through `(eta, phi)`.
    pub fn phi_prime(&self, phi: f64, eta: f64, eta_src: f64) -> Result<f64> {
        let arg = math::cos(phi) * math::exp(self.potential(eta_src) - self.potential(eta));
        if arg.abs() > 1.0 + 1e-12 {
            let eta_plus = self.eta_plus(eta, phi).value().unwrap_or(f64::INFINITY);
            return Err(Error::Characteristic { eta_src, eta_plus });
        }
        Ok(math::acos(arg.clamp(-1.0, 1.0)))
    }

    /// Solves `exp(-V(eta_plus)) = |E(eta, phi)|` by bisection on the monotone potential.
    pub fn eta_plus(&self, eta: f64, phi: f64) -> TurningPoint {
        let c = math::cos(phi).abs();
        if c == 0.0 {
            return TurningPoint::Infinite;
        }
        let target = self.potential(eta) - math::ln(c);
        if target > self.v_infinity() {
            return TurningPoint::Infinite;
        }
        if self.potential(eta) >= target {
            return TurningPoint::Finite(eta);
        }
        let mut lo = eta;
        let mut hi = self.support_end().max(eta);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.potential(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        TurningPoint::Finite(hi)
    }

    /// `sin` of the characteristic angle at `xi`, given `ln|E|`.
    #[inline]
    pub(crate) fn sin_along(&self, ln_abs_energy: f64, xi: f64) -> f64 {
        if ln_abs_energy == f64::NEG_INFINITY {
            return 1.0;
        }
        let s2 = -math::expm1(2.0 * (self.potential(xi) + ln_abs_energy));
        math::sqrt(s2.max(0.0))
    }

    /// Optical depth `int_lo^hi dxi / sin(phi'(phi, eta, xi))`.
    pub fn g_weight(&self, phi: f64, eta: f64, lo: f64, hi: f64) -> Result<f64> {
        if !(lo >= 0.0) {
            return Err(Error::Domain { what: "eta_lo", value: lo });
        }
        if hi < lo {
            return Err(Error::InvalidParameter("g_weight needs eta_lo <= eta_hi"));
        }
        if hi == lo {
            return Ok(0.0);
        }
        let e = self.energy(eta, phi);
        let ln_e = if e == 0.0 { f64::NEG_INFINITY } else { math::ln(e.abs()) };
        match self.eta_plus(eta, phi) {
            TurningPoint::Infinite => Ok(quad::adaptive(
                |xi| 1.0 / self.sin_along(ln_e, xi),
                lo,
                hi,
                WEIGHT_TOL,
                WEIGHT_TOL,
                4000,
            )
            .value),
            TurningPoint::Finite(ep) => {
                if hi > ep + 1e-9 {
                    return Err(Error::Characteristic { eta_src: hi, eta_plus: ep });
                }
                let hi = hi.min(ep);
                Ok(self.turning_integral(ln_e, ep, lo, hi, |_, w| w))
            }
        }
    }

    /// `int_lo^hi g(xi, 1/sin) dxi` near a finite turning point, with
    /// `xi = ep - t^2` removing the inverse square root at `ep`.
    pub(crate) fn turning_integral<G: FnMut(f64, f64) -> f64>(
        &self,
        ln_e: f64,
        ep: f64,
        lo: f64,
        hi: f64,
        mut g: G,
    ) -> f64 {
        let t_lo = math::sqrt((ep - hi).max(0.0));
        let t_hi = math::sqrt((ep - lo).max(0.0));
        let slope = -self.force(ep);
        if t_lo == 0.0 && slope == 0.0 {
            // sin vanishes to second order: the depth diverges
            return f64::INFINITY;
        }
        quad::adaptive(
            |t| {
                let xi = ep - t * t;
                let s = self.sin_along(ln_e, xi);
                let jac = if t < 1e-7 && slope > 0.0 {
                    math::sqrt(2.0 / slope)
                } else if s > 0.0 {
                    2.0 * t / s
                } else {
                    return 0.0;
                };
                g(xi, jac)
            },
            t_lo,
            t_hi,
            WEIGHT_TOL,
            WEIGHT_TOL,
            4000,
        )
        .value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn phi_prime_fixed_points() {
        let f = ForceField::geometric(0.1).unwrap();
        assert!((f.phi_prime(0.3, 2.0, 2.0).unwrap() - 0.3).abs() < 1e-15);
        assert!((f.phi_prime(FRAC_PI_2, 3.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let free = ForceField::none(0.1).unwrap();
        assert!((free.phi_prime(2.0, 1.0, 5.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn phi_prime_past_turning_point_is_an_error() {
        let f = ForceField::geometric(0.1).unwrap();
        // turning point near 4.597
        assert!(matches!(f.phi_prime(1.0, 0.0, 5.0), Err(Error::Characteristic { .. })));
    }

    #[test]
    fn eta_plus_examples() {
        let f = ForceField::geometric(0.1).unwrap();
        assert_eq!(f.eta_plus(1.0, FRAC_PI_2), TurningPoint::Infinite);
        assert_eq!(f.eta_plus(0.0, 0.0), TurningPoint::Finite(0.0));
        let ep = f.eta_plus(0.0, 1.0).value().unwrap();
        let exact = (1.0 - math::cos(1.0)) / 0.1;
        assert!(0.1 * exact <= 0.5);
        assert!((ep - exact).abs() < 1e-10, "{ep} vs {exact}");
    }

    #[test]
    fn g_weight_trivial_cases() {
        let f = ForceField::geometric(0.1).unwrap();
        assert_eq!(f.g_weight(0.4, 2.0, 1.0, 1.0).unwrap(), 0.0);
        let free = ForceField::none(0.1).unwrap();
        let g = free.g_weight(0.7, 3.0, 0.5, 2.5).unwrap();
        assert!((g - 2.0 / math::sin(0.7)).abs() < 1e-12);
    }

    #[test]
    fn g_weight_rejects_crossing_turning_point() {
        let f = ForceField::geometric(0.1).unwrap();
        assert!(f.g_weight(1.0, 0.0, 0.0, 6.0).is_err());
    }
}
