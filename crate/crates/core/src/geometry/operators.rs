//! Boundary operator `A` and volume operator `T` of the half-space problem
//! with absorption: `f = A h + T H` solves
//! `sin(phi) f_eta + F cos(phi) f_phi + f = H` with `f = h` on incoming directions.

use super::characteristic::TurningPoint;
use super::force::ForceField;
use crate::math;
use crate::quad;

/// Which of the three characteristic families a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Incoming: traced straight back to the wall.
    Incoming,
    /// Outgoing and escaping to infinity.
    Escaping,
    /// Outgoing, turning at a finite depth and returning to the wall.
    Turning,
}

/// Optical depth beyond which the escaping leg is cut off.
const ESCAPE_DEPTH: f64 = 40.0;
const TOL: f64 = 1e-10;

impl ForceField {
    pub fn classify(&self, eta: f64, phi: f64) -> Case {
        let s = math::sin(phi);
        if s > 0.0 {
            Case::Incoming
        } else {
            match self.eta_plus(eta, phi) {
                TurningPoint::Infinite => Case::Escaping,
                TurningPoint::Finite(_) if s == 0.0 => Case::Turning,
                TurningPoint::Finite(_) => Case::Turning,
            }
        }
    }

    fn ln_energy(&self, eta: f64, phi: f64) -> f64 {
        let e = self.energy(eta, phi);
        if e == 0.0 {
            f64::NEG_INFINITY
        } else {
            math::ln(e.abs())
        }
    }

    /// Depth between `lo` and `hi` on the characteristic through `(eta, phi)`.
    fn depth(&self, phi: f64, eta: f64, lo: f64, hi: f64) -> f64 {
        self.g_weight(phi, eta, lo, hi).unwrap_or(f64::INFINITY)
    }

    /// Boundary operator: transports `h` from the wall along the characteristic.
    pub fn apply_a<H: Fn(f64) -> f64>(&self, h: H, eta: f64, phi: f64) -> f64 {
        match self.classify(eta, phi) {
            Case::Escaping => 0.0,
            Case::Incoming => {
                let Ok(phi0) = self.phi_prime(phi, eta, 0.0) else { return 0.0 };
                h(phi0) * math::exp(-self.depth(phi, eta, 0.0, eta))
            }
            Case::Turning => {
                let ep = self.eta_plus(eta, phi).value().unwrap();
                let Ok(phi0) = self.phi_prime(phi, eta, 0.0) else { return 0.0 };
                let g = self.depth(phi, eta, 0.0, ep) + self.depth(phi, eta, eta, ep);
                h(phi0) * math::exp(-g)
            }
        }
    }

    /// Volume operator: accumulates `H` along the backward characteristic.
    pub fn apply_t<H: Fn(f64, f64) -> f64>(&self, src: H, eta: f64, phi: f64) -> f64 {
        let ln_e = self.ln_energy(eta, phi);
        let angle = |xi: f64| {
            let c = if ln_e == f64::NEG_INFINITY {
                0.0
            } else {
                (math::exp(ln_e + self.potential(xi)) * math::cos(phi).signum()).clamp(-1.0, 1.0)
            };
            math::acos(c)
        };
        match self.classify(eta, phi) {
            Case::Incoming => {
                if eta == 0.0 {
                    return 0.0;
                }
                match self.eta_plus(eta, phi) {
                    TurningPoint::Infinite => quad::adaptive(
                        |xi| {
                            let s = self.sin_along(ln_e, xi);
                            src(xi, angle(xi)) / s * math::exp(-self.depth(phi, eta, xi, eta))
                        },
                        0.0,
                        eta,
                        TOL,
                        TOL,
                        2000,
                    )
                    .value,
                    TurningPoint::Finite(ep) => {
                        self.turning_integral(ln_e, ep, 0.0, eta, |xi, jac| {
                            src(xi, angle(xi)) * jac * math::exp(-self.depth(phi, eta, xi, eta))
                        })
                    }
                }
            }
            Case::Escaping => {
                let upper = eta + ESCAPE_DEPTH;
                quad::adaptive(
                    |xi| {
                        let s = self.sin_along(ln_e, xi);
                        src(xi, -angle(xi)) / s * math::exp(-self.depth(phi, eta, eta, xi))
                    },
                    eta,
                    upper,
                    TOL,
                    TOL,
                    4000,
                )
                .value
            }
            Case::Turning => {
                let ep = self.eta_plus(eta, phi).value().unwrap();
                let back = self.depth(phi, eta, eta, ep);
                let inward = self.turning_integral(ln_e, ep, 0.0, ep, |xi, jac| {
                    src(xi, angle(xi)) * jac * math::exp(-self.depth(phi, eta, xi, ep) - back)
                });
                let outward = self.turning_integral(ln_e, ep, eta, ep, |xi, jac| {
                    src(xi, -angle(xi)) * jac * math::exp(-self.depth(phi, eta, eta, xi))
                });
                inward + outward
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn a_of_unit_data_without_force() {
        let f = ForceField::none(0.1).unwrap();
        let v = f.apply_a(|_| 1.0, 2.0, FRAC_PI_2);
        assert!((v - math::exp(-2.0)).abs() < 1e-12);
    }

    #[test]
    fn a_vanishes_on_escaping_characteristics() {
        let f = ForceField::geometric(0.1).unwrap();
        // sin < 0 and |E| tiny
        assert_eq!(f.classify(3.0, -1.5), Case::Escaping);
        assert_eq!(f.apply_a(|_| 5.0, 3.0, -1.5), 0.0);
    }

    #[test]
    fn a_at_the_wall_returns_the_data() {
        let f = ForceField::geometric(0.1).unwrap();
        let v = f.apply_a(|p| math::cos(3.0 * p), 0.0, 0.8);
        assert!((v - math::cos(2.4)).abs() < 1e-14);
    }

    #[test]
    fn t_of_zero_and_unit_source() {
        let f = ForceField::none(0.1).unwrap();
        assert_eq!(f.apply_t(|_, _| 0.0, 1.5, 0.9), 0.0);
        let phi: f64 = 0.9;
        let v = f.apply_t(|_, _| 1.0, 1.5, phi);
        let exact = 1.0 - math::exp(-1.5 / math::sin(phi));
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }
}
