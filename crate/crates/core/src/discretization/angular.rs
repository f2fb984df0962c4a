use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// Uniform midpoint rule on `[-pi, pi)`; no node is grazing or normal.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularQuadrature {
    nodes: Vec<f64>,
    sin: Vec<f64>,
    cos: Vec<f64>,
    weight: f64,
    outgoing_flux: f64,
}

impl AngularQuadrature {
    pub fn new(n_angles: usize) -> Result<Self> {
        if n_angles < 8 || n_angles % 2 != 0 {
            return Err(Error::InvalidParameter("n_angles must be even and at least 8"));
        }
        let weight = 2.0 * PI / n_angles as f64;
        let nodes: Vec<f64> = (0..n_angles).map(|k| -PI + (k as f64 + 0.5) * weight).collect();
        let sin: Vec<f64> = nodes.iter().map(|&p| math::sin(p)).collect();
        let cos: Vec<f64> = nodes.iter().map(|&p| math::cos(p)).collect();
        if sin.iter().chain(&cos).any(|v| v.abs() < 1e-12) {
            return Err(Error::InvalidParameter("angular node on a grazing or normal direction"));
        }
        let outgoing_flux = sin.iter().filter(|s| **s < 0.0).map(|s| -s * weight).sum();
        Ok(Self { nodes, sin, cos, weight, outgoing_flux })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn sines(&self) -> &[f64] {
        &self.sin
    }
    pub fn cosines(&self) -> &[f64] {
        &self.cos
    }
    /// Uniform weight `2 pi / n`.
    pub fn weight(&self) -> f64 {
        self.weight
    }
    /// Smallest `|sin|` over the nodes.
    pub fn min_abs_sin(&self) -> f64 {
        self.sin.iter().fold(f64::INFINITY, |m, s| m.min(s.abs()))
    }

    /// Tolerance for identities that hold up to the angular rule: `5 (2 pi / n)^2`.
    pub fn invariant_tolerance(&self) -> f64 {
        5.0 * self.weight * self.weight
    }

    fn check(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: f.len() });
        }
        Ok(())
    }

    /// `(1/2pi) sum w_i f_i`.
    pub fn angular_average(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        Ok(self.average_unchecked(f))
    }

    #[inline]
    pub(crate) fn average_unchecked(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() / self.len() as f64
    }

    /// `sum w_i f_i g_i`, the discrete `<f, g>`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        Ok(f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * self.weight)
    }

    /// `sum w_i f_i sin(phi_i)`.
    pub fn flux(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.sin).map(|(a, s)| a * s).sum::<f64>() * self.weight
    }

    /// The diffusive-reflection moment `-1/2 int_{sin<0} f sin`, with the
    /// discrete outgoing flux of a unit field normalised to 1.
    pub fn half_moment(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        Ok(self.half_moment_unchecked(f))
    }

    pub(crate) fn half_moment_unchecked(&self, f: &[f64]) -> f64 {
        let s: f64 = f
            .iter()
            .zip(&self.sin)
            .filter(|(_, s)| **s < 0.0)
            .map(|(a, s)| -a * s)
            .sum();
        s * self.weight / self.outgoing_flux
    }

    /// Weights `c_i` with `half_moment(f) = sum c_i f_i`.
    pub(crate) fn half_moment_weights(&self) -> Vec<f64> {
        self.sin
            .iter()
            .map(|s| if *s < 0.0 { -s * self.weight / self.outgoing_flux } else { 0.0 })
            .collect()
    }

    /// Index of the node mirrored by `phi -> -phi`.
    pub fn reflected(&self, i: usize) -> usize {
        self.len() - 1 - i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages() {
        let q = AngularQuadrature::new(64).unwrap();
        assert!((q.angular_average(&alloc::vec![1.0; 64]).unwrap() - 1.0).abs() < 1e-15);
        let s: Vec<f64> = q.sines().to_vec();
        assert!(q.angular_average(&s).unwrap().abs() < 1e-15);
        let s2: Vec<f64> = s.iter().map(|v| v * v).collect();
        assert!((q.angular_average(&s2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sin_squared_is_exact_on_small_rules() {
        let q = AngularQuadrature::new(8).unwrap();
        let s2: Vec<f64> = q.sines().iter().map(|v| v * v).collect();
        assert!((q.angular_average(&s2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn half_moment_examples() {
        let q = AngularQuadrature::new(64).unwrap();
        assert!((q.half_moment(&alloc::vec![2.5; 64]).unwrap() - 2.5).abs() < 1e-14);
        let s = q.sines().to_vec();
        let v = q.half_moment(&s).unwrap();
        assert!((v + PI / 4.0).abs() < q.invariant_tolerance(), "{v}");
        let c3: Vec<f64> = q.nodes().iter().map(|p| math::cos(3.0 * p)).collect();
        assert!(q.half_moment(&c3).unwrap().abs() < 1e-14);
    }

    #[test]
    fn rejects_odd_or_small_counts() {
        assert!(AngularQuadrature::new(7).is_err());
        assert!(AngularQuadrature::new(6).is_err());
        assert!(AngularQuadrature::new(9).is_err());
    }

    #[test]
    fn length_mismatch() {
        let q = AngularQuadrature::new(8).unwrap();
        assert!(matches!(q.angular_average(&[1.0; 5]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn reflection_pairs() {
        let q = AngularQuadrature::new(16).unwrap();
        for i in 0..16 {
            let j = q.reflected(i);
            assert!((q.nodes()[i] + q.nodes()[j]).abs() < 1e-14);
        }
    }
}
