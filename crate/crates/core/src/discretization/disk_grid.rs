use alloc::vec::Vec;

use super::angular::AngularQuadrature;
use super::radial::graded_nodes;
use crate::error::{Error, Result};
use crate::math;

/// Polar grid on the unit disk with a velocity quadrature at every node.
///
/// Radii increase towards the wall and end exactly at `r = 1`; they are
/// geometrically refined there. The centre itself is not a node.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    radii: Vec<f64>,
    n_theta: usize,
    angles: AngularQuadrature,
}

impl DiskGrid {
    pub const DEFAULT_INNER_RADIUS: f64 = 0.02;

    pub fn graded(
        n_r: usize,
        n_theta: usize,
        n_angles: usize,
        wall_spacing: f64,
        ratio: f64,
    ) -> Result<Self> {
        let inner = Self::DEFAULT_INNER_RADIUS;
        if n_r < 4 {
            return Err(Error::InvalidParameter("disk grid needs at least 4 rings"));
        }
        if !(wall_spacing > 0.0) || wall_spacing * (n_r - 1) as f64 > 1.0 - inner {
            return Err(Error::InvalidParameter("wall spacing incompatible with ring count"));
        }
        if !(ratio >= 1.0) {
            return Err(Error::InvalidParameter("grading ratio must be at least 1"));
        }
        let depth = graded_nodes(n_r, 1.0 - inner, ratio, wall_spacing);
        let mut radii: Vec<f64> = depth.iter().rev().map(|d| 1.0 - d).collect();
        radii[0] = inner;
        Self::new(radii, n_theta, AngularQuadrature::new(n_angles)?)
    }

    /// Rings graded towards the wall with first spacing `2e-3 ε`, ratio 1.15,
    /// and at most 0.02 between rings in the interior.
    pub fn layer_adapted(epsilon: f64, n_theta: usize, n_angles: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter("epsilon must lie in (0, 1]"));
        }
        let first = 2e-3 * epsilon;
        let span = 1.0 - Self::DEFAULT_INNER_RADIUS;
        let mut n = 8;
        loop {
            let depth = graded_nodes(n, span, 1.15, first);
            let widest = depth.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            if widest <= 0.02 {
                return Self::graded(n, n_theta, n_angles, first, 1.15);
            }
            n += 1;
        }
    }

    pub fn new(radii: Vec<f64>, n_theta: usize, angles: AngularQuadrature) -> Result<Self> {
        if radii.len() < 4 {
            return Err(Error::InvalidParameter("disk grid needs at least 4 rings"));
        }
        if radii[0] <= 0.0 || *radii.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter("radii must lie in (0, 1] and end at 1"));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("radii must be strictly increasing"));
        }
        if n_theta == 0 {
            return Err(Error::InvalidParameter("n_theta must be positive"));
        }
        Ok(Self { radii, n_theta, angles })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
    pub fn n_r(&self) -> usize {
        self.radii.len()
    }
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
    pub fn angles(&self) -> &AngularQuadrature {
        &self.angles
    }
    pub fn n_angles(&self) -> usize {
        self.angles.len()
    }
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * core::f64::consts::PI * j as f64 / self.n_theta as f64
    }
    pub fn wall_spacing(&self) -> f64 {
        let n = self.radii.len();
        self.radii[n - 1] - self.radii[n - 2]
    }
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        let (r, t) = (self.radii[i], self.theta(j));
        (r * math::cos(t), r * math::sin(t))
    }
    /// Number of spatial nodes.
    pub fn n_space(&self) -> usize {
        self.radii.len() * self.n_theta
    }
    pub fn space_index(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    /// Area weights of the spatial nodes; the central disc goes to the
    /// innermost ring.
    pub fn area_weights(&self) -> Vec<f64> {
        let n = self.radii.len();
        let dtheta = 2.0 * core::f64::consts::PI / self.n_theta as f64;
        let mut w = Vec::with_capacity(self.n_space());
        for i in 0..n {
            let lo = if i == 0 { 0.0 } else { 0.5 * (self.radii[i - 1] + self.radii[i]) };
            let hi = if i + 1 == n { 1.0 } else { 0.5 * (self.radii[i] + self.radii[i + 1]) };
            let ring = 0.5 * (hi * hi - lo * lo) * dtheta;
            for _ in 0..self.n_theta {
                w.push(ring);
            }
        }
        w
    }
}

/// Periodic cubic Lagrange stencil at `theta` on `n` uniform nodes
/// `2πj/n`; fewer than four nodes are treated as constant data.
#[inline]
pub(crate) fn periodic_cubic(theta: f64, n: usize) -> ([usize; 4], [f64; 4]) {
    if n < 4 {
        return ([0; 4], [1.0, 0.0, 0.0, 0.0]);
    }
    let t = theta / (2.0 * core::f64::consts::PI) * n as f64;
    let base = math::floor(t);
    let s = t - base;
    let j0 = (base as i64).rem_euclid(n as i64) as usize;
    let idx = [(j0 + n - 1) % n, j0, (j0 + 1) % n, (j0 + 2) % n];
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    (idx, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_at_wall_and_no_duplicates() {
        let g = DiskGrid::graded(80, 16, 16, 1e-3, 1.15).unwrap();
        assert_eq!(*g.radii().last().unwrap(), 1.0);
        assert!(g.radii().windows(2).all(|w| w[1] > w[0]));
        assert!((g.wall_spacing() - 1e-3).abs() < 1e-12);
        let area: f64 = g.area_weights().iter().sum();
        assert!((area - core::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_radii() {
        let q = AngularQuadrature::new(8).unwrap();
        assert!(DiskGrid::new(alloc::vec![0.1, 0.5, 0.4, 1.0], 4, q.clone()).is_err());
        assert!(DiskGrid::new(alloc::vec![0.1, 0.2, 0.4, 0.9], 4, q).is_err());
    }
}
