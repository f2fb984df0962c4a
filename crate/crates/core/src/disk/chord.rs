//! Straight backward characteristics in the unit disk.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::discretization::radial::{inverse_denominators, stencil_weights};
use crate::discretization::{periodic_cubic, STENCIL_POINTS};
use crate::error::{Error, Result};
use crate::math;
use crate::path::exp_gl3;

const BOUNDARY_SLACK: f64 = 1e-12;

/// Backward exit time: the smallest `t >= 0` with `|x - ε t w| = 1`.
pub fn exit_time(x: [f64; 2], w: [f64; 2], epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    let q = x[0] * x[0] + x[1] * x[1];
    if !(q.is_finite() && math::sqrt(q) <= 1.0 + BOUNDARY_SLACK) {
        return Err(Error::Domain { what: "radius", value: math::sqrt(q) });
    }
    let ww = w[0] * w[0] + w[1] * w[1];
    if !((ww - 1.0).abs() < 1e-9) {
        return Err(Error::InvalidParameter("velocity must be a unit vector"));
    }
    Ok(exit_distance(x, w) / epsilon)
}

/// Distance from `x` back along `-w` to the circle; `x` inside, `|w| = 1`.
#[inline]
pub(crate) fn exit_distance(x: [f64; 2], w: [f64; 2]) -> f64 {
    let p = x[0] * w[0] + x[1] * w[1];
    let q = x[0] * x[0] + x[1] * x[1];
    let disc = (p * p - q + 1.0).max(0.0);
    let root = math::sqrt(disc);
    // the two roots are p -/+ root with product q - 1 <= 0
    if p >= 0.0 {
        p + root
    } else {
        let d = (1.0 - q).max(0.0) / (root - p);
        d.max(0.0)
    }
}

/// Velocity with local angle `phi` at polar angle `theta`:
/// `w = -sinφ e_r - cosφ e_θ`.
#[inline]
pub fn local_velocity(theta: f64, phi: f64) -> [f64; 2] {
    let a = theta - phi;
    [math::sin(a), -math::cos(a)]
}

/// Local angle of `w` at polar angle `theta`, in `[-pi, pi)`.
#[inline]
pub fn local_angle(theta: f64, w: [f64; 2]) -> f64 {
    let (c, s) = (math::cos(theta), math::sin(theta));
    let wn = w[0] * c + w[1] * s;
    let wt = -w[0] * s + w[1] * c;
    let phi = math::atan2(-wn, -wt);
    if phi >= PI {
        phi - 2.0 * PI
    } else {
        phi
    }
}

/// Interpolation of ring data on the polar grid.
///
/// Radially the stencil runs along the diameter through the point: rings on
/// the far side of the centre enter at polar angle `θ + π`, so no special
/// treatment of the origin is needed. In `θ` the rule is periodic cubic.
#[derive(Debug, Clone)]
pub(crate) struct PolarInterp {
    radii: Vec<f64>,
    rho: Vec<f64>,
    inv: Vec<[f64; STENCIL_POINTS]>,
    n_theta: usize,
}

/// Radial part of a stencil: entry `m` belongs to ring `ring[m]`, on the far
/// side of the centre when `far[m]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialStencil {
    pub ring: [usize; STENCIL_POINTS],
    pub far: [bool; STENCIL_POINTS],
    pub weights: [f64; STENCIL_POINTS],
}

impl PolarInterp {
    pub fn new(radii: &[f64], n_theta: usize) -> Self {
        let mut rho: Vec<f64> = radii.iter().rev().map(|r| -r).collect();
        rho.extend_from_slice(radii);
        let inv = inverse_denominators(&rho);
        Self { radii: radii.to_vec(), rho, inv, n_theta }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Cell index on the extended diameter grid for radius `r >= 0`.
    #[inline]
    pub fn cell(&self, r: f64) -> usize {
        let n = self.radii.len();
        if r < self.radii[0] {
            n - 1
        } else {
            let k = self.radii.partition_point(|x| *x <= r).saturating_sub(1).min(n - 2);
            n + k
        }
    }

    #[inline]
    pub fn radial(&self, cell: usize, r: f64) -> RadialStencil {
        let n = self.radii.len();
        let start = cell.saturating_sub(STENCIL_POINTS / 2 - 1).min(2 * n - STENCIL_POINTS);
        let weights = stencil_weights(&self.rho[start..start + STENCIL_POINTS], &self.inv[start], r);
        let mut ring = [0; STENCIL_POINTS];
        let mut far = [false; STENCIL_POINTS];
        for m in 0..STENCIL_POINTS {
            let k = start + m;
            if k < n {
                ring[m] = n - 1 - k;
                far[m] = true;
            } else {
                ring[m] = k - n;
            }
        }
        RadialStencil { ring, far, weights }
    }

    /// Periodic cubic stencil in `θ`: four node indices and weights.
    #[inline]
    pub fn angular(&self, theta: f64) -> ([usize; 4], [f64; 4]) {
        periodic_cubic(theta, self.n_theta)
    }

    /// Value at `(x, y)` of ring data `values[i * n_theta + j]`.
    pub fn eval(&self, values: &[f64], x: f64, y: f64) -> f64 {
        let r = math::hypot(x, y).min(1.0);
        let theta = math::atan2(y, x);
        let st = self.radial(self.cell(r), r);
        let near = self.angular(theta);
        let far = self.angular(theta + PI);
        let mut sum = 0.0;
        for m in 0..STENCIL_POINTS {
            let (idx, w) = if st.far[m] { &far } else { &near };
            let row = st.ring[m] * self.n_theta;
            let mut v = 0.0;
            for q in 0..4 {
                if w[q] != 0.0 {
                    v += w[q] * values[row + idx[q]];
                }
            }
            sum += st.weights[m] * v;
        }
        sum
    }
}

/// How a chord ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ChordEnd {
    /// Hit the circle at polar angle `theta` with incoming local angle `phi`;
    /// `weight = e^{-σ t_b}` multiplies the boundary value.
    Wall { theta: f64, phi: f64, weight: f64 },
    /// Optical depth exhausted; the tail went to the sink.
    Truncated,
}

/// Traces `x - ε t w` backwards and hands every quadrature node to a sink.
/// Pieces are split where the chord crosses a ring, so the radial
/// interpolant is smooth on each of them.
pub(crate) struct ChordTracer<'a> {
    pub interp: &'a PolarInterp,
    pub epsilon: f64,
    pub sigma: f64,
    pub max_step: f64,
    pub depth_cap: f64,
    breaks: Vec<f64>,
    clamped: usize,
}

impl<'a> ChordTracer<'a> {
    pub fn new(interp: &'a PolarInterp, epsilon: f64, sigma: f64, max_step: f64, depth_cap: f64) -> Self {
        Self { interp, epsilon, sigma, max_step, depth_cap, breaks: Vec::new(), clamped: 0 }
    }

    /// Number of quadrature points found outside the disk by rounding.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// The sink receives `(stencil, x, y, weight)`: the integral is
    /// `Σ weight · ū(x, y)`.
    pub fn trace<S: FnMut(&RadialStencil, f64, f64, f64)>(&mut self, x0: [f64; 2], w: [f64; 2], mut sink: S) -> ChordEnd {
        let eps = self.epsilon;
        let t_b = exit_distance(x0, w) / eps;
        let end = t_b.min(self.depth_cap / self.sigma);
        let p = x0[0] * w[0] + x0[1] * w[1];
        let q = x0[0] * x0[0] + x0[1] * x0[1];

        self.breaks.clear();
        self.breaks.push(0.0);
        self.breaks.push(end);
        let closest = p / eps;
        if closest > 0.0 && closest < end {
            self.breaks.push(closest);
        }
        for &r in self.interp.radii() {
            let disc = p * p - q + r * r;
            if disc <= 0.0 {
                continue;
            }
            let s = math::sqrt(disc);
            for t in [(p - s) / eps, (p + s) / eps] {
                if t > 0.0 && t < end {
                    self.breaks.push(t);
                }
            }
        }
        self.breaks.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

        for k in 0..self.breaks.len() - 1 {
            let (a, b) = (self.breaks[k], self.breaks[k + 1]);
            let len = b - a;
            if len <= 1e-14 * (1.0 + b) {
                continue;
            }
            let mid = 0.5 * (a + b);
            let (mx, my) = (x0[0] - eps * mid * w[0], x0[1] - eps * mid * w[1]);
            let cell = self.interp.cell(math::hypot(mx, my));
            let pieces = math::ceil(len / self.max_step).max(1.0) as usize;
            let h = len / pieces as f64;
            for m in 0..pieces {
                let s = a + m as f64 * h;
                let (t, wt) = exp_gl3(s, h, self.sigma);
                for j in 0..3 {
                    let tau = s + t[j];
                    let (x, y) = (x0[0] - eps * tau * w[0], x0[1] - eps * tau * w[1]);
                    let mut r = math::hypot(x, y);
                    if r > 1.0 {
                        if r > 1.0 + BOUNDARY_SLACK {
                            self.clamped += 1;
                        }
                        r = 1.0;
                    }
                    let st = self.interp.radial(cell, r);
                    sink(&st, x, y, wt[j]);
                }
            }
        }

        if end < t_b {
            // remaining depth is charged to the average at the cut
            let (x, y) = (x0[0] - eps * end * w[0], x0[1] - eps * end * w[1]);
            let r = math::hypot(x, y).min(1.0);
            let st = self.interp.radial(self.interp.cell(r), r);
            sink(&st, x, y, math::exp(-self.sigma * end) / self.sigma);
            return ChordEnd::Truncated;
        }
        let (xb, yb) = (x0[0] - eps * t_b * w[0], x0[1] - eps * t_b * w[1]);
        let theta = math::atan2(yb, xb);
        ChordEnd::Wall { theta, phi: local_angle(theta, w), weight: math::exp(-self.sigma * t_b) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_time_examples() {
        assert!((exit_time([0.0, 0.0], [0.6, 0.8], 0.1).unwrap() - 10.0).abs() < 1e-12);
        assert!((exit_time([0.5, 0.0], [1.0, 0.0], 0.1).unwrap() - 15.0).abs() < 1e-12);
        // on the circle, pointing inwards: already on the incoming boundary
        assert_eq!(exit_time([1.0, 0.0], [-1.0, 0.0], 0.1).unwrap(), 0.0);
        assert!(exit_time([1.1, 0.0], [1.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn exit_point_on_circle() {
        for (x, w) in [([0.3, -0.2], [0.6, 0.8]), ([0.99, 0.0], [-0.8, 0.6]), ([-0.1, 0.7], [0.0, -1.0])] {
            let t = exit_time(x, w, 0.05).unwrap();
            let (bx, by) = (x[0] - 0.05 * t * w[0], x[1] - 0.05 * t * w[1]);
            assert!((math::hypot(bx, by) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn local_frame_round_trip() {
        for theta in [0.0, 1.0, -2.5] {
            for phi in [-3.0, -0.4, 0.2, 2.9] {
                let w = local_velocity(theta, phi);
                assert!((local_angle(theta, w) - phi).abs() < 1e-13);
            }
        }
        // sinφ > 0 points inwards at the wall
        let w = local_velocity(0.0, 1.0);
        assert!(w[0] < 0.0);
    }

    #[test]
    fn interpolation_through_the_centre() {
        let radii: Vec<f64> = (1..=30).map(|k| k as f64 / 30.0).collect();
        let n_theta = 24;
        let ip = PolarInterp::new(&radii, n_theta);
        let f = |x: f64, y: f64| 1.0 + 0.5 * x - y * y + 0.3 * x * y;
        let mut v = Vec::new();
        for &r in &radii {
            for j in 0..n_theta {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                v.push(f(r * math::cos(t), r * math::sin(t)));
            }
        }
        for (x, y) in [(0.0, 0.0), (0.01, -0.02), (0.4, 0.3), (-0.7, 0.1)] {
            assert!((ip.eval(&v, x, y) - f(x, y)).abs() < 2e-3, "{x} {y}");
        }
    }

    #[test]
    fn weights_conserve_mass() {
        let radii: Vec<f64> = (1..=40).map(|k| 0.02 + 0.98 * (k - 1) as f64 / 39.0).collect();
        let ip = PolarInterp::new(&radii, 1);
        for (eps, sigma) in [(0.1, 1.0), (0.1, 1.01), (0.01, 1.0)] {
            let mut tr = ChordTracer::new(&ip, eps, sigma, 0.25, 36.0);
            let mut total = 0.0;
            let end = tr.trace([0.2, 0.1], local_velocity(0.0, 0.7), |st, _, _, w| {
                total += w * st.weights.iter().sum::<f64>();
            });
            let expected = match end {
                ChordEnd::Wall { weight, .. } => (1.0 - weight) / sigma,
                ChordEnd::Truncated => 1.0 / sigma,
            };
            assert!((total - expected).abs() < 1e-12, "{total} {expected}");
        }
    }
}
