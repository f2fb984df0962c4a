//! Backward characteristic tracing with exponentially weighted quadrature.

use crate::geometry::ForceField;
use crate::math;

const GL3_NODES: [f64; 3] = [0.112_701_665_379_258_31, 0.5, 0.887_298_334_620_741_7];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Quadrature for `∫_s^{s+Δ} e^{-σt} g(t) dt` on three Gauss nodes, rescaled
/// so the weights integrate constants exactly. Returns node offsets in
/// `[0, Δ]` and weights.
pub(crate) fn exp_gl3(s: f64, delta: f64, sigma: f64) -> ([f64; 3], [f64; 3]) {
    let mut t = [0.0; 3];
    let mut w = [0.0; 3];
    let decay = math::exp(-sigma * s);
    let mut sum = 0.0;
    for j in 0..3 {
        t[j] = GL3_NODES[j] * delta;
        w[j] = GL3_WEIGHTS[j] * delta * math::exp(-sigma * t[j]);
        sum += w[j];
    }
    let exact = -math::expm1(-sigma * delta) / sigma;
    let scale = if sum > 0.0 { decay * exact / sum } else { 0.0 };
    for wj in &mut w {
        *wj *= scale;
    }
    (t, w)
}

/// How a backward characteristic in the slab ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SlabEnd {
    /// Reached `η = 0` with incoming angle `phi`; `weight` multiplies `h(phi)`.
    Wall { phi: f64, weight: f64 },
    /// Optical depth exhausted in `cell`; `weight` multiplies the average at `eta`.
    Truncated { cell: usize, eta: f64, weight: f64 },
}

/// Traces characteristics of `sinφ ∂η + F cosφ ∂φ + σ` on `[0, L]` with
/// specular reflection at `L`. Quadrature pieces never straddle a node of
/// `nodes`, so piecewise interpolants are integrated without kinks.
pub(crate) struct SlabTracer<'a> {
    pub field: &'a ForceField,
    pub nodes: &'a [f64],
    pub sigma: f64,
    pub max_step: f64,
    pub depth_cap: f64,
}

#[derive(Clone, Copy)]
struct State {
    eta: f64,
    phi: f64,
}

/// Cubic Hermite segment in the local parameter `u ∈ [0, 1]`.
struct Segment {
    e: [f64; 4],
    p: [f64; 4],
}

impl Segment {
    fn new(y0: State, y1: State, d0: (f64, f64), d1: (f64, f64), h: f64) -> Self {
        // power-basis coefficients of the Hermite interpolant
        let coef = |a: f64, b: f64, da: f64, db: f64| {
            [a, da, 3.0 * (b - a) - 2.0 * da - db, 2.0 * (a - b) + da + db]
        };
        Self {
            e: coef(y0.eta, y1.eta, h * d0.0, h * d1.0),
            p: coef(y0.phi, y1.phi, h * d0.1, h * d1.1),
        }
    }
    #[inline]
    fn eta(&self, u: f64) -> f64 {
        self.e[0] + u * (self.e[1] + u * (self.e[2] + u * self.e[3]))
    }
    #[inline]
    fn eta_du(&self, u: f64) -> f64 {
        self.e[1] + u * (2.0 * self.e[2] + u * 3.0 * self.e[3])
    }
    #[inline]
    fn phi(&self, u: f64) -> f64 {
        self.p[0] + u * (self.p[1] + u * (self.p[2] + u * self.p[3]))
    }
    /// `u ∈ (a, b)` with `eta(u) = target`, the bracket being monotone.
    fn solve(&self, a: f64, b: f64, target: f64) -> f64 {
        let (mut lo, mut hi) = (a, b);
        let inc = self.eta(b) > self.eta(a);
        let mut u = a + (b - a) * (target - self.eta(a)) / (self.eta(b) - self.eta(a));
        if !(u > lo && u < hi) {
            u = 0.5 * (lo + hi);
        }
        for _ in 0..50 {
            let g = self.eta(u) - target;
            if g == 0.0 {
                return u;
            }
            if (g > 0.0) == inc {
                hi = u;
            } else {
                lo = u;
            }
            let d = self.eta_du(u);
            let mut next = u - g / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() <= 1e-15 {
                return next;
            }
            u = next;
        }
        u
    }
}

/// Cell `k` with `nodes[k] <= eta <= nodes[k+1]`.
#[inline]
pub(crate) fn locate(nodes: &[f64], eta: f64) -> usize {
    let n = nodes.len();
    nodes.partition_point(|x| *x <= eta).saturating_sub(1).min(n - 2)
}

impl SlabTracer<'_> {
    fn length(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    #[inline]
    fn rhs(&self, y: State) -> (f64, f64) {
        let f = self.field.force(y.eta);
        if f == 0.0 {
            return (-math::sin(y.phi), 0.0);
        }
        (-math::sin(y.phi), -f * math::cos(y.phi))
    }

    fn step(&self, y: State, h: f64) -> State {
        if self.field.is_free() || h < y.eta - self.field.support_end() {
            return State { eta: y.eta - h * math::sin(y.phi), phi: y.phi };
        }
        let k1 = self.rhs(y);
        let k2 = self.rhs(State { eta: y.eta + 0.5 * h * k1.0, phi: y.phi + 0.5 * h * k1.1 });
        let k3 = self.rhs(State { eta: y.eta + 0.5 * h * k2.0, phi: y.phi + 0.5 * h * k2.1 });
        let k4 = self.rhs(State { eta: y.eta + h * k3.0, phi: y.phi + h * k3.1 });
        State {
            eta: y.eta + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            phi: y.phi + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        }
    }

    /// Step length landing on `eta = target` inside `(0, h)`.
    fn landing(&self, y: State, h: f64, target: f64) -> (f64, State) {
        let (mut lo, mut hi) = (0.0, h);
        let f0 = y.eta - target;
        let f1 = self.step(y, h).eta - target;
        let mut d = (h * f0 / (f0 - f1)).clamp(0.0, h);
        let mut z = self.step(y, d);
        for _ in 0..60 {
            let g = z.eta - target;
            if g.abs() <= 1e-14 * (1.0 + target) {
                break;
            }
            if (g > 0.0) == (f0 > 0.0) {
                lo = d;
            } else {
                hi = d;
            }
            let slope = -math::sin(z.phi);
            let mut next = if slope != 0.0 { d - g / slope } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            d = next;
            z = self.step(y, d);
            if hi - lo <= 1e-15 * h {
                break;
            }
        }
        z.eta = target;
        (d, z)
    }

    /// Emits `(cell, eta, phi, weight)` for every quadrature node of
    /// `∫ e^{-σs} g` along the backward characteristic.
    pub(crate) fn trace<S: FnMut(usize, f64, f64, f64)>(&self, eta: f64, phi: f64, mut sink: S) -> SlabEnd {
        let length = self.length();
        let mut y = State { eta: eta.clamp(0.0, length), phi };
        let mut s = 0.0;
        let mut guard = 0usize;
        loop {
            let sn = math::sin(y.phi);
            if y.eta <= 0.0 && sn > 0.0 {
                return SlabEnd::Wall { phi: wall_angle(y.phi), weight: math::exp(-self.sigma * s) };
            }
            if y.eta >= length && sn < 0.0 {
                y.phi = -y.phi;
                continue;
            }
            if s >= self.depth_cap {
                let cell = locate(self.nodes, y.eta);
                return SlabEnd::Truncated { cell, eta: y.eta, weight: math::exp(-self.sigma * s) };
            }
            guard += 1;
            let mut h = self.max_step.min(self.depth_cap - s);
            let d0 = self.rhs(y);
            let mut y1 = self.step(y, h);
            if y1.eta < 0.0 && y.eta <= 0.0 {
                // leaves the wall and turns back within one step
                while h > 1e-14 && y1.eta < 0.0 {
                    h *= 0.5;
                    y1 = self.step(y, h);
                }
                y1.eta = y1.eta.max(0.0);
            } else if y1.eta < 0.0 {
                let (d, z) = self.landing(y, h, 0.0);
                h = d;
                y1 = z;
            } else if y1.eta > length {
                let (d, z) = self.landing(y, h, length);
                h = d;
                y1 = z;
            }
            if h > 0.0 {
                let d1 = self.rhs(y1);
                self.emit(&Segment::new(y, y1, d0, d1, h), s, h, &mut sink);
            } else if guard > 8 {
                // stuck on a boundary with a grazing angle
                if y.eta < 0.5 * length {
                    return SlabEnd::Wall { phi: wall_angle(y.phi.abs()), weight: math::exp(-self.sigma * s) };
                }
                y1.phi = -y.phi;
            }
            s += h;
            y = y1;
        }
    }

    fn emit<S: FnMut(usize, f64, f64, f64)>(&self, seg: &Segment, s: f64, h: f64, sink: &mut S) {
        // split at an interior extremum of eta(u)
        let mut cuts = [0.0, 1.0, 1.0];
        let mut ncut = 2;
        let (a, b, c) = (3.0 * seg.e[3], 2.0 * seg.e[2], seg.e[1]);
        let (da, db) = (seg.eta_du(0.0), seg.eta_du(1.0));
        if da * db < 0.0 {
            let u = if a.abs() < 1e-300 {
                -c / b
            } else {
                let disc = (b * b - 4.0 * a * c).max(0.0);
                let q = -0.5 * (b + if b >= 0.0 { math::sqrt(disc) } else { -math::sqrt(disc) });
                let r1 = q / a;
                let r2 = if q != 0.0 { c / q } else { r1 };
                if r1 > 0.0 && r1 < 1.0 { r1 } else { r2 }
            };
            if u > 0.0 && u < 1.0 {
                cuts = [0.0, u, 1.0];
                ncut = 3;
            }
        }
        for m in 0..ncut - 1 {
            let (ua, ub) = (cuts[m], cuts[m + 1]);
            let (ea, eb) = (seg.eta(ua).clamp(0.0, self.length()), seg.eta(ub).clamp(0.0, self.length()));
            let rising = eb > ea;
            // walk cells from ea towards eb
            let mut cur = if rising {
                locate(self.nodes, ea)
            } else {
                let c0 = locate(self.nodes, ea);
                if c0 > 0 && ea == self.nodes[c0] { c0 - 1 } else { c0 }
            };
            let mut u0 = ua;
            loop {
                let next_node = if rising { self.nodes[cur + 1] } else { self.nodes[cur] };
                let done = if rising { next_node >= eb } else { next_node <= eb };
                let u1 = if done { ub } else { seg.solve(u0, ub, next_node) };
                if u1 > u0 {
                    self.piece(seg, s, h, u0, u1, cur, sink);
                }
                if done {
                    break;
                }
                u0 = u1;
                if rising {
                    if cur + 2 >= self.nodes.len() {
                        break;
                    }
                    cur += 1;
                } else {
                    if cur == 0 {
                        break;
                    }
                    cur -= 1;
                }
            }
        }
    }

    #[inline]
    fn piece<S: FnMut(usize, f64, f64, f64)>(
        &self,
        seg: &Segment,
        s: f64,
        h: f64,
        u0: f64,
        u1: f64,
        cell: usize,
        sink: &mut S,
    ) {
        let (t, w) = exp_gl3(s + u0 * h, (u1 - u0) * h, self.sigma);
        let len = self.length();
        for j in 0..3 {
            let u = u0 + t[j] / h;
            let e = seg.eta(u).clamp(self.nodes[cell], self.nodes[cell + 1]).min(len);
            sink(cell, e, seg.phi(u), w[j]);
        }
    }
}

/// Representative of an incoming angle in `[0, π]`.
fn wall_angle(phi: f64) -> f64 {
    let tau = core::f64::consts::TAU;
    (phi - tau * math::floor(phi / tau)).clamp(0.0, core::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn nodes() -> Vec<f64> {
        (0..=600).map(|i| i as f64 * 0.05).collect()
    }

    fn tracer<'a>(field: &'a ForceField, nodes: &'a [f64]) -> SlabTracer<'a> {
        SlabTracer { field, nodes, sigma: 1.0, max_step: 0.25, depth_cap: 36.0 }
    }

    #[test]
    fn weights_conserve_mass() {
        let field = ForceField::geometric(0.1).unwrap();
        let n = nodes();
        let t = tracer(&field, &n);
        for (eta, phi) in [(2.0, 0.7), (5.0, -1.2), (29.0, -0.1), (0.0, 1.0), (12.0, 3.0), (30.0, -1.0), (0.0, -0.3)] {
            let mut total = 0.0;
            let end = t.trace(eta, phi, |cell, e, _, w| {
                assert!(e >= n[cell] && e <= n[cell + 1]);
                total += w
            });
            total += match end {
                SlabEnd::Wall { weight, .. } | SlabEnd::Truncated { weight, .. } => weight,
            };
            assert!((total - 1.0).abs() < 1e-13, "{eta} {phi} {total}");
        }
    }

    #[test]
    fn free_streaming_depth() {
        let field = ForceField::none(0.1).unwrap();
        let n = nodes();
        let t = tracer(&field, &n);
        let end = t.trace(2.0, core::f64::consts::FRAC_PI_2, |_, _, _, _| {});
        match end {
            SlabEnd::Wall { phi, weight } => {
                assert!((phi - core::f64::consts::FRAC_PI_2).abs() < 1e-14);
                assert!((weight - math::exp(-2.0)).abs() < 1e-13);
            }
            _ => panic!("expected wall"),
        }
    }

    #[test]
    fn wall_angles_are_incoming_representatives() {
        let field = ForceField::geometric(0.1).unwrap();
        let n = nodes();
        let t = tracer(&field, &n);
        for k in 0..64 {
            let phi = -core::f64::consts::PI + (k as f64 + 0.5) * core::f64::consts::TAU / 64.0;
            for eta in [0.0, 0.4, 3.0, 9.0] {
                if let SlabEnd::Wall { phi: w, .. } = t.trace(eta, phi, |_, _, _, _| {}) {
                    assert!((0.0..=core::f64::consts::PI).contains(&w), "{eta} {phi} -> {w}");
                }
            }
        }
        assert_eq!(wall_angle(-5.0), -5.0 + core::f64::consts::TAU);
    }

    #[test]
    fn energy_is_conserved_along_trace() {
        let field = ForceField::geometric(0.1).unwrap();
        let n = nodes();
        let t = tracer(&field, &n);
        let (eta, phi) = (3.0, 0.6);
        let e0 = field.energy(eta, phi);
        let end = t.trace(eta, phi, |_, e, p, _| {
            assert!((field.energy(e, p) - e0).abs() < 1e-7);
        });
        if let SlabEnd::Wall { phi, .. } = end {
            assert!((math::cos(phi) - e0).abs() < 1e-9);
        }
    }
}
