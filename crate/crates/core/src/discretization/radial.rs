use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Nodes per interpolation stencil.
pub const STENCIL_POINTS: usize = 8;

/// Lagrange interpolation stencil on consecutive nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub start: usize,
    pub weights: [f64; STENCIL_POINTS],
}

impl Stencil {
    pub fn apply(&self, values: &[f64]) -> f64 {
        let v = &values[self.start..self.start + STENCIL_POINTS];
        v.iter().zip(&self.weights).map(|(a, b)| a * b).sum()
    }
}

/// Nodes on `[0, L]`: geometric spacing from the wall, then uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    // 1 / prod_{j != i} (p_i - p_j) for every stencil start
    inverse_denominators: Vec<[f64; STENCIL_POINTS]>,
}

/// `1 / prod_{j != i} (p_i - p_j)` for every window of `STENCIL_POINTS` nodes.
pub(crate) fn inverse_denominators(nodes: &[f64]) -> Vec<[f64; STENCIL_POINTS]> {
    (0..=nodes.len() - STENCIL_POINTS)
        .map(|start| {
            let p = &nodes[start..start + STENCIL_POINTS];
            let mut inv = [0.0; STENCIL_POINTS];
            for i in 0..STENCIL_POINTS {
                let mut d = 1.0;
                for j in 0..STENCIL_POINTS {
                    if j != i {
                        d *= p[i] - p[j];
                    }
                }
                inv[i] = 1.0 / d;
            }
            inv
        })
        .collect()
}

/// Lagrange weights at `x` on the window `p`.
#[inline]
pub(crate) fn stencil_weights(p: &[f64], inv: &[f64; STENCIL_POINTS], x: f64) -> [f64; STENCIL_POINTS] {
    const N: usize = STENCIL_POINTS;
    let mut d = [0.0; N];
    for j in 0..N {
        d[j] = x - p[j];
    }
    // prefix and suffix products of the differences
    let mut pre = [1.0; N + 1];
    let mut suf = [1.0; N + 1];
    for j in 0..N {
        pre[j + 1] = pre[j] * d[j];
        suf[N - 1 - j] = suf[N - j] * d[N - 1 - j];
    }
    let mut weights = [0.0; N];
    for i in 0..N {
        weights[i] = pre[i] * suf[i + 1] * inv[i];
    }
    weights
}

pub(crate) fn graded_nodes(n: usize, length: f64, ratio: f64, first: f64) -> Vec<f64> {
    // spacings h0 r^k below the tail spacing, then a uniform tail
    let intervals = n - 1;
    let mut tail = length / intervals as f64;
    let mut graded = 0;
    for _ in 0..200 {
        let mut m = 0;
        let mut covered = 0.0;
        let mut h = first;
        while h < tail && m < intervals - 1 {
            covered += h;
            h *= ratio;
            m += 1;
        }
        let next = (length - covered) / (intervals - m) as f64;
        graded = m;
        let done = (next - tail).abs() <= 1e-15 * length;
        tail = next;
        if done {
            break;
        }
    }
    let mut nodes = Vec::with_capacity(n);
    let mut x = 0.0;
    nodes.push(0.0);
    let mut h = first;
    for _ in 0..graded {
        x += h;
        nodes.push(x);
        h *= ratio;
    }
    let covered = x;
    let rest = intervals - graded;
    for k in 1..=rest {
        nodes.push(covered + (length - covered) * k as f64 / rest as f64);
    }
    nodes
}

impl RadialGrid {
    pub const DEFAULT_POINTS: usize = 400;
    pub const DEFAULT_LENGTH: f64 = 30.0;
    pub const DEFAULT_RATIO: f64 = 1.15;
    pub const DEFAULT_FIRST_SPACING: f64 = 2e-3;

    pub fn graded(n_eta: usize, length: f64, ratio: f64, first_spacing: f64) -> Result<Self> {
        if n_eta < 8 {
            return Err(Error::InvalidParameter("radial grid needs at least 8 nodes"));
        }
        if !(length >= 25.0) {
            return Err(Error::InvalidParameter("slab length must be at least 25"));
        }
        if !(ratio >= 1.0) {
            return Err(Error::InvalidParameter("grading ratio must be at least 1"));
        }
        if !(first_spacing > 0.0 && first_spacing <= 1e-2) {
            return Err(Error::InvalidParameter("first spacing must lie in (0, 1e-2]"));
        }
        if first_spacing * (n_eta - 1) as f64 > length {
            return Err(Error::InvalidParameter("first spacing too large for the node count"));
        }
        Self::from_nodes(graded_nodes(n_eta, length, ratio, first_spacing))
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < STENCIL_POINTS || nodes[0] != 0.0 {
            return Err(Error::InvalidParameter("radial nodes must start at 0 with at least 8 nodes"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("radial nodes must be strictly increasing"));
        }
        if nodes[1] > 1e-2 + 1e-15 {
            return Err(Error::InvalidParameter("first spacing must not exceed 1e-2"));
        }
        let inverse_denominators = inverse_denominators(&nodes);
        Ok(Self { nodes, inverse_denominators })
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
    pub fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Cell index `k` with `nodes[k] <= eta <= nodes[k+1]` (clamped).
    pub fn locate(&self, eta: f64) -> usize {
        let n = self.nodes.len();
        if eta <= self.nodes[0] {
            return 0;
        }
        if eta >= self.nodes[n - 1] {
            return n - 2;
        }
        self.nodes.partition_point(|x| *x <= eta).saturating_sub(1).min(n - 2)
    }

    /// Width of the cell containing `eta`.
    pub fn spacing_at(&self, eta: f64) -> f64 {
        let k = self.locate(eta);
        self.nodes[k + 1] - self.nodes[k]
    }

    /// Lagrange stencil for the value at `eta`.
    pub fn stencil(&self, eta: f64) -> Stencil {
        self.stencil_in_cell(self.locate(eta), eta)
    }

    /// Stencil for `eta` known to lie in cell `cell`.
    #[inline]
    pub fn stencil_in_cell(&self, cell: usize, eta: f64) -> Stencil {
        let n = self.nodes.len();
        let start = cell.saturating_sub(STENCIL_POINTS / 2 - 1).min(n - STENCIL_POINTS);
        let weights = stencil_weights(&self.nodes[start..start + STENCIL_POINTS], &self.inverse_denominators[start], eta);
        Stencil { start, weights }
    }

    /// Linear interpolation of nodal values.
    pub fn interpolate_linear(&self, values: &[f64], eta: f64) -> f64 {
        let k = self.locate(eta);
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let t = ((eta - a) / (b - a)).clamp(0.0, 1.0);
        values[k] * (1.0 - t) + values[k + 1] * t
    }

    /// Trapezoid weights for integrals over `[0, L]`.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut w = alloc::vec![0.0; n];
        for k in 0..n - 1 {
            let h = self.nodes[k + 1] - self.nodes[k];
            w[k] += 0.5 * h;
            w[k + 1] += 0.5 * h;
        }
        w
    }

    /// Indices of nodes inside `[a, b]`.
    pub fn window(&self, a: f64, b: f64) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter(move |(_, x)| **x >= a && **x <= b).map(|(i, _)| i)
    }

    pub fn grading_ratio_estimate(&self) -> f64 {
        let h0 = self.nodes[1] - self.nodes[0];
        let h1 = self.nodes[2] - self.nodes[1];
        h1 / h0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_invariants() {
        let g = RadialGrid::graded(400, 30.0, 1.15, 2e-3).unwrap();
        assert_eq!(g.len(), 400);
        assert_eq!(g.nodes()[0], 0.0);
        assert!((g.length() - 30.0).abs() < 1e-12);
        assert!(g.nodes()[1] <= 1e-2);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        // grading never produces a spacing jump larger than the ratio
        let h: Vec<f64> = g.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        for w in h.windows(2) {
            assert!(w[1] / w[0] < 1.15 + 1e-9, "{:?}", w);
        }
    }

    #[test]
    fn stencil_reproduces_cubics() {
        let g = RadialGrid::graded(60, 25.0, 1.15, 1e-2).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|x| 1.0 + x - 0.3 * x * x + 0.01 * x * x * x).collect();
        for eta in [0.0, 0.004, 0.5, 3.3, 17.0, 25.0] {
            let s = g.stencil(eta);
            let exact = 1.0 + eta - 0.3 * eta * eta + 0.01 * eta * eta * eta;
            assert!((s.apply(&vals) - exact).abs() < 1e-9 * (1.0 + exact.abs()));
            assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_short_slab_and_coarse_wall() {
        assert!(RadialGrid::graded(400, 20.0, 1.15, 2e-3).is_err());
        assert!(RadialGrid::graded(400, 30.0, 1.15, 0.05).is_err());
    }
}
