use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{build_composite, Composite, ExpansionSpec, Variant};
use crate::disk::DiskField;
use crate::error::{Error, Result};
use crate::math;

/// Depth of the layer zoom, in units of `η`.
pub const LAYER_ZOOM_DEPTH: f64 = 10.0;

/// Grazing samples: depths `η` and local angles `φ`, both as multiples
/// of `ε`; every angle is also taken as `π - φ`.
const GRAZING_DEPTHS: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 8.0];
const GRAZING_ANGLES: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// One line of an `ε` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub variant: Variant,
    pub order: u8,
    pub sup_error: f64,
    pub l2_error: f64,
}

/// Composite against reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub epsilon: f64,
    pub variant: Variant,
    pub order: u8,
    /// Composite at the reference nodes, same layout as the kinetic values.
    pub composite: Vec<f64>,
    /// `reference - composite` at the same nodes.
    pub remainder: Vec<f64>,
    /// `sup |composite + remainder - reference|`.
    pub remainder_identity: f64,
    /// Over the nodes and the off-grid grazing samples.
    pub sup_error: f64,
    /// Nodes only.
    pub node_sup_error: f64,
    /// Area and angle weighted.
    pub l2_error: f64,
    /// `(η, sup error on that ring)` for rings with `η ≤ 10`.
    pub layer_zoom: Vec<(f64, f64)>,
    /// `(η, φ, reference, composite)` near grazing.
    pub grazing: Vec<(f64, f64, f64, f64)>,
    pub grazing_sup_error: f64,
}

impl ExpansionReport {
    pub fn row(&self) -> SweepRow {
        SweepRow {
            epsilon: self.epsilon,
            variant: self.variant,
            order: self.order,
            sup_error: self.sup_error,
            l2_error: self.l2_error,
        }
    }
}

pub fn error_report(spec: &ExpansionSpec, reference: &DiskField) -> Result<ExpansionReport> {
    let composite = build_composite(spec)?;
    compare(&composite, reference)
}

pub fn compare(composite: &Composite, reference: &DiskField) -> Result<ExpansionReport> {
    let eps = composite.epsilon();
    if (reference.epsilon() - eps).abs() > 1e-14 * eps {
        return Err(Error::InvalidParameter("composite and reference have different epsilon"));
    }
    if reference.problem().kind != composite.spec().kind {
        return Err(Error::InvalidParameter("composite and reference have different boundary kinds"));
    }
    let g = reference.grid();
    let (n_r, n_t, n_a) = (g.n_r(), g.n_theta(), g.n_angles());
    let phis = g.angles().nodes();
    let area = g.area_weights();
    let mut values = Vec::with_capacity(n_r * n_t * n_a);
    let mut remainder = Vec::with_capacity(n_r * n_t * n_a);
    let mut sup: f64 = 0.0;
    let mut l2 = 0.0;
    let mut zoom = Vec::new();
    for i in 0..n_r {
        let eta = (1.0 - g.radii()[i]) / eps;
        let mut ring: f64 = 0.0;
        for j in 0..n_t {
            let (x, y) = g.point(i, j);
            for (k, &phi) in phis.iter().enumerate() {
                let c = composite.eval(x, y, phi);
                let r = reference.u(i, j, k) - c;
                values.push(c);
                remainder.push(r);
                ring = ring.max(r.abs());
                l2 += area[g.space_index(i, j)] * g.angles().weight() * r * r;
            }
        }
        sup = sup.max(ring);
        if eta <= LAYER_ZOOM_DEPTH {
            zoom.push((eta, ring));
        }
    }
    zoom.reverse();
    let identity = values
        .iter()
        .zip(&remainder)
        .zip(reference.u_values())
        .fold(0.0_f64, |m, ((c, r), u)| m.max((c + r - u).abs()));

    let mut grazing = Vec::new();
    let mut graze_sup: f64 = 0.0;
    for j in 0..n_t {
        let theta = g.theta(j);
        for &d in &GRAZING_DEPTHS {
            for &a in &GRAZING_ANGLES {
                for phi in [a * eps, PI - a * eps] {
                    let eta = d * eps;
                    let u = reference.eval_layer(eta, theta, phi)?;
                    let c = composite.eval_layer(eta, theta, phi);
                    graze_sup = graze_sup.max((u - c).abs());
                    grazing.push((eta, phi, u, c));
                }
            }
        }
    }
    let variant = composite.spec().variant;
    let order = composite.spec().order;
    Ok(ExpansionReport {
        epsilon: eps,
        variant,
        order,
        composite: values,
        remainder,
        remainder_identity: identity,
        sup_error: sup.max(graze_sup),
        node_sup_error: sup,
        l2_error: math::sqrt(l2),
        layer_zoom: zoom,
        grazing,
        grazing_sup_error: graze_sup,
    })
}

/// Least-squares slope of `ln(error)` against `ln(ε)`; `None` with fewer
/// than two usable rows.
pub fn loglog_slope(rows: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.epsilon > 0.0 && r.sup_error > 0.0)
        .map(|r| (math::ln(r.epsilon), math::ln(r.sup_error)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}
