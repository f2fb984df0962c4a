//! Boundary profiles `h(φ)` on the incoming half-range `0 < φ < π`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

/// A boundary datum as a function of the layer angle.
#[derive(Clone)]
pub enum BoundaryProfile {
    Const(f64),
    /// `cos(kφ) + shift`
    Cos { k: u32, shift: f64 },
    /// Piecewise linear through `(angle, value)` pairs covering `[0, π]`.
    Table(Arc<[(f64, f64)]>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for BoundaryProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "Const({c})"),
            Self::Cos { k, shift } => write!(f, "Cos {{ k: {k}, shift: {shift} }}"),
            Self::Table(t) => write!(f, "Table({} rows)", t.len()),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl BoundaryProfile {
    pub fn constant(c: f64) -> Self {
        Self::Const(c)
    }

    pub fn cos(k: u32, shift: f64) -> Self {
        Self::Cos { k, shift }
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// Validates and stores a table; rows are sorted by angle.
    pub fn table(mut rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidParameter("boundary table needs at least two rows"));
        }
        if rows.iter().any(|(a, v)| !a.is_finite() || !v.is_finite()) {
            return Err(Error::NonFinite("boundary table"));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParameter("boundary table has repeated angles"));
        }
        let pi = core::f64::consts::PI;
        if rows[0].0 > 1e-9 || rows[rows.len() - 1].0 < pi - 1e-9 {
            return Err(Error::InvalidParameter("boundary table must cover [0, pi]"));
        }
        Ok(Self::Table(rows.into()))
    }

    pub fn eval(&self, phi: f64) -> f64 {
        match self {
            Self::Const(c) => *c,
            Self::Cos { k, shift } => math::cos(*k as f64 * phi) + shift,
            Self::Table(rows) => {
                let n = rows.len();
                if phi <= rows[0].0 {
                    return rows[0].1;
                }
                if phi >= rows[n - 1].0 {
                    return rows[n - 1].1;
                }
                let k = rows.partition_point(|r| r.0 <= phi) - 1;
                let (a0, v0) = rows[k];
                let (a1, v1) = rows[k + 1];
                v0 + (v1 - v0) * (phi - a0) / (a1 - a0)
            }
            Self::Custom(f) => f(phi),
        }
    }

    pub fn is_constant(&self) -> Option<f64> {
        match self {
            Self::Const(c) => Some(*c),
            Self::Cos { k: 0, shift } => Some(1.0 + shift),
            _ => None,
        }
    }

    /// Minimum and maximum over the incoming range, by dense sampling.
    pub fn incoming_range(&self) -> (f64, f64) {
        if let Some(c) = self.is_constant() {
            return (c, c);
        }
        let n = 4096;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=n {
            let v = self.eval(core::f64::consts::PI * i as f64 / n as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn sup_abs(&self) -> f64 {
        let (lo, hi) = self.incoming_range();
        lo.abs().max(hi.abs())
    }

    /// Shifts the profile by a constant.
    pub fn plus(&self, c: f64) -> Self {
        match self {
            Self::Const(a) => Self::Const(a + c),
            Self::Cos { k, shift } => Self::Cos { k: *k, shift: shift + c },
            other => {
                let inner = other.clone();
                Self::custom(move |phi| inner.eval(phi) + c)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cos_shift() {
        let g = BoundaryProfile::cos(1, 2.0);
        assert!((g.eval(0.0) - 3.0).abs() < 1e-15);
        assert!((g.eval(core::f64::consts::PI) - 1.0).abs() < 1e-15);
        let (lo, hi) = g.incoming_range();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn table_interpolates() {
        let t = BoundaryProfile::table(vec![(core::f64::consts::PI, 1.0), (0.0, 3.0)]).unwrap();
        assert!((t.eval(core::f64::consts::FRAC_PI_2) - 2.0).abs() < 1e-14);
        assert!(BoundaryProfile::table(vec![(0.5, 1.0), (3.2, 1.0)]).is_err());
    }

    #[test]
    fn shifted() {
        let g = BoundaryProfile::cos(3, 0.0).plus(1.0);
        assert!((g.eval(0.0) - 2.0).abs() < 1e-15);
    }
}
