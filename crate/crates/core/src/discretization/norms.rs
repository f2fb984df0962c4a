use crate::error::{Error, Result};
use crate::math;

/// Largest absolute value; zero for an empty slice.
pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Discrete `L²` norm with quadrature weights.
pub fn l2_norm(f: &[f64], weights: &[f64]) -> Result<f64> {
    if f.len() != weights.len() {
        return Err(Error::LengthMismatch { expected: weights.len(), found: f.len() });
    }
    Ok(math::sqrt(f.iter().zip(weights).map(|(v, w)| w * v * v).sum::<f64>()))
}
