//! Dense linear solves and Anderson mixing for fixed-point maps.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves `A x = b` for a row-major square `A` by partial-pivot LU.
pub fn solve_dense(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::LengthMismatch { expected: n * n, found: a.len() });
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let lu = m.lu();
    let x = lu
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::Singular { pivot: 0 })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dense solve"));
    }
    Ok(x.iter().copied().collect())
}

/// Complex counterpart of [`solve_dense`].
pub fn solve_dense_complex(a: &[Complex<f64>], b: &[Complex<f64>]) -> Result<Vec<Complex<f64>>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::LengthMismatch { expected: n * n, found: a.len() });
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let x = m
        .lu()
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::Singular { pivot: 0 })?;
    if x.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite("complex dense solve"));
    }
    Ok(x.iter().copied().collect())
}

/// Row-major matrix-vector product.
pub fn mat_vec(a: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    a.chunks_exact(n).map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Type-II Anderson mixing with a bounded history.
#[derive(Debug, Clone)]
pub struct Anderson {
    depth: usize,
    mixing: f64,
    prev: Option<(Vec<f64>, Vec<f64>)>,
    dx: VecDeque<Vec<f64>>,
    df: VecDeque<Vec<f64>>,
}

impl Anderson {
    pub fn new(depth: usize, mixing: f64) -> Self {
        Self { depth, mixing, prev: None, dx: VecDeque::new(), df: VecDeque::new() }
    }

    /// Next iterate from the current `x` and its image `g(x)`.
    pub fn step(&mut self, x: &[f64], gx: &[f64]) -> Vec<f64> {
        let f: Vec<f64> = gx.iter().zip(x).map(|(g, v)| g - v).collect();
        if let Some((px, pf)) = self.prev.take() {
            self.dx.push_back(x.iter().zip(&px).map(|(a, b)| a - b).collect());
            self.df.push_back(f.iter().zip(&pf).map(|(a, b)| a - b).collect());
            if self.dx.len() > self.depth {
                self.dx.pop_front();
                self.df.pop_front();
            }
        }
        self.prev = Some((x.to_vec(), f.clone()));
        let m = self.df.len();
        let mut next: Vec<f64> = x.iter().zip(&f).map(|(v, r)| v + self.mixing * r).collect();
        if m == 0 {
            return next;
        }
        let n = x.len();
        let dfm = DMatrix::from_fn(n, m, |i, j| self.df[j][i]);
        let rhs = DVector::from_column_slice(&f);
        let gamma = match dfm.svd(true, true).solve(&rhs, 1e-12) {
            Ok(g) => g,
            Err(_) => return next,
        };
        for j in 0..m {
            let gj = gamma[j];
            for i in 0..n {
                next[i] -= gj * (self.dx[j][i] + self.mixing * self.df[j][i]);
            }
        }
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solve() {
        let a = [4.0, 1.0, 2.0, 3.0];
        let x = solve_dense(&a, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(solve_dense(&[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn anderson_solves_linear_fixed_point() {
        // x = M x + c with spectral radius 0.99
        let m = [0.5, 0.49, 0.49, 0.5];
        let c = [1.0, -1.0];
        let mut acc = Anderson::new(5, 1.0);
        let mut x = alloc::vec![0.0, 0.0];
        for _ in 0..40 {
            let mut g = mat_vec(&m, &x);
            g[0] += c[0];
            g[1] += c[1];
            x = acc.step(&x, &g);
        }
        // exact solution solves (I - M) x = c
        assert!((0.5 * x[0] - 0.49 * x[1] - 1.0).abs() < 1e-9);
        assert!((-0.49 * x[0] + 0.5 * x[1] + 1.0).abs() < 1e-9);
    }
}
