//! Interior problems on the unit disk, solved mode by mode.
//!
//! Laplace with Dirichlet data uses `r^k`; the modified Helmholtz equation
//! `Δu - u = s` with Neumann data uses `I_k(r)` from its ascending series.

mod bessel;

pub use bessel::{bessel_i, BesselValues};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad::GaussLegendre;

/// Fourier coefficients of boundary data: `a₀/2 + Σ a_k cos kθ + b_k sin kθ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierBoundaryData {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FourierBoundaryData {
    /// `a[k]`, `b[k]` for `k = 0..=K`; `b[0]` is ignored.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Fourier coefficients"));
        }
        Ok(Self { a, b })
    }

    pub fn constant(c: f64) -> Self {
        Self { a: alloc::vec![2.0 * c], b: alloc::vec![0.0] }
    }

    /// Single mode `cos kθ`.
    pub fn cosine(k: usize) -> Self {
        let mut a = alloc::vec![0.0; k + 1];
        a[k] = 1.0;
        Self { a, b: alloc::vec![0.0; k + 1] }
    }

    /// Discrete Fourier coefficients of samples at `θ_j = 2πj/n`, up to `k_max`.
    pub fn from_samples(values: &[f64], k_max: usize) -> Result<Self> {
        let n = values.len();
        if n == 0 || 2 * k_max > n {
            return Err(Error::InvalidParameter("k_max must not exceed half the sample count"));
        }
        let mut a = alloc::vec![0.0; k_max + 1];
        let mut b = alloc::vec![0.0; k_max + 1];
        for k in 0..=k_max {
            let (mut sa, mut sb) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let t = 2.0 * core::f64::consts::PI * (k * j) as f64 / n as f64;
                sa += v * math::cos(t);
                sb += v * math::sin(t);
            }
            let nyquist = 2 * k == n;
            let scale = if nyquist { 1.0 } else { 2.0 } / n as f64;
            a[k] = sa * scale;
            b[k] = if k == 0 || nyquist { 0.0 } else { sb * scale };
        }
        Self::new(a, b)
    }

    pub fn k_max(&self) -> usize {
        self.a.len().saturating_sub(1)
    }
    pub fn a(&self) -> &[f64] {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = 0.5 * self.a.first().copied().unwrap_or(0.0);
        for k in 1..self.a.len() {
            let t = k as f64 * theta;
            v += self.a[k] * math::cos(t) + self.b[k] * math::sin(t);
        }
        v
    }
}

/// Which interior equation a solution solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorKind {
    Laplace,
    ModifiedHelmholtz,
}

/// Volume term of the modified Helmholtz problem.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum VolumeTerm {
    #[default]
    Zero,
    /// `s(r) = Σ s_j r^{2j}`
    RadialPolynomial(Vec<f64>),
    /// Angular-mode sources, not supported.
    Modal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    k: usize,
    cos: f64,
    sin: f64,
    // Helmholtz modes: 1 / I_k'(1); unused for Laplace
    scale: f64,
}

/// Modal solution on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSolution {
    kind: InteriorKind,
    modes: Vec<Mode>,
    /// Particular solution `Σ p_j r^{2j}` of the radial source.
    particular: Vec<f64>,
}

/// Radial factor and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Radial {
    v: f64,
    d: f64,
    dd: f64,
}

impl InteriorSolution {
    pub fn kind(&self) -> InteriorKind {
        self.kind
    }

    fn radial(&self, m: &Mode, r: f64) -> Radial {
        match self.kind {
            InteriorKind::Laplace => {
                let k = m.k as i32;
                let v = math::powi(r, k);
                let d = if k == 0 { 0.0 } else { k as f64 * math::powi(r, k - 1) };
                let dd = if k < 2 { 0.0 } else { (k * (k - 1)) as f64 * math::powi(r, k - 2) };
                Radial { v, d, dd }
            }
            InteriorKind::ModifiedHelmholtz => {
                let b = bessel_i(m.k, r);
                Radial { v: b.value * m.scale, d: b.derivative * m.scale, dd: b.second * m.scale }
            }
        }
    }

    fn particular(&self, r: f64) -> Radial {
        let mut out = Radial { v: 0.0, d: 0.0, dd: 0.0 };
        for (j, p) in self.particular.iter().enumerate() {
            let n = 2 * j as i32;
            out.v += p * math::powi(r, n);
            if n >= 1 {
                out.d += p * n as f64 * math::powi(r, n - 1);
            }
            if n >= 2 {
                out.dd += p * (n * (n - 1)) as f64 * math::powi(r, n - 2);
            }
        }
        out
    }

    /// `u(r, θ)`.
    pub fn value(&self, r: f64, theta: f64) -> f64 {
        let mut v = self.particular(r).v;
        for m in &self.modes {
            let t = m.k as f64 * theta;
            v += self.radial(m, r).v * (m.cos * math::cos(t) + m.sin * math::sin(t));
        }
        v
    }

    pub fn value_at(&self, x: f64, y: f64) -> f64 {
        self.value(math::hypot(x, y), math::atan2(y, x))
    }

    /// Cartesian gradient at `(x, y)`.
    pub fn gradient(&self, x: f64, y: f64) -> Result<[f64; 2]> {
        let r = math::hypot(x, y);
        if r > 1.0 + 1e-12 {
            return Err(Error::Domain { what: "radius", value: r });
        }
        if r < 1e-14 {
            // only the k = 1 modes have a gradient at the centre
            let mut g = [0.0, 0.0];
            for m in self.modes.iter().filter(|m| m.k == 1) {
                let d = self.radial(m, 0.0).d;
                g[0] += d * m.cos;
                g[1] += d * m.sin;
            }
            return Ok(g);
        }
        let theta = math::atan2(y, x);
        let (c, s) = (x / r, y / r);
        let mut ur = self.particular(r).d;
        let mut ut = 0.0;
        for m in &self.modes {
            let rad = self.radial(m, r);
            let t = m.k as f64 * theta;
            let (ct, st) = (math::cos(t), math::sin(t));
            ur += rad.d * (m.cos * ct + m.sin * st);
            ut += rad.v * m.k as f64 * (-m.cos * st + m.sin * ct) / r;
        }
        Ok([ur * c - ut * s, ur * s + ut * c])
    }

    /// `w · ∇u` for `w = (cos α, sin α)`.
    pub fn directional(&self, x: f64, y: f64, alpha: f64) -> Result<f64> {
        let g = self.gradient(x, y)?;
        Ok(g[0] * math::cos(alpha) + g[1] * math::sin(alpha))
    }

    /// Largest pointwise residual of the solved equation per mode on a
    /// radial sample set, from the series second derivatives.
    pub fn modal_residual(&self, samples: usize, source: &VolumeTerm) -> f64 {
        let absorb = match self.kind {
            InteriorKind::Laplace => 0.0,
            InteriorKind::ModifiedHelmholtz => 1.0,
        };
        let mut worst: f64 = 0.0;
        for i in 1..=samples {
            let r = i as f64 / samples as f64;
            for m in &self.modes {
                let q = self.radial(m, r);
                let k2 = (m.k * m.k) as f64;
                let res = q.dd + q.d / r - (k2 / (r * r) + absorb) * q.v;
                worst = worst.max(res.abs() * (m.cos.abs() + m.sin.abs()));
            }
            if let VolumeTerm::RadialPolynomial(s) = source {
                let p = self.particular(r);
                let rhs: f64 = s.iter().enumerate().map(|(j, c)| c * math::powi(r, 2 * j as i32)).sum();
                worst = worst.max((p.dd + p.d / r - absorb * p.v - rhs).abs());
            }
        }
        worst
    }

    /// `(∮ ∂u/∂n, ∬ u)`; for the Helmholtz problem the first equals the
    /// second plus the source integral.
    pub fn green_balance(&self) -> (f64, f64) {
        let two_pi = 2.0 * core::f64::consts::PI;
        let mut flux = self.particular(1.0).d * two_pi;
        let mut area = 0.0;
        let rule = GaussLegendre::new(24);
        area += two_pi * rule.integrate(0.0, 1.0, |r| self.particular(r).v * r);
        for m in self.modes.iter().filter(|m| m.k == 0) {
            flux += two_pi * self.radial(m, 1.0).d * m.cos;
            area += two_pi * m.cos * rule.integrate(0.0, 1.0, |r| self.radial(m, r).v * r);
        }
        (flux, area)
    }
}

/// Harmonic extension of Dirichlet data.
pub fn solve_laplace_dirichlet(data: &FourierBoundaryData) -> InteriorSolution {
    let modes = (0..data.a.len())
        .map(|k| Mode {
            k,
            cos: if k == 0 { 0.5 * data.a[0] } else { data.a[k] },
            sin: if k == 0 { 0.0 } else { data.b[k] },
            scale: 1.0,
        })
        .filter(|m| m.cos != 0.0 || m.sin != 0.0)
        .collect();
    InteriorSolution { kind: InteriorKind::Laplace, modes, particular: Vec::new() }
}

/// `Δu - u = s` with `∂u/∂n` given on the circle.
pub fn solve_modified_helmholtz_neumann(
    data: &FourierBoundaryData,
    source: &VolumeTerm,
) -> Result<InteriorSolution> {
    let particular = match source {
        VolumeTerm::Zero => Vec::new(),
        VolumeTerm::RadialPolynomial(s) => {
            let n = s.len();
            let mut p = alloc::vec![0.0; n];
            for j in (0..n).rev() {
                let next = if j + 1 < n { p[j + 1] } else { 0.0 };
                let f = (2 * j + 2) as f64;
                p[j] = f * f * next - s[j];
            }
            p
        }
        VolumeTerm::Modal => return Err(Error::Unsupported("angular-mode volume sources")),
    };
    let mut sol = InteriorSolution { kind: InteriorKind::ModifiedHelmholtz, modes: Vec::new(), particular };
    let flux0 = sol.particular(1.0).d;
    for k in 0..data.a.len() {
        let (mut c, s) = if k == 0 { (0.5 * data.a[0], 0.0) } else { (data.a[k], data.b[k]) };
        if k == 0 {
            c -= flux0;
        }
        if c == 0.0 && s == 0.0 {
            continue;
        }
        let d = bessel_i(k, 1.0).derivative;
        if !(d > 0.0) {
            return Err(Error::Singular { pivot: k });
        }
        sol.modes.push(Mode { k, cos: c, sin: s, scale: 1.0 / d });
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn laplace_examples() {
        let c = solve_laplace_dirichlet(&FourierBoundaryData::constant(3.0));
        assert!((c.value(0.3, 1.0) - 3.0).abs() < 1e-15);
        let u = solve_laplace_dirichlet(&FourierBoundaryData::cosine(1));
        assert!((u.value(0.5, 0.0) - 0.5).abs() < 1e-15);
        let g = u.gradient(0.2, -0.4).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-14 && g[1].abs() < 1e-14);
        let g0 = u.gradient(0.0, 0.0).unwrap();
        assert!((g0[0] - 1.0).abs() < 1e-14);
        let u3 = solve_laplace_dirichlet(&FourierBoundaryData::cosine(3));
        assert!(u3.value(0.7, PI / 6.0).abs() < 1e-15);
        let g3 = u3.gradient(1.0, 0.0).unwrap();
        assert!((g3[0] - 3.0).abs() < 1e-13 && g3[1].abs() < 1e-13);
        assert!(u3.modal_residual(20, &VolumeTerm::Zero) < 1e-10);
    }

    #[test]
    fn neumann_constant() {
        let u = solve_modified_helmholtz_neumann(&FourierBoundaryData::constant(1.0), &VolumeTerm::Zero).unwrap();
        assert!((u.value(1.0, 0.0) - 2.240_2).abs() < 1e-4);
        assert!((u.value(1.0, 0.0) - bessel_i(0, 1.0).value / bessel_i(1, 1.0).value).abs() < 1e-13);
        let (flux, area) = u.green_balance();
        assert!((flux - area).abs() < 1e-12);
        assert!(u.modal_residual(20, &VolumeTerm::Zero) < 1e-10);
    }

    #[test]
    fn neumann_zero_and_source() {
        let z = solve_modified_helmholtz_neumann(&FourierBoundaryData::constant(0.0), &VolumeTerm::Zero).unwrap();
        assert_eq!(z.value(0.5, 0.3), 0.0);
        let src = VolumeTerm::RadialPolynomial(alloc::vec![1.0, -0.5, 0.25]);
        let u = solve_modified_helmholtz_neumann(&FourierBoundaryData::constant(0.0), &src).unwrap();
        assert!(u.modal_residual(20, &src) < 1e-10);
        let g = u.gradient(1.0, 0.0).unwrap();
        assert!(g[0].abs() < 1e-13);
        // ∮ ∂u/∂n = ∬ u + ∬ s
        let (flux, area) = u.green_balance();
        let s_int = 2.0 * PI * (0.5 - 0.5 / 4.0 + 0.25 / 6.0);
        assert!((flux - area - s_int).abs() < 1e-12);
        assert!(solve_modified_helmholtz_neumann(&FourierBoundaryData::constant(0.0), &VolumeTerm::Modal).is_err());
    }

    #[test]
    fn samples_roundtrip() {
        let n = 16;
        let v: alloc::vec::Vec<f64> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                1.0 + 2.0 * math::cos(3.0 * t) - 0.5 * math::sin(t)
            })
            .collect();
        let d = FourierBoundaryData::from_samples(&v, 4).unwrap();
        assert!((d.a()[0] - 2.0).abs() < 1e-14);
        assert!((d.a()[3] - 2.0).abs() < 1e-14);
        assert!((d.b()[1] + 0.5).abs() < 1e-14);
        assert!((d.eval(0.3) - (1.0 + 2.0 * math::cos(0.9) - 0.5 * math::sin(0.3))).abs() < 1e-13);
    }
}
