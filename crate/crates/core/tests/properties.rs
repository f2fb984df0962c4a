use std::f64::consts::PI;

use proptest::prelude::*;

use kinlayer::discretization::AngularQuadrature;
use kinlayer::disk::{exit_time, local_angle, local_velocity};
use kinlayer::elliptic::{solve_laplace_dirichlet, FourierBoundaryData, VolumeTerm};
use kinlayer::expansion::{point_formula_flat, point_formula_geometric};
use kinlayer::geometry::{force_lemma_suite, CutoffSpec, ForceField, Smoothness};
use kinlayer::BoundaryProfile;

fn smoothness() -> impl Strategy<Value = Smoothness> {
    prop_oneof![Just(Smoothness::C1Cubic), Just(Smoothness::C2Quintic)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cutoff_is_a_monotone_partition(s in smoothness(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let psi = CutoffSpec::psi(s);
        let psi0 = CutoffSpec::psi0(s);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (vl, vh) = (psi.eval(lo).unwrap(), psi.eval(hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&vl) && (0.0..=1.0).contains(&vh));
        prop_assert!(vh <= vl);
        // ψ = 1 wherever ψ₀ ≠ 0
        let p0 = psi0.eval(a).unwrap();
        prop_assert_eq!(p0 * psi.eval(a).unwrap(), p0);
    }

    #[test]
    fn force_bounds_hold(eps in 0.01f64..1.0, eta in 0.0f64..200.0) {
        let f = ForceField::geometric(eps).unwrap();
        prop_assert!(f.force(eta).abs() <= 4.0 * eps + 1e-12);
        let v = f.potential(eta);
        prop_assert!(v >= -1e-12 && v <= 4f64.ln() + 1e-12);
        prop_assert!(f.potential(eta + 0.5) >= v - 1e-12);
        prop_assert!((f.v_infinity() - ForceField::geometric(0.5).unwrap().v_infinity()).abs() < 1e-10);
    }

    #[test]
    fn force_lemma_suite_passes(eps in 0.02f64..0.5) {
        prop_assert!(force_lemma_suite(&ForceField::geometric(eps).unwrap(), 400).passed());
    }

    #[test]
    fn backward_exit_lands_on_the_circle(r in 0.0f64..1.0, t in -PI..PI, a in -PI..PI, eps in 0.01f64..1.0) {
        let x = [r * t.cos(), r * t.sin()];
        let w = [a.cos(), a.sin()];
        let s = exit_time(x, w, eps).unwrap();
        prop_assert!(s >= 0.0);
        let y = [x[0] - eps * s * w[0], x[1] - eps * s * w[1]];
        prop_assert!(((y[0] * y[0] + y[1] * y[1]).sqrt() - 1.0).abs() < 1e-10);
        // the exit point sees w as incoming
        prop_assert!(y[0] * w[0] + y[1] * w[1] <= 1e-9);
    }

    #[test]
    fn local_frame_round_trip(t in -PI..PI, phi in -PI..PI) {
        let w = local_velocity(t, phi);
        prop_assert!((w[0].hypot(w[1]) - 1.0).abs() < 1e-14);
        let back = local_angle(t, w);
        let d = (back - phi).rem_euclid(2.0 * PI);
        prop_assert!(d.min(2.0 * PI - d) < 1e-12);
        // sinφ > 0 points inward
        prop_assert!(((w[0] * t.cos() + w[1] * t.sin()) + phi.sin()).abs() < 1e-12);
    }

    #[test]
    fn point_formulas_are_convex_combinations(n in 0.0f64..50.0, ubar in -3.0f64..3.0, c in -3.0f64..3.0, eps in 0.001f64..0.5) {
        let g = BoundaryProfile::constant(c);
        let (lo, hi) = (ubar.min(c) - 1e-12, ubar.max(c) + 1e-12);
        let a = point_formula_flat(n, ubar, &g, eps);
        let b = point_formula_geometric(n, ubar, &g, eps);
        prop_assert!(a >= lo && a <= hi);
        prop_assert!(b >= lo && b <= hi);
    }

    #[test]
    fn quadrature_is_exact_on_trig_polynomials(m in 0usize..20, c in prop::collection::vec(-1.0f64..1.0, 4)) {
        let q = AngularQuadrature::new(64).unwrap();
        let k = m as f64;
        let f: Vec<f64> = q.nodes().iter().map(|&p| c[0] + c[1] * (k * p).cos() + c[2] * (k * p).sin() + c[3] * ((k + 1.0) * p).cos()).collect();
        let exact = c[0] + if m == 0 { c[1] } else { 0.0 };
        prop_assert!((q.angular_average(&f).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn fourier_round_trip(coef in prop::collection::vec(-1.0f64..1.0, 7)) {
        let n = 16;
        let eval = |t: f64| coef[0] + coef[1] * t.cos() + coef[2] * t.sin() + coef[3] * (2.0 * t).cos()
            + coef[4] * (3.0 * t).sin() + coef[5] * (5.0 * t).cos() + coef[6] * (7.0 * t).sin();
        let samples: Vec<f64> = (0..n).map(|j| eval(2.0 * PI * j as f64 / n as f64)).collect();
        let data = FourierBoundaryData::from_samples(&samples, n / 2 - 1).unwrap();
        for t in [0.0, 0.3, 1.9, 4.4] {
            prop_assert!((data.eval(t) - eval(t)).abs() < 1e-12);
        }
        let u = solve_laplace_dirichlet(&data);
        prop_assert!((u.value(1.0, 0.7) - eval(0.7)).abs() < 1e-12);
        prop_assert!((u.value(0.0, 0.0) - coef[0]).abs() < 1e-12);
        prop_assert!(u.modal_residual(32, &VolumeTerm::Zero) < 1e-10);
    }
}
