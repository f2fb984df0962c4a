use kinlayer::discretization::{AngularQuadrature, DiskGrid, RadialGrid};
use kinlayer::disk::{self, DiskBoundary, DiskProblem};
use kinlayer::expansion::{
    build_composite, compare, error_report, far_field_gap, loglog_slope, ExpansionSpec, SweepRow, Variant,
};
use kinlayer::geometry::ForceField;
use kinlayer::milne::{self, BoundaryKind, MilneProblem};
use kinlayer::{BoundaryProfile, Error};

fn radial() -> RadialGrid {
    RadialGrid::graded(160, 30.0, 1.15, 2e-3).unwrap()
}
fn angles() -> AngularQuadrature {
    AngularQuadrature::new(32).unwrap()
}

fn spec(variant: Variant, order: u8, g: DiskBoundary, kind: BoundaryKind, eps: f64) -> ExpansionSpec {
    ExpansionSpec::new(variant, order, g, kind, eps).with_grids(radial(), angles())
}

fn reference(eps: f64, g: DiskBoundary, n_theta: usize, kind: BoundaryKind) -> disk::DiskField {
    disk::solve(&DiskProblem::new(eps, g, DiskGrid::layer_adapted(eps, n_theta, 32).unwrap()).with_kind(kind)).unwrap()
}

#[test]
fn constants_are_reproduced_exactly() {
    for variant in [Variant::Classical, Variant::Geometric] {
        for order in [0, 1] {
            let s = spec(variant, order, DiskBoundary::Uniform(BoundaryProfile::constant(1.3)), BoundaryKind::Inflow, 0.1);
            let c = build_composite(&s).unwrap();
            for &(x, y, phi) in &[(0.0, 0.0, 0.3), (0.5, -0.2, 2.0), (0.99, 0.0, -1.0), (0.0, 1.0, 0.01)] {
                assert!((c.eval(x, y, phi) - 1.3).abs() < 1e-10, "{variant:?} {order}");
            }
        }
    }
}

#[test]
fn interior_equals_far_field() {
    let g = BoundaryProfile::cos(1, 2.0);
    let c = build_composite(&spec(Variant::Geometric, 0, DiskBoundary::Uniform(g.clone()), BoundaryKind::Inflow, 0.1)).unwrap();
    let m = milne::solve(&MilneProblem::new(ForceField::geometric(0.1).unwrap(), g).with_grids(radial(), angles())).unwrap();
    assert!((c.interior().value(0.3, 1.0) - m.f_infinity).abs() < 1e-12);
    assert_eq!(c.layer_solutions().len(), 1);
    // the composite reproduces the data on incoming directions at the wall
    for phi in [0.2, 1.0, 2.5] {
        assert!((c.eval_layer(0.0, 0.7, phi) - (2.0 + phi.cos())).abs() < 1e-9);
    }
    // far from the wall only the interior remains
    assert!((c.eval(0.1, 0.1, 0.5) - m.f_infinity).abs() < 1e-12);
}

#[test]
fn first_order_terms_vanish_for_uniform_data() {
    let g = DiskBoundary::Uniform(BoundaryProfile::cos(1, 2.0));
    let a = build_composite(&spec(Variant::Geometric, 0, g.clone(), BoundaryKind::Inflow, 0.1)).unwrap();
    let b = build_composite(&spec(Variant::Geometric, 1, g, BoundaryKind::Inflow, 0.1)).unwrap();
    assert!(b.first_order_layer_solutions().is_empty());
    for &(x, y, phi) in &[(0.2, 0.1, 0.3), (0.95, 0.0, 1.0), (0.0, -0.97, -2.0)] {
        assert!((a.eval(x, y, phi) - b.eval(x, y, phi)).abs() < 1e-12);
    }
}

#[test]
fn diffusive_odd_data_give_zero() {
    let s = spec(Variant::Geometric, 0, DiskBoundary::Uniform(BoundaryProfile::cos(1, 0.0)), BoundaryKind::Diffusive, 0.1);
    let c = build_composite(&s).unwrap();
    for &(x, y, phi) in &[(0.0, 0.0, 0.3), (0.9, 0.1, 1.0), (0.0, 0.99, -0.5)] {
        assert!(c.eval(x, y, phi).abs() < 1e-12);
    }
}

#[test]
fn validation() {
    let uni = DiskBoundary::Uniform(BoundaryProfile::constant(1.0));
    let theta = DiskBoundary::field(|t: f64, _| 2.0 + t.cos());
    let bad = |s: ExpansionSpec| build_composite(&s).err().expect("rejected");
    assert!(matches!(bad(spec(Variant::Geometric, 2, uni.clone(), BoundaryKind::Inflow, 0.1)), Error::Unsupported(_)));
    assert!(matches!(bad(spec(Variant::Geometric, 0, uni.clone(), BoundaryKind::Inflow, 0.6)), Error::InvalidParameter(_)));
    assert!(matches!(bad(spec(Variant::Geometric, 0, uni, BoundaryKind::Inflow, 0.0)), Error::InvalidParameter(_)));
    assert!(matches!(bad(spec(Variant::Geometric, 1, theta.clone(), BoundaryKind::Inflow, 0.1)), Error::Unsupported(_)));
    assert!(matches!(
        bad(spec(Variant::Classical, 1, theta.clone(), BoundaryKind::Inflow, 0.1).with_acknowledgment()),
        Error::Unsupported(_)
    ));
    assert!(matches!(
        bad(spec(Variant::Geometric, 0, theta.clone(), BoundaryKind::Inflow, 0.1).with_columns(2)),
        Error::InvalidParameter(_)
    ));
    assert!(spec(Variant::Geometric, 1, theta, BoundaryKind::Inflow, 0.1).with_acknowledgment().validate().is_ok());
}

#[test]
fn report_is_consistent() {
    let eps = 0.1;
    let g = DiskBoundary::Uniform(BoundaryProfile::cos(1, 2.0));
    let r = reference(eps, g.clone(), 1, BoundaryKind::Inflow);
    let rep = error_report(&spec(Variant::Geometric, 0, g.clone(), BoundaryKind::Inflow, eps), &r).unwrap();
    assert!(rep.remainder_identity < 1e-12);
    assert!(rep.sup_error >= rep.node_sup_error && rep.sup_error >= rep.grazing_sup_error);
    assert!(rep.l2_error >= 0.0 && rep.l2_error <= rep.sup_error * std::f64::consts::PI.sqrt() * 1.0001);
    assert_eq!(rep.composite.len(), r.u_values().len());
    assert!(rep.layer_zoom.windows(2).all(|w| w[1].0 > w[0].0));
    let row = rep.row();
    assert_eq!((row.epsilon, row.order, row.variant), (eps, 0, Variant::Geometric));
    // a mismatched reference is refused
    let c = build_composite(&spec(Variant::Geometric, 0, g, BoundaryKind::Inflow, 0.05)).unwrap();
    assert!(compare(&c, &r).is_err());
}

#[test]
fn constant_data_have_no_error() {
    let g = DiskBoundary::Uniform(BoundaryProfile::constant(0.7));
    let r = reference(0.1, g.clone(), 1, BoundaryKind::Inflow);
    let rep = error_report(&spec(Variant::Classical, 0, g, BoundaryKind::Inflow, 0.1), &r).unwrap();
    assert!(rep.sup_error < 1e-9 && rep.l2_error < 1e-9);
}

#[test]
fn first_order_helps_for_theta_dependent_data() {
    let eps = 0.1;
    let g = DiskBoundary::field(|t: f64, _| 2.0 + t.cos());
    let r = reference(eps, g.clone(), 16, BoundaryKind::Inflow);
    let zero = error_report(&spec(Variant::Geometric, 0, g.clone(), BoundaryKind::Inflow, eps).with_columns(8), &r).unwrap();
    let one = error_report(
        &spec(Variant::Geometric, 1, g, BoundaryKind::Inflow, eps).with_columns(8).with_acknowledgment(),
        &r,
    )
    .unwrap();
    assert!(one.sup_error < zero.sup_error, "{} {}", one.sup_error, zero.sup_error);
    assert!(one.l2_error < zero.l2_error);
}

#[test]
fn diffusive_first_order_remainder() {
    let eps = 0.1;
    let g = DiskBoundary::Uniform(BoundaryProfile::cos(1, 0.0));
    let r = reference(eps, g.clone(), 1, BoundaryKind::Diffusive);
    let zero = error_report(&spec(Variant::Geometric, 0, g.clone(), BoundaryKind::Diffusive, eps), &r).unwrap();
    let one = error_report(&spec(Variant::Geometric, 1, g, BoundaryKind::Diffusive, eps), &r).unwrap();
    assert!(one.sup_error < zero.sup_error);
    assert!(one.sup_error <= eps * eps, "{}", one.sup_error);
}

#[test]
fn slope_fit() {
    let rows: Vec<SweepRow> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&e| SweepRow { epsilon: e, variant: Variant::Geometric, order: 0, sup_error: 3.0 * e, l2_error: e })
        .collect();
    assert!((loglog_slope(&rows).unwrap() - 1.0).abs() < 1e-12);
    assert!(loglog_slope(&rows[..1]).is_none());
}

#[test]
fn far_field_gap_vanishes_for_reflection_odd_data() {
    // φ -> π - φ maps the layer equation to itself, so cosφ carries no far field
    let g = far_field_gap(&BoundaryProfile::cos(1, 2.0), 0.1, &radial(), &angles()).unwrap();
    assert!(g.gap() < 1e-10);
    assert!((g.geometric - 2.0).abs() < 1e-10);
    let even = BoundaryProfile::custom(|phi: f64| phi.sin().max(0.0));
    let h = far_field_gap(&even, 0.1, &radial(), &angles()).unwrap();
    assert!(h.gap() > 1e-4, "{}", h.gap());
}
