use fixlogic::corpus::FIELDS;
use fixlogic::differential::files::parse_field;
use fixlogic::differential::{rk4_trajectory, Ball, NumConfig, Norm, ReachTriple, Region};
use fixlogic::selftest::fd_error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Pairs of points on a trajectory inside the ball are never refuted.
    #[test]
    fn trajectory_pairs_are_not_refuted(field in 0..FIELDS.len(), x in -0.5f64..0.5, y in -0.5f64..0.5, t in 0.0f64..0.5, max in any::<bool>()) {
        let e = &FIELDS[field];
        let f = parse_field(e.field).unwrap();
        let x0: Vec<f64> = [x, y][..f.dim()].to_vec();
        let cfg = NumConfig { norm: if max { Norm::Max } else { Norm::Euclidean }, ..NumConfig::default() };
        let region = Region::new(&f, Ball::new(e.radius).unwrap(), cfg).unwrap();
        let cert = rk4_trajectory(&f, &x0, t, 3).unwrap();
        let end = cert.samples.last().unwrap().clone();
        prop_assume!(end.iter().all(|v| v.abs() < 1.0));
        let pair = ReachTriple { x: x0, y: end, t };
        prop_assert!(!region.refutes(&pair).unwrap());
        prop_assert_eq!(region.certify(&cert).unwrap(), Ok(()));
    }
}

#[test]
fn finite_differences_converge_at_first_order_on_nonlinear_fields() {
    for name in ["square", "lotka"] {
        let f = parse_field(FIELDS.iter().find(|e| e.name == name).unwrap().field).unwrap();
        let x = vec![0.7; f.dim()];
        let ratio = fd_error(&f, &x, 1e-2) / fd_error(&f, &x, 1e-3);
        assert!((5.0..=20.0).contains(&ratio), "{name}: {ratio}");
    }
}
