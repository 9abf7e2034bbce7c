use std::f64::consts::PI;

use jsr_core::oracle::bracket;
use jsr_core::{
    barabanov_residual, run, Error, Irreducibility, Lookup, Matrix2F32, Matrix2F64, MatrixSetF32,
    MatrixSetF64, PolarNormF64, RunConfigF32, RunConfigF64,
};

fn example1() -> MatrixSetF64 {
    MatrixSetF64::new(vec![
        Matrix2F64::new(1.0, 1.0, 0.0, 1.0),
        Matrix2F64::new(1.0, 0.0, 1.0, 1.0),
    ])
    .unwrap()
}

fn example2() -> MatrixSetF64 {
    MatrixSetF64::new(vec![
        Matrix2F64::new(1.0, 1.0, 0.0, 1.0),
        Matrix2F64::new(0.8, 0.6, -0.6, 0.8),
        Matrix2F64::new(1.0, 0.0, -0.4, 1.3),
    ])
    .unwrap()
}

#[test]
fn eccentricity_against_final_norm_does_not_grow() {
    for (set, lookup) in [
        (example1(), Lookup::Interpolate),
        (example1(), Lookup::Nearest),
        (example2(), Lookup::Interpolate),
    ] {
        let cfg = RunConfigF64 { lookup, record_norms: true, ..RunConfigF64::default() };
        let r = run(&set, &cfg).unwrap();
        let slack = 0.5 * 2.0 * PI / cfg.nodes as f64;
        let ecc: Vec<f64> = r
            .history
            .iter()
            .map(|n| n.eccentricity(&r.final_norm).unwrap())
            .collect();
        assert_eq!(ecc.len(), r.iterations() + 1);
        assert!((ecc.last().unwrap() - 1.0).abs() < 1e-12);
        for w in ecc.windows(2) {
            assert!(w[1] <= w[0] + slack, "{ecc:?}");
        }
    }
}

#[test]
fn final_norm_shape() {
    let r = run(&example2(), &RunConfigF64::default()).unwrap();
    let n = &r.final_norm;
    assert_eq!(n.nodes(), 3000);
    assert_eq!(n.values()[1500], 1.0);
    assert!(n.is_centrally_symmetric());
    assert_eq!(n.symmetry_defect(), 0.0);
    assert!(n.values().iter().all(|v| *v > 0.0));
}

#[test]
fn residual_is_within_the_bracket() {
    let cfg = RunConfigF64::default();
    for set in [example1(), example2()] {
        let r = run(&set, &cfg).unwrap();
        let again = run(&set, &RunConfigF64 { initial_norm: Some(r.final_norm.clone()), ..cfg.clone() })
            .unwrap();
        let op = cfg.image_operator(&set).unwrap();
        let res = barabanov_residual(&r.final_norm, &op, again.midpoint()).unwrap();
        assert!(res <= again.gap() / 2.0 + 1e-15, "{res} vs {}", again.gap());
    }
}

#[test]
fn interval_sits_inside_deep_product_bounds() {
    let r = run(&example2(), &RunConfigF64::default()).unwrap();
    let (lo, hi) = r.interval();
    let b = bracket(&example2(), 10).unwrap();
    assert!(b.contains_interval(lo, hi));
    assert!(b.trace_estimate <= b.upper.unwrap());
}

#[test]
fn single_precision_agrees_with_double() {
    let s32 = MatrixSetF32::new(vec![
        Matrix2F32::new(1.0, 1.0, 0.0, 1.0),
        Matrix2F32::new(1.0, 0.0, 1.0, 1.0),
    ])
    .unwrap();
    let r32 = run(&s32, &RunConfigF32::default()).unwrap();
    let r64 = run(&example1(), &RunConfigF64::default()).unwrap();
    assert!(r32.converged);
    assert!((r32.midpoint() as f64 - r64.midpoint()).abs() < 1e-4);
}

#[test]
fn reducible_sets_need_force() {
    let tri = MatrixSetF64::new(vec![
        Matrix2F64::new(1.0, 2.0, 0.0, 0.5),
        Matrix2F64::new(0.7, -1.0, 0.0, 1.2),
    ])
    .unwrap();
    assert!(matches!(run(&tri, &RunConfigF64::default()), Err(Error::Reducible(..))));

    let forced = run(&tri, &RunConfigF64 { force: true, ..RunConfigF64::default() }).unwrap();
    assert!(forced.unsupported_regime);
    // The common eigenvector carries the larger diagonal entry, 1.2.
    assert!(forced.interval().0 <= 1.2 + 1e-3 && 1.2 - 1e-3 <= forced.interval().1);
}

#[test]
fn inconclusive_sets_run_with_a_warning() {
    let t = 3e-9;
    let near = Matrix2F64::rotation(t) * Matrix2F64::diag(3.0, 1.0) * Matrix2F64::rotation(-t);
    let set = MatrixSetF64::new(vec![near, Matrix2F64::diag(1.0, 2.0)]).unwrap();
    assert!(matches!(set.irreducibility(), Irreducibility::Inconclusive { .. }));
    let r = run(&set, &RunConfigF64::default()).unwrap();
    assert!(!r.warnings.is_empty());
    assert!(!r.unsupported_regime);
}

#[test]
fn starting_gauge_must_match_the_grid() {
    let cfg = RunConfigF64 {
        initial_norm: Some(PolarNormF64::euclidean(100).unwrap()),
        ..RunConfigF64::default()
    };
    assert!(matches!(run(&example1(), &cfg), Err(Error::GridMismatch { .. })));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn matrix() -> impl Strategy<Value = Matrix2F64> {
        prop::array::uniform4(-2.0f64..2.0).prop_map(|[a, b, c, d]| Matrix2F64::new(a, b, c, d))
    }

    fn irreducible_pair() -> impl Strategy<Value = MatrixSetF64> {
        (matrix(), matrix())
            .prop_filter_map("irreducible", |(a, b)| {
                let s = MatrixSetF64::new(vec![a, b]).ok()?;
                matches!(s.irreducibility(), Irreducibility::Irreducible { .. }).then_some(s)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bounds_scale_with_the_set(set in irreducible_pair(), c in 0.05f64..20.0) {
            let cfg = RunConfigF64 {
                nodes: 128,
                stopping: jsr_core::StoppingRule::RelativeGap,
                ..RunConfigF64::default()
            };
            let a = run(&set, &cfg).unwrap();
            let b = run(&set.scaled(c).unwrap(), &cfg).unwrap();
            prop_assert_eq!(a.steps.len(), b.steps.len());
            for (x, y) in a.steps.iter().zip(&b.steps) {
                prop_assert!((y.rho_minus - c * x.rho_minus).abs() <= 1e-12 * c * x.rho_minus);
                prop_assert!((y.rho_plus - c * x.rho_plus).abs() <= 1e-12 * c * x.rho_plus);
            }
        }

        #[test]
        fn restart_from_the_result_stops_at_once(set in irreducible_pair()) {
            let cfg = RunConfigF64 { nodes: 256, ..RunConfigF64::default() };
            let r = run(&set, &cfg).unwrap();
            prop_assume!(r.converged);
            let again = run(&set, &RunConfigF64 { initial_norm: Some(r.final_norm.clone()), ..cfg }).unwrap();
            prop_assert_eq!(again.iterations(), 1);
            prop_assert!(again.gap() <= r.gap() * (1.0 + 1e-12));
        }
    }
}
