use super::*;
use crate::prob::Alphabet;

fn d(p: &[f64]) -> Distribution<f64> {
    Distribution::new(Alphabet::indexed(p.len()).unwrap(), p.to_vec()).unwrap()
}

#[test]
fn grid_enumeration() {
    assert_eq!(simplex_grid_size(4, 3), 15);
    assert_eq!(simplex_grid_size(1000, 2), 1001);
    let pts = simplex_grid::<f64>(2, 3);
    assert_eq!(pts.len(), 6);
    assert_eq!(pts[0], vec![0.0, 0.0, 1.0]);
    assert_eq!(pts[5], vec![1.0, 0.0, 0.0]);
    assert!(pts.iter().all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-15));
}

#[test]
fn grid_spec_validation() {
    assert!(GridSpec::new(0.0).is_err());
    assert!(GridSpec::new(0.6).is_err());
    assert!(GridSpec::new(0.3).is_err());
    assert_eq!(GridSpec::new(1e-3).unwrap().divisions().unwrap(), 1000);
    assert_eq!(GridSpec::new(1.0 / 19.0).unwrap().divisions().unwrap(), 19);
}

#[test]
fn refuses_over_budget() {
    let g = GridSpec::new(0.01).unwrap();
    match grid_search_oil_y(&d(&[0.2, 0.3, 0.5]), 1.0, &g) {
        Err(Error::Budget { required, budget }) => {
            assert_eq!(required, 5151u128.pow(3));
            assert_eq!(budget, DEFAULT_BUDGET);
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }
    let g = GridSpec::new(0.5).unwrap();
    assert!(matches!(grid_search_oil_y(&d(&[0.25; 4]), 1.0, &g), Err(Error::Config(_))));
}

#[test]
fn output_only_limits() {
    let g = GridSpec::new(0.01).unwrap();
    let r = d(&[0.5, 0.5]);
    let hi = grid_search_oil_y(&r, 1e4, &g).unwrap();
    assert!((hi.kernel.get(0, 0) - hi.kernel.get(0, 1)).abs() <= 0.011);
    let lo = grid_search_oil_y(&r, 1e-3, &g).unwrap();
    assert_eq!(lo.kernel, Kernel::identity(r.alphabet().clone()));
    assert_eq!(lo.evaluations, 101 * 101);
}

#[test]
fn output_only_grid_value_is_minimal() {
    let g = GridSpec::new(0.05).unwrap();
    let r = d(&[0.3, 0.7]);
    let best = grid_search_oil_y(&r, 1.0, &g).unwrap();
    for u in 0..=20 {
        for v in 0..=20 {
            let (u, v) = (u as f64 / 20.0, v as f64 / 20.0);
            let p = Mat::from_rows(&[vec![1.0 - u, v], vec![u, 1.0 - v]]).unwrap();
            assert!(output_only_objective(r.probs(), &p, 1.0) >= best.objective);
        }
    }
}

#[test]
fn input_only_limits() {
    let a = Alphabet::indexed(3).unwrap();
    let px = Distribution::new(a.clone(), vec![0.2_f64, 0.5, 0.3]).unwrap();
    let g = GridSpec::new(0.05).unwrap();
    let id = DeterministicModel::new(a.clone(), a.clone(), vec![0, 1, 2]).unwrap();
    let best = grid_search_oil_x(&px, &id, 1e-3, &g).unwrap();
    assert_eq!(best.kernel, Kernel::identity(a.clone()));

    let constant = DeterministicModel::new(a.clone(), Alphabet::indexed(1).unwrap(), vec![0, 0, 0]).unwrap();
    let best = grid_search_oil_x(&px, &constant, 1.0, &g).unwrap();
    for c in 1..3 {
        assert_eq!(best.kernel.column(c), best.kernel.column(0));
    }
    assert!(best.objective.abs() < 1e-15_f64);
}

#[test]
fn joint_scan_small_weights_keep_identity() {
    let a = Alphabet::indexed(2).unwrap();
    let px = Distribution::new(a.clone(), vec![0.4_f64, 0.6]).unwrap();
    let ks = Kernel::identity(a.clone());
    let g = GridSpec::new(0.1).unwrap();
    let best = exhaustive_objective_scan(&px, &ks, 1e-3, 1e-3, &g).unwrap();
    // Swapping both stages is an exact tie; the earlier grid point wins.
    let eff = crate::prob::cascade(&best.k1, &best.k2).unwrap();
    assert_eq!(eff, Kernel::identity(a.clone()));
    assert_eq!(best.k1.matrix()[(1, 0)], 1.0);
    assert!(best.objective < 2e-3);
    assert_eq!(best.evaluations, 11u128.pow(4));
}

#[test]
fn joint_scan_is_invariant_under_relabeling() {
    let a = Alphabet::indexed(2).unwrap();
    let px = Distribution::new(a.clone(), vec![0.5, 0.5]).unwrap();
    let ks = Kernel::from_rows(a.clone(), a.clone(), &[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
    let g = GridSpec::new(0.05).unwrap();
    let best = exhaustive_objective_scan(&px, &ks, 1.0, 1.0, &g).unwrap();
    let swap = |k: &Kernel<f64>| {
        let m = k.matrix();
        Kernel::from_rows(a.clone(), a.clone(), &[vec![m[(1, 1)], m[(1, 0)]], vec![m[(0, 1)], m[(0, 0)]]]).unwrap()
    };
    let v = crate::engine::objective(&px, &ks, &swap(&best.k1), &swap(&best.k2), 1.0, 1.0).unwrap();
    assert!((v - best.objective).abs() < 1e-12);
}

#[test]
fn binary_dump_has_one_row_per_kernel() {
    let g = GridSpec::new(0.25).unwrap();
    let mut buf = Vec::new();
    dump_oil_y_grid_csv(&d(&[0.5, 0.5]), 1.0, &g, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k00,k11,objective");
    assert_eq!(lines.len(), 1 + 25);
    assert!(lines[1].starts_with("0,1,"));
}
