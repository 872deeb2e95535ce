use proptest::prelude::*;

use super::*;
use crate::matrix::Mat;

fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    })
}

fn kernel(rows: usize, cols: usize) -> impl Strategy<Value = Kernel<f64>> {
    prop::collection::vec(simplex(rows), cols).prop_map(move |cs| {
        let mat = Mat::from_fn(rows, cols, |r, c| cs[c][r]);
        Kernel::new(Alphabet::indexed(cols).unwrap(), Alphabet::indexed(rows).unwrap(), mat).unwrap()
    })
}

fn dist(n: usize) -> impl Strategy<Value = Distribution<f64>> {
    simplex(n).prop_map(move |p| Distribution::new(Alphabet::indexed(n).unwrap(), p).unwrap())
}

proptest! {
    #[test]
    fn kl_is_non_negative((p, q) in (2usize..8).prop_flat_map(|n| (dist(n), dist(n)))) {
        prop_assert!(kl_divergence(&p, &q).unwrap() >= 0.0);
        prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn mutual_information_is_bounded_by_entropy((p, k) in (2usize..7, 2usize..7).prop_flat_map(|(n, m)| (dist(n), kernel(m, n)))) {
        let mi = mutual_information(&p, &k).unwrap();
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= entropy(&p) + 1e-12);
        prop_assert!(mi <= entropy(&k.pushforward(&p).unwrap()) + 1e-12);
    }

    #[test]
    fn cascade_is_associative_and_stochastic(
        (a, b, c) in (2usize..6, 2usize..6, 2usize..6, 2usize..6)
            .prop_flat_map(|(n, m, l, o)| (kernel(m, n), kernel(l, m), kernel(o, l)))
    ) {
        let left = cascade(&cascade(&a, &b).unwrap(), &c).unwrap();
        let right = cascade(&a, &cascade(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
        for col in 0..left.input().len() {
            prop_assert!((left.column(col).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pushforward_composes((p, a, b) in (2usize..6, 2usize..6, 2usize..6).prop_flat_map(|(n, m, l)| (dist(n), kernel(m, n), kernel(l, m)))) {
        let two_step = b.pushforward(&a.pushforward(&p).unwrap()).unwrap();
        let one_step = cascade(&a, &b).unwrap().pushforward(&p).unwrap();
        prop_assert!(two_step.total_variation(&one_step).unwrap() < 1e-14);
        prop_assert!((one_step.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
