use proptest::prelude::*;

use super::*;

/// Finite values that survive six-digit formatting unchanged.
fn g6_value() -> impl Strategy<Value = f64> {
    (-1e6f64..1e6).prop_map(|v| format_g6(v).parse().unwrap())
}

fn point(beta: f64) -> impl Strategy<Value = TradeoffPoint> {
    (g6_value(), g6_value(), g6_value(), g6_value(), 0.0f64..=1.0).prop_map(move |(u, i, o, j, a)| TradeoffPoint {
        beta,
        utility_kl: u,
        mi_input: i,
        mi_output: o,
        objective: j,
        empirical_agreement: format_g6(a).parse().unwrap(),
    })
}

fn curve() -> impl Strategy<Value = TradeoffCurve> {
    prop::collection::btree_set(0u32..100_000, 1..8).prop_flat_map(|betas| {
        betas.into_iter().map(|b| point(b as f64 / 100.0)).collect::<Vec<_>>()
    }).prop_map(|pts| TradeoffCurve::new(pts).unwrap())
}

proptest! {
    #[test]
    fn curve_csv_round_trips(c in curve()) {
        let mut out = Vec::new();
        emit_curve_csv(&c, &mut out).unwrap();
        prop_assert_eq!(parse_curve_csv(std::str::from_utf8(&out).unwrap()).unwrap(), c);
    }

    #[test]
    fn format_keeps_six_digits(v in -1e12f64..1e12) {
        let back: f64 = format_g6(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-6 * v.abs());
    }

    #[test]
    fn quantizer_is_monotone(mu in -5.0f64..5.0, sigma in 0.1f64..3.0, n in 1usize..40, a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let c = QuantizerConfig::new(mu, sigma, n).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(quantize(lo, &c).unwrap() <= quantize(hi, &c).unwrap());
        prop_assert!(quantize(hi, &c).unwrap() < n);
    }

    #[test]
    fn quantizer_is_idempotent_on_grid(mu in -5.0f64..5.0, sigma in 0.1f64..3.0, n in 1usize..40) {
        let c = QuantizerConfig::new(mu, sigma, n).unwrap();
        let g = c.grid();
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        for (i, &v) in g.iter().enumerate() {
            prop_assert_eq!(quantize(v, &c).unwrap(), i);
        }
    }
}
