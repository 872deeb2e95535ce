//! End-to-end acceptance checks, one test per criterion. Each prints a single
//! `criterion NN: PASS|FAIL ...` line before asserting.

use std::time::{Duration, Instant};

use oil_core::bench::synthetic::{four_class_model, FOUR_CLASS_R};
use oil_core::bench::{dirichlet_kernel, emit_curve_csv, quantize, sweep, DirichletSpec, Mode, QuantizerConfig, SweepControls};
use oil_core::engine::{
    fixed_point_residual, oil_optimize, oil_optimize_pinned, solution_to_json, update_k1, update_k2, AlgorithmState, Init,
    OilConfig, Pin,
};
use oil_core::oracle::{grid_search_oil_y, GridSpec};
use oil_core::prob::{cascade, entropy, kl_divergence, mutual_information, one_hot_kernel, Alphabet, DeterministicModel, Distribution, Kernel};
use oil_core::special::{beta_infinity_kernel, joint_deterministic_updates, oil_y, oil_y_general, OilYInput, SolverControls};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, pass: bool, detail: impl AsRef<str>) {
    println!("criterion {id:02}: {} {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(pass, "criterion {id} failed: {}", detail.as_ref());
}

fn indexed(n: usize) -> Alphabet {
    Alphabet::indexed(n).unwrap()
}

/// Uniform draw from the probability simplex.
fn simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn positive_kernel(rng: &mut impl Rng, rows: usize, cols: usize) -> Kernel<f64> {
    let cols_v: Vec<Vec<f64>> = (0..cols)
        .map(|_| {
            let c: Vec<f64> = (0..rows).map(|_| 0.05 + rng.random::<f64>()).collect();
            let s: f64 = c.iter().sum();
            c.into_iter().map(|v| v / s).collect()
        })
        .collect();
    let rows_v: Vec<Vec<f64>> = (0..rows).map(|r| cols_v.iter().map(|c| c[r]).collect()).collect();
    Kernel::from_rows(indexed(cols), indexed(rows), &rows_v).unwrap()
}

struct Instance {
    px: Distribution<f64>,
    kstar: Kernel<f64>,
    beta1: f64,
    beta2: f64,
}

fn descent_instances() -> Vec<Instance> {
    let weights = [0.5, 1.0, 5.0];
    (0..20)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = rng.random_range(2..=10);
            let m = rng.random_range(2..=10);
            let px = Distribution::new(indexed(n), simplex_point(&mut rng, n)).unwrap();
            let kstar = positive_kernel(&mut rng, m, n);
            let beta1 = weights[rng.random_range(0..3)];
            let beta2 = weights[rng.random_range(0..3)];
            Instance { px, kstar, beta1, beta2 }
        })
        .collect()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

#[test]
fn criterion_01_monotone_descent() {
    let t = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for inst in descent_instances() {
        let sol = oil_optimize(&inst.px, &inst.kstar, &OilConfig::with_betas(inst.beta1, inst.beta2)).unwrap();
        for w in sol.objective_trace.windows(2) {
            worst = worst.max(w[1] - w[0]);
        }
    }
    let el = t.elapsed();
    let pass = worst <= 1e-9 && el < Duration::from_secs(30);
    report(1, pass, format!("largest objective increase {worst:.3e} (slack 1e-9), runtime {}", secs(el)));
}

#[test]
fn criterion_02_fixed_point_satisfaction() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut converged = 0;
    for inst in descent_instances() {
        let sol = oil_optimize(&inst.px, &inst.kstar, &OilConfig::with_betas(inst.beta1, inst.beta2)).unwrap();
        if sol.converged {
            converged += 1;
            let r = fixed_point_residual(&inst.px, &inst.kstar, &sol.k1, &sol.k2, inst.beta1, inst.beta2).unwrap();
            worst = worst.max(r);
        }
    }
    let el = t.elapsed();
    let pass = converged > 0 && worst < 1e-6 && el < Duration::from_secs(30);
    report(2, pass, format!("{converged}/20 converged, largest residual {worst:.3e} (< 1e-6), runtime {}", secs(el)));
}

#[test]
fn criterion_03_output_only_global_minimum() {
    let t = Instant::now();
    let grid = GridSpec::new(1e-3).unwrap();
    let mut worst_gap = 0.0f64;
    for r in [[0.5_f64, 0.5], [0.3, 0.7]] {
        let r = Distribution::new(indexed(2), r.to_vec()).unwrap();
        for beta2 in [0.5, 1.0, 5.0] {
            let sol = oil_y(&OilYInput::new(r.clone(), beta2)).unwrap();
            let best = grid_search_oil_y(&r, beta2, &grid).unwrap();
            worst_gap = worst_gap.max((sol.objective - best.objective).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let r = Distribution::new(indexed(5), simplex_point(&mut rng, 5)).unwrap();
    let objectives: Vec<f64> = (0..10)
        .map(|seed| {
            let ctl = SolverControls { init: Init::Random { seed }, ..SolverControls::default() };
            oil_y(&OilYInput::new(r.clone(), 1.0).with_controls(ctl)).unwrap().objective
        })
        .collect();
    let lo = objectives.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = objectives.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let el = t.elapsed();
    let pass = worst_gap <= 1e-4 + 1e-3 && hi - lo <= 1e-6 && el < Duration::from_secs(120);
    report(
        3,
        pass,
        format!("largest gap to grid {worst_gap:.3e} (<= 1.1e-3), restart spread {:.3e} (<= 1e-6), runtime {}", hi - lo, secs(el)),
    );
}

#[test]
fn criterion_04_special_case_consistency() {
    let t = Instant::now();

    // (i) matrix-form and general output-only solvers, iteration by iteration
    let x = indexed(6);
    let y = indexed(3);
    let f = DeterministicModel::new(x.clone(), y.clone(), vec![0, 1, 2, 0, 2, 2]).unwrap();
    let px = Distribution::new(x.clone(), vec![0.1, 0.25, 0.05, 0.2, 0.15, 0.25]).unwrap();
    let ks = one_hot_kernel::<f64>(&f);
    let r = f.output_frequencies(&px).unwrap();
    let mut d1 = 0.0f64;
    for iters in 1..=40 {
        let ctl = SolverControls { max_iters: iters, tol: f64::MIN_POSITIVE, init: Init::Uniform };
        let a = oil_y(&OilYInput::new(r.clone(), 0.7).with_controls(ctl)).unwrap();
        let b = oil_y_general(&px, &ks, 0.7, &ctl).unwrap();
        d1 = d1.max(a.kernel.max_abs_diff(&b.kernel));
        d1 = d1.max((a.objective - b.objective).abs());
    }

    // (ii) fiber-sum updates against the general ones
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut d2 = 0.0f64;
    for _ in 0..5 {
        let state = AlgorithmState::consistent(&px, &ks, positive_kernel(&mut rng, 6, 6), positive_kernel(&mut rng, 3, 3)).unwrap();
        let (fk1, fk2) = joint_deterministic_updates(&state, &px, &f, 0.8, 1.3).unwrap();
        let gk1 = update_k1(&state, &px, &ks, 0.8, 1.3).unwrap();
        let mut next = state.clone();
        next.k1 = gk1.clone();
        let gk2 = update_k2(&next, &px, &ks, 1.3).unwrap();
        d2 = d2.max(fk1.max_abs_diff(&gk1)).max(fk2.max_abs_diff(&gk2));
    }

    // (iii) general output-only solver against the joint loop with K1 pinned
    let kstar = positive_kernel(&mut rng, 4, 5);
    let px5 = Distribution::new(indexed(5), simplex_point(&mut rng, 5)).unwrap();
    let ctl = SolverControls { init: Init::Random { seed: 2 }, ..SolverControls::default() };
    let a = oil_y_general(&px5, &kstar, 1.5, &ctl).unwrap();
    let b = oil_optimize_pinned(&px5, &kstar, &OilConfig::with_betas(0.0, 1.5), Pin::K1Identity).unwrap();
    let d3 = a.kernel.max_abs_diff(&b.k2);

    let el = t.elapsed();
    let pass = d1 <= 1e-9 && d2 <= 1e-12 && d3 <= 1e-6 && el < Duration::from_secs(30);
    report(4, pass, format!("(i) {d1:.3e} <= 1e-9, (ii) {d2:.3e} <= 1e-12, (iii) {d3:.3e} <= 1e-6, runtime {}", secs(el)));
}

#[test]
fn criterion_05_large_alphabet_toy() {
    let t = Instant::now();
    let mut worst_ratio = 0.0f64;
    let mut diag_low = f64::INFINITY;
    let mut tv_high = 0.0f64;
    for rep in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + rep);
        let r = Distribution::new(indexed(100), simplex_point(&mut rng, 100)).unwrap();
        for beta2 in [100.0, 10.0, 1.0] {
            let ctl = SolverControls { max_iters: 30, tol: f64::MIN_POSITIVE, init: Init::Uniform };
            let sol = oil_y(&OilYInput::new(r.clone(), beta2).with_controls(ctl)).unwrap();
            let d = &sol.delta_trace;
            worst_ratio = worst_ratio.max(d[d.len() - 1] / d[0]);
            if beta2 == 1.0 {
                diag_low = diag_low.min(sol.kernel.mean_diagonal());
            }
            if beta2 == 100.0 {
                let q = sol.kernel.pushforward(&r).unwrap();
                tv_high = tv_high.max(sol.kernel.max_column_tv(q.probs()));
            }
        }
    }
    let el = t.elapsed();
    let (a, b, c) = (worst_ratio < 0.01, diag_low > 0.5, tv_high < 0.05);
    let pass = a && b && c && el < Duration::from_secs(60);
    report(
        5,
        pass,
        format!(
            "(a) worst delta ratio {worst_ratio:.3e} < 0.01 [{}], (b) lowest mean diagonal {diag_low:.4} > 0.5 [{}], (c) largest column TV {tv_high:.3e} < 0.05 [{}], runtime {}",
            ok(a),
            ok(b),
            ok(c),
            secs(el)
        ),
    );
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "miss"
    }
}

#[test]
fn criterion_06_tradeoff_trend() {
    let t = Instant::now();
    let (px, f) = four_class_model::<f64>();
    let r = f.output_frequencies(&px).unwrap();
    let exact_r = r.probs().iter().zip(FOUR_CLASS_R).all(|(a, b)| (a - b).abs() < 1e-12);
    let curve = sweep(&px, &one_hot_kernel(&f), &[0.0, 1.0, 2.0, 5.0, 20.0, 50.0], Mode::OutputOnly, &SweepControls::default(), 0)
        .unwrap();
    let pts = curve.points();
    let utility_up = pts.windows(2).all(|w| w[1].utility_kl >= w[0].utility_kl - 1e-6);
    let leak_down = pts.windows(2).all(|w| w[1].mi_output <= w[0].mi_output + 1e-6);
    let lossless = pts[0].empirical_agreement == 1.0;
    let el = t.elapsed();
    let pass = exact_r && utility_up && leak_down && lossless && el < Duration::from_secs(30);
    report(
        6,
        pass,
        format!(
            "utility non-decreasing {utility_up}, leakage non-increasing {leak_down}, agreement at 0 = {}, runtime {}",
            pts[0].empirical_agreement,
            secs(el)
        ),
    );
}

#[test]
fn criterion_07_dirichlet_baseline() {
    let t = Instant::now();
    let bands: Vec<(f64, f64)> = [(10.0, 10.0), (5.0, 2.0), (10.0, 1.0), (100.0, 1.0)]
        .iter()
        .map(|&(a, b)| {
            let d: Vec<f64> = (0..30)
                .map(|seed| {
                    let spec = DirichletSpec { a_param: a, b_param: b, alphabet_size: 4, seed };
                    dirichlet_kernel::<f64>(&spec).unwrap().mean_diagonal()
                })
                .collect();
            let mean = d.iter().sum::<f64>() / 30.0;
            let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 29.0;
            (mean, 3.0 * (var / 30.0).sqrt())
        })
        .collect();
    let separated = bands.windows(2).all(|w| w[0].0 + w[0].1 < w[1].0 - w[1].1);
    let el = t.elapsed();
    let shown: Vec<String> = bands.iter().map(|(m, e)| format!("{m:.3}+-{e:.3}")).collect();
    report(7, separated && el < Duration::from_secs(10), format!("mean diagonals {} , runtime {}", shown.join(" < "), secs(el)));
}

#[test]
fn criterion_08_limits() {
    let t = Instant::now();
    let r = Distribution::new(indexed(4), FOUR_CLASS_R.to_vec()).unwrap();
    let sol = oil_y(&OilYInput::new(r.clone(), 1e4)).unwrap();
    let q_final = sol.kernel.pushforward(&r).unwrap();
    let independent = beta_infinity_kernel(&q_final);
    let tv = sol.kernel.max_column_tv(independent.column(0));

    let zero = oil_y(&OilYInput::new(r.clone(), 0.0)).unwrap();
    let (px, f) = four_class_model::<f64>();
    let routed = oil_optimize(&px, &one_hot_kernel(&f), &OilConfig::with_betas(0.0, 0.0)).unwrap();
    let identity = zero.kernel == Kernel::identity(indexed(4)) && routed.k2 == Kernel::identity(f.output().clone());
    let el = t.elapsed();
    let pass = tv < 0.02 && identity && el < Duration::from_secs(5);
    report(8, pass, format!("column TV to independence kernel {tv:.3e} < 0.02, zero weight gives identity {identity}, runtime {}", secs(el)));
}

#[test]
fn criterion_09_numerics() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..8 {
        let p = Distribution::new(indexed(n), simplex_point(&mut rng, n)).unwrap();
        if kl_divergence(&p, &p).unwrap() != 0.0 {
            failures.push(format!("KL(p,p) != 0 for n={n}"));
        }
        let col = Distribution::new(indexed(n + 1), simplex_point(&mut rng, n + 1)).unwrap();
        if mutual_information(&p, &Kernel::constant(indexed(n), &col)).unwrap() != 0.0 {
            failures.push(format!("MI of a column-constant kernel != 0 for n={n}"));
        }
        if mutual_information(&p, &Kernel::identity(indexed(n))).unwrap() != entropy(&p) {
            failures.push(format!("MI of the identity != H for n={n}"));
        }
        let (a, b, c) = (positive_kernel(&mut rng, n, n), positive_kernel(&mut rng, n + 1, n), positive_kernel(&mut rng, 3, n + 1));
        let left = cascade(&cascade(&a, &b).unwrap(), &c).unwrap();
        let right = cascade(&a, &cascade(&b, &c).unwrap()).unwrap();
        if left.max_abs_diff(&right) > 1e-15 {
            failures.push(format!("cascade not associative for n={n}"));
        }
        for k in [&left, &right] {
            if (0..k.input().len()).any(|c| (k.column(c).iter().sum::<f64>() - 1.0).abs() > 1e-12) {
                failures.push(format!("cascade lost column normalization for n={n}"));
            }
        }
    }
    let q = QuantizerConfig::new(0.0, 1.0, 30).unwrap();
    for (v, want) in [(-3.0, 0), (10.0, 29), (0.0, 14)] {
        let got = quantize(v, &q).unwrap();
        if got != want {
            failures.push(format!("quantize({v}) = {got}, expected {want}"));
        }
    }
    let el = t.elapsed();
    let pass = failures.is_empty() && el < Duration::from_secs(5);
    let detail = if failures.is_empty() { "all identities hold".to_string() } else { failures.join("; ") };
    report(9, pass, format!("{detail}, runtime {}", secs(el)));
}

#[test]
fn criterion_10_determinism() {
    let t = Instant::now();
    let (px, f) = four_class_model::<f64>();
    let ks = one_hot_kernel(&f);
    let config = OilConfig { restarts: 2, init: Init::Random { seed: 17 }, ..OilConfig::with_betas(0.7, 1.3) };
    let solve = || solution_to_json(&oil_optimize(&px, &ks, &config).unwrap()).unwrap();
    let same_solution = solve() == solve();
    let curve = || {
        let c = sweep(&px, &ks, &[0.0, 1.0, 5.0], Mode::Joint, &SweepControls::default(), 3).unwrap();
        let mut out = Vec::new();
        emit_curve_csv(&c, &mut out).unwrap();
        out
    };
    let same_curve = curve() == curve();
    let el = t.elapsed();
    let pass = same_solution && same_curve && el < Duration::from_secs(10);
    report(10, pass, format!("solution identical {same_solution}, sweep identical {same_curve}, runtime {}", secs(el)));
}
