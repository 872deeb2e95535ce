use std::fs;
use std::path::Path;

use oil_core::bench::{self, Mode, QuantizerConfig, SweepControls};
use oil_core::engine::{oil_optimize, oil_optimize_from_frequencies, read_solution, write_solution, Init, OilConfig, SolutionFile};
use oil_core::prob::io::{read_distribution, read_model, Model};
use oil_core::prob::{Distribution, Kernel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{ApplyArgs, BenchmarkArgs, EvaluateArgs, ModeArg, OptimizeArgs, Problem, QuantizeArgs, SolverArgs, SweepArgs};
use crate::failure::{Failure, LoadContext, Outcome, SolveContext};
use crate::svg;

fn load_problem(p: &Problem) -> Outcome<(Distribution<f64>, Model<f64>)> {
    let (Some(model), Some(dist)) = (&p.model, &p.input_dist) else {
        return Err(Failure::usage("both --model and --input-dist are required"));
    };
    let model: Model<f64> = read_model(model).loading("reading --model")?;
    let px: Distribution<f64> = read_distribution(dist).loading("reading --input-dist")?;
    if px.alphabet() != model.input() {
        return Err(Failure::io("the input distribution's labels differ from the model's input labels"));
    }
    Ok((px, model))
}

fn solver_config(s: &SolverArgs, beta1: f64, beta2: f64) -> Outcome<OilConfig> {
    let c = OilConfig { beta1, beta2, max_iters: s.iters, tol: s.tol, restarts: s.restarts, init: Init::Random { seed: s.seed } };
    c.validate().solving()?;
    Ok(c)
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::io(format!("writing {}: {e}", path.display())))
}

/// Both kernels of a stored solution, checked against the problem's alphabets.
fn solution_kernels(path: &Path, kstar: &Kernel<f64>) -> Outcome<(SolutionFile, Kernel<f64>, Kernel<f64>)> {
    let file = read_solution(path).loading("reading --kernels")?;
    let (k1, k2) = file.kernels::<f64>().loading("reading --kernels")?;
    if !k1.is_square_over(kstar.input()) || !k2.is_square_over(kstar.output()) {
        return Err(Failure::io("the solution's kernels do not match the model's alphabets"));
    }
    Ok((file, k1, k2))
}

fn weights(mode: ModeArg, beta1: Option<f64>, beta2: Option<f64>) -> Outcome<(f64, f64)> {
    match (mode, beta1, beta2) {
        (ModeArg::Joint, Some(b1), Some(b2)) => Ok((b1, b2)),
        (ModeArg::Joint, _, _) => Err(Failure::usage("--mode joint needs --beta1 and --beta2")),
        (ModeArg::OutputOnly, None, Some(b2)) => Ok((0.0, b2)),
        (ModeArg::OutputOnly, _, _) => Err(Failure::usage("--mode output-only takes --beta2 only")),
        (ModeArg::InputOnly, Some(b1), None) => Ok((b1, 0.0)),
        (ModeArg::InputOnly, _, _) => Err(Failure::usage("--mode input-only takes --beta1 only")),
    }
}

pub fn optimize(a: OptimizeArgs) -> Outcome {
    let (beta1, beta2) = weights(a.mode, a.beta1, a.beta2)?;
    let config = solver_config(&a.solver, beta1, beta2)?;
    let (px, kstar, sol) = match &a.r {
        Some(r) => {
            if a.mode != ModeArg::OutputOnly {
                return Err(Failure::usage("--r requires --mode output-only"));
            }
            let r: Distribution<f64> = read_distribution(r).loading("reading --r")?;
            let sol = oil_optimize_from_frequencies(&r, &config).solving()?;
            let k = Kernel::identity(r.alphabet().clone());
            (r, k, sol)
        }
        None => {
            let (px, model) = load_problem(&a.problem)?;
            let kstar = model.kernel();
            let sol = oil_optimize(&px, &kstar, &config).solving()?;
            (px, kstar, sol)
        }
    };
    write_solution(&a.out, &sol).map_err(|e| Failure::io(format!("writing {}: {e}", a.out.display())))?;
    let (b1, b2) = sol.route.weights(beta1, beta2);
    let m = bench::exact_metrics(&px, &kstar, &sol.k1, &sol.k2, b1, b2).solving()?;
    let first = sol.delta_trace.first().copied().unwrap_or(0.0);
    let last = sol.delta_trace.last().copied().unwrap_or(0.0);
    println!(
        "route={} objective={:?} residual={:?} iterations={} converged={} utility_kl={:?} mi_input={:?} mi_output={:?} initial_delta={:?} final_delta={:?} k1_mean_diagonal={:?} k2_mean_diagonal={:?}",
        sol.route,
        sol.objective,
        sol.residual,
        sol.iterations,
        sol.converged,
        m.utility_kl,
        m.mi_input,
        m.mi_output,
        first,
        last,
        sol.k1.mean_diagonal(),
        sol.k2.mean_diagonal(),
    );
    Ok(())
}

pub fn sweep(a: SweepArgs) -> Outcome {
    let (px, model) = load_problem(&a.problem)?;
    let controls = SweepControls { solver: solver_config(&a.solver, 0.0, 0.0)?, samples: a.samples };
    let mode: Mode = a.mode.into();
    let curve = bench::sweep(&px, &model.kernel(), &a.betas, mode, &controls, a.solver.seed).solving()?;
    let mut csv = Vec::new();
    bench::emit_curve_csv(&curve, &mut csv).solving()?;
    write_text(&a.out_csv, &String::from_utf8(csv).expect("ascii csv"))?;
    if let Some(p) = &a.out_svg {
        write_text(p, &svg::tradeoff_chart(&curve))?;
    }
    let last = curve.points().last().expect("non-empty curve");
    println!(
        "points={} mode={mode} final_beta={:?} final_utility_kl={:?} final_mi_output={:?}",
        curve.len(),
        last.beta,
        last.utility_kl,
        last.mi_output
    );
    Ok(())
}

fn parse_pair(s: &str) -> Outcome<(f64, f64)> {
    let bad = || Failure::usage(format!("expected `a:b` with positive numbers, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn benchmark(a: BenchmarkArgs) -> Outcome {
    let pairs = a.dirichlet.iter().map(|s| parse_pair(s)).collect::<Outcome<Vec<_>>>()?;
    let (px, model) = load_problem(&a.problem)?;
    let rows = bench::dirichlet_baseline(&px, &model.kernel(), &pairs, a.replications, a.samples, a.seed).solving()?;
    let mut csv = Vec::new();
    bench::emit_benchmark_csv(&rows, &mut csv).solving()?;
    write_text(&a.out_csv, &String::from_utf8(csv).expect("ascii csv"))?;
    println!("rows={} replications={} seed={}", rows.len(), a.replications, a.seed);
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> Outcome {
    let (px, model) = load_problem(&a.problem)?;
    let kstar = model.kernel();
    let (file, k1, k2) = solution_kernels(&a.kernels, &kstar)?;
    let (b1, b2) = file.route.weights(file.config.beta1, file.config.beta2);
    let m = bench::exact_metrics(&px, &kstar, &k1, &k2, b1, b2).solving()?;
    let agreement = bench::monte_carlo_agreement(&kstar, &k1, &k2, &px, a.samples, a.seed).solving()?;
    let (_, fidelity) = bench::surrogate_extraction(&kstar, &k1, &k2, &px, a.samples, a.seed).solving()?;
    println!("utility_kl={:?}", m.utility_kl);
    println!("mi_input={:?}", m.mi_input);
    println!("mi_output={:?}", m.mi_output);
    println!("objective={:?}", m.objective);
    println!("agreement={agreement:?}");
    println!("extraction_fidelity={fidelity:?}");
    Ok(())
}

fn parse_values(text: &str) -> Option<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect()
}

pub fn quantize(a: QuantizeArgs) -> Outcome {
    let config = QuantizerConfig::new(a.mu, a.sigma, a.n).map_err(Failure::usage)?;
    let path = Path::new(&a.values);
    let values = if path.is_file() {
        let text = fs::read_to_string(path).loading("reading --values")?;
        parse_values(&text).ok_or_else(|| Failure::io(format!("{} holds a non-numeric entry", path.display())))?
    } else {
        parse_values(&a.values).ok_or_else(|| Failure::usage(format!("--values: `{}` is neither a file nor a number list", a.values)))?
    };
    let idx = bench::quantize_all(&values, &config).map_err(Failure::usage)?;
    println!("{}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    Ok(())
}

pub fn apply(a: ApplyArgs) -> Outcome {
    let model: Model<f64> = read_model(&a.model).loading("reading --model")?;
    let kstar = model.kernel();
    let (_, k1, k2) = solution_kernels(&a.kernels, &kstar)?;
    let x = kstar.input().index_of(&a.query).map_err(Failure::usage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut out = String::new();
    for _ in 0..a.repeat {
        let xt = k1.sample(x, &mut rng);
        let yt = match &model {
            Model::Deterministic(f) => f.apply(xt),
            Model::Kernel(k) => k.sample(xt, &mut rng),
        };
        let y = k2.sample(yt, &mut rng);
        out.push_str(kstar.output().label(y));
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}
