//! Joint optimization of the input and output laundering kernels.

mod file;
mod reduce;
mod safeguard;
mod solve;
pub(crate) mod terms;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::{info, Alphabet, Distribution, Kernel};
use crate::scalar::Scalar;
use crate::special::{self, SolverControls};

pub(crate) use reduce::{embed, Reduced};
pub(crate) use safeguard::{guarded_step, Slack};
pub use file::{read_solution, solution_to_json, write_solution, SolutionFile};
pub use solve::Pin;
pub(crate) use solve::{derived_seed, initial_kernels, random_kernel, uniform_kernel};

/// Starting point for the kernels (the marginals always start uniform).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Init {
    Uniform,
    Random { seed: u64 },
}

impl Init {
    fn base_seed(self) -> u64 {
        match self {
            Init::Uniform => 0,
            Init::Random { seed } => seed,
        }
    }

    /// Initialization used by restart `i` (restart 0 is `self`).
    pub fn for_restart(self, i: usize) -> Init {
        if i == 0 {
            self
        } else {
            Init::Random { seed: derived_seed(self.base_seed(), i) }
        }
    }
}

/// Solver actually used to produce a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Joint,
    OutputOnly,
    InputOnly,
    Identity,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Joint => "joint",
            Route::OutputOnly => "output-only",
            Route::InputOnly => "input-only",
            Route::Identity => "identity",
        })
    }
}

impl Route {
    /// Weights the objective of a solution on this route is measured with.
    pub fn weights(self, beta1: f64, beta2: f64) -> (f64, f64) {
        match self {
            Route::Joint => (beta1, beta2),
            Route::OutputOnly => (0.0, beta2),
            Route::InputOnly => (beta1, 0.0),
            Route::Identity => (0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OilConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub restarts: usize,
    pub init: Init,
}

impl Default for OilConfig {
    /// Random start: from uniform kernels the joint iteration sits on a saddle
    /// where the laundered symbols are independent of the inputs.
    fn default() -> Self {
        OilConfig { beta1: 1.0, beta2: 1.0, max_iters: 10_000, tol: 1e-10, restarts: 0, init: Init::Random { seed: 0 } }
    }
}

impl OilConfig {
    pub fn with_betas(beta1: f64, beta2: f64) -> Self {
        OilConfig { beta1, beta2, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::config(format!("{name} must be finite and non-negative, got {b}")));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::config("max_iters must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::config(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    pub(crate) fn controls(&self, restart: usize) -> SolverControls {
        SolverControls { max_iters: self.max_iters, tol: self.tol, init: self.init.for_restart(restart) }
    }
}

/// Iterate of the alternating scheme: both kernels plus the auxiliary marginals.
#[derive(Debug, Clone)]
pub struct AlgorithmState<T> {
    pub k1: Kernel<T>,
    pub k2: Kernel<T>,
    /// Current estimate of the laundered-input marginal.
    pub marg_xtilde: Distribution<T>,
    /// Current estimate of the released-output marginal.
    pub marg_y: Distribution<T>,
    pub marg_ytilde: Distribution<T>,
    pub iter: usize,
}

impl<T: Scalar> AlgorithmState<T> {
    /// Starting state: kernels from `init`, marginals uniform on the laundered
    /// alphabets and `p(y~)` pushed forward from the uniform `p(x~)`.
    pub fn initial(px: &Distribution<T>, kstar: &Kernel<T>, init: Init) -> Result<Self> {
        check_model(px, kstar)?;
        let (x, y) = (px.alphabet().clone(), kstar.output().clone());
        let (k1, k2) = initial_kernels::<T>(init, x.len(), y.len(), Pin::Free);
        let marg_xtilde = Distribution::uniform(x.clone());
        let marg_ytilde = kstar.pushforward(&marg_xtilde)?;
        Ok(AlgorithmState {
            k1: Kernel::from_parts(x.clone(), x, k1),
            k2: Kernel::from_parts(y.clone(), y.clone(), k2),
            marg_xtilde,
            marg_y: Distribution::uniform(y),
            marg_ytilde,
            iter: 0,
        })
    }

    /// State whose marginals are the ones induced by `k1` and `k2`.
    pub fn consistent(px: &Distribution<T>, kstar: &Kernel<T>, k1: Kernel<T>, k2: Kernel<T>) -> Result<Self> {
        check_chain(px, kstar, &k1, &k2)?;
        let marg_xtilde = k1.pushforward(px)?;
        let marg_ytilde = kstar.pushforward(&marg_xtilde)?;
        let marg_y = k2.pushforward(&marg_ytilde)?;
        Ok(AlgorithmState { k1, k2, marg_xtilde, marg_y, marg_ytilde, iter: 0 })
    }
}

#[derive(Debug, Clone)]
pub struct OilSolution<T> {
    pub k1: Kernel<T>,
    pub k2: Kernel<T>,
    /// `k1`, then the model, then `k2`.
    pub effective: Kernel<T>,
    /// Objective at the start and after every iteration.
    pub objective_trace: Vec<T>,
    pub delta_trace: Vec<T>,
    pub converged: bool,
    pub residual: T,
    pub iterations: usize,
    pub objective: T,
    pub route: Route,
    pub config: OilConfig,
}

pub(crate) fn check_model<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>) -> Result<()> {
    if px.alphabet() != kstar.input() {
        return Err(Error::shape("input distribution alphabet differs from the model's input alphabet"));
    }
    Ok(())
}

fn check_chain<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>, k1: &Kernel<T>, k2: &Kernel<T>) -> Result<()> {
    check_model(px, kstar)?;
    if !k1.is_square_over(kstar.input()) {
        return Err(Error::shape("input kernel must map the model's input alphabet to itself"));
    }
    if !k2.is_square_over(kstar.output()) {
        return Err(Error::shape("output kernel must map the model's output alphabet to itself"));
    }
    Ok(())
}

fn check_betas(beta1: f64, beta2: f64) -> Result<()> {
    if !(beta1 >= 0.0 && beta2 >= 0.0 && beta1.is_finite() && beta2.is_finite()) {
        return Err(Error::config("tradeoff weights must be finite and non-negative"));
    }
    Ok(())
}

/// Expected divergence between the model and the laundered cascade, plus the
/// weighted leakage through each interface.
pub fn objective<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    beta1: f64,
    beta2: f64,
) -> Result<T> {
    check_chain(px, kstar, k1, k2)?;
    check_betas(beta1, beta2)?;
    Ok(terms::objective_raw(px.probs(), kstar.matrix(), k1.matrix(), k2.matrix(), T::lit(beta1), T::lit(beta2)))
}

/// Objective with the two marginals replaced by free reference distributions.
///
/// Equals [`objective`] when `h1` and `h2` are the induced marginals and is
/// larger otherwise, by `beta1 KL(p(x~) || h1) + beta2 KL(p(y) || h2)`.
pub fn j_functional<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    h1: &Distribution<T>,
    h2: &Distribution<T>,
    beta1: f64,
    beta2: f64,
) -> Result<T> {
    check_chain(px, kstar, k1, k2)?;
    check_betas(beta1, beta2)?;
    if h1.alphabet() != k1.output() || h2.alphabet() != k2.output() {
        return Err(Error::shape("reference marginals must live on the laundered alphabets"));
    }
    let (p, ks, m1, m2) = (px.probs(), kstar.matrix(), k1.matrix(), k2.matrix());
    let ks_k1 = ks.matmul(m1);
    let k = m2.matmul(&ks_k1);
    let pyt = ks_k1.matvec(p);
    let avg_kl = |w: &[T], kern: &Mat<T>, h: &[T]| -> T {
        w.iter()
            .enumerate()
            .filter(|(_, &wi)| wi > T::zero())
            .map(|(i, &wi)| wi * info::kl_raw(kern.col(i), h))
            .sum()
    };
    let mut v = info::expected_kl_raw(p, ks, &k);
    if beta1 > 0.0 {
        v = v + T::lit(beta1) * avg_kl(p, m1, h1.probs());
    }
    if beta2 > 0.0 {
        v = v + T::lit(beta2) * avg_kl(&pyt, m2, h2.probs());
    }
    Ok(v)
}

/// Plain (unguarded) input-kernel update from the state's kernels and marginals.
pub fn update_k1<T: Scalar>(
    state: &AlgorithmState<T>,
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta1: f64,
    beta2: f64,
) -> Result<Kernel<T>> {
    check_chain(px, kstar, &state.k1, &state.k2)?;
    if !(beta1 > 0.0) || !(beta2 >= 0.0) {
        return Err(Error::config("the input update needs beta1 > 0 and beta2 >= 0"));
    }
    let (ks, k1, k2) = (kstar.matrix(), state.k1.matrix(), state.k2.matrix());
    let k2ks = k2.matmul(ks);
    let k = k2ks.matmul(k1);
    let a = terms::a_matrix(ks, &k2ks, &k)?;
    let c = terms::c_vector(ks, k2, state.marg_y.probs());
    let l = terms::k1_log_weights(state.marg_xtilde.probs(), &a, &c, T::lit(beta1), T::lit(beta2));
    let mat = terms::kernel_from_log_weights(l)?;
    Ok(Kernel::from_parts(state.k1.input().clone(), state.k1.output().clone(), mat))
}

/// Plain output-kernel update. `state.k1` must already hold the freshly
/// updated input kernel; `state.k2` and the marginals are from the previous step.
pub fn update_k2<T: Scalar>(
    state: &AlgorithmState<T>,
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta2: f64,
) -> Result<Kernel<T>> {
    check_chain(px, kstar, &state.k1, &state.k2)?;
    if !(beta2 > 0.0) {
        return Err(Error::config("the output update needs beta2 > 0"));
    }
    let (ks, k1, k2) = (kstar.matrix(), state.k1.matrix(), state.k2.matrix());
    let ks_k1 = ks.matmul(k1);
    let kmix = k2.matmul(&ks_k1);
    let b = terms::b_matrix(px.probs(), ks, &ks_k1, &kmix)?;
    let l = terms::k2_log_weights(state.marg_y.probs(), &b, state.marg_ytilde.probs(), T::lit(beta2))?;
    let mat = terms::kernel_from_log_weights(l)?;
    Ok(Kernel::from_parts(state.k2.input().clone(), state.k2.output().clone(), mat))
}

/// Largest entrywise distance between `(k1, k2)` and the right-hand sides of
/// the optimality conditions, with marginals induced by the kernels.
pub fn fixed_point_residual<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    beta1: f64,
    beta2: f64,
) -> Result<T> {
    check_chain(px, kstar, k1, k2)?;
    if !(beta1 > 0.0 && beta2 > 0.0) {
        return Err(Error::config("the residual of both conditions needs beta1 > 0 and beta2 > 0"));
    }
    let (r1, r2) = terms::residual_blocks(
        px.probs(),
        kstar.matrix(),
        k1.matrix(),
        k2.matrix(),
        T::lit(beta1),
        T::lit(beta2),
    )?;
    Ok(r1.into_iter().chain(r2).fold(T::zero(), T::max))
}

/// Minimizes the objective. A zero weight switches to the matching
/// single-kernel solver with the other kernel fixed at the identity.
pub fn oil_optimize<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>, config: &OilConfig) -> Result<OilSolution<T>> {
    config.validate()?;
    check_model(px, kstar)?;
    let x = px.alphabet().clone();
    let y = kstar.output().clone();
    match (config.beta1 > 0.0, config.beta2 > 0.0) {
        (false, false) => {
            let k1 = Kernel::identity(x);
            let k2 = Kernel::identity(y);
            let objective = info::expected_kl(px, kstar, kstar)?;
            assemble(px, kstar, k1, k2, vec![objective], Vec::new(), true, T::zero(), Route::Identity, config)
        }
        (false, true) => best_special(config, |ctl| special::oil_y_general(px, kstar, config.beta2, ctl), |run| {
            assemble(px, kstar, Kernel::identity(x.clone()), run.kernel, run.objective_trace, run.delta_trace, run.converged, run.residual, Route::OutputOnly, config)
        }),
        (true, false) => best_special(config, |ctl| special::oil_x(px, kstar, config.beta1, ctl), |run| {
            assemble(px, kstar, run.kernel, Kernel::identity(y.clone()), run.objective_trace, run.delta_trace, run.converged, run.residual, Route::InputOnly, config)
        }),
        (true, true) => oil_optimize_pinned(px, kstar, config, Pin::Free),
    }
}

/// Output-only laundering of a deterministic model known only through the
/// frequencies `r` of its outputs. The solution is expressed on the
/// equivalent problem whose queries are the outputs themselves (`px = r`,
/// identity model); `config.beta1` is ignored.
pub fn oil_optimize_from_frequencies<T: Scalar>(r: &Distribution<T>, config: &OilConfig) -> Result<OilSolution<T>> {
    let config = OilConfig { beta1: 0.0, ..*config };
    config.validate()?;
    let y = r.alphabet().clone();
    let kstar = Kernel::identity(y.clone());
    if config.beta2 == 0.0 {
        return oil_optimize(r, &kstar, &config);
    }
    best_special(&config, |ctl| special::oil_y(&special::OilYInput::new(r.clone(), config.beta2).with_controls(*ctl)), |run| {
        assemble(r, &kstar, Kernel::identity(y.clone()), run.kernel, run.objective_trace, run.delta_trace, run.converged, run.residual, Route::OutputOnly, &config)
    })
}

/// Joint iteration with an optional kernel held at the identity. A pinned
/// kernel's leakage term is dropped from the objective.
pub fn oil_optimize_pinned<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    config: &OilConfig,
    pin: Pin,
) -> Result<OilSolution<T>> {
    config.validate()?;
    check_model(px, kstar)?;
    let (b1, b2) = match pin {
        Pin::Free => (config.beta1, config.beta2),
        Pin::K1Identity => (0.0, config.beta2),
        Pin::K2Identity => (config.beta1, 0.0),
    };
    if (pin != Pin::K1Identity && !(b1 > 0.0)) || (pin != Pin::K2Identity && !(b2 > 0.0)) {
        return Err(Error::config("the iterative path needs a positive weight for every free kernel"));
    }
    let (n, m) = (px.len(), kstar.output().len());
    let red = match pin {
        Pin::K1Identity => Reduced::by_support(px.probs(), kstar.matrix()),
        _ => Reduced::by_zero_rows(px.probs(), kstar.matrix()),
    };
    let ctl = solve::Controls { b1: T::lit(b1), b2: T::lit(b2), max_iters: config.max_iters, tol: T::lit(config.tol), pin };
    let mut best: Option<solve::RawRun<T>> = None;
    for i in 0..=config.restarts {
        let init = config.init.for_restart(i);
        let (k1, k2) = initial_kernels::<T>(init, red.x_keep.len(), red.y_keep.len(), pin);
        let run = solve::run(&red.px, &red.ks, k1, k2, &ctl)?;
        let better = best.as_ref().is_none_or(|b| last(&run.objective_trace) < last(&b.objective_trace));
        if better {
            best = Some(run);
        }
    }
    let run = best.expect("at least one run");
    let (r1, r2) = terms::residual_blocks(&red.px, &red.ks, &run.k1, &run.k2, T::lit(b1), T::lit(b2))?;
    let residual = r1.into_iter().chain(r2).fold(T::zero(), T::max);
    let k1 = Kernel::from_parts(px.alphabet().clone(), px.alphabet().clone(), embed(&run.k1, &red.x_keep, n));
    let k2 = Kernel::from_parts(kstar.output().clone(), kstar.output().clone(), embed(&run.k2, &red.y_keep, m));
    let route = match pin {
        Pin::Free => Route::Joint,
        Pin::K1Identity => Route::OutputOnly,
        Pin::K2Identity => Route::InputOnly,
    };
    assemble(px, kstar, k1, k2, run.objective_trace, run.delta_trace, run.converged, residual, route, config)
}

fn best_special<T: Scalar>(
    config: &OilConfig,
    mut solve: impl FnMut(&SolverControls) -> Result<special::SolverRun<T>>,
    finish: impl FnOnce(special::SolverRun<T>) -> Result<OilSolution<T>>,
) -> Result<OilSolution<T>> {
    let mut best: Option<special::SolverRun<T>> = None;
    for i in 0..=config.restarts {
        let run = solve(&config.controls(i))?;
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    finish(best.expect("at least one run"))
}

fn last<T: Scalar>(v: &[T]) -> T {
    *v.last().expect("trace holds the initial value")
}

#[allow(clippy::too_many_arguments)]
fn assemble<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    k1: Kernel<T>,
    k2: Kernel<T>,
    objective_trace: Vec<T>,
    delta_trace: Vec<T>,
    converged: bool,
    residual: T,
    route: Route,
    config: &OilConfig,
) -> Result<OilSolution<T>> {
    let effective = k1.then(kstar)?.then(&k2)?;
    let (b1, b2) = route.weights(config.beta1, config.beta2);
    let objective = terms::objective_raw(px.probs(), kstar.matrix(), k1.matrix(), k2.matrix(), T::lit(b1), T::lit(b2));
    Ok(OilSolution {
        k1,
        k2,
        effective,
        iterations: delta_trace.len(),
        objective_trace,
        delta_trace,
        converged,
        residual,
        objective,
        route,
        config: *config,
    })
}

/// Square kernel over `alphabet` from a raw matrix (crate-internal convenience).
pub(crate) fn square<T: Scalar>(alphabet: &Alphabet, mat: Mat<T>) -> Kernel<T> {
    Kernel::from_parts(alphabet.clone(), alphabet.clone(), mat)
}
