//! Multistart derivative-free maximization of the anomaly margin.
//!
//! Unconstrained search runs over the 8-entry probability table: a
//! Nelder-Mead simplex moves in `R^8` and every evaluated point is first
//! projected onto the probability simplex, so every iterate is a valid model.
//! The conditionally independent search runs over the five probabilities of a
//! product model `Pr(psi) Pr(s|psi) Pr(phi|psi)`, clamped to `[0, 1]`.
//!
//! Restarts are independent and run in parallel; the merge keeps the largest
//! margin and breaks ties by the lowest restart index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::ci::ProductModel;
use crate::error::{Error, Result};
use crate::generators::classical_maximal;
use crate::model::{CoefficientVector, Outcome, ProbabilityTable, Sign};
use crate::shift::shift_report;

pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_EVALS_PER_RESTART: usize = 2000;
/// Local search stops once the best value improves by less than this ...
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// ... over this many iterations.
pub const CONVERGENCE_WINDOW: usize = 50;

const INITIAL_STEP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    None,
    RequireCi,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub best_model: CoefficientVector,
    pub best_margin: f64,
    pub witness: (Sign, Sign),
    /// `(iteration, best margin so far)` for the winning restart.
    pub trace: Vec<(usize, f64)>,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    pub constraint: Constraint,
    pub restarts: usize,
    pub evals_per_restart: usize,
    pub seed: u64,
    /// Relabel `s -> -s` in every start point.
    pub flip_starts: bool,
}

impl OptimizerConfig {
    pub fn new(constraint: Constraint, restarts: usize, seed: u64) -> Self {
        OptimizerConfig {
            constraint,
            restarts,
            evals_per_restart: DEFAULT_EVALS_PER_RESTART,
            seed,
            flip_starts: false,
        }
    }
}

/// Largest defined margin of a table; tables with no defined margin score `-inf`.
pub fn margin_objective(table: &ProbabilityTable) -> (f64, (Sign, Sign)) {
    shift_report(table)
        .ok()
        .and_then(|r| r.max_margin())
        .unwrap_or((f64::NEG_INFINITY, (Sign::Plus, Sign::Plus)))
}

/// Euclidean projection onto `{x : x_i >= 0, sum x_i = 1}`.
pub fn project_to_simplex(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut shift = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            shift = t;
        }
    }
    x.iter().map(|&v| (v - shift).max(0.0)).collect()
}

fn table_from_point(x: &[f64]) -> ProbabilityTable {
    let p = project_to_simplex(x);
    let sum: f64 = p.iter().sum();
    let mut entries = [0.0; 8];
    for (e, v) in entries.iter_mut().zip(&p) {
        *e = v / sum;
    }
    ProbabilityTable::new(entries).expect("projection lands on the simplex")
}

#[derive(Clone, Debug)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder-Mead maximization of `f` from `x0` with an axis-aligned initial simplex.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
) -> LocalResult {
    let n = x0.len();
    let mut evals = 0usize;
    // Minimize the negated objective.
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        -f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    let mut trace = vec![(0, -v0)];
    for i in 0..n {
        if evals >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    if simplex.len() < n + 1 {
        let (x, v) = best_of(&simplex);
        return LocalResult {
            x,
            value: -v,
            trace,
            evaluations: evals,
            converged: false,
        };
    }

    let mut history: Vec<f64> = vec![];
    let mut iteration = 0;
    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        iteration += 1;
        trace.push((iteration, -best));
        history.push(best);
        if history.len() > CONVERGENCE_WINDOW {
            let old = history[history.len() - 1 - CONVERGENCE_WINDOW];
            if old - best < CONVERGENCE_TOL {
                converged = true;
                break;
            }
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 && evals < max_evals {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 || evals >= max_evals {
            if fr < worst.1 {
                simplex[n] = (xr, fr);
            }
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if evals >= max_evals {
                break;
            }
            let x: Vec<f64> = x_best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let v = eval(&x, &mut evals);
            *vertex = (x, v);
        }
    }

    let (x, v) = best_of(&simplex);
    if trace.last().is_none_or(|&(_, m)| m < -v) {
        trace.push((iteration + 1, -v));
    }
    LocalResult {
        x,
        value: -v,
        trace,
        evaluations: evals,
        converged,
    }
}

fn best_of(simplex: &[(Vec<f64>, f64)]) -> (Vec<f64>, f64) {
    simplex
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .expect("nonempty simplex")
}

/// Refines one table by projected Nelder-Mead on the simplex.
pub fn local_search(start: &ProbabilityTable, max_evals: usize) -> (ProbabilityTable, LocalResult) {
    let result = nelder_mead(
        |x| margin_objective(&table_from_point(x)).0,
        start.entries(),
        INITIAL_STEP,
        max_evals,
    );
    (table_from_point(&result.x), result)
}

/// Refines one product model over its five probabilities.
pub fn local_search_ci(start: &ProductModel, max_evals: usize) -> (ProbabilityTable, LocalResult) {
    let result = nelder_mead(
        |x| margin_objective(&ProductModel::from_clamped(x).table()).0,
        &start.params(),
        INITIAL_STEP,
        max_evals,
    );
    (ProductModel::from_clamped(&result.x).table(), result)
}

/// Start points that do not depend on the seed, in restart order.
fn deterministic_starts(constraint: Constraint) -> Vec<Start> {
    match constraint {
        Constraint::None => {
            let mut starts = vec![Start::Table(ProbabilityTable::uniform())];
            let cmax = classical_maximal();
            let anti = CoefficientVector::new([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
            for c in [cmax, anti] {
                starts.push(Start::Table(
                    c.to_table().expect("valid analytic candidate"),
                ));
            }
            starts.extend(Outcome::all().map(|o| Start::Table(ProbabilityTable::point_mass(o))));
            starts
        }
        Constraint::RequireCi => vec![Start::Product(
            ProductModel::new(0.5, [0.5; 2], [0.5; 2]).expect("valid"),
        )],
    }
}

#[derive(Clone, Debug)]
enum Start {
    Table(ProbabilityTable),
    Product(ProductModel),
}

fn random_start(constraint: Constraint, seed: u64, restart: usize) -> Start {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    match constraint {
        Constraint::None => {
            let mut p = [0.0; 8];
            for v in p.iter_mut() {
                *v = Exp1.sample(&mut rng);
            }
            let sum: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= sum);
            Start::Table(ProbabilityTable::new(p).expect("dirichlet draw"))
        }
        Constraint::RequireCi => {
            let x: [f64; 5] = std::array::from_fn(|_| rng.random::<f64>());
            Start::Product(ProductModel::from_clamped(&x))
        }
    }
}

struct RestartOutcome {
    table: ProbabilityTable,
    margin: f64,
    trace: Vec<(usize, f64)>,
    evaluations: usize,
}

fn run_restart(start: Start, flip: bool, max_evals: usize) -> RestartOutcome {
    let (table, local) = match start {
        Start::Table(t) => {
            let t = if flip { t.flip_s() } else { t };
            local_search(&t, max_evals)
        }
        Start::Product(m) => {
            let m = if flip {
                ProductModel {
                    s_plus: [1.0 - m.s_plus[0], 1.0 - m.s_plus[1]],
                    ..m
                }
            } else {
                m
            };
            local_search_ci(&m, max_evals)
        }
    };
    RestartOutcome {
        margin: margin_objective(&table).0,
        table,
        trace: local.trace,
        evaluations: local.evaluations,
    }
}

/// Runs the multistart search. Returns [`Error::BudgetExhausted`] carrying the
/// best result when the restart budget did not cover every deterministic start.
pub fn run(config: &OptimizerConfig) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(Error::domain(
            "budget",
            0.0,
            "at least one restart is required",
        ));
    }
    let fixed = deterministic_starts(config.constraint);
    let n_fixed = fixed.len();
    let starts: Vec<Start> = (0..config.restarts)
        .map(|i| {
            fixed
                .get(i)
                .cloned()
                .unwrap_or_else(|| random_start(config.constraint, config.seed, i))
        })
        .collect();

    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .map(|s| run_restart(s, config.flip_starts, config.evals_per_restart))
        .collect();

    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let (best_restart, best) = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartOutcome)>, |acc, (i, o)| match acc {
            Some((_, b)) if b.margin >= o.margin => acc,
            _ => Some((i, o)),
        })
        .expect("at least one restart");

    let best_model = best.table.coefficients();
    // Report the margin as recomputed from the coefficient vector itself.
    let recomputed = best_model
        .to_table()
        .map(|t| margin_objective(&t))
        .unwrap_or_else(|_| margin_objective(&best.table));
    let result = OptimizationResult {
        best_model,
        best_margin: recomputed.0,
        witness: recomputed.1,
        trace: best.trace.clone(),
        restarts_used: config.restarts,
        best_restart,
        evaluations,
    };
    if config.restarts < n_fixed {
        return Err(Error::BudgetExhausted(Box::new(result)));
    }
    Ok(result)
}

/// Maximizes the margin with `budget` restarts of the default evaluation cap.
pub fn maximize_margin(
    constraint: Constraint,
    budget: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    run(&OptimizerConfig::new(constraint, budget, seed))
}
