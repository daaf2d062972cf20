//! TOML experiment configuration.
//!
//! ```toml
//! experiment = "nonsmooth_tent"        # registry id, required
//! method = "legendre_gni"              # legendre_gni | legendre_shen | chebyshev_colloc
//! integrator = ["gamma_half", "gamma_third_order"]   # or a single name; euler also accepted
//! n = [32, 64, 128, 256]               # or a single degree
//! dt = "half_h"                        # half_h | quarter_h2 | number | list of numbers
//! t_end = 1.0
//! snapshots = [0.0, 0.5, 1.0]          # profile times (riemann, custom)
//! evaluation = 512                     # P of the Chebyshev evaluation grid | "nodes" | "weighted"
//! output = "tent.csv"
//!
//! [stepper]                            # fixed-point controls, all optional
//! abs_tol = 1e-12
//! rel_tol = 1e-10
//! max_iterations = 100
//! divergence_factor = 1e6
//!
//! [problem]                            # custom experiment only
//! domain = [-1.0, 1.0]
//! a = 1.0
//! alpha = 0.0
//! beta = -1.0
//! gamma = 0.0
//! flux = "none"                        # none | burgers | porous
//! boundary = [0.0, 0.0]
//! initial = "tent"                     # square_pulse | tent | piecewise_quadratic | riemann(SL,SR) | sin_pi | sech
//! ```
//!
//! Unset keys take the registry defaults of the experiment.

use std::path::PathBuf;

use pseudospec::problems::{Flux, InitialData, PDEProblem};
use pseudospec::time::StepperConfig;
use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::registry::{Evaluation, ExperimentId, TimeStep};
use crate::solve::{Integrator, Method};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDt {
    Value(f64),
    List(Vec<f64>),
    Rule(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawEvaluation {
    Points(i64),
    Mode(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStepper {
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
    max_iterations: Option<usize>,
    divergence_factor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    domain: Option<[f64; 2]>,
    a: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    flux: Option<String>,
    boundary: Option<[f64; 2]>,
    initial: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    method: Option<String>,
    integrator: Option<OneOrMany<String>>,
    n: Option<OneOrMany<i64>>,
    dt: Option<RawDt>,
    t_end: Option<f64>,
    snapshots: Option<Vec<f64>>,
    evaluation: Option<RawEvaluation>,
    output: Option<PathBuf>,
    stepper: Option<RawStepper>,
    problem: Option<RawProblem>,
}

/// Validated configuration with every default filled in.
#[derive(Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub method: Method,
    pub integrators: Vec<Integrator>,
    pub n: Vec<usize>,
    pub dt: TimeStep,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub evaluation: Evaluation,
    pub stepper: StepperConfig<f64>,
    pub problem: Option<PDEProblem<f64>>,
    pub output: Option<PathBuf>,
}

impl std::fmt::Debug for ExperimentConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExperimentConfig")
            .field("experiment", &self.experiment)
            .field("method", &self.method)
            .field("integrators", &self.integrators)
            .field("n", &self.n)
            .field("dt", &self.dt)
            .field("t_end", &self.t_end)
            .field("snapshots", &self.snapshots)
            .field("evaluation", &self.evaluation)
            .field("stepper", &self.stepper)
            .field("problem", &self.problem.is_some())
            .field("output", &self.output)
            .finish()
    }
}

impl ExperimentConfig {
    /// Registry defaults for `experiment`.
    pub fn defaults(experiment: ExperimentId) -> Self {
        let d = experiment.defaults();
        Self {
            experiment,
            method: d.method,
            integrators: d.integrators,
            n: d.n,
            dt: d.dt,
            t_end: d.t_end,
            snapshots: d.snapshots,
            evaluation: d.evaluation,
            stepper: StepperConfig::new(0.0),
            problem: None,
            output: None,
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.chars().count(), |i| before[i + 1..].chars().count())
        + 1;
    (line, column)
}

fn positive(field: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(HarnessError::validation(
            field,
            format!("must be positive and finite, got {x}"),
        ))
    }
}

fn build_problem(raw: RawProblem) -> Result<PDEProblem<f64>> {
    let domain = raw.domain.unwrap_or([-1.0, 1.0]);
    let flux = match raw.flux.as_deref().unwrap_or("none") {
        "none" => None,
        "burgers" => Some(Flux::burgers()),
        "porous" => Some(Flux::porous()),
        other => {
            return Err(HarnessError::validation(
                "problem.flux",
                format!("unknown flux `{other}`"),
            ))
        }
    };
    let data = InitialData::<f64>::from_name(&raw.initial).map_err(|_| {
        HarnessError::validation(
            "problem.initial",
            format!("unknown initial datum `{}`", raw.initial),
        )
    })?;
    let boundary = raw.boundary.unwrap_or([0.0, 0.0]);
    let problem = PDEProblem {
        domain: (domain[0], domain[1]),
        a: raw.a,
        alpha: raw.alpha.unwrap_or(0.0),
        beta: raw.beta.unwrap_or(0.0),
        gamma: raw.gamma.unwrap_or(0.0),
        flux,
        source: None,
        boundary: (boundary[0], boundary[1]),
        initial: data.to_fn(),
    };
    problem
        .validate()
        .map_err(|e| HarnessError::validation("problem", e.to_string()))?;
    Ok(problem)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        HarnessError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let experiment = ExperimentId::from_name(&raw.experiment).ok_or_else(|| {
        HarnessError::validation(
            "experiment",
            format!("unknown experiment `{}`", raw.experiment),
        )
    })?;
    let mut cfg = ExperimentConfig::defaults(experiment);

    if let Some(m) = raw.method {
        cfg.method = Method::from_name(&m)
            .ok_or_else(|| HarnessError::validation("method", format!("unknown method `{m}`")))?;
        cfg.evaluation = match (cfg.method, cfg.evaluation) {
            (Method::ChebyshevColloc, _) if experiment.has_errors() => Evaluation::Weighted,
            (_, Evaluation::Weighted) => Evaluation::Nodes,
            (_, e) => e,
        };
    }
    if let Some(list) = raw.integrator {
        cfg.integrators = list
            .into_vec()
            .iter()
            .map(|s| {
                Integrator::from_name(s).ok_or_else(|| {
                    HarnessError::validation("integrator", format!("unknown integrator `{s}`"))
                })
            })
            .collect::<Result<_>>()?;
        if cfg.integrators.is_empty() {
            return Err(HarnessError::validation("integrator", "empty list"));
        }
    }
    if let Some(n) = raw.n {
        cfg.n = n
            .into_vec()
            .into_iter()
            .map(|k| {
                usize::try_from(k).ok().filter(|&k| k >= 2).ok_or_else(|| {
                    HarnessError::validation("n", format!("degrees must be at least 2, got {k}"))
                })
            })
            .collect::<Result<_>>()?;
        if cfg.n.is_empty() {
            return Err(HarnessError::validation("n", "empty list"));
        }
    }
    if let Some(dt) = raw.dt {
        cfg.dt = match dt {
            RawDt::Value(x) => TimeStep::List(vec![positive("dt", x)?]),
            RawDt::List(v) if v.is_empty() => {
                return Err(HarnessError::validation("dt", "empty list"))
            }
            RawDt::List(v) => TimeStep::List(
                v.into_iter()
                    .map(|x| positive("dt", x))
                    .collect::<Result<_>>()?,
            ),
            RawDt::Rule(r) => match r.as_str() {
                "half_h" => TimeStep::HalfH,
                "quarter_h2" => TimeStep::QuarterH2,
                _ => {
                    return Err(HarnessError::validation(
                        "dt",
                        format!("unknown rule `{r}`"),
                    ))
                }
            },
        };
    }
    if let Some(t) = raw.t_end {
        cfg.t_end = positive("t_end", t)?;
    }
    if let Some(s) = raw.snapshots {
        if let Some(bad) = s.iter().find(|&&t| !(0.0..=cfg.t_end).contains(&t)) {
            return Err(HarnessError::validation(
                "snapshots",
                format!("time {bad} outside [0, t_end]"),
            ));
        }
        cfg.snapshots = s;
    }
    if let Some(e) = raw.evaluation {
        cfg.evaluation = match e {
            RawEvaluation::Points(p) if p >= 1 => Evaluation::Chebyshev(p as usize),
            RawEvaluation::Points(p) => {
                return Err(HarnessError::validation(
                    "evaluation",
                    format!("P must be at least 1, got {p}"),
                ))
            }
            RawEvaluation::Mode(m) => match m.as_str() {
                "nodes" => Evaluation::Nodes,
                "weighted" => Evaluation::Weighted,
                _ => {
                    return Err(HarnessError::validation(
                        "evaluation",
                        format!("unknown mode `{m}`"),
                    ))
                }
            },
        };
        if cfg.evaluation == Evaluation::Weighted && cfg.method != Method::ChebyshevColloc {
            return Err(HarnessError::validation(
                "evaluation",
                "weighted norms need chebyshev_colloc",
            ));
        }
    }
    if let Some(s) = raw.stepper {
        if let Some(x) = s.abs_tol {
            cfg.stepper.abs_tol = positive("stepper.abs_tol", x)?;
        }
        if let Some(x) = s.rel_tol {
            cfg.stepper.rel_tol = positive("stepper.rel_tol", x)?;
        }
        if let Some(k) = s.max_iterations {
            if k == 0 {
                return Err(HarnessError::validation(
                    "stepper.max_iterations",
                    "must be at least 1",
                ));
            }
            cfg.stepper.max_iterations = k;
        }
        if let Some(x) = s.divergence_factor {
            cfg.stepper.divergence_factor = positive("stepper.divergence_factor", x)?;
        }
    }
    match (experiment, raw.problem) {
        (ExperimentId::Custom, Some(p)) => cfg.problem = Some(build_problem(p)?),
        (ExperimentId::Custom, None) => {
            return Err(HarnessError::validation(
                "problem",
                "the custom experiment needs a [problem] table",
            ))
        }
        (_, Some(_)) => {
            return Err(HarnessError::validation(
                "problem",
                "only the custom experiment takes [problem]",
            ))
        }
        (_, None) => {}
    }
    if experiment == ExperimentId::Custom && cfg.snapshots.is_empty() {
        cfg.snapshots = vec![cfg.t_end];
    }
    cfg.output = raw.output;
    Ok(cfg)
}
