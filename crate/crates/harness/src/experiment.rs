//! Turning a configuration into a result table.

use std::sync::Arc;

use pseudospec::norms::{
    error_norms_sampled, weighted_error_norms, ExactSamples, ReferenceSolution,
};
use pseudospec::operators::bn_eigenvalues;
use pseudospec::problems::{AffineDomainMap, Flux, InitialData, PDEProblem};
use pseudospec::reference::{
    manufactured_problem1, manufactured_problem2, SineSeriesSolution, Truncation,
};
use pseudospec::spectral::NodalField;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{Context, HarnessError, Result};
use crate::output::{EigenRow, ErrorRow, ProfileRow, ResultTable};
use crate::registry::{Evaluation, ExperimentId};
use crate::solve::{solve, Integrator, RunSpec};

/// Riemann problem with the porous-media flux on `(-60, 210)`.
pub fn riemann_problem(left: f64, right: f64) -> PDEProblem<f64> {
    PDEProblem {
        domain: (-60.0, 210.0),
        a: 5.0,
        alpha: 0.0,
        beta: -1.0,
        gamma: 1.0,
        flux: Some(Flux::porous()),
        source: None,
        boundary: (left, right),
        initial: InitialData::Riemann { left, right }.to_fn(),
    }
}

fn nonsmooth_data(id: ExperimentId) -> Option<InitialData<f64>> {
    match id {
        ExperimentId::NonsmoothPulse => Some(InitialData::SquarePulse),
        ExperimentId::NonsmoothTent => Some(InitialData::Tent),
        ExperimentId::NonsmoothPq | ExperimentId::NonsmoothPqDt2 => {
            Some(InitialData::PiecewiseQuadratic)
        }
        _ => None,
    }
}

/// Problem and exact solution of an experiment with a known answer.
pub fn reference_case(
    id: ExperimentId,
) -> Option<(PDEProblem<f64>, Arc<dyn ReferenceSolution<f64>>)> {
    match id {
        ExperimentId::Problem1 => {
            let m = manufactured_problem1::<f64>();
            Some((m.problem.clone(), Arc::new(m)))
        }
        ExperimentId::Problem2 => {
            let m = manufactured_problem2::<f64>();
            Some((m.problem.clone(), Arc::new(m)))
        }
        _ => {
            let data = nonsmooth_data(id)?;
            let mut truncation = Truncation::default();
            if id.h1_nonconvergent() {
                truncation.derivative_tolerance = 1e-5;
            }
            let series = SineSeriesSolution::for_initial_data(1.0, 1.0, data)
                .ok()?
                .with_truncation(truncation);
            Some((
                PDEProblem::linear(1.0, 1.0, move |x| data.eval(x)),
                Arc::new(series),
            ))
        }
    }
}

struct Job {
    integrator: Integrator,
    n: usize,
    dt: f64,
    group: usize,
}

fn jobs(cfg: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for (gi, &integrator) in cfg.integrators.iter().enumerate() {
        for (ni, &n) in cfg.n.iter().enumerate() {
            let dts = cfg.dt.values(n);
            let group = if dts.len() > 1 {
                gi * cfg.n.len() + ni
            } else {
                gi * cfg.n.len()
            };
            out.extend(dts.into_iter().map(|dt| Job {
                integrator,
                n,
                dt,
                group,
            }));
        }
    }
    out
}

fn spec_for(cfg: &ExperimentConfig, job: &Job) -> RunSpec {
    let mut spec = RunSpec::new(cfg.method, job.integrator, job.n, job.dt, cfg.t_end);
    spec.stepper = cfg.stepper;
    spec.stepper.dt = job.dt;
    spec.snapshots = cfg.snapshots.clone();
    spec
}

fn run_context(cfg: &ExperimentConfig, job: &Job) -> String {
    format!(
        "{} ({}, {}, N = {}, dt = {})",
        cfg.experiment, cfg.method, job.integrator, job.n, job.dt
    )
}

fn fill_rates(rows: &mut [ErrorRow], groups: &[usize], h1_rates: bool) {
    for k in 1..rows.len() {
        if groups[k] != groups[k - 1] {
            continue;
        }
        let (prev, cur) = (&rows[k - 1], &rows[k]);
        let rate = |a: f64, b: f64| (a > 0.0 && b > 0.0).then(|| (a / b).log2());
        let rl2 = rate(prev.l2, cur.l2);
        let rh1 = if h1_rates {
            rate(prev.h1, cur.h1)
        } else {
            None
        };
        rows[k].rate_l2 = rl2;
        rows[k].rate_h1 = rh1;
    }
}

fn error_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let (problem, exact) = reference_case(cfg.experiment).ok_or_else(|| {
        HarnessError::validation(
            "experiment",
            format!("{} has no reference solution", cfg.experiment),
        )
    })?;
    let map = problem
        .domain_map()
        .context(|| format!("{} domain", cfg.experiment))?;
    let shared = match cfg.evaluation {
        Evaluation::Chebyshev(p) => Some(
            ExactSamples::on_evaluation_grid(exact.as_ref(), map, p, cfg.t_end, true)
                .context(|| format!("{} exact samples", cfg.experiment))?,
        ),
        _ => None,
    };
    let jobs = jobs(cfg);
    let rows = jobs
        .par_iter()
        .map(|job| -> Result<ErrorRow> {
            let spec = spec_for(cfg, job);
            let out = solve(&problem, &spec).context(|| run_context(cfg, job))?;
            let report = measure(&out.final_field, map, exact.as_ref(), cfg, shared.as_ref())
                .context(|| format!("{} error norms", run_context(cfg, job)))?;
            Ok(ErrorRow {
                experiment: cfg.experiment.name().to_string(),
                method: cfg.method.name().to_string(),
                integrator: job.integrator.name().to_string(),
                n: job.n,
                dt: out.dt,
                t_end: cfg.t_end,
                l2: report.0,
                h1: report.1,
                linf: report.2,
                rate_l2: None,
                rate_h1: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = rows;
    let groups: Vec<usize> = jobs.iter().map(|j| j.group).collect();
    fill_rates(&mut rows, &groups, !cfg.experiment.h1_nonconvergent());
    Ok(ResultTable::Errors(rows))
}

fn measure(
    field: &NodalField<f64>,
    map: AffineDomainMap<f64>,
    exact: &dyn ReferenceSolution<f64>,
    cfg: &ExperimentConfig,
    shared: Option<&ExactSamples<f64>>,
) -> pseudospec::Result<(f64, f64, f64)> {
    let r = match (cfg.evaluation, shared) {
        (Evaluation::Weighted, _) => weighted_error_norms(field, map, exact, cfg.t_end)?,
        (Evaluation::Chebyshev(_), Some(s)) => error_norms_sampled(field, s)?,
        _ => {
            let s = ExactSamples::on_nodes(exact, map, field.grid(), cfg.t_end, true)?;
            error_norms_sampled(field, &s)?
        }
    };
    Ok((r.l2, r.h1, r.linf))
}

fn profile_table(cfg: &ExperimentConfig, problem: &PDEProblem<f64>) -> Result<ResultTable> {
    let map = problem
        .domain_map()
        .context(|| format!("{} domain", cfg.experiment))?;
    let jobs = jobs(cfg);
    let tables = jobs
        .par_iter()
        .map(|job| -> Result<Vec<ProfileRow>> {
            let out = solve(problem, &spec_for(cfg, job)).context(|| run_context(cfg, job))?;
            let mut rows = Vec::new();
            for (t, field) in &out.snapshots {
                for (&xi, &v) in field.grid().nodes().iter().zip(field.values()) {
                    rows.push(ProfileRow {
                        t: *t,
                        x: map.to_physical(xi),
                        v,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultTable::Profiles(
        tables.into_iter().flatten().collect(),
    ))
}

fn eigen_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rows = Vec::new();
    for &n in &cfg.n {
        let ev = bn_eigenvalues::<f64>(n).context(|| format!("eigen_bn, N = {n}"))?;
        rows.extend(ev.iter().take(6).enumerate().map(|(k, &e)| EigenRow {
            n,
            k: k + 1,
            eigenvalue: e,
        }));
    }
    Ok(ResultTable::Eigenvalues(rows))
}

/// Runs every combination of integrator, degree and step in `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.experiment {
        ExperimentId::EigenBn => eigen_table(cfg),
        ExperimentId::RiemannA | ExperimentId::RiemannB => {
            let left = cfg.experiment.riemann_left().expect("riemann experiment");
            profile_table(cfg, &riemann_problem(left, 0.0))
        }
        ExperimentId::Custom => {
            let problem = cfg.problem.as_ref().ok_or_else(|| {
                HarnessError::validation("problem", "the custom experiment needs a [problem] table")
            })?;
            profile_table(cfg, problem)
        }
        _ => error_table(cfg),
    }
}

/// Bounds and monotonicity of one profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileCheck {
    pub min: f64,
    pub max: f64,
    /// Total variation in excess of `|v_last - v_first|`, zero for a monotone profile.
    pub tv_excess: f64,
    pub finite: bool,
}

pub fn check_profile(values: &[f64]) -> ProfileCheck {
    let finite = values.iter().all(|v| v.is_finite());
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tv: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let net = match (values.first(), values.last()) {
        (Some(a), Some(b)) => (b - a).abs(),
        _ => 0.0,
    };
    ProfileCheck {
        min,
        max,
        tv_excess: tv - net,
        finite,
    }
}

/// Profile rows grouped by snapshot time, in output order.
pub fn split_profiles(rows: &[ProfileRow]) -> Vec<(f64, Vec<f64>)> {
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((t, v)) if *t == r.t => v.push(r.v),
            _ => out.push((r.t, vec![r.v])),
        }
    }
    out
}
