//! One solve: build the semidiscrete system, step it to `T`, return nodal fields.

use std::fmt;
use std::sync::Arc;

use pseudospec::operators::{
    assemble_collocation, assemble_gni_bbm, legendre_nodal_to_shen, shen_matrices, shen_to_nodal,
    NodalSystem, ShenLinearSystem,
};
use pseudospec::problems::PDEProblem;
use pseudospec::spectral::{chebyshev_gl_grid, legendre_gl_grid, GaussLobattoGrid, NodalField};
use pseudospec::time::{
    integrate, step_count, ButcherTableau, ForwardEuler, SdirkStepper, SemidiscreteSystem,
    StepperConfig, TimeStepper,
};
use pseudospec::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    LegendreGni,
    LegendreShen,
    ChebyshevColloc,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::LegendreGni,
        Method::LegendreShen,
        Method::ChebyshevColloc,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::LegendreGni => "legendre_gni",
            Method::LegendreShen => "legendre_shen",
            Method::ChebyshevColloc => "chebyshev_colloc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Integrator {
    GammaHalf,
    GammaThirdOrder,
    Euler,
}

impl Integrator {
    pub const ALL: [Integrator; 3] = [
        Integrator::GammaHalf,
        Integrator::GammaThirdOrder,
        Integrator::Euler,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Integrator::GammaHalf => "gamma_half",
            Integrator::GammaThirdOrder => "gamma_third_order",
            Integrator::Euler => "euler",
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Discretization parameters of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub method: Method,
    pub integrator: Integrator,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Times at which the solution is recorded, rounded to the nearest step.
    pub snapshots: Vec<f64>,
    pub stepper: StepperConfig<f64>,
}

impl RunSpec {
    pub fn new(method: Method, integrator: Integrator, n: usize, dt: f64, t_end: f64) -> Self {
        Self {
            method,
            integrator,
            n,
            dt,
            t_end,
            snapshots: Vec::new(),
            stepper: StepperConfig::new(dt),
        }
    }
}

/// Solution fields on the reference grid.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dt: f64,
    pub steps: usize,
    pub final_field: NodalField<f64>,
    pub snapshots: Vec<(f64, NodalField<f64>)>,
    pub max_iterations: usize,
}

fn grid_for(method: Method, n: usize) -> Result<Arc<GaussLobattoGrid<f64>>> {
    Ok(Arc::new(match method {
        Method::LegendreGni | Method::LegendreShen => legendre_gl_grid(n)?,
        Method::ChebyshevColloc => chebyshev_gl_grid(n)?,
    }))
}

fn shen_compatible(problem: &PDEProblem<f64>) -> bool {
    problem.domain == (-1.0, 1.0)
        && problem.alpha == 0.0
        && problem.gamma == 0.0
        && problem.source.is_none()
        && problem.boundary == (0.0, 0.0)
        && problem.beta < 0.0
}

fn tableau(integrator: Integrator) -> Option<ButcherTableau<f64>> {
    match integrator {
        Integrator::GammaHalf => Some(ButcherTableau::gamma_half()),
        Integrator::GammaThirdOrder => Some(ButcherTableau::gamma_third_order()),
        Integrator::Euler => None,
    }
}

struct Stepped {
    dt: f64,
    steps: usize,
    final_state: Vec<f64>,
    snapshots: Vec<(f64, Vec<f64>)>,
    max_iterations: usize,
}

fn march(system: &dyn SemidiscreteSystem<f64>, initial: &[f64], spec: &RunSpec) -> Result<Stepped> {
    let (steps, dt) = step_count(spec.t_end, spec.dt)?;
    let mut snap_steps: Vec<usize> = spec
        .snapshots
        .iter()
        .map(|&t| (t / dt).round() as usize)
        .collect();
    snap_steps.retain(|&k| k <= steps);
    let mut config = spec.stepper;
    config.dt = dt;
    let (traj, max_iterations) = match tableau(spec.integrator) {
        Some(tab) => {
            let mut stepper = SdirkStepper::new(system, tab, config)?;
            let traj = integrate(&mut stepper, initial, steps, &snap_steps)?;
            (traj, stepper.max_iterations_used())
        }
        None => {
            let mut stepper = ForwardEuler::new(system, dt)?;
            (
                integrate(
                    &mut stepper as &mut dyn TimeStepper<f64>,
                    initial,
                    steps,
                    &snap_steps,
                )?,
                0,
            )
        }
    };
    Ok(Stepped {
        dt,
        steps,
        final_state: traj.final_state,
        snapshots: traj.snapshots.into_iter().map(|(_, t, v)| (t, v)).collect(),
        max_iterations,
    })
}

/// Discretizes `problem` with `spec.method` and integrates it to `spec.t_end`.
pub fn solve(problem: &PDEProblem<f64>, spec: &RunSpec) -> Result<RunOutput> {
    problem.validate()?;
    let grid = grid_for(spec.method, spec.n)?;
    match spec.method {
        Method::LegendreShen => {
            if !shen_compatible(problem) {
                return Err(Error::InvalidArgument(
                    "the Shen solver handles only v_t - a v_xxt = b v_xx on (-1, 1) with zero boundary values".into(),
                ));
            }
            let system = ShenLinearSystem::new(shen_matrices(spec.n, problem.a, -problem.beta)?);
            let initial = legendre_nodal_to_shen(&grid.sample(|x| (problem.initial)(x)))?;
            let run = march(&system, &initial, spec)?;
            let snapshots = run
                .snapshots
                .iter()
                .map(|(t, c)| Ok((*t, shen_to_nodal(c, &grid)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(RunOutput {
                dt: run.dt,
                steps: run.steps,
                final_field: shen_to_nodal(&run.final_state, &grid)?,
                snapshots,
                max_iterations: run.max_iterations,
            })
        }
        Method::LegendreGni | Method::ChebyshevColloc => {
            let system: NodalSystem<f64> = if spec.method == Method::LegendreGni {
                assemble_gni_bbm(Arc::clone(&grid), problem)?
            } else {
                assemble_collocation(Arc::clone(&grid), problem)?
            };
            let run = march(&system, &system.initial_state(), spec)?;
            Ok(RunOutput {
                dt: run.dt,
                steps: run.steps,
                final_field: system.solution_field(&run.final_state),
                snapshots: run
                    .snapshots
                    .iter()
                    .map(|(t, v)| (*t, system.solution_field(v)))
                    .collect(),
                max_iterations: run.max_iterations,
            })
        }
    }
}
