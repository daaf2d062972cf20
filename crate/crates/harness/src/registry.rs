//! Built-in experiments and their default settings.

use std::fmt;

use crate::solve::{Integrator, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Problem1,
    Problem2,
    NonsmoothPulse,
    NonsmoothTent,
    NonsmoothPq,
    NonsmoothPqDt2,
    RiemannA,
    RiemannB,
    EigenBn,
    Custom,
}

/// How the time step is chosen for each run.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeStep {
    List(Vec<f64>),
    /// `Δt = h/2`, `h = 2/N`.
    HalfH,
    /// `Δt = h²/4`.
    QuarterH2,
}

impl TimeStep {
    pub fn values(&self, n: usize) -> Vec<f64> {
        let h = 2.0 / n as f64;
        match self {
            TimeStep::List(v) => v.clone(),
            TimeStep::HalfH => vec![0.5 * h],
            TimeStep::QuarterH2 => vec![0.25 * h * h],
        }
    }
}

/// Where errors are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// `x_j = cos(jπ/P)`, interpolating the numerical solution.
    Chebyshev(usize),
    /// The solver's own quadrature nodes (`P = N`).
    Nodes,
    /// Chebyshev-weighted quadrature at the collocation nodes.
    Weighted,
}

/// Default settings of a registry entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Defaults {
    pub method: Method,
    pub integrators: Vec<Integrator>,
    pub n: Vec<usize>,
    pub dt: TimeStep,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub evaluation: Evaluation,
}

const DT_LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
const NONSMOOTH_N: [usize; 4] = [32, 64, 128, 256];

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::Problem1,
        ExperimentId::Problem2,
        ExperimentId::NonsmoothPulse,
        ExperimentId::NonsmoothTent,
        ExperimentId::NonsmoothPq,
        ExperimentId::NonsmoothPqDt2,
        ExperimentId::RiemannA,
        ExperimentId::RiemannB,
        ExperimentId::EigenBn,
        ExperimentId::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Problem1 => "problem1",
            ExperimentId::Problem2 => "problem2",
            ExperimentId::NonsmoothPulse => "nonsmooth_pulse",
            ExperimentId::NonsmoothTent => "nonsmooth_tent",
            ExperimentId::NonsmoothPq => "nonsmooth_pq",
            ExperimentId::NonsmoothPqDt2 => "nonsmooth_pq_dt2",
            ExperimentId::RiemannA => "riemann_a",
            ExperimentId::RiemannB => "riemann_b",
            ExperimentId::EigenBn => "eigen_bn",
            ExperimentId::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentId::Problem1 => "BBM-Burgers with u = e^-t sin(pi x), Legendre G-NI, time step ladder at N = 256",
            ExperimentId::Problem2 => "BBM-Burgers soliton on (-20, 30), Chebyshev collocation, time step ladder at N = 1024",
            ExperimentId::NonsmoothPulse => "linear problem from a square pulse, N = 32..256 with dt = h/2",
            ExperimentId::NonsmoothTent => "linear problem from the tent 1 - |x|, N = 32..256 with dt = h/2",
            ExperimentId::NonsmoothPq => "linear problem from piecewise-quadratic data, N = 32..256 with dt = h/2",
            ExperimentId::NonsmoothPqDt2 => "piecewise-quadratic data with dt = h^2/4, third-order scheme",
            ExperimentId::RiemannA => "porous-media flux, Riemann data S_L = 0.9, profiles up to t = 150",
            ExperimentId::RiemannB => "porous-media flux, Riemann data S_L = 0.55, profiles up to t = 150",
            ExperimentId::EigenBn => "six smallest eigenvalues of the Shen mass matrix for N = 16, 32, 64",
            ExperimentId::Custom => "user-defined problem from the [problem] table, profiles at snapshot times",
        }
    }

    /// Exact solution known, so the run produces error rows.
    pub fn has_errors(self) -> bool {
        !matches!(
            self,
            ExperimentId::RiemannA
                | ExperimentId::RiemannB
                | ExperimentId::EigenBn
                | ExperimentId::Custom
        )
    }

    /// The `H¹` error is reported but does not converge (jump in the data).
    pub fn h1_nonconvergent(self) -> bool {
        self == ExperimentId::NonsmoothPulse
    }

    /// Left state of the Riemann experiments.
    pub fn riemann_left(self) -> Option<f64> {
        match self {
            ExperimentId::RiemannA => Some(0.9),
            ExperimentId::RiemannB => Some(0.55),
            _ => None,
        }
    }

    pub fn defaults(self) -> Defaults {
        let both = vec![Integrator::GammaHalf, Integrator::GammaThirdOrder];
        let nonsmooth = |integrators: Vec<Integrator>, dt: TimeStep| Defaults {
            method: Method::LegendreGni,
            integrators,
            n: NONSMOOTH_N.to_vec(),
            dt,
            t_end: 1.0,
            snapshots: Vec::new(),
            evaluation: Evaluation::Nodes,
        };
        match self {
            ExperimentId::Problem1 => Defaults {
                method: Method::LegendreGni,
                integrators: both,
                n: vec![256],
                dt: TimeStep::List(DT_LADDER.to_vec()),
                t_end: 1.0,
                snapshots: Vec::new(),
                evaluation: Evaluation::Nodes,
            },
            ExperimentId::Problem2 => Defaults {
                method: Method::ChebyshevColloc,
                integrators: both,
                n: vec![1024],
                dt: TimeStep::List(DT_LADDER.to_vec()),
                t_end: 10.0,
                snapshots: Vec::new(),
                evaluation: Evaluation::Weighted,
            },
            ExperimentId::NonsmoothPulse
            | ExperimentId::NonsmoothTent
            | ExperimentId::NonsmoothPq => nonsmooth(both, TimeStep::HalfH),
            ExperimentId::NonsmoothPqDt2 => {
                nonsmooth(vec![Integrator::GammaThirdOrder], TimeStep::QuarterH2)
            }
            ExperimentId::RiemannA | ExperimentId::RiemannB => Defaults {
                method: Method::LegendreGni,
                integrators: vec![Integrator::GammaThirdOrder],
                n: vec![512],
                dt: TimeStep::List(vec![0.05]),
                t_end: 150.0,
                snapshots: vec![0.0, 30.0, 60.0, 90.0, 120.0, 150.0],
                evaluation: Evaluation::Nodes,
            },
            ExperimentId::EigenBn => Defaults {
                method: Method::LegendreShen,
                integrators: Vec::new(),
                n: vec![16, 32, 64],
                dt: TimeStep::List(Vec::new()),
                t_end: 0.0,
                snapshots: Vec::new(),
                evaluation: Evaluation::Nodes,
            },
            ExperimentId::Custom => Defaults {
                method: Method::LegendreGni,
                integrators: vec![Integrator::GammaThirdOrder],
                n: vec![64],
                dt: TimeStep::List(vec![0.01]),
                t_end: 1.0,
                snapshots: Vec::new(),
                evaluation: Evaluation::Nodes,
            },
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
