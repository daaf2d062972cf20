use crate::error::{Error, Result};
use crate::linalg::LinearSolve;
use crate::scalar::{max_abs, Real};

use super::SemidiscreteSystem;

/// Two-stage SDIRK tableau `A = [[γ, 0], [1 - 2γ, γ]]`, `b = (1/2, 1/2)`, `c = (γ, 1 - γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ButcherTableau<T> {
    pub gamma: T,
    pub a: [[T; 2]; 2],
    pub b: [T; 2],
    pub c: [T; 2],
}

impl<T: Real> ButcherTableau<T> {
    pub fn sdirk(gamma: T) -> Self {
        let one = T::one();
        let half = T::lit(0.5);
        let a10 = one - gamma - gamma;
        Self {
            gamma,
            a: [[gamma, T::zero()], [a10, gamma]],
            b: [half, half],
            c: [gamma, a10 + gamma],
        }
    }

    /// `γ = 1/2`: second order.
    pub fn gamma_half() -> Self {
        Self::sdirk(T::lit(0.5))
    }

    /// `γ = (3 + √3)/6`: third order.
    pub fn gamma_third_order() -> Self {
        Self::sdirk((T::lit(3.0) + T::lit(3.0).sqrt()) / T::lit(6.0))
    }
}

/// Step size and fixed-point controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig<T> {
    pub dt: T,
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_iterations: usize,
    /// Iterate growth (relative to the step's initial state) treated as divergence.
    pub divergence_factor: T,
    /// Overrides the system's own linearity flag when set.
    pub linear: Option<bool>,
}

impl<T: Real> StepperConfig<T> {
    pub fn new(dt: T) -> Self {
        Self {
            dt,
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            max_iterations: 100,
            divergence_factor: T::lit(1e6),
            linear: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if !(self.abs_tol > T::zero()) || !(self.rel_tol > T::zero()) {
            return Err(Error::InvalidArgument(
                "fixed-point tolerances must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A one-step time integrator.
pub trait TimeStepper<T: Real> {
    fn dt(&self) -> T;

    /// Advances `v` from `t` to `t + dt`.
    fn step(&mut self, v: &mut [T], t: T) -> Result<()>;
}

/// Two-stage SDIRK stepper.
///
/// Linear systems solve each stage directly with the factored `M - Δtγ L`,
/// nonlinear ones iterate `M y ← M Vⁿ + Δt Σ a_ij k_j + Δtγ R(y)`.
pub struct SdirkStepper<'a, T: Real> {
    system: &'a dyn SemidiscreteSystem<T>,
    tableau: ButcherTableau<T>,
    config: StepperConfig<T>,
    linear: bool,
    mass: Box<dyn LinearSolve<T>>,
    stage: Option<Box<dyn LinearSolve<T>>>,
    cache: bool,
    histogram: Vec<usize>,
}

impl<'a, T: Real> SdirkStepper<'a, T> {
    pub fn new(
        system: &'a dyn SemidiscreteSystem<T>,
        tableau: ButcherTableau<T>,
        config: StepperConfig<T>,
    ) -> Result<Self> {
        config.validate()?;
        let linear = config.linear.unwrap_or_else(|| system.is_linear());
        Ok(Self {
            system,
            tableau,
            config,
            linear,
            mass: system.factor_mass()?,
            stage: None,
            cache: true,
            histogram: Vec::new(),
        })
    }

    /// Disables reuse of the stage factorization across steps.
    pub fn without_cache(mut self) -> Self {
        self.cache = false;
        self
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// `histogram[k]` counts fixed-point stage solves that took `k` iterations.
    pub fn iteration_histogram(&self) -> &[usize] {
        &self.histogram
    }

    pub fn max_iterations_used(&self) -> usize {
        self.histogram.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    fn stage_solver(&mut self) -> Result<&dyn LinearSolve<T>> {
        if self.stage.is_none() || !self.cache {
            self.stage = Some(
                self.system
                    .factor_shifted(self.config.dt * self.tableau.gamma)?,
            );
        }
        Ok(self.stage.as_deref().expect("stage factorization present"))
    }

    fn solve_linear_stage(&mut self, known: &[T], t: T) -> Result<Vec<T>> {
        let n = known.len();
        let mut g = vec![T::zero(); n];
        self.system.forcing(t, &mut g);
        let scale = self.config.dt * self.tableau.gamma;
        let mut y: Vec<T> = known.iter().zip(&g).map(|(&k, &g)| k + scale * g).collect();
        self.stage_solver()?.solve_in_place(&mut y);
        Ok(y)
    }

    fn solve_nonlinear_stage(&mut self, known: &[T], start: &[T], t: T) -> Result<Vec<T>> {
        let n = known.len();
        let scale = self.config.dt * self.tableau.gamma;
        let limit = self.config.divergence_factor * max_abs(start).max(T::one());
        let mut y = start.to_vec();
        let mut r = vec![T::zero(); n];
        let mut last_update = T::infinity();
        for iteration in 1..=self.config.max_iterations {
            self.system.rhs(&y, t, &mut r)?;
            let mut next: Vec<T> = known.iter().zip(&r).map(|(&k, &r)| k + scale * r).collect();
            self.mass.solve_in_place(&mut next);
            let update = next
                .iter()
                .zip(&y)
                .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
            let size = max_abs(&y);
            y = next;
            last_update = update;
            if !update.is_finite() || max_abs(&y) > limit {
                break;
            }
            if update <= self.config.abs_tol + self.config.rel_tol * size {
                if self.histogram.len() <= iteration {
                    self.histogram.resize(iteration + 1, 0);
                }
                self.histogram[iteration] += 1;
                return Ok(y);
            }
        }
        Err(Error::FixedPointDivergence {
            iterations: self.config.max_iterations,
            last_update: last_update.to_f64().unwrap_or(f64::NAN),
        })
    }
}

impl<T: Real> TimeStepper<T> for SdirkStepper<'_, T> {
    fn dt(&self) -> T {
        self.config.dt
    }

    fn step(&mut self, v: &mut [T], t: T) -> Result<()> {
        let n = self.system.dim();
        if v.len() != n {
            return Err(Error::InvalidArgument(format!(
                "state has length {}, system dimension is {n}",
                v.len()
            )));
        }
        let dt = self.config.dt;
        let tab = self.tableau;
        let mut mv = vec![T::zero(); n];
        self.system.apply_mass(v, &mut mv);
        let mut k: [Vec<T>; 2] = [vec![T::zero(); n], vec![T::zero(); n]];
        for i in 0..2 {
            let mut known = mv.clone();
            for (j, kprev) in k.iter().enumerate().take(i) {
                let c = dt * tab.a[i][j];
                for (kn, &kj) in known.iter_mut().zip(kprev) {
                    *kn += c * kj;
                }
            }
            let ti = t + tab.c[i] * dt;
            let y = if self.linear {
                self.solve_linear_stage(&known, ti)?
            } else {
                self.solve_nonlinear_stage(&known, v, ti)?
            };
            self.system.rhs(&y, ti, &mut k[i])?;
        }
        let mut inc: Vec<T> = (0..n)
            .map(|r| tab.b[0] * k[0][r] + tab.b[1] * k[1][r])
            .collect();
        self.mass.solve_in_place(&mut inc);
        for (vi, d) in v.iter_mut().zip(inc) {
            *vi += dt * d;
        }
        Ok(())
    }
}

/// Explicit Euler `Vⁿ⁺¹ = Vⁿ + Δt M⁻¹ R(Vⁿ, tₙ)`.
pub struct ForwardEuler<'a, T: Real> {
    system: &'a dyn SemidiscreteSystem<T>,
    dt: T,
    mass: Box<dyn LinearSolve<T>>,
}

impl<'a, T: Real> ForwardEuler<'a, T> {
    pub fn new(system: &'a dyn SemidiscreteSystem<T>, dt: T) -> Result<Self> {
        StepperConfig::new(dt).validate()?;
        Ok(Self {
            system,
            dt,
            mass: system.factor_mass()?,
        })
    }
}

impl<T: Real> TimeStepper<T> for ForwardEuler<'_, T> {
    fn dt(&self) -> T {
        self.dt
    }

    fn step(&mut self, v: &mut [T], t: T) -> Result<()> {
        let mut r = vec![T::zero(); v.len()];
        self.system.rhs(v, t, &mut r)?;
        self.mass.solve_in_place(&mut r);
        for (vi, d) in v.iter_mut().zip(r) {
            *vi += self.dt * d;
        }
        Ok(())
    }
}

/// Single forward Euler step (factors the mass matrix on every call).
pub fn forward_euler_step<T: Real>(
    system: &dyn SemidiscreteSystem<T>,
    dt: T,
    v: &[T],
    t: T,
) -> Result<Vec<T>> {
    let mut out = v.to_vec();
    ForwardEuler::new(system, dt)?.step(&mut out, t)?;
    Ok(out)
}

/// Single SDIRK step with a fresh stepper.
pub fn sdirk_step<T: Real>(
    system: &dyn SemidiscreteSystem<T>,
    tableau: ButcherTableau<T>,
    config: StepperConfig<T>,
    v: &[T],
    t: T,
) -> Result<Vec<T>> {
    let mut out = v.to_vec();
    SdirkStepper::new(system, tableau, config)?.step(&mut out, t)?;
    Ok(out)
}
