//! Discrete error norms on the Chebyshev evaluation grid and convergence rates.

use crate::error::{Error, Result};
use crate::problems::AffineDomainMap;
use crate::reference::{ManufacturedSolution, SineSeriesSolution};
use crate::scalar::Real;
use crate::spectral::{
    diff_matrix, interpolant_eval, GaussLobattoGrid, NodalField, PolynomialFamily,
};

pub const DEFAULT_EVALUATION_POINTS: usize = 512;

/// `x_j = cos(jπ/P)`, `j = 0..=P`.
pub fn evaluation_grid<T: Real>(p: usize) -> Vec<T> {
    let pf = T::from_usize_lossy(p);
    (0..=p)
        .map(|j| (T::PI() * T::from_usize_lossy(j) / pf).cos())
        .collect()
}

/// Anything that can be sampled, with its `x`-derivative, at a fixed time.
pub trait ReferenceSolution<T: Real>: Send + Sync {
    /// Values and, if requested, derivatives at physical points.
    fn sample(&self, points: &[T], t: T, derivatives: bool) -> Result<(Vec<T>, Option<Vec<T>>)>;
}

impl<T: Real> ReferenceSolution<T> for ManufacturedSolution<T> {
    fn sample(&self, points: &[T], t: T, derivatives: bool) -> Result<(Vec<T>, Option<Vec<T>>)> {
        let values = points.iter().map(|&x| (self.value)(x, t)).collect();
        let ders = derivatives.then(|| points.iter().map(|&x| (self.derivative)(x, t)).collect());
        Ok((values, ders))
    }
}

impl<T: Real> ReferenceSolution<T> for SineSeriesSolution<T> {
    fn sample(&self, points: &[T], t: T, derivatives: bool) -> Result<(Vec<T>, Option<Vec<T>>)> {
        let snap = self.at_time(t)?;
        let values = points.iter().map(|&x| snap.value(x)).collect();
        let ders = if derivatives {
            Some(
                points
                    .iter()
                    .map(|&x| snap.derivative(x))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Ok((values, ders))
    }
}

/// Exact values sampled once on a set of reference points.
///
/// Reusable across every resolution measured against the same solution and time.
#[derive(Debug, Clone)]
pub struct ExactSamples<T> {
    /// Reference coordinates in `[-1, 1]`.
    pub points: Vec<T>,
    pub values: Vec<T>,
    /// Physical `x`-derivatives, absent when only `L²`/`L∞` are wanted.
    pub derivatives: Option<Vec<T>>,
    pub map: AffineDomainMap<T>,
    pub t: T,
}

impl<T: Real> ExactSamples<T> {
    pub fn on_points(
        exact: &dyn ReferenceSolution<T>,
        map: AffineDomainMap<T>,
        points: Vec<T>,
        t: T,
        derivatives: bool,
    ) -> Result<Self> {
        let physical: Vec<T> = points.iter().map(|&xi| map.to_physical(xi)).collect();
        let (values, derivatives) = exact.sample(&physical, t, derivatives)?;
        Ok(Self {
            points,
            values,
            derivatives,
            map,
            t,
        })
    }

    /// Samples on the `P + 1` point evaluation grid.
    pub fn on_evaluation_grid(
        exact: &dyn ReferenceSolution<T>,
        map: AffineDomainMap<T>,
        p: usize,
        t: T,
        derivatives: bool,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument(
                "evaluation grid needs P >= 1".into(),
            ));
        }
        Self::on_points(exact, map, evaluation_grid(p), t, derivatives)
    }

    /// Samples at the quadrature nodes of `grid`, listed from `x = 1` down to
    /// `x = -1` like the evaluation grid, so that `P = N`.
    pub fn on_nodes(
        exact: &dyn ReferenceSolution<T>,
        map: AffineDomainMap<T>,
        grid: &GaussLobattoGrid<T>,
        t: T,
        derivatives: bool,
    ) -> Result<Self> {
        Self::on_points(
            exact,
            map,
            grid.nodes().iter().rev().copied().collect(),
            t,
            derivatives,
        )
    }

    pub fn p(&self) -> usize {
        self.points.len() - 1
    }
}

/// One row of an error table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub l2: T,
    /// `NaN` when no derivative was sampled.
    pub h1: T,
    pub linf: T,
    pub n: usize,
    pub dt: Option<T>,
    pub p: usize,
    pub method: String,
    pub problem: String,
}

impl<T: Real> ErrorReport<T> {
    pub fn tagged(mut self, method: &str, problem: &str, dt: T) -> Self {
        self.method = method.to_string();
        self.problem = problem.to_string();
        self.dt = Some(dt);
        self
    }

    pub fn has_h1(&self) -> bool {
        !self.h1.is_nan()
    }
}

fn numeric_derivative<T: Real>(field: &NodalField<T>, scale: T) -> Result<NodalField<T>> {
    let d = diff_matrix(field.grid());
    let mut dv = d.mul_vec(field.values());
    dv.iter_mut().for_each(|x| *x *= scale);
    NodalField::new(field.grid().clone(), dv)
}

/// Norms of the difference between `numeric` (on the reference interval) and
/// the exact samples, with `h = 2/N`, sums over `j = 1..=P` and the maximum over
/// the same points.
pub fn error_norms_sampled<T: Real>(
    numeric: &NodalField<T>,
    exact: &ExactSamples<T>,
) -> Result<ErrorReport<T>> {
    let n = numeric.grid().degree();
    let h = T::lit(2.0) / T::from_usize_lossy(n);
    let pts = &exact.points[1..];
    let v = interpolant_eval(numeric, pts);
    let mut sum = T::zero();
    let mut linf = T::zero();
    for (vi, ui) in v.iter().zip(&exact.values[1..]) {
        let e = *vi - *ui;
        sum += e * e;
        linf = linf.max(e.abs());
    }
    let l2sq = h * sum;
    let h1 = match &exact.derivatives {
        Some(du) => {
            let dv = interpolant_eval(&numeric_derivative(numeric, exact.map.scale())?, pts);
            let s: T = dv
                .iter()
                .zip(&du[1..])
                .map(|(a, b)| (*a - *b) * (*a - *b))
                .fold(T::zero(), |acc, x| acc + x);
            (h * s + l2sq).sqrt()
        }
        None => T::nan(),
    };
    Ok(ErrorReport {
        l2: l2sq.sqrt(),
        h1,
        linf,
        n,
        dt: None,
        p: exact.p(),
        method: numeric.grid().family().name().to_string(),
        problem: String::new(),
    })
}

/// Samples `exact` on the `P`-point evaluation grid at time `t` and measures `numeric` against it.
pub fn error_norms<T: Real>(
    numeric: &NodalField<T>,
    map: AffineDomainMap<T>,
    exact: &dyn ReferenceSolution<T>,
    t: T,
    p: usize,
) -> Result<ErrorReport<T>> {
    let samples = ExactSamples::on_evaluation_grid(exact, map, p, t, true)?;
    error_norms_sampled(numeric, &samples)
}

/// Chebyshev-weighted discrete norms at the quadrature nodes, derivative by `D_N`
/// applied to the full nodal vector. `L∞` is the maximum over the nodes.
///
/// On a physical interval `(A, B)` the weights carry the Jacobian `(B - A)/2`.
pub fn weighted_error_norms<T: Real>(
    numeric: &NodalField<T>,
    map: AffineDomainMap<T>,
    exact: &dyn ReferenceSolution<T>,
    t: T,
) -> Result<ErrorReport<T>> {
    let grid = numeric.grid();
    if grid.family() != PolynomialFamily::Chebyshev {
        return Err(Error::WrongFamily {
            expected: "Chebyshev",
        });
    }
    let physical: Vec<T> = grid.nodes().iter().map(|&xi| map.to_physical(xi)).collect();
    let (u, du) = exact.sample(&physical, t, true)?;
    let du = du.ok_or_else(|| {
        Error::InvalidArgument("reference solution returned no derivative".into())
    })?;
    let dv = numeric_derivative(numeric, map.scale())?;
    let jacobian = T::one() / map.scale();
    let w: Vec<T> = grid.weights().iter().map(|&w| w * jacobian).collect();
    let mut l2sq = T::zero();
    let mut d2 = T::zero();
    let mut linf = T::zero();
    for j in 0..grid.len() {
        let e = numeric.values()[j] - u[j];
        let ed = dv.values()[j] - du[j];
        l2sq += w[j] * e * e;
        d2 += w[j] * ed * ed;
        linf = linf.max(e.abs());
    }
    Ok(ErrorReport {
        l2: l2sq.sqrt(),
        h1: (l2sq + d2).sqrt(),
        linf,
        n: grid.degree(),
        dt: None,
        p: grid.degree(),
        method: grid.family().name().to_string(),
        problem: String::new(),
    })
}

/// `log2(e_k / e_{k+1})` for a sequence over a halving parameter.
pub fn convergence_rates<T: Real>(errors: &[T]) -> Result<Vec<T>> {
    if errors.len() < 2 {
        return Err(Error::InvalidArgument(
            "rates need at least two errors".into(),
        ));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > T::zero()) || !e.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rates need positive finite errors, got {e}"
        )));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}
