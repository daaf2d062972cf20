use std::sync::Arc;

use super::poly::legendre_with_derivatives;
use super::PolynomialFamily;
use crate::error::{Error, Result};
use crate::scalar::Real;

const NEWTON_MAX_ITER: usize = 100;

/// Degree-`N` Gauss–Lobatto rule: `N + 1` ascending nodes on `[-1, 1]` and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLobattoGrid<T> {
    family: PolynomialFamily,
    degree: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLobattoGrid<T> {
    pub fn new(family: PolynomialFamily, degree: usize) -> Result<Self> {
        match family {
            PolynomialFamily::Legendre => legendre_gl_grid(degree),
            PolynomialFamily::Chebyshev => chebyshev_gl_grid(degree),
        }
    }

    pub fn family(&self) -> PolynomialFamily {
        self.family
    }

    /// Polynomial degree `N`; the grid has `N + 1` nodes.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Interior node indices `1..N`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.degree
    }

    /// Discrete integral `Σ_j f(x_j) w_j`.
    pub fn quadrature(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + f(x) * w)
    }

    /// Samples `f` at the nodes.
    pub fn sample(self: &Arc<Self>, f: impl Fn(T) -> T) -> NodalField<T> {
        NodalField {
            grid: Arc::clone(self),
            values: self.nodes.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Same rule, i.e. same family and degree.
    pub fn same_rule(&self, other: &Self) -> bool {
        self.family == other.family && self.degree == other.degree
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Lobatto degree must be >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Legendre–Gauss–Lobatto grid: interior nodes are the zeros of `L_N'`.
///
/// Newton's method with `L_N''` taken from the Legendre equation, started at the
/// Chebyshev–Gauss–Lobatto nodes. Nodes are computed on the left half and mirrored.
pub fn legendre_gl_grid<T: Real>(n: usize) -> Result<GaussLobattoGrid<T>> {
    check_degree(n)?;
    let nf = T::from_usize_lossy(n);
    let nn1 = nf * (nf + T::one());
    let two = T::lit(2.0);
    let mut nodes = vec![T::zero(); n + 1];
    nodes[0] = -T::one();
    nodes[n] = T::one();
    let step_tol = T::lit(4.0) * T::epsilon();
    for j in 1..=(n - 1) / 2 {
        let mut x = -(T::PI() * T::from_usize_lossy(j) / nf).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d, _) = legendre_with_derivatives(n, x);
            // L_N'' from (1 - x^2) L_N'' = 2x L_N' - N(N+1) L_N
            let dd = (two * x * d - nn1 * p) / (T::one() - x * x);
            let dx = d / dd;
            x -= dx;
            if dx.abs() <= step_tol * x.abs().max(T::epsilon()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeConvergence {
                index: j,
                iterations: NEWTON_MAX_ITER,
            });
        }
        nodes[j] = x;
        nodes[n - j] = -x;
    }
    // nodes[n/2] stays exactly 0 for even n
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _, _) = legendre_with_derivatives(n, x);
            two / (nn1 * p * p)
        })
        .collect();
    Ok(GaussLobattoGrid {
        family: PolynomialFamily::Legendre,
        degree: n,
        nodes,
        weights,
    })
}

/// Chebyshev–Gauss–Lobatto grid `x_j = cos(jπ/N)`, stored ascending.
///
/// Uses `-cos(jπ/N) = sin((2j - N)π / 2N)`, which is exactly antisymmetric in floating point.
pub fn chebyshev_gl_grid<T: Real>(n: usize) -> Result<GaussLobattoGrid<T>> {
    check_degree(n)?;
    let nf = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let mut nodes = vec![T::zero(); n + 1];
    for j in 0..=n / 2 {
        let x = (T::PI() * (two * T::from_usize_lossy(j) - nf) / (two * nf)).sin();
        nodes[j] = x;
        nodes[n - j] = -x;
    }
    nodes[0] = -T::one();
    nodes[n] = T::one();
    if n.is_multiple_of(2) {
        nodes[n / 2] = T::zero();
    }
    let interior = T::PI() / nf;
    let ends = interior / two;
    let weights = (0..=n)
        .map(|j| if j == 0 || j == n { ends } else { interior })
        .collect();
    Ok(GaussLobattoGrid {
        family: PolynomialFamily::Chebyshev,
        degree: n,
        nodes,
        weights,
    })
}

/// Function values at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField<T> {
    pub(crate) grid: Arc<GaussLobattoGrid<T>>,
    pub(crate) values: Vec<T>,
}

impl<T: Real> NodalField<T> {
    pub fn new(grid: Arc<GaussLobattoGrid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "nodal field needs {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<GaussLobattoGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// Expansion coefficients in `L_k` or `T_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients<T> {
    pub family: PolynomialFamily,
    pub coeffs: Vec<T>,
}

/// `(f, g)_{N,w} = Σ_j f(x_j) g(x_j) w_j`.
pub fn discrete_inner_product<T: Real>(f: &NodalField<T>, g: &NodalField<T>) -> Result<T> {
    if !f.grid.same_rule(&g.grid) {
        return Err(Error::GridMismatch);
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.grid.weights())
        .fold(T::zero(), |acc, ((&a, &b), &w)| acc + a * b * w))
}
