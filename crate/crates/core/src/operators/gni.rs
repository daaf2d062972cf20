use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{LinearSolve, Lu, Matrix};
use crate::problems::{lift_boundary, map_to_reference, PDEProblem, SobolevProblem};
use crate::scalar::Real;
use crate::spectral::{diff_matrix, GaussLobattoGrid, PolynomialFamily};
use crate::time::SemidiscreteSystem;

use super::NodalSystem;

fn require_legendre<T: Real>(grid: &GaussLobattoGrid<T>) -> Result<()> {
    if grid.family() != PolynomialFamily::Legendre {
        return Err(Error::WrongFamily {
            expected: "Legendre",
        });
    }
    Ok(())
}

/// Quadrature-assembled Galerkin matrices in the nodal basis.
#[derive(Debug, Clone)]
pub struct GniOperators<T> {
    grid: Arc<GaussLobattoGrid<T>>,
    d: Matrix<T>,
}

impl<T: Real> GniOperators<T> {
    pub fn new(grid: Arc<GaussLobattoGrid<T>>) -> Result<Self> {
        require_legendre(&grid)?;
        let d = diff_matrix(&grid);
        Ok(Self { grid, d })
    }

    pub fn grid(&self) -> &Arc<GaussLobattoGrid<T>> {
        &self.grid
    }

    pub fn diff(&self) -> &Matrix<T> {
        &self.d
    }

    pub fn boundary_indices(&self) -> [usize; 2] {
        [0, self.grid.degree()]
    }

    /// `M = diag(w)`.
    pub fn mass(&self) -> Matrix<T> {
        Matrix::from_diagonal(self.grid.weights())
    }

    /// `K2(a)_jk = Σ_h a_h w_h ψ_j'(x_h) ψ_k'(x_h)` from nodal coefficient values.
    pub fn stiffness_nodal(&self, a: &[T]) -> Matrix<T> {
        let n = self.grid.len();
        assert_eq!(a.len(), n);
        let w = self.grid.weights();
        let mut k = Matrix::zeros(n, n);
        for h in 0..n {
            let dh = self.d.row(h);
            let s = a[h] * w[h];
            for j in 0..n {
                let c = s * dh[j];
                if c == T::zero() {
                    continue;
                }
                for (kk, &dk) in dh.iter().enumerate() {
                    k[(j, kk)] += c * dk;
                }
            }
        }
        k
    }

    pub fn stiffness(&self, a: impl Fn(T) -> T) -> Matrix<T> {
        let a: Vec<T> = self.grid.nodes().iter().map(|&x| a(x)).collect();
        self.stiffness_nodal(&a)
    }

    /// `C = M D`, i.e. `C_jk = (ψ_j, ψ_k')_N`.
    pub fn convection(&self) -> Matrix<T> {
        let w = self.grid.weights();
        let n = self.grid.len();
        Matrix::from_fn(n, n, |j, k| w[j] * self.d[(j, k)])
    }

    /// `K1(β)_jk = β_j w_j D_jk`, i.e. `(β v_x, ψ_j)_N` for `v = ψ_k`.
    pub fn first_order_nodal(&self, beta: &[T]) -> Matrix<T> {
        let w = self.grid.weights();
        let n = self.grid.len();
        Matrix::from_fn(n, n, |j, k| beta[j] * w[j] * self.d[(j, k)])
    }
}

/// Galerkin (G-NI) semidiscretization of the constant-coefficient equation
/// `v_t - a v_xxt + α v_x + β v_xx + γ ∂_x f(v) = F`.
///
/// The problem is mapped onto `(-1, 1)` and inhomogeneous boundary values are
/// removed with a linear lift; the unknowns are the interior nodal values of
/// the lifted solution.
pub fn assemble_gni_bbm<T: Real>(
    grid: Arc<GaussLobattoGrid<T>>,
    problem: &PDEProblem<T>,
) -> Result<NodalSystem<T>> {
    require_legendre(&grid)?;
    let reference = map_to_reference(problem)?;
    let (hom, lift) = lift_boundary(&reference)?;
    let ops = GniOperators::new(Arc::clone(&grid))?;
    let n = grid.degree();
    let int: Vec<usize> = grid.interior().collect();
    let all: Vec<usize> = (0..=n).collect();

    let k2 = ops.stiffness(|_| T::one());
    let c = ops.convection();
    let mass = ops.mass().add_scaled(hom.a, &k2).select(&int, &int);
    let linear = c
        .scale(-hom.alpha)
        .add_scaled(hom.beta, &k2)
        .select(&int, &all);
    let flux_op = match (&hom.flux, hom.gamma != T::zero()) {
        (Some(f), true) => Some((c.scale(-hom.gamma).select(&int, &all), f.clone())),
        _ => None,
    };
    let x = grid.nodes();
    Ok(NodalSystem {
        mass,
        linear,
        flux_op,
        source: hom.source.clone(),
        source_weights: int.iter().map(|&j| grid.weights()[j]).collect(),
        pinned: (T::zero(), T::zero()),
        offset: x.iter().map(|&xi| lift.eval(xi)).collect(),
        initial: int.iter().map(|&j| (hom.initial)(x[j])).collect(),
        grid,
    })
}

/// Interior matrices of the collocation-form Galerkin system
/// `(I - a D̃²) dṼ/dt + α D̃ Ṽ + β D̃² Ṽ + γ D̃ f̃ = 0`,
/// returned as `(I - a D̃², α D̃ + β D̃², γ D̃)`.
pub fn gnil_system<T: Real>(
    grid: &GaussLobattoGrid<T>,
    a: T,
    alpha: T,
    beta: T,
    gamma: T,
) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
    let d = diff_matrix(grid);
    let d2 = d.matmul(&d);
    let int: Vec<usize> = grid.interior().collect();
    let dt = d.select(&int, &int);
    let d2t = d2.select(&int, &int);
    let lhs = Matrix::identity(int.len()).add_scaled(-a, &d2t);
    let lin = dt.scale(alpha).add_scaled(beta, &d2t);
    (lhs, lin, dt.scale(gamma))
}

/// G-NI system for `c v_t - (a v_xt)_x = -(α v_x)_x + β v_x + γ` with
/// homogeneous Dirichlet data:
///
/// ```text
/// (K0(c) + K2(a)) dV/dt = K2(α)(V) V + K1(β)(V) V + Γ(V)
/// ```
///
/// State-dependent coefficients are evaluated nodewise at `(x_h, t, V_h)`.
pub struct GniGeneralSystem<T> {
    ops: GniOperators<T>,
    lhs: Matrix<T>,
    problem: SobolevProblem<T>,
}

/// Assembles the general G-NI system of a [`SobolevProblem`].
pub fn assemble_gni_general<T: Real>(
    grid: Arc<GaussLobattoGrid<T>>,
    problem: &SobolevProblem<T>,
) -> Result<GniGeneralSystem<T>> {
    let ops = GniOperators::new(grid)?;
    let x = ops.grid.nodes();
    let mut a = Vec::with_capacity(x.len());
    let mut c = Vec::with_capacity(x.len());
    for &xi in x {
        let (av, cv) = ((problem.a)(xi), (problem.c)(xi));
        if !av.is_finite() || !cv.is_finite() {
            return Err(non_finite(xi));
        }
        a.push(av);
        c.push(cv);
    }
    let w = ops.grid.weights();
    let k0: Vec<T> = c.iter().zip(w).map(|(&c, &w)| c * w).collect();
    let lhs = Matrix::from_diagonal(&k0).add_scaled(T::one(), &ops.stiffness_nodal(&a));
    Ok(GniGeneralSystem {
        ops,
        lhs,
        problem: problem.clone(),
    })
}

fn non_finite<T: Real>(x: T) -> Error {
    Error::NonFiniteCoefficient {
        x: x.to_f64().unwrap_or(f64::NAN),
    }
}

impl<T: Real> GniGeneralSystem<T> {
    /// `K0(c) + K2(a)` on all nodes.
    pub fn mass_side(&self) -> &Matrix<T> {
        &self.lhs
    }

    pub fn operators(&self) -> &GniOperators<T> {
        &self.ops
    }

    fn coefficient(&self, f: &dyn Fn(T, T, T) -> T, v: &[T], t: T) -> Result<Vec<T>> {
        let x = self.ops.grid.nodes();
        x.iter()
            .zip(v)
            .map(|(&xi, &vi)| {
                let c = f(xi, t, vi);
                if c.is_finite() {
                    Ok(c)
                } else {
                    Err(non_finite(xi))
                }
            })
            .collect()
    }

    /// `K2(α)(V)` for a full nodal vector.
    pub fn k2_alpha(&self, v: &[T], t: T) -> Result<Matrix<T>> {
        Ok(self
            .ops
            .stiffness_nodal(&self.coefficient(&*self.problem.alpha, v, t)?))
    }

    /// `K1(β)(V)` for a full nodal vector.
    pub fn k1_beta(&self, v: &[T], t: T) -> Result<Matrix<T>> {
        Ok(self
            .ops
            .first_order_nodal(&self.coefficient(&*self.problem.beta, v, t)?))
    }

    /// `Γ(V)_j = γ(x_j, t, V_j) w_j`.
    pub fn gamma_vector(&self, v: &[T], t: T) -> Result<Vec<T>> {
        let g = self.coefficient(&*self.problem.gamma, v, t)?;
        Ok(g.iter()
            .zip(self.ops.grid.weights())
            .map(|(&g, &w)| g * w)
            .collect())
    }

    /// Full right-hand side `K2(α)(V) V + K1(β)(V) V + Γ(V)`, matrix-free.
    pub fn full_rhs(&self, v: &[T], t: T) -> Result<Vec<T>> {
        let alpha = self.coefficient(&*self.problem.alpha, v, t)?;
        let beta = self.coefficient(&*self.problem.beta, v, t)?;
        let gamma = self.coefficient(&*self.problem.gamma, v, t)?;
        let w = self.ops.grid.weights();
        let d = &self.ops.d;
        let dv = d.mul_vec(v);
        let flux: Vec<T> = (0..v.len()).map(|h| alpha[h] * w[h] * dv[h]).collect();
        let mut out: Vec<T> = (0..v.len())
            .map(|j| beta[j] * w[j] * dv[j] + gamma[j] * w[j])
            .collect();
        for (h, &fh) in flux.iter().enumerate() {
            for (o, &dhj) in out.iter_mut().zip(d.row(h)) {
                *o += dhj * fh;
            }
        }
        Ok(out)
    }

    /// Interior nodal values of the initial datum.
    pub fn initial_state(&self) -> Vec<T> {
        self.ops.grid.nodes()[1..self.ops.grid.degree()]
            .iter()
            .map(|&x| (self.problem.initial)(x))
            .collect()
    }

    fn interior_lhs(&self) -> Matrix<T> {
        let int: Vec<usize> = self.ops.grid.interior().collect();
        self.lhs.select(&int, &int)
    }
}

impl<T: Real> SemidiscreteSystem<T> for GniGeneralSystem<T> {
    fn dim(&self) -> usize {
        self.ops.grid.degree() - 1
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn apply_mass(&self, v: &[T], out: &mut [T]) {
        let n = self.ops.grid.degree();
        for (j, o) in out.iter_mut().enumerate() {
            *o = (1..n)
                .map(|k| self.lhs[(j + 1, k)] * v[k - 1])
                .fold(T::zero(), |s, x| s + x);
        }
    }

    fn factor_mass(&self) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(Lu::new(self.interior_lhs())?))
    }

    fn rhs(&self, v: &[T], t: T, out: &mut [T]) -> Result<()> {
        let mut full = Vec::with_capacity(v.len() + 2);
        full.push(T::zero());
        full.extend_from_slice(v);
        full.push(T::zero());
        let r = self.full_rhs(&full, t)?;
        out.copy_from_slice(&r[1..r.len() - 1]);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Flux, ScalarFn3};
    use crate::spectral::legendre_gl_grid;

    fn grid(n: usize) -> Arc<GaussLobattoGrid<f64>> {
        Arc::new(legendre_gl_grid(n).unwrap())
    }

    fn rel_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
        let scale = (0..a.rows())
            .flat_map(|i| a.row(i).iter().copied())
            .fold(1.0f64, |m, x| m.max(x.abs()));
        a.max_abs_diff(b) / scale
    }

    #[test]
    fn mass_is_weights_and_stiffness_is_spd() {
        let ops = GniOperators::new(grid(12)).unwrap();
        let m = ops.mass();
        for j in 0..13 {
            assert_eq!(m[(j, j)], ops.grid().weights()[j]);
        }
        let k = ops.stiffness(|_| 1.0);
        assert!(k.max_abs_diff(&k.transpose()) < 1e-13);
        let int: Vec<usize> = (1..12).collect();
        assert!(k.select(&int, &int).lu().is_ok());
        let ones = vec![1.0; 13];
        assert!(k.mul_vec(&ones).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn galerkin_identities_hold() {
        for n in [4, 8, 16, 32] {
            let ops = GniOperators::new(grid(n)).unwrap();
            let d = ops.diff();
            let m = ops.mass();
            let k2 = ops.stiffness(|_| 1.0);
            let md2 = m.matmul(&d.matmul(d)).scale(-1.0);
            let int: Vec<usize> = (1..n).collect();
            let all: Vec<usize> = (0..=n).collect();
            assert!(
                rel_diff(&k2.select(&int, &all), &md2.select(&int, &all)) < 1e-12,
                "N={n}"
            );
            assert!(rel_diff(&ops.convection(), &m.matmul(d)) < 1e-15);
        }
    }

    #[test]
    fn gni_interior_system_equals_collocation_form() {
        let (a, alpha, beta, gamma) = (0.7, 1.3, -0.4, 0.5);
        for n in [6, 12, 24, 32] {
            let g = grid(n);
            let mut p = PDEProblem::linear(a, -beta, |x: f64| (1.0 - x * x) * x);
            p.alpha = alpha;
            p.gamma = gamma;
            p.flux = Some(Flux::burgers());
            let sys = assemble_gni_bbm(Arc::clone(&g), &p).unwrap();
            let (lhs, lin, conv) = gnil_system(&g, a, alpha, beta, gamma);
            let w: Vec<f64> = g.weights()[1..n].to_vec();
            let int: Vec<usize> = (0..n - 1).collect();
            let scaled = |m: &Matrix<f64>, cols: &[usize], sign: f64| {
                Matrix::from_fn(n - 1, cols.len(), |i, j| sign * m[(i, cols[j])] / w[i])
            };
            assert!(
                rel_diff(&scaled(sys.mass_matrix(), &int, 1.0), &lhs) < 1e-12,
                "N={n}"
            );
            assert!(
                rel_diff(&scaled(&sys.linear_matrix(), &int, -1.0), &lin) < 1e-12,
                "N={n}"
            );
            let q = sys.flux_matrix().unwrap();
            let inner: Vec<usize> = (1..n).collect();
            assert!(rel_diff(&scaled(q, &inner, -1.0), &conv) < 1e-12, "N={n}");
        }
    }

    #[test]
    fn zero_state_and_no_dynamics() {
        let g = grid(10);
        let mut p = PDEProblem::linear(1.0, 1.0, |x: f64| x);
        p.alpha = 1.0;
        p.gamma = 1.0;
        p.flux = Some(Flux::burgers());
        let sys = assemble_gni_bbm(Arc::clone(&g), &p).unwrap();
        let mut out = vec![1.0; 9];
        sys.rhs(&[0.0; 9], 0.0, &mut out).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));

        let p = PDEProblem::linear(1.0, 0.0, |x: f64| x);
        let sys = assemble_gni_bbm(g, &p).unwrap();
        let v: Vec<f64> = (0..9).map(|i| (i as f64).sin()).collect();
        sys.rhs(&v, 0.3, &mut out).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn discrete_residual_matches_analytic_residual() {
        // p = (1 - x²)(x + 0.3), q = (1 - x²)(2 - x), f = v²
        let (a, alpha, beta, gamma) = (0.8, 1.1, -0.6, 0.5);
        let p = |x: f64| (1.0 - x * x) * (x + 0.3);
        let p1 = |x: f64| -3.0 * x * x - 0.6 * x + 1.0;
        let p2 = |x: f64| -6.0 * x - 0.6;
        let q = |x: f64| (1.0 - x * x) * (2.0 - x);
        let q2 = |x: f64| 6.0 * x - 4.0;
        let analytic =
            |x: f64| q(x) - a * q2(x) + alpha * p1(x) + beta * p2(x) + gamma * 2.0 * p(x) * p1(x);
        let n = 12;
        let g = grid(n);
        let mut prob = PDEProblem::linear(a, -beta, p);
        prob.alpha = alpha;
        prob.gamma = gamma;
        prob.flux = Some(Flux::burgers());
        let sys = assemble_gni_bbm(Arc::clone(&g), &prob).unwrap();
        let x = &g.nodes()[1..n];
        let v: Vec<f64> = x.iter().map(|&x| p(x)).collect();
        let qv: Vec<f64> = x.iter().map(|&x| q(x)).collect();
        let mut mq = vec![0.0; n - 1];
        sys.apply_mass(&qv, &mut mq);
        let mut r = vec![0.0; n - 1];
        sys.rhs(&v, 0.0, &mut r).unwrap();
        for j in 0..n - 1 {
            let residual = (mq[j] - r[j]) / g.weights()[j + 1];
            assert!(
                (residual - analytic(x[j])).abs() < 1e-10,
                "{j}: {residual} vs {}",
                analytic(x[j])
            );
        }
    }

    #[test]
    fn lifted_system_reproduces_boundary_values() {
        let g = grid(16);
        let mut p = PDEProblem::linear(5.0, 1.0, |x: f64| if x < 0.0 { 0.9 } else { 0.0 });
        p.gamma = 1.0;
        p.flux = Some(Flux::porous());
        p.boundary = (0.9, 0.0);
        p.domain = (-60.0, 210.0);
        let sys = assemble_gni_bbm(g, &p).unwrap();
        let v = sys.solution_values(&sys.initial_state());
        assert!((v[0] - 0.9).abs() < 1e-15);
        assert_eq!(v[16], 0.0);
    }

    fn general(
        alpha: ScalarFn3<f64>,
        beta: ScalarFn3<f64>,
        gamma: ScalarFn3<f64>,
    ) -> SobolevProblem<f64> {
        SobolevProblem {
            c: Arc::new(|_| 1.0),
            a: Arc::new(|_| 0.0),
            alpha,
            beta,
            gamma,
            initial: Arc::new(|x| 1.0 - x * x),
        }
    }

    #[test]
    fn general_form_examples() {
        let g = grid(8);
        let zero: ScalarFn3<f64> = Arc::new(|_, _, _| 0.0);
        let sys = assemble_gni_general(
            Arc::clone(&g),
            &general(Arc::new(|_, _, _| 2.5), zero.clone(), zero.clone()),
        )
        .unwrap();
        assert!(
            sys.mass_side()
                .max_abs_diff(&Matrix::from_diagonal(g.weights()))
                == 0.0
        );
        let k1 = sys.operators().stiffness(|_| 1.0).scale(2.5);
        for v in [vec![0.0; 9], (0..9).map(|i| i as f64).collect()] {
            assert!(sys.k2_alpha(&v, 0.0).unwrap().max_abs_diff(&k1) < 1e-12);
            assert!(sys.gamma_vector(&v, 0.0).unwrap().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn general_form_matrix_free_rhs_matches_matrices() {
        let g = grid(10);
        let p = general(
            Arc::new(|x, _, v| 1.0 + 0.2 * x + 0.1 * v * v),
            Arc::new(|_, t, v| t - v),
            Arc::new(|x, _, _| x.cos()),
        );
        let sys = assemble_gni_general(g, &p).unwrap();
        let v: Vec<f64> = (0..11).map(|i| (0.3 * i as f64).sin()).collect();
        let t = 0.4;
        let expect: Vec<f64> = {
            let a = sys.k2_alpha(&v, t).unwrap().mul_vec(&v);
            let b = sys.k1_beta(&v, t).unwrap().mul_vec(&v);
            let c = sys.gamma_vector(&v, t).unwrap();
            (0..11).map(|i| a[i] + b[i] + c[i]).collect()
        };
        let got = sys.full_rhs(&v, t).unwrap();
        for (e, g) in expect.iter().zip(&got) {
            assert!((e - g).abs() < 1e-12);
        }
    }

    #[test]
    fn general_form_reduces_to_bbm_linear_case() {
        // general (α, β) = (0.3, 0.7) is bbm (α, β) = (-0.7, 0.3)
        let g = grid(14);
        let zero: ScalarFn3<f64> = Arc::new(|_, _, _| 0.0);
        let mut gp = general(Arc::new(|_, _, _| 0.3), Arc::new(|_, _, _| 0.7), zero);
        gp.a = Arc::new(|_| 0.5);
        let gen = assemble_gni_general(Arc::clone(&g), &gp).unwrap();
        let mut bp = PDEProblem::linear(0.5, -0.3, |x: f64| 1.0 - x * x);
        bp.alpha = -0.7;
        let bbm = assemble_gni_bbm(g, &bp).unwrap();
        let v: Vec<f64> = (0..13).map(|i| (0.7 * i as f64).cos()).collect();
        let (mut r1, mut r2) = (vec![0.0; 13], vec![0.0; 13]);
        gen.rhs(&v, 0.0, &mut r1).unwrap();
        bbm.rhs(&v, 0.0, &mut r2).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert!((a - b).abs() < 1e-11);
        }
        gen.apply_mass(&v, &mut r1);
        bbm.apply_mass(&v, &mut r2);
        for (a, b) in r1.iter().zip(&r2) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn non_finite_coefficient_is_reported() {
        let g = grid(6);
        let zero: ScalarFn3<f64> = Arc::new(|_, _, _| 0.0);
        let mut p = general(zero.clone(), zero.clone(), zero);
        p.gamma = Arc::new(|_, _, v| v.ln());
        let sys = assemble_gni_general(g, &p).unwrap();
        let mut out = vec![0.0; 5];
        assert!(matches!(
            sys.rhs(&[-1.0; 5], 0.0, &mut out),
            Err(Error::NonFiniteCoefficient { .. })
        ));
    }

    #[test]
    fn chebyshev_grid_is_rejected() {
        let g = Arc::new(crate::spectral::chebyshev_gl_grid::<f64>(6).unwrap());
        assert!(GniOperators::new(g).is_err());
    }
}
