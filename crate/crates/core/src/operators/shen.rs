use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_tridiagonal_eigenvalues, LinearSolve, Matrix, Tridiagonal};
use crate::scalar::Real;
use crate::spectral::{GaussLobattoGrid, NodalField, PolynomialFamily};
use crate::time::SemidiscreteSystem;

fn shen_c<T: Real>(k: usize) -> T {
    T::one() / T::from_usize_lossy(4 * k + 6).sqrt()
}

/// Legendre values `L_0(x), ..., L_n(x)`.
fn legendre_all<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut l = Vec::with_capacity(n + 1);
    l.push(T::one());
    if n >= 1 {
        l.push(x);
    }
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let next = ((kf + kf + T::one()) * x * l[k] - kf * l[k - 1]) / (kf + T::one());
        l.push(next);
    }
    l
}

/// Compact Legendre basis `φ_k = c_k (L_k - L_{k+2})`, `c_k = 1/√(4k+6)`, `k = 0..N-2`.
///
/// The stiffness matrix is the identity and the mass matrix `B` couples only
/// `k` and `k ± 2`, so the system splits into even and odd tridiagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ShenSystem<T> {
    degree: usize,
    pub a: T,
    pub b: T,
    diag: Vec<T>,
    /// `off[j] = b_{j, j+2}`.
    off: Vec<T>,
}

/// `B_N`, `K_N = a I + B_N` and `S_N = b I` for degree `n`.
pub fn shen_matrices<T: Real>(n: usize, a: T, b: T) -> Result<ShenSystem<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Shen basis needs N >= 2, got {n}"
        )));
    }
    if !(a > T::zero()) || !(b > T::zero()) {
        return Err(Error::InvalidArgument(
            "Shen system needs a > 0 and b > 0".into(),
        ));
    }
    let m = n - 1;
    let two = T::lit(2.0);
    let diag = (0..m)
        .map(|j| {
            let c = shen_c::<T>(j);
            let jf = T::from_usize_lossy(j);
            c * c * (two / (two * jf + T::one()) + two / (two * jf + T::lit(5.0)))
        })
        .collect();
    let off = (0..m.saturating_sub(2))
        .map(|j| -shen_c::<T>(j) * shen_c::<T>(j + 2) * two / T::from_usize_lossy(2 * j + 5))
        .collect();
    Ok(ShenSystem {
        degree: n,
        a,
        b,
        diag,
        off,
    })
}

impl<T: Real> ShenSystem<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions, `N - 1`.
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn b_matrix(&self) -> Matrix<T> {
        let m = self.size();
        let mut b = Matrix::from_diagonal(&self.diag);
        for j in 0..m.saturating_sub(2) {
            b[(j, j + 2)] = self.off[j];
            b[(j + 2, j)] = self.off[j];
        }
        b
    }

    pub fn k_matrix(&self) -> Matrix<T> {
        self.b_matrix()
            .add_scaled(self.a, &Matrix::identity(self.size()))
    }

    pub fn s_matrix(&self) -> Matrix<T> {
        Matrix::identity(self.size()).scale(self.b)
    }

    /// `out = (shift I + B) v`.
    pub fn apply_shifted_b(&self, shift: T, v: &[T], out: &mut [T]) {
        let m = self.size();
        for j in 0..m {
            let mut s = (shift + self.diag[j]) * v[j];
            if j + 2 < m {
                s += self.off[j] * v[j + 2];
            }
            if j >= 2 {
                s += self.off[j - 2] * v[j - 2];
            }
            out[j] = s;
        }
    }

    /// Factors `shift I + B` through its even and odd tridiagonal blocks.
    pub fn factor_shifted_b(&self, shift: T) -> Result<ParitySolver<T>> {
        let block = |parity: usize| -> Result<Tridiagonal<T>> {
            let idx: Vec<usize> = (parity..self.size()).step_by(2).collect();
            let d: Vec<T> = idx.iter().map(|&j| shift + self.diag[j]).collect();
            let o: Vec<T> = idx.iter().skip(1).map(|&j| self.off[j - 2]).collect();
            Tridiagonal::factor(&o, &d, &o)
        };
        let odd = if self.size() > 1 {
            Some(block(1)?)
        } else {
            None
        };
        Ok(ParitySolver {
            even: block(0)?,
            odd,
            size: self.size(),
        })
    }

    /// Even and odd tridiagonal blocks `(diag, off)` of `B`.
    fn parity_blocks(&self) -> [(Vec<T>, Vec<T>); 2] {
        [0, 1].map(|parity| {
            let idx: Vec<usize> = (parity..self.size()).step_by(2).collect();
            let d = idx.iter().map(|&j| self.diag[j]).collect();
            let o = idx.iter().skip(1).map(|&j| self.off[j - 2]).collect();
            (d, o)
        })
    }
}

/// Solver for `shift I + B` acting on interleaved even and odd unknowns.
#[derive(Debug, Clone)]
pub struct ParitySolver<T> {
    even: Tridiagonal<T>,
    odd: Option<Tridiagonal<T>>,
    size: usize,
}

impl<T: Real> LinearSolve<T> for ParitySolver<T> {
    fn dim(&self) -> usize {
        self.size
    }

    fn solve_in_place(&self, rhs: &mut [T]) {
        let mut even: Vec<T> = rhs.iter().step_by(2).copied().collect();
        self.even.solve_in_place(&mut even);
        for (r, e) in rhs.iter_mut().step_by(2).zip(even) {
            *r = e;
        }
        if let Some(odd_solver) = &self.odd {
            let mut odd: Vec<T> = rhs.iter().skip(1).step_by(2).copied().collect();
            odd_solver.solve_in_place(&mut odd);
            for (r, o) in rhs.iter_mut().skip(1).step_by(2).zip(odd) {
                *r = o;
            }
        }
    }
}

/// All `N - 1` eigenvalues of `B_N`, ascending.
pub fn bn_eigenvalues<T: Real>(n: usize) -> Result<Vec<T>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue analysis needs N >= 3, got {n}"
        )));
    }
    let shen = shen_matrices(n, T::one(), T::one())?;
    let mut all = Vec::with_capacity(shen.size());
    for (d, o) in shen.parity_blocks() {
        all.extend(symmetric_tridiagonal_eigenvalues(&d, &o)?);
    }
    all.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(all)
}

/// `v(x) = Σ_k V_k φ_k(x)` at each point.
pub fn shen_reconstruct<T: Real>(coeffs: &[T], points: &[T]) -> Vec<T> {
    let n = coeffs.len() + 1;
    points
        .iter()
        .map(|&x| {
            let l = legendre_all(n, x);
            coeffs.iter().enumerate().fold(T::zero(), |s, (k, &v)| {
                s + v * shen_c::<T>(k) * (l[k] - l[k + 2])
            })
        })
        .collect()
}

/// Nodal values on a Legendre grid of the Shen expansion.
pub fn shen_to_nodal<T: Real>(
    coeffs: &[T],
    grid: &Arc<GaussLobattoGrid<T>>,
) -> Result<NodalField<T>> {
    if grid.degree() != coeffs.len() + 1 {
        return Err(Error::GridMismatch);
    }
    NodalField::new(Arc::clone(grid), shen_reconstruct(coeffs, grid.nodes()))
}

/// Shen coefficients of the degree-`N` interpolant of a Legendre nodal field
/// vanishing at `±1`.
///
/// Goes through the discrete Legendre transform, which is exact on `P_N`.
pub fn legendre_nodal_to_shen<T: Real>(field: &NodalField<T>) -> Result<Vec<T>> {
    let grid = field.grid();
    if grid.family() != PolynomialFamily::Legendre {
        return Err(Error::WrongFamily {
            expected: "Legendre",
        });
    }
    let n = grid.degree();
    let mut modal = vec![T::zero(); n + 1];
    for ((&x, &w), &f) in grid.nodes().iter().zip(grid.weights()).zip(field.values()) {
        for (m, l) in modal.iter_mut().zip(legendre_all(n, x)) {
            *m += f * w * l;
        }
    }
    for (k, m) in modal.iter_mut().enumerate() {
        let gamma = if k == n {
            T::lit(2.0) / T::from_usize_lossy(n)
        } else {
            T::lit(2.0) / T::from_usize_lossy(2 * k + 1)
        };
        *m /= gamma;
    }
    let mut v = vec![T::zero(); n - 1];
    for m in 0..n - 1 {
        let carry = if m >= 2 {
            v[m - 2] * shen_c::<T>(m - 2)
        } else {
            T::zero()
        };
        v[m] = (modal[m] + carry) / shen_c::<T>(m);
    }
    Ok(v)
}

/// The linear problem `v_t - a v_xxt = b v_xx` in the Shen basis: `K V' = -b V`.
#[derive(Debug, Clone)]
pub struct ShenLinearSystem<T> {
    pub shen: ShenSystem<T>,
}

impl<T: Real> ShenLinearSystem<T> {
    pub fn new(shen: ShenSystem<T>) -> Self {
        Self { shen }
    }
}

impl<T: Real> SemidiscreteSystem<T> for ShenLinearSystem<T> {
    fn dim(&self) -> usize {
        self.shen.size()
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn apply_mass(&self, v: &[T], out: &mut [T]) {
        self.shen.apply_shifted_b(self.shen.a, v, out);
    }

    fn factor_mass(&self) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(self.shen.factor_shifted_b(self.shen.a)?))
    }

    fn rhs(&self, v: &[T], _t: T, out: &mut [T]) -> Result<()> {
        for (o, &x) in out.iter_mut().zip(v) {
            *o = -self.shen.b * x;
        }
        Ok(())
    }

    fn factor_shifted(&self, shift: T) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(
            self.shen
                .factor_shifted_b(self.shen.a + shift * self.shen.b)?,
        ))
    }
}
