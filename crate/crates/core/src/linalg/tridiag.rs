use super::LinearSolve;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Factorized tridiagonal matrix (Thomas algorithm, no pivoting).
///
/// Intended for diagonally dominant or symmetric positive definite systems.
#[derive(Debug, Clone)]
pub struct Tridiagonal<T> {
    lower: Vec<T>,
    // modified diagonal and upper coefficients after forward elimination
    diag: Vec<T>,
    upper: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    /// `lower[i]` couples row `i + 1` to column `i`; `upper[i]` couples row `i` to column `i + 1`.
    pub fn factor(lower: &[T], diag: &[T], upper: &[T]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::InvalidArgument(
                "tridiagonal band lengths inconsistent".into(),
            ));
        }
        let mut d = diag.to_vec();
        let mut l = lower.to_vec();
        for i in 1..n {
            if d[i - 1] == T::zero() {
                return Err(Error::Singular { column: i - 1 });
            }
            l[i - 1] = lower[i - 1] / d[i - 1];
            d[i] = diag[i] - l[i - 1] * upper[i - 1];
        }
        if d[n - 1] == T::zero() || !d.iter().all(|x| x.is_finite()) {
            return Err(Error::Singular { column: n - 1 });
        }
        Ok(Self {
            lower: l,
            diag: d,
            upper: upper.to_vec(),
        })
    }
}

impl<T: Real> LinearSolve<T> for Tridiagonal<T> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn solve_in_place(&self, rhs: &mut [T]) {
        let n = self.diag.len();
        assert_eq!(rhs.len(), n);
        for i in 1..n {
            let l = self.lower[i - 1];
            rhs[i] -= l * rhs[i - 1];
        }
        rhs[n - 1] /= self.diag[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.diag[i];
        }
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (length `n - 1`), in ascending order.
///
/// Implicit QL iteration with Wilkinson shifts.
pub fn symmetric_tridiagonal_eigenvalues<T: Real>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidArgument(
            "off-diagonal must have length n - 1".into(),
        ));
    }
    const MAX_SWEEPS: usize = 60;
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.to_vec();
    e.push(T::zero());
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            // look for a negligible off-diagonal element to split the matrix
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::EigenConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}
