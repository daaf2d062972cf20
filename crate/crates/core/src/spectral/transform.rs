//! Chebyshev nodal values <-> coefficients of the `T_k` expansion.
//!
//! Nodes are stored ascending, so nodal index `i` corresponds to `x = cos((N - i)π/N)`.

use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use super::grid::{GaussLobattoGrid, NodalField};
use super::{PolynomialFamily, SpectralCoefficients};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use std::sync::Arc;

fn require_chebyshev<T: Real>(grid: &GaussLobattoGrid<T>) -> Result<()> {
    if grid.family() != PolynomialFamily::Chebyshev {
        return Err(Error::WrongFamily {
            expected: "Chebyshev",
        });
    }
    Ok(())
}

fn c_factor<T: Real>(k: usize, n: usize) -> T {
    if k == 0 || k == n {
        T::lit(2.0)
    } else {
        T::one()
    }
}

/// Dense map from ascending nodal values to `T_k` coefficients,
/// `C_kj = 2 cos(jkπ/N) / (N c_k c_j)` in the descending node numbering.
pub fn chebyshev_transform_matrix<T: Real>(n: usize) -> Matrix<T> {
    let nf = T::from_usize_lossy(n);
    Matrix::from_fn(n + 1, n + 1, |k, i| {
        let j = n - i;
        // reduce jk mod 2N before taking the cosine
        let arg = T::from_usize_lossy((j * k) % (2 * n)) * T::PI() / nf;
        T::lit(2.0) * arg.cos() / (nf * c_factor::<T>(k, n) * c_factor::<T>(j, n))
    })
}

pub fn cheb_nodal_to_coeffs_dense<T: Real>(
    field: &NodalField<T>,
) -> Result<SpectralCoefficients<T>> {
    require_chebyshev(field.grid())?;
    let c = chebyshev_transform_matrix::<T>(field.grid().degree());
    Ok(SpectralCoefficients {
        family: PolynomialFamily::Chebyshev,
        coeffs: c.mul_vec(field.values()),
    })
}

/// Inverse transform `V(x_i) = Σ_k v_k T_k(x_i)`, dense.
pub fn cheb_coeffs_to_nodal_dense<T: Real>(
    coeffs: &SpectralCoefficients<T>,
    grid: Arc<GaussLobattoGrid<T>>,
) -> Result<NodalField<T>> {
    require_chebyshev(&grid)?;
    let n = grid.degree();
    check_len(coeffs, n)?;
    let nf = T::from_usize_lossy(n);
    let values = (0..=n)
        .map(|i| {
            let j = n - i;
            coeffs
                .coeffs
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, &v)| {
                    acc + v * (T::from_usize_lossy((j * k) % (2 * n)) * T::PI() / nf).cos()
                })
        })
        .collect();
    NodalField::new(grid, values)
}

fn check_len<T: Real>(coeffs: &SpectralCoefficients<T>, n: usize) -> Result<()> {
    if coeffs.family != PolynomialFamily::Chebyshev || coeffs.coeffs.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} Chebyshev coefficients, got {} {:?}",
            n + 1,
            coeffs.coeffs.len(),
            coeffs.family
        )));
    }
    Ok(())
}

/// Type-I DCT `Y_k = y_0 + (-1)^k y_N + 2 Σ_{j=1}^{N-1} y_j cos(jkπ/N)` via a length-`2N` FFT.
fn dct1<T: Real + FftNum>(y: &[T]) -> Vec<T> {
    let n = y.len() - 1;
    let mut buf: Vec<Complex<T>> = Vec::with_capacity(2 * n);
    buf.extend(y.iter().map(|&v| Complex::new(v, T::zero())));
    buf.extend(y[1..n].iter().rev().map(|&v| Complex::new(v, T::zero())));
    let fft = FftPlanner::<T>::new().plan_fft_forward(2 * n);
    fft.process(&mut buf);
    buf.truncate(n + 1);
    buf.into_iter().map(|c| c.re).collect()
}

/// Nodal values to `T_k` coefficients using the FFT.
pub fn cheb_nodal_to_coeffs<T: Real + FftNum>(
    field: &NodalField<T>,
) -> Result<SpectralCoefficients<T>> {
    require_chebyshev(field.grid())?;
    let n = field.grid().degree();
    let descending: Vec<T> = field.values().iter().rev().copied().collect();
    let nf = T::from_usize_lossy(n);
    let coeffs = dct1(&descending)
        .into_iter()
        .enumerate()
        .map(|(k, y)| y / (nf * c_factor::<T>(k, n)))
        .collect();
    Ok(SpectralCoefficients {
        family: PolynomialFamily::Chebyshev,
        coeffs,
    })
}

/// `T_k` coefficients to nodal values using the FFT.
pub fn cheb_coeffs_to_nodal<T: Real + FftNum>(
    coeffs: &SpectralCoefficients<T>,
    grid: Arc<GaussLobattoGrid<T>>,
) -> Result<NodalField<T>> {
    require_chebyshev(&grid)?;
    let n = grid.degree();
    check_len(coeffs, n)?;
    let scaled: Vec<T> = coeffs
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &v)| v * c_factor::<T>(k, n))
        .collect();
    let half = T::lit(0.5);
    let values = dct1(&scaled).into_iter().rev().map(|y| y * half).collect();
    NodalField::new(grid, values)
}
