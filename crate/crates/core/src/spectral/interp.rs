use super::grid::{GaussLobattoGrid, NodalField};
use super::poly::legendre_with_derivatives;
use super::PolynomialFamily;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Barycentric weights of the Gauss–Lobatto nodes, up to a common factor.
///
/// Legendre: `λ_j ∝ 1 / L_N(x_j)`. Chebyshev: `λ_j ∝ (-1)^j δ_j` with `δ_j = 1/2` at the ends.
pub fn barycentric_weights<T: Real>(grid: &GaussLobattoGrid<T>) -> Vec<T> {
    let n = grid.degree();
    match grid.family() {
        PolynomialFamily::Legendre => grid
            .nodes()
            .iter()
            .map(|&x| T::one() / legendre_with_derivatives(n, x).0)
            .collect(),
        PolynomialFamily::Chebyshev => (0..=n)
            .map(|j| {
                let s = if j % 2 == 0 { T::one() } else { -T::one() };
                if j == 0 || j == n {
                    s * T::lit(0.5)
                } else {
                    s
                }
            })
            .collect(),
    }
}

fn node_difference<T: Real>(grid: &GaussLobattoGrid<T>, j: usize, k: usize) -> T {
    match grid.family() {
        PolynomialFamily::Legendre => grid.nodes()[j] - grid.nodes()[k],
        PolynomialFamily::Chebyshev => {
            // -cos(jπ/N) + cos(kπ/N) = 2 sin((j+k)π/2N) sin((j-k)π/2N)
            let two_n = T::lit(2.0) * T::from_usize_lossy(grid.degree());
            let jf = T::from_usize_lossy(j);
            let kf = T::from_usize_lossy(k);
            T::lit(2.0) * (T::PI() * (jf + kf) / two_n).sin() * (T::PI() * (jf - kf) / two_n).sin()
        }
    }
}

/// First-derivative matrix of the degree-`N` interpolant at the grid nodes.
///
/// Off-diagonal entries from the barycentric weights; the diagonal is the
/// negative row sum so that constants are differentiated to zero.
pub fn diff_matrix<T: Real>(grid: &GaussLobattoGrid<T>) -> Matrix<T> {
    let n1 = grid.len();
    let lam = barycentric_weights(grid);
    let mut d = Matrix::zeros(n1, n1);
    for j in 0..n1 {
        let mut sum = T::zero();
        for k in 0..n1 {
            if k != j {
                let v = (lam[k] / lam[j]) / node_difference(grid, j, k);
                d[(j, k)] = v;
                sum += v;
            }
        }
        d[(j, j)] = -sum;
    }
    d
}

/// `D² = D·D`.
pub fn second_diff_matrix<T: Real>(grid: &GaussLobattoGrid<T>) -> Matrix<T> {
    let d = diff_matrix(grid);
    d.matmul(&d)
}

/// Legendre nodal (cardinal) basis function `ψ_j(x)`.
pub fn nodal_basis_eval<T: Real>(grid: &GaussLobattoGrid<T>, j: usize, x: T) -> Result<T> {
    if grid.family() != PolynomialFamily::Legendre {
        return Err(Error::WrongFamily {
            expected: "Legendre",
        });
    }
    let n = grid.degree();
    if j > n {
        return Err(Error::InvalidArgument(format!(
            "basis index {j} exceeds degree {n}"
        )));
    }
    let xj = grid.nodes()[j];
    if x == xj {
        return Ok(T::one());
    }
    let nf = T::from_usize_lossy(n);
    let (lnj, _, _) = legendre_with_derivatives(n, xj);
    let (_, dn, _) = legendre_with_derivatives(n, x);
    Ok((T::one() - x * x) / (xj - x) * dn / (nf * (nf + T::one()) * lnj))
}

/// Evaluates the interpolant through `field` at `points` (barycentric formula of the second kind).
pub fn interpolant_eval<T: Real>(field: &NodalField<T>, points: &[T]) -> Vec<T> {
    let grid = field.grid();
    let lam = barycentric_weights(grid);
    let nodes = grid.nodes();
    let values = field.values();
    points
        .iter()
        .map(|&x| {
            let mut num = T::zero();
            let mut den = T::zero();
            for ((&xj, &lj), &vj) in nodes.iter().zip(&lam).zip(values) {
                let diff = x - xj;
                if diff == T::zero() {
                    return vj;
                }
                let c = lj / diff;
                num += c * vj;
                den += c;
            }
            num / den
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{chebyshev_gl_grid, legendre_gl_grid};
    use std::sync::Arc;

    fn grids(n: usize) -> Vec<Arc<GaussLobattoGrid<f64>>> {
        vec![
            Arc::new(legendre_gl_grid(n).unwrap()),
            Arc::new(chebyshev_gl_grid(n).unwrap()),
        ]
    }

    #[test]
    fn diff_matrix_examples() {
        for n in [2usize, 3, 8, 17, 40] {
            for g in grids(n) {
                let d = diff_matrix(&g);
                let one = d.mul_vec(&vec![1.0; n + 1]);
                assert!(one.iter().all(|v| v.abs() < 1e-12));
                let x = d.mul_vec(g.nodes());
                assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-12), "{x:?}");
                let sq: Vec<f64> = g.nodes().iter().map(|x| x * x).collect();
                let dsq = d.mul_vec(&sq);
                for (v, xj) in dsq.iter().zip(g.nodes()) {
                    assert!((v - 2.0 * xj).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn cardinality_and_partition_of_unity() {
        let g = legendre_gl_grid::<f64>(2).unwrap();
        assert!((nodal_basis_eval(&g, 1, 0.5).unwrap() - 0.75).abs() < 1e-15);
        let g = legendre_gl_grid::<f64>(12).unwrap();
        for &x in &[-0.93, -0.2, 0.0, 0.41, 0.999] {
            let s: f64 = (0..=12).map(|j| nodal_basis_eval(&g, j, x).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let c = chebyshev_gl_grid::<f64>(4).unwrap();
        assert!(matches!(
            nodal_basis_eval(&c, 0, 0.1),
            Err(Error::WrongFamily { .. })
        ));
    }

    #[test]
    fn interpolation_examples() {
        let g = Arc::new(legendre_gl_grid::<f64>(2).unwrap());
        let f = NodalField::new(g, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((interpolant_eval(&f, &[0.5])[0] - 0.75).abs() < 1e-15);

        for g in grids(9) {
            let p = |x: f64| 3.0 * x.powi(9) - x.powi(4) + 0.5 * x - 2.0;
            let f = g.sample(p);
            let pts = [-1.0, -0.77, -0.1, 0.0, 0.33, 0.95];
            for (v, &x) in interpolant_eval(&f, &pts).iter().zip(&pts) {
                assert!((v - p(x)).abs() < 1e-11);
            }
            let at_nodes = interpolant_eval(&f, g.nodes());
            assert_eq!(at_nodes.as_slice(), f.values());
        }
    }
}
