use super::PolynomialFamily;
use crate::error::{Error, Result};
use crate::scalar::Real;

const DOMAIN_SLACK: f64 = 1e-12;

fn check_domain<T: Real>(x: T) -> Result<()> {
    if x.abs() <= T::one() + T::lit(DOMAIN_SLACK) {
        Ok(())
    } else {
        Err(Error::Domain {
            x: x.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `(L_k(x), L_k'(x), L_k''(x))` by the three-term recurrence and its derivatives.
///
/// No domain check; callers that need one go through [`eval_orthopoly`].
pub fn legendre_with_derivatives<T: Real>(k: usize, x: T) -> (T, T, T) {
    let (mut p0, mut d0, mut s0) = (T::one(), T::zero(), T::zero());
    if k == 0 {
        return (p0, d0, s0);
    }
    let (mut p1, mut d1, mut s1) = (x, T::one(), T::zero());
    let two = T::lit(2.0);
    for j in 1..k {
        let jf = T::from_usize_lossy(j);
        let a = two * jf + T::one();
        let inv = T::one() / (jf + T::one());
        // (j+1) L_{j+1} = (2j+1) x L_j - j L_{j-1}, differentiated twice
        let p2 = (a * x * p1 - jf * p0) * inv;
        let d2 = (a * (p1 + x * d1) - jf * d0) * inv;
        let s2 = (a * (two * d1 + x * s1) - jf * s0) * inv;
        (p0, d0, s0) = (p1, d1, s1);
        (p1, d1, s1) = (p2, d2, s2);
    }
    (p1, d1, s1)
}

fn chebyshev_with_derivatives<T: Real>(k: usize, x: T) -> (T, T, T) {
    let (mut p0, mut d0, mut s0) = (T::one(), T::zero(), T::zero());
    if k == 0 {
        return (p0, d0, s0);
    }
    let (mut p1, mut d1, mut s1) = (x, T::one(), T::zero());
    let two = T::lit(2.0);
    for _ in 1..k {
        let p2 = two * x * p1 - p0;
        let d2 = two * (p1 + x * d1) - d0;
        let s2 = two * (two * d1 + x * s1) - s0;
        (p0, d0, s0) = (p1, d1, s1);
        (p1, d1, s1) = (p2, d2, s2);
    }
    (p1, d1, s1)
}

/// `L_k(x)` or `T_k(x)`.
pub fn eval_orthopoly<T: Real>(family: PolynomialFamily, k: usize, x: T) -> Result<T> {
    check_domain(x)?;
    Ok(match family {
        PolynomialFamily::Legendre => legendre_with_derivatives(k, x).0,
        PolynomialFamily::Chebyshev => chebyshev_with_derivatives(k, x).0,
    })
}

/// First (`order = 1`) or second (`order = 2`) derivative of `L_k` or `T_k`.
///
/// The Legendre second derivative comes from the Legendre equation
/// `(1 - x^2) L_k'' = 2 x L_k' - k (k + 1) L_k` away from the endpoints, and from
/// the differentiated recurrence where `1 - x^2` vanishes.
pub fn eval_orthopoly_derivative<T: Real>(
    family: PolynomialFamily,
    k: usize,
    x: T,
    order: usize,
) -> Result<T> {
    check_domain(x)?;
    if order == 0 || order > 2 {
        return Err(Error::InvalidArgument(format!(
            "derivative order must be 1 or 2, got {order}"
        )));
    }
    Ok(match family {
        PolynomialFamily::Legendre => {
            let (p, d, s) = legendre_with_derivatives(k, x);
            if order == 1 {
                d
            } else {
                let one_minus = T::one() - x * x;
                if one_minus > T::lit(1e-4) {
                    let kf = T::from_usize_lossy(k);
                    (T::lit(2.0) * x * d - kf * (kf + T::one()) * p) / one_minus
                } else {
                    s
                }
            }
        }
        PolynomialFamily::Chebyshev => {
            let (_, d, s) = chebyshev_with_derivatives(k, x);
            if order == 1 {
                d
            } else {
                s
            }
        }
    })
}
