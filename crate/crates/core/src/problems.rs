//! Problem definitions: coefficients, fluxes, sources, boundary and initial
//! data, and the affine map of a physical interval onto `(-1, 1)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Function of one variable.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
/// Function of two variables, `(x, t)` for sources and `(x, v)` for fluxes.
pub type ScalarFn2<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
/// State-dependent coefficient `(x, t, v)`.
pub type ScalarFn3<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

/// `f(v) = v²`.
pub fn flux_burgers<T: Real>(v: T) -> T {
    v * v
}

/// S-shaped two-phase flux: `0` for `v < 0`, `v² / (v² + 2(1 - v)²)` on `[0, 1]`, `1` for `v > 1`.
pub fn flux_porous<T: Real>(v: T) -> T {
    if v < T::zero() {
        T::zero()
    } else if v > T::one() {
        T::one()
    } else {
        let w = T::one() - v;
        v * v / (v * v + T::lit(2.0) * w * w)
    }
}

/// Nonlinear flux `f`, possibly depending on position (after boundary lifting).
#[derive(Clone)]
pub struct Flux<T> {
    name: String,
    f: ScalarFn2<T>,
}

impl<T: Real> Flux<T> {
    pub fn burgers() -> Self {
        Self::from_fn("burgers", flux_burgers)
    }

    pub fn porous() -> Self {
        Self::from_fn("porous", flux_porous)
    }

    pub fn from_fn(name: &str, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            name: name.to_string(),
            f: Arc::new(move |_, v| f(v)),
        }
    }

    pub fn from_position_fn(name: &str, f: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        Self {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f(x, v)`.
    pub fn eval(&self, x: T, v: T) -> T {
        (self.f)(x, v)
    }
}

impl<T> fmt::Debug for Flux<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flux({})", self.name)
    }
}

/// Affine map of `(A, B)` onto the reference interval `(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineDomainMap<T> {
    left: T,
    right: T,
}

impl<T: Real> AffineDomainMap<T> {
    pub fn new(left: T, right: T) -> Result<Self> {
        if !(left < right) || !left.is_finite() || !right.is_finite() {
            return Err(Error::DegenerateInterval {
                a: left.to_f64().unwrap_or(f64::NAN),
                b: right.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { left, right })
    }

    pub fn identity() -> Self {
        Self {
            left: -T::one(),
            right: T::one(),
        }
    }

    pub fn interval(&self) -> (T, T) {
        (self.left, self.right)
    }

    /// `s = 2 / (B - A)`, so that `d/dx = s d/dξ`.
    pub fn scale(&self) -> T {
        T::lit(2.0) / (self.right - self.left)
    }

    pub fn to_reference(&self, x: T) -> T {
        (T::lit(2.0) * x - self.left - self.right) / (self.right - self.left)
    }

    pub fn to_physical(&self, xi: T) -> T {
        let half = T::lit(0.5);
        half * (self.left + self.right) + half * (self.right - self.left) * xi
    }

    pub fn is_identity(&self) -> bool {
        self.left == -T::one() && self.right == T::one()
    }
}

/// `v_t - a v_xxt + α v_x + β v_xx + γ ∂_x f(v) = F(x, t)` on `(A, B)` with
/// `v(A) = S_L`, `v(B) = S_R` and `v(x, 0) = v_0(x)`.
///
/// The linear problem `v_t - a v_xxt = b v_xx` is the case `α = γ = 0`, `β = -b`.
#[derive(Clone)]
pub struct PDEProblem<T> {
    pub domain: (T, T),
    pub a: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub flux: Option<Flux<T>>,
    pub source: Option<ScalarFn2<T>>,
    pub boundary: (T, T),
    pub initial: ScalarFn<T>,
}

impl<T: Real> PDEProblem<T> {
    /// `v_t - a v_xxt = b v_xx` on `(-1, 1)` with homogeneous Dirichlet data.
    pub fn linear(a: T, b: T, initial: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            domain: (-T::one(), T::one()),
            a,
            alpha: T::zero(),
            beta: -b,
            gamma: T::zero(),
            flux: None,
            source: None,
            boundary: (T::zero(), T::zero()),
            initial: Arc::new(initial),
        }
    }

    pub fn validate(&self) -> Result<()> {
        AffineDomainMap::new(self.domain.0, self.domain.1)?;
        if !(self.a > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient a must be positive, got {}",
                self.a
            )));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {name} is not finite"
                )));
            }
        }
        if self.gamma != T::zero() && self.flux.is_none() {
            return Err(Error::InvalidArgument("gamma != 0 requires a flux".into()));
        }
        Ok(())
    }

    pub fn domain_map(&self) -> Result<AffineDomainMap<T>> {
        AffineDomainMap::new(self.domain.0, self.domain.1)
    }

    pub fn is_linear(&self) -> bool {
        self.gamma == T::zero() || self.flux.is_none()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.boundary.0 == T::zero() && self.boundary.1 == T::zero()
    }

    pub fn source_at(&self, x: T, t: T) -> T {
        self.source.as_ref().map_or(T::zero(), |f| f(x, t))
    }
}

impl<T: Real> fmt::Debug for PDEProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PDEProblem")
            .field("domain", &self.domain)
            .field("a", &self.a)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("gamma", &self.gamma)
            .field("flux", &self.flux)
            .field("has_source", &self.source.is_some())
            .field("boundary", &self.boundary)
            .finish()
    }
}

/// Rewrites the problem in the reference variable `ξ ∈ (-1, 1)`.
///
/// A spatial derivative of order `d` picks up `s^d`, `s = 2/(B - A)`; data are
/// composed with the inverse map.
pub fn map_to_reference<T: Real>(problem: &PDEProblem<T>) -> Result<PDEProblem<T>> {
    problem.validate()?;
    let map = problem.domain_map()?;
    if map.is_identity() {
        return Ok(problem.clone());
    }
    Ok(rescale(
        problem,
        map,
        map.scale(),
        move |xi| map.to_physical(xi),
        (-T::one(), T::one()),
    ))
}

/// Inverse of [`map_to_reference`]: takes a problem posed on `(-1, 1)` back to `map`'s interval.
pub fn map_to_physical<T: Real>(
    problem: &PDEProblem<T>,
    map: AffineDomainMap<T>,
) -> Result<PDEProblem<T>> {
    problem.validate()?;
    if problem.domain != (-T::one(), T::one()) {
        return Err(Error::InvalidArgument(
            "problem is not posed on the reference interval".into(),
        ));
    }
    Ok(rescale(
        problem,
        map,
        T::one() / map.scale(),
        move |x| map.to_reference(x),
        map.interval(),
    ))
}

fn rescale<T: Real>(
    problem: &PDEProblem<T>,
    _map: AffineDomainMap<T>,
    s: T,
    inner: impl Fn(T) -> T + Copy + Send + Sync + 'static,
    domain: (T, T),
) -> PDEProblem<T> {
    let s2 = s * s;
    let initial = Arc::clone(&problem.initial);
    PDEProblem {
        domain,
        a: problem.a * s2,
        alpha: problem.alpha * s,
        beta: problem.beta * s2,
        gamma: problem.gamma * s,
        flux: problem.flux.as_ref().map(|fl| {
            let fl = fl.clone();
            let name = fl.name().to_string();
            Flux::from_position_fn(&name, move |x, v| fl.eval(inner(x), v))
        }),
        source: problem.source.as_ref().map(|src| {
            let src = Arc::clone(src);
            Arc::new(move |x: T, t: T| src(inner(x), t)) as ScalarFn2<T>
        }),
        boundary: problem.boundary,
        initial: Arc::new(move |x| initial(inner(x))),
    }
}

/// Linear lift `ℓ(x) = S_L + (S_R - S_L)(x - A)/(B - A)` of constant Dirichlet data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLift<T> {
    pub left_value: T,
    pub right_value: T,
    pub domain: (T, T),
}

impl<T: Real> BoundaryLift<T> {
    pub fn eval(&self, x: T) -> T {
        let (a, b) = self.domain;
        (self.left_value * (b - x) + self.right_value * (x - a)) / (b - a)
    }

    pub fn slope(&self) -> T {
        (self.right_value - self.left_value) / (self.domain.1 - self.domain.0)
    }

    pub fn is_zero(&self) -> bool {
        self.left_value == T::zero() && self.right_value == T::zero()
    }
}

/// Splits `v = w + ℓ` so that `w` has homogeneous boundary values.
///
/// Since `ℓ_t = ℓ_xx = 0`, the only induced terms are `-α ℓ'` in the source and
/// the shifted flux `f(w + ℓ(x))`.
pub fn lift_boundary<T: Real>(problem: &PDEProblem<T>) -> Result<(PDEProblem<T>, BoundaryLift<T>)> {
    problem.validate()?;
    let lift = BoundaryLift {
        left_value: problem.boundary.0,
        right_value: problem.boundary.1,
        domain: problem.domain,
    };
    if lift.is_zero() {
        return Ok((problem.clone(), lift));
    }
    let slope = lift.slope();
    let alpha = problem.alpha;
    let initial = Arc::clone(&problem.initial);
    let shift = -alpha * slope;
    let source: Option<ScalarFn2<T>> = match (&problem.source, shift == T::zero()) {
        (None, true) => None,
        (None, false) => Some(Arc::new(move |_, _| shift)),
        (Some(src), _) => {
            let src = Arc::clone(src);
            Some(Arc::new(move |x, t| src(x, t) + shift))
        }
    };
    let flux = problem.flux.as_ref().map(|fl| {
        let fl = fl.clone();
        let name = format!("{}+lift", fl.name());
        Flux::from_position_fn(&name, move |x, w| fl.eval(x, w + lift.eval(x)))
    });
    let homogenized = PDEProblem {
        flux,
        source,
        boundary: (T::zero(), T::zero()),
        initial: Arc::new(move |x| initial(x) - lift.eval(x)),
        ..problem.clone()
    };
    Ok((homogenized, lift))
}

/// Polynomial piece `Σ_m c_m x^m` on `[left, right]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPiece<T> {
    pub left: T,
    pub right: T,
    /// Monomial coefficients, lowest degree first.
    pub coeffs: Vec<T>,
}

impl<T: Real> PolynomialPiece<T> {
    /// `m`-th derivative at `x`.
    pub fn derivative(&self, m: usize, x: T) -> T {
        let mut acc = T::zero();
        for (k, &c) in self.coeffs.iter().enumerate().skip(m).rev() {
            let falling = (k - m + 1..=k).fold(T::one(), |p, j| p * T::from_usize_lossy(j));
            acc = acc * x + c * falling;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Built-in initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData<T> {
    /// `1` on `|x| <= 1/2`, `0` elsewhere.
    SquarePulse,
    /// `1 - |x|`.
    Tent,
    /// `1 + 2x + x²` on `[-1, 0]`, `1 + 2x - 3x²` on `[0, 1]`.
    PiecewiseQuadratic,
    /// `S_L` for `x < 0`, `S_R` for `x >= 0`.
    Riemann { left: T, right: T },
    /// `sin(πx)`.
    SinPi,
    /// `sech(x)`.
    Sech,
}

impl<T: Real> InitialData<T> {
    /// Parses `square_pulse`, `tent`, `piecewise_quadratic`, `riemann(SL,SR)`, `sin_pi`, `sech`.
    pub fn from_name(name: &str) -> Result<Self> {
        let trimmed = name.trim();
        Ok(match trimmed {
            "square_pulse" => Self::SquarePulse,
            "tent" => Self::Tent,
            "piecewise_quadratic" => Self::PiecewiseQuadratic,
            "sin_pi" => Self::SinPi,
            "sech" => Self::Sech,
            _ => {
                let args = trimmed
                    .strip_prefix("riemann(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::UnknownName(trimmed.to_string()))?;
                let parsed: Vec<f64> = args
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::UnknownName(trimmed.to_string()))?;
                match parsed.as_slice() {
                    [l, r] => Self::Riemann {
                        left: T::lit(*l),
                        right: T::lit(*r),
                    },
                    _ => return Err(Error::UnknownName(trimmed.to_string())),
                }
            }
        })
    }

    pub fn eval(&self, x: T) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        match *self {
            Self::SquarePulse => {
                if x.abs() <= T::lit(0.5) {
                    one
                } else {
                    T::zero()
                }
            }
            Self::Tent => one - x.abs(),
            Self::PiecewiseQuadratic => {
                if x <= T::zero() {
                    one + two * x + x * x
                } else {
                    one + two * x - T::lit(3.0) * x * x
                }
            }
            Self::Riemann { left, right } => {
                if x < T::zero() {
                    left
                } else {
                    right
                }
            }
            Self::SinPi => (T::PI() * x).sin(),
            Self::Sech => one / x.cosh(),
        }
    }

    pub fn to_fn(self) -> ScalarFn<T> {
        Arc::new(move |x| self.eval(x))
    }

    /// Exact piecewise-polynomial form on `[-1, 1]`, when the data have one.
    pub fn pieces(&self) -> Option<Vec<PolynomialPiece<T>>> {
        let one = T::one();
        let half = T::lit(0.5);
        let piece = |l: T, r: T, c: &[f64]| PolynomialPiece {
            left: l,
            right: r,
            coeffs: c.iter().map(|&v| T::lit(v)).collect(),
        };
        Some(match *self {
            Self::SquarePulse => vec![piece(-half, half, &[1.0])],
            Self::Tent => vec![
                piece(-one, T::zero(), &[1.0, 1.0]),
                piece(T::zero(), one, &[1.0, -1.0]),
            ],
            Self::PiecewiseQuadratic => {
                vec![
                    piece(-one, T::zero(), &[1.0, 2.0, 1.0]),
                    piece(T::zero(), one, &[1.0, 2.0, -3.0]),
                ]
            }
            Self::Riemann { left, right } => vec![
                PolynomialPiece {
                    left: -one,
                    right: T::zero(),
                    coeffs: vec![left],
                },
                PolynomialPiece {
                    left: T::zero(),
                    right: one,
                    coeffs: vec![right],
                },
            ],
            Self::SinPi | Self::Sech => return None,
        })
    }

    /// One-sided-average derivative (used where the data have kinks).
    pub fn derivative(&self, x: T) -> T {
        let two = T::lit(2.0);
        match *self {
            Self::SquarePulse | Self::Riemann { .. } => T::zero(),
            Self::Tent => {
                if x == T::zero() {
                    T::zero()
                } else {
                    -x.signum()
                }
            }
            Self::PiecewiseQuadratic => {
                if x <= T::zero() {
                    two + two * x
                } else {
                    two - T::lit(6.0) * x
                }
            }
            Self::SinPi => T::PI() * (T::PI() * x).cos(),
            Self::Sech => -x.tanh() / x.cosh(),
        }
    }
}

/// General pseudo-parabolic problem
/// `c v_t - (a v_xt)_x = -(α v_x)_x + β v_x + γ` on `(-1, 1)` with `v(±1) = 0`.
///
/// `c`, `a` depend on `x`; `α`, `β`, `γ` on `(x, t, v)`.
#[derive(Clone)]
pub struct SobolevProblem<T> {
    pub c: ScalarFn<T>,
    pub a: ScalarFn<T>,
    pub alpha: ScalarFn3<T>,
    pub beta: ScalarFn3<T>,
    pub gamma: ScalarFn3<T>,
    pub initial: ScalarFn<T>,
}

impl<T: Real> SobolevProblem<T> {
    /// Checks `a, c >= floor > 0` at `samples` equispaced points.
    pub fn validate(&self, samples: usize) -> Result<()> {
        let samples = samples.max(2);
        let mut min_a = T::infinity();
        let mut min_c = T::infinity();
        for i in 0..samples {
            let x =
                -T::one() + T::lit(2.0) * T::from_usize_lossy(i) / T::from_usize_lossy(samples - 1);
            let (a, c) = ((self.a)(x), (self.c)(x));
            if !a.is_finite() || !c.is_finite() {
                return Err(Error::NonFiniteCoefficient {
                    x: x.to_f64().unwrap_or(f64::NAN),
                });
            }
            min_a = min_a.min(a);
            min_c = min_c.min(c);
        }
        if !(min_a > T::zero()) || !(min_c > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "a and c must be bounded below by a positive constant (min a = {min_a}, min c = {min_c})"
            )));
        }
        Ok(())
    }
}

impl<T> fmt::Debug for SobolevProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SobolevProblem { .. }")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_examples() {
        assert_eq!(flux_burgers(0.0), 0.0);
        assert_eq!(flux_burgers(3.0), 9.0);
        assert_eq!(flux_burgers(-2.0), 4.0);
        assert!((flux_porous(0.5f64) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(flux_porous(-0.3), 0.0);
        assert_eq!(flux_porous(1.0), 1.0);
        assert_eq!(flux_porous(1.7), 1.0);
    }

    #[test]
    fn porous_flux_is_s_shaped() {
        let h = 1e-4f64;
        assert!((flux_porous(h) - flux_porous(0.0)) / h < 1e-3);
        assert!(flux_porous(1.0 - h) > 1.0 - 1e-3);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = flux_porous(i as f64 / 1000.0);
            assert!(v >= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn map_examples() {
        let p = PDEProblem::linear(1.0, 1.0, |x: f64| x);
        let q = map_to_reference(&p).unwrap();
        assert_eq!((q.a, q.beta), (1.0, -1.0));

        let mut p = PDEProblem::linear(1.0, 1.0, |x: f64| x);
        p.domain = (-20.0, 30.0);
        let q = map_to_reference(&p).unwrap();
        assert!((q.a - 1.6e-3).abs() < 1e-17);
        let m = p.domain_map().unwrap();
        assert!((m.scale() - 0.04).abs() < 1e-17);
        assert_eq!(m.to_reference(-20.0), -1.0);
        assert_eq!(m.to_reference(30.0), 1.0);
        assert!(((q.initial)(0.5) - 17.5).abs() < 1e-13);

        let m = AffineDomainMap::<f64>::new(-60.0, 210.0).unwrap();
        assert!((m.scale() - 2.0 / 270.0).abs() < 1e-17);
        assert!(AffineDomainMap::<f64>::new(1.0, 1.0).is_err());
    }

    #[test]
    fn lift_examples() {
        let d = InitialData::<f64>::Riemann {
            left: 0.9,
            right: 0.0,
        };
        let mut p = PDEProblem::linear(1.0, 1.0, move |x| d.eval(x));
        p.alpha = 2.0;
        p.boundary = (0.9, 0.0);
        let (h, ell) = lift_boundary(&p).unwrap();
        assert!((ell.eval(-1.0) - 0.9).abs() < 1e-15);
        assert_eq!(ell.eval(1.0), 0.0);
        assert!((ell.slope() + 0.45).abs() < 1e-15);
        assert_eq!(h.boundary, (0.0, 0.0));
        assert!((h.source_at(0.3, 1.0) - 0.9).abs() < 1e-15);
        let w = (h.initial)(-0.5);
        assert!((w + ell.eval(-0.5) - 0.9).abs() < 1e-15);

        let p = PDEProblem::linear(1.0, 1.0, |x: f64| x);
        let (h, ell) = lift_boundary(&p).unwrap();
        assert!(ell.is_zero());
        assert!(h.source.is_none());
    }

    #[test]
    fn builtin_data_examples() {
        let tent = InitialData::<f64>::from_name("tent").unwrap();
        assert_eq!(tent.eval(0.0), 1.0);
        assert_eq!(tent.eval(1.0), 0.0);
        assert_eq!(tent.eval(-1.0), 0.0);
        let r = InitialData::<f64>::from_name("riemann(0.9, 0)").unwrap();
        assert_eq!(
            r,
            InitialData::Riemann {
                left: 0.9,
                right: 0.0
            }
        );
        assert_eq!(r.eval(0.0), 0.0);
        assert_eq!(r.eval(-1e-12), 0.9);
        let pq = InitialData::<f64>::PiecewiseQuadratic;
        assert_eq!(pq.eval(0.0), 1.0);
        assert_eq!(pq.derivative(-1e-300), 2.0);
        assert_eq!(pq.derivative(1e-300), 2.0);
        assert!(InitialData::<f64>::from_name("gaussian").is_err());
        assert!(InitialData::<f64>::from_name("riemann(1)").is_err());
    }

    #[test]
    fn pieces_agree_with_eval() {
        for d in [
            InitialData::<f64>::SquarePulse,
            InitialData::Tent,
            InitialData::PiecewiseQuadratic,
        ] {
            let pieces = d.pieces().unwrap();
            for i in 0..200 {
                let x = -0.995 + i as f64 * 0.01;
                let inside = pieces.iter().find(|p| p.left < x && x < p.right);
                let v = inside.map_or(0.0, |p| p.derivative(0, x));
                assert!((v - d.eval(x)).abs() < 1e-14, "{d:?} at {x}");
            }
        }
    }

    #[test]
    fn sobolev_validation_samples_coefficients() {
        let zero3: ScalarFn3<f64> = Arc::new(|_, _, _| 0.0);
        let mut p = SobolevProblem {
            c: Arc::new(|_| 1.0),
            a: Arc::new(|x| 1.0 + 0.5 * x),
            alpha: zero3.clone(),
            beta: zero3.clone(),
            gamma: zero3,
            initial: Arc::new(|x| 1.0 - x * x),
        };
        assert!(p.validate(101).is_ok());
        p.a = Arc::new(|x| x);
        assert!(p.validate(101).is_err());
    }
}
