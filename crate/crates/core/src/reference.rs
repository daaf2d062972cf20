//! Exact and reference solutions: the sine series of the linear problem
//! `v_t - a v_xxt = b v_xx` and manufactured solutions of the BBM-Burgers form.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problems::{Flux, InitialData, PDEProblem, PolynomialPiece, ScalarFn, ScalarFn2};
use crate::scalar::Real;

/// `α_n = b λ_n / (1 - a λ_n)`, `λ_n = -(nπ/2)²`.
pub fn decay_rate<T: Real>(n: usize, a: T, b: T) -> T {
    let k = T::from_usize_lossy(n) * T::FRAC_PI_2();
    let lambda = -k * k;
    b * lambda / (T::one() - a * lambda)
}

/// Sine coefficients of the pulse on `|x| <= 1/2`: `(2/(nπ))(cos(nπ/4) - cos(3nπ/4))`.
pub fn pulse_coefficients<T: Real>(n: usize) -> T {
    let nf = T::from_usize_lossy(n);
    let q = nf * T::FRAC_PI_4();
    T::lit(2.0) / (nf * T::PI()) * (q.cos() - (T::lit(3.0) * q).cos())
}

/// `X_n(x) = sin(nπ(x+1)/2)`.
pub fn sine_mode<T: Real>(n: usize, x: T) -> T {
    (T::from_usize_lossy(n) * T::FRAC_PI_2() * (x + T::one())).sin()
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss–Kronrod 7/15 estimate and error on `[a, b]`.
fn gauss_kronrod<T: Real>(f: &dyn Fn(T) -> T, a: T, b: T) -> (T, T) {
    let c = T::lit(0.5) * (a + b);
    let h = T::lit(0.5) * (b - a);
    let mut kronrod = T::lit(GK_WEIGHTS[7]) * f(c);
    let mut gauss = T::lit(GAUSS_WEIGHTS[3]) * f(c);
    for i in 0..7 {
        let dx = h * T::lit(GK_NODES[i]);
        let s = f(c - dx) + f(c + dx);
        kronrod += T::lit(GK_WEIGHTS[i]) * s;
        if i % 2 == 1 {
            gauss += T::lit(GAUSS_WEIGHTS[i / 2]) * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive<T: Real>(f: &dyn Fn(T) -> T, a: T, b: T, tol: T, depth: usize) -> Result<T> {
    let (value, err) = gauss_kronrod(f, a, b);
    if err <= tol
        || (b - a).abs() <= T::epsilon() * T::lit(64.0) * a.abs().max(b.abs()).max(T::one())
    {
        return Ok(value);
    }
    if depth == 0 {
        return Err(Error::QuadratureConvergence {
            a: a.to_f64().unwrap_or(f64::NAN),
            b: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    let m = T::lit(0.5) * (a + b);
    let half = T::lit(0.5) * tol;
    Ok(adaptive(f, a, m, half, depth - 1)? + adaptive(f, m, b, half, depth - 1)?)
}

/// `C_n = ∫ v₀(x) X_n(x) dx` by adaptive Gauss–Kronrod quadrature on panels
/// split at `breakpoints` (kinks or jumps of `v₀`) and at the zeros of `X_n`.
pub fn sine_coefficients_numeric<T: Real>(
    v0: &dyn Fn(T) -> T,
    n: usize,
    breakpoints: &[T],
) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("sine modes start at n = 1".into()));
    }
    let mut cuts: Vec<T> = (0..=n)
        .map(|i| -T::one() + T::lit(2.0) * T::from_usize_lossy(i) / T::from_usize_lossy(n))
        .collect();
    cuts.extend(
        breakpoints
            .iter()
            .copied()
            .filter(|&x| x > -T::one() && x < T::one()),
    );
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    cuts.dedup();
    let f = |x: T| v0(x) * sine_mode(n, x);
    let tol = T::lit(1e-15).max(T::epsilon() * T::lit(10.0)) / T::from_usize_lossy(cuts.len());
    let mut total = T::zero();
    for w in cuts.windows(2) {
        total += adaptive(&f, w[0], w[1], tol, 40)?;
    }
    Ok(total)
}

/// `C_n` for piecewise-polynomial data in closed form (repeated integration by parts).
pub fn piecewise_sine_coefficient<T: Real>(pieces: &[PolynomialPiece<T>], n: usize) -> T {
    let k = T::from_usize_lossy(n) * T::FRAC_PI_2();
    let antiderivative = |p: &PolynomialPiece<T>, x: T| {
        let theta = k * (x + T::one());
        let (s, c) = theta.sin_cos();
        let mut kp = k;
        let mut acc = T::zero();
        for m in 0..=p.degree() {
            let trig = match m % 4 {
                0 => -c,
                1 => s,
                2 => c,
                _ => -s,
            };
            acc += p.derivative(m, x) * trig / kp;
            kp *= k;
        }
        acc
    };
    pieces
        .iter()
        .map(|p| antiderivative(p, p.right) - antiderivative(p, p.left))
        .fold(T::zero(), |a, b| a + b)
}

/// `|C_n| <= K n^{-p}` for piecewise-polynomial data, from the jumps of each
/// derivative at the breakpoints.
pub fn piecewise_envelope<T: Real>(pieces: &[PolynomialPiece<T>]) -> (T, u32) {
    let mut points: Vec<T> = pieces.iter().flat_map(|p| [p.left, p.right]).collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.dedup();
    let max_degree = pieces.iter().map(|p| p.degree()).max().unwrap_or(0);
    let value = |m: usize, x: T, from_left: bool| -> T {
        pieces
            .iter()
            .find(|p| {
                if from_left {
                    p.left < x && x <= p.right
                } else {
                    p.left <= x && x < p.right
                }
            })
            .map_or(T::zero(), |p| p.derivative(m, x))
    };
    let mut jumps = vec![T::zero(); max_degree + 1];
    for &x in &points {
        let outer = x == -T::one() || x == T::one();
        for (m, j) in jumps.iter_mut().enumerate() {
            // sin(k(x+1)) vanishes at ±1, so only the cosine terms survive there
            if outer && m % 2 == 1 {
                continue;
            }
            *j += (value(m, x, true) - value(m, x, false)).abs();
        }
    }
    let tiny = T::epsilon() * T::lit(16.0);
    let m0 = jumps.iter().position(|&j| j > tiny).unwrap_or(max_degree);
    let two_over_pi = T::lit(2.0) / T::PI();
    let k = jumps
        .iter()
        .enumerate()
        .skip(m0)
        .fold(T::zero(), |acc, (m, &j)| {
            acc + j * two_over_pi.powi(m as i32 + 1)
        });
    (k, m0 as u32 + 1)
}

/// How the sine coefficients of the initial datum are produced.
#[derive(Clone)]
pub enum CoefficientRule<T> {
    /// Closed form from an exact piecewise-polynomial representation.
    Piecewise(Vec<PolynomialPiece<T>>),
    /// Arbitrary rule with a decay envelope `|C_n| <= K n^{-p}`.
    Custom {
        coefficient: Arc<dyn Fn(usize) -> T + Send + Sync>,
        envelope: (T, u32),
    },
}

/// Truncation controls of the resummed series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation<T> {
    pub tolerance: T,
    pub derivative_tolerance: T,
    pub n_max: usize,
}

impl<T: Real> Default for Truncation<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-12),
            derivative_tolerance: T::lit(1e-8),
            n_max: 1_000_000,
        }
    }
}

/// Solution of `v_t - a v_xxt = b v_xx`, `v(±1) = 0`, written with the tail split
///
/// ```text
/// v(x, t) = e^{-(b/a)t} v₀(x) + Σ C_n (e^{α_n t} - e^{-(b/a)t}) X_n(x)
/// ```
///
/// whose remainder decays two orders faster than the plain sine series.
#[derive(Clone)]
pub struct SineSeriesSolution<T> {
    pub a: T,
    pub b: T,
    initial: ScalarFn<T>,
    initial_derivative: ScalarFn<T>,
    rule: CoefficientRule<T>,
    pub truncation: Truncation<T>,
}

impl<T: Real> SineSeriesSolution<T> {
    pub fn new(
        a: T,
        b: T,
        initial: ScalarFn<T>,
        initial_derivative: ScalarFn<T>,
        rule: CoefficientRule<T>,
    ) -> Result<Self> {
        if !(a > T::zero()) || !(b > T::zero()) {
            return Err(Error::InvalidArgument(
                "series solution needs a > 0 and b > 0".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            initial,
            initial_derivative,
            rule,
            truncation: Truncation::default(),
        })
    }

    /// Series for one of the piecewise-polynomial built-in data.
    pub fn for_initial_data(a: T, b: T, data: InitialData<T>) -> Result<Self> {
        let pieces = data.pieces().ok_or_else(|| {
            Error::InvalidArgument("initial datum has no piecewise-polynomial form".into())
        })?;
        Self::new(
            a,
            b,
            data.to_fn(),
            Arc::new(move |x| data.derivative(x)),
            CoefficientRule::Piecewise(pieces),
        )
    }

    pub fn with_truncation(mut self, truncation: Truncation<T>) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn coefficient(&self, n: usize) -> T {
        match &self.rule {
            CoefficientRule::Piecewise(p) => piecewise_sine_coefficient(p, n),
            CoefficientRule::Custom { coefficient, .. } => coefficient(n),
        }
    }

    fn envelope(&self) -> (T, u32) {
        match &self.rule {
            CoefficientRule::Piecewise(p) => piecewise_envelope(p),
            CoefficientRule::Custom { envelope, .. } => *envelope,
        }
    }

    fn mu(&self, n: usize) -> T {
        let k = T::from_usize_lossy(n) * T::FRAC_PI_2();
        T::one() + self.a * k * k
    }

    /// Bound on the remainder after `m` terms; `order` is 0 for values, 1 for `∂_x`.
    pub fn tail_bound(&self, t: T, m: usize, order: u32) -> T {
        let (k, p) = self.envelope();
        let q = self.b / self.a * t;
        if q == T::zero() || k == T::zero() {
            return T::zero();
        }
        let m = m.max(1);
        let mf = T::from_usize_lossy(m);
        let power = T::from_u32(p + 1 - order).expect("small exponent");
        let growth = if order == 0 { T::one() } else { T::FRAC_PI_2() };
        k * growth * (-q + q / self.mu(m + 1)).exp() * q
            / (self.a * T::PI() * T::PI() / T::lit(4.0))
            * mf.powf(-power)
            / power
    }

    /// Smallest number of terms whose tail bound is below `tol`.
    pub fn terms_needed(&self, t: T, tol: T, order: u32) -> Result<usize> {
        let budget = self.truncation.n_max;
        if self.tail_bound(t, budget, order) > tol {
            return Err(Error::TruncationBudget {
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
                budget,
            });
        }
        let (mut lo, mut hi) = (0usize, 1usize);
        while hi < budget && self.tail_bound(t, hi, order) > tol {
            lo = hi;
            hi = (hi * 2).min(budget);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail_bound(t, mid, order) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// Precomputes the remainder coefficients at time `t`.
    pub fn at_time(&self, t: T) -> Result<SeriesSnapshot<T>> {
        if !(t >= T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "series time must be nonnegative, got {t}"
            )));
        }
        let m = self.terms_needed(t, self.truncation.tolerance, 0)?;
        let q = self.b / self.a * t;
        let decay = (-q).exp();
        let terms = (1..=m)
            .map(|n| {
                let growth = (q / self.mu(n)).exp() - T::one();
                self.coefficient(n) * decay * growth
            })
            .collect();
        Ok(SeriesSnapshot {
            decay,
            terms,
            solution: self.clone(),
            t,
        })
    }

    /// `v(x, t)`.
    pub fn eval(&self, x: T, t: T) -> Result<T> {
        Ok(self.at_time(t)?.value(x))
    }
}

/// Remainder coefficients `C_n (e^{α_n t} - e^{-(b/a)t})` at a fixed time.
#[derive(Clone)]
pub struct SeriesSnapshot<T> {
    decay: T,
    terms: Vec<T>,
    solution: SineSeriesSolution<T>,
    pub t: T,
}

/// `Σ_n c_n w_n(nθ)` with `w_n` the sine (values) or cosine (derivative) of
/// `nθ`, generated by rotation and re-anchored periodically.
fn rotate_sum<T: Real>(coeffs: &[T], theta: T, derivative: bool) -> T {
    const RESYNC: usize = 128;
    let (s1, c1) = theta.sin_cos();
    let mut acc = T::zero();
    let (mut s, mut c) = (T::zero(), T::one());
    for (i, &cn) in coeffs.iter().enumerate() {
        let n = i + 1;
        if n % RESYNC == 0 {
            let sc = (T::from_usize_lossy(n) * theta).sin_cos();
            s = sc.0;
            c = sc.1;
        } else {
            let ns = s * c1 + c * s1;
            c = c * c1 - s * s1;
            s = ns;
        }
        acc += if derivative {
            cn * T::from_usize_lossy(n) * c
        } else {
            cn * s
        };
    }
    acc
}

impl<T: Real> SeriesSnapshot<T> {
    pub fn terms(&self) -> usize {
        self.terms.len()
    }

    pub fn value(&self, x: T) -> T {
        let theta = T::FRAC_PI_2() * (x + T::one());
        self.decay * (self.solution.initial)(x) + rotate_sum(&self.terms, theta, false)
    }

    /// `v_x(x, t)`; at kinks of `v₀` the mean of the one-sided derivatives is used.
    pub fn derivative(&self, x: T) -> Result<T> {
        let s = &self.solution;
        let m = s.terms_needed(self.t, s.truncation.derivative_tolerance, 1)?;
        let extra;
        let terms: &[T] = if m <= self.terms.len() {
            &self.terms[..m]
        } else {
            let q = s.b / s.a * self.t;
            extra = (1..=m)
                .map(|n| s.coefficient(n) * self.decay * ((q / s.mu(n)).exp() - T::one()))
                .collect::<Vec<_>>();
            &extra
        };
        let theta = T::FRAC_PI_2() * (x + T::one());
        Ok(
            self.decay * (s.initial_derivative)(x)
                + T::FRAC_PI_2() * rotate_sum(terms, theta, true),
        )
    }
}

/// Plain partial sum `Σ_{n <= terms} C_n e^{α_n t} X_n(x)`.
pub fn direct_partial_sum<T: Real>(
    solution: &SineSeriesSolution<T>,
    x: T,
    t: T,
    terms: usize,
) -> T {
    let coeffs: Vec<T> = (1..=terms)
        .map(|n| solution.coefficient(n) * (decay_rate(n, solution.a, solution.b) * t).exp())
        .collect();
    rotate_sum(&coeffs, T::FRAC_PI_2() * (x + T::one()), false)
}

/// Closed-form solution `u`, its derivative `u_x`, and the problem it solves.
#[derive(Clone)]
pub struct ManufacturedSolution<T> {
    pub value: ScalarFn2<T>,
    pub derivative: ScalarFn2<T>,
    pub source: ScalarFn2<T>,
    pub problem: PDEProblem<T>,
}

/// `u = e^{-t} sin(πx)` on `(-1, 1)` with `a = α = 1`, `β = -1`, `γ = 1/2`, `f = v²`.
pub fn manufactured_problem1<T: Real>() -> ManufacturedSolution<T> {
    let pi = T::PI();
    let source: ScalarFn2<T> = Arc::new(move |x, t| {
        let e = (-t).exp();
        let (s, c) = (pi * x).sin_cos();
        e * (-s + pi * c * (T::one() + e * s))
    });
    ManufacturedSolution {
        value: Arc::new(move |x, t| (-t).exp() * (pi * x).sin()),
        derivative: Arc::new(move |x, t| pi * (-t).exp() * (pi * x).cos()),
        source: Arc::clone(&source),
        problem: PDEProblem {
            domain: (-T::one(), T::one()),
            a: T::one(),
            alpha: T::one(),
            beta: -T::one(),
            gamma: T::lit(0.5),
            flux: Some(Flux::burgers()),
            source: Some(source),
            boundary: (T::zero(), T::zero()),
            initial: Arc::new(move |x| (pi * x).sin()),
        },
    }
}

fn sech<T: Real>(x: T) -> T {
    T::one() / x.cosh()
}

/// `v = sech(x - t)` on `(-20, 30)` with `a = α = 1`, `β = -1`, `γ = -1/2`, `f = v²`.
pub fn manufactured_problem2<T: Real>() -> ManufacturedSolution<T> {
    let source: ScalarFn2<T> = Arc::new(|x, t| {
        let z = x - t;
        let (s, th) = (sech(z), z.tanh());
        let th2 = th * th;
        s * (T::one() - T::lit(6.0) * th2 * th - T::lit(2.0) * th2 + th * (T::lit(5.0) + s))
    });
    ManufacturedSolution {
        value: Arc::new(|x, t| sech(x - t)),
        derivative: Arc::new(|x, t| -sech(x - t) * (x - t).tanh()),
        source: Arc::clone(&source),
        problem: PDEProblem {
            domain: (T::lit(-20.0), T::lit(30.0)),
            a: T::one(),
            alpha: T::one(),
            beta: -T::one(),
            gamma: T::lit(-0.5),
            flux: Some(Flux::burgers()),
            source: Some(source),
            boundary: (T::zero(), T::zero()),
            initial: Arc::new(sech),
        },
    }
}
