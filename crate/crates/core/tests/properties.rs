use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use pseudospec::linalg::Matrix;
use pseudospec::norms::{error_norms, error_norms_sampled, ExactSamples, ReferenceSolution};
use pseudospec::operators::{
    assemble_gni_bbm, legendre_nodal_to_shen, shen_matrices, shen_to_nodal, ShenLinearSystem,
};
use pseudospec::problems::{
    flux_porous, map_to_physical, map_to_reference, AffineDomainMap, Flux, InitialData, PDEProblem,
};
use pseudospec::reference::manufactured_problem1;
use pseudospec::spectral::{
    cheb_nodal_to_coeffs, cheb_nodal_to_coeffs_dense, chebyshev_gl_grid, diff_matrix,
    legendre_gl_grid, nodal_basis_eval, GaussLobattoGrid, NodalField,
};
use pseudospec::time::{integrate, ButcherTableau, SdirkStepper, StepperConfig};
use pseudospec::{PolynomialFamily, Result};

fn double_factorial_ratio(m: usize) -> f64 {
    // (m-1)!! / m!! for even m
    (1..=m / 2)
        .map(|k| (2 * k - 1) as f64 / (2 * k) as f64)
        .product()
}

#[test]
fn quadrature_is_exact_to_degree_2n_minus_1() {
    for n in 2..=32 {
        for fam in [PolynomialFamily::Legendre, PolynomialFamily::Chebyshev] {
            let g = GaussLobattoGrid::<f64>::new(fam, n).unwrap();
            for m in 0..=(2 * n - 1) {
                let q = g.quadrature(|x| x.powi(m as i32));
                let exact = match (fam, m % 2) {
                    (_, 1) => 0.0,
                    (PolynomialFamily::Legendre, _) => 2.0 / (m as f64 + 1.0),
                    (PolynomialFamily::Chebyshev, _) => PI * double_factorial_ratio(m),
                };
                assert!(
                    (q - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                    "{fam:?} N={n} m={m}: {q} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn nodal_basis_is_cardinal() {
    for n in 2..=64 {
        let g = legendre_gl_grid::<f64>(n).unwrap();
        for j in 0..=n {
            for (k, &x) in g.nodes().iter().enumerate() {
                let v = nodal_basis_eval(&g, j, x).unwrap();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((v - expect).abs() <= 1e-12, "N={n} j={j} k={k}: {v}");
            }
        }
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| k as f64 * a)
        .collect()
}

fn grid(fam: PolynomialFamily, n: usize) -> GaussLobattoGrid<f64> {
    GaussLobattoGrid::new(fam, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differentiation_is_exact_on_polynomials(
        n in 2usize..40,
        legendre in any::<bool>(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 41),
    ) {
        let fam = if legendre { PolynomialFamily::Legendre } else { PolynomialFamily::Chebyshev };
        let g = grid(fam, n);
        let c = &coeffs[..=n];
        let dc = poly_derivative(c);
        let d = diff_matrix(&g);
        let v: Vec<f64> = g.nodes().iter().map(|&x| poly_eval(c, x)).collect();
        let dv = d.mul_vec(&v);
        let scale = (n * n) as f64;
        for (&x, &got) in g.nodes().iter().zip(&dv) {
            prop_assert!((got - poly_eval(&dc, x)).abs() <= 1e-11 * scale * scale, "N={} x={}", n, x);
        }
    }

    #[test]
    fn differentiation_is_nilpotent(
        n in 2usize..=14,
        legendre in any::<bool>(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 15),
    ) {
        let fam = if legendre { PolynomialFamily::Legendre } else { PolynomialFamily::Chebyshev };
        let g = grid(fam, n);
        let d = diff_matrix(&g);
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut v: Vec<f64> = g.nodes().iter().map(|&x| poly_eval(&coeffs[..=n], x)).collect();
        let mut largest = sup(&v);
        for _ in 0..n {
            v = d.mul_vec(&v);
            largest = largest.max(sup(&v));
        }
        let last = sup(&d.mul_vec(&v));
        prop_assert!(last <= 1e-8 * (n * n) as f64 * largest, "N={} {} vs {}", n, last, largest);
    }

    #[test]
    fn fast_and_dense_chebyshev_transforms_agree(
        k in 3u32..=10,
        seed in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let n = 1usize << k;
        let g = Arc::new(chebyshev_gl_grid::<f64>(n).unwrap());
        let f = g.sample(|x| seed.iter().enumerate().map(|(i, a)| a * ((i + 1) as f64 * 3.0 * x).sin()).sum::<f64>() + x.abs());
        let fast = cheb_nodal_to_coeffs(&f).unwrap().coeffs;
        let dense = cheb_nodal_to_coeffs_dense(&f).unwrap().coeffs;
        let norm = dense.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (a, b) in fast.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-10 * norm, "N={}", n);
        }
    }

    #[test]
    fn domain_map_round_trip(
        left in -100.0f64..100.0,
        width in 0.1f64..300.0,
        a in 0.01f64..10.0,
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
        gamma in -5.0f64..5.0,
        probe in -1.0f64..1.0,
    ) {
        let right = left + width;
        let mut p = PDEProblem::linear(a, 1.0, |x: f64| (0.1 * x).sin());
        p.domain = (left, right);
        p.alpha = alpha;
        p.beta = beta;
        p.gamma = gamma;
        p.flux = Some(Flux::porous());
        let map = AffineDomainMap::new(left, right).unwrap();
        let back = map_to_physical(&map_to_reference(&p).unwrap(), map).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-13 * y.abs().max(1.0);
        prop_assert!(close(back.a, a) && close(back.alpha, alpha) && close(back.beta, beta) && close(back.gamma, gamma));
        let x = map.to_physical(probe);
        prop_assert!(close((back.initial)(x), (p.initial)(x)));
        prop_assert!((map.to_physical(map.to_reference(x)) - x).abs() <= 1e-13 * x.abs().max(1.0));
    }

    #[test]
    fn porous_flux_is_monotone_on_the_unit_interval(u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        prop_assert!(flux_porous(lo) <= flux_porous(hi));
        prop_assert!((0.0..=1.0).contains(&flux_porous(u)));
    }

    #[test]
    fn h1_dominates_l2(
        n in 4usize..40,
        amps in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        struct Modes(Vec<f64>);
        impl ReferenceSolution<f64> for Modes {
            fn sample(&self, p: &[f64], _t: f64, d: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
                let v = p.iter().map(|&x| self.0.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).sin()).sum()).collect();
                let dv = d.then(|| p.iter().map(|&x| self.0.iter().enumerate().map(|(k, a)| a * (k + 1) as f64 * ((k + 1) as f64 * x).cos()).sum()).collect());
                Ok((v, dv))
            }
        }
        let g = Arc::new(legendre_gl_grid::<f64>(n).unwrap());
        let f = g.sample(|x| x * x * x);
        let r = error_norms(&f, AffineDomainMap::identity(), &Modes(amps), 0.0, 64).unwrap();
        prop_assert!(r.l2 <= r.h1);
    }
}

fn direct_formula(name: &str, x: f64) -> f64 {
    match name {
        "square_pulse" => f64::from(u8::from(x.abs() <= 0.5)),
        "tent" => 1.0 - x.abs(),
        "piecewise_quadratic" if x <= 0.0 => 1.0 + 2.0 * x + x * x,
        "piecewise_quadratic" => 1.0 + 2.0 * x - 3.0 * x * x,
        "sin_pi" => (PI * x).sin(),
        "sech" => 1.0 / x.cosh(),
        _ => {
            if x < 0.0 {
                0.3
            } else {
                -0.2
            }
        }
    }
}

#[test]
fn builtin_data_match_their_formulas() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for name in [
        "square_pulse",
        "tent",
        "piecewise_quadratic",
        "sin_pi",
        "sech",
        "riemann(0.3,-0.2)",
    ] {
        let d = InitialData::<f64>::from_name(name).unwrap();
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            assert!(
                (d.eval(x) - direct_formula(name, x)).abs() <= 1e-15,
                "{name} at {x}"
            );
        }
    }
}

fn shen_and_gni_final(
    n: usize,
    initial: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
) -> (Vec<f64>, Vec<f64>) {
    let (a, b, dt, steps) = (1.0, 1.0, 0.01, 50);
    let tab = ButcherTableau::gamma_third_order();
    let g = Arc::new(legendre_gl_grid::<f64>(n).unwrap());

    let init = Arc::clone(&initial);
    let problem = PDEProblem::linear(a, b, move |x| init(x));
    let gni = assemble_gni_bbm(Arc::clone(&g), &problem).unwrap();
    let mut stepper = SdirkStepper::new(&gni, tab, StepperConfig::new(dt)).unwrap();
    let v = integrate(&mut stepper, &gni.initial_state(), steps, &[]).unwrap();
    let gni_field = gni.solution_field(&v.final_state);

    let shen = ShenLinearSystem::new(shen_matrices(n, a, b).unwrap());
    let c0 = legendre_nodal_to_shen(&g.sample(|x| initial(x))).unwrap();
    let mut stepper = SdirkStepper::new(&shen, tab, StepperConfig::new(dt)).unwrap();
    let c = integrate(&mut stepper, &c0, steps, &[]).unwrap();
    let shen_field: NodalField<f64> = shen_to_nodal(&c.final_state, &g).unwrap();
    (gni_field.values().to_vec(), shen_field.values().to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn shen_and_gni_solutions_agree(
        n in prop::sample::select(vec![32usize, 40, 48, 64]),
        amps in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let init: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |x| {
            amps.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * PI * (x + 1.0) / 2.0).sin()).sum()
        });
        let (gni, shen) = shen_and_gni_final(n, init);
        for (p, q) in gni.iter().zip(&shen) {
            prop_assert!((p - q).abs() <= 1e-8, "N={} {} vs {}", n, p, q);
        }
    }
}

#[test]
fn problem1_fixed_point_converges_quickly() {
    let m = manufactured_problem1::<f64>();
    for n in [32usize, 128, 256] {
        let g = Arc::new(legendre_gl_grid::<f64>(n).unwrap());
        let sys = assemble_gni_bbm(g, &m.problem).unwrap();
        for dt in [0.1, 0.05] {
            let mut st = SdirkStepper::new(
                &sys,
                ButcherTableau::gamma_third_order(),
                StepperConfig::new(dt),
            )
            .unwrap();
            let steps = (1.0 / dt).round() as usize;
            integrate(&mut st, &sys.initial_state(), steps, &[]).unwrap();
            assert!(
                st.max_iterations_used() <= 30,
                "N={n} dt={dt}: {:?}",
                st.iteration_histogram()
            );
        }
    }
}

#[test]
fn spatial_error_plateaus_below_temporal_error() {
    let m = manufactured_problem1::<f64>();
    let dt = 0.05;
    let err = |n: usize| {
        let g = Arc::new(legendre_gl_grid::<f64>(n).unwrap());
        let sys = assemble_gni_bbm(g, &m.problem).unwrap();
        let mut st =
            SdirkStepper::new(&sys, ButcherTableau::gamma_half(), StepperConfig::new(dt)).unwrap();
        let v = integrate(&mut st, &sys.initial_state(), 20, &[]).unwrap();
        let field = sys.solution_field(&v.final_state);
        let exact =
            ExactSamples::on_nodes(&m, AffineDomainMap::identity(), field.grid(), 1.0, false)
                .unwrap();
        error_norms_sampled(&field, &exact).unwrap().l2
    };
    for n in [16, 32, 64] {
        let (coarse, fine) = (err(n), err(2 * n));
        assert!(
            ((coarse - fine) / fine).abs() < 0.05,
            "N={n}: {coarse} vs {fine}"
        );
    }
    assert!(
        err(4) > 10.0 * err(32),
        "a coarse grid is spatially limited"
    );
}

#[test]
fn mass_matrix_is_symmetric() {
    for n in [8usize, 16, 33] {
        let b: Matrix<f64> = shen_matrices(n, 1.0, 1.0).unwrap().b_matrix();
        assert!(b.max_abs_diff(&b.transpose()) == 0.0);
    }
}
