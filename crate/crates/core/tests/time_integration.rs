use std::sync::Arc;

use pseudospec::linalg::Matrix;
use pseudospec::operators::{shen_matrices, ShenLinearSystem};
use pseudospec::time::{
    forward_euler_step, integrate, sdirk_step, ssp_timestep_bound, ButcherTableau,
    DenseLinearSystem, ForcingFn, ForwardEuler, SdirkStepper, SemidiscreteSystem, StepperConfig,
    TimeStepper,
};
use pseudospec::{Error, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn tableaus() -> [ButcherTableau<f64>; 2] {
    [
        ButcherTableau::gamma_half(),
        ButcherTableau::gamma_third_order(),
    ]
}

/// `y' = -y²` solved through the fixed-point path.
struct Riccati;

impl SemidiscreteSystem<f64> for Riccati {
    fn dim(&self) -> usize {
        1
    }
    fn is_linear(&self) -> bool {
        false
    }
    fn apply_mass(&self, v: &[f64], out: &mut [f64]) {
        out.copy_from_slice(v);
    }
    fn factor_mass(&self) -> Result<Box<dyn pseudospec::linalg::LinearSolve<f64>>> {
        Ok(Box::new(Matrix::identity(1).lu()?))
    }
    fn rhs(&self, v: &[f64], _t: f64, out: &mut [f64]) -> Result<()> {
        out[0] = -v[0] * v[0];
        Ok(())
    }
}

/// Upper-triangular 2×2 test problem with eigenvalues -1 and -10.
fn two_by_two() -> (DenseLinearSystem<f64>, impl Fn(f64) -> [f64; 2]) {
    let l = Matrix::from_fn(2, 2, |i, j| [[-1.0, 0.5], [0.0, -10.0]][i][j]);
    let sys = DenseLinearSystem::new(Matrix::identity(2), l);
    let exact = |t: f64| {
        let (y1, y2) = (1.0, 1.0);
        [
            (-t).exp() * y1 + 0.5 * y2 * ((-t).exp() - (-10.0 * t).exp()) / 9.0,
            y2 * (-10.0 * t).exp(),
        ]
    };
    (sys, exact)
}

fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn tableau_structure() {
    for tab in tableaus() {
        assert_eq!(tab.a[0][0], tab.gamma);
        assert_eq!(tab.a[1][1], tab.gamma);
        assert_eq!(tab.a[0][1], 0.0);
        assert!((tab.a[1][0] - (1.0 - 2.0 * tab.gamma)).abs() < 1e-15);
        assert_eq!(tab.b[0] + tab.b[1], 1.0);
        assert!((tab.c[1] - (1.0 - tab.gamma)).abs() < 1e-15);
    }
}

#[test]
fn zero_dynamics_is_identity() {
    let sys = DenseLinearSystem::new(Matrix::identity(3), Matrix::zeros(3, 3));
    let v = [0.3, -1.0, 2.5];
    for tab in tableaus() {
        for linear in [true, false] {
            let mut cfg = StepperConfig::new(0.1);
            cfg.linear = Some(linear);
            assert_eq!(sdirk_step(&sys, tab, cfg, &v, 0.0).unwrap(), v);
        }
    }
    assert_eq!(forward_euler_step(&sys, 0.1, &v, 0.0).unwrap(), v);
}

#[test]
fn scalar_amplification_matches_stage_algebra() {
    let (lambda, dt) = (-1.0, 0.1);
    let sys = DenseLinearSystem::new(Matrix::identity(1), Matrix::from_diagonal(&[lambda]));
    for tab in tableaus() {
        let z = lambda * dt;
        let g = tab.gamma;
        let y1 = 1.0 / (1.0 - g * z);
        let y2 = (1.0 + z * tab.a[1][0] * y1) / (1.0 - g * z);
        let hand = 1.0 + z * (0.5 * y1 + 0.5 * y2);
        let got = sdirk_step(&sys, tab, StepperConfig::new(dt), &[1.0], 0.0).unwrap()[0];
        assert!((got - hand).abs() < 1e-15, "{got} vs {hand}");
    }
    let midpoint = sdirk_step(
        &sys,
        ButcherTableau::gamma_half(),
        StepperConfig::new(dt),
        &[1.0],
        0.0,
    )
    .unwrap()[0];
    assert!((midpoint - 0.95 / 1.05).abs() < 1e-15);
}

#[test]
fn linear_path_orders() {
    let (sys, exact) = two_by_two();
    for (tab, order, tol) in [
        (ButcherTableau::gamma_half(), 2.0, 0.05),
        (ButcherTableau::gamma_third_order(), 3.0, 0.1),
    ] {
        let errors: Vec<f64> = (0..5)
            .map(|k| {
                let steps = 10 << k;
                let mut stepper =
                    SdirkStepper::new(&sys, tab, StepperConfig::new(1.0 / steps as f64)).unwrap();
                let traj = integrate(&mut stepper, &[1.0, 1.0], steps, &[]).unwrap();
                let e = exact(1.0);
                (traj.final_state[0] - e[0])
                    .abs()
                    .max((traj.final_state[1] - e[1]).abs())
            })
            .collect();
        let rates = observed_orders(&errors);
        let last = *rates.last().unwrap();
        assert!((last - order).abs() < tol, "rates {rates:?}");
    }
}

#[test]
fn fixed_point_path_orders() {
    for (tab, order, tol) in [
        (ButcherTableau::gamma_half(), 2.0, 0.05),
        (ButcherTableau::gamma_third_order(), 3.0, 0.1),
    ] {
        let errors: Vec<f64> = (0..5)
            .map(|k| {
                let steps = 10 << k;
                let mut stepper =
                    SdirkStepper::new(&Riccati, tab, StepperConfig::new(1.0 / steps as f64))
                        .unwrap();
                let traj = integrate(&mut stepper, &[1.0], steps, &[]).unwrap();
                (traj.final_state[0] - 0.5).abs()
            })
            .collect();
        let rates = observed_orders(&errors);
        assert!(
            (rates.last().unwrap() - order).abs() < tol,
            "rates {rates:?}"
        );
    }
}

#[test]
fn cached_factorization_is_bit_identical() {
    let (sys, _) = two_by_two();
    let sys = sys.with_forcing(|t, out| {
        out[0] = t.sin();
        out[1] = 0.0;
    });
    let tab = ButcherTableau::gamma_third_order();
    let mut cached = SdirkStepper::new(&sys, tab, StepperConfig::new(0.05)).unwrap();
    let mut fresh = SdirkStepper::new(&sys, tab, StepperConfig::new(0.05))
        .unwrap()
        .without_cache();
    let a = integrate(&mut cached, &[1.0, -2.0], 40, &[10, 20]).unwrap();
    let b = integrate(&mut fresh, &[1.0, -2.0], 40, &[10, 20]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn integrate_records_exact_snapshot_times() {
    let (sys, _) = two_by_two();
    let mut s =
        SdirkStepper::new(&sys, ButcherTableau::gamma_half(), StepperConfig::new(0.1)).unwrap();
    let traj = integrate(&mut s, &[1.0, 1.0], 0, &[0]).unwrap();
    assert_eq!(traj.final_state, vec![1.0, 1.0]);
    let traj = integrate(&mut s, &[1.0, 1.0], 7, &[0, 3, 7]).unwrap();
    let times: Vec<f64> = traj.snapshots.iter().map(|s| s.1).collect();
    assert_eq!(times, vec![0.0, 3.0 * 0.1, 7.0 * 0.1]);
}

#[test]
fn divergence_is_reported() {
    // dt * γ * |R'| far above one: the stage iteration cannot contract
    let mut cfg = StepperConfig::new(10.0);
    cfg.max_iterations = 50;
    let err = sdirk_step(&Riccati, ButcherTableau::gamma_half(), cfg, &[5.0], 0.0).unwrap_err();
    assert!(matches!(err, Error::FixedPointDivergence { .. }));
}

#[test]
fn non_finite_state_aborts_integration() {
    let sys = DenseLinearSystem::new(Matrix::identity(1), Matrix::from_diagonal(&[1e200]));
    let mut fe = ForwardEuler::new(&sys, 1e200).unwrap();
    let err = integrate(&mut fe, &[1e200], 5, &[]).unwrap_err();
    assert!(matches!(err, Error::NonFiniteState { step: 1, .. }));
}

#[test]
fn ssp_bound_examples() {
    let s = shen_matrices::<f64>(16, 1.0, 1.0).unwrap();
    let bound = ssp_timestep_bound(&s).unwrap();
    assert!((bound - 1.00041274).abs() < 5e-8);
    let s64 = shen_matrices::<f64>(64, 1.0, 1.0).unwrap();
    assert!((ssp_timestep_bound(&s64).unwrap() - 1.0).abs() < 1e-4);
    let s2 = shen_matrices::<f64>(16, 1.0, 2.0).unwrap();
    assert!((ssp_timestep_bound(&s2).unwrap() - bound / 2.0).abs() < 1e-15);
}

#[test]
fn forward_euler_is_monotone_under_the_ssp_bound() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [16, 32, 64] {
        let shen = shen_matrices(n, 1.0, 1.0).unwrap();
        let dt = ssp_timestep_bound(&shen).unwrap();
        let sys = ShenLinearSystem::new(shen);
        let mut fe = ForwardEuler::new(&sys, dt).unwrap();
        for _ in 0..100 {
            let mut v: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let before = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            fe.step(&mut v, 0.0).unwrap();
            let after = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(after <= before * (1.0 + 1e-14), "N={n}: {after} > {before}");
        }
    }
}

#[test]
fn forward_euler_grows_beyond_the_bound() {
    // eigenvector of μ_min: iterate (shift I + B)⁻¹ to convergence
    let n = 64;
    let shen = shen_matrices(n, 1.0, 1.0).unwrap();
    let solver = shen.factor_shifted_b(0.0).unwrap();
    let mut v = vec![1.0; n - 1];
    for _ in 0..200 {
        use pseudospec::linalg::LinearSolve;
        solver.solve_in_place(&mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let sys = ShenLinearSystem::new(shen);
    let next = forward_euler_step(&sys, 10.0, &v, 0.0).unwrap();
    let after = next.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(after > 1.0, "{after}");
}

#[test]
fn forcing_enters_linear_and_fixed_point_paths_alike() {
    let g: ForcingFn<f64> = Arc::new(|t, out: &mut [f64]| out[0] = t.cos());
    let sys = DenseLinearSystem::new(Matrix::identity(1), Matrix::from_diagonal(&[-2.0]));
    let g2 = Arc::clone(&g);
    let sys = sys.with_forcing(move |t, out| g2(t, out));
    for tab in tableaus() {
        let direct = sdirk_step(&sys, tab, StepperConfig::new(0.05), &[0.4], 0.3).unwrap()[0];
        let mut cfg = StepperConfig::new(0.05);
        cfg.linear = Some(false);
        cfg.abs_tol = 1e-15;
        cfg.rel_tol = 1e-15;
        let iterated = sdirk_step(&sys, tab, cfg, &[0.4], 0.3).unwrap()[0];
        assert!((direct - iterated).abs() < 1e-14);
    }
}
