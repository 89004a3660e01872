use std::sync::Arc;

use super::*;
use crate::invariants::unitarity_drift;
use crate::linalg::expm;
use crate::model::{
    find_builtin, FrameSpec, MetricFamily, MetricSpec, OperatorFamily, ScenarioSpec, CONST_METRIC,
    DIAG_GROWTH, ROTATING,
};
use crate::random::random_hermitian;

fn builtin(name: &str) -> Scenario {
    find_builtin(name).unwrap().build().unwrap()
}

fn with_steps(name: &str, steps: usize) -> Scenario {
    let mut spec = find_builtin(name).unwrap();
    spec.grid.steps = steps;
    spec.build().unwrap()
}

fn zero_hamiltonian(metric: MetricSpec) -> Scenario {
    ScenarioSpec {
        name: "FREE".into(),
        hbar: 1.0,
        frame: FrameSpec::Constant {
            matrix: ComplexMatrix::zeros(2),
        },
        metric,
        initial_state: None,
        grid: Default::default(),
        naive_demo: false,
    }
    .build()
    .unwrap()
}

fn max_diff(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).fro_norm())
        .fold(0.0, f64::max)
}

fn state_diff(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.add_scaled(b, C64::new(-1.0, 0.0)).norm()
}

#[test]
fn grid_validation() {
    assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
    assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
    assert!(TimeGrid::new(0.0, f64::NAN, 10).is_err());
    let g = TimeGrid::new(-1.0, 1.0, 4).unwrap();
    assert_eq!(g.dt(), 0.5);
    assert_eq!(
        g.times().collect::<Vec<_>>(),
        vec![-1.0, -0.5, 0.0, 0.5, 1.0]
    );
}

#[test]
fn mode_names_round_trip() {
    for m in EvolutionMode::ALL {
        assert_eq!(m.as_str().parse::<EvolutionMode>().unwrap(), m);
    }
    assert!("schrodinger".parse::<EvolutionMode>().is_err());
}

#[test]
fn rk4_zero_generator_is_identity() {
    let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
    let us = rk4_matrix_ode(|_| Ok(ComplexMatrix::zeros(3)), &grid).unwrap();
    assert_eq!(us.len(), 51);
    assert!(us.iter().all(|u| *u == ComplexMatrix::identity(3)));
}

#[test]
fn rk4_constant_generator_matches_exponential() {
    let grid = TimeGrid::new(0.0, 1.0, 1000).unwrap();
    for seed in 0..5 {
        let g = random_hermitian(seed, 3, 1.0);
        let g = g.scale_real(5.0 / g.fro_norm());
        let us = rk4_matrix_ode(|_| Ok(g.clone()), &grid).unwrap();
        let exact = expm(&g.scale(C64::new(0.0, -1.0)));
        let err = (us.last().unwrap() - &exact).fro_norm();
        assert!(err <= 1e-9, "seed {seed}: {err:e}");
    }
}

#[test]
fn rk4_step_halving_ratio() {
    // G(t) = G0 + t·G1 + t²·G2; reference at Δt/64.
    let g0 = random_hermitian(1, 3, 1.0);
    let g1 = random_hermitian(2, 3, 1.0);
    let g2 = random_hermitian(3, 3, 1.0);
    let gen = |t: f64| {
        Ok(g0
            .add_scaled(&g1, C64::new(t, 0.0))
            .add_scaled(&g2, C64::new(t * t, 0.0)))
    };
    let terminal = |steps| {
        let grid = TimeGrid::new(0.0, 2.0, steps).unwrap();
        rk4_matrix_ode(gen, &grid).unwrap().pop().unwrap()
    };
    let reference = terminal(40 * 64);
    let coarse = (&terminal(40) - &reference).fro_norm();
    let fine = (&terminal(80) - &reference).fro_norm();
    let ratio = coarse / fine;
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn rk4_reports_overflow() {
    let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
    let huge = ComplexMatrix::identity(2).scale(C64::new(0.0, 1e300));
    let err = rk4_matrix_ode(|_| Ok(huge.clone()), &grid).unwrap_err();
    assert!(matches!(err, Error::NonFinite(_)));
}

#[test]
fn propagators_start_at_identity() {
    for name in [CONST_METRIC, DIAG_GROWTH, ROTATING] {
        let sc = builtin(name);
        for mode in [EvolutionMode::Naive, EvolutionMode::MetricCompatible] {
            let traj = propagate(&sc, mode).unwrap();
            let u0 = &traj.propagators().unwrap()[0];
            assert!(
                (u0 - &ComplexMatrix::identity(2)).fro_norm() <= 1e-14,
                "{name} {mode}"
            );
            assert_eq!(traj.states[0], *sc.initial_state());
        }
        let cov = propagate_covariant(&sc).unwrap();
        assert_eq!(cov.states[0], *sc.initial_state());
        assert!(matches!(cov.propagators(), Err(Error::MissingPropagators)));
    }
}

#[test]
fn naive_conserves_norm_under_constant_metric() {
    let sc = builtin(CONST_METRIC);
    let traj = propagate_naive(&sc).unwrap();
    assert!(unitarity_drift(&traj, sc.metric()).unwrap().max_value <= 1e-8);
}

#[test]
fn naive_drifts_under_growing_metric() {
    // A run at Δt = 1e-5 pins the drift; the default grid must agree with it.
    let sc = builtin(DIAG_GROWTH);
    let coarse = unitarity_drift(&propagate_naive(&sc).unwrap(), sc.metric()).unwrap();
    let fine_sc = with_steps(DIAG_GROWTH, 100_000);
    let fine = unitarity_drift(&propagate_naive(&fine_sc).unwrap(), fine_sc.metric()).unwrap();
    let terminal_fine = *fine.values.last().unwrap();
    let terminal_coarse = *coarse.values.last().unwrap();
    assert!(terminal_fine >= 1e-3, "{terminal_fine}");
    assert!((terminal_fine - terminal_coarse).abs() <= 1e-9);
}

#[test]
fn zero_hamiltonian_naive_is_static() {
    let sc = zero_hamiltonian(MetricSpec::DiagGrowth { alpha: 0.5 });
    let traj = propagate_naive(&sc).unwrap();
    for (u, phi) in traj.propagators().unwrap().iter().zip(&traj.states) {
        assert_eq!(*u, ComplexMatrix::identity(2));
        assert_eq!(phi, sc.initial_state());
    }
}

#[test]
fn metric_compatible_equals_naive_for_constant_metric() {
    let sc = builtin(CONST_METRIC);
    let naive = propagate_naive(&sc).unwrap();
    let compat = propagate_metric_compatible(&sc).unwrap();
    let a = naive.propagators().unwrap().last().unwrap();
    let b = compat.propagators().unwrap().last().unwrap();
    assert!((a - b).fro_norm() <= 1e-8);
}

#[test]
fn metric_compatible_conserves_norm_under_growing_metric() {
    let sc = builtin(DIAG_GROWTH);
    let traj = propagate_metric_compatible(&sc).unwrap();
    assert!(unitarity_drift(&traj, sc.metric()).unwrap().max_value <= 1e-8);
}

#[test]
fn metric_compatible_with_zero_hamiltonian() {
    let sc = zero_hamiltonian(MetricSpec::DiagGrowth { alpha: 0.5 });
    let traj = propagate_metric_compatible(&sc).unwrap();
    let metric = sc.metric();
    let w0 = metric.omega_at(0.0).unwrap();
    for (u, t) in traj.propagators().unwrap().iter().zip(traj.grid.times()) {
        let expected = &inverse(&metric.omega_at(t).unwrap()).unwrap() * &w0;
        assert!((u - &expected).fro_norm() <= 1e-14);
    }
    assert!(unitarity_drift(&traj, metric).unwrap().max_value <= 1e-12);
}

#[test]
fn metric_compatible_rejects_non_pseudo_hermitian_drift() {
    // Pseudo-Hermitian at t0 only: H(t) = H_ok + i·t·I.
    let sc = builtin(DIAG_GROWTH);
    let base = sc.hamiltonian().clone();
    let bad = OperatorFamily::from_fn(2, move |t| {
        Ok(base
            .value_at(t)?
            .add_scaled(&ComplexMatrix::identity(2), C64::new(0.0, t)))
    });
    let broken = Scenario::new(
        "BROKEN",
        1.0,
        bad,
        Arc::clone(sc.metric()),
        sc.initial_state().clone(),
        *sc.grid(),
    )
    .unwrap();
    let err = propagate_metric_compatible(&broken).unwrap_err();
    assert!(matches!(err, Error::FrameNotHermitian { .. }), "{err:?}");
}

#[test]
fn effective_hamiltonian_constant_metric() {
    let sc = builtin(CONST_METRIC);
    for j in 0..=10 {
        let t = 0.1 * j as f64;
        let d = &effective_hamiltonian(&sc, t).unwrap() - &sc.hamiltonian().value_at(t).unwrap();
        assert!(d.fro_norm() <= 1e-8);
    }
}

#[test]
fn effective_hamiltonian_diag_growth_closed_form() {
    let sc = builtin(DIAG_GROWTH);
    let alpha = 0.5;
    for t in [0.0, 0.25, 0.5, 1.0] {
        let expected = sc.hamiltonian().value_at(t).unwrap().add_scaled(
            &ComplexMatrix::from_real_diag(&[0.0, alpha]),
            C64::new(0.0, -1.0),
        );
        let d = &effective_hamiltonian(&sc, t).unwrap() - &expected;
        assert!(d.fro_norm() <= 1e-14, "t = {t}");
    }
}

#[test]
fn effective_hamiltonian_rotating_at_origin_matches_difference_generator() {
    let sc = builtin(ROTATING).with_grid(TimeGrid::new(-0.01, 0.01, 20).unwrap());
    let traj = propagate_metric_compatible(&sc).unwrap();
    let k = 10;
    assert_eq!(traj.grid.time(k), 0.0);
    let fd = generator_from_propagator(&traj, k).unwrap();
    let exact = effective_hamiltonian(&sc, 0.0).unwrap();
    assert!((&fd - &exact).fro_norm() <= 1e-4);
}

#[test]
fn generator_recovers_hamiltonian_from_naive_run() {
    for name in [CONST_METRIC, DIAG_GROWTH, ROTATING] {
        let sc = builtin(name);
        let traj = propagate_naive(&sc).unwrap();
        for k in [1, 250, 500, 999] {
            let g = generator_from_propagator(&traj, k).unwrap();
            let h = sc.hamiltonian().value_at(traj.grid.time(k)).unwrap();
            assert!((&g - &h).fro_norm() <= 1e-4, "{name} k={k}");
        }
    }
}

#[test]
fn generator_recovers_effective_hamiltonian_from_compatible_run() {
    let sc = builtin(DIAG_GROWTH);
    let traj = propagate_metric_compatible(&sc).unwrap();
    for k in [1, 333, 500, 999] {
        let g = generator_from_propagator(&traj, k).unwrap();
        let h = effective_hamiltonian(&sc, traj.grid.time(k)).unwrap();
        assert!((&g - &h).fro_norm() <= 1e-4, "k={k}");
    }
}

#[test]
fn generator_of_trivial_evolution_vanishes() {
    let sc = zero_hamiltonian(MetricSpec::Constant {
        matrix: ComplexMatrix::from_real_diag(&[1.0, 2.0]),
    });
    let traj = propagate_naive(&sc).unwrap();
    assert!(generator_from_propagator(&traj, 500).unwrap().fro_norm() <= 1e-10);
    assert!(matches!(
        generator_from_propagator(&traj, 0),
        Err(Error::NotInterior { k: 0, .. })
    ));
    assert!(matches!(
        generator_from_propagator(&traj, 1000),
        Err(Error::NotInterior { .. })
    ));
}

#[test]
fn covariant_equals_naive_for_constant_metric() {
    let sc = builtin(CONST_METRIC);
    let naive = propagate_naive(&sc).unwrap();
    let cov = propagate_covariant(&sc).unwrap();
    for (a, b) in naive.states.iter().zip(&cov.states) {
        assert!(state_diff(a, b) <= 1e-8);
    }
}

#[test]
fn covariant_matches_metric_compatible_terminal_state() {
    let sc = builtin(DIAG_GROWTH);
    let a = propagate_covariant(&sc).unwrap();
    let b = propagate_metric_compatible(&sc).unwrap();
    assert!(state_diff(a.terminal_state(), b.terminal_state()) <= 1e-8);
}

#[test]
fn covariant_free_evolution_decays_second_component() {
    let alpha = 0.5;
    let sc = zero_hamiltonian(MetricSpec::DiagGrowth { alpha });
    let traj = propagate_covariant(&sc).unwrap();
    let phi0 = sc.initial_state();
    for (phi, t) in traj.states.iter().zip(traj.grid.times()) {
        assert!((phi[0] - phi0[0]).norm() <= 1e-14);
        assert!(
            (phi[1] - phi0[1] * (-alpha * t).exp()).norm() <= 1e-12,
            "t = {t}"
        );
    }
}

#[test]
fn naive_and_compatible_propagators_diverge_for_growing_metric() {
    let sc = builtin(DIAG_GROWTH);
    let a = propagate_naive(&sc).unwrap();
    let b = propagate_metric_compatible(&sc).unwrap();
    let d = (a.propagators().unwrap().last().unwrap() - b.propagators().unwrap().last().unwrap())
        .fro_norm();
    assert!(d >= 0.01, "{d}");
}

#[test]
fn generator_consistency_across_builtins() {
    for sc in crate::model::builtin_scenarios() {
        let traj = propagate_metric_compatible(&sc).unwrap();
        let gens = traj.generators.as_ref().unwrap();
        let mut worst = 0.0f64;
        for (k, expected) in gens.iter().enumerate().take(traj.grid.steps()).skip(1) {
            let g = generator_from_propagator(&traj, k).unwrap();
            worst = worst.max((&g - expected).fro_norm());
        }
        assert!(worst <= 5e-4, "{}: {worst}", sc.name());
    }
}

#[test]
fn propagators_of_repeated_runs_are_identical() {
    let sc = builtin(ROTATING);
    let a = propagate_metric_compatible(&sc).unwrap();
    let b = propagate_metric_compatible(&sc).unwrap();
    assert_eq!(
        max_diff(a.propagators().unwrap(), b.propagators().unwrap()),
        0.0
    );
}

#[test]
fn omega_cache_is_optional_for_correctness() {
    // A fresh metric (empty cache) must reproduce the same propagators.
    let sc = builtin(ROTATING);
    let fresh_metric: Arc<MetricFamily> = Arc::new((**sc.metric()).clone());
    let rebuilt = Scenario::new(
        "ROTATING_FRESH",
        1.0,
        sc.hamiltonian().clone(),
        fresh_metric,
        sc.initial_state().clone(),
        *sc.grid(),
    )
    .unwrap();
    let a = propagate_metric_compatible(&sc).unwrap();
    let b = propagate_metric_compatible(&rebuilt).unwrap();
    assert_eq!(
        max_diff(a.propagators().unwrap(), b.propagators().unwrap()),
        0.0
    );
}
