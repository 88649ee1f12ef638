//! Randomized invariants of signals, friction laws, reduced dynamics, the
//! time map and the analysis layer.

mod common;

use std::f64::consts::PI;

use crawlgait::analysis::{attractor_bracket, fixed_points, gamma_order_stats, limit_cycle};
use crawlgait::config::RunConfig;
use crawlgait::friction::{eval_law, resolvent_monotone, FrictionLaw, Perturbation, DEFAULT_RESOLVENT_TOL};
use crawlgait::models::{reduce_continuous, Cell, ContinuousCrawler, DynamicsClass};
use crawlgait::scenarios::{dynamics, ScenarioId, ALL_SCENARIOS};
use crawlgait::signals::PeriodicSignal;
use crawlgait::solver::{Integrator, SolverConfig};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const T: f64 = 2.0 * PI;

fn coef() -> impl Strategy<Value = f64> {
    (-20i32..=20).prop_map(|k| k as f64 / 8.0)
}

/// Expressions mixing trigonometric terms and waves, `2π`-periodic.
fn signal_text() -> impl Strategy<Value = String> {
    (coef(), coef(), coef(), coef(), coef(), 1u32..4, 0.0..1.0f64).prop_map(|(c, a, b, sq, tr, k, off)| {
        format!(
            "{c} + ({a})*sin({k}*t) + ({b})*cos({k}*t + {off}) + ({sq})*square({k}*t + {off};{T},1) + ({tr})*triangle(t;{T},2)"
        )
    })
}

fn monotone_law() -> impl Strategy<Value = FrictionLaw> {
    (0usize..4, 0.1..3.0f64, 0.1..3.0f64, 0.1..3.0f64).prop_map(|(kind, a, b, c)| {
        let k = |x: f64| PeriodicSignal::constant(T, x);
        match kind {
            0 => FrictionLaw::coulomb(T, a).unwrap(),
            1 => FrictionLaw::dry(k(a), k(b)).unwrap(),
            2 => FrictionLaw::viscous(k(a)).unwrap(),
            _ => FrictionLaw::bingham(k(a), k(b), k(c)).unwrap(),
        }
    })
}

fn any_law() -> impl Strategy<Value = FrictionLaw> {
    prop_oneof![
        3 => monotone_law(),
        1 => (0.5..2.0f64, 0.05..0.5f64, 0.2..2.0f64).prop_map(|(mu, amp, width)| {
            let k = PeriodicSignal::constant(T, mu);
            FrictionLaw::stribeck(k.clone(), k, Perturbation::stribeck(amp, width).unwrap()).unwrap()
        }),
    ]
}

fn scenario(id: ScenarioId) -> crawlgait::models::ReducedDynamics {
    dynamics(id, &Default::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signals_repeat_every_period(text in signal_text(), t in 0.0..T, k in prop::sample::select(vec![1.0, 2.0, 5.0])) {
        let s = PeriodicSignal::parse(&text, T).unwrap();
        let (a, b) = (s.eval(t), s.eval(t + k * T));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn square_waves_have_zero_mean(amp in 0.1..5.0f64, k in 1u32..5, off in 0.0..1.0f64) {
        let s = PeriodicSignal::parse(&format!("square({k}*t + {off};{T},{amp})"), T).unwrap();
        prop_assert!(s.mean_over_period().abs() <= 1e-10);
    }

    #[test]
    fn split_quadrature_matches_finer_panels(text in signal_text()) {
        let s = PeriodicSignal::parse(&text, T).unwrap();
        let (a, b) = (s.mean_over_period(), s.mean_with_panels(40));
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn monotone_laws_decrease(law in monotone_law(), t in 0.0..T, u1 in -5.0..5.0f64, du in 0.0..5.0f64) {
        let u2 = u1 + du;
        prop_assert!(eval_law(&law, t, u2).hi <= eval_law(&law, t, u1).lo + 1e-12);
    }

    #[test]
    fn resolvent_is_firmly_nonexpansive(law in any_law(), t in 0.0..T, lambda in 0.01..3.0f64, r1 in -5.0..5.0f64, r2 in -5.0..5.0f64) {
        let j1 = resolvent_monotone(&law, t, lambda, r1).unwrap();
        let j2 = resolvent_monotone(&law, t, lambda, r2).unwrap();
        let scale = 1.0 + r1.abs() + r2.abs();
        prop_assert!((j1 - j2).abs() <= (r1 - r2).abs() + DEFAULT_RESOLVENT_TOL * scale);
        prop_assert!((j1 - j2).powi(2) <= (j1 - j2) * (r1 - r2) + 10.0 * DEFAULT_RESOLVENT_TOL * scale * scale);
    }

    #[test]
    fn resolvent_solves_its_inclusion(law in monotone_law(), t in 0.0..T, lambda in 0.01..3.0f64, r in -5.0..5.0f64) {
        let j = resolvent_monotone(&law, t, lambda, r).unwrap();
        // r - j ∈ λ A(j) with A = -F
        let f = eval_law(&law, t, j);
        let tol = 10.0 * DEFAULT_RESOLVENT_TOL * (1.0 + r.abs());
        let x = (r - j) / lambda;
        prop_assert!(x >= -f.hi - tol / lambda && x <= -f.lo + tol / lambda, "{x} not in [{}, {}]", -f.hi, -f.lo);
    }

    #[test]
    fn dry_resolvent_is_soft_threshold(mp in 0.1..3.0f64, mm in 0.1..3.0f64, lambda in 0.01..3.0f64, r in -10.0..10.0f64) {
        let law = FrictionLaw::dry(PeriodicSignal::constant(T, mp), PeriodicSignal::constant(T, mm)).unwrap();
        let j = resolvent_monotone(&law, 0.0, lambda, r).unwrap();
        let shrink = if r > lambda * mp { r - lambda * mp } else if r < -lambda * mm { r + lambda * mm } else { 0.0 };
        prop_assert!((j - shrink).abs() <= DEFAULT_RESOLVENT_TOL * (1.0 + r.abs()), "{j} vs {shrink}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dry_interval_width_counts_stuck_masses(seed in any::<u64>(), t in 0.0..T) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = common::random_dry_model(&mut rng);
        let n = d.drivers().len();
        for i in 0..n {
            let v = -d.drivers()[i].eval(t);
            let g = d.g(t, v);
            let expected: f64 = (0..n)
                .filter(|&q| (v + d.drivers()[q].eval(t)).abs() == 0.0)
                .map(|q| {
                    let law = &d.laws()[d.contacts()[q].law];
                    law.mu_plus().unwrap().eval(t) + law.mu_minus().unwrap().eval(t)
                })
                .sum::<f64>()
                / d.mass();
            prop_assert!((g.width() - expected).abs() <= 1e-12, "width {} expected {expected}", g.width());
            let off = d.g(t, v + 0.37);
            let moving = (0..n).any(|q| (v + 0.37 + d.drivers()[q].eval(t)).abs() == 0.0);
            prop_assert!(moving || off.width() == 0.0);
        }
    }

    #[test]
    fn tails_bound_g_beyond_the_box(seed in any::<u64>(), t in 0.0..T, extra in 0.0..10.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = common::random_monotone_model(&mut rng);
        let b = d.velocity_bounds().unwrap();
        let (lower, upper) = d.ell_d(t, b.margin).unwrap();
        prop_assert!(d.g(t, b.r + 1e-9 + extra).hi <= upper + 1e-10);
        prop_assert!(d.g(t, -b.r - 1e-9 - extra).lo >= -lower - 1e-10);
    }

    #[test]
    fn continuous_shape_velocity_has_zero_weighted_mean(
        rho in prop::collection::vec(0.2..2.0f64, 2..5),
        amps in prop::collection::vec(-0.9..0.9f64, 5),
        t in 0.0..T,
    ) {
        let mut start = 0.0;
        let cells: Vec<Cell> = rho
            .iter()
            .zip(&amps)
            .map(|(&r, &a)| {
                let c = Cell {
                    start,
                    end: start + 1.0,
                    density: r,
                    phidot: PeriodicSignal::parse(&format!("({a})*cos(t)"), T).unwrap(),
                    phi0: 1.0,
                    law: FrictionLaw::coulomb(T, 1.0).unwrap(),
                };
                start += 1.0;
                c
            })
            .collect();
        let body = ContinuousCrawler::new(T, cells, PeriodicSignal::constant(T, 0.0), 8).unwrap();
        // ż is linear on each cell, so Simpson's rule per cell is exact.
        let mean: f64 = body
            .cells()
            .iter()
            .map(|c| {
                let z = |x: f64| body.relative_velocity(t, x).unwrap();
                let mid = 0.5 * (c.start + c.end);
                c.density * c.len() * (z(c.start) + 4.0 * z(mid) + z(c.end)) / 6.0
            })
            .sum();
        prop_assert!(mean.abs() <= 1e-8, "{mean}");
        prop_assert!(reduce_continuous(&body).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn time_map_is_monotone_nonexpansive_and_invariant(seed in any::<u64>(), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = common::random_monotone_model(&mut rng);
        let b = d.velocity_bounds().unwrap();
        let integ = Integrator::new(&d, SolverConfig::with_steps(512)).unwrap();
        let (u, v) = (b.v_minus + x.min(y) * (b.v_plus - b.v_minus), b.v_minus + x.max(y) * (b.v_plus - b.v_minus));
        let (pu, pv) = (integ.poincare(u).unwrap(), integ.poincare(v).unwrap());
        prop_assert!(pu <= pv + 1e-9);
        prop_assert!(pv - pu <= v - u + 1e-9);
        let traj = integ.integrate(u, 0.0, 2.0 * d.period()).unwrap();
        prop_assert!(traj.v.iter().all(|&w| w >= b.v_minus - 1e-6 && w <= b.v_plus + 1e-6));
    }

    #[test]
    fn scenario_time_maps_are_monotone(k in 0usize..ALL_SCENARIOS.len(), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let d = scenario(ALL_SCENARIOS[k]);
        let b = d.velocity_bounds().unwrap();
        let integ = Integrator::new(&d, SolverConfig::with_steps(1024)).unwrap();
        let (u, v) = (b.v_minus + x.min(y) * (b.v_plus - b.v_minus), b.v_minus + x.max(y) * (b.v_plus - b.v_minus));
        let (pu, pv) = (integ.poincare(u).unwrap(), integ.poincare(v).unwrap());
        prop_assert!(pu <= pv + 1e-9);
        if d.class().is_monotone() {
            prop_assert!(pv - pu <= v - u + 1e-9);
        }
    }

    #[test]
    fn constant_viscous_models_do_not_move(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = common::random_viscous_model(&mut rng);
        let cfg = SolverConfig::with_steps(1024);
        let br = attractor_bracket(&d, &cfg, 1e-10, 10_000).unwrap();
        let cycle = limit_cycle(&d, br.alpha, &cfg, 1e-6).unwrap();
        prop_assert!(cycle.gamma.abs() <= 1e-6, "gamma {}", cycle.gamma);
    }

    #[test]
    fn gamma_statistics_sort_the_negated_inputs(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let masses = [1.0, 0.5, 2.0];
        let w = common::random_shapes(&mut rng, &masses);
        let diag = gamma_order_stats(&w, 257).unwrap();
        for (t, g) in diag.times.iter().zip(&diag.gammas) {
            let mut expected: Vec<f64> = w.iter().map(|s| -s.eval(*t)).collect();
            expected.sort_by(f64::total_cmp);
            prop_assert_eq!(g, &expected);
        }
    }

    #[test]
    fn config_round_trips(k in 0usize..ALL_SCENARIOS.len(), periods in 1usize..20, steps in 16usize..8192) {
        let mut cfg = RunConfig::scenario(ALL_SCENARIOS[k]);
        cfg.periods = Some(periods);
        cfg.solver.steps_per_period = steps;
        let back = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn brackets_and_fixed_points_are_coherent() {
    let cfg = SolverConfig::with_steps(1024);
    let tol = 1e-6;
    for id in [ScenarioId::ExDry, ScenarioId::ExDrystar, ScenarioId::ExStrib, ScenarioId::ExComp] {
        let d = scenario(id);
        let br = attractor_bracket(&d, &cfg, tol, 10_000).unwrap();
        let integ = Integrator::new(&d, cfg).unwrap();
        for end in [br.alpha, br.beta] {
            assert!((integ.poincare(end).unwrap() - end).abs() <= tol, "{id}: {end}");
        }
        let fp = fixed_points(&d, &br, 256, 1e-4, &cfg).unwrap();
        for p in &fp.points {
            assert!(p.v >= br.alpha - fp.tol && p.v <= br.beta + fp.tol, "{id}: {p:?}");
        }
        for &(a, b) in &fp.plateaus {
            assert!(a >= br.alpha - fp.tol && b <= br.beta + fp.tol, "{id}: [{a}, {b}]");
        }
    }
}

#[test]
fn plateau_orbits_differ_by_a_constant() {
    let cfg = SolverConfig::default();
    let tol = 1e-6;
    for id in [ScenarioId::ExDry, ScenarioId::ExDrystar] {
        let d = scenario(id);
        assert!(d.class().is_monotone());
        let br = attractor_bracket(&d, &cfg, tol, 10_000).unwrap();
        let fp = fixed_points(&d, &br, 256, tol, &cfg).unwrap();
        let (a, b) = fp.plateaus[0];
        let integ = Integrator::new(&d, cfg).unwrap();
        let lo = integ.integrate(a + 0.25 * (b - a), 0.0, d.period()).unwrap();
        let hi = integ.integrate(a + 0.75 * (b - a), 0.0, d.period()).unwrap();
        let offset = hi.v[0] - lo.v[0];
        for (x, y) in lo.v.iter().zip(&hi.v) {
            assert!((y - x - offset).abs() <= 5.0 * tol, "{id}");
        }
    }
}

#[test]
fn strictly_monotone_scenarios_have_a_single_periodic_solution() {
    let cfg = SolverConfig::default();
    let tol = 1e-6;
    for id in ALL_SCENARIOS {
        let d = scenario(id);
        if d.class() != DynamicsClass::StrictlyMonotone {
            continue;
        }
        let br = attractor_bracket(&d, &cfg, tol, 10_000).unwrap();
        assert!(br.bracket_width < tol, "{id}: width {}", br.bracket_width);
    }
}
