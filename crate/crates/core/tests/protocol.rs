use lqu_core::channels::gad_qubit;
use lqu_core::lqu::lqu_closed_form;
use lqu_core::protocol::{
    optimize_filters, run_protocol, sweep_surface, FilterSet, GridAxis, ReferenceCase, Scenario,
};
use lqu_core::states::{self, validate};

#[test]
fn bell_at_quoted_filters() {
    let r = run_protocol(&ReferenceCase::BellQubit.config()).unwrap();
    assert!((r.lqu_0.value - 1.0).abs() < 1e-9);
    assert!((r.lqu_3.value - 0.218).abs() < 2e-3, "{}", r.lqu_3.value);
    assert!((r.lqu_unprotected.value - 0.134).abs() < 1e-3);
    assert!(r.fidelity_final < r.fidelity_unprotected);
}

#[test]
fn qutrit_at_quoted_filters() {
    let r = run_protocol(&ReferenceCase::NonsymQutrit.config()).unwrap();
    assert!((r.lqu_3.value - 0.081).abs() < 2e-3, "{}", r.lqu_3.value);
    assert!((r.lqu_unprotected.value - 0.072).abs() < 1e-3);
}

#[test]
fn every_stage_is_a_valid_state_with_lqu_in_range() {
    for case in ReferenceCase::ALL {
        let r = run_protocol(&case.config()).unwrap();
        let cap = 2.0 / r.rho_0.dim_a() as f64;
        for rho in r.states() {
            assert!(validate(rho).is_valid(), "{}", case.name());
        }
        for u in [&r.lqu_0, &r.lqu_1, &r.lqu_2, &r.lqu_3, &r.lqu_unprotected] {
            assert!(u.value >= -1e-12 && u.value <= cap + 1e-12);
        }
        assert!(r.weak_success > 0.0 && r.reversal_success > 0.0);
        assert!(r.weak_success_physical <= 1.0 && r.reversal_success_physical <= 1.0);
    }
}

#[test]
fn identity_filters_are_bare_decoherence() {
    for case in ReferenceCase::ALL {
        let sc = case.scenario();
        let filters = FilterSet::identity(sc.dim_a(), sc.dim_b());
        let r = run_protocol(&sc.with_filters(filters).unwrap()).unwrap();
        assert!((r.lqu_3.value - r.lqu_unprotected.value).abs() < 1e-14);
        assert!(r.rho_3.matrix().max_abs_diff(r.rho_unprotected.matrix()) < 1e-15);
    }
}

#[test]
fn optimizer_is_sound_and_deterministic() {
    for case in ReferenceCase::ALL {
        let sc = case.scenario();
        let baseline = run_protocol(&sc.with_filters(FilterSet::identity(sc.dim_a(), sc.dim_b())).unwrap())
            .unwrap()
            .lqu_unprotected
            .value;
        let a = optimize_filters(&sc, 1500, 11).unwrap();
        let b = optimize_filters(&sc, 1500, 11).unwrap();
        assert_eq!(a.outcome.trace, b.outcome.trace);
        assert!(a.best_lqu >= baseline);
        assert!(a.best_lqu <= 2.0 / sc.dim_a() as f64);
        assert!(a.outcome.evaluations <= 1500);
        // reported parameters reproduce the reported value
        let r = run_protocol(&sc.with_filters(a.filters.clone()).unwrap()).unwrap();
        assert_eq!(r.lqu_3.value, a.best_lqu);
    }
}

#[test]
fn nothing_to_protect_without_decoherence() {
    let ch = gad_qubit(0.5, 0.0).unwrap();
    let sc = Scenario::new(states::bell_qubit(), ch.clone(), ch).unwrap();
    let best = optimize_filters(&sc, 800, 3).unwrap();
    assert!((best.best_lqu - 1.0).abs() < 1e-9);
}

#[test]
fn surface_passes_through_quoted_optimum() {
    let cfg = ReferenceCase::BellQubit.config();
    let axis = |x: f64| GridAxis { lo: x, hi: x, points: 1 };
    let s = sweep_surface(&cfg, axis(1.606), axis(0.830)).unwrap();
    assert!((s.get(0, 0).unwrap() - 0.218).abs() < 2e-3);

    // identity reversal leaves the post-channel state
    let s = sweep_surface(&cfg, axis(1.0), axis(1.0)).unwrap();
    let rho_2 = run_protocol(&cfg).unwrap().rho_2;
    assert!((s.get(0, 0).unwrap() - lqu_closed_form(&rho_2).unwrap().value).abs() < 1e-12);
}

#[test]
fn surface_never_beats_optimizer() {
    let case = ReferenceCase::BellQubit;
    let cfg = case.config();
    let n1 = GridAxis { lo: 1.4, hi: 1.8, points: 21 };
    let n2 = GridAxis { lo: 0.6, hi: 1.0, points: 21 };
    let s = sweep_surface(&cfg, n1, n2).unwrap();
    let (x, y, top) = s.argmax().unwrap();
    assert!((x - 1.606).abs() <= n1.spacing() && (y - 0.830).abs() <= n2.spacing(), "({x}, {y})");
    let best = optimize_filters(&case.scenario(), 20_000, 1).unwrap();
    assert!(top <= best.best_lqu + 2e-3);
}

#[test]
fn surface_is_row_major() {
    let cfg = ReferenceCase::NonsymQubit.config();
    let n1 = GridAxis { lo: 0.5, hi: 1.0, points: 3 };
    let n2 = GridAxis { lo: 0.5, hi: 1.5, points: 5 };
    let s = sweep_surface(&cfg, n1, n2).unwrap();
    let rows: Vec<_> = s.rows().collect();
    assert_eq!(rows.len(), 15);
    assert_eq!((rows[1].0, rows[1].1), (0.5, 0.75));
    assert_eq!((rows[5].0, rows[5].1), (0.75, 0.5));
}
