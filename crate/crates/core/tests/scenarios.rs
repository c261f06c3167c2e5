//! Short end-to-end runs through the public API.

use weno_tvd::scenarios::{convergence_study, mirror_asymmetry, Scenario, Setup, Simulation};
use weno_tvd::Limiter;

fn atmosphere(name: &str, dx: f64) -> weno_tvd::scenarios::AtmosphereRun {
    let mut sc = Scenario::by_name(name).unwrap();
    sc.set_spacing(dx).unwrap();
    match sc.build().unwrap() {
        Simulation::Atmosphere(run) => run,
        Simulation::Advection(_) => unreachable!(),
    }
}

#[test]
fn neutral_bubble_stays_bitwise_symmetric() {
    let mut run = atmosphere("bubble-neutral", 500.0);
    let grid = run.grid().clone();
    run.advance_to(60.0, &[], |_, f| {
        assert_eq!(mirror_asymmetry(f, &grid, 0.0, &[1]).unwrap(), 0.0);
        Ok(())
    })
    .unwrap();
    assert!(run.extrema().w.max > 0.1);
}

#[test]
fn rest_atmosphere_stays_near_rest() {
    for name in ["bubble-neutral", "bubble-stable"] {
        let mut sc = Scenario::by_name(name).unwrap();
        sc.set_spacing(500.0).unwrap();
        if let Setup::Atmosphere { init, .. } = &mut sc.setup {
            init.bubbles.clear();
        }
        let Simulation::Atmosphere(mut run) = sc.build().unwrap() else { unreachable!() };
        run.advance_to(100.0, &[], |_, _| Ok(())).unwrap();
        let ex = run.extrema();
        assert!(ex.w.max.abs().max(ex.w.min.abs()) < 0.25, "{name}: {:?}", ex.w);
        assert!(ex.u.max.abs().max(ex.u.min.abs()) < 1e-9, "{name}: {:?}", ex.u);
    }
}

#[test]
fn mass_conserved_between_walls() {
    let mut run = atmosphere("hot-cold", 500.0);
    let m0 = run.field.interior_sum(0);
    run.advance_to(30.0, &[], |_, _| Ok(())).unwrap();
    let m1 = run.field.interior_sum(0);
    assert!(((m1 - m0) / m0).abs() < 1e-13, "{}", (m1 - m0) / m0);
}

#[test]
fn energy_nearly_conserved_over_a_short_run() {
    let mut run = atmosphere("density-current", 400.0);
    let e0 = run.energy().unwrap().total();
    run.advance_to(60.0, &[], |_, _| Ok(())).unwrap();
    let e1 = run.energy().unwrap().total();
    assert!((e1 / e0 - 1.0).abs() < 1e-4);
}

#[test]
fn constant_advection_converges_at_high_order() {
    let mut sc = Scenario::by_name("const-advection").unwrap();
    sc.end_time = 0.5;
    let rows = convergence_study(&sc, &[16, 32, 64]).unwrap();
    assert!(rows[0].l1_order.is_none());
    for r in &rows[1..] {
        assert!(r.l1_order.unwrap() > 2.5, "{rows:?}");
    }
}

#[test]
fn unlimited_flux_is_also_stable() {
    let mut sc = Scenario::by_name("swirl").unwrap();
    sc.set_cells(32).unwrap();
    sc.flux.limiter = Limiter::None;
    sc.end_time = 1.0;
    let Simulation::Advection(mut run) = sc.build().unwrap() else { unreachable!() };
    run.advance_to(1.0, &[], |_, _| Ok(())).unwrap();
    assert!(run.field.interior().all(|(_, _, q)| q[0].is_finite() && q[0].abs() < 1.1));
}
