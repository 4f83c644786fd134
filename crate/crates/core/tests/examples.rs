use approx::assert_relative_eq;
use lienard_core::classical::{estimate_period, hidden_linearity_residual, integrate_orbit};
use lienard_core::polyspec::{assoc_laguerre, gamma_fn, hermite};
use lienard_core::quantum::{closed_form_eigenfunction, closed_form_eigenvalue};
use lienard_core::symmetry::{
    algebra_closure_check, delta78, lie_symmetry_residual, noether_classify, standard_generators,
    Classification,
};
use lienard_core::{parse, ExprError, Interval, LienardModel};
use std::f64::consts::PI;

fn model(h: &str, w: f64, a: f64, lo: f64, hi: f64) -> LienardModel {
    LienardModel::build(h, w, a, Interval::new(lo, hi)).unwrap()
}

#[test]
fn parse_and_differentiate() {
    let h = parse("x + x^3/3", "x").unwrap();
    assert_relative_eq!(h.eval(2.0).unwrap(), 14.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(
        h.derivative(1).eval(3.0).unwrap(),
        10.0,
        max_relative = 1e-15
    );
    let e = parse("exp(x)", "x").unwrap().derivative(3);
    assert_relative_eq!(
        e.eval(1.0).unwrap(),
        std::f64::consts::E,
        max_relative = 1e-15
    );
    assert!(matches!(
        parse("x + * 3", "x"),
        Err(ExprError::Syntax { offset: 4, .. })
    ));
    assert!(parse("log(x)", "x").unwrap().eval(-1.0).is_err());
}

#[test]
fn model_values() {
    let ho = model("x", 1.0, 0.0, -8.0, 8.0);
    assert_eq!(ho.ode_rhs(0.3, 7.0).unwrap(), -0.3);
    let iso = model("x", 1.0, -2.0, 0.1, 8.0);
    assert_relative_eq!(iso.ode_rhs(1.0, 0.0).unwrap(), 1.0, max_relative = 1e-15);
    assert_relative_eq!(iso.lagrangian(1.0, 2.0).unwrap(), 0.5, max_relative = 1e-15);
    assert_relative_eq!(iso.potential(1.0).unwrap(), 1.5, max_relative = 1e-15);
    let cubic = model("x + x^3/3", 1.0, 0.0, -4.0, 4.0);
    assert_relative_eq!(
        cubic.lagrangian(1.0, 1.0).unwrap(),
        2.0 - 8.0 / 9.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        cubic.jacobi_last_multiplier(1.0).unwrap(),
        4.0,
        max_relative = 1e-15
    );
    assert!(LienardModel::build("x", 1.0, 0.5, Interval::new(0.1, 8.0)).is_err());
}

#[test]
fn orbits_and_periods() {
    let ho = model("x", 1.0, 0.0, -8.0, 8.0);
    let tr = integrate_orbit(&ho, 1.0, 0.0, 2.0 * PI, 2.0 * PI / 2000.0).unwrap();
    assert!((tr.x()[tr.len() - 1] - 1.0).abs() < 1e-8);
    let tr = integrate_orbit(&ho, 1.0, 0.0, 10.0 * PI, 2.0 * PI / 2000.0).unwrap();
    assert!((estimate_period(&tr).unwrap() - 2.0 * PI).abs() < 1e-8);
    assert!(hidden_linearity_residual(&ho, &tr).unwrap() <= 1e-7);

    let iso = model("x", 1.0, -2.0, 0.05, 10.0);
    for x0 in [1.0, 1.5, 2.5] {
        let tr = integrate_orbit(&iso, x0, 0.0, 10.0 * PI, PI / 2000.0).unwrap();
        assert!(tr.x().iter().all(|x| *x > 0.0));
        assert!((estimate_period(&tr).unwrap() - PI).abs() < 1e-8);
    }

    let fast = model("x + x^3/3", 2.0, 0.0, -3.0, 3.0);
    let tr = integrate_orbit(&fast, 0.8, 0.0, 5.0 * PI, PI / 2000.0).unwrap();
    assert!((estimate_period(&tr).unwrap() - PI).abs() < 1e-8);
}

#[test]
fn generator_memberships() {
    let cubic = model("x + x^3/3", 1.0, 0.0, -4.0, 4.0);
    let gens = standard_generators(&cubic);
    assert!(lie_symmetry_residual(&cubic, &gens[6], 0.4, 0.7, 1.1).unwrap() <= 1e-8);
    assert_eq!(
        noether_classify(&cubic, &gens[6]).unwrap(),
        Classification::Noether
    );
    assert_eq!(
        noether_classify(&cubic, &gens[5]).unwrap(),
        Classification::LieOnly
    );
    let iso = model("x", 1.0, -2.0, 0.1, 5.0);
    let gens = standard_generators(&iso);
    assert!(lie_symmetry_residual(&iso, &gens[6], 0.4, 1.3, 0.6).unwrap() > 1e-3);
    assert_eq!(
        noether_classify(&iso, &gens[1]).unwrap(),
        Classification::Noether
    );
    let report = algebra_closure_check(&iso, &gens[..3]).unwrap();
    assert!(report.closed());
    assert_eq!(report.derived_rank, 3);
    assert_relative_eq!(
        delta78(&cubic, 0.2, 1.0, 0.3).unwrap(),
        -0.25,
        max_relative = 1e-12
    );
}

#[test]
fn special_functions() {
    assert_eq!(hermite(3, 2.0), 40.0);
    assert_relative_eq!(assoc_laguerre(2, 0.5, 1.0), -0.125, max_relative = 1e-15);
    assert_relative_eq!(
        gamma_fn(2.5).unwrap(),
        1.5 * 0.5 * PI.sqrt(),
        max_relative = 1e-13
    );
    assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-13);
}

#[test]
fn closed_form_spectrum() {
    let ho = model("x", 1.0, 0.0, -8.0, 8.0);
    assert_eq!(closed_form_eigenvalue(&ho, 0), 0.5);
    let psi2 = closed_form_eigenfunction(&ho, 2).unwrap();
    assert_eq!(psi2.energy(), 2.5);
    // proportional to 4 xi^2 - 2
    let c = psi2.spatial().coeffs();
    assert_relative_eq!(c[0] / c[2], -0.5, max_relative = 1e-14);
    let iso = model("x", 1.0, -2.0, 0.1, 8.0);
    let psi0 = closed_form_eigenfunction(&iso, 0).unwrap();
    assert_eq!(psi0.energy(), 2.5);
    assert_eq!(psi0.spatial().exponent(), 2.0);
}
