use rainbow_core::asymptotics::{
    c_star, large_kappa_bracket, tau0_large_kappa, tau0_near_half, tau0_small_kappa_bounds, theorem1_prediction,
    BracketDetail, Regime, Theorem1Case,
};
use rainbow_core::ode::{tau0_general, tau0_general_located, TheoryParams};

fn p(c: f64, kappa: f64) -> TheoryParams<f64> {
    TheoryParams::new(c, kappa).unwrap()
}

#[test]
fn near_half_grid() {
    let mut checked = 0;
    for c in [0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0] {
        for eps in [-0.1, -0.05, -0.02, -0.01, -0.002, 0.002, 0.01, 0.02, 0.05, 0.1, 0.2] {
            let pp = p(c, 0.5 * (1.0 + eps));
            let Ok(b) = tau0_near_half(&pp) else { continue };
            let root = tau0_general_located(&pp).unwrap();
            assert!(b.contains(&root), "c {c} eps {eps}: {b:?} vs {}", root.tau);
            assert!(b.lower <= b.estimate && b.estimate <= b.upper);
            checked += 1;
        }
    }
    assert!(checked >= 60, "{checked}");
}

#[test]
fn near_half_estimate_error_is_linear_in_eps() {
    for c in [0.5, 1.0, 2.0, 5.0] {
        for eps in [-0.05, -0.01, 0.01, 0.05] {
            let pp = p(c, 0.5 * (1.0 + eps));
            let b = tau0_near_half(&pp).unwrap();
            let err = (b.estimate - tau0_general(&pp).unwrap()).abs();
            assert!(err <= b.width(), "c {c} eps {eps}");
            assert!(err <= 0.2 * f64::abs(eps), "c {c} eps {eps}: {err}");
        }
    }
}

#[test]
fn large_kappa_grid() {
    let mut checked = 0;
    for kappa in [1.0, 1.5, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0] {
        for c in [1.0, 1.8, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0] {
            let pp = p(c, kappa);
            let Ok(b) = tau0_large_kappa(&pp) else {
                assert!(c < c_star(kappa));
                continue;
            };
            let root = tau0_general_located(&pp).unwrap();
            assert!(b.contains(&root), "c {c} kappa {kappa}: {b:?} vs {}", root.tau);
            checked += 1;
        }
    }
    assert!(checked >= 30, "{checked}");
}

#[test]
fn large_kappa_fixed_point_residual() {
    for (c, kappa) in [(2.0, 2.0), (3.0, 5.0), (4.0, 10.0), (5.0, 50.0)] {
        let pp = p(c, kappa);
        let b = large_kappa_bracket(&pp).unwrap();
        let BracketDetail::LargeKappa { beta, z_lower, z_upper, .. } = b.detail else { panic!() };
        // z at the exact root
        let tau = tau0_general(&pp).unwrap();
        let z0 = (kappa - tau) / (kappa * (1.0 - 2.0 * tau));
        let residual = (z0 - beta - z0.ln() / (2.0 * kappa)).abs();
        assert!(residual <= z_upper - z_lower, "c {c} kappa {kappa}: {residual}");
    }
}

#[test]
fn small_kappa_grid() {
    for c in [5.5, 6.0, 8.0, 10.0, 15.0] {
        for frac in [0.5, 0.7, 0.9, 0.99] {
            let pp = p(c, frac / (2.0 * c));
            let b = tau0_small_kappa_bounds(&pp).unwrap();
            let root = tau0_general_located(&pp).unwrap();
            assert!(b.contains(&root), "c {c} frac {frac}: {b:?} vs {root:?}");
            assert!(b.lower <= root.tau && root.tau <= b.upper);
        }
    }
    assert!(tau0_small_kappa_bounds(&p(5.0, 0.05)).is_err());
    assert!(tau0_small_kappa_bounds(&p(6.0, 0.1)).is_err());
}

#[test]
fn dispatcher_is_total() {
    for c in [0.1, 0.5, 1.0, 3.0, 6.0, 12.0] {
        for kappa in [0.01, 0.05, 0.2, 0.45, 0.5, 0.55, 0.8, 1.0, 3.0, 30.0] {
            let pp = p(c, kappa);
            let pred = theorem1_prediction(&pp).unwrap();
            let exact = tau0_general(&pp).unwrap();
            match pred.case {
                Theorem1Case::A | Theorem1Case::General => assert!((pred.mu_over_n - exact).abs() < 1e-9),
                Theorem1Case::B => assert_eq!(pred.bracket.unwrap().regime, Regime::NearHalf),
                Theorem1Case::C => assert_eq!(pred.bracket.unwrap().regime, Regime::SmallKappa),
                Theorem1Case::D => {
                    let b = pred.bracket.unwrap();
                    assert!(b.lower <= pred.mu_over_n && pred.mu_over_n <= b.upper);
                    assert!(pred.leading_form.is_some() && pred.two_c_form.is_some());
                }
            }
        }
    }
    assert_eq!(theorem1_prediction(&p(1.0, 0.5)).unwrap().case, Theorem1Case::A);
    assert_eq!(theorem1_prediction(&p(1.0, 0.52)).unwrap().case, Theorem1Case::B);
    assert_eq!(theorem1_prediction(&p(8.0, 0.05)).unwrap().case, Theorem1Case::C);
    assert_eq!(theorem1_prediction(&p(3.0, 10.0)).unwrap().case, Theorem1Case::D);
    assert_eq!(theorem1_prediction(&p(1.0, 0.2)).unwrap().case, Theorem1Case::General);
}

#[test]
fn case_d_forms() {
    let pred = theorem1_prediction(&p(3.0, 10.0)).unwrap();
    let exact = tau0_general(&p(3.0, 10.0)).unwrap();
    let lead = pred.leading_form.unwrap();
    let two_c = pred.two_c_form.unwrap();
    assert!((lead - exact).abs() < 1e-3);
    assert!((two_c - exact).abs() > 0.05);
}
