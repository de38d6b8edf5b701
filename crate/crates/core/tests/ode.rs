use rainbow_core::ode::{
    f_kappa, integrate_greedy, integrate_modified, integrate_modified_coupled, m_closed_general, m_closed_half,
    m_from_n, q_fraction, tau0_closed_half, tau0_general, TheoryParams,
};

fn p(c: f64, kappa: f64) -> TheoryParams<f64> {
    TheoryParams::new(c, kappa).unwrap()
}

#[test]
fn greedy_matches_cubic_at_half() {
    for c in [0.5, 1.0, 2.0, 4.0, 5.0, 10.0] {
        let t = integrate_greedy(&p(c, 0.5), 1e-5).unwrap();
        let worst = t
            .taus
            .iter()
            .zip(&t.states)
            .map(|(&tau, &m)| (m - m_closed_half(tau, c)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "c {c}: {worst}");
        assert!((t.tau0 - tau0_closed_half(c)).abs() < 1e-6);
    }
}

#[test]
fn greedy_matches_general_form() {
    for kappa in [0.3, 1.0, 2.0] {
        for c in [0.5, 1.0, 3.0] {
            let pp = p(c, kappa);
            let t = integrate_greedy(&pp, 1e-5).unwrap();
            let worst = t
                .taus
                .iter()
                .zip(&t.states)
                .step_by(7)
                .map(|(&tau, &m)| (m - m_closed_general(tau, &pp).unwrap()).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "c {c} kappa {kappa}: {worst}");
            assert!((t.tau0 - tau0_general(&pp).unwrap()).abs() < 1e-6);
        }
    }
}

#[test]
fn root_and_sign_consistency() {
    for (c, kappa) in [(0.5, 0.3), (1.0, 0.45), (2.0, 0.55), (3.0, 1.0), (5.0, 2.0), (1.0, 20.0)] {
        let pp = p(c, kappa);
        let root = tau0_general(&pp).unwrap();
        assert!(m_closed_general(root, &pp).unwrap().abs() < 1e-9, "c {c} kappa {kappa}");
        let edge = 0.5f64.min(kappa);
        for i in 0..1000 {
            let tau = edge * i as f64 / 1000.0;
            let f = f_kappa(tau, &pp).unwrap();
            let m = m_closed_general(tau, &pp).unwrap();
            if f.abs() > 1e-12 && m.abs() > 1e-12 {
                assert_eq!(f > 0.0, m > 0.0, "c {c} kappa {kappa} tau {tau}");
            }
        }
    }
}

#[test]
fn greedy_density_is_decreasing() {
    for (c, kappa) in [(1.0, 0.5), (3.0, 0.4), (2.0, 3.0)] {
        let t = integrate_greedy(&p(c, kappa), 1e-4).unwrap();
        assert!(t.states.windows(2).all(|w| w[1] < w[0]));
        assert!(t.states.iter().all(|&m| m > 0.0));
    }
}

#[test]
fn reduced_and_coupled_agree() {
    let step = 1e-5;
    for (c, kappa) in [(1.0, 0.5), (3.0, 0.5), (2.0, 1.0), (0.5, 2.0)] {
        let pp = p(c, kappa);
        let reduced = integrate_modified(&pp, step).unwrap();
        let coupled = integrate_modified_coupled(&pp, step).unwrap();
        let common = coupled.taus.len().min(reduced.trajectory.taus.len());
        assert!(common > 1000);
        let mut worst: f64 = 0.0;
        for i in (0..common).step_by(13) {
            let tau = reduced.trajectory.taus[i];
            let n = reduced.trajectory.states[i];
            worst = worst
                .max((coupled.n[i] - n).abs())
                .max((coupled.m[i] - m_from_n(tau, n, &pp)).abs());
        }
        assert!(worst <= 10.0 * step, "c {c} kappa {kappa}: {worst}");
    }
}

#[test]
fn modified_density_decreasing_and_f_convex() {
    for kappa in [0.5, 1.0, 2.0] {
        for c in [0.5, 1.0, 3.0, 5.0] {
            let pp = p(c, kappa);
            let s = integrate_modified(&pp, 1e-5).unwrap();
            let (taus, ns) = (&s.trajectory.taus, &s.trajectory.states);
            assert!(ns.windows(2).all(|w| w[1] < w[0]));
            let f: Vec<f64> = taus.iter().zip(ns).map(|(&t, &n)| n * q_fraction(t, n, kappa)).collect();
            let worst = f.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).fold(f64::INFINITY, f64::min);
            assert!(worst >= -1e-6, "c {c} kappa {kappa}: {worst}");
            // Colors never run out for kappa >= 1/2.
            assert!(taus.iter().zip(ns).all(|(&t, &n)| q_fraction(t, n, kappa) > 0.0));
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    for c in [1.0f32, 3.0] {
        let p32 = TheoryParams::new(c, 0.5f32).unwrap();
        let t = integrate_greedy(&p32, 1e-3).unwrap();
        assert!((t.tau0 as f64 - tau0_closed_half(c as f64)).abs() < 1e-4);
        let s = integrate_modified(&p32, 1e-3).unwrap();
        let s64 = integrate_modified(&p(c as f64, 0.5), 1e-5).unwrap();
        assert!((s.mu_over_n as f64 - s64.mu_over_n).abs() < 1e-3);
    }
}
