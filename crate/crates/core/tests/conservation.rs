//! Numeric corroboration of the exact structures: first integrals stay
//! constant along direct trajectories, the discriminant obeys its
//! logarithmic-derivative law, and the differential polynomials reproduce
//! the elementary symmetric values along the flow.

use num_complex::Complex64;

use symquad_core::numerics::{
    integrate_at_times, integrate_direct, integrate_direct_tensor, integrate_reduced,
    ReducedProblem, ToleranceConfig,
};
use symquad_core::{
    detect_symmetry, discriminant_from_sigma, initial_jets, lax_system, lv_tensor,
    power_sum_xi, quadratic_integral_basis, rat, reduce_generic, sigma_system, vieta_image,
    Rational,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn quadratic_integrals_conserved_along_lv_trajectories() {
    let cfg = ToleranceConfig::default();
    for n in [3usize, 4] {
        let tensor = lv_tensor(n);
        let basis = quadratic_integral_basis(&tensor);
        assert_eq!(basis.len(), 2);
        let x0: Vec<Complex64> = (1..=n).map(|i| c(i as f64 / 2.0)).collect();
        let traj = integrate_direct_tensor(&tensor, &x0, (0.0, 0.3), &cfg).unwrap();
        assert!(!traj.truncated);
        for q in &basis {
            let poly = q.to_poly();
            let v0 = poly.eval_complex(&traj.states[0]);
            let scale = v0.norm().max(1.0);
            for state in &traj.states {
                let v = poly.eval_complex(state);
                assert!(
                    (v - v0).norm() / scale < 1e-8,
                    "integral drifts by {:.2e} for n = {n}",
                    (v - v0).norm() / scale
                );
            }
        }
    }
}

#[test]
fn p2_conserved_along_lax_trajectory() {
    let cfg = ToleranceConfig::default();
    let sys = lax_system();
    let p2 = power_sum_xi::<Rational>(2, 3);
    let x0 = vec![c(1.0), c(2.0), c(3.0)];
    let traj = integrate_direct(&sys, &x0, (0.0, 0.2), &cfg).unwrap();
    let v0 = p2.eval_complex(&traj.states[0]);
    for state in &traj.states {
        let v = p2.eval_complex(state);
        assert!((v - v0).norm() / v0.norm() < 1e-8);
    }
}

#[test]
fn discriminant_log_derivative_numerically() {
    // d/dt log disc(x(t)) = (n-1)(2 alpha + n beta) s1(t) by centered
    // finite differences on a uniform grid
    let cfg = ToleranceConfig::default();
    let lv3 = detect_symmetry(&lv_tensor(3)).unwrap();
    let samples = 400usize;
    let dt = 0.1 / samples as f64;
    let times: Vec<f64> = (0..=samples).map(|i| i as f64 * dt).collect();
    let x0 = vec![c(1.0), c(2.0), c(3.0)];
    let traj = integrate_at_times(
        {
            let sys = lv3.clone();
            let num = sys.to_numeric();
            move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
                let v = num.vector_field(y).unwrap();
                dy.copy_from_slice(&v);
            }
        },
        &x0,
        &times,
        &cfg,
    )
    .unwrap();
    assert!(!traj.truncated);
    // factor (n-1)(2 alpha + n beta) = 2 (2(-2) + 3) = -2 for the chain
    let factor = -2.0;
    let log_disc: Vec<Complex64> = traj
        .states
        .iter()
        .map(|x| discriminant_from_sigma(&vieta_image(x)).ln())
        .collect();
    for i in 1..traj.len() - 1 {
        let deriv = (log_disc[i + 1] - log_disc[i - 1]) / (2.0 * dt);
        let s1: Complex64 = traj.states[i].iter().sum();
        let expected = s1 * factor;
        assert!(
            (deriv - expected).norm() < 1e-5 * expected.norm().max(1.0),
            "at sample {i}: {deriv} vs {expected}"
        );
    }
}

#[test]
fn sigma_expressions_match_direct_flow() {
    // integrate the reduced equation and the coordinates independently;
    // the differential polynomials must reproduce the elementary symmetric
    // values of the direct flow
    let cfg = ToleranceConfig::default();
    let dh = symquad_core::darboux_halphen();
    let red = reduce_generic(&dh).unwrap();
    let jets: Vec<Complex64> = initial_jets(&dh, &[rat(1, 1), rat(2, 1), rat(3, 1)])
        .unwrap()
        .iter()
        .map(|r| r.to_complex())
        .collect();
    let problem = ReducedProblem::Generic(&red);
    let sigma = integrate_reduced(&problem, &jets, None, (0.0, 0.05), &cfg).unwrap();
    let x0 = vec![c(1.0), c(2.0), c(3.0)];
    let direct = integrate_at_times(
        {
            let num = dh.to_numeric();
            move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
                let v = num.vector_field(y).unwrap();
                dy.copy_from_slice(&v);
            }
        },
        &x0,
        &sigma.times,
        &cfg,
    )
    .unwrap();
    for (s, x) in sigma.states.iter().zip(&direct.states) {
        let sx = vieta_image(x);
        for k in 0..3 {
            assert!(
                (s[k] - sx[k]).norm() < 1e-7 * sx[k].norm().max(1.0),
                "sigma_{} deviates", k + 1
            );
        }
    }
}

#[test]
fn sn_coefficients_from_sigma_system_match_classification() {
    // the first elimination constant is -2(alpha + n delta), the rest are
    // proportional to alpha; spot-check the closed-form genericity rule
    for n in 2..=6usize {
        let sys = symquad_core::SymmetricSystem::new(n, rat(3, 2), rat(-1, 3), rat(2, 7), rat(5, 4));
        let ss = sigma_system(&sys);
        let a_nd = &(&rat(3, 2) + &(&Rational::from_int(n as i64) * &rat(5, 4)));
        let expected_c1 = -(&Rational::from_int(2) * a_nd);
        assert_eq!(ss.c[0], expected_c1, "c1 at n = {n}");
        let cls = symquad_core::classify(&sys);
        assert_eq!(cls.kind, symquad_core::Kind::Generic);
    }
}

#[test]
fn lax_reduced_trajectory_matches_tangent_closed_form() {
    // the almost-generic flow from (1,2,3) follows s1 = c tan(c t + b)
    // with complex constants fixed by the initial jet
    let cfg = ToleranceConfig::default();
    let sys = lax_system();
    let red = symquad_core::reduce_almost_generic(&sys).unwrap();
    let jets: Vec<Complex64> = initial_jets(&sys, &[rat(1, 1), rat(2, 1), rat(3, 1)])
        .unwrap()
        .iter()
        .take(2)
        .map(|r| r.to_complex())
        .collect();
    assert_eq!(jets, vec![c(6.0), c(-6.0)]);
    // s1(0) = c tan(b) = 6 and s1'(0) = c^2 sec^2(b) = c^2 + 36 = -6
    let cc = Complex64::new(0.0, 1.0) * Complex64::new(42.0, 0.0).sqrt();
    let b = (Complex64::new(6.0, 0.0) / cc).atan();
    let problem = ReducedProblem::AlmostGeneric(&red);
    let sigma = integrate_reduced(&problem, &jets, Some(c(6.0)), (0.0, 0.05), &cfg).unwrap();
    for (t, s) in sigma.times.iter().zip(&sigma.states) {
        let w = cc * t + b;
        let s1 = cc * w.tan();
        assert!((s[0] - s1).norm() < 1e-8, "s1 at t = {t}");
        // s2 = -c^2/6 (2 - 3 / cos^2 w)
        let sec2 = 1.0 / (w.cos() * w.cos());
        let s2 = -cc * cc / 6.0 * (Complex64::new(2.0, 0.0) - 3.0 * sec2);
        assert!((s[1] - s2).norm() < 1e-8, "s2 at t = {t}");
    }
}
