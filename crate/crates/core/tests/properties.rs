//! Property tests over randomly drawn coefficients, states and frequencies.

use proptest::prelude::*;
use rwc::bath::OhmicBath;
use rwc::engine::{
    integrated_liouvillian, liouvillian_coefficients, sb_exponent, CoefficientDerivatives, LiouvillianCoefficients,
    SBCoefficients,
};
use rwc::linalg::{choi_matrix, hermitian_eigenvalues, ComplexMatrix, QubitState, TwoQubitState, C64};
use rwc::nonmarkov::{canonical_rates, g_function, g_via_choi, log_negativity, trace_distance};

prop_compose! {
    fn psd_coefficients()(
        gpp in 0.0..3.0f64,
        gmm in 0.0..3.0f64,
        rho in 0.0..1.0f64,
        theta in -3.2..3.2f64,
        xi in -3.0..3.0f64,
    ) -> SBCoefficients {
        SBCoefficients {
            t: 1.0,
            gamma_pp: gpp,
            gamma_mm: gmm,
            gamma_pm: C64::from_polar(rho * (gpp * gmm).sqrt(), theta),
            xi,
        }
    }
}

prop_compose! {
    fn derivatives()(v in prop::array::uniform5(-2.0..2.0f64)) -> CoefficientDerivatives {
        CoefficientDerivatives {
            t: 1.0,
            d_gamma_pp: v[0],
            d_gamma_mm: v[1],
            d_gamma_pm: C64::new(v[2], v[3]),
            d_xi: v[4],
        }
    }
}

prop_compose! {
    fn qubit_state()(v in prop::array::uniform8(-1.0..1.0f64)) -> QubitState {
        let a = ComplexMatrix::from_rows(&[
            &[C64::new(v[0], v[1]), C64::new(v[2], v[3])],
            &[C64::new(v[4], v[5]), C64::new(v[6], v[7])],
        ]);
        let m = a.as_matrix() * a.as_matrix().adjoint();
        let tr = m.trace().re.max(1e-12);
        QubitState::new(ComplexMatrix::new(m / C64::from(tr)).unwrap()).unwrap()
    }
}

prop_compose! {
    fn two_qubit_state()(v in prop::collection::vec(-1.0..1.0f64, 32)) -> TwoQubitState {
        let a = nalgebra::DMatrix::from_fn(4, 4, |i, j| C64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1]));
        let m = &a * a.adjoint();
        let tr = m.trace().re.max(1e-12);
        TwoQubitState::new(ComplexMatrix::new(m / C64::from(tr)).unwrap()).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_of_psd_exponent_is_cptp(c in psd_coefficients()) {
        let map = sb_exponent(&c).unwrap().exp().unwrap();
        let eig = hermitian_eigenvalues(&choi_matrix(&map).unwrap()).unwrap();
        prop_assert!(eig[0] >= -1e-8, "min Choi eigenvalue {}", eig[0]);
        prop_assert!(map.trace_defect() <= 1e-9);
    }

    #[test]
    fn closed_form_liouvillian_matches_integral(c in psd_coefficients(), d in derivatives()) {
        let closed = liouvillian_coefficients(&c, &d).unwrap().generator().superoperator();
        let z = sb_exponent(&c).unwrap();
        let integral = integrated_liouvillian(&z, &d.generator().superoperator(), 48).unwrap();
        let diff = (closed.matrix() - integral.matrix()).max_abs();
        prop_assert!(diff <= 1e-8 * (1.0 + integral.matrix().max_abs()), "difference {diff}");
    }

    #[test]
    fn closed_form_liouvillian_is_a_hermitian_generator(c in psd_coefficients(), d in derivatives()) {
        let l = liouvillian_coefficients(&c, &d).unwrap().generator().superoperator();
        // a trace-annihilating generator exponentiates to a trace-preserving map
        prop_assert!(l.exp().unwrap().trace_defect() <= 1e-12);
        prop_assert!(l.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn g_agrees_with_choi_route(
        delta in -2.0..2.0f64,
        gpp in -1.0..1.0f64,
        gmm in -1.0..1.0f64,
        re in -1.0..1.0f64,
        im in -1.0..1.0f64,
    ) {
        let lc = LiouvillianCoefficients { t: 1.0, delta, gamma_pp: gpp, gamma_mm: gmm, gamma_pm: C64::new(re, im) };
        let g = g_function(&canonical_rates(&lc));
        prop_assert!(g >= 0.0);
        let choi = g_via_choi(&lc.generator().superoperator(), 1e-6).unwrap();
        prop_assert!((g - choi).abs() <= 1e-4, "{g} vs {choi}");
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(a in qubit_state(), b in qubit_state(), c in qubit_state()) {
        let ab = trace_distance(&a, &b);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - trace_distance(&b, &a)).abs() < 1e-14);
        prop_assert!(trace_distance(&a, &a) < 1e-12);
        prop_assert!(ab <= trace_distance(&a, &c) + trace_distance(&c, &b) + 1e-12);
    }

    #[test]
    fn log_negativity_is_bounded(rho in two_qubit_state()) {
        let ln = log_negativity(&rho);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ln));
    }

    #[test]
    fn product_states_are_not_entangled(a in qubit_state(), b in qubit_state()) {
        prop_assert!(log_negativity(&TwoQubitState::product(&a, &b)) < 1e-12);
    }

    #[test]
    fn thermal_weights_satisfy_detailed_balance(omega in 1e-3..40.0f64, temp in 0.05..10.0f64) {
        let b = OhmicBath::new(0.05, 5.0, temp).unwrap();
        let plus = b.thermal_weight_plus(omega).unwrap();
        let minus = b.thermal_weight_minus(omega).unwrap();
        let j = b.spectral_density(omega).unwrap();
        prop_assert!((plus - minus - j).abs() <= 1e-12 * (1.0 + plus));
        if minus > 1e-250 {
            let kms = (omega / temp).exp();
            prop_assert!((plus / minus / kms - 1.0).abs() <= 1e-9);
        }
    }
}
