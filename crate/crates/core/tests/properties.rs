//! Randomized invariants for the coin algebra, walk evolution, and
//! cavity overlap model.

use num_complex::Complex64;
use proptest::prelude::*;
use ringwalk_core::{
    bs_weight, coin_theta, compose, convolve_steps, deconvolve_series, equal_up_to_global_phase,
    evolve_localized, hwp_operator, qwp_operator, CavityConfig, CoinState, PlateKind, PulseModel,
    QPlateSpec, Spectrum, StepSeries, WaveplateSpec,
};

fn arb_angle() -> impl Strategy<Value = f64> {
    -360.0..360.0f64
}

fn arb_coin_state() -> impl Strategy<Value = CoinState> {
    (
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
    )
        .prop_filter_map("needs nonzero norm", |(a, b, c, d)| {
            let s = CoinState::new(Complex64::new(a, b), Complex64::new(c, d));
            if s.norm() > 1e-3 {
                Some(s)
            } else {
                None
            }
        })
}

proptest! {
    #[test]
    fn wave_plate_operators_are_unitary(theta in arb_angle()) {
        prop_assert!(qwp_operator(theta).unitarity_deviation() < 1e-12);
        prop_assert!(hwp_operator(theta).unitarity_deviation() < 1e-12);
        prop_assert!(coin_theta(theta).unitarity_deviation() < 1e-12);
    }

    #[test]
    fn composition_of_unitaries_is_unitary(a in arb_angle(), b in arb_angle(), c in arb_angle()) {
        let u = compose(&[qwp_operator(a), hwp_operator(b), qwp_operator(c)]).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-11);
    }

    #[test]
    fn hwp_is_its_own_inverse_up_to_phase(theta in arb_angle()) {
        // A half-wave plate applied twice is the identity up to a
        // global phase.
        let h = hwp_operator(theta);
        let twice = h.matmul(&h);
        prop_assert!(equal_up_to_global_phase(
            &twice,
            &ringwalk_core::CoinOperator::identity(),
            1e-12
        ));
    }

    #[test]
    fn coin_decomposition_identity(theta in 0.0..180.0f64) {
        // Q_45 H_{theta/4} Q_45 equals C_theta C_N up to global phase.
        let lhs = compose(&[qwp_operator(45.0), hwp_operator(theta / 4.0), qwp_operator(45.0)])
            .unwrap();
        let rhs = coin_theta(theta).matmul(&ringwalk_core::CoinOperator::not_coin());
        prop_assert!(equal_up_to_global_phase(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn walk_conserves_norm(
        theta in 0.0..180.0f64,
        init in arb_coin_state(),
        n in 1usize..25,
    ) {
        let plate = WaveplateSpec::new(PlateKind::Quarter, theta);
        let states = evolve_localized(0, init, Some(&plate), &QPlateSpec::half(), n).unwrap();
        for s in &states {
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn walk_support_has_step_parity(
        theta in 0.0..180.0f64,
        n in 1usize..20,
    ) {
        // After n unit steps from the origin only sites with l = n
        // (mod 2) can be occupied.
        let plate = WaveplateSpec::new(PlateKind::Quarter, theta);
        let states = evolve_localized(
            0,
            CoinState::horizontal(),
            Some(&plate),
            &QPlateSpec::half(),
            n,
        )
        .unwrap();
        let p = states[n].probabilities();
        for (l, w) in p.iter() {
            if (l - n as i64).rem_euclid(2) != 0 {
                prop_assert!(w.abs() < 1e-15, "off-parity weight {w} at l={l}");
            }
        }
    }

    #[test]
    fn bare_shift_walk_has_period_two(init in arb_coin_state(), k in 1usize..50) {
        let states = evolve_localized(0, init.clone(), None, &QPlateSpec::half(), 2 * k).unwrap();
        prop_assert!(states[0].equal_up_to_global_phase(&states[2 * k], 1e-12));
    }

    #[test]
    fn bs_weights_sum_to_unity(t in 0.05..0.95f64) {
        let cfg = CavityConfig::new(10.0, t, PulseModel::canonical(), 40.0, 10.0).unwrap();
        let total: f64 = (0..2000).map(|n| bs_weight(&cfg, n)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deconvolve_inverts_convolve(
        t in 0.2..0.8f64,
        seed in proptest::collection::vec(0.01..1.0f64, 25),
    ) {
        // Five synthetic steps of five sites each, all strictly
        // positive so clamping never engages.
        let cfg = CavityConfig::new(10.0, t, PulseModel::canonical(), 40.0, 10.0).unwrap();
        let steps: Vec<Spectrum> = seed
            .chunks_exact(5)
            .map(|w| Spectrum::from_weights(-2, w.to_vec()).unwrap())
            .collect();
        let series = StepSeries::new(steps.clone());
        let measured = convolve_steps(&series, &cfg).unwrap();
        let recovered = deconvolve_series(&measured, &cfg).unwrap();
        for (orig, rec) in steps.iter().zip(recovered.steps()) {
            for (l, w) in orig.iter() {
                prop_assert!((rec.weight(l) - w).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn convolved_series_stays_normalized(
        t in 0.2..0.8f64,
        seed in proptest::collection::vec(0.0..1.0f64, 30),
    ) {
        let cfg = CavityConfig::new(10.0, t, PulseModel::canonical(), 40.0, 10.0).unwrap();
        let steps: Vec<Spectrum> = seed
            .chunks_exact(6)
            .filter_map(|w| Spectrum::from_weights(-3, w.to_vec()).ok())
            .collect();
        prop_assume!(!steps.is_empty());
        let measured = convolve_steps(&StepSeries::new(steps), &cfg).unwrap();
        for m in measured.steps() {
            prop_assert!((m.total() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mirrored_coin_angles_mirror_the_walk(n in 1usize..12) {
        // QWP at 45 deg and at 135 deg generate distributions that are
        // mirror images under l -> -l for a symmetric linear input.
        let a = evolve_localized(
            0,
            CoinState::horizontal(),
            Some(&WaveplateSpec::new(PlateKind::Quarter, 45.0)),
            &QPlateSpec::half(),
            n,
        )
        .unwrap();
        let b = evolve_localized(
            0,
            CoinState::horizontal(),
            Some(&WaveplateSpec::new(PlateKind::Quarter, 135.0)),
            &QPlateSpec::half(),
            n,
        )
        .unwrap();
        let pa = a[n].probabilities();
        let pb = b[n].probabilities();
        for (l, w) in pa.iter() {
            prop_assert!((w - pb.weight(-l)).abs() < 1e-10, "mismatch at l={l}");
        }
    }
}
