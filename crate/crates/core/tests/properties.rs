use std::collections::HashSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splitmesh::cli::{random_angle_spec, random_state, shuffle_within_diagonals};
use splitmesh::oracle::{amplitude_defect, commutator_defect, dense_evolve, unitarity_defect};
use splitmesh::*;

fn angle() -> impl Strategy<Value = f64> {
    -7.0f64..7.0
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Array size, per-device angles and a random input state.
fn case(p_max: usize) -> impl Strategy<Value = (ArraySpec, PureState)> {
    (1..=p_max).prop_flat_map(|p| {
        (
            prop::collection::vec(angle(), p * p),
            prop::collection::vec(complex(), 2 * p),
        )
            .prop_filter_map("zero input", move |(thetas, amps)| {
                let thetas = thetas
                    .into_iter()
                    .map(|t| MixingAngle::new(t).unwrap())
                    .collect();
                let terms: Vec<_> = amps
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (i + 1, c))
                    .collect();
                let state = PureState::superposition(&terms, p, true).ok()?;
                Some((ArraySpec::from_row_major(p, thetas).unwrap(), state))
            })
    })
}

fn device(p_max: usize) -> impl Strategy<Value = (usize, BeamSplitterSpec)> {
    (1..=p_max).prop_flat_map(|p| {
        (Just(p), 1..=p, 1..=p, angle())
            .prop_map(|(p, m, n, t)| (p, BeamSplitterSpec::new(m, n, MixingAngle::new(t).unwrap())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn constructed_states_sum_to_one(terms in prop::collection::vec(complex(), 1..20)) {
        let p = terms.len().div_ceil(2);
        let terms: Vec<_> = terms.into_iter().enumerate().map(|(i, c)| (i + 1, c)).collect();
        if let Ok(s) = PureState::superposition(&terms, p, true) {
            prop_assert!((s.probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            // renormalizing a unit vector is a no-op
            let again: Vec<_> = s.amplitudes().iter().copied().enumerate().map(|(i, c)| (i + 1, c)).collect();
            let s2 = PureState::superposition(&again, p, true).unwrap();
            prop_assert!(amplitude_defect(s.amplitudes(), s2.amplitudes()).within(1e-15));
        }
    }

    #[test]
    fn basis_probabilities_are_indicators(p in 1usize..40, k_frac in 0.0f64..1.0) {
        let k = 1 + ((2 * p) as f64 * k_frac) as usize % (2 * p);
        let probs = PureState::basis(k, p).unwrap().probabilities();
        for (i, x) in probs.iter().enumerate() {
            prop_assert_eq!(*x, if i + 1 == k { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn fast_path_matches_dense((p, spec) in device(8), amps in prop::collection::vec(complex(), 16)) {
        let terms: Vec<_> = amps[..2 * p].iter().copied().enumerate().map(|(i, c)| (i + 1, c)).collect();
        let Ok(state) = PureState::superposition(&terms, p, true) else { return Ok(()) };
        let mut fast = state.clone();
        apply_bs(&mut fast, &spec).unwrap();
        let dense = bs_dense(&spec, p).unwrap().apply(&state).unwrap();
        prop_assert!(amplitude_defect(fast.amplitudes(), dense.amplitudes()).within(1e-15));

        // theta then -theta restores the input
        apply_bs(&mut fast, &BeamSplitterSpec::new(spec.m, spec.n, MixingAngle::new(-spec.theta.radians()).unwrap())).unwrap();
        prop_assert!(amplitude_defect(fast.amplitudes(), state.amplitudes()).within(1e-15));
    }

    #[test]
    fn dense_is_two_level((p, spec) in device(8)) {
        let u = bs_dense(&spec, p).unwrap();
        let id = DenseOperator::identity(2 * p);
        let (a, b) = coupled_channels(spec.m, spec.n, p).unwrap();
        let support = [a.get(), b.get()];
        for i in 1..=2 * p {
            for j in 1..=2 * p {
                if !(support.contains(&i) && support.contains(&j)) {
                    prop_assert_eq!(u.entry(i, j), id.entry(i, j));
                }
            }
        }
    }

    #[test]
    fn same_diagonal_devices_commute(p in 2usize..=8, d_frac in 0.0f64..1.0, ta in angle(), tb in angle()) {
        let schedule = diagonal_schedule(p).unwrap();
        let diag = &schedule.diagonals()[((2 * p - 1) as f64 * d_frac) as usize % (2 * p - 1)];
        for (i, &(m1, n1)) in diag.iter().enumerate() {
            for &(m2, n2) in &diag[i + 1..] {
                let a = BeamSplitterSpec::new(m1, n1, MixingAngle::new(ta).unwrap());
                let b = BeamSplitterSpec::new(m2, n2, MixingAngle::new(tb).unwrap());
                let (a1, a2) = coupled_channels(m1, n1, p).unwrap();
                let (b1, b2) = coupled_channels(m2, n2, p).unwrap();
                prop_assert!(a1 != b1 && a2 != b2);
                prop_assert_eq!(commutator_defect(&a, &b, p).unwrap().value(), 0.0);
            }
        }
    }

    #[test]
    fn disjoint_supports_commute_exactly((p, a) in device(6), m in 1usize..=6, n in 1usize..=6, t in angle()) {
        prop_assume!(m <= p && n <= p);
        let b = BeamSplitterSpec::new(m, n, MixingAngle::new(t).unwrap());
        if a.m != b.m && a.n != b.n {
            prop_assert_eq!(commutator_defect(&a, &b, p).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn transmission_roundtrip(t in 0.0f64..=100.0, theta in 0.0f64..=std::f64::consts::FRAC_PI_2) {
        let back = transmission_from_theta(theta_from_transmission(TransmissionPercent::new(t).unwrap()));
        prop_assert!((back.get() - t).abs() <= 1e-12);
        let angle = MixingAngle::new(theta).unwrap();
        let again = theta_from_transmission(transmission_from_theta(angle));
        // arccos is ill-conditioned near 0, so compare through cos^2
        prop_assert!((again.radians().cos().powi(2) - theta.cos().powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn fast_evolve_matches_dense_oracle((spec, input) in case(8)) {
        let fast = evolve(&spec, &input).unwrap();
        let slow = dense_evolve(&spec, &input).unwrap();
        prop_assert!(amplitude_defect(fast.state.amplitudes(), slow.amplitudes()).within(1e-12));
        let total = compose_total(&spec).unwrap().apply(&input).unwrap();
        prop_assert!(amplitude_defect(fast.state.amplitudes(), total.amplitudes()).within(1e-12));
        prop_assert_eq!(fast.rotations, spec.p() * spec.p());
        prop_assert_eq!(fast.trace.len(), 2 * spec.p());
        prop_assert!(fast.trace.max_norm_drift() <= 1e-10);
    }

    #[test]
    fn evolution_is_linear((spec, _) in case(6), a in complex(), b in complex(), ka in 0usize..12, kb in 0usize..12) {
        let dim = spec.dim();
        let (ka, kb) = (ka % dim + 1, kb % dim + 1);
        prop_assume!(ka != kb && a.norm() > 1e-3 && b.norm() > 1e-3);
        let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / s, b / s);
        let mixed = PureState::superposition(&[(ka, a), (kb, b)], spec.p(), false).unwrap();
        let out = evolve(&spec, &mixed).unwrap().state;
        let oa = evolve(&spec, &PureState::basis(ka, spec.p()).unwrap()).unwrap().state;
        let ob = evolve(&spec, &PureState::basis(kb, spec.p()).unwrap()).unwrap().state;
        let combo: Vec<Complex64> = oa.amplitudes().iter().zip(ob.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(amplitude_defect(out.amplitudes(), &combo).within(1e-12));
    }

    #[test]
    fn mz_embedding_reduces_to_two_channel_form(theta in -3.2f64..3.2) {
        let t = MixingAngle::new(theta).unwrap();
        let spec = ArraySpec::from_fn(2, |m, n| if m == n { t } else { MixingAngle::MIRROR }).unwrap();
        let out = evolve(&spec, &PureState::basis(1, 2).unwrap()).unwrap().state;
        let expect = mach_zehnder_output(theta);
        prop_assert!(amplitude_defect(&out.amplitudes()[2..], &expect).within(1e-14));
        prop_assert!(amplitude_defect(&out.amplitudes()[..2], &[Complex64::new(0.0, 0.0); 2]).within(1e-15));
    }

    #[test]
    fn schedule_is_complete_and_follows_size_law(p in 1usize..60) {
        let s = diagonal_schedule(p).unwrap();
        prop_assert_eq!(s.len(), 2 * p - 1);
        let all: Vec<_> = s.flatten().collect();
        prop_assert_eq!(all.len(), p * p);
        prop_assert_eq!(all.iter().collect::<HashSet<_>>().len(), p * p);
        for (i, diag) in s.diagonals().iter().enumerate() {
            let d = i + 1;
            prop_assert_eq!(diag.len(), anti_diagonal_len(2 * p - d, p).unwrap());
            prop_assert!(diag.iter().all(|&(m, n)| m + n == d + 1));
            prop_assert!(diag.windows(2).all(|w| w[0].0 > w[1].0));
        }
    }

    #[test]
    fn within_diagonal_order_is_irrelevant(p in 1usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_angle_spec(p, &mut rng);
        let schedule = diagonal_schedule(p).unwrap();
        let shuffled = shuffle_within_diagonals(&schedule, &mut rng).unwrap();
        let d = compose_with_schedule(&spec, &shuffled).unwrap().max_abs_diff(&compose_total(&spec).unwrap());
        prop_assert!(d <= 1e-13);
    }

    #[test]
    fn random_spec_is_pure(p in 1usize..12, seed in any::<u64>(), mean in 0.0f64..100.0, sigma in 0.0f64..30.0) {
        let policy = RandomThetaPolicy::new(mean, sigma, seed).unwrap();
        prop_assert_eq!(random_spec(p, &policy).unwrap(), random_spec(p, &policy).unwrap());
    }
}

#[test]
fn thousand_device_matrices_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    use rand::Rng;
    for _ in 0..1000 {
        let p = rng.random_range(1..=8);
        let spec = BeamSplitterSpec::new(
            rng.random_range(1..=p),
            rng.random_range(1..=p),
            MixingAngle::new(rng.random_range(-10.0..10.0)).unwrap(),
        );
        let u = bs_dense(&spec, p).unwrap();
        assert!(unitarity_defect(&u).within(1e-15), "{spec:?}");
    }
}

#[test]
fn norm_is_conserved_up_to_p50() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [1, 2, 7, 23, 50] {
        let spec = random_angle_spec(p, &mut rng);
        let input = random_state(p, &mut rng);
        let out = evolve(&spec, &input).unwrap();
        assert!(out.trace.max_norm_drift() <= 1e-10, "p={p}");
        assert!(
            unitarity_defect(&compose_total(&spec).unwrap()).within(1e-10),
            "p={p}"
        );
    }
}
