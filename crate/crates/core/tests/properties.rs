//! Property suite for the transform algebra, the invariant constructions and
//! the digital path.

mod common;

use common::{naive_dft, random_bits, random_real_seq, random_signature};
use dftis_core::dft::{apply_dft_power, unitary_dft, unitary_idft};
use dftis_core::eigen::{
    classify, from_even, from_odd, generate, linear_combine, Eigenvalue, Sign,
};
use dftis_core::rac::{combine, recover, RacCase};
use dftis_core::transceiver::{
    decode_level, encode_word, quantizer_levels, receive, transmit, QuantizerConfig,
};
use dftis_core::{ComplexSequence, Tolerance};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Arbitrary complex sequence with unit-order amplitudes.
fn seq_strategy(max_len: usize) -> impl Strategy<Value = ComplexSequence> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len).prop_map(|pairs| {
        ComplexSequence::new(
            pairs
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
        .unwrap()
    })
}

/// Arbitrary real sequence of length at least 2.
fn real_seq_strategy(max_len: usize) -> impl Strategy<Value = ComplexSequence> {
    prop::collection::vec(-1.0f64..1.0, 2..=max_len)
        .prop_map(|xs| ComplexSequence::from_real(&xs).unwrap())
}

proptest! {
    #[test]
    fn transform_preserves_energy(x in seq_strategy(64)) {
        let spectrum = unitary_dft(&x);
        let rel = (spectrum.energy() - x.energy()).abs() / x.energy().max(1e-30);
        prop_assert!(rel < 1e-10);
    }

    #[test]
    fn transform_matches_double_sum_oracle(x in seq_strategy(48)) {
        prop_assert!(unitary_dft(&x).max_diff(&naive_dft(&x)) < 1e-12);
    }

    #[test]
    fn two_applications_reverse_and_four_restore(x in seq_strategy(64)) {
        prop_assert!(apply_dft_power(&x, 2).max_diff(&x.reversed()) < 1e-12);
        let four = unitary_dft(&unitary_dft(&unitary_dft(&unitary_dft(&x))));
        prop_assert!(four.max_diff(&x) < 1e-12);
        prop_assert!(unitary_idft(&unitary_dft(&x)).max_diff(&x) < 1e-12);
    }

    #[test]
    fn shift_becomes_a_phase_ramp(x in seq_strategy(32), m in -70i64..70) {
        let lhs = unitary_dft(&x.circular_shift(m));
        let rhs = unitary_dft(&x).modulate(-m);
        prop_assert!(lhs.max_diff(&rhs) <= tol().eps());
    }

    #[test]
    fn modulation_becomes_a_spectral_shift(x in seq_strategy(32), r in -70i64..70) {
        let lhs = unitary_dft(&x.modulate(r));
        let rhs = unitary_dft(&x).circular_shift(r);
        prop_assert!(lhs.max_diff(&rhs) <= tol().eps());
    }

    #[test]
    fn transform_commutes_with_parity_split(x in seq_strategy(32)) {
        let spectrum = unitary_dft(&x);
        prop_assert!(unitary_dft(&x.even_part()).max_diff(&spectrum.even_part()) <= tol().eps());
        prop_assert!(unitary_dft(&x.odd_part()).max_diff(&spectrum.odd_part()) <= tol().eps());
    }

    #[test]
    fn parity_split_reconstructs(x in seq_strategy(64)) {
        let back = &x.even_part() + &x.odd_part();
        prop_assert!(back.max_diff(&x) <= 4.0 * f64::EPSILON * x.max_abs().max(1.0));
    }

    #[test]
    fn constructions_are_invariant_with_correct_parity(x in real_seq_strategy(64)) {
        for (candidate, want_even) in [
            (from_even(&x, Sign::Plus, tol()), true),
            (from_even(&x, Sign::Minus, tol()), true),
            (from_odd(&x, Sign::Plus, tol()), false),
            (from_odd(&x, Sign::Minus, tol()), false),
        ] {
            if let Some(es) = candidate {
                let residual = naive_dft(es.sequence())
                    .max_diff(&es.sequence().scaled(es.lambda().value()));
                prop_assert!(residual <= 1e-9);
                prop_assert_eq!(es.sequence().is_even(tol()), want_even);
                prop_assert_eq!(es.sequence().is_odd(tol()), !want_even);
            }
        }
    }

    #[test]
    fn generated_sequences_keep_the_eigenvalue(x in real_seq_strategy(24), m in -30i64..30) {
        // Build a certified source first; skip degenerate draws.
        if let Some(source) = from_even(&x, Sign::Plus, tol()) {
            let n = source.len() as i64;
            if let Some(g) = generate(&source, m, tol()) {
                prop_assert_eq!(classify(g.sequence(), tol()).unwrap(), Some(source.lambda()));
                let mirrored = generate(&source, n - m, tol()).unwrap();
                prop_assert!(g.sequence().max_diff(mirrored.sequence()) < 1e-11);
            }
        }
    }

    #[test]
    fn eigenspaces_are_closed_under_real_combinations(
        x in real_seq_strategy(24),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let (Some(u), Some(v)) = (
            from_odd(&x, Sign::Minus, tol()),
            from_odd(&x.circular_shift(1), Sign::Minus, tol()),
        ) else {
            return Ok(());
        };
        if let Some(w) = linear_combine(&[(a, u), (b, v)], tol()).unwrap() {
            prop_assert_eq!(classify(w.sequence(), tol()).unwrap(), Some(Eigenvalue::MinusJ));
        }
    }

    #[test]
    fn eigensequence_transform_is_one_multiply_per_sample(x in real_seq_strategy(32)) {
        if let Some(es) = from_even(&x, Sign::Minus, tol()) {
            // classify-then-scale reproduces the full transform.
            let lambda = classify(es.sequence(), tol()).unwrap().unwrap();
            let scaled = es.sequence().scaled(lambda.value());
            prop_assert!(unitary_dft(es.sequence()).max_diff(&scaled) <= tol().eps());
        }
    }

    #[test]
    fn quantizer_decode_inverts_encode(b in 1u32..=12, raw in 0u64..u64::MAX, m in 0.1f64..10.0) {
        let cfg = QuantizerConfig::new(b, m).unwrap();
        let index = raw % cfg.level_count();
        let label: String = (0..b)
            .rev()
            .map(|bit| if (index >> bit) & 1 == 1 { '1' } else { '0' })
            .collect();
        let level = encode_word(&label, cfg).unwrap();
        prop_assert!(level.abs() <= m);
        prop_assert_eq!(decode_level(level, cfg, Tolerance::default()).unwrap(), label);
    }
}

#[test]
fn quantizer_tables_are_bijections() {
    for b in 1..=10u32 {
        let cfg = QuantizerConfig::new(b, 1.0).unwrap();
        let table = quantizer_levels(cfg);
        assert_eq!(table.len(), 1usize << b);
        let mut labels: Vec<&String> = table.iter().map(|(l, _)| l).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 1usize << b);
        for window in table.windows(2) {
            assert!(window[0].1 < window[1].1, "levels must strictly increase");
        }
    }
}

#[test]
fn separation_is_exact_for_random_sessions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tol = tol();
    for case in RacCase::ALL {
        for &n in &[8usize, 12, 16] {
            for trial in 0..25 {
                let signatures: Vec<_> = case
                    .groups()
                    .iter()
                    .map(|&g| random_signature(&format!("u{g}-{trial}"), g, n, &mut rng))
                    .collect();
                let weights: Vec<f64> = signatures
                    .iter()
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let frame = combine(&weights, &signatures, case).unwrap();
                let components = recover(&frame).unwrap();
                for ((w, sig), part) in weights.iter().zip(&signatures).zip(&components) {
                    assert_eq!(part.group, sig.group());
                    let expected = sig.sequence().scaled(Complex64::new(*w, 0.0));
                    assert!(
                        part.component.max_diff(&expected) <= 1e-9,
                        "case {case} N={n}"
                    );
                    let a = dftis_core::rac::extract_coefficient(&part.component, sig).unwrap();
                    assert!((a - w).abs() <= 1e-9);
                    // No cross-eigenspace leakage: non-zero components stay
                    // classifiable in their group.
                    if !part.component.is_zero(tol) {
                        let lambda = classify(&part.component, tol).unwrap();
                        assert_eq!(lambda.map(Eigenvalue::group_index), Some(sig.group()));
                    }
                }
            }
        }
    }
}

#[test]
fn random_round_trips_are_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let tol = tol();
    for case in RacCase::ALL {
        for &b in &[1u32, 3, 5] {
            let n = 8;
            let signatures: Vec<_> = case
                .groups()
                .iter()
                .map(|&g| random_signature(&format!("u{g}"), g, n, &mut rng))
                .collect();
            let e_max = 5.0;
            let m = dftis_core::rac::peak_coefficient(e_max, &signatures).unwrap();
            let cfg = QuantizerConfig::new(b, m).unwrap();
            let bits = 60 * b as usize;
            let streams: Vec<String> = signatures
                .iter()
                .map(|_| random_bits(bits, &mut rng))
                .collect();
            let frames = transmit(&streams, &signatures, case, cfg).unwrap();
            assert_eq!(frames.len(), bits / b as usize);
            for frame in &frames {
                assert!(dftis_core::rac::channel_energy(frame) <= e_max + 1e-9);
            }
            let back = receive(&frames, &signatures, cfg, tol).unwrap();
            assert_eq!(back, streams, "case {case} b={b}");
        }
    }
}

#[test]
fn dimension_table_cross_check_for_multiples_of_four() {
    // Numeric ranks first, then compared against the closed-form pattern
    // (m+1, m, m-1, m) known for lengths N = 4m.
    for m in 1usize..=6 {
        let n = 4 * m;
        let dims = dftis_core::eigen::eigenspace_dimensions(n).unwrap();
        let by_lambda: std::collections::HashMap<_, _> = dims.into_iter().collect();
        assert_eq!(by_lambda[&Eigenvalue::PlusOne], m + 1, "N={n}");
        assert_eq!(by_lambda[&Eigenvalue::MinusOne], m, "N={n}");
        assert_eq!(by_lambda[&Eigenvalue::PlusJ], m - 1, "N={n}");
        assert_eq!(by_lambda[&Eigenvalue::MinusJ], m, "N={n}");
    }
}

#[test]
fn random_sequences_rarely_classify() {
    // Unstructured sequences should be rejected rather than force-fitted.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let x = random_real_seq(9, &mut rng);
        assert_eq!(classify(&x, tol()).unwrap(), None);
    }
}
