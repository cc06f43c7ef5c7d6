//! Acceptance suite.
//!
//! Each test covers one release criterion end to end and prints a PASS line;
//! run with `cargo test -p dftis-core --test acceptance -- --nocapture` to
//! see the lines. Tolerances and runtime budgets are pinned in the asserts.

mod common;

use std::time::Instant;

use common::{naive_dft, random_bits, random_complex_seq, random_real_seq, random_signature};
use dftis_core::dft::unitary_dft;
use dftis_core::eigen::{
    classify, eigenspace_dimension, eigenspace_dimensions, from_even, from_odd, generate,
    generate_family, Eigensequence, Eigenvalue, Sign,
};
use dftis_core::rac::{
    case_determinant, channel_energy, combine, extract_coefficient, peak_coefficient, recover,
    recover_via_matrix, RacCase, UserSignature,
};
use dftis_core::transceiver::{quantizer_levels, receive, transmit, QuantizerConfig};
use dftis_core::{ComplexSequence, Error, Tolerance};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn real(xs: &[f64]) -> ComplexSequence {
    ComplexSequence::from_real(xs).unwrap()
}

fn worked_pair() -> Vec<UserSignature> {
    vec![
        UserSignature::new("u1", 1, real(&[1.0, 0.0, 1.0, 0.0]), tol()).unwrap(),
        UserSignature::new("u2", 2, real(&[1.0, -1.0, -1.0, -1.0]), tol()).unwrap(),
    ]
}

/// Criterion 1: the worked two-user system reproduces its published numbers
/// exactly: M = 1 for an energy budget of 10, the 2-bit quantizer table, the
/// first transmitted block, and the second block to 1e-12.
#[test]
fn criterion_1_worked_two_user_example() {
    let start = Instant::now();
    let signatures = worked_pair();

    let m = peak_coefficient(10.0, &signatures).unwrap();
    assert_eq!(m, 1.0, "peak coefficient must be exactly 1");

    let cfg = QuantizerConfig::new(2, m).unwrap();
    let table = quantizer_levels(cfg);
    let expected = [
        ("01", -1.0),
        ("00", -1.0 / 3.0),
        ("10", 1.0 / 3.0),
        ("11", 1.0),
    ];
    assert_eq!(table.len(), expected.len());
    for ((label, level), (want_label, want_level)) in table.iter().zip(expected) {
        assert_eq!(label, want_label);
        assert_eq!(*level, want_level, "level for {want_label} must be exact");
    }

    let frames = transmit(&["0101", "1110"], &signatures, RacCase::Two, cfg).unwrap();
    assert_eq!(frames.len(), 2);
    assert_eq!(
        frames[0].y(),
        &real(&[0.0, -1.0, -2.0, -1.0]),
        "first block must be exact"
    );
    let second = real(&[-2.0 / 3.0, -1.0 / 3.0, -4.0 / 3.0, -1.0 / 3.0]);
    assert!(frames[1].y().max_diff(&second) <= 1e-12, "second block");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "budget 1 s, took {elapsed:?}");
    println!("criterion 1 PASS: worked two-user example reproduced ({elapsed:?})");
}

/// Criterion 2: the operator has order four on 200 random sequences with
/// N in 1..=64 (1e-11), and certified eigensequences classify to eigenvalues
/// whose fourth power is one.
#[test]
fn criterion_2_operator_order_four() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);

    for trial in 0..200 {
        let n = rng.gen_range(1..=64);
        let x = random_complex_seq(n, &mut rng);
        let mut four = x.clone();
        for _ in 0..4 {
            four = unitary_dft(&four);
        }
        assert!(
            four.max_diff(&x) <= 1e-11,
            "trial {trial}: four applications drifted at N={n}"
        );
    }

    for trial in 0..50 {
        let n = rng.gen_range(2..=64);
        let seed = random_real_seq(n, &mut rng);
        let candidates = [
            from_even(&seed, Sign::Plus, tol()),
            from_even(&seed, Sign::Minus, tol()),
            from_odd(&seed, Sign::Plus, tol()),
            from_odd(&seed, Sign::Minus, tol()),
        ];
        for es in candidates.into_iter().flatten() {
            let lambda = classify(es.sequence(), tol())
                .unwrap()
                .unwrap_or_else(|| panic!("trial {trial}: certified value must classify"));
            assert_eq!(lambda.value().powu(4), Complex64::new(1.0, 0.0));
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "budget 5 s, took {elapsed:?}");
    println!("criterion 2 PASS: operator order four on 200 random sequences ({elapsed:?})");
}

/// Criterion 3: every non-degenerate even/odd construction from 500 random
/// real seeds per N in {4, 5, 8, 12, 16} is invariant to 1e-9 against the
/// independent double-sum oracle and has the parity its eigenvalue dictates.
#[test]
fn criterion_3_construction_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for &n in &[4usize, 5, 8, 12, 16] {
        for _ in 0..500 {
            let seed = random_real_seq(n, &mut rng);
            for (candidate, sign) in [
                (from_even(&seed, Sign::Plus, tol()), Sign::Plus),
                (from_even(&seed, Sign::Minus, tol()), Sign::Minus),
                (from_odd(&seed, Sign::Plus, tol()), Sign::Plus),
                (from_odd(&seed, Sign::Minus, tol()), Sign::Minus),
            ] {
                let Some(es) = candidate else { continue };
                let residual =
                    naive_dft(es.sequence()).max_diff(&es.sequence().scaled(es.lambda().value()));
                assert!(
                    residual <= 1e-9,
                    "N={n} sign {sign:?}: residual {residual:.3e}"
                );
                if es.lambda().is_real() {
                    assert!(es.sequence().is_even(tol()), "N={n}: ±1 must be even");
                } else {
                    assert!(es.sequence().is_odd(tol()), "N={n}: ±j must be odd");
                }
            }
        }
    }
    println!("criterion 3 PASS: 2500 random seeds per construction stay invariant");
}

/// Criterion 4: the shift/cosine family keeps the eigenvalue for all shifts
/// m = 0..=N, is symmetric about N/2 to 1e-11, and the comb's family at
/// N = 4 is exactly the expected pair.
#[test]
fn criterion_4_generating_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);

    let comb =
        Eigensequence::certify(real(&[1.0, 0.0, 1.0, 0.0]), Eigenvalue::PlusOne, tol()).unwrap();
    let family = generate_family(&comb, tol());
    assert_eq!(family.len(), 2);
    assert!(family[0].sequence().max_diff(&real(&[2.0, 2.0, -2.0, 2.0])) <= 1e-12);
    assert!(family[1].sequence().max_diff(&real(&[4.0, 0.0, 4.0, 0.0])) <= 1e-12);

    let mut sources = vec![comb];
    for &(n, group) in &[(5usize, 2u8), (8, 3), (12, 4), (16, 1)] {
        sources.push(
            random_signature(&format!("src{n}"), group, n, &mut rng)
                .eigensequence()
                .clone(),
        );
    }
    for source in &sources {
        let n = source.len() as i64;
        for m in 0..=n {
            let g = generate(source, m, tol());
            let mirrored = generate(source, n - m, tol());
            match (&g, &mirrored) {
                (Some(a), Some(b)) => {
                    assert!(
                        a.sequence().max_diff(b.sequence()) <= 1e-11,
                        "N={n} m={m}: family member must be symmetric in m"
                    );
                    assert_eq!(
                        classify(a.sequence(), tol()).unwrap(),
                        Some(source.lambda()),
                        "N={n} m={m}"
                    );
                }
                (None, None) => {}
                _ => panic!("N={n} m={m}: symmetry must preserve degeneracy"),
            }
        }
    }
    println!("criterion 4 PASS: families keep the eigenvalue and the m-symmetry");
}

/// Criterion 5: determinants of the three-user cases {1,3,4} and {2,3,4}
/// equal -4j and the four-user case equals 16j, within 1e-12.
#[test]
fn criterion_5_case_determinants() {
    let checks = [
        (RacCase::Three134, Complex64::new(0.0, -4.0)),
        (RacCase::Three234, Complex64::new(0.0, -4.0)),
        (RacCase::Four, Complex64::new(0.0, 16.0)),
    ];
    for (case, expected) in checks {
        let det = case_determinant(case);
        assert!(
            (det - expected).norm() <= 1e-12,
            "case {case}: determinant {det}, expected {expected}"
        );
    }
    println!("criterion 5 PASS: separation matrices have the reference determinants");
}

/// Criterion 6: on 1000 random frames per case, the closed-form separation
/// and the matrix solve agree to 1e-9 and both reproduce the transmitted
/// components to 1e-9.
#[test]
fn criterion_6_separation_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let lengths = [8usize, 12, 16];

    for case in RacCase::ALL {
        for trial in 0..1000 {
            let n = lengths[trial % lengths.len()];
            let signatures: Vec<UserSignature> = case
                .groups()
                .iter()
                .map(|&g| random_signature(&format!("u{g}"), g, n, &mut rng))
                .collect();
            let weights: Vec<f64> = signatures
                .iter()
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let frame = combine(&weights, &signatures, case).unwrap();

            let closed = recover(&frame).unwrap();
            let solved = recover_via_matrix(&frame).unwrap();
            assert_eq!(closed.len(), solved.len());
            for (a, b) in closed.iter().zip(solved.iter()) {
                assert_eq!(a.group, b.group);
                assert!(
                    a.component.max_diff(&b.component) <= 1e-9,
                    "case {case} trial {trial}: routes disagree"
                );
            }
            for ((w, sig), part) in weights.iter().zip(&signatures).zip(&closed) {
                let expected = sig.sequence().scaled(Complex64::new(*w, 0.0));
                assert!(
                    part.component.max_diff(&expected) <= 1e-9,
                    "case {case} trial {trial}: component drifted"
                );
                let a = extract_coefficient(&part.component, sig).unwrap();
                assert!((a - w).abs() <= 1e-9);
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "budget 30 s, took {elapsed:?}"
    );
    println!(
        "criterion 6 PASS: 6000 random frames separate identically on both routes ({elapsed:?})"
    );
}

/// Criterion 7: with the peak coefficient derived from the energy budget,
/// 1000 random weight draws never exceed the budget (+1e-9), and a draw at
/// the peak itself stays within it.
#[test]
fn criterion_7_energy_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let e_max = 10.0;

    let sets: Vec<Vec<UserSignature>> = vec![
        worked_pair(),
        RacCase::Four
            .groups()
            .iter()
            .map(|&g| random_signature(&format!("r{g}"), g, 12, &mut rng))
            .collect(),
    ];

    for signatures in &sets {
        let case = if signatures.len() == 2 {
            RacCase::Two
        } else {
            RacCase::Four
        };
        let m = peak_coefficient(e_max, signatures).unwrap();
        for _ in 0..1000 {
            let weights: Vec<f64> = signatures.iter().map(|_| rng.gen_range(-m..m)).collect();
            let frame = combine(&weights, signatures, case).unwrap();
            assert!(channel_energy(&frame) <= e_max + 1e-9);
        }
        // Saturated draw: every |aᵢ| = M.
        let saturated: Vec<f64> = signatures
            .iter()
            .enumerate()
            .map(|(i, _)| if i % 2 == 0 { m } else { -m })
            .collect();
        let frame = combine(&saturated, signatures, case).unwrap();
        assert!(channel_energy(&frame) <= e_max);
    }
    println!("criterion 7 PASS: energy stays within budget across 2000 draws");
}

/// Criterion 8: the digital path is bit-exact for every case, word sizes
/// b in {1, 2, 4, 8}, lengths N in {8, 16} and 10^4 random bits per user.
#[test]
fn criterion_8_end_to_end_losslessness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let bits_per_user = 10_000usize;

    for case in RacCase::ALL {
        for &n in &[8usize, 16] {
            let signatures: Vec<UserSignature> = case
                .groups()
                .iter()
                .map(|&g| random_signature(&format!("u{g}"), g, n, &mut rng))
                .collect();
            let m = peak_coefficient(e_budget(), &signatures).unwrap();
            for &b in &[1u32, 2, 4, 8] {
                let cfg = QuantizerConfig::new(b, m).unwrap();
                let streams: Vec<String> = signatures
                    .iter()
                    .map(|_| random_bits(bits_per_user, &mut rng))
                    .collect();
                let frames = transmit(&streams, &signatures, case, cfg).unwrap();
                assert_eq!(frames.len(), bits_per_user / b as usize);
                let back = receive(&frames, &signatures, cfg, tol()).unwrap();
                assert_eq!(back, streams, "case {case} N={n} b={b}");
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "budget 60 s, took {elapsed:?}"
    );
    println!("criterion 8 PASS: 10^4 bits per user survive every case bit-exactly ({elapsed:?})");
}

fn e_budget() -> f64 {
    10.0
}

/// Criterion 9: the four numerically computed eigenspace dimensions sum to N
/// for N in 1..=32, the +j space is empty at N = 4, and registering a group-3
/// signature at N = 4 is rejected with the eigenspace diagnostic.
#[test]
fn criterion_9_eigenspace_dimensions() {
    for n in 1..=32usize {
        let dims = eigenspace_dimensions(n).unwrap();
        let total: usize = dims.iter().map(|(_, d)| d).sum();
        assert_eq!(total, n, "dimensions at N={n} must sum to N");
    }
    assert_eq!(eigenspace_dimension(4, Eigenvalue::PlusJ).unwrap(), 0);

    let err = UserSignature::new("u3", 3, real(&[0.0, 1.0, 0.0, -1.0]), tol()).unwrap_err();
    assert!(
        matches!(err, Error::EmptyEigenspace { group: 3, n: 4 }),
        "got {err:?}"
    );
    println!("criterion 9 PASS: eigenspace dimensions consistent, empty space rejected");
}
