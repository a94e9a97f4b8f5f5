//! Acceptance suite: every release criterion as one test, each printing
//! a pass line with the measured numbers (run with `--nocapture` to see
//! them). Tolerances are pinned here, not configurable.

use std::time::Instant;

use entkit_core::games::{
    focal_payoff, is_nash, mixed_equilibrium_check, payoff, threshold_sweep, unfair_minmax,
    GameSpec, StrategyPoint, StrategySet,
};
use entkit_core::measures::{
    concurrence, log_negativity, negativity, rel_ent_entanglement, schmidt_measure_bounds,
    schmidt_measure_ghz_mixture, schmidt_measure_werner2, trace_norm_measure, ReferenceSet,
};
use entkit_core::nlgates::{
    channel_equivalence, cnot_matrix, controlled_gate, entangling_power_check, hadamard, pauli_x,
    pauli_z, protocol_control_u, protocol_n_control_u, protocol_nonlocal_cnot, protocol_swap,
    protocol_toffoli, run, Circuit,
};
use entkit_core::perm_distill::{
    asymmetric_example, brute_force_oracle, distillable_after_permutation,
    rel_ent_information_bound, two_pair_closed_form,
};
use entkit_core::qla::{
    log2, relative_entropy, tensor_product, ComplexMatrix, DensityMatrix, OrderedSpectrum,
};
use entkit_core::rng::SplitRng;
use entkit_core::states::{
    bell, cluster4, ghz, random_density, random_pure, schmidt_diagonal_state, w_state, werner2,
    werner_sym, BellKind, StateVector,
};
use entkit_core::transform::{
    catalyst_enables, epsilon_family_fidelity, epsilon_family_spectrum, lemma33_necessary,
    majorizes, nielsen_from_spectra, optimal_fidelity_locc, powersum_obstruction, TransformVerdict,
    Witness,
};
use entkit_core::werner_lp::{
    e_antisym, e_series_antisym, ppt_constraints, reference_optima, simplex_lexicographic,
};

fn spec(v: &[f64]) -> OrderedSpectrum {
    OrderedSpectrum::new(v.to_vec())
}

#[test]
fn criterion_01_lp_optima_exact() {
    let t0 = Instant::now();
    let reference = reference_optima();
    for (idx, expect) in reference.iter().enumerate() {
        let n = idx + 1;
        let sys = ppt_constraints(n).unwrap();
        let vertex = simplex_lexicographic(&sys).unwrap();
        assert_eq!(&vertex, expect, "n = {n}");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (LP optima exact, n=1..7): PASS in {elapsed:?}");
}

#[test]
fn criterion_02_e_series() {
    let t0 = Instant::now();
    let series = e_series_antisym(7).unwrap();
    let expect = [
        1.0,
        log2(3.0) / 2.0,
        log2(5.0) / 3.0,
        0.75,
        log2(13.25) / 5.0,
        log2(21.75) / 6.0,
        log2(36.0) / 7.0,
    ];
    for (n, (got, want)) in series.iter().zip(expect.iter()).enumerate() {
        assert!((got - want).abs() < 1e-9, "e_{}: {got} vs {want}", n + 1);
    }
    let (e40, _) = e_antisym(40).unwrap();
    assert!((e40 - 0.73697).abs() <= 1e-4, "e_40 = {e40}");
    assert!(e40 >= log2(5.0 / 3.0) - 1e-9);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 2 (e-series incl. e_40 = {e40:.6}): PASS in {elapsed:?}");
}

#[test]
fn criterion_03_negativity_golden() {
    let sa = werner_sym(0.0, 3).unwrap();
    let en = negativity(&sa, &[0]).unwrap();
    assert!((en - 2.0 / 3.0).abs() < 1e-9, "E_N(σ_a) = {en}");
    let ln = log_negativity(&sa, &[0]).unwrap();
    assert!((ln - log2(5.0 / 3.0)).abs() < 1e-9);
    assert!((ln - 0.7369656).abs() < 1e-7, "log-negativity {ln}");

    let mut rng = SplitRng::new(0xACC3);
    for k in 0..100 {
        let psi = random_pure(&[2, 2], &mut rng);
        let rho = psi.to_density();
        let en = negativity(&rho, &[0]).unwrap();
        let ec = concurrence(&rho).unwrap();
        assert!((en - ec).abs() < 1e-9, "pure state {k}: {en} vs {ec}");
    }
    for i in 0..=20 {
        let lam = i as f64 / 20.0;
        let w = werner2(lam).unwrap();
        let en = negativity(&w, &[0]).unwrap();
        let ec = concurrence(&w).unwrap();
        assert!((en - ec).abs() < 1e-9, "werner λ={lam}: {en} vs {ec}");
    }
    println!("criterion 3 (negativity golden values, E_N = E_C): PASS");
}

#[test]
fn criterion_04_relative_entropy_numeric() {
    let t0 = Instant::now();
    let mut rng = SplitRng::new(0xE4);
    for k in 0..20 {
        let psi = random_pure(&[2, 2], &mut rng);
        let expect = psi.schmidt_spectrum(&[0]).unwrap().shannon_entropy();
        let r =
            rel_ent_entanglement(&psi.to_density(), &[0], ReferenceSet::Separable, 5e-4).unwrap();
        assert!(
            (r.value - expect).abs() <= 2e-3,
            "state {k}: E_R {} vs S {expect}",
            r.value
        );
    }
    let sa = werner_sym(0.0, 3).unwrap();
    let r = rel_ent_entanglement(&sa, &[0], ReferenceSet::Separable, 1e-3).unwrap();
    assert!((r.value - 1.0).abs() <= 5e-3, "E_R(σ_a) = {}", r.value);

    // Subadditivity witness: the printed mixed reference state for two
    // antisymmetric copies evaluates to log₂3 < 2.
    let ss = werner_sym(1.0, 3).unwrap();
    let saa = DensityMatrix::new(tensor_product(sa.matrix(), sa.matrix()), vec![81]).unwrap();
    let reference = DensityMatrix::new(
        tensor_product(sa.matrix(), sa.matrix())
            .scale_re(1.0 / 3.0)
            .add(&tensor_product(ss.matrix(), ss.matrix()).scale_re(2.0 / 3.0)),
        vec![81],
    )
    .unwrap();
    let witness = relative_entropy(&saa, &reference).unwrap();
    assert!(witness <= log2(3.0) + 5e-3, "witness {witness}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("criterion 4 (E_R numerics, witness {witness:.6} ≤ log2 3): PASS in {elapsed:?}");
}

#[test]
fn criterion_05_schmidt_measure_tables() {
    // All 28 split values for the four named four-qubit states.
    let states: [(StateVector, [f64; 7]); 4] = [
        (ghz(4).unwrap(), [1.0; 7]),
        (
            w_state(4).unwrap(),
            [2.0, log2(3.0), log2(3.0), 1.0, 1.0, 1.0, 1.0],
        ),
        (cluster4(), [2.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0]),
        (
            bell(BellKind::PhiPlus).tensor(&bell(BellKind::PhiPlus)),
            [2.0, 1.0, 1.0, 0.0, 2.0, 2.0, 1.0],
        ),
    ];
    let splits: [Vec<Vec<usize>>; 7] = [
        vec![vec![0], vec![1], vec![2], vec![3]],
        vec![vec![0], vec![1], vec![2, 3]],
        vec![vec![0, 1], vec![2], vec![3]],
        vec![vec![0, 1], vec![2, 3]],
        vec![vec![0, 2], vec![1, 3]],
        vec![vec![0, 3], vec![1, 2]],
        vec![vec![0, 1, 2], vec![3]],
    ];
    for (state, expect) in &states {
        for (split, want) in splits.iter().zip(expect.iter()) {
            let b = schmidt_measure_bounds(state, split).unwrap();
            assert!(
                (b.upper - want).abs() < 1e-12,
                "split {split:?}: {} vs {want}",
                b.upper
            );
        }
    }
    // Mixed-state column: λ·GHZ₃ + (1−λ)|000⟩ gives λ on every split.
    for &lam in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        for v in schmidt_measure_ghz_mixture(lam).unwrap() {
            assert!((v - lam).abs() < 1e-12);
        }
    }
    // Werner closed form.
    for i in 0..=20 {
        let lam = i as f64 / 20.0;
        let got = schmidt_measure_werner2(lam).unwrap();
        let want = ((3.0 * lam - 1.0) / 2.0).max(0.0);
        assert_eq!(got, want);
    }
    println!("criterion 5 (Schmidt measure tables, 28 + 4 values): PASS");
}

#[test]
fn criterion_06_transformations() {
    // The printed 3-level pair is not reachable.
    let psi = spec(&[0.6, 0.3, 0.1]);
    let phi = spec(&[0.7, 0.15, 0.15]);
    assert!(nielsen_from_spectra(&psi, &phi).is_no());

    // Catalysis unlocks the 4-level pair with ω = (0.6, 0.4).
    let a = spec(&[0.4, 0.4, 0.1, 0.1]);
    let b = spec(&[0.5, 0.25, 0.25]);
    let omega = spec(&[0.6, 0.4]);
    assert!(nielsen_from_spectra(&a, &b).is_no());
    assert!(catalyst_enables(&a, &b, &omega).is_yes());

    // The modified pair is obstructed at ξ = 2.
    let a2 = spec(&[0.43, 0.43, 0.07, 0.07]);
    match powersum_obstruction(&a2, &b) {
        TransformVerdict::No(Witness::PowerSum { xi, .. }) => assert_eq!(xi, 2.0),
        other => panic!("expected ξ=2 obstruction, got {other:?}"),
    }

    // Closed-form optimal fidelity for the ε family.
    for &eps in &[0.97, 0.99, 1.0] {
        let r = optimal_fidelity_locc(&epsilon_family_spectrum(eps), &b);
        let want = epsilon_family_fidelity(eps);
        assert!(
            (r.fidelity - want).abs() <= 1e-4,
            "eps {eps}: {} vs {want}",
            r.fidelity
        );
    }

    // The rank-two necessary criterion rejects the catalysis example.
    let psi5 = schmidt_diagonal_state(&[0.38, 0.38, 0.095, 0.095, 0.05], 5);
    let excl = entkit_core::states::product_computational(&[4, 4], &[5, 5]);
    let phi5 = schmidt_diagonal_state(&[0.5, 0.25, 0.25], 5);
    let report = lemma33_necessary(&psi5, &excl, &phi5, &[0]).unwrap();
    assert!((report.chi_trace - 0.95).abs() < 1e-12);
    assert!(report.verdict.is_no());
    println!("criterion 6 (transformation criteria): PASS");
}

#[test]
fn criterion_07_permutation_distillation() {
    let t0 = Instant::now();
    let r = distillable_after_permutation(2, 0.5).unwrap();
    assert!((r.d_after - 0.75 * log2(3.0)).abs() < 1e-12);
    assert!((r.d_after - 1.18872).abs() < 1e-4);
    assert!((r.ratio - 1.0).abs() <= 1e-9);

    // Closed form vs oracle at n = 2 over the α grid.
    for i in 0..=10 {
        let alpha = i as f64 / 10.0;
        let pair = schmidt_diagonal_state(&[alpha, 1.0 - alpha], 2);
        let oracle = brute_force_oracle(&pair, 2).unwrap();
        let formula = distillable_after_permutation(2, alpha).unwrap();
        assert!(
            (oracle.distillable - formula.d_after).abs() <= 1e-9,
            "alpha {alpha}"
        );
        assert!((oracle.distillable - two_pair_closed_form(alpha)).abs() <= 1e-9);
    }
    // n = 4 formula against the explicit 256-dimensional oracle.
    for &alpha in &[0.3, 0.5, 0.8] {
        let pair = schmidt_diagonal_state(&[alpha, 1.0 - alpha], 2);
        let oracle = brute_force_oracle(&pair, 4).unwrap();
        let formula = distillable_after_permutation(4, alpha).unwrap();
        assert!(
            (oracle.distillable - formula.d_after).abs() <= 1e-9,
            "n=4 alpha {alpha}: {} vs {}",
            oracle.distillable,
            formula.d_after
        );
        assert!((oracle.entropy - formula.info_loss).abs() <= 1e-9);
    }

    // The asymmetric example.
    let ex = asymmetric_example();
    assert!((ex.info_loss - (2.0 - 0.75 * log2(3.0))).abs() <= 1e-9);
    assert!((ex.delta_d - (0.75 * log2(3.0) - 0.5)).abs() <= 1e-9);
    assert!(ex.ratio < 1.0);

    // Ratio stays below one over the full sweep.
    for n in (2..=60).step_by(2) {
        for i in 0..=10 {
            let alpha = i as f64 / 10.0;
            let r = distillable_after_permutation(n, alpha).unwrap();
            assert!(r.ratio <= 1.0 + 1e-9, "n={n} alpha={alpha}: {}", r.ratio);
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 7 (permutation distillation): PASS in {elapsed:?}");
}

#[test]
fn criterion_08_quantum_games() {
    let t0 = Instant::now();
    let pd = GameSpec::prisoners_dilemma();

    let (pa, pb) = payoff(&pd, &StrategyPoint::COOPERATE, &StrategyPoint::COOPERATE);
    assert!((pa - 3.0).abs() < 1e-12 && (pb - 3.0).abs() < 1e-12);
    let (pa, pb) = payoff(&pd, &StrategyPoint::DEFECT, &StrategyPoint::COOPERATE);
    assert!((pa - 5.0).abs() < 1e-12 && (pb - 0.0).abs() < 1e-12);

    // S1: (D,D) Nash at payoff 1.
    let (pa, _) = payoff(&pd, &StrategyPoint::DEFECT, &StrategyPoint::DEFECT);
    assert!((pa - 1.0).abs() < 1e-12);
    assert!(is_nash(
        &pd,
        &StrategyPoint::DEFECT,
        &StrategyPoint::DEFECT,
        StrategySet::S1,
        64,
        1e-4
    ));
    // S2: (Q,Q) Nash at payoff 3, (D,D) rejected.
    assert!(!is_nash(
        &pd,
        &StrategyPoint::DEFECT,
        &StrategyPoint::DEFECT,
        StrategySet::S2,
        64,
        1e-4
    ));
    assert!(is_nash(
        &pd,
        &StrategyPoint::Q,
        &StrategyPoint::Q,
        StrategySet::S2,
        64,
        1e-4
    ));
    let (pq, _) = payoff(&pd, &StrategyPoint::Q, &StrategyPoint::Q);
    assert!((pq - 3.0).abs() < 1e-12);
    // SU2: (Q,Q) rejected; the optimal answer reaches 5.
    assert!(!is_nash(
        &pd,
        &StrategyPoint::Q,
        &StrategyPoint::Q,
        StrategySet::SU2,
        32,
        1e-4
    ));
    let (_, best) =
        entkit_core::games::best_response(&pd, &StrategyPoint::Q, StrategySet::SU2, 32, false);
    assert!((best - 5.0).abs() < 1e-6, "deviation payoff {best}");

    // Focal payoffs.
    assert!((focal_payoff(&pd).0 - 2.25).abs() < 1e-12);
    let chicken = GameSpec::chicken();
    assert!((focal_payoff(&chicken).0 - 4.0).abs() < 1e-12);
    let (cq, _) = payoff(&chicken, &StrategyPoint::Q, &StrategyPoint::Q);
    assert!((cq - 6.0).abs() < 1e-12);
    assert!(is_nash(
        &chicken,
        &StrategyPoint::Q,
        &StrategyPoint::Q,
        StrategySet::S2,
        64,
        1e-4
    ));

    // Mixed-equilibrium identities.
    assert!(mixed_equilibrium_check());

    // Unfair game at grid 128².
    let m0 = unfair_minmax(&pd, 0.0, 128).unwrap();
    assert!((m0 - 1.0).abs() < 1e-6, "m(0) = {m0}");
    let m1 = unfair_minmax(&pd, core::f64::consts::FRAC_PI_2, 128).unwrap();
    assert!((m1 - 3.0).abs() < 1e-6, "m(π/2) = {m1}");
    let gammas: Vec<f64> = (0..=50)
        .map(|i| core::f64::consts::FRAC_PI_2 * i as f64 / 50.0)
        .collect();
    let (_, switch) = threshold_sweep(&pd, &gammas, 128).unwrap();
    let threshold = switch.expect("strategy switch located");
    let want = (1.0f64 / 5.0f64.sqrt()).asin();
    assert!(
        (threshold - want).abs() <= 0.02 + core::f64::consts::FRAC_PI_2 / 50.0,
        "threshold {threshold} vs {want}"
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("criterion 8 (quantum games, threshold {threshold:.4}): PASS in {elapsed:?}");
}

#[test]
fn criterion_09_nonlocal_gates() {
    let t0 = Instant::now();
    let mut rng = SplitRng::new(0x6A7E);

    let cnot = protocol_nonlocal_cnot();
    let rep = channel_equivalence(&cnot.circuit, &cnot.ideal).unwrap();
    assert!(rep.equal && rep.worst_fidelity >= 1.0 - 1e-10);
    let (_, ledger) = run(&cnot.circuit, &plus_zero()).unwrap();
    assert_eq!(
        (
            ledger.ebits_consumed,
            ledger.cbits_between(0, 1),
            ledger.cbits_between(1, 0)
        ),
        (1, 1, 1)
    );

    let u = entkit_core::states::haar_unitary(2, &mut rng);
    let cu = protocol_control_u(&u).unwrap();
    let rep = channel_equivalence(&cu.circuit, &cu.ideal).unwrap();
    assert!(rep.equal && rep.worst_fidelity >= 1.0 - 1e-10);
    let (_, ledger) = run(&cu.circuit, &plus_zero()).unwrap();
    assert_eq!(
        (
            ledger.ebits_consumed,
            ledger.cbits_between(0, 1),
            ledger.cbits_between(1, 0)
        ),
        (1, 1, 1)
    );

    let swap = protocol_swap();
    let rep = channel_equivalence(&swap.circuit, &swap.ideal).unwrap();
    assert!(rep.equal && rep.worst_fidelity >= 1.0 - 1e-10);
    let (_, ledger) = run(&swap.circuit, &plus_zero()).unwrap();
    assert_eq!(
        (
            ledger.ebits_consumed,
            ledger.cbits_between(0, 1),
            ledger.cbits_between(1, 0)
        ),
        (2, 2, 2)
    );

    let toffoli = protocol_toffoli();
    let rep = channel_equivalence(&toffoli.circuit, &toffoli.ideal).unwrap();
    assert!(rep.equal && rep.worst_fidelity >= 1.0 - 1e-10);
    let input3 = entkit_core::states::product_basis_state(&[0, 0, 0]);
    let (_, ledger) = run(&toffoli.circuit, &input3).unwrap();
    assert_eq!((ledger.ebits_consumed, ledger.cbits_total()), (2, 4));

    for n in [3usize, 4, 5] {
        let u = entkit_core::states::haar_unitary(2, &mut rng);
        let p = protocol_n_control_u(n, &u).unwrap();
        let rep = channel_equivalence(&p.circuit, &p.ideal).unwrap();
        assert!(
            rep.equal && rep.worst_fidelity >= 1.0 - 1e-10,
            "n = {n}: {rep:?}"
        );
        let input = entkit_core::states::product_basis_state(&vec![0; n]);
        let (_, ledger) = run(&p.circuit, &input).unwrap();
        assert_eq!(
            (ledger.ebits_consumed, ledger.cbits_total()),
            ((n - 1) as u32, 2 * (n - 1) as u32),
            "n = {n}"
        );
    }

    // Mutated protocol: dropping the final phase correction must fail
    // with a superposition witness.
    let corrupted = cnot_without_phase_fix();
    let rep = channel_equivalence(&corrupted, &cnot_matrix()).unwrap();
    assert!(!rep.equal);
    assert!(rep.worst_fidelity < 1.0 - 1e-3);
    let witness = rep.witness.expect("witness input");
    assert!(witness[0] >= 2, "witness {witness:?}");

    // Ledger lower-bound consistency via entangling power.
    let power = entangling_power_check(&cnot_matrix(), &[0, 1], 8, &mut rng).unwrap();
    assert!(power <= 1.0 + 1e-9 && (power - 1.0).abs() < 1e-9);
    let swap_power =
        entangling_power_check(&entkit_core::nlgates::swap_matrix(), &[0, 1], 8, &mut rng).unwrap();
    assert!((swap_power - 2.0).abs() < 1e-9);
    let toffoli_power =
        entangling_power_check(&controlled_gate(2, &pauli_x()), &[0, 1, 2], 8, &mut rng).unwrap();
    assert!(toffoli_power <= 2.0 + 1e-9);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 9 (non-local gates): PASS in {elapsed:?}");
}

fn plus_zero() -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(
        vec![
            num_complex::Complex64::new(s, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(s, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
        ],
        vec![2, 2],
    )
    .unwrap()
}

fn cnot_without_phase_fix() -> Circuit {
    let mut c = Circuit::new(2);
    let a = c.data_qubit(0);
    let b = c.data_qubit(1);
    let a1 = c.ancilla(0);
    let b1 = c.ancilla(1);
    c.consume_ebit(a1, b1);
    c.unitary(0, &[a, a1], cnot_matrix());
    let m1 = c.measure(a1);
    c.send(0, 1, m1);
    c.controlled(1, &[b1], pauli_x(), m1);
    c.discard(a1);
    c.unitary(1, &[b1, b], cnot_matrix());
    c.unitary(1, &[b1], hadamard());
    let m2 = c.measure(b1);
    c.send(1, 0, m2);
    let _ = pauli_z(); // the correction that is deliberately dropped
    c.discard(b1);
    c
}

#[test]
fn criterion_10_conjecture_frequency_advisory() {
    let report = entkit_core::measures::conjecture210_frequency(5000, 0xC210).unwrap();
    println!(
        "criterion 10 (violation frequency {} = {}/{} trials): {}",
        report.frequency,
        report.violations,
        report.trials,
        if (0.002..=0.015).contains(&report.frequency) {
            "PASS"
        } else {
            "ADVISORY (out of band)"
        }
    );
    assert!(report.violations > 0, "reporting contract: exact count");
    assert!(
        (0.002..=0.015).contains(&report.frequency),
        "frequency {} outside [0.002, 0.015]",
        report.frequency
    );
}

#[test]
fn criterion_11_property_suites() {
    let mut rng = SplitRng::new(0x11);

    // Majorization partial-order laws.
    for _ in 0..100 {
        let a = spec(&entkit_core::states::simplex_point(5, &mut rng));
        let b = spec(&entkit_core::states::simplex_point(5, &mut rng));
        let c = spec(&entkit_core::states::simplex_point(5, &mut rng));
        assert!(majorizes(&a, &a));
        if majorizes(&a, &b) && majorizes(&b, &c) {
            assert!(majorizes(&a, &c));
        }
        if majorizes(&a, &b) && majorizes(&b, &a) {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    // Entropy functional properties at 1e-9.
    for _ in 0..20 {
        let s1 = random_density(3, &mut rng);
        let s2 = random_density(2, &mut rng);
        let joint =
            DensityMatrix::new(tensor_product(s1.matrix(), s2.matrix()), vec![3, 2]).unwrap();
        let lhs = entkit_core::qla::von_neumann_entropy(&joint);
        let rhs =
            entkit_core::qla::von_neumann_entropy(&s1) + entkit_core::qla::von_neumann_entropy(&s2);
        assert!((lhs - rhs).abs() < 1e-9);
    }
    for _ in 0..10 {
        let s1 = random_density(3, &mut rng);
        let s2 = random_density(3, &mut rng);
        let r1 = random_density(3, &mut rng);
        let r2 = random_density(3, &mut rng);
        for &lam in &[0.25, 0.5, 0.75] {
            let lhs = relative_entropy(&s1.mix(&s2, lam), &r1.mix(&r2, lam)).unwrap();
            let rhs = lam * relative_entropy(&s1, &r1).unwrap()
                + (1.0 - lam) * relative_entropy(&s2, &r2).unwrap();
            assert!(lhs <= rhs + 1e-9);
        }
    }
    // Direct-sum property on block-diagonal instances.
    for _ in 0..10 {
        let s1 = random_density(2, &mut rng);
        let s2 = random_density(2, &mut rng);
        let r1 = random_density(2, &mut rng);
        let r2 = random_density(2, &mut rng);
        let lam = 0.4;
        let embed = |a: &DensityMatrix, b: &DensityMatrix| {
            let mut m = ComplexMatrix::zeros(4, 4);
            for r in 0..2 {
                for c in 0..2 {
                    m[(r, c)] = a.matrix()[(r, c)] * lam;
                    m[(r + 2, c + 2)] = b.matrix()[(r, c)] * (1.0 - lam);
                }
            }
            DensityMatrix::new(m, vec![4]).unwrap()
        };
        let lhs = relative_entropy(&embed(&s1, &s2), &embed(&r1, &r2)).unwrap();
        let rhs = lam * relative_entropy(&s1, &r1).unwrap()
            + (1.0 - lam) * relative_entropy(&s2, &r2).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }

    // Negativity convexity and log-negativity additivity.
    for _ in 0..10 {
        let s1 = random_density(4, &mut rng).with_dims(vec![2, 2]).unwrap();
        let s2 = random_density(4, &mut rng).with_dims(vec![2, 2]).unwrap();
        for &lam in &[0.25, 0.5, 0.75] {
            let mixed = s1.mix(&s2, lam);
            assert!(
                negativity(&mixed, &[0]).unwrap()
                    <= lam * negativity(&s1, &[0]).unwrap()
                        + (1.0 - lam) * negativity(&s2, &[0]).unwrap()
                        + 1e-9
            );
        }
        let joint =
            DensityMatrix::new(tensor_product(s1.matrix(), s2.matrix()), vec![2, 2, 2, 2]).unwrap();
        let lhs = log_negativity(&joint, &[0, 2]).unwrap();
        let rhs = log_negativity(&s1, &[0]).unwrap() + log_negativity(&s2, &[0]).unwrap();
        assert!((lhs - rhs).abs() < 1e-8);
    }

    // Trace-norm measure: sampled non-increase under local Kraus pairs,
    // within the solver-certified slack.
    for _ in 0..2 {
        let rho = random_density(4, &mut rng).with_dims(vec![2, 2]).unwrap();
        let before = trace_norm_measure(&rho, &[0], 1e-3).unwrap();
        let g = ComplexMatrix::from_fn(2, 2, |_, _| {
            num_complex::Complex64::new(rng.next_gaussian(), rng.next_gaussian())
        });
        let gg = g.adjoint().mul(&g);
        let top = entkit_core::qla::eigvals_hermitian(&gg).unwrap().values()[0] * 1.5;
        let a1 = entkit_core::qla::sqrtm_psd(&gg.scale_re(1.0 / top)).unwrap();
        let a2 =
            entkit_core::qla::sqrtm_psd(&ComplexMatrix::identity(2).sub(&gg.scale_re(1.0 / top)))
                .unwrap();
        let mut avg = 0.0;
        let mut slack = 1e-2 + before.gap.max(0.0);
        for k in [&a1, &a2] {
            let op = tensor_product(k, &ComplexMatrix::identity(2));
            let mapped = op.mul(rho.matrix()).mul(&op.adjoint());
            let p = mapped.trace().re;
            if p < 1e-9 {
                continue;
            }
            let branch = DensityMatrix::new(mapped.scale_re(1.0 / p), vec![2, 2]).unwrap();
            let r = trace_norm_measure(&branch, &[0], 1e-3).unwrap();
            avg += p * r.value;
            slack += p * r.gap.max(0.0);
        }
        assert!(avg <= before.value + slack);
    }

    // Information-loss bound for random pure ensembles.
    for _ in 0..3 {
        let p = 0.3 + 0.4 * rng.next_f64();
        let ens = [
            (p, random_pure(&[2, 2], &mut rng)),
            (1.0 - p, random_pure(&[2, 2], &mut rng)),
        ];
        let r = rel_ent_information_bound(&ens, &[0], 1e-3).unwrap();
        assert!(r.delta_er_upper <= r.delta_i + r.slack + 1e-9);
    }

    println!("criterion 11 (property suites): PASS");
}
