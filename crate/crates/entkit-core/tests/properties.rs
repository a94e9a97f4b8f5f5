//! Randomized property tests for the order-theoretic and spectral
//! plumbing. The quantum-state invariants live next to their modules
//! with seeded generators; these cover the pure-data laws.

use entkit_core::qla::{shannon, OrderedSpectrum};
use entkit_core::transform::{
    catalyst_enables, kron_spectrum, majorizes, powersum_obstruction, TransformVerdict,
};
use proptest::prelude::*;

fn simplex(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6..1.0f64, len).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    })
}

proptest! {
    #[test]
    fn ordered_spectrum_sorts_descending(values in prop::collection::vec(0.0..1.0f64, 1..12)) {
        let spec = OrderedSpectrum::new(values);
        for w in spec.values().windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn majorization_is_reflexive_and_uniform_is_minimal(p in simplex(6)) {
        let x = OrderedSpectrum::new(p);
        prop_assert!(majorizes(&x, &x));
        let uniform = OrderedSpectrum::new(vec![1.0 / 6.0; 6]);
        prop_assert!(majorizes(&uniform, &x));
    }

    #[test]
    fn majorization_transitive(a in simplex(5), b in simplex(5), c in simplex(5)) {
        let (a, b, c) = (
            OrderedSpectrum::new(a),
            OrderedSpectrum::new(b),
            OrderedSpectrum::new(c),
        );
        if majorizes(&a, &b) && majorizes(&b, &c) {
            prop_assert!(majorizes(&a, &c));
        }
    }

    #[test]
    fn kron_spectrum_preserves_mass_and_order(a in simplex(4), b in simplex(3)) {
        let k = kron_spectrum(&OrderedSpectrum::new(a), &OrderedSpectrum::new(b));
        prop_assert!((k.sum() - 1.0).abs() < 1e-9);
        for w in k.values().windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn catalysis_never_contradicts_the_powersum_obstruction(
        a in simplex(4),
        b in simplex(3),
        w in simplex(2),
    ) {
        let (a, b, w) = (
            OrderedSpectrum::new(a),
            OrderedSpectrum::new(b),
            OrderedSpectrum::new(w),
        );
        if catalyst_enables(&a, &b, &w).is_yes() {
            prop_assert!(!matches!(powersum_obstruction(&a, &b), TransformVerdict::No(_)));
        }
    }

    #[test]
    fn shannon_entropy_bounded_by_log_support(p in simplex(8)) {
        let h = shannon(&p);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= 3.0 + 1e-12); // log2(8)
    }
}
