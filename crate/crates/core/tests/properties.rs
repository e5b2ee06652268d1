use gapped_core::random::{
    random_barcode, random_duality_instance, random_gapped_module, random_interleaved_instance,
    random_persistence_module, rng_from_seed,
};
use gapped_core::*;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, p: u32) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(0..p as i64, rows * cols).prop_map(move |e| Matrix::new(rows, cols, p, &e).unwrap())
}

fn shaped(p: u32) -> impl Strategy<Value = (Matrix, Matrix)> {
    (0usize..5, 0usize..5, 0usize..5).prop_flat_map(move |(a, b, c)| (matrix(a, b, p), matrix(b, c, p)))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..6).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn transpose_reverses_composition((a, b) in shaped(5)) {
        let lhs = a.compose(&b).unwrap().transpose();
        let rhs = b.transpose().compose(&a.transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_vectors_vanish(m in (0usize..5, 0usize..5).prop_flat_map(|(r, c)| matrix(r, c, 3))) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len() + m.rank(), m.cols());
        for v in kernel {
            prop_assert!(linalg::is_zero_vector(&m.apply(&v).unwrap()));
        }
    }

    #[test]
    fn rref_preserves_rank(m in (0usize..5, 0usize..5).prop_flat_map(|(r, c)| matrix(r, c, 7))) {
        prop_assert_eq!(m.rref().0.rank(), m.rank());
    }

    #[test]
    fn rational_text_round_trips(r in rational()) {
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn gapped_order_is_partial(a in rational(), b in rational(), c in rational(), gap in (1i64..8).prop_map(|n| q(n, 2))) {
        prop_assert!(comparable(&a, &a, &gap));
        if comparable(&a, &b, &gap) && comparable(&b, &a, &gap) {
            prop_assert_eq!(a, b);
        }
        if comparable(&a, &b, &gap) && comparable(&b, &c, &gap) {
            prop_assert!(comparable(&a, &c, &gap));
        }
    }

    #[test]
    fn barcode_matches_brute_force(seed in any::<u64>()) {
        let m = random_persistence_module(&mut rng_from_seed(seed), 4, 3, 2);
        prop_assert_eq!(m.barcode().unwrap(), brute_force_barcode(&m).unwrap());
    }

    #[test]
    fn bottleneck_matches_exhaustive(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_barcode(&mut rng, 5);
        let b = random_barcode(&mut rng, 5);
        prop_assert_eq!(bottleneck_distance(&a, &b), exhaustive_bottleneck(&a, &b));
    }

    #[test]
    fn bottleneck_is_translation_invariant(seed in any::<u64>(), s in rational()) {
        let mut rng = rng_from_seed(seed);
        let a = random_barcode(&mut rng, 4);
        let b = random_barcode(&mut rng, 4);
        prop_assert_eq!(bottleneck_distance(&a, &b), bottleneck_distance(&a.translate(&s), &b.translate(&s)));
        prop_assert_eq!(bottleneck_distance(&a, &b), bottleneck_distance(&a.reflect(), &b.reflect()));
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let m = random_persistence_module(&mut rng, 4, 3, 3);
        prop_assert_eq!(m.dual().dual(), m.clone());
        let g = random_gapped_module(&mut rng).module;
        prop_assert_eq!(g.dual().dual(), g.clone());
        prop_assert!(g.dual().validate().is_ok());
    }

    #[test]
    fn normalized_restrictions_are_two_gap_close(seed in any::<u64>()) {
        let g = random_gapped_module(&mut rng_from_seed(seed)).module;
        let report = restriction_stability_report(&g).unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn spectral_invariant_is_stable(seed in any::<u64>(), zero in any::<bool>()) {
        let inst = random_interleaved_instance(&mut rng_from_seed(seed), zero);
        let bound = stability_bound_check(&inst.g, &inst.h, &inst.delta, &inst.certificate, &inst.class).unwrap();
        prop_assert!(bound.holds);
        if zero {
            prop_assert_eq!(bound.c_g, bound.c_h);
        }
    }

    #[test]
    fn duality_negates(seed in any::<u64>()) {
        let (g, a, star) = random_duality_instance(&mut rng_from_seed(seed));
        prop_assert_eq!(g.spectral_invariant(&a).unwrap(), -g.dual().spectral_invariant(&star).unwrap());
    }

    #[test]
    fn cosphere_shift_axiom(k in 0u32..=6, h in rational()) {
        let theta = SHModelClass::u(k);
        let model = build_cosphere_model(3, 6, theta.degree(3)).unwrap();
        let c0 = contact_spectral_invariant(&model, &ConstantContactHamiltonian::new(qi(0)), theta).unwrap();
        let ch = contact_spectral_invariant(&model, &ConstantContactHamiltonian::new(h), theta).unwrap();
        prop_assert_eq!(ch - c0, SymbolicSlope::constant(h));
    }
}
