use gapped_core::*;

fn pts(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| qi(x)).collect()
}

fn bar(b: i64, d: Option<i64>) -> Bar<Rational> {
    Bar::new(Extended::Finite(qi(b)), d.map_or(Extended::PosInf, |d| Extended::Finite(qi(d))))
}

#[test]
fn two_step_module_barcode() {
    // 1 -> 2 -> 1 with rank-one maps and a colimit of dimension one.
    let m = PersistenceModule::new(
        2,
        IndexSet::new(pts(&[0, 1, 2])).unwrap(),
        vec![1, 2, 1],
        vec![
            Matrix::new(2, 1, 2, &[1, 0]).unwrap(),
            Matrix::new(1, 2, 2, &[0, 1]).unwrap(),
        ],
        Some(LimitSlot {
            kind: LimitKind::Colimit,
            dim: 1,
            map: Matrix::identity(1, 2),
        }),
    )
    .unwrap();
    let b = m.barcode().unwrap();
    assert_eq!(b, Barcode::from_bars([bar(0, Some(1)), bar(1, None)]));
    assert_eq!(b.to_text(), "0 1 1\n1 inf 1\n");
    assert_eq!(m.spectral_invariant(&[1]).unwrap(), Extended::Finite(qi(1)));
}

#[test]
fn dual_module_has_reflected_barcode() {
    let m = PersistenceModule::identity_chain(2, pts(&[0, 2]), 1, true).unwrap();
    let d = m.dual();
    assert_eq!(d.barcode().unwrap().to_text(), "-inf 0 1\n");
    assert_eq!(d.spectral_invariant(&[1]).unwrap(), Extended::Finite(qi(0)));
}

#[test]
fn interleaving_distance_of_shifted_chain() {
    let m = PersistenceModule::identity_chain(2, pts(&[0, 1, 2]), 1, false).unwrap();
    let shifted = m.shift(&qi(-1));
    assert_eq!(interleaving_distance(&m, &shifted).unwrap(), Extended::Finite(qi(1)));
}

#[test]
fn certificate_failure_is_localized() {
    let pm = PersistenceModule::identity_chain(2, pts(&[0, 1, 2, 3]), 1, true).unwrap();
    let g = GappedModule::from_chain(qi(1), &pm).unwrap();
    let r = RestrictionSequence::new(qi(0), qi(1), 0, 3).unwrap();
    let mut cert = structure_map_certificate(&g, &r).unwrap();
    assert_eq!(verify_interleaving_certificate(&g, &g, &qi(1), &cert).unwrap(), None);
    cert.psi[1] = Matrix::zero(1, 1, 2);
    let failure = verify_interleaving_certificate(&g, &g, &qi(1), &cert).unwrap().unwrap();
    assert!(matches!(failure, CertificateFailure::TriangleV(_)));
}

#[test]
fn translation_certificate_bounds_spectral_shift() {
    let pm = PersistenceModule::identity_chain(2, pts(&[0, 1, 2, 3, 4]), 1, true).unwrap();
    let g = GappedModule::from_chain(qi(1), &pm).unwrap();
    let pad = vec![1, 0, 0, 1, 0];
    let h = padded_translate(&g, &qi(1), &pad).unwrap();
    let r = RestrictionSequence::new(qi(1), qi(2), 0, 1).unwrap();
    let cert = translation_certificate(&g, &qi(1), &pad, &r).unwrap();
    let bound = stability_bound_check(&g, &h, &qi(2), &cert, &[1]).unwrap();
    assert!(bound.holds);
    assert_eq!(bound.difference, Some(Extended::Finite(qi(1))));
}

#[test]
fn cosphere_table() {
    let zero = ConstantContactHamiltonian::new(qi(0));
    for k in 0..=6u32 {
        let expected = SymbolicSlope::two_pi_times(qi(-((k as i64 + 1) / 2)));
        for theta in [SHModelClass::u(k), SHModelClass::au(k)] {
            let model = build_cosphere_model(3, 6, theta.degree(3)).unwrap();
            assert_eq!(contact_spectral_invariant(&model, &zero, theta).unwrap(), expected, "{theta}");
        }
    }
}

#[test]
fn full_suite_is_green() {
    let report = gapped_core::suite::run_suite(11, 60);
    assert!(report.passed(), "{report}");
}
