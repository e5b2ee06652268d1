//! λ-gapped persistence modules, barcodes, spectral invariants and a
//! symbolic model of contact Hamiltonian Floer directed systems.

pub mod bottleneck;
pub mod contact;
pub mod linalg;
pub mod matching;
pub mod gapped;
pub mod param;
pub mod persistence;
pub mod random;
pub mod suite;

pub use bottleneck::{bottleneck_distance, exhaustive_bottleneck};
pub use linalg::{FieldElement, LinalgError, Matrix, DEFAULT_MODULUS};
pub use param::{parse_rational, q, qi, Extended, Param, ParseParamError, Rational, SymbolicSlope};
pub use persistence::{
    brute_force_barcode, interleaving_distance, Appearance, Bar, Barcode, IndexSet, LimitKind, LimitSlot,
    PersistenceError, PersistenceModule, Slot,
};
pub use gapped::{
    comparable, identity_certificate, padded_translate, restriction_stability_report, stability_bound_check,
    structure_map_certificate, translation_certificate, verify_interleaving_certificate, CertificateFailure,
    Eternality, GappedError, GappedLimit, GappedModule, InterleavingCertificate, RestrictionSequence,
    RestrictionStabilityReport, StabilityBound,
};
pub use contact::{
    anti_spectral_invariant, build_cosphere_model, build_cosphere_model_with, contact_spectral_invariant,
    quasi_measure_eval, quasi_state_estimate, sh_product, spectral_axiom_report, ConstantContactHamiltonian,
    ContactError, CosphereFamily, CosphereOptions, FloerSystemModel, SHModelClass,
};
