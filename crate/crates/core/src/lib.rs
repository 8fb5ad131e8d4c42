//! Automorphism-invariant ring structures on finitely generated abelian groups, the regular
//! subgroups they describe, and the multiple holomorph quotient `T(G)`.
//!
//! - [`group`]: shapes, elements, the standard automorphisms.
//! - [`ring`]: ring tables, validation, the explicit families and a brute-force search.
//! - [`classify`]: `|T(G)|` with its case label.
//! - [`gamma`]: `gamma`, `nu` and the involution `theta`.
//! - [`oracle`]: permutation-group ground truth for small finite groups.

pub mod certificate;
pub mod classify;
pub mod gamma;
pub mod group;
pub mod oracle;
pub mod ring;

pub use certificate::{
    oracle_certificate, Certificate, CertificateMember, NormalizerSummary, CERTIFICATE_VERSION,
};
pub use classify::{classify, classify_with_k, CaseLabel, CaseReport};
pub use gamma::{
    f_by_recurrence, f_value, gamma_of, nu_permutation, ring_from_nu, theta, theta_permutation,
    verify_correspondence, CheckStatus, CorrespondenceOptions, CorrespondenceReport,
};
pub use group::{
    parse_group_descriptor, AutLabel, AutMap, Element, ElementOrder, Generator, GroupError,
    GroupShape, InvariantFactors, Torsion2Vector,
};
pub use ring::{
    brute_enumerate_tables, circle_invariant_factors, enumerate_rings, validate_ring, RingError,
    RingStructure,
};
