//! Integer lattices built from binary self-orthogonal codes by the
//! two-adic level construction (Construction C*), together with the finite
//! field, code and concatenation machinery that produces such codes and the
//! closed-form constants of the associated kissing-number bound.
//!
//! Module map:
//!
//! - [`finite_field`]: GF(2^m) tables, trace, self-dual bases.
//! - [`binary_codes`]: binary codes, weight distributions, self-orthogonality.
//! - [`outer_codes`]: generalized Reed–Solomon codes and rate thresholds.
//! - [`concatenation`]: outer/inner concatenation through a self-dual basis.
//! - [`lattice`]: span basis, membership, short vectors, closure probe.
//! - [`asymptotics`]: entropy, exponents and tower parameters.
//! - [`certify`]: the end-to-end pipeline and its JSON certificate.

pub mod asymptotics;
pub mod binary_codes;
pub mod certify;
pub mod concatenation;
pub mod corpus;
pub mod error;
pub mod finite_field;
pub mod lattice;
pub mod outer_codes;

pub use binary_codes::{BinaryCode, WeightDistribution};
pub use certify::{certify, emit, Certificate, CertifyOptions, Format};
pub use concatenation::{binary_expand_code, concat_build, ConcatSpec};
pub use error::{Error, Result};
pub use finite_field::{find_self_dual_basis, FieldTable, SelfDualBasis};
pub use lattice::{
    build_span_basis, enumerate_short, membership_set, membership_span, LatticeBasis,
    ShortVectorReport,
};
pub use outer_codes::GrsCode;
