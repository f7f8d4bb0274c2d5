//! Fullness certificates for the idempotent e_n of R SL_n(F_q).
//!
//! e_n averages over the derived subgroup D(U_n) of the unitriangular group.
//! A certificate is a list of triples (r, g, h) with sum r g e_n h = 1 in the
//! group algebra. Certificates are built level by level, serialized
//! canonically, and verified exactly over Z[1/p, zeta_p], Z[1/p] or a finite
//! field of characteristic prime to p. The [`oracle`] module checks fullness
//! independently by linear algebra over a finite field.

pub mod coeff_ring;
pub mod error;
pub mod exec;
pub mod finite_field;
pub mod group_algebra;
pub mod matrix_group;
pub mod oracle;
pub mod witness;

pub use coeff_ring::{CyclotomicValue, RationalZpValue, RingDescriptor, RingValue};
pub use error::{Error, Result};
pub use exec::Exec;
pub use finite_field::FieldSpec;
pub use group_algebra::{AlgebraContext, AlgebraElement};
pub use matrix_group::{EnumeratedGroup, FqMatrix, GroupKind, MatrixSpace, DEFAULT_CAP};
pub use witness::{WitnessCertificate, WitnessTerm};
