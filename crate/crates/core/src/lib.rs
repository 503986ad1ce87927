//! Homological invariants of projective monomial curves computed with
//! integer sumsets and monomial-ideal arithmetic.
//!
//! A curve `K[s^d, s^(d-a1) t^a1, ..., t^d]` is described by its degree `d`
//! and exponent set `G = {0, a1, ..., d}` ([`CurveSpec`]). From that the crate
//! computes the Macaulayfication, the Hartshorne-Rao module, the strict
//! Buchsbaum level, reduction numbers and the Castelnuovo-Mumford regularity,
//! and checks the classification of the family `M_r^n`.

pub mod bitset;
pub mod error;
pub mod family;
pub mod ideal;
pub mod invariants;
pub mod semigroup;

pub use error::{Error, Result};
pub use family::{family_curve, predict, verify_family, FamilyParams, Prediction, VerificationRow};
pub use ideal::{BoundedVerdict, MonomialIdeal};
pub use invariants::{classify, InvariantReport, Macaulayfication};
pub use semigroup::{make_curve, AffineSemigroup, CurveSpec, Monomial};
