//! Hierarchical filtrations of split vector bundles at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf`]: prime fields and exact row reduction,
//! - [`picard`]: Picard lattices of a curve, P², blowups of P² and P¹×P¹,
//! - [`bundle`]: split bundles, determinants, slopes, Harder–Narasimhan types,
//! - [`depth`]: hierarchical depth formulas, bounds and filtration checks,
//! - [`hecke`]: elementary transforms of split bundles on P¹ over F_p,
//! - [`agcode`]: evaluation codes on P¹/P², exact minimum distance and
//!   contraction of exceptional evaluation points.

pub mod agcode;
pub mod bundle;
pub mod depth;
pub mod error;
pub mod gf;
pub mod hecke;
pub mod picard;

pub use bundle::{HnProfile, SplitBundle};
pub use depth::{Depth, HierFiltration, SurfaceDepth};
pub use error::{Error, Result};
pub use gf::{FMatrix, Field, FieldElement};
pub use picard::{DivisorClass, Lattice};

/// Exact rational numbers used for slopes and normalized distances.
pub type Rational = num_rational::Ratio<i64>;

/// Formats a rational as `num/den` (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn serialize_rational_opt<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}
