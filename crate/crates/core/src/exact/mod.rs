//! Exact arithmetic foundation: arbitrary-precision rationals, univariate and
//! bivariate polynomials, factorization over the rationals, resultants, and
//! algebraic extension towers.

pub mod algnum;
pub mod bipoly;
pub mod factor_bi;
pub mod factor_uni;
pub mod gcd;
pub mod intersect;
pub mod parse;
pub mod rat;
pub mod resultant;
pub mod unipoly;
mod zp;

pub use algnum::{AlgNum, NumberField};
pub use bipoly::BiPoly;
pub use intersect::{intersection_multiplicity_origin, IntersectionMult};
pub use parse::parse_poly;
pub use rat::{Int, Rat};
pub use unipoly::{Coeff, UniPoly};

/// `factor_q(p)` decomposes `p` into irreducible factors over the rationals.
///
/// Returns `(unit, factors)` with each factor integer-primitive with positive
/// leading coefficient, sorted by (total degree, lexicographic coefficient
/// sequence), so that `unit * prod factor_i^exp_i == p` exactly.
pub fn factor_q(p: &BiPoly<Rat>) -> crate::error::Result<(Rat, Vec<(BiPoly<Rat>, u32)>)> {
    factor_bi::factor_bipoly(p)
}
