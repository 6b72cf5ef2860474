//! Intersection multiplicity of two curve germs at the origin.
//!
//! Computed as the vanishing order at 0 of the resultant eliminating y, after
//! a deterministic shear `x -> x + k*y` that puts the pair in general
//! position: distinct common zeros acquire distinct x-coordinates, both
//! leading y-coefficients become nonzero constants, and the only common zero
//! on the line x = 0 is the origin itself.

use num_traits::Zero;

use crate::error::Result;

use super::bipoly::{BiPoly, Var};
use super::gcd::gcd_bi;
use super::rat::Rat;
use super::resultant::resultant;
use super::unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionMult {
    Finite(u64),
    /// The two germs share a component through the origin.
    Infinite,
}

/// i_0(p, q); `Infinite` when p, q share a factor vanishing at the origin.
pub fn intersection_multiplicity_origin(
    p: &BiPoly<Rat>,
    q: &BiPoly<Rat>,
    ) -> Result<IntersectionMult> {
    assert!(!p.is_zero() && !q.is_zero(), "intersection of zero polynomial");
    // Quick exits: a germ not passing through the origin meets anything in
    // multiplicity zero.
    if !p.eval_origin().is_zero() || !q.eval_origin().is_zero() {
        return Ok(IntersectionMult::Finite(0));
    }
    let g = gcd_bi(p, q);
    if !g.is_constant() {
        if g.eval_origin().is_zero() {
            return Ok(IntersectionMult::Infinite);
        }
        // Shared factor away from the origin is a local unit: divide it out.
        let p2 = p.div_exact(&g).expect("gcd divides");
        let q2 = q.div_exact(&g).expect("gcd divides");
        return intersection_multiplicity_origin(&p2, &q2);
    }

    for k in 0..200i64 {
        let kc = Rat::from_integer(k.into());
        let ps = shear(p, &kc);
        let qs = shear(q, &kc);
        if !good_position(&ps) || !good_position(&qs) {
            continue;
        }
        // No common zero on the line x = 0 besides the origin: the gcd of the
        // restrictions to x = 0 must be c*y^m.
        let p0 = restrict_x0(&ps);
        let q0 = restrict_x0(&qs);
        let g0 = p0.gcd(&q0);
        if !is_monomial(&g0) {
            continue;
        }
        let r = resultant(&ps, &qs, Var::Y)?;
        debug_assert!(!r.is_zero());
        return Ok(IntersectionMult::Finite(r.order() as u64));
    }
    unreachable!("general-position shear exists for coprime inputs")
}

/// x -> x + k*y
fn shear(p: &BiPoly<Rat>, k: &Rat) -> BiPoly<Rat> {
    if k.is_zero() {
        return p.clone();
    }
    // substitute x = x + k y via Horner in x
    let coeffs = p.coeffs_in(Var::X);
    let mut acc = BiPoly::zero();
    let sub = BiPoly::from_terms([
        ((1u32, 0u32), Rat::from_integer(1.into())),
        ((0, 1), k.clone()),
    ]);
    for u in coeffs.iter().rev() {
        acc = acc.mul(&sub);
        acc = acc.add(&BiPoly::from_coeffs_in(Var::X, std::slice::from_ref(u)));
    }
    acc
}

/// Leading y-coefficient is a nonzero constant (degree in y realized by a
/// pure y-power).
fn good_position(p: &BiPoly<Rat>) -> bool {
    match p.deg_var(Var::Y) {
        None => false,
        Some(d) => {
            let lead = p.coeffs_in(Var::Y).pop().unwrap();
            let _ = d;
            lead.degree() == Some(0)
        }
    }
}

fn restrict_x0(p: &BiPoly<Rat>) -> UniPoly<Rat> {
    let coeffs = p.coeffs_in(Var::Y);
    UniPoly::new('y', coeffs.iter().map(|c| c.coeff(0)).collect())
}

fn is_monomial(u: &UniPoly<Rat>) -> bool {
    !u.is_zero() && u.coeffs().iter().filter(|c| !Zero::is_zero(*c)).count() == 1
}
