//! Euler characteristics of the local and global Milnor fibers from the
//! Milnor-number data (plane-curve case n = 2).

use crate::error::Result;
use crate::exact::bipoly::BiPoly;
use crate::exact::rat::Rat;
use crate::resolution::Side;

use super::milnor::{generic_member_mu, milnor_number, MilnorMethod};

/// chi of the local fiber at 0 or infinity: with n = 2 this is
/// -(mu(f) - mu_generic) on the zero side and -(mu(g) - mu_generic) at
/// infinity.
pub fn chi_local(f: &BiPoly<Rat>, g: &BiPoly<Rat>, side: Side) -> Result<i64> {
    let gm = generic_member_mu(f, g)?;
    let mu = match side {
        Side::Zero => milnor_number(f, MilnorMethod::Resultant)?,
        Side::Infinity => milnor_number(g, MilnorMethod::Resultant)?,
    };
    Ok(-(mu as i64 - gm.mu as i64))
}

/// chi of the global fiber: -(mu(f) + mu(g) - 2 mu_generic); equals the sum
/// of the two local values by construction.
pub fn chi_global(f: &BiPoly<Rat>, g: &BiPoly<Rat>) -> Result<i64> {
    let gm = generic_member_mu(f, g)?;
    let muf = milnor_number(f, MilnorMethod::Resultant)?;
    let mug = milnor_number(g, MilnorMethod::Resultant)?;
    let chi = -(muf as i64 + mug as i64 - 2 * gm.mu as i64);
    debug_assert_eq!(
        chi,
        chi_local(f, g, Side::Zero)? + chi_local(f, g, Side::Infinity)?
    );
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn short_example_values() {
        let f = p("x^3+y^2");
        let g = p("x^2+y^3");
        assert_eq!(chi_local(&f, &g, Side::Zero).unwrap(), -1);
        assert_eq!(chi_local(&f, &g, Side::Infinity).unwrap(), -1);
        assert_eq!(chi_global(&f, &g).unwrap(), -2);
    }

    #[test]
    fn hopf_is_trivial() {
        let f = p("x");
        let g = p("y");
        assert_eq!(chi_local(&f, &g, Side::Zero).unwrap(), 0);
        assert_eq!(chi_global(&f, &g).unwrap(), 0);
    }

    #[test]
    fn common_branch_precondition() {
        assert!(matches!(
            chi_global(&p("x^2+y^3"), &p("x^2+y^3")),
            Err(Error::CommonBranch)
        ));
    }

    #[test]
    fn additivity_across_corpus() {
        for (f, g) in [("x^3+y^2", "x^2+y^3"), ("x", "y"), ("x*y", "x^2+y^3-x*y")] {
            let f = p(f);
            let g = p(g);
            if let (Ok(c0), Ok(ci), Ok(cg)) = (
                chi_local(&f, &g, Side::Zero),
                chi_local(&f, &g, Side::Infinity),
                chi_global(&f, &g),
            ) {
                assert_eq!(cg, c0 + ci);
            }
        }
    }
}
